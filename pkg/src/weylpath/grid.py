"""Symmetric phase-space grid with delta-function-normalized states.

A grid of M = 2K+1 points with spacing eps = sqrt(2 pi / M) carries both the
coordinate and momentum samples x_l = p_l = l*eps for -K <= l <= K.  The
choice eps^2 = 2 pi / M makes the discrete transform between the two
representations exactly the symmetric-index unitary DFT, and the extent obeys

    K * eps = sqrt(M pi / 2) - sqrt(pi / (2 M)).

Amplitudes come in two conventions.  "Orthonormal" amplitudes are ordinary
basis coefficients with sum |a_l|^2 = 1 for a normalized state.
"Delta-normalized" values divide by sqrt(eps) so that eps * sum |psi_l|^2 is
the probability, mimicking continuum delta-normalized states.  A StateVector
stores orthonormal coefficients internally at all times and exposes the
delta-normalized values as a view, so switching conventions is exact (no
floating-point round trip).

Only odd M is supported: it puts an exact zero at the center of both the
coordinate and momentum samples, which the kernel phase reference relies on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .weyl_core import SYMMETRIC, WeylBasis, apply_fourier, apply_inverse_fourier

ORTHONORMAL = "orthonormal"
DELTA = "delta"


@dataclass(frozen=True)
class PhaseGrid:
    """Symmetric coordinate/momentum grid of M = 2K+1 points.

    Attributes
    ----------
    K : int
        Half-width; index values run -K..K.
    M : int
        Number of points, 2K+1.
    eps : float
        Grid spacing, sqrt(2 pi / M); also the quadrature weight.
    x, p : ndarray
        Coordinate and momentum samples, both l*eps.
    """

    K: int
    M: int = field(init=False)
    eps: float = field(init=False)
    x: np.ndarray = field(init=False, repr=False)
    p: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.K < 1:
            raise ValueError(f"need K >= 1, got K={self.K}")
        M = 2 * self.K + 1
        eps = np.sqrt(2.0 * np.pi / M)
        idx = np.arange(-self.K, self.K + 1)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "x", idx * eps)
        object.__setattr__(self, "p", idx * eps)

    @property
    def basis(self) -> WeylBasis:
        return WeylBasis(self.M, SYMMETRIC)

    def extent(self) -> float:
        """K * eps, the largest coordinate (and momentum) on the grid."""
        return self.K * self.eps


def make_grid(K: int) -> PhaseGrid:
    """Build the symmetric grid with half-width K (M = 2K+1 points)."""
    return PhaseGrid(K=K)


def mixed_overlap(grid: PhaseGrid, m: int, n: int) -> complex:
    """Overlap <p_m|x_n> = e^{-i p_m x_n} / sqrt(2 pi) of delta-normalized states.

    m and n are index values in -K..K.  The magnitude is always
    1/sqrt(2 pi), independent of the grid size.
    """
    pos_m = grid.basis.position(m)
    pos_n = grid.basis.position(n)
    return complex(np.exp(-1j * grid.p[pos_m] * grid.x[pos_n]) / np.sqrt(2.0 * np.pi))


@dataclass(frozen=True)
class StateVector:
    """Amplitudes over a grid (or bare basis) with a declared convention.

    ``amplitudes`` always holds orthonormal-basis coefficients; ``normconv``
    records which convention ``values()`` exposes.  ``rep`` says whether the
    coefficients live on the coordinate ("x") or momentum ("p") samples.
    """

    grid: PhaseGrid
    amplitudes: np.ndarray
    normconv: str = ORTHONORMAL
    rep: str = "x"

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.grid.M,):
            raise ValueError(f"amplitude array must have length M={self.grid.M}")
        if self.normconv not in (ORTHONORMAL, DELTA):
            raise ValueError(f"unknown normalization convention {self.normconv!r}")
        if self.rep not in ("x", "p"):
            raise ValueError(f"rep must be 'x' or 'p', got {self.rep!r}")
        object.__setattr__(self, "amplitudes", amps)

    def values(self) -> np.ndarray:
        """Amplitude values in the declared convention.

        Orthonormal: the stored coefficients.  Delta-normalized: the stored
        coefficients divided by sqrt(eps), i.e. psi(x_l) such that
        eps * sum |psi|^2 = sum |a|^2.
        """
        if self.normconv == DELTA:
            return self.amplitudes / np.sqrt(self.grid.eps)
        return self.amplitudes.copy()

    def as_convention(self, normconv: str) -> "StateVector":
        """Same state viewed in the other convention (exact, no rescaling)."""
        if normconv not in (ORTHONORMAL, DELTA):
            raise ValueError(f"unknown normalization convention {normconv!r}")
        if normconv == self.normconv:
            return self
        return StateVector(self.grid, self.amplitudes, normconv, self.rep)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def to_momentum(state: StateVector) -> StateVector:
    """Transform a coordinate-representation state to momentum coefficients.

    b = F a with F the symmetric-index unitary DFT; the inverse direction
    applies the conjugate.  Either way the stored coefficients stay
    orthonormal.
    """
    if state.rep == "p":
        return state
    b = apply_fourier(state.grid.basis, state.amplitudes)
    return StateVector(state.grid, b, state.normconv, "p")


def to_coordinate(state: StateVector) -> StateVector:
    if state.rep == "x":
        return state
    a = apply_inverse_fourier(state.grid.basis, state.amplitudes)
    return StateVector(state.grid, a, state.normconv, "x")
