"""Coupled-mode quartic field dynamics on the discrete phase grid.

A truncated field is a small number of real mode amplitudes
phi_0 .. phi_{F-1}, each living on the same symmetric grid.  The
Hamiltonian splits into a free part — one squared conjugate momentum per
mode — and a part diagonal in the amplitudes,

    V(phi) = (m^2/2) sum_n phi_n^2
             + sum_{mn} quadratic[m, n] phi_m phi_n
             + g * sum_{klmn} quartic[k, l, m, n] phi_k phi_l phi_m phi_n,

with the quadratic and quartic mode-coupling tables supplied by the
caller (``wavelet.overlap_tables`` builds them for scaling-function
modes).  Each Trotter step multiplies by the diagonal phase
e^{-i V(phi) dt} and then applies the free one-mode kernel along every
mode axis in turn, so the M^F x M^F evolution matrix is never formed.
State layout is row-major over modes: mode 0 is the slowest axis of the
flattened amplitude array.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .grid import PhaseGrid, make_grid
from .propagator import GuardError, StepKernel, free_step_kernel
from .weyl_core import fourier_matrix
from .wavelet import overlap_tables

SIZE_LIMIT = 10_000_000


def _guard_size(grid: PhaseGrid, modes: int) -> None:
    if grid.M**modes > SIZE_LIMIT:
        raise GuardError(
            f"field state with {grid.M}^{modes} amplitudes exceeds the "
            f"{SIZE_LIMIT:,}-amplitude limit"
        )


@dataclass(frozen=True)
class FieldConfig:
    """Everything the two coupled-mode demos need in one place.

    ``quadratic`` is the F x F mode-coupling table entering as a full
    double sum (diagonal included, both orderings of each off-diagonal
    pair); ``quartic`` the fully permutation-symmetric rank-4 table
    scaled by ``lam``.  ``means``/``widths`` parametrize the initial
    Gaussian product packet, one pair per mode.
    """

    grid: PhaseGrid
    mass_sq: float
    lam: float
    quadratic: np.ndarray
    quartic: np.ndarray
    steps: int
    total_time: float
    means: tuple[float, ...]
    widths: tuple[float, ...]

    def __post_init__(self):
        f = len(self.means)
        if f < 1:
            raise ValueError("need at least one mode")
        if len(self.widths) != f:
            raise ValueError("means and widths must pair up, one per mode")
        if any(w <= 0 for w in self.widths):
            raise ValueError("packet widths must be positive")
        if self.steps < 1:
            raise ValueError("need at least one step")
        if self.quadratic.shape != (f, f):
            raise ValueError(f"quadratic table must be {f}x{f}")
        if not np.array_equal(self.quadratic, self.quadratic.T):
            raise ValueError("quadratic table must be symmetric")
        if self.quartic.shape != (f,) * 4:
            raise ValueError(f"quartic table must be {f}^4")
        for perm in itertools.permutations(range(4)):
            if not np.array_equal(self.quartic, np.transpose(self.quartic, perm)):
                raise ValueError("quartic table must be symmetric under all index permutations")

    @property
    def modes(self) -> int:
        """Number of kept field modes."""
        return len(self.means)

    @property
    def dt(self) -> float:
        return self.total_time / self.steps


@dataclass(frozen=True)
class FieldState:
    """Flat complex amplitudes over the M^F grid of mode-value tuples.

    C-order over the mode axes: the amplitude for values
    (x[i_0], ..., x[i_{F-1}]) sits at flat index
    i_0 * M^{F-1} + ... + i_{F-1}.
    """

    grid: PhaseGrid
    modes: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.modes < 1:
            raise ValueError("need at least one mode")
        if self.amplitudes.shape != (self.grid.M**self.modes,):
            raise ValueError(
                f"expected {self.grid.M ** self.modes} amplitudes, "
                f"got shape {self.amplitudes.shape}"
            )

    def shaped(self) -> np.ndarray:
        """The amplitudes as an F-dimensional array, one axis per mode."""
        return self.amplitudes.reshape((self.grid.M,) * self.modes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _axis_values(grid: PhaseGrid, modes: int, axis: int) -> np.ndarray:
    """Grid values broadcast along one mode axis of the M^F array."""
    shape = [1] * modes
    shape[axis] = grid.M
    return grid.x.reshape(shape)


def potential_samples(config: FieldConfig) -> np.ndarray:
    """The diagonal part of the Hamiltonian at every grid tuple, flat.

    Mass, quadratic-table, and quartic-table sums are all taken literally
    over every index tuple; nothing is folded or halved.
    """
    _guard_size(config.grid, config.modes)
    f = config.modes
    phi = [_axis_values(config.grid, f, a) for a in range(f)]
    out = np.zeros((config.grid.M,) * f)
    for n in range(f):
        out = out + 0.5 * config.mass_sq * phi[n] ** 2
    for m in range(f):
        for n in range(f):
            c = config.quadratic[m, n]
            if c != 0.0:
                out = out + c * phi[m] * phi[n]
    if config.lam != 0.0:
        for idx in np.ndindex((f,) * 4):
            c = config.quartic[idx]
            if c != 0.0:
                k, l, m, n = idx
                out = out + (config.lam * c) * (phi[k] * phi[l] * phi[m] * phi[n])
    return out.reshape(-1)


def free_field_kernel(config: FieldConfig, dt: float | None = None) -> StepKernel:
    """One-mode free kernel with kinetic samples p^2/2.

    The full free step is the F-fold tensor power of this kernel; it is
    applied one axis at a time (``apply_field_kernel``) rather than
    materialized.  ``dt`` defaults to the configured Trotter step.
    """
    _guard_size(config.grid, config.modes)
    if dt is None:
        dt = config.dt
    return free_step_kernel(config.grid.basis, config.grid.p**2 / 2.0, dt)


def _apply_axiswise(matrix: np.ndarray, arr: np.ndarray) -> np.ndarray:
    # same M x M matrix down every axis; BLAS parallelizes over the
    # complementary-axis block, and the axis order is fixed, so results
    # are deterministic
    m = matrix.shape[0]
    for axis in range(arr.ndim):
        moved = np.moveaxis(arr, axis, 0)
        arr = np.moveaxis((matrix @ moved.reshape(m, -1)).reshape(moved.shape), 0, axis)
    return arr


def apply_field_kernel(kernel: StepKernel, state: FieldState) -> FieldState:
    """Apply an M x M one-mode kernel along every mode axis of the state."""
    out = _apply_axiswise(kernel.matrix, state.shaped().astype(complex))
    return FieldState(state.grid, state.modes, out.reshape(-1))


def initial_field_packet(config: FieldConfig) -> FieldState:
    """Unit-norm real Gaussian product state, one factor per mode.

    Factor n is e^{-(phi - means[n])^2 / (4 widths[n]^2)} on the grid,
    normalized; the product structure is exact by construction.
    """
    _guard_size(config.grid, config.modes)
    x = config.grid.x
    factors = []
    for mean, width in zip(config.means, config.widths):
        g = np.exp(-((x - mean) ** 2) / (4.0 * width**2))
        factors.append(g / np.linalg.norm(g))
    arr = factors[0]
    for g in factors[1:]:
        arr = np.multiply.outer(arr, g)
    return FieldState(config.grid, config.modes, arr.reshape(-1).astype(complex))


def evolve_fields(config: FieldConfig, state: FieldState) -> FieldState:
    """N alternating Trotter steps: diagonal phase e^{-i V(phi) dt}, then
    the free kernel down every mode axis.  Each factor is unitary, so the
    norm is preserved to rounding."""
    _guard_size(config.grid, config.modes)
    if state.grid.M != config.grid.M or state.modes != config.modes:
        raise ValueError("state and config disagree on grid size or mode count")
    phase = np.exp(-1j * config.dt * potential_samples(config)).reshape(
        (config.grid.M,) * config.modes
    )
    kernel = free_field_kernel(config)
    arr = state.shaped().astype(complex)
    for _ in range(config.steps):
        arr = _apply_axiswise(kernel.matrix, phase * arr)
    return FieldState(config.grid, config.modes, arr.reshape(-1))


def coordinate_marginal(state: FieldState, mode: int) -> np.ndarray:
    """Probability distribution of one mode's amplitude, others traced out."""
    prob = np.abs(state.shaped()) ** 2
    axes = tuple(a for a in range(state.modes) if a != mode)
    return prob.sum(axis=axes) if axes else prob


def momentum_marginal(state: FieldState, mode: int) -> np.ndarray:
    """Probability distribution of one mode's conjugate momentum."""
    moved = np.moveaxis(state.shaped(), mode, 0)
    transformed = fourier_matrix(state.grid.basis) @ moved.reshape(state.grid.M, -1)
    return (np.abs(transformed) ** 2).sum(axis=1)


def origin_slice(state: FieldState, mode: int) -> np.ndarray:
    """Amplitudes along one mode axis with every other mode pinned at 0."""
    if not 0 <= mode < state.modes:
        raise ValueError(f"mode must be in 0..{state.modes - 1}")
    idx: list = [state.grid.basis.position(0)] * state.modes
    idx[mode] = slice(None)
    return state.shaped()[tuple(idx)].copy()


def demo_config(
    K: int = 20, steps: int = 20, total_time: float = 0.5
) -> FieldConfig:
    """The two-mode reference run: scaling-function coupling tables for
    adjacent modes, unit mass-squared and quartic coupling, and a
    displaced Gaussian product start (means and widths 0.5)."""
    tables = overlap_tables((0, 1))
    return FieldConfig(
        grid=make_grid(K),
        mass_sq=1.0,
        lam=1.0,
        quadratic=tables.derivative,
        quartic=tables.quartic,
        steps=steps,
        total_time=total_time,
        means=(0.5, 0.5),
        widths=(0.5, 0.5),
    )
