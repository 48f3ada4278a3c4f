"""Finite shift/clock (Weyl) pair on an M-dimensional Hilbert space.

The two unitaries are a cyclic shift U and a diagonal clock V,

    U|k> = |k+1 mod M>,        V|k> = e^{2 pi i k / M} |k>,

which obey U V = V U e^{-2 pi i / M}, U^M = V^M = 1.  The eigenvectors of U
form the discrete Fourier basis; overlaps between the two eigenbases all have
magnitude 1/sqrt(M), so the pair is maximally complementary.  This module
provides the dense operators, the Fourier basis (dense and FFT-accelerated),
the expansion of an arbitrary operator in shift/clock monomials, and the
factorization of the M = 2^L case into per-qbit gates.

Index labels may run 0..M-1 ("zero-based") or -K..K ("symmetric", M = 2K+1
odd); the symmetric convention is what the phase-space grid module uses.  All
operators here are plain complex ndarrays in the clock eigenbasis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ZERO_BASED = "zero-based"
SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class WeylBasis:
    """Dimension and index-labeling convention for one shift/clock pair.

    Parameters
    ----------
    M : int
        Hilbert-space dimension, at least 2.
    labeling : str
        ``"zero-based"`` for indices 0..M-1 or ``"symmetric"`` for -K..K
        (requires odd M = 2K+1).
    """

    M: int
    labeling: str = ZERO_BASED

    def __post_init__(self):
        if self.M < 2:
            raise ValueError(f"need M >= 2, got M={self.M}")
        if self.labeling not in (ZERO_BASED, SYMMETRIC):
            raise ValueError(f"unknown labeling {self.labeling!r}")
        if self.labeling == SYMMETRIC and self.M % 2 == 0:
            raise ValueError("symmetric labeling requires odd M = 2K+1")

    @property
    def K(self) -> int:
        """Half-width of the symmetric index range."""
        if self.labeling != SYMMETRIC:
            raise ValueError("K is only defined for symmetric labeling")
        return (self.M - 1) // 2

    def indices(self) -> np.ndarray:
        """Index values in array order (0..M-1 or -K..K)."""
        if self.labeling == SYMMETRIC:
            return np.arange(-self.K, self.K + 1)
        return np.arange(self.M)

    def position(self, n: int) -> int:
        """Array position of index value ``n`` (raises if out of range)."""
        lo = -self.K if self.labeling == SYMMETRIC else 0
        pos = int(n) - lo
        if not 0 <= pos < self.M:
            raise IndexError(f"index {n} outside range of {self.labeling} basis with M={self.M}")
        return pos


def build_shift_U(basis: WeylBasis) -> np.ndarray:
    """Cyclic shift matrix: maps basis column e_j to e_{j+1 mod M}."""
    U = np.zeros((basis.M, basis.M), dtype=complex)
    for j in range(basis.M):
        U[(j + 1) % basis.M, j] = 1.0
    return U


def build_clock_V(basis: WeylBasis) -> np.ndarray:
    """Diagonal clock matrix diag(e^{2 pi i n / M}) over the index values."""
    n = basis.indices()
    return np.diag(np.exp(2j * np.pi * n / basis.M))


def fourier_matrix(basis: WeylBasis) -> np.ndarray:
    """Unitary DFT between the clock and shift eigenbases.

    Entry [k, n] = e^{-2 pi i n k / M} / sqrt(M), with k and n running over
    the basis index values.  Column n is the shift eigenvector with
    eigenvalue e^{2 pi i n / M}.  The matrix is symmetric, so its inverse is
    its elementwise conjugate.
    """
    idx = basis.indices()
    phase = np.exp(-2j * np.pi * np.outer(idx, idx) / basis.M)
    return phase / np.sqrt(basis.M)


def fourier_column(basis: WeylBasis, n: int) -> np.ndarray:
    """Shift eigenvector |u_n> as an amplitude column (unit norm).

    Component k is e^{-2 pi i n k / M} / sqrt(M); every component has
    magnitude 1/sqrt(M).
    """
    basis.position(n)  # range check
    k = basis.indices()
    return np.exp(-2j * np.pi * n * k / basis.M) / np.sqrt(basis.M)


def apply_fourier(basis: WeylBasis, vec: np.ndarray) -> np.ndarray:
    """Fast product fourier_matrix(basis) @ vec via the FFT.

    For symmetric labeling the symmetric-index transform is folded onto the
    standard zero-based FFT with boundary phases:

        F_sym = e^{-2 pi i K^2 / M} D F0 D,   D = diag(e^{+2 pi i K a / M})

    where F0 is the unitary zero-based DFT and a is the array position.
    Agrees with the dense matrix to ~1e-13; tests enforce 1e-11.
    """
    vec = np.asarray(vec, dtype=complex)
    if basis.labeling == ZERO_BASED:
        return np.fft.fft(vec, norm="ortho")
    K, M = basis.K, basis.M
    d = np.exp(2j * np.pi * K * np.arange(M) / M)
    c = np.exp(-2j * np.pi * K * K / M)
    return c * d * np.fft.fft(d * vec, norm="ortho")


def apply_inverse_fourier(basis: WeylBasis, vec: np.ndarray) -> np.ndarray:
    """Fast product fourier_matrix(basis)^dagger @ vec via the inverse FFT."""
    vec = np.asarray(vec, dtype=complex)
    if basis.labeling == ZERO_BASED:
        return np.fft.ifft(vec, norm="ortho")
    K, M = basis.K, basis.M
    d = np.exp(-2j * np.pi * K * np.arange(M) / M)
    c = np.exp(2j * np.pi * K * K / M)
    return c * d * np.fft.ifft(d * vec, norm="ortho")


# ---------------------------------------------------------------------------
# operator expansion in shift/clock monomials


@dataclass(frozen=True)
class WeylCoefficients:
    """Expansion coefficients of an operator in shift/clock monomials.

    ``ordering="UV"`` means O = sum_{mn} c[m, n] U^m V^n; ``"VU"`` means
    O = sum_{mn} c[m, n] V^m U^n.  Array positions follow the basis index
    values (exponents are taken mod M, so the value range is cosmetic).
    """

    basis: WeylBasis
    c: np.ndarray
    ordering: str = "UV"

    def __post_init__(self):
        if self.ordering not in ("UV", "VU"):
            raise ValueError(f"ordering must be 'UV' or 'VU', got {self.ordering!r}")
        if self.c.shape != (self.basis.M, self.basis.M):
            raise ValueError("coefficient array must be M x M")


def weyl_decompose(op: np.ndarray, basis: WeylBasis, ordering: str = "UV") -> WeylCoefficients:
    """Expand a dense operator in shift/clock monomials.

    For the UV ordering the matrix element <a|U^m V^n|b> equals
    e^{2 pi i n nu_b / M} delta_{a, b+m}, with nu_b the index VALUE at array
    position b (nu_b = b for zero-based, b - K for symmetric), so the
    coefficient of U^d V^n is the inverse DFT of the d-th cyclic diagonal of
    the operator, dephased by the labeling offset:

        c[d, n] = (1/M) sum_b O[(b+d) mod M, b] e^{-2 pi i n nu_b / M}.

    The VU ordering works the same way with the phase read off the output
    index a = b + d.  Exponent pairs (m, n) are stored at array positions
    0..M-1; powers are mod M so that range is exhaustive.
    """
    M = basis.M
    op = np.asarray(op, dtype=complex)
    if op.shape != (M, M):
        raise ValueError(f"operator must be {M}x{M}")
    rows = np.arange(M)
    lo = int(basis.indices()[0])  # 0 or -K
    c = np.zeros((M, M), dtype=complex)
    if ordering == "UV":
        off = np.exp(-2j * np.pi * rows * lo / M)
        for d in range(M):
            diag = op[(rows + d) % M, rows]          # O_{b+d, b} as a function of b
            c[d, :] = np.fft.fft(diag) / M * off      # (1/M) sum_b diag_b e^{-2pi i n nu_b / M}
    elif ordering == "VU":
        # <a|V^m U^n|b> = e^{2 pi i m nu_a / M} delta_{a, b+n}; on the d-th
        # cyclic diagonal nu_a = b + d + lo up to multiples of M, so the
        # b-transform picks up a phase e^{-2 pi i m (d + lo) / M} in m
        for d in range(M):
            diag = op[(rows + d) % M, rows]
            c[:, d] = np.fft.fft(diag) / M * np.exp(-2j * np.pi * rows * (d + lo) / M)
    else:
        raise ValueError(f"ordering must be 'UV' or 'VU', got {ordering!r}")
    return WeylCoefficients(basis=basis, c=c, ordering=ordering)


def weyl_reconstruct(coeffs: WeylCoefficients) -> np.ndarray:
    """Dense operator sum c[m, n] U^m V^n (or V^m U^n per ordering)."""
    M = coeffs.basis.M
    rows = np.arange(M)
    lo = int(coeffs.basis.indices()[0])
    op = np.zeros((M, M), dtype=complex)
    if coeffs.ordering == "UV":
        off = np.exp(2j * np.pi * rows * lo / M)
        for d in range(M):
            # sum_n c[d, n] e^{2 pi i n nu_b / M} along the d-th cyclic diagonal
            diag = np.fft.ifft(coeffs.c[d, :] * off) * M
            op[(rows + d) % M, rows] += diag
    else:
        for d in range(M):
            diag = np.fft.ifft(coeffs.c[:, d] * np.exp(2j * np.pi * rows * (d + lo) / M)) * M
            op[(rows + d) % M, rows] += diag
    return op


# ---------------------------------------------------------------------------
# qbit factorization for M = 2^L

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class QbitFactorization:
    """Per-qbit shift/clock gates for an M = 2^L space.

    Site m (1-based) carries bit m-1 of the index, so the composite label is
    n = sum_m n_m 2^{m-1}.  Each site's shift acts on its own bit mod 2
    (sigma_1) and each site's clock is the +/-1 phase on that bit (sigma_3):
    the composite monomials

        u_monomial(n) = prod_m U_m^{n_m},   v_monomial(n) = prod_m V_m^{n_m}

    are tensor products of single-site gates.  Composite shifts act bitwise
    (no carries): u_monomial(n) maps |k> to |k XOR n>.
    """

    L: int
    gates: tuple = field(repr=False, default=())

    def __post_init__(self):
        if self.L < 1:
            raise ValueError("need at least one qbit")
        if not self.gates:
            object.__setattr__(self, "gates", tuple((SIGMA1, SIGMA3) for _ in range(self.L)))

    @property
    def M(self) -> int:
        return 2 ** self.L

    def _monomial(self, n: int, which: int) -> np.ndarray:
        if not 0 <= n < self.M:
            raise IndexError(f"n={n} outside 0..{self.M - 1}")
        out = np.ones((1, 1), dtype=complex)
        # kron builds most-significant site first; site m holds bit m-1
        for m in range(self.L, 0, -1):
            gate = self.gates[m - 1][which] if (n >> (m - 1)) & 1 else np.eye(2, dtype=complex)
            out = np.kron(out, gate)
        return out

    def u_monomial(self, n: int) -> np.ndarray:
        """Dense tensor product of per-site shifts selected by the bits of n."""
        return self._monomial(n, 0)

    def v_monomial(self, n: int) -> np.ndarray:
        """Dense tensor product of per-site clocks selected by the bits of n."""
        return self._monomial(n, 1)


def qbit_factorize(L: int) -> QbitFactorization:
    """Per-site (sigma_1, sigma_3) gate list for an M = 2^L space."""
    return QbitFactorization(L=L)


def bitwise_shift_dense(L: int, n: int) -> np.ndarray:
    """Independent dense reference for u_monomial: |k> -> |k XOR n>."""
    M = 2 ** L
    out = np.zeros((M, M), dtype=complex)
    for k in range(M):
        out[k ^ n, k] = 1.0
    return out


def bitwise_clock_dense(L: int, n: int) -> np.ndarray:
    """Independent dense reference for v_monomial: diag((-1)^{popcount(n & k)})."""
    M = 2 ** L
    k = np.arange(M)
    signs = np.array([(-1.0) ** bin(n & kk).count("1") for kk in k], dtype=complex)
    return np.diag(signs)


# ---------------------------------------------------------------------------


def transition_probability(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 / (<a|a><b|b>) for two amplitude arrays.

    Invariant under rescaling or rephasing either argument.  Raises on a
    zero vector.
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    na = np.vdot(a, a).real
    nb = np.vdot(b, b).real
    if na == 0.0 or nb == 0.0:
        raise ValueError("transition probability undefined for a zero vector")
    return float(abs(np.vdot(a, b)) ** 2 / (na * nb))
