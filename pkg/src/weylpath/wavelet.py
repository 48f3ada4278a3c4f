"""Compactly supported orthonormal scaling functions (six-tap filter).

The scaling function s(x) solves the two-scale refinement equation

    s(x) = sqrt(2) * sum_l h_l s(2x - l),    l = 0..5,

with the classic six closed-form filter taps; s is supported on [0, 5],
integrates to 1, and its integer translates are orthonormal.  Because the
equation relates values at x to values at 2x - l, the function and its
derivative are computable EXACTLY at every dyadic rational: integer-point
values come from eigenvectors of the refinement matrix, and each halving of
the mesh is one application of the equation.  No quadrature enters until an
overlap integral is requested.

Overlap tables for the field Hamiltonian:

* quartic overlaps of translates (rank-4 tensor) by trapezoid sums on the
  dyadic mesh, verified by doubling the mesh;
* derivative overlaps by an exact route — the refinement equation closes on
  the integer-point values of the derivative-overlap function, so a 9x9
  eigenproblem plus a moment normalization yields exact rationals (the
  trapezoid estimate converges too slowly for these: the derivative is only
  Holder continuous).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SUPPORT = 5  # s lives on [0, 5]
MAX_LEVEL = 16


@dataclass(frozen=True)
class RefinementCoefficients:
    """The six filter taps h_0..h_5."""

    h: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        if h.shape != (6,):
            raise ValueError("need exactly six taps")
        object.__setattr__(self, "h", h)


@dataclass(frozen=True)
class DyadicSamples:
    """Function values on the dyadic mesh {n / 2^level} covering [0, 5].

    ``values[i]`` is the sample at x[i] = i / 2^level; ``derivatives`` is
    None for samples (like the mother wavelet) built without them.
    """

    level: int
    x: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray | None = None

    @property
    def dx(self) -> float:
        return 1.0 / (1 << self.level)


def daubechies_h() -> RefinementCoefficients:
    """Closed-form six-tap filter.

    h = [1+a+b, 5+a+3b, 10-2a+2b, 10-2a-2b, 5+a-3b, 1+a-b] / (16 sqrt 2)
    with a = sqrt(10), b = sqrt(5 + 2 sqrt(10)).  Sums to sqrt(2); shifted
    self-overlaps sum_l h_l h_{l-2k} vanish for k != 0.
    """
    a = np.sqrt(10.0)
    b = np.sqrt(5.0 + 2.0 * a)
    h = np.array(
        [1 + a + b, 5 + a + 3 * b, 10 - 2 * a + 2 * b, 10 - 2 * a - 2 * b, 5 + a - 3 * b, 1 + a - b]
    )
    return RefinementCoefficients(h / (16.0 * np.sqrt(2.0)))


def _interior_eigenvector(h: np.ndarray, eigenvalue: float) -> np.ndarray:
    """Eigenvector of the 4x4 interior refinement matrix T[a,b] = sqrt(2) h_{2a-b}.

    a, b run over the interior integers 1..4 of the support; s(0) = s(5) = 0.
    """
    T = np.zeros((4, 4))
    for ai, a in enumerate(range(1, 5)):
        for bi, b in enumerate(range(1, 5)):
            l = 2 * a - b
            if 0 <= l <= 5:
                T[ai, bi] = np.sqrt(2.0) * h[l]
    w, v = np.linalg.eig(T)
    i = int(np.argmin(np.abs(w - eigenvalue)))
    if abs(w[i] - eigenvalue) > 1e-10:
        raise ArithmeticError(
            f"refinement matrix has no eigenvalue near {eigenvalue}; spectrum {np.sort(w)}"
        )
    vec = np.real(v[:, i])
    return vec


@lru_cache(maxsize=None)
def _integer_values() -> tuple[np.ndarray, np.ndarray]:
    """(s, s') at the integers 0..5.

    s is fixed by sum_n s(n) = 1 (constant reproduction); s' by
    sum_n n s'(n) = -1 (differentiated linear reproduction).
    """
    h = daubechies_h().h
    s = np.zeros(6)
    s[1:5] = _interior_eigenvector(h, 1.0)
    s /= s.sum()
    ds = np.zeros(6)
    ds[1:5] = _interior_eigenvector(h, 0.5)
    ds /= -(np.arange(6) * ds).sum()
    return s, ds


def scaling_on_dyadics(level: int) -> DyadicSamples:
    """Exact values and derivatives of s on the mesh {n / 2^level, 0 <= n <= 5*2^level}.

    Integer points from the eigenvector constructions; each refinement to a
    finer mesh copies the even points and fills the odd points with
    s(x) = sqrt(2) sum_l h_l s(2x - l); the derivative picks up an extra
    factor 2 per application.
    """
    if not 0 <= level <= MAX_LEVEL:
        raise ValueError(f"level must be in 0..{MAX_LEVEL}")
    h = daubechies_h().h
    s, ds = _integer_values()
    for j in range(1, level + 1):
        n_prev = s.size
        n_new = 2 * (n_prev - 1) + 1
        s_new = np.zeros(n_new)
        ds_new = np.zeros(n_new)
        s_new[0::2] = s
        ds_new[0::2] = ds
        # odd index i on the new mesh: x = i / 2^j, and 2x - l sits on the
        # previous mesh at index 2i - l*2^j ... in previous-mesh units:
        # (2x - l) * 2^{j-1} = i - l*2^{j-1}
        half = 1 << (j - 1)
        for i in range(1, n_new, 2):
            acc = 0.0
            acc_d = 0.0
            for l in range(6):
                k = i - l * half
                if 0 <= k < n_prev:
                    acc += h[l] * s[k]
                    acc_d += h[l] * ds[k]
            s_new[i] = np.sqrt(2.0) * acc
            ds_new[i] = 2.0 * np.sqrt(2.0) * acc_d
        s, ds = s_new, ds_new
    x = np.arange(s.size) / (1 << level)
    return DyadicSamples(level=level, x=x, values=s, derivatives=ds)


def mother_wavelet_on_dyadics(level: int) -> DyadicSamples:
    """Mother wavelet w(x) = sqrt(2) sum_l (-1)^l h_{5-l} s(2x - l) on the dyadic mesh.

    Same support [0, 5]; integrates to 0 and is orthogonal to every integer
    translate of s.  Evaluating at mesh level j only ever reads s at mesh
    level j (the argument 2x - l lands on the coarser half-mesh).
    """
    if not 0 <= level <= MAX_LEVEL:
        raise ValueError(f"level must be in 0..{MAX_LEVEL}")
    h = daubechies_h().h
    s = scaling_on_dyadics(level)
    n = s.values.size
    scale = 1 << level
    w = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for l in range(6):
            k = 2 * i - l * scale
            if 0 <= k < n:
                acc += (-1.0) ** l * h[5 - l] * s.values[k]
        w[i] = np.sqrt(2.0) * acc
    return DyadicSamples(level=level, x=s.x, values=w)


def refinement_residual(samples: DyadicSamples) -> float:
    """max |s(x) - sqrt(2) sum_l h_l s(2x - l)| over the stored mesh."""
    h = daubechies_h().h
    s = samples.values
    n = s.size
    scale = 1 << samples.level
    worst = 0.0
    for i in range(n):
        acc = 0.0
        for l in range(6):
            k = 2 * i - l * scale
            if 0 <= k < n:
                acc += h[l] * s[k]
        worst = max(worst, abs(s[i] - np.sqrt(2.0) * acc))
    return worst


# ---------------------------------------------------------------------------
# overlap tables


def _trapezoid(y: np.ndarray, dx: float) -> float:
    return float((y.sum() - 0.5 * (y[0] + y[-1])) * dx)


def _translates_on_common_mesh(vals: np.ndarray, level: int, shifts: tuple[int, ...]) -> np.ndarray:
    """Stack samples of s(x - t) for t in shifts, on one mesh covering all supports."""
    lo, hi = min(shifts), max(shifts) + SUPPORT
    npts = (hi - lo) * (1 << level) + 1
    out = np.zeros((len(shifts), npts))
    width = vals.size
    for row, t in enumerate(shifts):
        start = (t - lo) * (1 << level)
        out[row, start : start + width] = vals
    return out


@lru_cache(maxsize=None)
def derivative_overlap_integers() -> np.ndarray:
    """Exact integrals of s'(x) s'(x - n) for n = -4..4, as a length-9 array.

    The overlap function r(y) = integral s'(x) s'(x - y) dx inherits a
    two-scale equation r(n) = 4 sum_d A(d) r(2n - d) with
    A(d) = sum_m h_m h_{m+d}, which closes on the integer points: r is the
    eigenvalue-1 eigenvector of the 9x9 matrix B[n, n'] = 4 A(2n - n').
    The scale is fixed by the second-moment identity sum_n n^2 r(n) = -2
    (differentiate the degree-2 polynomial reproduction twice); the zeroth
    and first moments of the eigenvector vanish automatically.  The entries
    are exact rationals, e.g. r(0) = 295/56 and r(1) = -356/105.
    """
    h = daubechies_h().h
    A = {}
    for d in range(-5, 6):
        acc = 0.0
        for m in range(6):
            if 0 <= m + d <= 5:
                acc += h[m] * h[m + d]
        A[d] = acc
    ns = np.arange(-4, 5)
    B = np.zeros((9, 9))
    for i, n in enumerate(ns):
        for jj, npr in enumerate(ns):
            d = 2 * n - npr
            if -5 <= d <= 5:
                B[i, jj] = 4.0 * A[d]
    w, v = np.linalg.eig(B)
    i = int(np.argmin(np.abs(w - 1.0)))
    if abs(w[i] - 1.0) > 1e-10:
        raise ArithmeticError("derivative-overlap recursion has no fixed point")
    r = np.real(v[:, i])
    r = 0.5 * (r + r[::-1])  # the overlap is an even function of the separation
    r = r / (ns.astype(float) ** 2 @ r) * -2.0
    return r


@dataclass(frozen=True)
class OverlapTables:
    """Overlap integrals of scaling-function translates for a mode set.

    ``derivative[i, j]`` is the first-derivative overlap for modes[i],
    modes[j] (exact rationals via the recursion route);
    ``quartic[i, j, k, l]`` the four-factor product overlap by trapezoid
    with ``quadrature_points`` samples per unit length.  ``gamma_shift``
    records the largest change in any quartic entry when the mesh is
    doubled — the convergence check.
    """

    modes: tuple[int, ...]
    derivative: np.ndarray
    quartic: np.ndarray
    quadrature_points: int
    gamma_shift: float

    @property
    def converged(self) -> bool:
        return self.gamma_shift < 1e-5


def _gamma_entry(vals: np.ndarray, level: int, multiset: tuple[int, ...]) -> float:
    rows = _translates_on_common_mesh(vals, level, multiset)
    return _trapezoid(rows[0] * rows[1] * rows[2] * rows[3], 1.0 / (1 << level))


def overlap_tables(modes: tuple[int, ...] = (0, 1), quadrature_points: int = 256) -> OverlapTables:
    """Build the quadratic-derivative and quartic overlap tables.

    ``quadrature_points`` is the number of mesh points per unit length and
    must be a power of two (the mesh is dyadic).  Each distinct quartic
    integral is computed once per sorted, translation-reduced index
    multiset and fanned out to all permutations, so the tensor's full
    permutation symmetry is exact by construction.  Raises if doubling the
    mesh moves any entry by more than 1e-4.
    """
    modes = tuple(int(m) for m in modes)
    if len(modes) == 0:
        raise ValueError("need at least one mode")
    if quadrature_points < 2 or quadrature_points & (quadrature_points - 1):
        raise ValueError("quadrature_points must be a power of two")
    level = int(quadrature_points).bit_length() - 1

    r = derivative_overlap_integers()
    nmodes = len(modes)
    deriv = np.zeros((nmodes, nmodes))
    for i, m in enumerate(modes):
        for j, n in enumerate(modes):
            if abs(m - n) <= 4:
                deriv[i, j] = r[(m - n) + 4]

    fine = scaling_on_dyadics(level + 1)
    coarse_vals = fine.values[0::2]

    # one integral per translation-reduced sorted multiset, at both meshes
    cache: dict[tuple[int, ...], tuple[float, float]] = {}

    def entry(multiset: tuple[int, ...]) -> tuple[float, float]:
        base = min(multiset)
        key = tuple(sorted(m - base for m in multiset))
        if key not in cache:
            cache[key] = (
                _gamma_entry(coarse_vals, level, key),
                _gamma_entry(fine.values, level + 1, key),
            )
        return cache[key]

    quartic = np.zeros((nmodes,) * 4)
    shift = 0.0
    for idx in np.ndindex(*quartic.shape):
        ms = tuple(modes[i] for i in idx)
        if max(ms) - min(ms) > 4:
            continue
        val, val_fine = entry(ms)
        quartic[idx] = val
        shift = max(shift, abs(val - val_fine))
    if shift > 1e-4:
        raise ArithmeticError(
            f"quartic overlaps moved by {shift:.2e} when the mesh doubled; not converged"
        )
    return OverlapTables(
        modes=modes,
        derivative=deriv,
        quartic=quartic,
        quadrature_points=quadrature_points,
        gamma_shift=shift,
    )
