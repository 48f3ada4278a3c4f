"""One-step evolution kernels and the brute-force path-sum oracle.

The time step e^{-iH dt} is approximated by kernels built from finite
geometric sums over the shift-eigenbasis:

* a "free" kernel, diagonal in the Fourier basis, which is exactly unitary
  and whose columns each sum to exactly 1 (the complex one-step transition
  amplitudes out of any point form a normalized complex probability);
* a "split" kernel, the free kernel times a diagonal potential phase —
  still exactly unitary, first-order accurate in dt;
* a "mixed" kernel, built from samples of a general phase-space function
  H(p_n, x_k), which is NOT exactly unitary; its defect is O(dt^2) and is
  reported, never repaired.

`brute_force_amplitude` evaluates the same N-step amplitude by literally
summing over every discrete phase-space path (all intermediate coordinate
and momentum labels).  It exists as an oracle: the sum must reproduce the
N-th kernel power entry exactly, and with the weight switched off the sum
over all paths is exactly 1 — a normalized complex probability over path
space.  Enumeration is vectorized but path-faithful: per-step factor arrays
are broadcast into the full path tensor and reduced with numpy's pairwise
summation, so results are reproducible bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import PhaseGrid, StateVector
from .weyl_core import WeylBasis, apply_fourier, apply_inverse_fourier, fourier_matrix

KIND_FREE = "free"
KIND_SPLIT = "split"
KIND_MIXED = "mixed"


class GuardError(ValueError):
    """A resource or validity guard refused to run the computation.

    Raised when an enumeration, grid, or evolution request exceeds a
    documented safety bound (path-count limit, dense-size limit,
    wrap-around bound).  The CLI maps this to its own exit code.
    """


@dataclass(frozen=True)
class SplitHamiltonian:
    """Samples of a split generator K(p) + V(x) on a phase-space grid."""

    grid: PhaseGrid
    kinetic: np.ndarray
    potential: np.ndarray

    def __post_init__(self):
        kin = np.asarray(self.kinetic, dtype=float)
        pot = np.asarray(self.potential, dtype=float)
        if kin.shape != (self.grid.M,) or pot.shape != (self.grid.M,):
            raise ValueError(f"sample arrays must have length M={self.grid.M}")
        object.__setattr__(self, "kinetic", kin)
        object.__setattr__(self, "potential", pot)


@dataclass(frozen=True)
class MixedHamiltonian:
    """Samples H(p_n, x_k) of a general phase-space generator.

    ``samples[n, k]`` is indexed momentum-first: row n tracks the Fourier
    label, column k the coordinate label, both in array-position order.
    """

    basis: WeylBasis
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.shape != (self.basis.M, self.basis.M):
            raise ValueError(f"samples must be {self.basis.M}x{self.basis.M}")
        object.__setattr__(self, "samples", s)

    def operator(self) -> np.ndarray:
        """Normal-ordered operator with these phase-space matrix elements.

        Row k' of the result is sum_n <k'|u_n> samples[n, k] <u_n|k>.  For
        separable samples K(p_n) + V(x_k) this is the ordinary Hamiltonian
        matrix; for generic samples it need not be Hermitian.
        """
        F = fourier_matrix(self.basis)
        return F @ (np.asarray(self.samples, dtype=complex) * F.conj().T)

    def hermiticity_defect(self) -> float:
        op = self.operator()
        return float(np.max(np.abs(op - op.conj().T)))


@dataclass(frozen=True)
class StepKernel:
    """Dense one-step kernel with its provenance.

    ``kind`` is one of "free", "split", "mixed"; ``dt`` the step it was
    built for.  The matrix acts on coordinate-basis amplitude columns.
    """

    basis: WeylBasis
    matrix: np.ndarray
    kind: str
    dt: float

    def __post_init__(self):
        if self.kind not in (KIND_FREE, KIND_SPLIT, KIND_MIXED):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.matrix.shape != (self.basis.M, self.basis.M):
            raise ValueError("kernel matrix must be M x M")

    def unitarity_defect(self) -> float:
        """max |(A^dagger A - 1)_{jk}| — zero for free/split up to roundoff."""
        M = self.basis.M
        g = self.matrix.conj().T @ self.matrix
        return float(np.max(np.abs(g - np.eye(M))))


@dataclass(frozen=True)
class PathEnsembleResult:
    """Outcome of a brute-force path enumeration.

    ``amplitude`` is filled in weighted (functional-on) mode,
    ``normalization_sum`` in bare mode; ``path_count`` is the number of
    discrete paths actually summed.
    """

    amplitude: complex | None
    path_count: int
    normalization_sum: complex | None


def free_step_kernel(basis: WeylBasis, kinetic_samples: np.ndarray, dt: float) -> StepKernel:
    """Kernel diagonal in the Fourier basis: F diag(e^{-i(K_n - K_ref) dt}) F^dagger.

    K_ref is the sample at index value 0, so the zero-frequency phase is 1
    and every column of the kernel sums to exactly 1 (only the n = 0 term
    survives the column sum by the geometric sum over a full period).  The
    kernel is unitary for any real samples and any dt, including negative
    dt for backward steps.
    """
    M = basis.M
    kin = np.asarray(kinetic_samples, dtype=float)
    if kin.shape != (M,):
        raise ValueError(f"kinetic samples must have length M={M}")
    ref = kin[basis.position(0)]
    theta = np.exp(-1j * (kin - ref) * dt)
    F = fourier_matrix(basis)
    mat = (F * theta[None, :]) @ F.conj().T
    return StepKernel(basis=basis, matrix=mat, kind=KIND_FREE, dt=float(dt))


def full_step_kernel(free: StepKernel, potential_samples: np.ndarray, dt: float) -> StepKernel:
    """Split step: free kernel times the diagonal potential phase.

    Column k of the free kernel is scaled by e^{-iV(x_k) dt} (the phase is
    picked up at the source point, before the free hop).  Exactly unitary.
    """
    if free.kind != KIND_FREE:
        raise ValueError(f"need a free kernel, got kind {free.kind!r}")
    pot = np.asarray(potential_samples, dtype=float)
    if pot.shape != (free.basis.M,):
        raise ValueError(f"potential samples must have length M={free.basis.M}")
    if float(dt) != free.dt:
        raise ValueError(f"dt={dt} does not match the free kernel's dt={free.dt}")
    mat = free.matrix * np.exp(-1j * pot * dt)[None, :]
    return StepKernel(basis=free.basis, matrix=mat, kind=KIND_SPLIT, dt=float(dt))


def split_step_kernel(split: SplitHamiltonian, dt: float) -> StepKernel:
    """Convenience: free kernel from the kinetic samples, then the potential phase."""
    free = free_step_kernel(split.grid.basis, split.kinetic, dt)
    return full_step_kernel(free, split.potential, dt)


def mixed_step_kernel(basis: WeylBasis, mixed: MixedHamiltonian, dt: float) -> StepKernel:
    """One step generated by general phase-space samples H(p_n, x_k).

    Entry (k', k) is sum_n <k'|u_n> e^{-i H[n,k] dt} <u_n|k>.  When the
    samples separate as K(p) + V(x) this reproduces the split kernel
    exactly; for genuinely mixed samples it is not unitary — the defect is
    O(dt^2) and available via unitarity_defect(), deliberately not
    repaired.
    """
    if mixed.basis != basis:
        raise ValueError("mixed Hamiltonian was sampled on a different basis")
    F = fourier_matrix(basis)
    phases = np.exp(-1j * float(dt) * np.asarray(mixed.samples, dtype=complex))
    mat = F @ (phases * F.conj().T)
    return StepKernel(basis=basis, matrix=mat, kind=KIND_MIXED, dt=float(dt))


def evolve(kernel: StepKernel, psi: StateVector, steps: int) -> StateVector:
    """Apply a one-step kernel ``steps`` times to a coordinate-basis state."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if psi.rep != "x":
        raise ValueError("kernels act on coordinate-basis amplitudes; transform first")
    if psi.grid.M != kernel.basis.M:
        raise ValueError("state and kernel dimensions differ")
    if steps == 0:
        return psi
    a = psi.amplitudes
    for _ in range(steps):
        a = kernel.matrix @ a
    return StateVector(psi.grid, a, psi.normconv, psi.rep)


def apply_split_step_fast(
    basis: WeylBasis,
    kinetic_samples: np.ndarray,
    potential_samples: np.ndarray | None,
    dt: float,
    amplitudes: np.ndarray,
    steps: int = 1,
) -> np.ndarray:
    """FFT fast path for split-step evolution, O(M log M) per step.

    Per step: multiply by the potential phase (skipped when
    ``potential_samples`` is None), transform to the Fourier basis, apply
    the kinetic phase, transform back.  Must agree with the dense kernel
    to 1e-11; tests enforce that.
    """
    kin = np.asarray(kinetic_samples, dtype=float)
    ref = kin[basis.position(0)]
    kin_phase = np.exp(-1j * (kin - ref) * dt)
    pot_phase = None
    if potential_samples is not None:
        pot_phase = np.exp(-1j * np.asarray(potential_samples, dtype=float) * dt)
    a = np.asarray(amplitudes, dtype=complex)
    for _ in range(steps):
        if pot_phase is not None:
            a = a * pot_phase
        a = apply_fourier(basis, kin_phase * apply_inverse_fourier(basis, a))
    return a


def conditional_probability(basis: WeylBasis, k_next: int, n: int, k: int) -> complex:
    """One-step complex probability <k_next|u_n><u_n|k> = e^{-2 pi i n (k_next - k)/M}/M.

    Indices are index values of the basis.  Summing over n and k_next gives
    exactly 1 — a normalized complex probability.
    """
    for label in (k_next, n, k):
        basis.position(label)  # range check
    return complex(np.exp(-2j * np.pi * n * (k_next - k) / basis.M) / basis.M)


PATH_ENUMERATION_LIMIT = 10_000_000


def _pair_factor(basis: WeylBasis, fixed_next: int | None = None) -> np.ndarray:
    """Per-step pairing <k'|u_n><u_n|k> as an array over label positions.

    Returns shape (M, M, M) indexed [k', n, k], or (M, M) indexed [n, k]
    when k' is fixed to the index value ``fixed_next``.
    """
    M = basis.M
    idx = basis.indices()
    if fixed_next is not None:
        n = idx[:, None]
        k = idx[None, :]
        return np.exp(-2j * np.pi * n * (fixed_next - k) / M) / M
    kp = idx[:, None, None]
    n = idx[None, :, None]
    k = idx[None, None, :]
    return np.exp(-2j * np.pi * n * (kp - k) / M) / M


def brute_force_amplitude(
    basis: WeylBasis,
    mixed: MixedHamiltonian | None,
    N: int,
    k_i: int,
    k_f: int,
    functional_on: bool = True,
    dt: float = 1.0,
) -> PathEnsembleResult:
    """Sum the N-step amplitude over every discrete phase-space path.

    A path is a label sequence (n_N, k_N, ..., n_1, k_1); step j
    contributes the complex probability <k_{j+1}|u_{n_j}><u_{n_j}|k_j>
    (with k_{N+1} = k_f), times the weight e^{-i H[n_j, k_j] dt} when the
    functional is on.

    * functional_on=True: k_1 is clamped to k_i and the weighted sum over
      the remaining 2N-1 labels is returned as ``amplitude``; it equals
      the (k_f, k_i) entry of the N-th power of the mixed one-step kernel
      built with the same dt.
    * functional_on=False: the weight is identically 1, ``mixed`` and
      ``dt`` are ignored, and ALL 2N labels float, k_1 included; the bare
      sum over the M^(2N) paths is returned as ``normalization_sum``.  It
      equals 1 for any fixed k_f — the paths carry a normalized complex
      probability.

    The per-step factors are broadcast into the full path tensor (one axis
    per floating label), so the enumeration refuses to run past
    M^(2N) = 10^7 paths.  Reduction is a single numpy pairwise sum —
    deterministic run-to-run.
    """
    M = basis.M
    if N < 1:
        raise ValueError("need at least one step")
    basis.position(k_i)
    basis.position(k_f)
    if float(M) ** (2 * N) > PATH_ENUMERATION_LIMIT:
        raise GuardError(
            f"enumeration of M^(2N) = {M}^{2 * N} paths exceeds the "
            f"{PATH_ENUMERATION_LIMIT:.0e} guard"
        )

    weight = None
    if functional_on:
        if mixed is None:
            raise ValueError("weighted enumeration needs phase-space samples")
        if mixed.basis != basis:
            raise ValueError("mixed Hamiltonian was sampled on a different basis")
        weight = np.exp(-1j * float(dt) * np.asarray(mixed.samples, dtype=complex))

    idx = basis.indices()
    # axes in path order: n_N, k_N, n_{N-1}, k_{N-1}, ..., n_1[, k_1]
    n_axes = 2 * N - 1 if functional_on else 2 * N

    top = _pair_factor(basis, fixed_next=k_f)  # [n_N, k_N]
    if weight is not None:
        top = top * weight

    factors: list[tuple[np.ndarray, int]] = []
    if N == 1:
        if functional_on:
            factors.append((top[:, basis.position(k_i)], 0))  # [n_1]
        else:
            factors.append((top, 0))  # [n_1, k_1]
    else:
        factors.append((top, 0))
        tri = _pair_factor(basis)  # [k_{i+1}, n_i, k_i]
        if weight is not None:
            tri = tri * weight[None, :, :]
        for i in range(N - 1, 1, -1):
            factors.append((tri, 2 * (N - i) - 1))
        if functional_on:
            # step 1 with k_1 clamped to k_i: axes [k_2, n_1]
            last = np.exp(-2j * np.pi * idx[None, :] * (idx[:, None] - k_i) / M) / M
            if weight is not None:
                last = last * weight[:, basis.position(k_i)][None, :]
            factors.append((last, 2 * N - 3))
        else:
            factors.append((tri, 2 * N - 3))

    acc = None
    for arr, first_axis in factors:
        shape = (1,) * first_axis + arr.shape + (1,) * (n_axes - first_axis - arr.ndim)
        piece = arr.reshape(shape)
        acc = piece if acc is None else acc * piece
    total = complex(np.sum(acc))

    if functional_on:
        return PathEnsembleResult(
            amplitude=total, path_count=M ** (2 * N - 1), normalization_sum=None
        )
    return PathEnsembleResult(amplitude=None, path_count=M ** (2 * N), normalization_sum=total)
