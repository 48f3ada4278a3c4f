"""Real-time quantum evolution on finite cyclic grids via shift/clock algebra.

Submodules
----------
weyl_core     the finite shift/clock pair, Fourier basis, monomial expansion,
              and the 2^L per-qbit factorization
grid          the symmetric phase-space grid and state vectors on it
propagator    one-step kernels (free / split / mixed), evolution, and the
              brute-force path enumeration they factor into
scattering    Gaussian packets off a Gaussian barrier, half-shell columns,
              and an independent momentum-space integral-equation solver
wavelet       compactly supported scaling functions and their derivative /
              quartic overlap tables
field_theory  coupled-mode quartic dynamics with tensor-product kernels
cli           the ``weylpath`` batch front-end

Submodules load lazily: importing :mod:`weylpath` alone pulls in no numpy,
so the CLI can pin BLAS thread counts through the environment first.
"""

from importlib import import_module

__version__ = "0.1.0"

_SUBMODULES = (
    "weyl_core",
    "grid",
    "propagator",
    "scattering",
    "wavelet",
    "field_theory",
    "cli",
)

__all__ = list(_SUBMODULES)


def __getattr__(name: str):
    if name in _SUBMODULES:
        return import_module(f".{name}", __name__)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(set(globals()) | set(_SUBMODULES))
