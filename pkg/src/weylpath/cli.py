"""Batch front-end: subcommands, flat key=value configs, CSV + figure output.

Subcommands
-----------
weyl-check   residuals of the shift/clock algebra (and qbit factorization)
scatter      Gaussian-barrier run: packet stats, half-shell columns, oracle
fields       coupled-mode quartic demo: initial/evolved grids and slices
wavelet      refinement taps, scaling-function samples, coupling tables
bruteforce   path-enumeration normalization and kernel cross-check

Every run writes CSV files (header row, comma separator, 9 significant
digits, ``#`` comment lines carrying the config echo and residual summary
— never timestamps, so identical configs give bit-identical files) and a
matplotlib PNG rendering of the same data next to them.

Exit codes: 0 success, 2 config error, 3 resource/validity guard,
4 numerical invariant violated.

This module imports nothing heavy at import time: ``--threads`` must be
able to pin the BLAS thread pool through environment variables before
numpy first loads.
"""

from __future__ import annotations

import argparse
import numbers
import sys
from pathlib import Path

RESIDUAL_THRESHOLD = 1e-11

_THREAD_ENV_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
    "VECLIB_MAXIMUM_THREADS",
)


class ConfigError(Exception):
    """A config file or parameter the run cannot proceed with."""


# ---------------------------------------------------------------------------
# config files: flat key=value lines, # comments


def parse_config_file(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key in raw:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        raw[key] = value.strip()
    return raw


def _as_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"expected an integer, got {text!r}") from exc


def _as_float(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"expected a number, got {text!r}") from exc


def _as_int_tuple(text: str) -> tuple[int, ...]:
    return tuple(_as_int(p) for p in text.split(","))


def _as_float_tuple(text: str) -> tuple[float, ...]:
    return tuple(_as_float(p) for p in text.split(","))


def apply_schema(schema: dict, raw: dict[str, str], subcommand: str) -> dict:
    """Defaults overridden by the raw config; unknown keys are errors."""
    params = {key: default for key, (_, default) in schema.items()}
    for key, value in raw.items():
        if key not in schema:
            known = ", ".join(sorted(schema))
            raise ConfigError(f"unknown config key {key!r} for {subcommand} (known: {known})")
        caster, _ = schema[key]
        try:
            params[key] = caster(value)
        except ConfigError as exc:
            raise ConfigError(f"config key {key}: {exc}") from exc
    return params


# ---------------------------------------------------------------------------
# CSV emission


def format_cell(value) -> str:
    """Numbers at 9 significant digits; strings pass through."""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, numbers.Integral):
        return str(int(value))
    return f"{float(value):.9g}"


def write_csv(path: Path, comments: list[str], header: list[str], rows) -> None:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(format_cell(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def config_echo(params: dict) -> str:
    parts = []
    for key, val in params.items():
        if isinstance(val, tuple):
            parts.append(f"{key}={','.join(format_cell(v) for v in val)}")
        else:
            parts.append(f"{key}={format_cell(val)}")
    return "config: " + " ".join(parts)


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _residual_figure(path: Path, names: list[str], residuals: list[float], title: str) -> None:
    plt = _pyplot()
    floor = 1e-18
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.bar(range(len(names)), [max(r, floor) for r in residuals], color="#4878a8")
    ax.axhline(RESIDUAL_THRESHOLD, color="#a03030", linestyle="--", linewidth=1)
    ax.set_yscale("log")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("max-norm residual")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


# ---------------------------------------------------------------------------
# weyl-check


WEYL_SCHEMA = {"M": (_as_int, 16)}


def run_weyl_check(raw: dict[str, str], out: Path, seed: int) -> int:
    params = apply_schema(WEYL_SCHEMA, raw, "weyl-check")
    M = params["M"]
    if M < 2:
        raise ConfigError(f"need M >= 2, got M={M}")

    import numpy as np

    from .weyl_core import (
        SIGMA1,
        SIGMA3,
        WeylBasis,
        bitwise_clock_dense,
        bitwise_shift_dense,
        build_clock_V,
        build_shift_U,
        fourier_matrix,
        qbit_factorize,
    )

    basis = WeylBasis(M)
    U = build_shift_U(basis)
    V = build_clock_V(basis)
    F = fourier_matrix(basis)
    eye = np.eye(M)

    checks: list[tuple[str, float]] = [
        ("shift_power_identity", float(np.max(np.abs(np.linalg.matrix_power(U, M) - eye)))),
        ("clock_power_identity", float(np.max(np.abs(np.linalg.matrix_power(V, M) - eye)))),
        (
            "exchange_phase",
            float(np.max(np.abs(U @ V - V @ U * np.exp(-2j * np.pi / M)))),
        ),
        ("fourier_completeness", float(np.max(np.abs(F @ F.conj().T - eye)))),
    ]
    if M == 2:
        checks.append(("shift_is_sigma1", float(np.max(np.abs(U - SIGMA1)))))
        checks.append(("clock_is_sigma3", float(np.max(np.abs(V - SIGMA3)))))
    L = M.bit_length() - 1
    if M == 2**L and L <= 6:
        fact = qbit_factorize(L)
        shift_res = max(
            float(np.max(np.abs(fact.u_monomial(n) - bitwise_shift_dense(L, n))))
            for n in range(M)
        )
        clock_res = max(
            float(np.max(np.abs(fact.v_monomial(n) - bitwise_clock_dense(L, n))))
            for n in range(M)
        )
        checks.append(("qbit_shift_reconstruction", shift_res))
        checks.append(("qbit_clock_reconstruction", clock_res))

    worst = max(r for _, r in checks)
    ok = worst < RESIDUAL_THRESHOLD
    for name, res in checks:
        print(f"{name}: {res:.3e} ({'ok' if res < RESIDUAL_THRESHOLD else 'FAIL'})")
    print(f"weyl-check M={M}: {'PASS' if ok else 'FAIL'} (worst residual {worst:.3e})")

    comments = [
        "weylpath weyl-check report",
        config_echo(params),
        f"threshold: {RESIDUAL_THRESHOLD:.9g}",
        f"worst residual: {worst:.9g}",
    ]
    write_csv(
        out / "weyl_check.csv",
        comments,
        ["check", "residual", "threshold", "status"],
        [
            (name, res, RESIDUAL_THRESHOLD, "ok" if res < RESIDUAL_THRESHOLD else "fail")
            for name, res in checks
        ],
    )
    _residual_figure(
        out / "weyl_check.png",
        [name for name, _ in checks],
        [res for _, res in checks],
        f"shift/clock residuals, M={M}",
    )
    return 0 if ok else 4


# ---------------------------------------------------------------------------
# scatter


SCATTER_SCHEMA = {
    "K": (_as_int, 300),
    "N": (_as_int, 100),
    "lam": (_as_float, 0.5),
    "alpha": (_as_float, 2.0),
    "mean_p": (_as_float, 2.5),
    "delta_p": (_as_float, 0.25),
    "mass": (_as_float, 1.0),
    "tau": (_as_float, 7.0),
}


def run_scatter(raw: dict[str, str], out: Path, seed: int) -> int:
    params = apply_schema(SCATTER_SCHEMA, raw, "scatter")

    import numpy as np

    from .grid import make_grid
    from .scattering import (
        PacketSpec,
        ScatterConfig,
        gaussian_packet,
        half_shell_T,
        ls_oracle,
        packet_stats,
        scattering_state,
    )

    spec = PacketSpec(params["mean_p"], params["delta_p"], params["mass"], params["tau"])
    cfg = ScatterConfig(params["K"], params["N"], params["lam"], params["alpha"], spec)
    grid = make_grid(cfg.K)

    rest = PacketSpec(spec.mean_p, spec.delta_p, spec.mass, 0.0)
    mean_x, mean_p, delta_x, delta_p = packet_stats(gaussian_packet(grid, rest))

    psi0 = scattering_state(cfg)
    norm_drift = abs(psi0.norm() - 1.0)
    res = half_shell_T(cfg)

    idx = int(np.argmin(np.abs(res.p - spec.mean_p)))
    p_near = float(res.p[idx])
    t_on = complex(res.t[idx])
    born_on = complex(res.born[idx])

    if cfg.lam != 0.0 and spec.mean_p > 0.0:
        oracle = ls_oracle(cfg.lam, cfg.alpha, spec.mass, spec.mean_p)
        reference = oracle.half_shell_at(p_near)
    else:
        reference = 0.0 + 0.0j

    def rel_to_reference(z: complex) -> float:
        return abs(z - reference) / abs(reference) if reference != 0.0 else 0.0

    stats_rows = [
        ("mean_x_t0", mean_x),
        ("mean_p_t0", mean_p),
        ("delta_x_t0", delta_x),
        ("delta_p_t0", delta_p),
        ("uncertainty_product_t0", delta_x * delta_p),
        ("norm_drift", norm_drift),
        ("nearest_grid_p", p_near),
        ("pipeline_t_real", t_on.real),
        ("pipeline_t_imag", t_on.imag),
        ("born_real", born_on.real),
        ("born_imag", born_on.imag),
        ("oracle_t_real", reference.real),
        ("oracle_t_imag", reference.imag),
        ("pipeline_vs_oracle_rel", rel_to_reference(t_on)),
        ("born_vs_oracle_rel", rel_to_reference(born_on)),
    ]
    comments = [
        "weylpath scatter report",
        config_echo(params),
        f"grid: M={grid.M} eps={grid.eps:.9g} extent={grid.extent():.9g}",
        f"residuals: norm_drift={norm_drift:.9g}",
    ]
    write_csv(out / "scatter_stats.csv", comments, ["quantity", "value"], stats_rows)
    write_csv(
        out / "scatter_halfshell.csv",
        comments,
        ["p", "t_real", "t_imag", "born_real", "born_imag"],
        zip(res.p, res.t.real, res.t.imag, res.born.real, res.born.imag),
    )

    plt = _pyplot()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.plot(res.p, np.abs(res.t), label="|T| (evolved)", color="#4878a8")
    ax1.plot(res.p, np.abs(res.born), label="|Born|", color="#a03030", linestyle="--")
    ax1.set_xlabel("p")
    ax1.set_ylabel("half-shell magnitude")
    ax1.legend()
    lo, hi = spec.mean_p - 6 * spec.delta_p, spec.mean_p + 6 * spec.delta_p
    window = (res.p >= lo) & (res.p <= hi)
    if np.any(window):
        ax2.plot(res.p[window], res.t.real[window], label="Re T", color="#4878a8")
        ax2.plot(res.p[window], res.t.imag[window], label="Im T", color="#48a878")
        if reference != 0.0:
            ax2.scatter([p_near], [reference.real], color="k", marker="x", label="oracle Re")
            ax2.scatter([p_near], [reference.imag], color="k", marker="+", label="oracle Im")
        ax2.set_xlabel("p")
        ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out / "scatter_halfshell.png", dpi=120)
    plt.close(fig)

    print(f"packet at t=0: <x>={mean_x:.3e} <p>={mean_p:.9g} dx*dp={delta_x * delta_p:.9g}")
    print(f"norm drift over {cfg.N} steps: {norm_drift:.3e}")
    print(f"half-shell at p={p_near:.9g}: T={t_on:.9g}")
    if reference != 0.0:
        print(
            f"oracle: {reference:.9g}  relative difference {rel_to_reference(t_on):.4f} "
            f"(Born: {rel_to_reference(born_on):.4f})"
        )
    return 0


# ---------------------------------------------------------------------------
# fields


FIELDS_SCHEMA = {
    "K": (_as_int, 20),
    "steps": (_as_int, 20),
    "total_time": (_as_float, 0.5),
    "mass_sq": (_as_float, 1.0),
    "lam": (_as_float, 1.0),
    "modes": (_as_int_tuple, (0, 1)),
    "means": (_as_float_tuple, (0.5, 0.5)),
    "widths": (_as_float_tuple, (0.5, 0.5)),
    "quadrature_points": (_as_int, 256),
}


def run_fields(raw: dict[str, str], out: Path, seed: int) -> int:
    params = apply_schema(FIELDS_SCHEMA, raw, "fields")
    modes = params["modes"]
    if len(params["means"]) != len(modes) or len(params["widths"]) != len(modes):
        raise ConfigError("means and widths must list one value per entry of modes")
    if params["steps"] < 0:
        raise ConfigError("steps must be >= 0")

    import numpy as np

    from .field_theory import (
        FieldConfig,
        evolve_fields,
        initial_field_packet,
        origin_slice,
        potential_samples,
    )
    from .grid import make_grid
    from .wavelet import overlap_tables

    tables = overlap_tables(modes, params["quadrature_points"])
    cfg = FieldConfig(
        grid=make_grid(params["K"]),
        mass_sq=params["mass_sq"],
        lam=params["lam"],
        quadratic=tables.derivative,
        quartic=tables.quartic,
        steps=max(params["steps"], 1),
        total_time=params["total_time"],
        means=params["means"],
        widths=params["widths"],
    )
    potential_samples(cfg)  # fires the size guard before any big allocation

    initial = initial_field_packet(cfg)
    evolved = initial if params["steps"] == 0 else evolve_fields(cfg, initial)
    norm_drift = abs(evolved.norm() - 1.0)
    peak_imag = float(np.max(np.abs(evolved.amplitudes.imag)))

    comments = [
        "weylpath fields report",
        config_echo(params),
        f"grid: M={cfg.grid.M} eps={cfg.grid.eps:.9g} extent={cfg.grid.extent():.9g}",
        f"residuals: norm_drift={norm_drift:.9g} peak_imag={peak_imag:.9g}",
    ]

    f = cfg.modes
    value_header = [f"phi_{m}" for m in range(f)] + ["real", "imag"]
    grids = np.array(np.meshgrid(*([cfg.grid.x] * f), indexing="ij")).reshape(f, -1)

    def grid_rows(state):
        for col in range(grids.shape[1]):
            amp = state.amplitudes[col]
            yield tuple(grids[:, col]) + (amp.real, amp.imag)

    write_csv(out / "fields_initial.csv", comments, value_header, grid_rows(initial))
    write_csv(out / "fields_evolved.csv", comments, value_header, grid_rows(evolved))

    slice_rows = []
    for mode in range(f):
        init_sl = origin_slice(initial, mode)
        evo_sl = origin_slice(evolved, mode)
        for x, a0, a1 in zip(cfg.grid.x, init_sl, evo_sl):
            slice_rows.append((mode, x, a0.real, a0.imag, a1.real, a1.imag))
    write_csv(
        out / "fields_slices.csv",
        comments,
        ["mode", "phi", "initial_real", "initial_imag", "evolved_real", "evolved_imag"],
        slice_rows,
    )

    plt = _pyplot()
    fig, axes = plt.subplots(1, f, figsize=(5 * f, 4), squeeze=False)
    for mode, ax in enumerate(axes[0]):
        init_sl = origin_slice(initial, mode)
        evo_sl = origin_slice(evolved, mode)
        ax.plot(cfg.grid.x, init_sl.real, label="initial (real)", color="#888888")
        ax.plot(cfg.grid.x, evo_sl.real, label="evolved real", color="#4878a8")
        ax.plot(cfg.grid.x, evo_sl.imag, label="evolved imag", color="#a03030")
        ax.set_xlabel(f"phi_{mode} (others at 0)")
        ax.set_ylabel("amplitude")
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out / "fields_slices.png", dpi=120)
    plt.close(fig)

    print(f"modes={f} grid M={cfg.grid.M} steps={params['steps']} t={cfg.total_time}")
    print(f"norm drift: {norm_drift:.3e}  peak |Im|: {peak_imag:.9g}")
    return 0


# ---------------------------------------------------------------------------
# wavelet


WAVELET_SCHEMA = {
    "quadrature_points": (_as_int, 256),
    "modes": (_as_int_tuple, (0, 1)),
    "level": (_as_int, 8),
}


def run_wavelet(raw: dict[str, str], out: Path, seed: int) -> int:
    params = apply_schema(WAVELET_SCHEMA, raw, "wavelet")
    if not 1 <= params["level"] <= 16:
        raise ConfigError("level must be between 1 and 16")

    import numpy as np

    from .wavelet import (
        daubechies_h,
        mother_wavelet_on_dyadics,
        overlap_tables,
        scaling_on_dyadics,
    )

    h = daubechies_h()
    tables = overlap_tables(params["modes"], params["quadrature_points"])
    samples = scaling_on_dyadics(params["level"])
    mother = mother_wavelet_on_dyadics(params["level"])

    comments = [
        "weylpath wavelet report",
        config_echo(params),
        f"residuals: quartic mesh-doubling shift={tables.gamma_shift:.9g} "
        f"converged={int(tables.converged)}",
    ]
    write_csv(
        out / "wavelet_taps.csv",
        comments + [f"tap sum: {np.sum(h.h):.9g} (target sqrt(2))"],
        ["index", "value"],
        list(enumerate(h.h)),
    )
    write_csv(
        out / "wavelet_scaling.csv",
        comments,
        ["x", "scaling", "scaling_derivative", "mother"],
        zip(samples.x, samples.values, samples.derivatives, mother.values),
    )
    nm = len(tables.modes)
    write_csv(
        out / "wavelet_derivative.csv",
        comments,
        ["i", "j", "value"],
        [(i, j, tables.derivative[i, j]) for i in range(nm) for j in range(nm)],
    )
    write_csv(
        out / "wavelet_quartic.csv",
        comments,
        ["i", "j", "k", "l", "value"],
        [idx + (tables.quartic[idx],) for idx in np.ndindex(*tables.quartic.shape)],
    )

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(samples.x, samples.values, label="scaling s(x)", color="#4878a8")
    ax.plot(samples.x, samples.derivatives, label="s'(x)", color="#888888", linewidth=0.8)
    ax.plot(mother.x, mother.values, label="mother w(x)", color="#a03030")
    ax.set_xlabel("x")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out / "wavelet_scaling.png", dpi=120)
    plt.close(fig)

    print(f"h0 = {h.h[0]:.12f}")
    print(
        f"derivative[0,0]={tables.derivative[0, 0]:.9g} "
        f"derivative[0,1]={tables.derivative[0, 1] if nm > 1 else float('nan'):.9g}"
    )
    print(f"quartic mesh-doubling shift: {tables.gamma_shift:.3e}")
    return 0


# ---------------------------------------------------------------------------
# bruteforce


BRUTEFORCE_SCHEMA = {
    "M": (_as_int, 3),
    "N": (_as_int, 2),
    "k_i": (_as_int, 0),
    "k_f": (_as_int, 0),
    "samples": (_as_int, 3),
}


def run_bruteforce(raw: dict[str, str], out: Path, seed: int) -> int:
    params = apply_schema(BRUTEFORCE_SCHEMA, raw, "bruteforce")
    if params["samples"] < 0:
        raise ConfigError("samples must be >= 0")

    import numpy as np

    from .propagator import MixedHamiltonian, brute_force_amplitude, mixed_step_kernel
    from .weyl_core import WeylBasis

    basis = WeylBasis(params["M"])
    M, N = params["M"], params["N"]
    k_i, k_f = params["k_i"], params["k_f"]

    bare = brute_force_amplitude(basis, None, N, k_i, k_f, functional_on=False)
    norm_dev = abs(bare.normalization_sum - 1.0)
    rows = [
        (
            "normalization_sum",
            bare.normalization_sum.real,
            bare.normalization_sum.imag,
            norm_dev,
        )
    ]
    print(
        f"bare path sum over {bare.path_count} paths: "
        f"{bare.normalization_sum:.12g} (|sum-1| = {norm_dev:.3e})"
    )

    rng = np.random.default_rng(seed)
    worst_match = 0.0
    dt = 0.3
    for i in range(params["samples"]):
        mixed = MixedHamiltonian(basis, rng.standard_normal((M, M)))
        weighted = brute_force_amplitude(basis, mixed, N, k_i, k_f, functional_on=True, dt=dt)
        kernel = mixed_step_kernel(basis, mixed, dt)
        want = np.linalg.matrix_power(kernel.matrix, N)[basis.position(k_f), basis.position(k_i)]
        dev = abs(weighted.amplitude - want)
        worst_match = max(worst_match, dev)
        rows.append((f"amplitude_sample_{i}", weighted.amplitude.real, weighted.amplitude.imag, dev))
        print(f"sample {i}: path sum {weighted.amplitude:.9g}, kernel-power deviation {dev:.3e}")

    comments = [
        "weylpath bruteforce report",
        config_echo(params) + f" seed={seed}",
        f"paths per weighted sum: {M}^{2 * N - 1}",
        f"residuals: normalization={norm_dev:.9g} worst_kernel_match={worst_match:.9g}",
    ]
    write_csv(
        out / "bruteforce.csv",
        comments,
        ["quantity", "value_real", "value_imag", "deviation"],
        rows,
    )
    _residual_figure(
        out / "bruteforce.png",
        [str(r[0]) for r in rows],
        [float(r[3]) for r in rows],
        f"path-enumeration residuals, M={M} N={N}",
    )

    ok = norm_dev < 1e-10 and worst_match < 1e-10
    print(f"bruteforce M={M} N={N}: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 4


# ---------------------------------------------------------------------------
# dispatch


HANDLERS = {
    "weyl-check": run_weyl_check,
    "scatter": run_scatter,
    "fields": run_fields,
    "wavelet": run_wavelet,
    "bruteforce": run_bruteforce,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weylpath",
        description="Discrete-path evolution runs: checks, scattering, fields, wavelets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, handler in HANDLERS.items():
        p = sub.add_parser(name, help=handler.__doc__)
        p.add_argument("--config", help="flat key=value config file (# comments allowed)")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument(
            "--threads",
            type=int,
            default=0,
            help="BLAS thread count; 0 leaves the library default",
        )
        p.add_argument(
            "--seed",
            type=int,
            default=0,
            help="seed for randomized cross-checks (bruteforce only)",
        )
    return parser


def _classify_failure(exc: Exception) -> int | None:
    """Map module exceptions onto exit codes; None means unexpected."""
    from .propagator import GuardError

    if isinstance(exc, GuardError):
        return 3
    if isinstance(exc, ValueError):  # parameter validation in the owning module
        return 2
    if isinstance(exc, ArithmeticError):  # a numerical invariant or convergence check
        return 4
    return None


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 0:
        print("config error: --threads must be >= 0", file=sys.stderr)
        return 2
    if args.threads > 0:
        import os

        for var in _THREAD_ENV_VARS:
            os.environ[var] = str(args.threads)

    try:
        raw = parse_config_file(args.config) if args.config else {}
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        return HANDLERS[args.command](raw, out, args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - mapped onto the exit-code contract
        code = _classify_failure(exc)
        if code is None:
            raise
        kind = {2: "config error", 3: "guard", 4: "numerical failure"}[code]
        print(f"{kind}: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
