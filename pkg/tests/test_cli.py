"""The batch front-end: config parsing, exit codes, CSV shape, determinism."""

import subprocess
import sys

import pytest

from weylpath.cli import (
    ConfigError,
    apply_schema,
    format_cell,
    main,
    parse_config_file,
)


def read_csv(path):
    """(header, data rows) of a report file, comments stripped."""
    lines = [l for l in path.read_text(encoding="utf-8").splitlines() if not l.startswith("#")]
    return lines[0].split(","), [l.split(",") for l in lines[1:]]


def column(path, name):
    header, rows = read_csv(path)
    i = header.index(name)
    return [row[i] for row in rows]


def lookup(path, quantity):
    header, rows = read_csv(path)
    for row in rows:
        if row[0] == quantity:
            return float(row[1])
    raise KeyError(quantity)


class TestConfigParsing:
    def test_values_comments_and_blanks(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# a comment\n\nK = 40\nlam=0.25\n  # indented comment\n")
        assert parse_config_file(str(cfg)) == {"K": "40", "lam": "0.25"}

    def test_malformed_line(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("K 40\n")
        with pytest.raises(ConfigError, match="key=value"):
            parse_config_file(str(cfg))

    def test_duplicate_key(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("K=1\nK=2\n")
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config_file(str(cfg))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            parse_config_file(str(tmp_path / "nope.cfg"))

    def test_schema_defaults_and_overrides(self):
        schema = {"K": (int, 10), "lam": (float, 0.5)}
        assert apply_schema(schema, {}, "x") == {"K": 10, "lam": 0.5}
        assert apply_schema(schema, {"K": "7"}, "x") == {"K": 7, "lam": 0.5}

    def test_schema_rejects_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown config key"):
            apply_schema({"K": (int, 10)}, {"Q": "1"}, "x")

    def test_format_cell(self):
        assert format_cell(0.1234567891234) == "0.123456789"
        assert format_cell(2.5) == "2.5"
        assert format_cell(12) == "12"
        assert format_cell("name") == "name"


class TestWeylCheck:
    def test_power_of_two_report_passes(self, tmp_path, capsys):
        assert main(["weyl-check", "--out", str(tmp_path)]) == 0
        assert "PASS" in capsys.readouterr().out
        header, rows = read_csv(tmp_path / "weyl_check.csv")
        assert header == ["check", "residual", "threshold", "status"]
        names = [r[0] for r in rows]
        assert "qbit_shift_reconstruction" in names
        assert all(float(r[1]) < 1e-12 for r in rows)
        assert (tmp_path / "weyl_check.png").exists()

    def test_two_dimensional_case_reports_pauli_structure(self, tmp_path):
        cfg = tmp_path / "m2.cfg"
        cfg.write_text("M=2\n")
        assert main(["weyl-check", "--config", str(cfg), "--out", str(tmp_path)]) == 0
        names = [r[0] for r in read_csv(tmp_path / "weyl_check.csv")[1]]
        assert "shift_is_sigma1" in names and "clock_is_sigma3" in names

    def test_dimension_one_is_a_usage_error(self, tmp_path):
        cfg = tmp_path / "m1.cfg"
        cfg.write_text("M=1\n")
        assert main(["weyl-check", "--config", str(cfg), "--out", str(tmp_path)]) == 2

    def test_negative_threads_rejected(self, tmp_path):
        assert main(["weyl-check", "--threads", "-2", "--out", str(tmp_path)]) == 2


SMALL_SCATTER = "K=60\nN=10\nlam=0.2\nalpha=1.0\nmean_p=1.2\ndelta_p=0.3\ntau=2.0\n"


class TestScatter:
    def test_small_run_writes_reports(self, tmp_path):
        cfg = tmp_path / "s.cfg"
        cfg.write_text(SMALL_SCATTER)
        assert main(["scatter", "--config", str(cfg), "--out", str(tmp_path)]) == 0
        stats = tmp_path / "scatter_stats.csv"
        assert abs(lookup(stats, "mean_p_t0") - 1.2) < 1e-4
        assert abs(lookup(stats, "uncertainty_product_t0") - 0.5) < 1e-3
        assert lookup(stats, "norm_drift") < 1e-9
        header, rows = read_csv(tmp_path / "scatter_halfshell.csv")
        assert header == ["p", "t_real", "t_imag", "born_real", "born_imag"]
        assert len(rows) == 121
        assert (tmp_path / "scatter_halfshell.png").exists()

    def test_zero_coupling_gives_zero_columns(self, tmp_path):
        cfg = tmp_path / "s.cfg"
        cfg.write_text(SMALL_SCATTER.replace("lam=0.2", "lam=0.0"))
        assert main(["scatter", "--config", str(cfg), "--out", str(tmp_path)]) == 0
        for name in ("t_real", "t_imag"):
            assert all(abs(float(v)) < 1e-12 for v in column(tmp_path / "scatter_halfshell.csv", name))

    def test_wrap_guard_exits_3(self, tmp_path):
        cfg = tmp_path / "s.cfg"
        cfg.write_text("K=100\n")  # reference packet needs far more room
        assert main(["scatter", "--config", str(cfg), "--out", str(tmp_path)]) == 3

    def test_bad_parameter_exits_2(self, tmp_path):
        cfg = tmp_path / "s.cfg"
        cfg.write_text("delta_p=-1\n")
        assert main(["scatter", "--config", str(cfg), "--out", str(tmp_path)]) == 2

    def test_reruns_are_bit_identical(self, tmp_path):
        cfg = tmp_path / "s.cfg"
        cfg.write_text(SMALL_SCATTER)
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["scatter", "--config", str(cfg), "--out", str(a)]) == 0
        assert main(["scatter", "--config", str(cfg), "--out", str(b)]) == 0
        for name in ("scatter_stats.csv", "scatter_halfshell.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()


SMALL_FIELDS = "K=6\nsteps=3\ntotal_time=0.3\n"


class TestFields:
    def test_small_run_writes_reports(self, tmp_path):
        cfg = tmp_path / "f.cfg"
        cfg.write_text(SMALL_FIELDS)
        assert main(["fields", "--config", str(cfg), "--out", str(tmp_path)]) == 0
        header, rows = read_csv(tmp_path / "fields_evolved.csv")
        assert header == ["phi_0", "phi_1", "real", "imag"]
        assert len(rows) == 13 * 13
        _, slices = read_csv(tmp_path / "fields_slices.csv")
        assert len(slices) == 2 * 13
        assert (tmp_path / "fields_slices.png").exists()

    def test_zero_steps_copies_initial_bitwise(self, tmp_path):
        cfg = tmp_path / "f.cfg"
        cfg.write_text("K=6\nsteps=0\ntotal_time=0.3\n")
        assert main(["fields", "--config", str(cfg), "--out", str(tmp_path)]) == 0
        _, init = read_csv(tmp_path / "fields_initial.csv")
        _, evo = read_csv(tmp_path / "fields_evolved.csv")
        assert init == evo

    def test_mismatched_mode_lists_exit_2(self, tmp_path):
        cfg = tmp_path / "f.cfg"
        cfg.write_text("means=0.5\n")  # two modes, one mean
        assert main(["fields", "--config", str(cfg), "--out", str(tmp_path)]) == 2

    def test_negative_steps_exit_2(self, tmp_path):
        cfg = tmp_path / "f.cfg"
        cfg.write_text("steps=-1\n")
        assert main(["fields", "--config", str(cfg), "--out", str(tmp_path)]) == 2


class TestWavelet:
    def test_default_run_tables(self, tmp_path):
        assert main(["wavelet", "--out", str(tmp_path)]) == 0
        taps = read_csv(tmp_path / "wavelet_taps.csv")[1]
        assert abs(float(taps[0][1]) - 0.3326705529500825) < 1e-10
        header, rows = read_csv(tmp_path / "wavelet_quartic.csv")
        table = {tuple(r[:4]): float(r[4]) for r in rows}
        assert abs(table[("0", "0", "1", "1")] - 0.0890895) < 1e-5
        deriv = {tuple(r[:2]): float(r[2]) for r in read_csv(tmp_path / "wavelet_derivative.csv")[1]}
        assert abs(deriv[("0", "0")] - 295.0 / 56.0) < 1e-6
        assert (tmp_path / "wavelet_scaling.png").exists()

    def test_scaling_samples_align_with_mother(self, tmp_path):
        cfg = tmp_path / "w.cfg"
        cfg.write_text("level=4\n")
        assert main(["wavelet", "--config", str(cfg), "--out", str(tmp_path)]) == 0
        _, rows = read_csv(tmp_path / "wavelet_scaling.csv")
        assert len(rows) == 5 * 16 + 1

    def test_unconverged_tables_exit_4(self, tmp_path):
        cfg = tmp_path / "w.cfg"
        cfg.write_text("quadrature_points=2\n")
        assert main(["wavelet", "--config", str(cfg), "--out", str(tmp_path)]) == 4

    def test_bad_level_exit_2(self, tmp_path):
        cfg = tmp_path / "w.cfg"
        cfg.write_text("level=0\n")
        assert main(["wavelet", "--config", str(cfg), "--out", str(tmp_path)]) == 2


class TestBruteforce:
    def test_default_run_passes(self, tmp_path):
        assert main(["bruteforce", "--out", str(tmp_path)]) == 0
        header, rows = read_csv(tmp_path / "bruteforce.csv")
        assert header == ["quantity", "value_real", "value_imag", "deviation"]
        assert all(float(r[3]) < 1e-10 for r in rows)
        assert len(rows) == 1 + 3  # normalization + default sample count

    def test_seed_changes_the_random_samples(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["bruteforce", "--out", str(a), "--seed", "1"]) == 0
        assert main(["bruteforce", "--out", str(b), "--seed", "2"]) == 0

        def sample0(d):
            for row in read_csv(d / "bruteforce.csv")[1]:
                if row[0] == "amplitude_sample_0":
                    return row[1:]
            raise AssertionError("sample row missing")

        assert sample0(a) != sample0(b)

    def test_same_seed_is_bit_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["bruteforce", "--out", str(a), "--seed", "9"]) == 0
        assert main(["bruteforce", "--out", str(b), "--seed", "9"]) == 0
        assert (a / "bruteforce.csv").read_bytes() == (b / "bruteforce.csv").read_bytes()

    def test_path_limit_exits_3(self, tmp_path):
        cfg = tmp_path / "b.cfg"
        cfg.write_text("M=41\nN=3\n")
        assert main(["bruteforce", "--config", str(cfg), "--out", str(tmp_path)]) == 3

    def test_samples_zero_emits_only_normalization(self, tmp_path):
        cfg = tmp_path / "b.cfg"
        cfg.write_text("samples=0\n")
        assert main(["bruteforce", "--config", str(cfg), "--out", str(tmp_path)]) == 0
        _, rows = read_csv(tmp_path / "bruteforce.csv")
        assert [r[0] for r in rows] == ["normalization_sum"]


def test_module_entry_point(tmp_path):
    # a fresh interpreter exercises the lazy-import path end to end
    proc = subprocess.run(
        [sys.executable, "-m", "weylpath", "weyl-check", "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "PASS" in proc.stdout
