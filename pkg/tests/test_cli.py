import json
import math
import os
from pathlib import Path

import pytest

from nhsense.cli import (
    ConfigError, main, parse_config, parse_config_lines, read_metadata, validate,
)

FIXTURES = Path(__file__).parent / "fixtures"


def read_csv(path):
    """Returns (metadata lines, header, rows as lists of strings)."""
    meta, header, rows = [], None, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                meta.append(line)
            elif header is None:
                header = line.split(",")
            elif line:
                rows.append(next(_csv_rows(line)))
    return meta, header, rows


def _csv_rows(line):
    import csv as _csv
    import io as _io
    yield next(_csv.reader(_io.StringIO(line)))


class TestConfigParsing:
    def test_missing_file_names_path(self):
        with pytest.raises(ConfigError, match="no-such-file.cfg"):
            parse_config("no-such-file.cfg")

    def test_unknown_key_rejected_with_line(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("scenario=pt-ep\nwhatever=3\n")
        with pytest.raises(ConfigError, match=r":2: unknown key"):
            parse_config(str(cfg))

    def test_malformed_line_referenced(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("scenario=verify\nnot a key value pair\n")
        with pytest.raises(ConfigError, match=r":2"):
            parse_config(str(cfg))

    def test_unparseable_value(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("scenario.pt-ep.J=one\n")
        with pytest.raises(ConfigError, match="cannot parse"):
            parse_config(str(cfg))

    def test_comments_and_blanks_skipped(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("# a comment\n\nscenario=verify\nseed=7\n")
        config = parse_config(str(cfg))
        assert config.scenario == "verify"
        assert config.seed == 7

    def test_validation_rules(self):
        with pytest.raises(ConfigError, match="scenario"):
            validate(parse_config_lines(["scenario=nope"]))
        with pytest.raises(ConfigError, match="grid count"):
            validate(parse_config_lines(
                ["scenario=pt-ep", "scenario.pt-ep.grid.count=1"]))
        with pytest.raises(ConfigError, match="start must be <"):
            validate(parse_config_lines(
                ["scenario=pseudo-hermitian",
                 "scenario.pseudo-hermitian.grid.start=0.5",
                 "scenario.pseudo-hermitian.grid.stop=-0.5"]))
        with pytest.raises(ConfigError, match="tol"):
            validate(parse_config_lines(["scenario=verify", "tol=0.1"]))

    def test_default_grid_follows_omega(self):
        config = validate(parse_config_lines(
            ["scenario=pseudo-hermitian", "scenario.pseudo-hermitian.omega=2.0"]))
        assert config.ph_grid_start == -1.0
        assert config.ph_grid_stop == 1.0


class TestCliRuns:
    def test_flag_overrides_config_and_metadata(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("scenario.pseudo-hermitian.epsilon=0.2\n"
                       "scenario.pseudo-hermitian.grid.count=3\n"
                       "scenario.pseudo-hermitian.grid.start=-0.1\n"
                       "scenario.pseudo-hermitian.grid.stop=0.1\n")
        out = tmp_path / "o.csv"
        code = main(["sweep-ph", "--config", str(cfg), "--epsilon", "0.05",
                     "--tol", "1e-8", "--out", str(out)])
        assert code == 0
        meta = read_metadata(str(out))
        assert meta.ph_epsilon == 0.05  # flag wins over file
        assert meta.ph_grid_count == 3
        assert meta.tol == 1e-8

    def test_metadata_round_trip(self, tmp_path):
        out = tmp_path / "o.csv"
        assert main(["sweep-ph", "--grid-count", "3", "--grid-start", "-0.1",
                     "--grid-stop", "0.1", "--tol", "1e-8", "--out", str(out)]) == 0
        reparsed = validate(read_metadata(str(out)))
        assert reparsed.scenario == "pseudo-hermitian"
        assert reparsed.ph_grid_count == 3
        assert reparsed.ph_grid_start == -0.1
        assert reparsed.ph_epsilon == 0.1

    def test_csv_columns_sweep(self, tmp_path):
        out = tmp_path / "o.csv"
        main(["sweep-ph", "--grid-count", "2", "--grid-start", "0.1",
              "--grid-stop", "0.2", "--tol", "1e-8", "--out", str(out)])
        _, header, rows = read_csv(str(out))
        assert header == ["lam", "S", "chi", "P1", "dP1_dlam", "sensitivity",
                          "qfi_closed", "qfi_numeric", "rate_closed", "hermitian_bound"]
        assert len(rows) == 2

    def test_json_format(self, tmp_path):
        out = tmp_path / "o.json"
        main(["sweep-ph", "--grid-count", "2", "--grid-start", "0.1",
              "--grid-stop", "0.2", "--tol", "1e-8", "--format", "json", "--out", str(out)])
        payload = json.loads(out.read_text())
        assert payload["metadata"]["scenario"] == "pseudo-hermitian"
        assert len(payload["rows"]) == 2
        assert set(payload["rows"][0]) == {"lam", "S", "chi", "P1", "dP1_dlam", "sensitivity",
                                           "qfi_closed", "qfi_numeric", "rate_closed",
                                           "hermitian_bound"}

    def test_exit_codes(self, tmp_path):
        assert main(["sweep-ph", "--config", "missing.cfg"]) == 1
        assert main(["sweep-ph", "--grid-count", "1"]) == 1
        assert main(["find-ep", "--J", "1", "--omega", "1",
                     "--bracket-lo", "2.0", "--bracket-hi", "2.9"]) == 2

    def test_find_ep_output(self, tmp_path):
        out = tmp_path / "ep.csv"
        assert main(["find-ep", "--J", "1", "--omega", "1", "--tol", "1e-10",
                     "--out", str(out)]) == 0
        _, header, rows = read_csv(str(out))
        assert header == ["J", "omega", "bracket_lo", "bracket_hi", "tol", "Gamma_EP"]
        assert float(rows[0][5]) == pytest.approx(0.6180339887499, abs=1e-9)

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sweep-ph", "--grid-count", "4", "--grid-start", "-0.2",
                "--grid-stop", "0.2", "--tol", "1e-8"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_threads_do_not_change_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["scan-ep", "--Gamma", "1.0650605222", "--grid-start", "0.3",
                "--grid-stop", "0.9", "--grid-count", "4", "--tol", "1e-9"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--threads", "4", "--out", str(b)]) == 0
        # metadata differs only in the threads line; data rows must match exactly
        rows_a = [l for l in a.read_text().splitlines() if not l.startswith("#")]
        rows_b = [l for l in b.read_text().splitlines() if not l.startswith("#")]
        assert rows_a == rows_b


class TestVerifySubcommand:
    def test_report_passes_and_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        code_a = main(["verify", "--seed", "13", "--format", "json", "--out", str(a)])
        code_b = main(["verify", "--seed", "13", "--format", "json", "--out", str(b)])
        assert code_a == 0
        assert code_b == 0
        assert a.read_bytes() == b.read_bytes()
        payload = json.loads(a.read_text())
        assert payload["overall_pass"] is True
        assert all(set(r) == {"check", "target", "observed", "tolerance", "passed"}
                   for r in payload["rows"])

    def test_csv_report_has_overall_row(self, tmp_path):
        out = tmp_path / "r.csv"
        assert main(["verify", "--seed", "13", "--out", str(out)]) == 0
        _, header, rows = read_csv(str(out))
        assert header == ["check", "target", "observed", "tolerance", "passed"]
        assert rows[-1][0] == "overall"
        assert rows[-1][4] == "true"


class TestRegressionFixtures:
    """Self-oracle CSVs pinned at the first verified build."""

    def _compare(self, generated: Path, pinned: Path):
        meta_g, header_g, rows_g = read_csv(str(generated))
        meta_p, header_p, rows_p = read_csv(str(pinned))
        assert meta_g == meta_p
        assert header_g == header_p
        assert len(rows_g) == len(rows_p)
        for row_g, row_p in zip(rows_g, rows_p):
            for col, (sg, sp) in enumerate(zip(row_g, row_p)):
                try:
                    vg, vp = float(sg), float(sp)
                except ValueError:
                    assert sg == sp
                    continue
                if math.isnan(vp):
                    assert math.isnan(vg)
                else:
                    assert vg == pytest.approx(vp, rel=1e-9, abs=1e-12), (header_g[col],)

    def test_sweep_default_fixture(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["sweep-ph", "--out", str(out)]) == 0
        self._compare(out, FIXTURES / "sweep_ph_default.csv")

    def test_scan_default_fixture(self, tmp_path):
        out = tmp_path / "scan.csv"
        assert main(["scan-ep", "--out", str(out)]) == 0
        self._compare(out, FIXTURES / "scan_ep_default.csv")
