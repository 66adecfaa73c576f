"""CLI: config parsing, CSV/JSON emission, exit codes, reproducibility."""

import json

import pytest

from ofdm_feedback.cli import CSV_HEADER, emit_csv, main, parse_config
from ofdm_feedback.harness import SchemeConfig, run_scheme
from ofdm_feedback.selftest import run_selftest


class TestParseConfig:
    def test_empty_document_gives_defaults(self):
        config = parse_config("", "uniform")
        assert config.num_subcarriers == 128
        assert config.num_taps == 10
        assert config.noise_var == 0.1
        assert config.total_power == 1.0
        assert config.feedback_bits == 128
        assert config.total_bits == 128
        assert config.num_trials == 3000
        assert config.target_ser == 1e-3

    def test_full_document(self):
        text = """
        n = 64
        m = 5
        k = 16
        b = 64
        c_b = 96
        p_t = 2.5
        noise_var = 0.2
        p_e = 1e-4
        trials = 10
        seed = 99
        """
        config = parse_config(text, "waterfill_linear_interp")
        assert config.num_subcarriers == 64
        assert config.num_taps == 5
        assert config.num_nodes == 16
        assert config.feedback_bits == 64
        assert config.total_bits == 96
        assert config.total_power == 2.5
        assert config.noise_var == 0.2
        assert config.target_ser == 1e-4
        assert config.num_trials == 10
        assert config.master_seed == 99

    def test_integer_accepted_for_float_keys(self):
        assert parse_config("p_t = 2", "uniform").total_power == 2.0

    def test_unknown_key_lists_valid_ones(self):
        with pytest.raises(ValueError, match="valid keys"):
            parse_config("bandwidth = 3", "uniform")

    def test_type_mismatches_rejected(self):
        with pytest.raises(ValueError, match="expects int"):
            parse_config("n = 1.5", "uniform")
        with pytest.raises(ValueError, match="expects int"):
            parse_config('k = "many"', "waterfill_linear_interp")
        with pytest.raises(ValueError, match="expects float"):
            parse_config("p_t = true", "uniform")

    def test_field_validation_still_applies(self):
        with pytest.raises(ValueError):
            parse_config("k = 0", "waterfill_linear_interp")

    def test_cli_overrides_win(self):
        config = parse_config("trials = 9\nseed = 1", "uniform", num_trials=4)
        assert config.num_trials == 4
        assert config.master_seed == 1


class TestEmission:
    def test_csv_header_and_row_format(self, tmp_path):
        rec = run_scheme(
            SchemeConfig(scheme="uniform", num_trials=3, master_seed=7)
        )
        path = tmp_path / "out.csv"
        emit_csv([rec], path)
        lines = path.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 2
        cells = lines[1].split(",")
        assert len(cells) == len(CSV_HEADER.split(","))
        assert cells[0] == "uniform"
        assert cells[1] == "capacity"
        assert cells[10] == "10"  # snr_db for P_T=1, noise 0.1
        assert float(cells[13]) == pytest.approx(rec.mean)

    def test_refuses_empty_record_list(self, tmp_path):
        with pytest.raises(ValueError):
            emit_csv([], tmp_path / "out.csv")


class TestMainExitCodes:
    def run_main(self, *argv):
        return main(list(argv))

    def test_selftest_passes(self, capsys):
        assert self.run_main("selftest") == 0
        out = capsys.readouterr().out
        assert "checks passed" in out

    def test_run_writes_csv_and_json(self, tmp_path, capsys):
        code = self.run_main(
            "run", "--scheme", "uniform", "--trials", "3",
            "--out", str(tmp_path),
        )
        assert code == 0
        assert (tmp_path / "run.csv").exists()
        payload = json.loads((tmp_path / "run.json").read_text())
        assert len(payload["records"]) == 1
        assert payload["records"][0]["scheme"] == "uniform"
        assert "wrote" in capsys.readouterr().out

    def test_missing_config_file_is_usage_error(self, tmp_path, capsys):
        code = self.run_main(
            "run", "--scheme", "uniform", "--config",
            str(tmp_path / "absent.toml"), "--out", str(tmp_path),
        )
        assert code == 2
        assert capsys.readouterr().err.startswith("ERROR:")

    def test_bad_toml_is_usage_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.toml"
        bad.write_text("n = = 3")
        code = self.run_main(
            "run", "--scheme", "uniform", "--config", str(bad),
            "--out", str(tmp_path),
        )
        assert code == 2
        assert capsys.readouterr().err.startswith("ERROR:")

    def test_overwrite_needs_force(self, tmp_path, capsys):
        argv = (
            "run", "--scheme", "uniform", "--trials", "2", "--out", str(tmp_path)
        )
        assert self.run_main(*argv) == 0
        assert self.run_main(*argv) == 1
        assert "refusing to overwrite" in capsys.readouterr().err
        assert self.run_main(*argv, "--force") == 0

    def test_unknown_scheme_is_argparse_error(self, capsys):
        assert self.run_main("run", "--scheme", "fancy") == 2

    def test_unknown_figure_is_argparse_error(self, capsys):
        assert self.run_main("figure", "9") == 2

    def test_bad_axis_values_are_usage_errors(self, tmp_path, capsys):
        code = self.run_main(
            "sweep", "--scheme", "uniform", "--axis", "K",
            "--values", "4.5", "--out", str(tmp_path),
        )
        assert code == 2
        code = self.run_main(
            "sweep", "--scheme", "uniform", "--axis", "K",
            "--values", ",", "--out", str(tmp_path),
        )
        assert code == 2


def test_selftest_checks_all_pass():
    results = run_selftest()
    assert len(results) >= 25
    failures = [(name, detail) for name, ok, detail in results if not ok]
    assert failures == []


class TestReproducibility:
    def test_sweep_csv_is_byte_identical_across_runs(self, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            code = main(
                [
                    "sweep", "--scheme", "waterfill_linear_interp",
                    "--axis", "K", "--values", "4,8,16",
                    "--trials", "5", "--seed", "123", "--out", str(out),
                ]
            )
            assert code == 0
            outs.append((out / "sweep.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_snr_sweep_roundtrips_through_csv(self, tmp_path):
        code = main(
            [
                "sweep", "--scheme", "uniform", "--axis", "SNR",
                "--values", "1,10,100", "--trials", "2", "--out", str(tmp_path),
            ]
        )
        assert code == 0
        lines = (tmp_path / "sweep.csv").read_text().splitlines()
        header = lines[0].split(",")
        snr_col = header.index("snr_db")
        p_t_col = header.index("p_t")
        snrs = [float(row.split(",")[snr_col]) for row in lines[1:]]
        p_ts = [float(row.split(",")[p_t_col]) for row in lines[1:]]
        assert snrs == pytest.approx([0.0, 10.0, 20.0])
        assert p_ts == pytest.approx([0.1, 1.0, 10.0])
