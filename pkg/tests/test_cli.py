"""End-to-end CLI behavior: output contracts and exit codes."""

import csv
import io
import math

import pytest

from dectlink.cli import main
from dectlink.config import CONFIG_ENV_VAR

from conftest import synth_capture_rows, write_capture


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    return header, body


class TestModelEval:
    def test_fspl_reference_point(self, capsys):
        code, out, err = run_cli(capsys, "model", "eval", "--model", "fspl",
                                 "--d", "2294", "--f", "1.899e9")
        assert code == 0
        assert out == "105.23 dB\n"

    def test_okumura_hata_flags_out_of_range_use(self, capsys):
        code, out, _ = run_cli(capsys, "model", "eval", "--model", "okumura-hata",
                               "--d", "2470", "--h-tx", "10", "--h-rx", "1.5")
        assert code == 0
        assert out.startswith("156.51 dB\n")
        assert "flag frequency-out-of-range" in out
        assert "flag tx-height-out-of-range" in out

    def test_two_ray_without_geometry_is_usage_error(self, capsys):
        code, out, err = run_cli(capsys, "model", "eval", "--model", "two-ray", "--d", "650")
        assert code == 2
        assert out == ""
        assert "antenna heights" in err

    def test_unknown_model_rejected_by_parser(self, capsys):
        code, _, err = run_cli(capsys, "model", "eval", "--model", "ray-tracing", "--d", "1")
        assert code == 2

    def test_config_file_and_flag_precedence(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("frequency_hz=0.9495e9\n")  # half the default
        _, out, _ = run_cli(capsys, "model", "eval", "--model", "fspl", "--d", "2294",
                            "--config", str(cfg))
        assert out == "99.21 dB\n"  # 105.23 - 20*log10(2)
        _, out, _ = run_cli(capsys, "model", "eval", "--model", "fspl", "--d", "2294",
                            "--config", str(cfg), "--f", "1.899e9")
        assert out == "105.23 dB\n"

    def test_env_var_names_config_file(self, capsys, tmp_path, monkeypatch):
        cfg = tmp_path / "env.cfg"
        cfg.write_text("frequency_hz=0.9495e9\n")
        monkeypatch.setenv(CONFIG_ENV_VAR, str(cfg))
        _, out, _ = run_cli(capsys, "model", "eval", "--model", "fspl", "--d", "2294")
        assert out == "99.21 dB\n"
        # an explicit --config outranks the environment
        other = tmp_path / "other.cfg"
        other.write_text("frequency_hz=1.899e9\n")
        _, out, _ = run_cli(capsys, "model", "eval", "--model", "fspl", "--d", "2294",
                            "--config", str(other))
        assert out == "105.23 dB\n"


class TestModelSweep:
    def test_one_decade_of_fspl(self, capsys):
        code, out, _ = run_cli(capsys, "model", "sweep", "--models", "fspl",
                               "--start", "1", "--end", "10", "--points", "2")
        assert code == 0
        header, body = parse_csv(out)
        assert header == ["distance_m", "fspl_db"]
        assert float(body[1][1]) - float(body[0][1]) == pytest.approx(20.0, abs=1e-9)

    def test_all_models_give_seven_columns(self, capsys):
        code, out, _ = run_cli(capsys, "model", "sweep", "--models", "all",
                               "--start", "10", "--end", "100", "--points", "3",
                               "--h-tx", "10", "--h-rx", "1.5")
        assert code == 0
        header, body = parse_csv(out)
        assert len(header) == 7
        assert all(len(row) == 7 for row in body)

    def test_indoor_models_hit_hand_computed_endpoints(self, capsys):
        _, out, _ = run_cli(capsys, "model", "sweep", "--models", "inh-los,inf-los",
                            "--start", "10", "--end", "200", "--points", "5")
        header, body = parse_csv(out)
        assert header == ["distance_m", "inh-los_db", "inf-los_db"]
        assert float(body[0][1]) == pytest.approx(55.270499294740354, abs=1e-9)
        assert float(body[-1][1]) == pytest.approx(77.77831821972723, abs=1e-9)
        assert float(body[0][2]) == pytest.approx(58.63197433000334, abs=1e-9)
        assert float(body[-1][2]) == pytest.approx(86.60411923677893, abs=1e-9)

    def test_invalid_range_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "model", "sweep", "--models", "fspl",
                               "--start", "100", "--end", "10", "--points", "5")
        assert code == 2
        assert "d_start" in err

    def test_unknown_model_in_list(self, capsys):
        code, _, err = run_cli(capsys, "model", "sweep", "--models", "fspl,psychic",
                               "--start", "1", "--end", "10", "--points", "2")
        assert code == 2
        assert "psychic" in err

    def test_out_file(self, capsys, tmp_path):
        dest = tmp_path / "sweep.csv"
        code, out, _ = run_cli(capsys, "model", "sweep", "--models", "fspl",
                               "--start", "1", "--end", "10", "--points", "4",
                               "--out", str(dest))
        assert code == 0
        assert out == ""
        assert dest.read_text().startswith("distance_m,fspl_db\n")


class TestAnalyze:
    def test_constant_capture_statistics(self, capsys, tmp_path):
        rows = [(i, -80.0, -80.0, 10.0, 1, 1) for i in range(300)]
        path = write_capture(tmp_path, "flat", rows)
        code, out, _ = run_cli(capsys, "analyze", str(path), "--format", "csv")
        assert code == 0
        header, body = parse_csv(out)
        record = dict(zip(header, body[0]))
        assert float(record["sr_pcc_pct"]) == 100.0
        assert float(record["std_pcc_rssi_db"]) == 0.0
        assert float(record["mean_pcc_rssi_dbm"]) == pytest.approx(-80.0, abs=1e-9)
        assert float(record["empirical_pl_pcc_db"]) == pytest.approx(82.0, abs=1e-9)
        assert record["reliable"] == "1"

    def test_lost_rows_count_against_success_rate(self, capsys, tmp_path):
        rows = [(i, -80.0, -80.0, 10.0, 1, 1) for i in range(7)]
        rows += [(7 + i, None, None, None, 0, 0) for i in range(3)]
        path = write_capture(tmp_path, "lossy", rows)
        _, out, _ = run_cli(capsys, "analyze", str(path), "--format", "csv")
        header, body = parse_csv(out)
        record = dict(zip(header, body[0]))
        assert float(record["sr_pcc_pct"]) == pytest.approx(70.0, abs=1e-12)

    def test_rows_sorted_by_distance(self, capsys, tmp_path):
        far = write_capture(tmp_path, "far", synth_capture_rows(1, n=30), distance_m=650.0)
        near = write_capture(tmp_path, "near", synth_capture_rows(2, n=30), distance_m=40.0)
        _, out, _ = run_cli(capsys, "analyze", str(far), str(near), "--format", "csv")
        _, body = parse_csv(out)
        assert [row[0] for row in body] == ["near", "far"]

    def test_matches_library_statistics(self, capsys, tmp_path):
        """The CSV carries full precision, so values equal the library's output."""
        from dectlink.budget import LinkBudget, ReliabilityThresholds
        from dectlink.campaign import load_capture, summarize

        path = write_capture(tmp_path, "rand", synth_capture_rows(99, n=200),
                             distance_m=120.0, p_tx_dbm=0.0)
        _, out, _ = run_cli(capsys, "analyze", str(path), "--format", "csv")
        header, body = parse_csv(out)
        record = dict(zip(header, body[0]))
        expected = summarize(load_capture(path), LinkBudget(), ReliabilityThresholds())
        assert float(record["mean_pcc_rssi_dbm"]) == expected.mean_pcc_rssi_dbm
        assert float(record["std_pcc_rssi_db"]) == expected.std_pcc_rssi_db
        assert float(record["mean_snr_db"]) == expected.mean_snr_db
        assert float(record["empirical_pl_pcc_db"]) == expected.empirical_pl_pcc_db

    def test_malformed_capture_reports_line(self, capsys, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text(
            "seq,pcc_rssi_dbm,pdc_rssi_dbm,snr_db,pcc_crc_ok,pdc_crc_ok\n"
            "0,-80,-80,10,1,1\n"
            "1,,-81,9,1,0\n"
        )
        (tmp_path / "bad.meta").write_text(
            "location_id=bad\ndistance_m=40\nenvironment=los-indoor\n"
            "p_tx_dbm=0\nrequest_count=2\n"
        )
        code, _, err = run_cli(capsys, "analyze", str(p))
        assert code == 2
        assert "line 3" in err

    def test_table_reports_max_reliable_distance(self, capsys, tmp_path):
        path = write_capture(tmp_path, "good", [(i, -80.0, -80.0, 10.0, 1, 1) for i in range(50)],
                             distance_m=61.0)
        code, out, _ = run_cli(capsys, "analyze", str(path))
        assert code == 0
        assert "max reliable distance: 61.00 m (good)" in out


class TestFit:
    def _write_points(self, tmp_path, sigma=0.0):
        lines = ["distance_m,pl_db"]
        for i in range(20):
            d = 10 ** (2.5 * i / 19)
            lines.append(f"{d},{38.0 + 27.0 * math.log10(d)}")
        p = tmp_path / "points.csv"
        p.write_text("\n".join(lines) + "\n")
        return p

    def test_closed_form_output(self, capsys, tmp_path):
        p = self._write_points(tmp_path)
        code, out, _ = run_cli(capsys, "fit", "--input", str(p))
        assert code == 0
        assert "pl0_db: 38.00" in out
        assert "exponent: 2.7000" in out
        assert "iterations: 0" in out
        assert "converged: yes" in out

    def test_iterative_engine(self, capsys, tmp_path):
        p = self._write_points(tmp_path)
        code, out, _ = run_cli(capsys, "fit", "--input", str(p), "--engine", "iterative")
        assert code == 0
        assert "engine: iterative" in out
        assert "exponent: 2.7000" in out

    def test_bad_header_is_usage_error(self, capsys, tmp_path):
        p = tmp_path / "pts.csv"
        p.write_text("d,pl\n10,60\n")
        code, _, err = run_cli(capsys, "fit", "--input", str(p))
        assert code == 2
        assert "distance_m,pl_db" in err

    def test_missing_file_is_usage_error(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "fit", "--input", str(tmp_path / "absent.csv"))
        assert code == 2


class TestPlan:
    def test_reference_outdoor_case(self, capsys):
        code, out, _ = run_cli(capsys, "plan", "--environment", "outdoor",
                               "--tx-power", "19", "--criterion", "rssi")
        assert code == 0
        assert "allowed PL 116.00 dB -> 7926.58 m" in out

    def test_csv_rows_and_binding_marker(self, capsys):
        code, out, _ = run_cli(capsys, "plan", "--environment", "outdoor",
                               "--tx-power", "19", "--format", "csv")
        assert code == 0
        header, body = parse_csv(out)
        assert header == ["model", "criterion", "allowed_pl_db", "max_distance_m", "binding"]
        by_criterion = {row[1]: row for row in body}
        assert float(by_criterion["rssi"][3]) == pytest.approx(7926.58, abs=0.01)
        # default noise budget makes snr the stricter criterion here
        assert by_criterion["snr"][4] == "1"
        assert by_criterion["rssi"][4] == "0"

    def test_twenty_db_per_decade_scaling(self, capsys):
        def d_star(tx):
            _, out, _ = run_cli(capsys, "plan", "--environment", "outdoor",
                                "--tx-power", str(tx), "--criterion", "rssi",
                                "--format", "csv")
            _, body = parse_csv(out)
            return float(body[0][3])

        assert d_star(-20.0) / d_star(19.0) == pytest.approx(10 ** (-39 / 20), rel=1e-5)

    def test_two_ray_scaling_is_half_the_decade_exponent(self, capsys):
        def d_star(tx):
            _, out, _ = run_cli(capsys, "plan", "--environment", "outdoor",
                                "--tx-power", str(tx), "--criterion", "rssi",
                                "--models", "two-ray", "--h-tx", "10", "--h-rx", "1.5",
                                "--format", "csv")
            _, body = parse_csv(out)
            return float(body[0][3])

        assert d_star(39.0) / d_star(19.0) == pytest.approx(10 ** 0.5, rel=1e-5)

    def test_unreachable_is_structured_success(self, capsys):
        code, out, _ = run_cli(capsys, "plan", "--environment", "outdoor",
                               "--tx-power", "-100", "--criterion", "rssi")
        assert code == 0
        assert "unreachable" in out
        code, out, _ = run_cli(capsys, "plan", "--environment", "outdoor",
                               "--tx-power", "-100", "--criterion", "rssi",
                               "--format", "csv")
        assert code == 0
        _, body = parse_csv(out)
        assert body[0][3] == "unreachable"


class TestReport:
    def test_fspl_regression_and_flagging(self, capsys):
        code, out, _ = run_cli(capsys, "report", "--format", "csv")
        assert code == 0
        header, body = parse_csv(out)
        rows = {row[0]: dict(zip(header, row)) for row in body}
        assert rows["Kaukajarvi Lake"]["fspl_status"] == "ok"
        assert abs(float(rows["Kaukajarvi Lake"]["fspl_delta_db"])) <= 0.25
        assert rows["Kangasala Tower"]["fspl_status"] == "ok"
        assert rows["Hallila Power Line"]["fspl_status"] == "inconsistent"
        assert float(rows["Hallila Power Line"]["fspl_delta_db"]) == pytest.approx(
            -5.27, abs=0.01
        )

    def test_geometry_models_need_heights(self, capsys):
        _, out, _ = run_cli(capsys, "report", "--format", "csv")
        header, body = parse_csv(out)
        rows = {row[0]: dict(zip(header, row)) for row in body}
        assert rows["Hallila Power Line"]["two_ray_computed_db"] == ""
        _, out, _ = run_cli(capsys, "report", "--format", "csv", "--h-tx", "10",
                            "--h-rx", "1.5")
        header, body = parse_csv(out)
        rows = {row[0]: dict(zip(header, row)) for row in body}
        assert float(rows["Hallila Power Line"]["two_ray_computed_db"]) == pytest.approx(
            88.99, abs=0.01
        )

    def test_human_format_marks_inconsistencies(self, capsys):
        code, out, _ = run_cli(capsys, "report")
        assert code == 0
        assert "INCONSISTENT" in out
        assert "Hallila Power Line" in out
