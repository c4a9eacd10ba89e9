"""End-to-end command-line behavior, run in process."""

import json

import pytest

from sinprod import cli


def run(capsys, *argv):
    rc = cli.main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


class TestEval:
    def test_lattice_zero(self, capsys):
        rc, out, _ = run(capsys, "eval", "--x", "1/8pi", "--depth", "16")
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "depth,value,log_value,lower,exact_zero"
        assert lines[1] == "16,0.0,-inf,0.0,true"

    def test_certified_enclosure(self, capsys):
        rc, out, _ = run(capsys, "eval", "--x", "pi/3", "--depth", "200", "--certify")
        assert rc == 0
        assert out.splitlines()[1] == (
            "200,0.7014850309749951,-0.35455571826316534,0.6668058458287474,false"
        )

    def test_constructed_angle(self, capsys):
        rc, out, _ = run(capsys, "eval", "--x", "constructed", "--depth", "300")
        assert rc == 0
        row = out.splitlines()[1].split(",")
        assert row[0] == "300"
        assert float(row[1]) < 0.4

    def test_json_format(self, capsys):
        rc, out, _ = run(capsys, "eval", "--x", "1/8pi", "--depth", "16", "--format", "json")
        assert rc == 0
        got = json.loads(out)
        assert got["exact_zero"] is True
        assert got["log_value"] == "-inf"

    def test_bad_angle(self, capsys):
        rc, _, err = run(capsys, "eval", "--x", "foo")
        assert rc == 1
        assert "sinprod: error:" in err
        assert "position 0" in err


class TestTable:
    def test_reference_first_row(self, capsys):
        rc, out, _ = run(capsys, "table", "--kmin", "6", "--kmax", "8")
        assert rc == 0
        lines = out.splitlines()
        assert lines[1] == "6,1.2419727451,,1.1713968"
        assert lines[2].startswith("7,1.2311527243,")

    def test_kmin_zero_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as err:
            cli.main(["table", "--kmin", "0", "--kmax", "5"])
        assert err.value.code == 2

    def test_crossed_window_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as err:
            cli.main(["table", "--kmin", "8", "--kmax", "6"])
        assert err.value.code == 2

    def test_fit_block(self, capsys):
        rc, out, _ = run(capsys, "table", "--kmin", "6", "--kmax", "12", "--fit")
        assert rc == 0
        assert "fit_window,6:12" in out.splitlines()

    def test_fit_json_object(self, capsys):
        rc, out, _ = run(
            capsys, "table", "--kmin", "6", "--kmax", "12", "--fit",
            "--window", "7:12", "--format", "json",
        )
        assert rc == 0
        got = json.loads(out)
        assert got[0]["inv_sqrt_diff"] is None
        fit = got[-1]["fit"]
        assert fit["window"] == [7, 12]
        assert 1.16 < fit["m_inf"] < 1.18

    def test_malformed_fit_window(self, capsys):
        rc, _, err = run(capsys, "table", "--kmin", "6", "--kmax", "8", "--fit", "--window", "a:b")
        assert rc == 1
        assert "fit window" in err

    def test_byte_identical_reruns(self, capsys):
        _, first, _ = run(capsys, "table", "--kmin", "6", "--kmax", "9")
        _, second, _ = run(capsys, "table", "--kmin", "6", "--kmax", "9")
        assert first == second

    def test_worker_count_invariance(self, capsys):
        _, one, _ = run(capsys, "table", "--kmin", "6", "--kmax", "9", "--workers", "1")
        _, two, _ = run(capsys, "table", "--kmin", "6", "--kmax", "9", "--workers", "2")
        assert one == two

    def test_output_file_matches_stdout(self, capsys, tmp_path):
        _, out, _ = run(capsys, "table", "--kmin", "6", "--kmax", "8")
        path = tmp_path / "t.csv"
        rc, silent, _ = run(capsys, "table", "--kmin", "6", "--kmax", "8", "--output", str(path))
        assert rc == 0
        assert silent == ""
        assert path.read_bytes().decode() == out
        assert "\r" not in path.read_bytes().decode()

    def test_figure_file(self, capsys, tmp_path):
        png = tmp_path / "t.png"
        rc, _, _ = run(capsys, "table", "--kmin", "6", "--kmax", "8", "--figure", str(png))
        assert rc == 0
        assert png.stat().st_size > 0


class TestZeros:
    def test_chain_reaches_threshold(self, capsys):
        rc, out, _ = run(capsys, "zeros", "--threshold", "0.75")
        assert rc == 0
        lines = out.splitlines()
        assert "threshold,0.75" in lines
        assert "reached_at,16" in lines

    def test_unreached_threshold_fails(self, capsys):
        rc, out, _ = run(capsys, "zeros", "--threshold", "0.0001", "--jmax", "6")
        assert rc == 1
        assert "reached_at,none" in out.splitlines()

    def test_json_chain(self, capsys):
        rc, out, _ = run(capsys, "zeros", "--threshold", "0.75", "--format", "json")
        got = json.loads(out)
        assert got["reached_at"] == 16
        assert got["chain"][0]["depth"] == 2
        assert all(step["within_bound"] for step in got["chain"])


class TestMeasure:
    def test_empirical_passes(self, capsys):
        rc, out, _ = run(capsys, "measure", "--k", "8", "--samples", "2000", "--seed", "42")
        assert rc == 0
        assert out.splitlines()[1].endswith("true")

    def test_superlevel_passes(self, capsys):
        rc, out, _ = run(capsys, "measure", "--bk", "--k", "3", "--grid", "1024")
        assert rc == 0
        got_line = out.splitlines()[1]
        assert got_line.endswith("true")

    def test_sample_count_usage_error(self, capsys):
        with pytest.raises(SystemExit) as err:
            cli.main(["measure", "--k", "4", "--samples", "0"])
        assert err.value.code == 2

    def test_json(self, capsys):
        rc, out, _ = run(
            capsys, "measure", "--k", "8", "--samples", "2000", "--seed", "42",
            "--format", "json",
        )
        got = json.loads(out)
        assert got["passes"] is True
        assert got["samples"] == 2000


class TestUsc:
    def test_clean_check(self, capsys):
        rc, out, _ = run(capsys, "usc", "--x", "pi/3", "--eps", "0.3", "--trials", "200")
        assert rc == 0
        lines = out.splitlines()
        assert "lambda,0.7499999999999999" in lines
        assert "delta,0.0029456646387225798" in lines
        assert "growth_violations,0" in lines
        assert "value_violations,0" in lines

    def test_strict_without_certificate(self, capsys):
        rc, _, err = run(capsys, "usc", "--x", "0.77", "--eps", "0.01", "--strict")
        assert rc == 1
        assert "certificate" in err

    def test_json_witness(self, capsys):
        rc, out, _ = run(
            capsys, "usc", "--x", "3/16pi", "--eps", "0.2", "--trials", "100",
            "--format", "json",
        )
        assert rc == 0
        got = json.loads(out)
        assert got["witness"]["lattice"] is True
        assert got["witness"]["k"] == 4
        assert got["value_violations"] == 0


class TestLayercake:
    def test_cross_check(self, capsys):
        rc, out, _ = run(capsys, "layercake", "--k", "4")
        assert rc == 0
        row = out.splitlines()[1].split(",")
        assert row[0] == "4"
        assert float(row[3]) < 1e-3
        assert row[4] == "true"

    def test_depth_zero_has_no_reference(self, capsys):
        rc, out, _ = run(capsys, "layercake", "--k", "0", "--xpoints", "64")
        assert rc == 0
        row = out.splitlines()[1].split(",")
        assert row[2] == ""  # no shallower rule to compare against
        assert row[4] == "true"

    def test_json_null_reference(self, capsys):
        rc, out, _ = run(capsys, "layercake", "--k", "0", "--xpoints", "64", "--format", "json")
        got = json.loads(out)
        assert got["midpoint_reference"] is None
        assert got["passes"] is True


class TestPlotdata:
    def test_grid_structure(self, capsys):
        rc, out, _ = run(capsys, "plotdata", "--points", "7", "--depth", "6")
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "x,f"
        rows = [line.split(",") for line in lines[1:]]
        assert len(rows) == 7
        # endpoints are exact lattice zeros
        assert rows[0][1] == "0.0" and rows[-1][1] == "0.0"
        # reflection symmetry holds bitwise on the dyadic grid
        for i in range(7):
            assert rows[i][1] == rows[6 - i][1]
        assert float(rows[1][1]) > 0.0

    def test_point_count_usage_error(self, capsys):
        with pytest.raises(SystemExit) as err:
            cli.main(["plotdata", "--points", "1"])
        assert err.value.code == 2

    def test_json(self, capsys):
        rc, out, _ = run(capsys, "plotdata", "--points", "5", "--depth", "4", "--format", "json")
        got = json.loads(out)
        assert len(got) == 5
        assert got[0]["x"] == 0.0 and got[0]["f"] == 0.0

    def test_figure_file(self, capsys, tmp_path):
        png = tmp_path / "p.png"
        rc, _, _ = run(capsys, "plotdata", "--points", "9", "--depth", "6", "--figure", str(png))
        assert rc == 0
        assert png.stat().st_size > 0


def test_no_arguments_is_usage_error():
    with pytest.raises(SystemExit) as err:
        cli.main([])
    assert err.value.code == 2
