"""Command-line entry points, exit codes, and generator determinism."""

import csv

import pytest

from geocover import cli
from geocover.instancefile import parse_instance

KINDS = ("quadrant", "unitsquare", "interval", "random-sc", "random-hs")


def gen(tmp_path, kind, *extra):
    out = tmp_path / f"{kind}.txt"
    assert cli.main(["gen", kind, "--out", str(out), *extra]) == 0
    return out


class TestGen:
    @pytest.mark.parametrize("kind", KINDS)
    def test_output_parses(self, tmp_path, kind):
        inst = parse_instance(gen(tmp_path, kind, "--m", "4", "--seed", "5"))
        assert inst.events

    def test_seed_reproducible(self, tmp_path):
        dirs = [tmp_path / part for part in "abc"]
        for d in dirs:
            d.mkdir()
        a = gen(dirs[0], "random-sc", "--seed", "9", "--events", "30")
        b = gen(dirs[1], "random-sc", "--seed", "9", "--events", "30")
        assert a.read_text() == b.read_text()
        c = gen(dirs[2], "random-sc", "--seed", "10", "--events", "30")
        assert a.read_text() != c.read_text()

    def test_env_seed(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("GEOCOVER_SEED", "9")
        a = gen(tmp_path, "random-hs", "--events", "25")
        capsys.readouterr()
        assert cli.main(["gen", "random-hs", "--events", "25"]) == 0
        assert capsys.readouterr().out == a.read_text()

    def test_stdout_default(self, capsys):
        assert cli.main(["gen", "interval"]) == 0
        assert capsys.readouterr().out.startswith("META dim=1 N=4 mode=set_cover")


class TestRun:
    def test_interval_roundtrip(self, tmp_path, capsys):
        inst = gen(tmp_path, "interval")
        out = tmp_path / "rows.csv"
        code = cli.main(
            ["run", str(inst), "--algo", "interval", "--oracle", "--csv", str(out)]
        )
        assert code == 0
        assert "ratio=2.0000" in capsys.readouterr().out
        rows = list(csv.DictReader(out.open()))
        assert rows[0]["ratio"] == "2.000000"
        assert rows[0]["algo"] == "interval"

    def test_stdout_csv(self, tmp_path, capsys):
        inst = gen(tmp_path, "random-sc", "--dim", "1", "--events", "12", "--seed", "3")
        capsys.readouterr()
        assert cli.main(["run", str(inst), "--algo", "dynsc", "--timing", "zero"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("run_id,algo,event_idx")
        assert len(lines) == 13

    def test_oracle_command(self, tmp_path, capsys):
        inst = gen(tmp_path, "interval")
        capsys.readouterr()
        assert cli.main(["oracle", str(inst)]) == 0
        assert "opt=1 status=exact" in capsys.readouterr().out


class TestExitCodes:
    def test_parse_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("SET 0 0 1\n")
        assert cli.main(["run", str(bad), "--algo", "dynsc"]) == 3
        assert "first record must be META" in capsys.readouterr().err

    def test_infeasible(self, tmp_path, capsys):
        inf = tmp_path / "inf.txt"
        inf.write_text("META dim=1 N=8 mode=set_cover\nSET 0 0 1\n+P 0 5\n")
        assert cli.main(["run", str(inf), "--algo", "dynsc"]) == 2
        assert "infeasible" in capsys.readouterr().err

    def test_precondition(self, tmp_path, capsys):
        inst = gen(tmp_path, "interval")
        capsys.readouterr()
        assert cli.main(["run", str(inst), "--algo", "hitcover"]) == 1
        assert "hitting_set" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert cli.main(["run", str(tmp_path / "nope.txt"), "--algo", "dynsc"]) == 1


class TestGames:
    def test_adversary_csv(self, tmp_path, capsys):
        out = tmp_path / "adv.csv"
        code = cli.main(
            ["adversary", "--m-list", "4,16", "--csv", str(out)]
        )
        assert code == 0
        rows = list(csv.DictReader(out.open()))
        assert [r["m"] for r in rows] == ["4", "16"]
        ratios = [float(r["ratio"]) for r in rows]
        assert ratios[0] >= 1.0 and ratios[1] >= ratios[0]

    def test_interval_game(self, capsys):
        assert cli.main(["adversary", "--kind", "interval"]) == 0
        assert "ratio=2.0000" in capsys.readouterr().out


class TestBenchPlot:
    def test_bench_then_plot(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        code = cli.main(
            ["bench", "--m-list", "4,8", "--events", "40", "--seed", "2",
             "--csv", str(out)]
        )
        assert code == 0
        rows = list(csv.DictReader(out.open()))
        assert {r["m"] for r in rows} == {"4", "8"}
        assert all(float(r["mean_touched"]) > 0 for r in rows)

        png = tmp_path / "bench.png"
        assert cli.main(["plot", str(out), "--out", str(png), "--y", "mean_touched"]) == 0
        assert png.stat().st_size > 1000
