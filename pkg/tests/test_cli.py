import csv
import json
import math

import pytest

from robinopt import cli
from robinopt.ball import BallSpec, ball_spectrum


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.fixture
def disk_json(tmp_path):
    path = tmp_path / "disk.json"
    path.write_text(
        json.dumps(
            {
                "V": 1.0,
                "components": [
                    {"center": [0.0, 0.0], "a0": 1 / math.sqrt(math.pi), "a": [], "b": []}
                ],
            }
        )
    )
    return str(path)


class TestParsing:
    def test_int_range(self):
        assert cli._parse_int_range("4") == [4]
        assert cli._parse_int_range("3..6") == [3, 4, 5, 6]
        with pytest.raises(cli.UsageError):
            cli._parse_int_range("6..3")
        with pytest.raises(cli.UsageError):
            cli._parse_int_range("x")

    def test_alpha_grid(self):
        assert cli._parse_alpha_grid("1..2:0.5") == pytest.approx([1.0, 1.5, 2.0])
        assert cli._parse_alpha_grid("5,10,14.5") == [5.0, 10.0, 14.5]
        with pytest.raises(cli.UsageError):
            cli._parse_alpha_grid("2..1:0.5")

    def test_usage_exit_code(self, capsys):
        with pytest.raises(SystemExit) as ei:
            cli.main(["no-such-command"])
        assert ei.value.code == 2

    def test_missing_alpha_is_usage_error(self, tmp_path):
        rc = cli.main(["wolf-keller", "--n", "2", "--out", str(tmp_path)])
        assert rc == 2


class TestCommands:
    def test_eigs_matches_ball_oracle(self, disk_json, tmp_path):
        out = str(tmp_path / "out")
        rc = cli.main(
            ["eigs", "--shape", disk_json, "--alpha", "1", "--count", "4",
             "--np", "48", "--out", out, "--svg"]
        )
        assert rc == 0
        rows = read_csv(out + "/eigs.csv")
        assert rows[0] == ["n", "lambda", "residual", "component"]
        exact = []
        for e in ball_spectrum(BallSpec(2, 1 / math.sqrt(math.pi)), 1.0, 4):
            exact.extend([e.lam] * e.multiplicity)
        exact = sorted(exact)[:4]
        got = [float(r[1]) for r in rows[1:]]
        assert got == pytest.approx(exact, rel=1e-6)
        svg = (tmp_path / "out" / "eigs_shape.svg").read_text()
        assert svg.startswith("<svg") and "polyline" in svg

    def test_transition_table(self, tmp_path):
        out = str(tmp_path)
        rc = cli.main(["transition-table", "--n", "3..10", "--out", out])
        assert rc == 0
        rows = read_csv(out + "/transition_table.csv")
        vals = {int(r[0]): float(r[1]) for r in rows[1:]}
        assert vals[3] == pytest.approx(14.51236, abs=1e-3)
        assert vals[10] == pytest.approx(26.49583, abs=1e-3)

    def test_wolf_keller(self, tmp_path):
        out = str(tmp_path)
        rc = cli.main(["wolf-keller", "--n", "2", "--alpha", "5", "--out", out])
        assert rc == 0
        rows = read_csv(out + "/wolf_keller.csv")
        assert rows[0] == ["n", "alpha", "k", "xi1", "xi2", "value"]
        assert float(rows[1][3]) == pytest.approx(math.sqrt(2), abs=1e-9)

    def test_verify_bounds_fig_est(self, tmp_path):
        out = str(tmp_path)
        rc = cli.main(
            ["verify-bounds", "--fig-est", "--n", "1..6", "--out", out]
        )
        assert rc == 0
        rows = read_csv(out + "/verify_bounds.csv")
        assert rows[0] == ["kind", "n", "alpha", "lhs", "rhs", "satisfied"]
        assert all(r[5] == "true" for r in rows[1:])
        assert len(rows) == 1 + 6 * 8

    def test_optimize_disk(self, disk_json, tmp_path):
        out = str(tmp_path / "opt")
        rc = cli.main(
            ["optimize", "--shape", disk_json, "--alpha", "10", "--n", "1",
             "--np", "48", "--max-iters", "3", "--out", out]
        )
        assert rc == 0
        rows = read_csv(out + "/optimize_trace.csv")
        assert rows[0][:3] == ["iter", "objective", "step"]
        objs = [float(r[1]) for r in rows[1:]]
        assert all(b <= a + 1e-12 for a, b in zip(objs, objs[1:]))
        with open(out + "/optimize_shape.json") as fh:
            data = json.load(fh)
        assert len(data["components"]) == 1
