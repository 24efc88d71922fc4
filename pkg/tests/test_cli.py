from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from conftest import datum
from seidelcomb.affine import WallCrossing
from seidelcomb.cli import run
from seidelcomb.orbit import NovikovCoset, orbit_data
from seidelcomb.qchev import QHElement


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def ok(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    return out


def walls_of(out):
    return [(tuple(c["root"]), c["level"]) for c in json.loads(out)["crossings"]]


A1_, A2_, A0_ = (2, -1), (-1, 2), (1, 1)  # simple roots and highest root, as pairings


def test_walls_example():
    assert walls_of(ok("walls", "A2", "--from=-a", "--to=1,1")) == [
        (A2_, 0), (A0_, 0), (A1_, 0), (A0_, 1)]
    near_a2 = ok("walls", "A2", "--from=-a", "--to=1,1", "--avalues=1/11,1/7")
    assert walls_of(near_a2) == [(A1_, 0), (A0_, 0), (A2_, 0), (A0_, 1)]
    assert json.loads(near_a2)["a"] != json.loads(ok("walls", "A2", "--from=-a", "--to=1,1"))["a"]


def test_deg_example():
    assert json.loads(ok("deg", "A2", "--q=0,0"))["deg"] == 0
    data = json.loads(ok("deg", "A2", "--q=1,1"))
    assert data["deg"] == 4 and "a" in data and data["root"] == "A2"


def test_pwcheck_example():
    lines = ok("pwcheck", "A2", "--I=2", "--k=4", "--maxdeg=2").splitlines()
    rows = [json.loads(x) for x in lines]
    assert rows and all(r["equal"] for r in rows)
    assert {"orbit", "inputs", "target", "degree", "lhs", "rhs", "equal"} <= set(rows[0])


@pytest.mark.parametrize("argv", [
    ["deg", "A2", "--q=1"],
    ["deg", "Z3", "--q=1"],
    ["deg", "A2"],
    ["nosuch", "A2"],
    ["deglt", "A2", "--I=5", "--q=0,0"],
    ["deg", "A2", "--q=x,1"],
    ["qmul", "A2", "--I=2", "--i=2"],
])
def test_usage_errors_exit_1(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == "" and err


@pytest.mark.parametrize("argv", [
    ["deg", "A2", "--q=1,1", "--avalues=1/2,1/2"],
    ["pmul", "A1", "--q0=-1", "--q1=0"],
    ["hofer", "A2", "--I=2", "--q=1,0", "--c=-1"],
])
def test_domain_errors_exit_2(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == "" and err.startswith("error:")


COMMANDS = [
    ["rootinfo", "B3", "--lattice=ad"],
    ["walls", "G2", "--from=-a", "--to=2,1"],
    ["deg", "C2", "--q=-1,2"],
    ["wq", "A3", "--q=1,-2,0"],
    ["ellprime", "B2"],
    ["deglt", "A2", "--I=1", "--q=2,-1"],
    ["hofer", "G2", "--I=2", "--q=1,1"],
    ["lift", "B2", "--I=1", "--q=1,1"],
    ["assoclift", "A2", "--I=2", "--q=1,0"],
    ["seidel", "A2", "--I=2", "--q=0,1"],
    ["seidel", "A2", "--q=1,1", "--basis=prime"],
    ["pmul", "A2", "--q0=1,1", "--q1=-1,0"],
    ["imagebasis", "A2", "--w=1", "--q=0,1"],
    ["qmul", "A2", "--i=1", "--w=2"],
    ["qmul", "B2", "--I=1", "--seq=2,2,2,2"],
    ["pwcheck", "B2", "--I=1", "--k=3", "--maxdeg=1"],
    ["sweep", "A2", "--I=2", "--radius=1"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
@pytest.mark.parametrize("fmt", ["json", "csv", "pretty"])
def test_every_command_is_deterministic(argv, fmt):
    first = ok(*argv, f"--format={fmt}")
    assert first and first == ok(*argv, f"--format={fmt}")
    if fmt == "json":
        for line in first.splitlines():
            json.loads(line)
    elif fmt == "csv":
        rows = list(csv.reader(io.StringIO(first)))
        assert len({len(r) for r in rows}) == 1


def test_console_script_matches_run():
    argv = ["walls", "A2", "--from=-a", "--to=1,1"]
    proc = subprocess.run([sys.executable, "-m", "seidelcomb.cli", *argv],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == ok(*argv)


def test_json_round_trips_into_domain_types():
    R = datum("A2")
    O = orbit_data(R, {2})
    lift = json.loads(ok("lift", "A2", "--I=2", "--q=0,1"))
    nov = NovikovCoset.from_json(O, lift["coset"])
    assert nov == NovikovCoset(O, O.y0, (0, 1))
    assert tuple(Fraction(x) for x in lift["lift"]) == (0, 0)

    seidel = json.loads(ok("seidel", "A2", "--I=2", "--q=1,0"))
    assert NovikovCoset.from_json(O, seidel["term"]["nov"]) == NovikovCoset(O, O.y0, (1, 1))

    walls = json.loads(ok("walls", "A2", "--from=-a", "--to=1,1"))
    crossings = [WallCrossing.from_json(R, c) for c in walls["crossings"]]
    assert [c.to_json() for c in crossings] == walls["crossings"]

    qm = json.loads(ok("qmul", "A2", "--I=2", "--seq=1,1,1"))
    assert QHElement.from_json(qm["terms"]) == QHElement({((), (1, 0)): 1})

    a = [Fraction(x) for x in walls["a"]]
    assert all(0 < v for v in a) and sum(a) < 1
