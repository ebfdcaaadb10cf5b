import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from hurwitz.arith.gaussian import GaussRat
from hurwitz.arith.tokens import parse_gauss_rat
from hurwitz.cli import main
from hurwitz.utils.slugify import run_slug, slugify
from tests.factories import RunConfigFactory, SmallOOverridesFactory


def test_expand(capsys, tmp_path):
    out = tmp_path / "expansion.json"
    assert main(["expand", "5/12", "--out", str(out)]) == 0
    assert "2,3,-2" in capsys.readouterr().out
    document = json.loads(out.read_text())
    assert document["digits"] == ["2", "3", "-2"]
    assert document["terminated"] is True
    convergents = [parse_gauss_rat(row["convergent"]) for row in document["convergents"]]
    assert convergents == [
        GaussRat(Fraction(1, 2)),
        GaussRat(Fraction(3, 7)),
        GaussRat(Fraction(5, 12)),
    ]


def test_expand_zero(tmp_path):
    out = tmp_path / "zero.json"
    assert main(["expand", "0", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["digits"] == []


def test_expand_outside_fundamental_domain():
    assert main(["expand", "3/2"]) == 2


def test_eval(capsys):
    assert main(["eval", "2,3,-2"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert parse_gauss_rat(document["value"]) == GaussRat(Fraction(5, 12))


def test_convergents(capsys):
    assert main(["convergents", "2,3,-2"]) == 0
    rows = json.loads(capsys.readouterr().out)["convergents"]
    assert [row["q_norm"] for row in rows] == [4, 49, 144]


def test_unknown_command():
    assert main(["frobnicate"]) == 3


def test_unknown_suite():
    assert main(["verify", "collatz"]) == 3


def test_verify(capsys):
    assert main(["verify", "qpair", "--size", "20", "--seed", "4"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["passed"] is True
    assert document["checked"] == 20


def test_tau_construction_rejects_small_o_rates(run_dir):
    assert main(["construct", "tau", "--rate", "x^-3", "--out", str(run_dir)]) == 2


def test_dimension_needs_a_run(run_dir):
    assert main(["dimension", str(run_dir)]) == 2


def test_construct_is_deterministic(tmp_path):
    overrides = tmp_path / "overrides.json"
    overrides.write_text(json.dumps(SmallOOverridesFactory()))
    runs = [tmp_path / "first", tmp_path / "second"]
    for run in runs:
        args = ["construct", "small-o", "--rate", "x^-4", "--seed", "3", "--out", str(run)]
        assert main([*args, "--overrides", str(overrides)]) == 0
    families = [(run / "families.txt").read_text() for run in runs]
    assert families[0] == families[1]
    manifests = [json.loads((run / "manifest.json").read_text()) for run in runs]
    for manifest in manifests:
        manifest.pop("created_at")
    assert manifests[0] == manifests[1]
    assert manifests[0]["config"]["seed"] == "3"
    assert "out" not in manifests[0]["config"]


def test_dimension_on_a_constructed_run(tmp_path, capsys):
    overrides = tmp_path / "overrides.json"
    overrides.write_text(json.dumps(SmallOOverridesFactory()))
    run = tmp_path / "run"
    args = ["construct", "small-o", "--rate", "x^-4", "--overrides", str(overrides)]
    assert main([*args, "--out", str(run)]) == 0
    capsys.readouterr()
    assert main(["dimension", str(run), "--points", "1"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["box_counting"]["references"]["hausdorff"] == "1"
    assert (run / "dimension.csv").exists()


def test_run_config_validation():
    run = RunConfigFactory(seed=9)
    assert run.recorded()["seed"] == "9"
    assert run.recorded()["mode"] == "desk"
    with pytest.raises(ValidationError):
        RunConfigFactory(budget=0)
    with pytest.raises(ValidationError):
        RunConfigFactory(epsilon="3/2")


@pytest.mark.parametrize(
    "text, slug",
    [
        ("x^-4", "x-4"),
        ("1/32*x^-2", "1-32-x-2"),
        ("  Table:psi.csv ", "table-psi-csv"),
    ],
)
def test_slugify(text, slug):
    assert slugify(text) == slug


def test_run_slug():
    assert run_slug("tau", "1/32*x^-2", 2, 5) == "tau-1-32-x-2-d2-s5"
