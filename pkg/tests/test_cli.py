import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from qbundle.cli import SuiteReport, main

FIXTURE = str(Path(__file__).parent / "fixtures" / "u1_circle.qbp")


@pytest.fixture(scope="module")
def runner():
    return CliRunner(mix_stderr=False) if "mix_stderr" in CliRunner.__init__.__code__.co_varnames else CliRunner()


def test_list(runner):
    r = runner.invoke(main, ["list"])
    assert r.exit_code == 0
    for name in ("trivial-u1", "hopf-fibration", "dunkl-rank1"):
        assert name in r.output


def test_verify_text_and_json(runner):
    r = runner.invoke(main, ["verify", "trivial-u1[circle]", "--suite", "connection"])
    assert r.exit_code == 0, r.output
    assert r.output.strip().splitlines()[-1].startswith("PASS")
    r = runner.invoke(main, ["verify", "trivial-u1[circle]", "--suite", "connection", "--format", "json"])
    assert r.exit_code == 0
    rep = SuiteReport.from_json(r.output)
    assert rep.status == "pass" and rep.checks
    assert json.loads(rep.to_json()) == json.loads(r.output)


def test_verify_unknown_example_is_input_error(runner):
    r = runner.invoke(main, ["verify", "moebius"])
    assert r.exit_code == 2


def test_compute_qtrs(runner):
    r = runner.invoke(main, ["compute", "qtrs", "--example", "hopf-fibration", "--arg", "z"])
    assert r.exit_code == 0, r.output
    assert r.output.strip() == "α*⊗α + γ*⊗γ"


def test_compute_errors(runner):
    assert runner.invoke(main, ["compute", "torsion", "--example", "hopf-fibration"]).exit_code == 2
    r = runner.invoke(main, ["compute", "nabla", "--example", "hopf-fibration", "--rep", "n=1",
                             "--section", "alpha + alpha*"])
    assert r.exit_code == 2


def test_check_presentation(runner, tmp_path):
    r = runner.invoke(main, ["check-presentation", FIXTURE])
    assert r.exit_code == 0, r.output
    bad = tmp_path / "bad.qbp"
    bad.write_text(Path(FIXTURE).read_text().replace("d z = z sigma", "d z = 2 z sigma"))
    assert runner.invoke(main, ["check-presentation", str(bad)]).exit_code == 1
    broken = tmp_path / "broken.qbp"
    broken.write_text("[algebra A]\ngenerators = a:0:a\nrules = a a -> \n")
    assert runner.invoke(main, ["check-presentation", str(broken)]).exit_code == 2
