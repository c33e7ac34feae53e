from pathlib import Path

import pytest

from qbundle.parsing import ParseError
from qbundle.presfile import load, loads, presentation_checks

FIXTURE = Path(__file__).parent / "fixtures" / "u1_circle.qbp"


def test_fixture_loads_and_verifies():
    p = load(FIXTURE)
    assert p.bundle is not None and set(p.connections) == {"triv", "gauged"}
    assert set(p.gauges) == {"chi", "p"}
    checks = presentation_checks(p)
    assert checks and [c for c in checks if c.status == "fail"] == []


@pytest.mark.parametrize("rule", ["a a -> ", "a a b", "a a -> +"])
def test_malformed_rule_reports_line(rule):
    text = f"[algebra A]\ngenerators = a:0:a\nrules = {rule}\n"
    with pytest.raises(ParseError, match="^line 3"):
        loads(text)


def test_corrupted_differential_is_caught():
    text = FIXTURE.read_text().replace("d z = z sigma", "d z = 2 z sigma")
    checks = presentation_checks(loads(text))
    assert any(c.status == "fail" for c in checks)
