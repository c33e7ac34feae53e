"""Command-line front end: ``list``, ``verify``, ``compute`` and ``check-presentation``."""
from __future__ import annotations

import json
import sys
import time
from dataclasses import asdict, dataclass, field

import click

from . import __version__
from .assoc import AssociatedBundle, NotIntertwiner, RepresentationMismatch
from .examples import REGISTRY, UnknownExample, field_strength, potential_decompose
from .gauge import gauge_act, registered_gauges, translation_map
from .parsing import ParseError
from .presfile import load, presentation_checks
from .report import FAIL, Check
from .scalars import ONE
from .suites import SUITES, SuiteConfig, resolve, run

SCHEMA = "qbundle.suite-report/1"

CONVENTIONS = {
    "gauge action": "(f1*f2)(omega) = f2(f1(omega)), F_(f1*f2) = F_f2 after F_f1",
    "curvature": "R = d omega - m(omega x omega)delta",
    "corepresentation": "alpha(e_i) = sum_j e_j x g_ji",
}

QUANTITIES = ("connection", "curvature", "cov-deriv", "qtrs", "nabla", "hat-nabla", "herm", "defect",
              "gauge-act", "potential", "field-strength")


class UnknownQuantity(KeyError):
    pass


@dataclass
class SuiteReport:
    example: str
    suite: str
    checks: list[dict]
    engine: str
    runtime: float
    status: str
    schema: str = SCHEMA
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))

    @classmethod
    def build(cls, example: str, suite: str, checks: list[Check], runtime: float) -> "SuiteReport":
        rows = sorted((c.to_dict() for c in checks), key=lambda r: r["id"])
        status = FAIL if any(r["status"] == FAIL for r in rows) else "pass"
        return cls(example, suite, rows, __version__, round(runtime, 3), status)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "SuiteReport":
        return cls(**json.loads(text))

    def to_text(self) -> str:
        lines = [f"{self.example} [{self.suite}]  engine {self.engine}  schema {self.schema}"]
        lines += [f"  convention {k}: {v}" for k, v in sorted(self.conventions.items())]
        for r in self.checks:
            tail = f"  -- {r['witness']}" if r["witness"] else ""
            lines.append(f"  {r['status']:<7} {r['id']}  ({r['ref']}){tail}")
        n_fail = sum(r["status"] == FAIL for r in self.checks)
        n_skip = sum(r["status"] == "skipped" for r in self.checks)
        lines.append(f"{self.status.upper()}: {len(self.checks)} checks, {n_fail} failed, {n_skip} skipped,"
                     f" {self.runtime:.2f}s")
        return "\n".join(lines)


def _emit(report: SuiteReport, fmt: str) -> None:
    click.echo(report.to_json() if fmt == "json" else report.to_text())


def _input_error(msg: str) -> None:
    click.echo(f"error: {msg}", err=True)
    sys.exit(2)


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Exact verification of quantum principal bundle identities."""


@main.command("list")
def cmd_list() -> None:
    """List the registered examples with their connections, representations and gauges."""
    for name in REGISTRY:
        ex = resolve(name)
        click.echo(f"{ex.name}")
        click.echo("  connections: " + ", ".join(f"{k} ({w.name})" for k, w in ex.connections.items()))
        click.echo("  representations: " + ", ".join(ex.bundle.reps))
        click.echo("  gauges: " + ", ".join(registered_gauges(ex)))
    click.echo("trivial-u1 bases: point, circle, free, matrix2 (default); select with trivial-u1[<base>]")
    click.echo("dunkl-rank1 takes --kappa <scalar> (default q)")


@main.command("verify")
@click.argument("example")
@click.option("--suite", "suites", multiple=True, type=click.Choice(SUITES + ("all",)), default=("all",),
              show_default=True)
@click.option("--budget", type=int, default=3, show_default=True, help="word-length budget for truncated checks")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--kappa", default=None, help="multiplicity for dunkl-rank1")
def cmd_verify(example: str, suites: tuple[str, ...], budget: int, fmt: str, kappa: str | None) -> None:
    """Run identity suites on EXAMPLE; exit 0 iff every check passes."""
    try:
        ex = resolve(example, kappa)
    except (UnknownExample, ParseError, ValueError) as e:
        _input_error(f"unknown example {example!r}: {e}")
    t0 = time.perf_counter()
    checks = run(ex, list(suites), SuiteConfig(budget=budget))
    report = SuiteReport.build(ex.name, ",".join(suites), checks, time.perf_counter() - t0)
    _emit(report, fmt)
    sys.exit(1 if report.status == FAIL else 0)


def _section(ab: AssociatedBundle, text: str):
    return ab.section([t.strip() for t in text.split(",")])


@main.command("compute")
@click.argument("quantity")
@click.option("--example", "example", required=True)
@click.option("--kappa", default=None)
@click.option("--rep", default=None, help="representation key, e.g. n=1 or sign")
@click.option("--section", default=None, help="section values T(e_1), ..., comma separated")
@click.option("--arg", default=None, help="argument expression (second section for herm/defect)")
@click.option("--connection", default=None, help="connection key (default: the first registered)")
@click.option("--gauge", default=None, help="gauge key for gauge-act")
@click.option("--side", type=click.Choice(["L", "R"]), default="L")
def cmd_compute(quantity: str, example: str, kappa: str | None, rep: str | None, section: str | None,
                arg: str | None, connection: str | None, gauge: str | None, side: str) -> None:
    """Print the canonical form of QUANTITY on an example."""
    try:
        if quantity not in QUANTITIES:
            raise UnknownQuantity(f"{quantity!r}; choose from {', '.join(QUANTITIES)}")
        ex = resolve(example, kappa)
        click.echo(_compute(ex, quantity, rep, section, arg, connection, gauge, side))
    except (UnknownExample, UnknownQuantity, ParseError, NotIntertwiner, RepresentationMismatch,
            KeyError, ValueError) as e:
        _input_error(str(e))


def _compute(ex, quantity, rep, section, arg, connection, gauge, side) -> str:
    b, calc = ex.bundle, ex.calc
    ckey = connection or next(iter(ex.connections))
    if ckey not in ex.connections:
        raise KeyError(f"no connection {ckey!r} on {ex.name}")
    w = ex.connections[ckey]
    basis = [calc.A.gen_names[t] for t in calc.theta]
    if quantity == "connection":
        return "\n".join(f"{w.name}({t}) = {v}" for t, v in zip(basis, w.values))
    if quantity == "qtrs":
        if arg is None:
            raise ValueError("qtrs needs --arg <element of the envelope>")
        return str(translation_map(ex, ckey)(calc.envelope_normal_form(arg)))
    if quantity == "cov-deriv":
        if arg is None:
            raise ValueError("cov-deriv needs --arg <horizontal form>")
        return str(w.cov_deriv(b.elem(b.O.parse(arg))))
    if quantity == "gauge-act":
        gs = registered_gauges(ex)
        key = gauge or next((k for k in gs if k != "id"), "id")
        if key not in gs:
            raise KeyError(f"no gauge {key!r} on {ex.name}; have {', '.join(gs)}")
        g = gauge_act(gs[key], w)
        return "\n".join(f"{g.name}({t}) = {v}" for t, v in zip(basis, g.values))
    if quantity in ("potential", "field-strength"):
        pot = potential_decompose(ex, w)
        vals = pot if quantity == "potential" else field_strength(ex, pot)
        return "\n".join(f"{k} = {v}" for k, v in vals.items())
    if quantity == "curvature" and rep is None:
        return "\n".join(f"R({t}) = {w.curvature_vec({k: ONE})}" for k, t in enumerate(basis))
    if rep is None or section is None:
        raise ValueError(f"{quantity} needs --rep and --section")
    ab = AssociatedBundle(b, rep)
    T = _section(ab, section)
    if quantity == "nabla":
        return str(ab.nabla(w, T))
    if quantity == "hat-nabla":
        return str(ab.hat_nabla(w, T))
    if quantity == "curvature":
        return str(ab.curvature(w, T))
    U = _section(ab, arg) if arg else T
    if quantity == "herm":
        return str(ab.herm_L(T, U) if side == "L" else ab.herm_R(T, U))
    return str(ab.compat_defect(w, T, U, side))


@main.command("check-presentation")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--budget", type=int, default=6, show_default=True, help="degree bound for critical pairs")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def cmd_check_presentation(path: str, budget: int, fmt: str) -> None:
    """Load a presentation file and run confluence and axiom checks."""
    t0 = time.perf_counter()
    try:
        p = load(path)
    except ParseError as e:
        _input_error(str(e))
    checks = presentation_checks(p, budget)
    report = SuiteReport.build(path, "presentation", checks, time.perf_counter() - t0)
    _emit(report, fmt)
    sys.exit(1 if report.status == FAIL else 0)


if __name__ == "__main__":
    main()
