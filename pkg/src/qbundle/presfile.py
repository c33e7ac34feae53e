"""Reader for presentation files: INI-style sections describing a structure group, its calculus,
a bundle, connections and gauge transformations.

    [algebra U1]
    generators = z:0:z*, z*:0:z
    rules = z z* -> 1; z* z -> 1

    [hopf]
    phi z = z⊗z
    eps z = 1
    kappa z = z*

Generator specs are ``name:degree[:star[:weight[:display]]]``; an empty or ``-`` star means
self-adjoint.  Lists are separated by ``;`` (rules, samples) or ``,`` (generators, names).
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .bundle import Bundle, Connection, RepData, identity_matrix, scalar_matrix
from .fodc import Calculus, CalculusData
from .hopf import Character, Corepresentation, HopfStructure
from .ncalg import AlgebraPresentation, GeneratorSpec, PresentationError, PresentedAlgebra, define_algebra
from .parsing import ParseError
from .report import Check, check

SECTIONS = ("algebra", "hopf", "corep", "fodc", "bundle", "connection", "gauge")


@dataclass
class Presentation:
    """Everything a presentation file defines, built in dependency order."""

    path: str
    algebra: PresentedAlgebra | None = None
    hopf: HopfStructure | None = None
    coreps: dict[str, Corepresentation] = field(default_factory=dict)
    calc: Calculus | None = None
    bundle: Bundle | None = None
    connections: dict[str, Connection] = field(default_factory=dict)
    gauges: dict = field(default_factory=dict)
    bundle_algebra: PresentedAlgebra | None = None


class _Lines:
    """(section, key) -> 1-based line number, for diagnostics."""

    def __init__(self, text: str):
        self.where: dict[tuple[str, str], int] = {}
        self.sections: dict[str, int] = {}
        sec = ""
        for n, line in enumerate(text.splitlines(), 1):
            s = line.strip()
            if s.startswith("[") and s.endswith("]"):
                sec = s[1:-1].strip()
                self.sections[sec] = n
            elif "=" in s and not line[:1].isspace() and not s.startswith("#"):
                self.where[(sec, s.split("=", 1)[0].strip())] = n

    def line(self, sec: str, key: str | None = None) -> int:
        if key is not None and (sec, key) in self.where:
            return self.where[(sec, key)]
        return self.sections.get(sec, 1)


def _gen_specs(text: str) -> list[GeneratorSpec]:
    out = []
    for item in _split(text, ","):
        parts = [p.strip() for p in item.split(":")]
        if not parts[0]:
            raise ValueError(f"empty generator name in {item!r}")
        deg = int(parts[1]) if len(parts) > 1 and parts[1] else 0
        star = parts[2] if len(parts) > 2 and parts[2] not in ("", "-") else None
        weight = int(parts[3]) if len(parts) > 3 and parts[3] else 1
        disp = parts[4] if len(parts) > 4 and parts[4] else None
        out.append(GeneratorSpec(parts[0], deg, star, weight, disp))
    return out


def _split(text: str, sep: str) -> list[str]:
    return [p.strip() for p in text.replace("\n", sep).split(sep) if p.strip()]


def _rules(text: str) -> list[tuple[str, str]]:
    out = []
    for item in _split(text, ";"):
        if "->" not in item:
            raise ValueError(f"rule {item!r} has no '->'")
        lhs, rhs = (t.strip() for t in item.split("->", 1))
        if not lhs or not rhs:
            raise ValueError(f"rule {item!r} has an empty side (write 0 for a vanishing word)")
        out.append((lhs, rhs))
    return out


def _matrix(text: str) -> list[list[str]]:
    """[[a, b], [c, d]] with entries split at top-level commas."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError("matrix must be written [[...], ...]")
    rows, depth, cur, out = [], 0, "", []
    for ch in s[1:-1]:
        if ch == "[":
            depth += 1
            if depth == 1:
                cur, out = "", []
                continue
        elif ch == "]":
            depth -= 1
            if depth == 0:
                out.append(cur.strip())
                rows.append(out)
                continue
        elif ch == "," and depth == 1:
            out.append(cur.strip())
            cur = ""
            continue
        if depth >= 1:
            cur += ch
    if depth != 0 or not rows:
        raise ValueError("unbalanced brackets in matrix")
    return rows


def _algebra(name: str, sec, graded: bool, guard, label: str) -> PresentedAlgebra:
    gens = guard(label, "generators", lambda: _gen_specs(sec.get("generators", "")))
    rules = guard(label, "rules", lambda: _rules(sec.get("rules", "")))
    order = sec.get("order")
    pres = AlgebraPresentation(name, gens, rules, order.split() if order else None, graded)
    try:
        return define_algebra(pres)
    except ParseError:
        # expression text inside a presentation only comes from rule right-hand sides and star partners
        key = "rules" if rules else "generators"
        return guard(label, key, lambda: define_algebra(pres))
    except (ValueError, KeyError, PresentationError):
        return guard(label, None, lambda: define_algebra(pres))


def _keyed(sec, prefix: str) -> dict[str, str]:
    n = len(prefix) + 1
    return {k[n:].strip(): v for k, v in sec.items() if k.startswith(prefix + " ")}


def load(path: str | Path) -> Presentation:
    """Parse and build; raises ParseError carrying the offending line."""
    text = Path(path).read_text(encoding="utf-8")
    return loads(text, str(path))


def loads(text: str, path: str = "<string>") -> Presentation:
    lines = _Lines(text)
    cp = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#",), interpolation=None, strict=True)
    cp.optionxform = str
    try:
        cp.read_string(text, source=path)
    except configparser.Error as e:
        raise ParseError(f"{path}: {e.message if hasattr(e, 'message') else e}", getattr(e, "lineno", 1) or 1, 1)
    out = Presentation(path)
    kinds: dict[str, list[tuple[str, str]]] = {k: [] for k in SECTIONS}
    for name in cp.sections():
        kind, _, label = name.partition(" ")
        if kind not in kinds:
            raise ParseError(f"{path}: unknown section [{name}]", lines.line(name), 1)
        kinds[kind].append((name, label.strip()))

    def guard(sec: str, key: str | None, fn):
        try:
            return fn()
        except ParseError as e:
            raise ParseError(f"{path} [{sec}] {key or ''}: {e}", lines.line(sec, key), getattr(e, "col", 1)) from e
        except (ValueError, KeyError, PresentationError) as e:
            raise ParseError(f"{path} [{sec}] {key or ''}: {e}", lines.line(sec, key), 1) from e

    for name, label in kinds["algebra"]:
        if out.algebra is not None:
            raise ParseError(f"{path}: only one [algebra] section is supported", lines.line(name), 1)
        out.algebra = _algebra(label or "G", cp[name], False, guard, name)
    for name, _ in kinds["hopf"]:
        if out.algebra is None:
            raise ParseError(f"{path}: [hopf] needs an [algebra] section", lines.line(name), 1)
        sec = cp[name]
        phi, eps, kap = _keyed(sec, "phi"), _keyed(sec, "eps"), _keyed(sec, "kappa")
        out.hopf = guard(name, None, lambda: HopfStructure(out.algebra, phi, eps, kap))
    for name, label in kinds["corep"]:
        if out.hopf is None:
            raise ParseError(f"{path}: [corep] needs a [hopf] section", lines.line(name), 1)
        sec = cp[name]
        m = guard(name, "matrix", lambda: _matrix(sec["matrix"]))
        if "dim" in sec and int(sec["dim"]) != len(m):
            raise ParseError(f"{path} [{name}]: dim = {sec['dim']} but matrix has {len(m)} rows",
                             lines.line(name, "dim"), 1)
        out.coreps[label] = guard(name, "matrix", lambda: Corepresentation(out.hopf, m, label))
    for name, label in kinds["fodc"]:
        if out.hopf is None:
            raise ParseError(f"{path}: [fodc] needs a [hopf] section", lines.line(name), 1)
        sec = cp[name]
        circ = {}
        for k, v in _keyed(sec, "circ").items():
            parts = k.split()
            if len(parts) != 2:
                raise ParseError(f"{path} [{name}]: write 'circ <basis> <generator> = ...'",
                                 lines.line(name, "circ " + k), 1)
            circ[(parts[0], parts[1])] = v
        delta = _keyed(sec, "delta") or None
        data = guard(name, None, lambda: CalculusData(
            label or "calculus", _gen_specs(sec.get("basis", "")), _keyed(sec, "germ"), circ,
            _keyed(sec, "ad"), _keyed(sec, "d"), _split(sec.get("ideal", ""), ";"),
            _rules(sec.get("wedge-relations", "")), delta))
        out.calc = guard(name, None, lambda: Calculus(out.hopf, data))
    for name, label in kinds["bundle"]:
        if out.calc is None:
            raise ParseError(f"{path}: [bundle] needs a [fodc] section", lines.line(name), 1)
        sec = cp[name]
        O = _algebra(f"Ω({label or 'P'})", sec, True, guard, name)
        out.bundle_algebra = O
        b = guard(name, None, lambda: Bundle(label or "bundle", out.calc, O, _keyed(sec, "d"), _keyed(sec, "psi"),
                                             _split(sec.get("vertical", ""), ","), _split(sec.get("base", ""), ";")))
        for key, v in _keyed(sec, "tl").items():
            if key not in out.coreps:
                raise ParseError(f"{path} [{name}]: no [corep {key}] section", lines.line(name, "tl " + key), 1)
            cor = out.coreps[key]
            x = guard(name, "tl " + key, lambda: [[O.parse(e) for e in row] for row in _matrix(v)])
            Z = guard(name, "Z " + key, lambda: scalar_matrix(_matrix(sec["Z " + key]))
                      if "Z " + key in sec else identity_matrix(len(x)))
            C = guard(name, "C " + key, lambda: scalar_matrix(_matrix(sec["C " + key]))
                      if "C " + key in sec else identity_matrix(cor.dim))
            b.add_rep(key, RepData(cor, x, Z, C))
        out.bundle = b
    for name, label in kinds["connection"]:
        if out.bundle is None:
            raise ParseError(f"{path}: [connection] needs a [bundle] section", lines.line(name), 1)
        table = _keyed(cp[name], "omega")
        out.connections[label or "ω"] = guard(name, None, lambda: Connection(out.bundle, table, label or "ω"))
    for name, label in kinds["gauge"]:
        if out.bundle is None:
            raise ParseError(f"{path}: [gauge] needs a [bundle] section", lines.line(name), 1)
        out.gauges[label or "f"] = guard(name, None, lambda: _gauge(out, cp[name], label or "f"))
    return out


def _gauge(p: Presentation, sec, label: str):
    from .gauge import _any_connection, TranslationMap, char_to_gauge, gauge_from_generators

    chars = _keyed(sec, "character")
    if chars:
        return char_to_gauge(p.bundle, Character(p.hopf, chars, label))
    conn = next(iter(p.connections.values()), None) or _any_connection(p.bundle)
    q = TranslationMap(p.bundle, conn)
    f = gauge_from_generators(p.bundle, _keyed(sec, "f"), label, q)
    inv = _keyed(sec, "finv")
    if inv:
        f.inverse_map = gauge_from_generators(p.bundle, inv, f"{label}⁻¹", q)
    return f


def presentation_checks(p: Presentation, budget: int = 6) -> list[Check]:
    """Confluence, star compatibility and every available axiom check for a loaded file."""
    from .gauge import gauge_formula_checks

    out: list[Check] = []
    for alg in (p.algebra, p.bundle_algebra):
        if alg is None:
            continue
        rep = alg.check_local_confluence(budget)
        out.append(check(f"{alg.name}/confluence", "critical pairs resolve", rep.ok, str(rep), budget))
        bad = alg.check_star_compatibility()
        out.append(check(f"{alg.name}/star", "star respects the rules", not bad, f"fails on {bad}"))
    if p.hopf is not None:
        bad = p.hopf.axiom_failures()
        out.append(check(f"{p.algebra.name}/hopf", "Hopf axioms on generators", not bad, "; ".join(bad[:3])))
    for key, cor in p.coreps.items():
        r = cor.check()
        out.append(check(f"corep {key}", "comatrix, counit, orthogonality", r.ok, "; ".join(r.failures[:3])))
    if p.calc is not None:
        out.extend(p.calc.all_checks())
    if p.bundle is not None:
        out.extend(p.bundle.check_qpb())
    for w in p.connections.values():
        bad = w.connection_failures()
        out.append(check(f"{p.bundle.name}/{w.name}/connection", "connection condition", not bad, "; ".join(bad[:3])))
        if p.calc.has_delta:
            out.extend(w.curvature_checks())
    for f in p.gauges.values():
        out.extend(f.checks(base=p.bundle.base_samples[:3]))
        for w in p.connections.values():
            out.extend(gauge_formula_checks(f, w))
    return out

