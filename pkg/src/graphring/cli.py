"""Command-line interface: ``graphring <command> [options]``.

Exit codes: 0 success, 1 validation error, 2 parse error, 3 internal
consistency failure (two independent computations disagree).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .consum import build_connected_sum, check_connected_sum
from .exactlin import fmt
from .homology import h1_basis, kernel_surfaces
from .intersection import product_table, to_trivector
from .plumbing import (GraphError, ParseError, ValidationError, lint, normalize_with_trace,
                       parse, parse_raw, replay_gluing, serialize, to_text)
from .sampling import random_orientable_tree, random_tree_with_rank
from .trivector import FormError, Trivector, analyze, obstruct

EXIT_OK, EXIT_VALIDATION, EXIT_PARSE, EXIT_CONSISTENCY = 0, 1, 2, 3


class ConsistencyError(RuntimeError):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_graph(path: str):
    return parse(_read(path))


def _load_form(text: str, alphabet: str) -> Trivector:
    try:
        if text.lstrip().startswith("{"):
            return Trivector.from_json(text)
        return Trivector.from_letters(text.strip(), alphabet)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad form document: {exc}") from exc


def _seed(args) -> int:
    env = os.environ.get("GRAPHRING_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"GRAPHRING_SEED must be an integer, got {env!r}")
    return args.seed


def _vec(v) -> list[str]:
    return [fmt(x) for x in v]


# ---------------------------------------------------------------- reports

def homology_report(g) -> dict:
    basis = h1_basis(g)
    b, r, g2, gm = basis.rank_parts
    surfaces = kernel_surfaces(g, basis)
    return {
        "rank": basis.rank,
        "rank_parts": {"b": b, "r": r, "2g_plus": g2, "g_minus": gm},
        "generators": basis.names(),
        "connectivity": {"order": list(basis.connectivity.order),
                         "matrix": [_vec(row) for row in basis.connectivity.matrix.tolist()]},
        "fiber_expression": {k: _vec(v) for k, v in basis.fiber_expression.items()},
        "surfaces": [{"fiber": s.fiber, "multiplicities": s.multiplicities,
                      "klein_caps": s.klein_caps, "scale": fmt(s.scale), "doubled": s.doubled}
                     for s in surfaces],
        "warnings": lint(g),
    }


def _homology_table(doc: dict) -> str:
    p = doc["rank_parts"]
    lines = [f"rank {doc['rank']} = b {p['b']} + r {p['r']} + 2g+ {p['2g_plus']} + g- {p['g_minus']}",
             "generators: " + " ".join(doc["generators"])]
    for k, v in doc["fiber_expression"].items():
        lines.append(f"  t_{k} -> ({', '.join(v)})")
    for s in doc["surfaces"]:
        mult = " ".join(f"{k}:{v}" for k, v in s["multiplicities"].items())
        lines.append(f"surface for t_{s['fiber']}: {mult} scale {s['scale']}"
                     + (f" caps {s['klein_caps']}" if s["klein_caps"] else ""))
    lines += ["warning: " + w for w in doc["warnings"]]
    return "\n".join(lines)


def cmd_homology(args) -> tuple[dict, str]:
    doc = homology_report(_load_graph(args.path))
    return doc, _homology_table(doc)


def cmd_ring(args):
    g = _load_graph(args.path)
    table = product_table(g)
    w = to_trivector(table)
    doc = table.to_json()
    doc["trivector"] = w.to_json()
    text = table.render() + "\n\nform: " + w.pretty()
    if table.convention_dependent:
        text += "\n(F.F entries depend on the annulus routing)"
    return doc, text


def cmd_consum(args):
    g = _load_graph(args.path)
    check = check_connected_sum(g)
    if not check.matches:
        raise ConsistencyError(json.dumps(check.to_json()))
    doc = check.to_json()
    pres = check.presentation
    lines = [f"target ring {pres.glue.target}" + (" (extended)" if pres.glue.extension else "")]
    for lab, e in pres.glue.epsilon.items():
        lines.append(f"  eps_{lab}: {lab} -> " + ", ".join(f"{fmt(x)} F" for x in e))
    lines += ["relations:"] + ["  " + r for r in pres.relations]
    lines.append("connected-sum form: " + check.connected_sum.pretty())
    lines.append("direct form:        " + check.direct.pretty())
    lines.append("match: yes")
    return doc, "\n".join(lines)


def _analysis_text(doc: dict) -> str:
    lines = [f"{k}: {v}" for k, v in doc.items() if k != "witness"]
    for w in doc.get("witness", []):
        lines.append("witness summand: " + Trivector.from_json(w).pretty())
    return "\n".join(lines)


def cmd_analyze(args):
    w = _load_form(_read(args.path), args.alphabet)
    ob = obstruct(w)
    doc = ob.report.to_json()
    doc["obstructed"] = ob.obstructed
    doc["reason"] = ob.reason
    return doc, _analysis_text(doc)


def cmd_obstruct(args):
    text = _read(args.path)
    stripped = text.lstrip()
    if stripped.startswith("{") and '"terms"' in stripped or args.form:
        w = _load_form(text, args.alphabet)
    else:
        g = parse(text)
        w = to_trivector(product_table(g))
    ob = obstruct(w)
    doc = ob.to_json()
    doc["form"] = w.to_json()
    return doc, f"obstructed: {ob.obstructed}\nreason: {ob.reason}\nform: {w.pretty()}"


def cmd_normalize(args):
    raw = parse_raw(_read(args.path))
    g, trace = normalize_with_trace(raw)
    steps = []
    for edge, res in trace:
        if replay_gluing(res) != tuple(tuple(r) for r in edge.matrix):
            raise ConsistencyError(f"replay of gluing {edge.ends} does not reproduce its matrix")
        steps.append({"ends": list(edge.ends), "matrix": [list(r) for r in edge.matrix],
                      "sign": res.sign,
                      "steps": [{"side": s.side, "n": s.n, "fiber": str(s.fiber)} for s in res.steps]})
    doc = {"graph": json.loads(serialize(g)), "trace": steps}
    return doc, to_text(g)


def cmd_random_tree(args):
    rng = random.Random(_seed(args))
    if args.rank is not None:
        g = random_tree_with_rank(rng, args.rank, max_nodes=args.max_nodes, max_entry=args.max_entry)
    else:
        g = random_orientable_tree(rng, max_nodes=args.max_nodes, max_genus=args.max_genus,
                                   max_fibers=args.max_fibers, max_entry=args.max_entry)
    return json.loads(serialize(g)), to_text(g).rstrip("\n")


# ---------------------------------------------------------------- entry

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphring",
                                description="Homology and intersection rings of graph manifolds.")
    p.add_argument("--format", choices=("json", "table"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    def with_path(name, help_, func):
        s = sub.add_parser(name, help=help_)
        s.add_argument("path", help="input document, or - for stdin")
        s.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS)
        s.set_defaults(func=func)
        return s

    with_path("homology", "first homology basis and kernel surfaces", cmd_homology)
    with_path("ring", "intersection product table and its 3-form", cmd_ring)
    with_path("consum", "connected-sum presentation of a tree, cross-checked", cmd_consum)
    with_path("normalize", "reduce gluings and self-loops to a plumbing graph", cmd_normalize)
    for name, func, help_ in (("analyze-form", cmd_analyze, "radical and rank-3 splitting of a 3-form"),
                              ("obstruct", cmd_obstruct, "tree graph manifold obstruction verdict")):
        s = with_path(name, help_, func)
        s.add_argument("--alphabet", default="abcdef",
                       help="letters naming basis vectors in letter-form input")
        if name == "obstruct":
            s.add_argument("--form", action="store_true", help="treat the input as a 3-form")

    s = sub.add_parser("random-tree", help="seeded random orientable tree")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--rank", type=int, default=None, help="require this first Betti number")
    s.add_argument("--max-nodes", type=int, default=6)
    s.add_argument("--max-genus", type=int, default=2)
    s.add_argument("--max-fibers", type=int, default=2)
    s.add_argument("--max-entry", type=int, default=5)
    s.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS)
    s.set_defaults(func=cmd_random_tree)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, text = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, GraphError, FormError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.format == "table":
        print(text)
    else:
        print(json.dumps(doc, indent=2))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
