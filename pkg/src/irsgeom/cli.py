"""Command line driver: ``irsgeom <subcommand> [options]``.

Every report is UTF-8 JSON with sorted keys (or CSV with sorted columns)
and ends in a newline.  Exit codes: 0 success, 2 a lemma conclusion
failed, 3 an inconsistent dichotomy row, 4 a failed precondition.
"""

from __future__ import annotations

import argparse
import sys

from . import words as W
from .errors import IrsGeomError, PreconditionFail
from .harness import (
    EXIT_OK,
    EXIT_PRECONDITION,
    ExperimentConfig,
    run_dichotomy,
    run_lemma_suite,
    run_radical_suite,
)
from .irs import load_action, stabilizer
from .isometry import action_type, classification_rows, limit_set_approx
from .models import FreeGroupModel, make_model
from .models.acylindricity import acylindricity_probe
from .report import csv_text, dumps, fmt
from .subgroups import recurrence_check, stallings_from_generators, trace


def _global_parser(default=None) -> argparse.ArgumentParser:
    # subcommands re-declare the flags with suppressed defaults so that a flag
    # given before the subcommand is not reset by the subparser
    p = argparse.ArgumentParser(add_help=False, argument_default=default)
    g = p.add_argument_group("global options")
    g.add_argument("--model", choices=["free", "halfplane", "lamplighter"])
    g.add_argument("--seed", type=int)
    g.add_argument("--out", help="write the report here instead of stdout")
    g.add_argument("--format", choices=["json", "csv"])
    g.add_argument("--depth", type=int, help="boundary prefix depth D")
    g.add_argument("--radius", type=int, help="word length L for limit sets")
    g.add_argument("--n-max", type=int, dest="n_max")
    g.add_argument("--config", help="JSON file with ExperimentConfig fields")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irsgeom", description=__doc__.splitlines()[0], parents=[_global_parser()]
    )
    parent = _global_parser(argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dichotomy", parents=[parent], help="classify atoms of stabilizer IRSs")
    d.add_argument("--actions", type=int, help="number of random transitive actions")
    d.add_argument("--max-points", type=int, dest="max_points")

    lm = sub.add_parser("lemmas", parents=[parent], help="randomized sweeps of the lemma verifiers")
    lm.add_argument("--displacement", type=int, dest="displacement_instances")
    lm.add_argument("--doubling", type=int, dest="doubling_instances")
    lm.add_argument("--commutators", type=int, dest="commutator_instances")
    lm.add_argument("--matrix-commutators", type=int, dest="matrix_commutator_instances")
    lm.add_argument("--convergence", type=int, dest="convergence_instances")

    r = sub.add_parser("radical", parents=[parent], help="elliptic radical checks and the lamplighter chain")
    r.add_argument("--chain", type=int, dest="chain_length", help="length K of the lamplighter chain")
    r.add_argument("--samples", type=int, dest="radical_samples")

    c = sub.add_parser("classify", parents=[parent], help="classify isometries")
    c.add_argument("elements", nargs="*", help="elements in the model's text form")
    c.add_argument("--action-type", action="store_true", help="also classify the action of the listed elements")
    c.add_argument("--search-radius", type=int, default=3)

    for name, helptext in (("recurrence", "recurrence of a free group subgroup"),
                           ("limit-set", "depth-D prefixes of a subgroup's limit set")):
        s = sub.add_parser(name, parents=[parent], help=helptext)
        src = s.add_mutually_exclusive_group(required=True)
        src.add_argument("--subgroup", help="comma-separated generator words, e.g. 'aa,ab'")
        src.add_argument("--action", help="JSON finite action; the subgroup is a point stabilizer")
        s.add_argument("--point", type=int, default=0, help="0-based point for --action")
        if name == "recurrence":
            s.add_argument("--g", default="a,A,b,B,ab", help="comma-separated conjugating words")
            s.add_argument("--F-radius", type=int, default=2, dest="f_radius")

    a = sub.add_parser("acyl-probe", parents=[parent], help="count elements nearly fixing two far points")
    a.add_argument("--epsilon", type=float, default=1.0)
    a.add_argument("--R", type=int, default=8)
    a.add_argument("--pairs", type=int, default=20)
    a.add_argument("--element-radius", type=int, default=4)
    return parser


def _config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    for key, value in vars(args).items():
        if value is not None and hasattr(cfg, key) and key != "config":
            setattr(cfg, key, value)
    return cfg


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _flatten(doc, prefix="") -> list[dict]:
    rows = []
    if isinstance(doc, dict):
        for k in sorted(doc):
            rows += _flatten(doc[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(doc, list) and doc and all(isinstance(x, (dict, list)) for x in doc):
        for i, x in enumerate(doc):
            rows += _flatten(x, f"{prefix}[{i}]")
    else:
        rows.append({"key": prefix, "value": doc})
    return rows


def _render(doc, fmt_name: str, rows=None) -> str:
    if fmt_name == "csv":
        return csv_text(rows if rows is not None else _flatten(doc))
    return dumps(doc)


def _subgroup(args, model: FreeGroupModel):
    if args.subgroup is not None:
        gens = [W.parse_word(s) for s in args.subgroup.split(",") if s.strip()]
        return stallings_from_generators(gens, model.rank)
    return stabilizer(load_action(args.action), args.point)


def _words(model, items):
    return [model.parse_element(s) for s in items]


def cmd_dichotomy(args, cfg):
    rep = run_dichotomy(cfg)
    return rep.to_json(), rep.exit_code, rep.csv_rows()


def cmd_lemmas(args, cfg):
    rep = run_lemma_suite(cfg)
    return rep, rep["exit_code"], None


def cmd_radical(args, cfg):
    rep = run_radical_suite(cfg)
    return rep, rep["exit_code"], None


def cmd_classify(args, cfg):
    model = make_model(cfg.model, cfg.rank)
    items = args.elements or cfg.generators
    elements = _words(model, items) if items else model.generators()
    rows = classification_rows(elements, model)
    doc = {"model": model.describe(), "rows": rows}
    if args.action_type:
        at = action_type(elements, model, args.search_radius)
        doc["action_type"] = {"kind": at.kind, "radius": at.radius, "evidence": fmt(at.evidence, model)}
    return doc, EXIT_OK, rows


def _require_free(cfg) -> FreeGroupModel:
    if cfg.model != "free":
        raise PreconditionFail("subgroup handles from words need the free group model", {"model": cfg.model})
    return FreeGroupModel(cfg.rank)


def cmd_recurrence(args, cfg):
    model = _require_free(cfg)
    H = _subgroup(args, model)
    F = W.ball(model.rank, args.f_radius)
    try:
        N = max(cfg.n_max, int(H.index()))
    except OverflowError:
        N = cfg.n_max
    rows = []
    for s in args.g.split(","):
        g = W.parse_word(s)
        v = recurrence_check(H, g, F, N)
        rows.append({"g": W.format_word(g), "verdict": str(v), "n": v.n, "search_bound": N})
    doc = {
        "subgroup": H.to_json(),
        "F_radius": args.f_radius,
        "trace": [W.format_word(w) for w in trace(H, F).trace],
        "rows": rows,
    }
    return doc, EXIT_OK, rows


def cmd_limit_set(args, cfg):
    model = _require_free(cfg)
    H = _subgroup(args, model)
    ls = limit_set_approx(H, model, cfg.depth, cfg.radius)
    prefixes = sorted(ls.as_set(), key=W.shortlex_key)
    doc = {
        "subgroup": H.to_json(),
        "depth": cfg.depth,
        "radius": cfg.radius,
        "prefixes": [W.format_word(p) for p in prefixes],
    }
    return doc, EXIT_OK, [{"prefix": W.format_word(p)} for p in prefixes]


def cmd_acyl_probe(args, cfg):
    model = make_model(cfg.model, cfg.rank)
    gens = _words(model, cfg.generators) if cfg.generators else model.generators()
    rep = acylindricity_probe(model, gens, args.epsilon, args.R, args.pairs, args.element_radius, cfg.seed)
    doc = {
        "model": model.describe(),
        "epsilon": fmt(rep.epsilon),
        "R": rep.R,
        "N_observed": rep.N_observed,
        "pairs_tested": rep.pairs_tested,
        "elements_searched": rep.elements_searched,
        "witnesses": [[fmt(x, model), fmt(y, model)] for x, y in rep.witnesses],
    }
    return doc, EXIT_OK, None


COMMANDS = {
    "dichotomy": cmd_dichotomy,
    "lemmas": cmd_lemmas,
    "radical": cmd_radical,
    "classify": cmd_classify,
    "recurrence": cmd_recurrence,
    "limit-set": cmd_limit_set,
    "acyl-probe": cmd_acyl_probe,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    try:
        doc, code, rows = COMMANDS[args.command](args, cfg)
    except PreconditionFail as e:
        doc = {"error": "PreconditionFail", "message": str(e), "certificate": fmt(e.certificate)}
        _emit(dumps(doc), cfg.out)
        return EXIT_PRECONDITION
    except IrsGeomError as e:
        print(f"irsgeom: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    _emit(_render(doc, cfg.format, rows), cfg.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
