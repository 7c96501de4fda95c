"""Command-line front end.

Every command prints a human-readable block followed by a one-line JSON
report (``--json`` prints the JSON alone).  Exit codes: 0 success / valid /
countermodel found, 1 error, 2 invalid, 3 no countermodel within the bound.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass, field

from . import checker, interp
from .checker import TypingError
from .interp import InterpretationError
from .parser import ParseError, parse_context, parse_term, pretty
from .search import find_countermodel
from .term import Context, DuplicateName, FuelExhausted
from .topology import (
    TopologyError,
    exponential,
    join_family,
    load_model,
    meet_family,
    minimal_neighborhood,
    check_point_condition,
)

EXIT_OK, EXIT_ERROR, EXIT_INVALID, EXIT_NOT_FOUND = 0, 1, 2, 3


@dataclass
class QueryReport:
    command: str
    model: str | None = None
    result: str = "ok"
    data: dict = field(default_factory=dict)
    text: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, raw: str) -> "QueryReport":
        return cls(**json.loads(raw))


class CommandError(Exception):
    pass


def _model(args):
    return load_model(args.model)


# ---------------------------------------------------------------- commands


def cmd_check(args) -> tuple[int, QueryReport]:
    rep = QueryReport("check " + args.term)
    ctx = parse_context(args.ctx or "")
    spans: dict = {}
    t = parse_term(args.term, spans)
    if not checker.wf_context(ctx):
        raise TypingError(checker.ErrorKind.IllFormedContext, None, ctx, "context is not well formed")
    try:
        ty = checker.infer(ctx, t)
    except TypingError as exc:
        span = spans.get(id(exc.term))
        where = f" at {span}" if span else ""
        rep.result = "error"
        rep.data = {"error": exc.kind.value, "detail": exc.detail, "span": str(span) if span else None}
        rep.text = [f"error{where}: {exc}"]
        return EXIT_ERROR, rep
    rep.data = {"term": pretty(t), "type": pretty(ty)}
    rep.text = [f"{pretty(t)}", f"  : {pretty(ty)}"]
    return EXIT_OK, rep


def cmd_eval(args) -> tuple[int, QueryReport]:
    model = _model(args)
    ctx = Context()
    t = parse_term(args.term)
    value = interp.interpret(ctx, t, (), model)
    rep = QueryReport("eval " + args.term, model.describe())
    rep.data = {"value": interp.to_json(value, model), "rendered": interp.render(value, model)}
    rep.text = [interp.render(value, model)]
    if args.figure and isinstance(value, interp.Open):
        from .plotting import plot_open_lattice

        plot_open_lattice(model, args.figure, highlight=value.o.bits)
        rep.data["figure"] = args.figure
    return EXIT_OK, rep


def cmd_valid(args) -> tuple[int, QueryReport]:
    model = _model(args)
    ctx = parse_context(args.ctx or "")
    t = parse_term(args.term)
    res = interp.validity(ctx, t, model)
    rep = QueryReport("valid " + args.term, model.describe())
    rep.data = {
        "valid": res.valid,
        "vacuous": res.vacuous,
        "environments": res.environments,
        "reference_point": model.reference_name,
    }
    if res.valid:
        rep.result = "vacuous" if res.vacuous else "valid"
        rep.text = [
            "valid (vacuously: the context has no interpretation)" if res.vacuous else "valid",
        ]
        code = EXIT_OK
    else:
        rep.result = "invalid"
        den = interp.render(res.denotation, model)
        rep.data["denotation"] = interp.to_json(res.denotation, model)
        rep.data["environment"] = [interp.to_json(v, model) for v in res.counterexample]
        rep.text = [f"invalid: p = {model.reference_name} is not in {den}"]
        if len(ctx):
            env = ", ".join(f"{n} = {interp.render(v, model)}" for (n, _), v in zip(ctx, res.counterexample))
            rep.text.append(f"  under {env}")
        code = EXIT_INVALID
    if args.figure and res.denotation is not None and isinstance(res.denotation, interp.Open):
        from .plotting import plot_open_lattice

        plot_open_lattice(model, args.figure, highlight=res.denotation.o.bits)
        rep.data["figure"] = args.figure
    return code, rep


_OPS = {
    "exp": ("x^y", lambda x, y: exponential(x, y)),
    "meet": ("x/\\y", lambda x, y: meet_family([x, y])),
    "join": ("x\\/y", lambda x, y: join_family([x, y])),
}


def cmd_table(args) -> tuple[int, QueryReport]:
    model = _model(args)
    title, op = _OPS[args.op]
    opens = model.all_opens()
    names = [model.name_of(o.bits) for o in opens]
    rows = [[model.name_of(op(x, y).bits) for y in opens] for x in opens]
    width = max(len(title), *(len(n) for n in names))
    fmt = lambda cells: " | ".join(c.rjust(width) for c in cells)  # noqa: E731
    text = [fmt([title] + names), "-" * len(fmt([title] + names))]
    text += [fmt([names[i]] + row) for i, row in enumerate(rows)]
    rep = QueryReport(f"table --op {args.op}", model.describe(), "table")
    rep.data = {
        "op": args.op,
        "opens": [{"name": n, "points": model.members(o.bits)} for n, o in zip(names, opens)],
        "rows": rows,
    }
    rep.text = text
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow([title] + names)
            for name, row in zip(names, rows):
                w.writerow([name] + row)
        rep.data["csv"] = args.csv
    if args.figure:
        from .plotting import plot_exponential_table

        if args.op != "exp":
            raise CommandError("--figure is only available for --op exp")
        plot_exponential_table(model, args.figure)
        rep.data["figure"] = args.figure
    return EXIT_OK, rep


def cmd_search(args) -> tuple[int, QueryReport]:
    goal = parse_term(args.goal)
    axiom = parse_term(args.axiom) if args.axiom else None
    for label, t in (("goal", goal), ("axiom", axiom)):
        if t is not None and not checker.is_propositional(Context(), t):
            raise CommandError(f"the {label} must be a closed proposition")
    found = find_countermodel(goal, axiom, args.max_points)
    rep = QueryReport(
        f"search --goal {args.goal}" + (f" --axiom {args.axiom}" if args.axiom else ""),
    )
    if found is None:
        rep.result = "none"
        rep.data = {"max_points": args.max_points}
        rep.text = [f"no countermodel with at most {args.max_points} points"]
        return EXIT_NOT_FOUND, rep
    m = found.model
    rep.result = "countermodel"
    rep.model = m.describe()
    rep.data = {"model": m.to_json(), "points": found.points, "family_mask": found.family_mask, "examined": found.examined}
    rep.text = [f"countermodel ({found.examined} models examined):", json.dumps(m.to_json(), ensure_ascii=False)]
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(m.to_json(), fh, ensure_ascii=False, indent=2)
        rep.data["output"] = args.output
    if args.figure:
        from .plotting import plot_open_lattice

        plot_open_lattice(m, args.figure)
        rep.data["figure"] = args.figure
    return EXIT_OK, rep


def cmd_point_condition(args) -> tuple[int, QueryReport]:
    model = _model(args)
    nb = minimal_neighborhood(model, model.reference_point)
    holds = check_point_condition(model)
    rep = QueryReport("point-condition", model.describe())
    rep.data = {
        "reference_point": model.reference_name,
        "minimal_neighborhood": model.members(nb.bits),
        "holds": holds,
    }
    rep.text = [
        f"minimal neighborhood of {model.reference_name}: {model.render(nb.bits)}",
        "point condition holds" if holds else "point condition FAILS",
    ]
    return EXIT_OK, rep


# ------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="heyting-ecc", description=__doc__.splitlines()[0])
    ap.add_argument("--json", action="store_true", help="print only the JSON report")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="infer the type of a term")
    p.add_argument("term")
    p.add_argument("--ctx", help='context, e.g. "P : Prop; h : P"')
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("eval", help="denotation of a closed term")
    p.add_argument("term")
    p.add_argument("--model", default="sierpinski")
    p.add_argument("--figure", help="write the open-set lattice with the result marked")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("valid", help="is the reference point in every denotation")
    p.add_argument("term")
    p.add_argument("--model", default="sierpinski")
    p.add_argument("--ctx")
    p.add_argument("--figure")
    p.set_defaults(func=cmd_valid)

    p = sub.add_parser("table", help="operation table of the open-set algebra")
    p.add_argument("--model", default="sierpinski")
    p.add_argument("--op", choices=sorted(_OPS), default="exp")
    p.add_argument("--csv", help="also write the table as CSV")
    p.add_argument("--figure", help="also render the table as an image")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("search", help="find a finite model separating axiom and goal")
    p.add_argument("--goal", required=True)
    p.add_argument("--axiom")
    p.add_argument("--max-points", type=int, default=3)
    p.add_argument("--output", help="write the countermodel as a model file")
    p.add_argument("--figure")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("point-condition", help="minimal neighborhood of the reference point")
    p.add_argument("--model", default="sierpinski")
    p.set_defaults(func=cmd_point_condition)
    return ap


_HANDLED = (ParseError, TypingError, TopologyError, InterpretationError, FuelExhausted, DuplicateName, CommandError, OSError)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, rep = args.func(args)
    except _HANDLED as exc:
        code = EXIT_ERROR
        rep = QueryReport(args.command, getattr(args, "model", None), "error")
        kind = exc.kind.value if isinstance(exc, TypingError) else type(exc).__name__
        rep.data = {"error": kind, "detail": str(exc)}
        span = getattr(exc, "span", None)
        if span is not None:
            rep.data["span"] = str(span)
        rep.text = [f"error: {kind}: {exc}"]
    if not args.json:
        for line in rep.text:
            print(line)
    print(rep.to_json())
    return code


if __name__ == "__main__":
    sys.exit(main())
