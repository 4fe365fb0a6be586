"""Command-line entry point: ``solgrowth <subcommand> ...``.

Exit codes: 0 success, 2 invalid input, 3 resource refusal, 4 verification
mismatch.  Errors are printed as a JSON object on stdout.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .automata import determinize, growth_series
from .automata.io import automaton_from_dict, automaton_to_dict
from .errors import ResourceLimitError
from .laurent import XElement, parse_poly, x_size
from .oracle import ball_bfs, compare_series, parry_series, sol_constants
from .solgroup import (GroupParams, equal_words, eval_word, geodesic_length, geodesic_word,
                       parse_word, to_group_element)

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_MISMATCH = 0, 2, 3, 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


class _Mismatch(Exception):
    def __init__(self, payload):
        super().__init__("verification mismatch")
        self.payload = payload


def _emit(obj, fmt: str, text: str | None = None):
    if fmt == "text" and text is not None:
        print(text)
    else:
        print(json.dumps(obj, sort_keys=True))


def _trace(value: str) -> int:
    T = int(value)
    GroupParams(T)
    return T


_SOL_LETTER = re.compile(r"^-?\d+:-?\d+$")


def _letter_parser(data: dict):
    letters = data.get("alphabet", [])
    if letters and all(_SOL_LETTER.match(str(a)) for a in letters):
        from .sol_language import parse_letter
        return parse_letter
    return lambda s: s


# ---------------------------------------------------------------------------


def cmd_eval(args):
    word = parse_word(args.word)
    x = eval_word(word)
    g = to_group_element(x, args.trace)
    obj = {"word": word, "utype": str(x.utype), "height": x.height,
           "element": {"x": list(g.x), "h": g.h}, "geodesic_length": geodesic_length(x)}
    _emit(obj, args.format, f"type {x.utype}, height {x.height}, element {g.x} at height {g.h}")


def cmd_geodesic(args):
    x = XElement(parse_poly(args.poly), args.height)
    w = geodesic_word(x)
    obj = {"utype": str(x.utype), "height": x.height, "word": w, "length": len(w),
           "x_size": x_size(x)}
    _emit(obj, args.format, f"{w or '(empty)'} length {len(w)}")


def cmd_equal(args):
    eq = equal_words(parse_word(args.word1), parse_word(args.word2), args.trace)
    _emit({"equal": eq}, args.format, "true" if eq else "false")


def cmd_ball(args):
    gens = [g.strip() for g in args.gens.split(",") if g.strip()]
    sc = ball_bfs(args.trace, gens, args.radius, workers=args.workers,
                  max_elements=args.max_elements)
    if args.format == "csv":
        sys.stdout.write(sc.to_csv())
    else:
        _emit({"trace": sc.trace, "generators": sc.generators, "radius": sc.radius,
               "counts": sc.counts}, args.format, " ".join(map(str, sc.counts)))


def cmd_series_fsa(args):
    with open(args.file) as fh:
        data = json.load(fh)
    m = automaton_from_dict(data, _letter_parser(data))
    if not m.is_deterministic:
        if not args.determinize:
            raise ValueError("automaton is nondeterministic; pass --determinize")
        m = determinize(m, args.max_states)
    s = growth_series(m)
    if args.reduce:
        s = s.reduced()
    obj = {"series": s.to_dict(), "coefficients": s.coefficients(args.count)}
    _emit(obj, args.format, f"{s}\n{' '.join(map(str, obj['coefficients']))}")


def _write_automaton(m, args):
    text = json.dumps(automaton_to_dict(m), sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        _emit({"written": args.out, "states": m.num_states}, args.format,
              f"wrote {args.out} ({m.num_states} states)")
    else:
        print(text)


def cmd_build_ln(args):
    from .sol_language import build_ln
    _write_automaton(build_ln(args.n, strict=not args.non_strict), args)


def cmd_build_acceptor(args):
    from .sol_language import acceptor_rn_prime, acceptor_rni
    if args.i is None:
        m = acceptor_rn_prime(args.n, args.trace, args.max_states)
    else:
        m = acceptor_rni(args.n, args.i, args.trace, args.max_states)
    _write_automaton(m, args)


def cmd_pipeline(args):
    from .sol_language import sol_pipeline
    res = sol_pipeline(args.trace, n=args.n, K=args.K, i=args.i, max_states=args.max_states)
    obj = res.to_dict()
    obj["coefficients"] = res.series.coefficients(args.count)
    _emit(obj, args.format, f"{res.series}\n{' '.join(map(str, obj['coefficients']))}")


def cmd_verify_parry(args):
    T = args.half_trace
    top = max(args.radius, args.recurrence_to or args.radius)
    series = parry_series(T)
    sc = ball_bfs(2 * T, ["a", "taT", "t"], top, workers=args.workers,
                  max_elements=args.max_elements)
    head = compare_series(series, sc.counts[:args.radius + 1])
    full = compare_series(series, sc.counts, recurrence_from=args.radius + 1)
    obj = {
        "half_trace": T,
        "trace": 2 * T,
        "generators": ["a", "taT", "t"],
        "radius": args.radius,
        "comparison": head.to_dict(),
        "recurrence_to": top,
        "recurrence_counts": sc.counts[args.radius + 1:],
        "recurrence_ok": full.recurrence_ok,
        "recurrence_failures": full.recurrence_failures,
        "ok": head.exact_match and full.recurrence_ok,
    }
    if not obj["ok"]:
        raise _Mismatch(obj)
    _emit(obj, args.format, f"match through radius {args.radius} ({head.convention} counts); "
                            f"recurrence holds through {top}")


def cmd_constants(args):
    c = sol_constants(args.trace, args.n)
    d = c.to_dict()
    _emit(d, args.format, " ".join(f"{k}={v}" for k, v in d.items()))


# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="solgrowth", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, formats=("json", "text")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.set_defaults(func=fn)
        return sp

    sp = add("eval", cmd_eval, "word -> unreduced type, height and group element")
    sp.add_argument("--trace", type=_trace, required=True)
    sp.add_argument("--word", required=True)

    sp = add("geodesic", cmd_geodesic, "polynomial and height -> shortest word")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--height", type=int, required=True)

    sp = add("equal", cmd_equal, "do two words define the same element")
    sp.add_argument("--trace", type=_trace, required=True)
    sp.add_argument("word1")
    sp.add_argument("word2")

    sp = add("ball", cmd_ball, "sphere counts by breadth-first search", ("csv", "json", "text"))
    sp.add_argument("--trace", type=_trace, required=True)
    sp.add_argument("--gens", default="a,t")
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--max-elements", type=int, default=50_000_000)

    sp = add("series-fsa", cmd_series_fsa, "growth series of a one-tape automaton JSON file")
    sp.add_argument("file")
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--determinize", action="store_true")
    sp.add_argument("--reduce", action="store_true")
    sp.add_argument("--max-states", type=int, default=2_000_000)

    sp = add("build-ln", cmd_build_ln, "automaton for L_n (or L_n' with --non-strict)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--non-strict", action="store_true")
    sp.add_argument("--out")

    sp = add("build-acceptor", cmd_build_acceptor,
             "congruence acceptor: R_n' by default, R_{n,i} with --i")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trace", type=_trace, required=True)
    sp.add_argument("--i", type=int)
    sp.add_argument("--out")
    sp.add_argument("--max-states", type=int, default=2_000_000)

    sp = add("pipeline", cmd_pipeline, "minimal cross section and its growth series")
    sp.add_argument("--trace", type=_trace, required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--K", type=int)
    sp.add_argument("--i", type=int)
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--max-states", type=int, default=400_000)

    sp = add("verify-parry", cmd_verify_parry, "BFS against the closed-form series")
    sp.add_argument("--half-trace", type=int, default=3)
    sp.add_argument("--radius", type=int, default=12)
    sp.add_argument("--recurrence-to", type=int)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--max-elements", type=int, default=50_000_000)

    sp = add("constants", cmd_constants, "shrinking-argument constants for a trace")
    sp.add_argument("--trace", type=_trace, required=True)
    sp.add_argument("--n", type=int)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(json.dumps({"error": "invalid_input", "message": str(exc)}, sort_keys=True))
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        args.func(args)
    except ResourceLimitError as exc:
        print(json.dumps(exc.to_dict(), sort_keys=True))
        return EXIT_RESOURCE
    except _Mismatch as exc:
        print(json.dumps({"error": "verification_mismatch", "report": exc.payload},
                         sort_keys=True))
        return EXIT_MISMATCH
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": "invalid_input", "message": str(exc)}, sort_keys=True))
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
