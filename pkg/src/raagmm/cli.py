"""Command-line front end: ``raagmm <command> --graph PATH [options]``.

Exit codes: 0 success, 1 bad input, 2 budget exhausted, 3 verification failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .complex import (
    cohomological_dimension, homology, mm_ball, order_complex, poset_to_dot,
    poset_to_json, whitehead_zero,
)
from .errors import BudgetExceeded, RaagmmError
from .graph import SimplicialGraph, bits, graph_to_json, parse_graph
from .reductivity import WordSet, all_partial_conjugations, default_bound, red_v
from .whitehead import enumerate_whitehead_poset, format_vtype
from .words import pc_power

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3

COMMANDS = ("graph-info", "whitehead", "cd", "homology", "reductivity", "mm-ball", "verify")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep exit code 2 reserved for budgets
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_INPUT)


def _positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="raagmm", description="Whitehead posets and reductivity for right-angled Artin groups.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--graph", required=True, help="graph file (JSON or undirected DOT)")
    p.add_argument("--words", help="word-set file, one word per line")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "dot", "text"), default="json")
    p.add_argument("--seed", type=_nonneg, default=0)
    p.add_argument("--max-elements", type=_positive, default=10 ** 6)
    p.add_argument("--exp-bound", type=_positive, default=None, help="exponent box (default: max word length)")
    p.add_argument("--inner-bound", type=_positive, default=6)
    p.add_argument("--radius", type=_nonneg, default=1)
    p.add_argument("--samples", type=_positive, default=200, help="random cases per verify suite")
    p.add_argument("--workers", type=_positive, default=os.cpu_count() or 1)
    return p


# -- helpers ------------------------------------------------------------------

def _read(path: str) -> tuple[str, str]:
    data = Path(path).read_bytes()
    return data.decode("utf-8"), hashlib.sha256(data).hexdigest()


def _envelope(args, hashes: dict, result) -> dict:
    return {
        "command": args.command,
        "input": hashes,
        "seed": args.seed,
        "budgets": {"max_poset_elements": args.max_elements, "exponent_bound": args.exp_bound,
                    "inner_bound": args.inner_bound, "radius": args.radius,
                    "samples": args.samples},
        "result": result,
    }


def _set(g: SimplicialGraph, mask: int) -> list[str]:
    return [g.labels[v] for v in bits(mask)]


# -- commands -------------------------------------------------------------------

def cmd_graph_info(g: SimplicialGraph, args) -> dict:
    verts = []
    for a in range(g.n):
        comps = []
        for C in g.component_masks(a):
            cls = {g.labels[b]: g.classify_component(a, b, C).value
                   for b in range(g.n) if not g.in_star(a, b)}
            comps.append({"vertices": _set(g, C), "classes": cls})
        verts.append({"vertex": g.labels[a], "link": _set(g, g.link_mask(a)),
                      "star": _set(g, g.star_mask(a)), "components": comps})
    return {"graph": graph_to_json(g), "vertices": verts,
            "sil_pairs": [[g.labels[a], g.labels[b]] for a, b in g.sil_pairs()]}


def cmd_whitehead(g, args, poset):
    out = poset_to_json(g, poset)
    out["size"] = len(poset)
    out["max_rank"] = max(poset.ranks)
    return out


def cmd_cd(g, args, poset) -> dict:
    r = cohomological_dimension(g, poset=poset)
    return {"cd": r.cd, "witness": format_vtype(g, r.witness), "witness_index": r.witness_index,
            "elements": r.elements}


def cmd_homology(g, args, poset) -> dict:
    out = {}
    for key, p in (("wh", poset), ("wh0", whitehead_zero(poset))):
        c = order_complex(p)
        out[key] = homology(c, reduced=True).to_json()
    return out


def _red_row(payload):
    g, f, W, bound = payload
    powers = {k: red_v(g, pc_power(f, k), W) for k in range(1, bound + 1)}
    best = max(powers, key=lambda k: (powers[k], -k))
    return powers[1], best, powers[best]


def cmd_reductivity(g, args, words: WordSet) -> dict:
    pcs = list(all_partial_conjugations(g))
    bound = args.exp_bound or default_bound(words)
    jobs = [(g, f, words, bound) for f in pcs]
    if args.workers > 1 and len(pcs) >= 64:
        with ProcessPoolExecutor(args.workers) as ex:
            vals = list(ex.map(_red_row, jobs, chunksize=16))
    else:
        vals = [_red_row(j) for j in jobs]
    # positive powers suffice: the inverse letter is its own row
    rows = [{"conjugator": (g.labels[f.vertex] + ("" if f.sign > 0 else "^-1")),
             "support": _set(g, f.support), "red": r1,
             "best_power": {"k": k, "red": rk}} for f, (r1, k, rk) in zip(pcs, vals)]
    first = next((r for r in rows if r["red"] > 0), None)
    return {"height": words.total_length(), "rows": rows, "strictly_reductive": first,
            "exponent_bound": bound}


def cmd_mm_ball(g, args, poset):
    return mm_ball(g, args.radius, args.inner_bound, poset=poset)


def cmd_verify(g, args, poset) -> dict:
    from .verify import run_all
    results = run_all(g, poset, seed=args.seed, samples=args.samples)
    return {"passed": all(r.passed for r in results), "suites": [r.to_json() for r in results]}


# -- rendering ------------------------------------------------------------------

def _text(command: str, result) -> str:
    if command == "cd":
        return f"cd = {result['cd']}\nwitness: {result['witness']}\n"
    if command == "verify":
        return "".join(f"{'PASS' if s['passed'] else 'FAIL'} {s['suite']} ({s['checked']} checks)\n"
                       for s in result["suites"])
    if command == "reductivity":
        return "".join(f"C[{r['conjugator']}; {{{','.join(r['support'])}}}] red={r['red']} "
                       f"best_power k={r['best_power']['k']} red={r['best_power']['red']}\n"
                       for r in result["rows"])
    return json.dumps(result, indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, gh = _read(args.graph)
        g = parse_graph(text)
        hashes = {"graph_sha256": gh}
        words = None
        if args.words:
            wtext, wh = _read(args.words)
            hashes["words_sha256"] = wh
            words = WordSet.parse(g, wtext)
        needs_poset = args.command in ("whitehead", "cd", "homology", "mm-ball", "verify")
        poset = enumerate_whitehead_poset(g, args.max_elements) if needs_poset else None
        dot = None
        if args.command == "graph-info":
            result = cmd_graph_info(g, args)
        elif args.command == "whitehead":
            result = cmd_whitehead(g, args, poset)
            dot = poset_to_dot(g, poset)
        elif args.command == "cd":
            result = cmd_cd(g, args, poset)
        elif args.command == "homology":
            result = cmd_homology(g, args, poset)
        elif args.command == "reductivity":
            if words is None:
                raise RaagmmError("the reductivity command needs --words")
            result = cmd_reductivity(g, args, words)
        elif args.command == "mm-ball":
            ball = cmd_mm_ball(g, args, poset)
            result = ball.to_json()
            dot = ball.to_dot()
        else:
            result = cmd_verify(g, args, poset)
    except BudgetExceeded as exc:
        _emit_error(args, "budget_exceeded", str(exc), exc.partial)
        return EXIT_BUDGET
    except (RaagmmError, OSError, UnicodeDecodeError) as exc:
        _emit_error(args, type(exc).__name__, str(exc), None)
        return EXIT_INPUT
    if args.format == "json":
        body = json.dumps(_envelope(args, hashes, result), indent=2, sort_keys=True) + "\n"
    elif args.format == "dot":
        if dot is None:
            _emit_error(args, "InputError", f"DOT output is not available for {args.command}", None)
            return EXIT_INPUT
        body = dot
    else:
        body = _text(args.command, result)
    if args.out:
        Path(args.out).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)
    if args.command == "verify" and not result["passed"]:
        return EXIT_VERIFY
    return EXIT_OK


def _emit_error(args, kind: str, message: str, partial) -> None:
    err = {"error": {"kind": kind, "message": message, "partial": partial}, "command": args.command}
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
