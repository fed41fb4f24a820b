"""Command line entry point.

Exit codes: 0 success, 1 failed verification (with a witness), 2 bad input.
Every report is deterministic: no timestamps, and all listings are sorted.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import io
from .cages import cage_contains_hyperplane, cage_reduce, is_cage
from .collapse import (AutomorphismAction, collapse_orbit, uncage_pipeline,
                       verify_collapse_properties)
from .complexes import random_median
from .errors import InputError, PreconditionError, ResourceError, VerificationError
from .groups import (raag_ball, raag_boundary_equals_BX, racg_ball,
                     racg_boundary_equals_BX, racg_has_straight_links)
from .hyperplanes import (depth, dimension, edge_halfspace, halfspace, reducibility_witness,
                          straight_links_failure)
from .median import CubeComplex
from .tight_cages import (CONDITIONS, DEFAULT_MARGIN, DEFAULT_THRESHOLD,
                          find_sectorless_tight_cages, find_loose_hyperplanes)
from .ultrafilters import enumerate_consistent, principal, uf_distance, vertex_of


class _Out:
    """Collects a report as ordered key/value data and renders it as text or JSON."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.data = {}
        self.lines = []

    def put(self, key, value, text=None):
        self.data[key] = value
        self.lines.append(f"{key}: {value if text is None else text}")

    def text(self, line: str):
        self.lines.append(line)

    def emit(self):
        if self.fmt == "json":
            print(json.dumps(self.data, ensure_ascii=False, indent=2))
        else:
            print("\n".join(self.lines))


def _check_format(args, allowed=("text", "json")):
    if args.format not in allowed:
        raise InputError(f"--format {args.format} is not available for this command")


def _positive(name):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if value < 1:
            raise argparse.ArgumentTypeError(f"{name} must be at least 1")
        return value
    return parse


def _vertex(c: CubeComplex, text: str) -> int:
    if c.has_vertex(text):
        return c.index(text)
    try:
        return c.index(int(text))
    except ValueError:
        raise InputError(f"unknown vertex {text!r}") from None


def _parse_halfspaces(c: CubeComplex, text: str):
    out = []
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        if ">" in part:
            u, v = part.split(">", 1)
            a, b = _vertex(c, u.strip()), _vertex(c, v.strip())
            if b not in c.adj[a]:
                raise InputError(f"{part!r} is not an edge")
            out.append(edge_halfspace(c, a, b))
        elif ":" in part:
            k, s = part.split(":", 1)
            try:
                k, s = int(k), int(s)
            except ValueError:
                raise InputError(f"bad halfspace {part!r}; use class:side or u>v") from None
            if not 0 <= k < c.num_classes or s not in (0, 1):
                raise InputError(f"no halfspace {part!r}")
            out.append(halfspace(c, k, s))
        else:
            raise InputError(f"bad halfspace {part!r}; use class:side or u>v")
    if not out:
        raise InputError("no halfspaces given")
    return out


def _labels(c: CubeComplex, vs) -> list:
    return io.sorted_ids(c.label(v) for v in vs)


def _cage_record(c: CubeComplex, tc) -> dict:
    return {
        "S": [str(h) for h in tc.S],
        "T": [str(h) for h in tc.T],
        "core": _labels(c, tc.core),
        "verdicts": {k: tc.verdicts[k] for k in CONDITIONS},
        "proxy": tc.proxy,
        "core_meets_frontier": tc.core_meets_frontier,
        "core_depth": tc.core_depth,
        "core_span": tc.core_span,
    }


def _describe(c: CubeComplex, out: _Out):
    out.put("vertices", c.n)
    out.put("edges", len(c.edges))
    out.put("classes", c.num_classes)
    out.put("dimension", dimension(c))
    wit = reducibility_witness(c)
    out.put("reducible", wit is not None)
    if wit is not None:
        out.put("reducibility_witness", [list(wit[0]), list(wit[1])],
                f"{list(wit[0])} | {list(wit[1])}")
    interior = c.interior(1)
    fail = straight_links_failure(c, interior)
    out.put("straight_links", fail is None,
            "yes" if fail is None else f"no (edge {c.label(fail[0])}-{c.label(fail[1])})")
    if c.frontier:
        out.put("frontier", len(c.frontier))
    depths = {str(h): depth(c, h) for h in c.halfspaces}
    out.put("depth", depths, " ".join(f"{k}={v}" for k, v in depths.items()))


# -- subcommands -------------------------------------------------------------

def cmd_validate(args, out):
    _check_format(args)
    c = io.load_complex(args.input)
    out.put("median", True, "yes")
    out.put("vertices", c.n)
    out.put("edges", len(c.edges))
    out.put("classes", c.num_classes)
    out.put("frontier", len(c.frontier))


def cmd_analyze(args, out):
    _check_format(args)
    if args.fuzz:
        rng = random.Random(args.seed)
        for i in range(args.fuzz):
            c = random_median(rng, args.size, args.max_dim)
            sub = _Out(args.format)
            _describe(c, sub)
            sub.data.pop("depth")
            out.data[f"complex {i}"] = sub.data
            out.text(f"complex {i}: " + ", ".join(
                f"{k}={v}" for k, v in sub.data.items() if k != "reducibility_witness"))
        return
    if not args.input:
        raise InputError("analyze needs --input or --fuzz")
    _describe(io.load_complex(args.input), out)


def cmd_ultrafilters(args, out):
    _check_format(args)
    c = io.load_complex(args.input)
    b = _vertex(c, args.base) if args.base is not None else 0
    ufs = enumerate_consistent(c, args.max_classes)
    base = principal(c, b)
    rows = []
    for alpha in ufs:
        v = vertex_of(c, alpha)
        if principal(c, v) != alpha:
            raise VerificationError(f"consistent orientation {alpha.orientation} is not principal")
        rows.append((c.label(v), str(uf_distance(c, base, alpha, b))))
    verts = {r[0] for r in rows}
    if len(verts) != c.n or len(rows) != c.n:
        raise VerificationError(f"{len(rows)} consistent orientations for {c.n} vertices")
    out.put("consistent", len(rows))
    out.put("bijection", True, "every consistent orientation is principal, one per vertex")
    out.put("base", c.label(b))
    out.data["distances"] = {str(k): d for k, d in rows}
    for k, d in rows:
        out.text(f"  {k}: {d}")


def cmd_cages(args, out):
    _check_format(args)
    c = io.load_complex(args.input)
    alpha = principal(c, _vertex(c, args.ultrafilter))
    hs = _parse_halfspaces(c, args.halfspaces)
    trace = []
    cage = cage_reduce(c, hs, alpha, trace)
    if not is_cage(c, cage.halfspaces, alpha):
        raise VerificationError(f"reduction output {[str(h) for h in cage.halfspaces]} is no cage")
    out.put("input", [str(h) for h in sorted(set(hs))], " ".join(str(h) for h in sorted(set(hs))))
    out.data["trace"] = trace
    for t in trace:
        if t["op"] == "drop":
            out.text(f"  drop {t['old']} (contains {t['new']})")
        else:
            out.text(f"  replace {t['old']} by {t['new']} via {' '.join(map(str, t['path']))}")
    out.put("cage", [str(h) for h in cage.halfspaces], " ".join(str(h) for h in cage.halfspaces))
    out.put("anchor", c.label(cage.anchor))
    inside = cage_contains_hyperplane(c, cage)
    out.put("contains_hyperplane", inside, "none" if inside is None else str(inside))


def cmd_tight_cages(args, out):
    _check_format(args)
    c = io.load_complex(args.input)
    cages = find_sectorless_tight_cages(c, args.threshold, args.margin, args.threads)
    out.put("sectorless_tight_cages", len(cages))
    out.data["cages"] = [_cage_record(c, tc) for tc in cages]
    for rec in out.data["cages"]:
        verdicts = " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in rec["verdicts"].items())
        out.text(f"  T = {{{', '.join(rec['T'])}}} core = {rec['core']}")
        out.text(f"    {verdicts}; proxy {rec['proxy']} (meets frontier {rec['core_meets_frontier']}, "
                 f"depth {rec['core_depth']}, span {rec['core_span']})")
    loose = find_loose_hyperplanes(c, cages, args.threshold, args.margin)
    out.put("loose_hyperplanes", [k for k, _ in loose])


def _group(args, out, kind):
    _check_format(args)
    gamma = io.load_graph(args.graph)
    build = racg_ball if kind == "racg" else raag_ball
    if args.action == "certify":
        cert = (racg_boundary_equals_BX if kind == "racg" else raag_boundary_equals_BX)(
            gamma, args.radius if args.with_cage else None)
        out.data.update({"group": cert.group, "infinite": cert.infinite,
                         "boundary_equals_BX": cert.equal, "reason": cert.reason})
        out.lines.append(cert.summary())
        if cert.join is not None:
            out.data["join"] = [list(p) for p in cert.join]
        if cert.product_cage is not None:
            ball = build(gamma, args.radius)
            out.put("product_tight_cage", _cage_record(ball, cert.product_cage),
                    "T = " + " ".join(str(h) for h in cert.product_cage.T))
        if cert.note:
            out.put("note", cert.note)
        return
    ball = build(gamma, args.radius)
    if args.action == "build":
        data = io.complex_to_data(ball)
        out.data.update(data)
        out.lines.append(json.dumps(data, ensure_ascii=False))
        return
    _describe(ball, out)
    if kind == "racg":
        out.put("straight_links_from_graph", racg_has_straight_links(gamma))
    cages = find_sectorless_tight_cages(ball, args.threshold, args.margin, args.threads)
    out.put("sectorless_tight_cages", len(cages))
    out.data["cages"] = [_cage_record(ball, tc) for tc in cages]


def cmd_racg(args, out):
    _group(args, out, "racg")


def cmd_raag(args, out):
    _group(args, out, "raag")


def _action(c, path):
    if path is None:
        return AutomorphismAction.trivial(c)
    return AutomorphismAction.from_data(c, io.read_json(path))


def cmd_collapse(args, out):
    _check_format(args)
    c = io.load_complex(args.input)
    m = collapse_orbit(c, _action(c, args.action), args.cls)
    report = verify_collapse_properties(m)
    out.put("orbit", sorted(m.orbit))
    out.put("target", io.complex_to_data(m.target), json.dumps(io.complex_to_data(m.target)))
    out.put("lift", list(m.lift))
    out.put("checks", report.checks,
            " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in report.checks.items()))
    if not report.passed:
        raise VerificationError(f"collapse checks failed: {report.witnesses}")


def cmd_uncage(args, out):
    _check_format(args)
    c = io.load_complex(args.input)
    final, total, log = uncage_pipeline(c, _action(c, args.action), args.threshold, args.margin)
    for entry in log:
        print(json.dumps(entry, ensure_ascii=False, sort_keys=True))
    print(json.dumps({"result": io.complex_to_data(final), "collapsed": sorted(total.orbit)},
                     ensure_ascii=False, sort_keys=True))
    out.fmt = "none"


def cmd_export(args, out):
    if args.format == "text":
        args.format = "json"
    _check_format(args, ("json", "dot"))
    c = io.load_complex(args.input)
    if args.format == "dot":
        sys.stdout.write(io.to_dot(c, args.cls))
    else:
        print(json.dumps(io.complex_to_data(c), ensure_ascii=False))
    out.fmt = "none"


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")
    common.add_argument("--threads", type=_positive("threads"), default=1)
    tight = argparse.ArgumentParser(add_help=False)
    tight.add_argument("--threshold", type=_positive("threshold"), default=DEFAULT_THRESHOLD)
    tight.add_argument("--margin", type=int, default=DEFAULT_MARGIN)

    p = argparse.ArgumentParser(prog="cubecage",
                                description="Finite CAT(0) cube complexes: hyperplanes, "
                                            "cages, tight cages and collapses.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check that a complex is median")
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("analyze", parents=[common], help="classes, dimension, links, depth")
    s.add_argument("--input")
    s.add_argument("--fuzz", type=_positive("fuzz"), help="analyse this many random complexes")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--size", type=_positive("size"), default=12)
    s.add_argument("--max-dim", type=_positive("max-dim"), default=None)
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("ultrafilters", parents=[common], help="enumerate consistent orientations")
    s.add_argument("mode", choices=("enumerate",))
    s.add_argument("--input", required=True)
    s.add_argument("--base")
    s.add_argument("--max-classes", type=_positive("max-classes"), default=20)
    s.set_defaults(func=cmd_ultrafilters)

    s = sub.add_parser("cages", parents=[common], help="reduce halfspaces to a cage")
    s.add_argument("mode", choices=("reduce",))
    s.add_argument("--input", required=True)
    s.add_argument("--ultrafilter", required=True, help="vertex whose principal ultrafilter is used")
    s.add_argument("--halfspaces", required=True, help="comma list of class:side or u>v")
    s.set_defaults(func=cmd_cages)

    s = sub.add_parser("tight-cages", parents=[common, tight], help="find sectorless tight cages")
    s.add_argument("mode", choices=("find",))
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_tight_cages)

    for name, func in (("racg", cmd_racg), ("raag", cmd_raag)):
        s = sub.add_parser(name, parents=[common, tight],
                           help=f"{name.upper()} balls and boundary certificates")
        s.add_argument("action", choices=("certify", "build", "analyze"))
        s.add_argument("--graph", required=True)
        s.add_argument("--radius", type=_positive("radius"), default=4)
        s.add_argument("--with-cage", action="store_true",
                       help="certify: also build the product tight cage in the ball")
        s.set_defaults(func=func)

    s = sub.add_parser("collapse", parents=[common], help="collapse a hyperplane orbit")
    s.add_argument("--input", required=True)
    s.add_argument("--class", dest="cls", type=int, required=True)
    s.add_argument("--action")
    s.set_defaults(func=cmd_collapse)

    s = sub.add_parser("uncage", parents=[common, tight], help="run the uncage pipeline")
    s.add_argument("--input", required=True)
    s.add_argument("--action")
    s.set_defaults(func=cmd_uncage)

    s = sub.add_parser("export", parents=[common], help="write a complex as JSON or DOT")
    s.add_argument("--input", required=True)
    s.add_argument("--class", dest="cls", type=int, help="DOT: highlight one class")
    s.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    out = _Out(args.format)
    try:
        args.func(args, out)
    except (InputError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (VerificationError, PreconditionError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    if out.fmt != "none":
        out.emit()
    return 0


if __name__ == "__main__":
    sys.exit(main())
