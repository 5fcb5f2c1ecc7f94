"""Command-line interface: ``k3kit <area> <command> [options]``.

Every command prints sorted-key JSON on stdout (NDJSON for enumerations).
Exit codes: 0 ok, 2 invalid input, 3 a bounded search was inconclusive.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass, field
from typing import Iterable

from . import density, fibers, lattice, modular, torsor, weierstrass
from .errors import InvalidInput
from .jsonio import dumps, load_file

EXIT_OK, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 2, 3


@dataclass
class CommandResult:
    exit_code: int
    payload: object = None
    audit: list = field(default_factory=list)
    stream: Iterable | None = None  # NDJSON records, printed one per line
    text: str | None = None

    def render(self) -> str:
        if self.text is not None:
            return self.text
        return dumps(self.payload)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


# --- input helpers ---------------------------------------------------------------


def _gram(path) -> lattice.GramLattice:
    data = load_file(path)
    if isinstance(data, list):
        data = {"gram": data}
    return lattice.GramLattice.from_json(data)


def _group_spec(s):
    """A spec string, an inline generator list, or a JSON file holding either."""
    if os.path.isfile(s):
        data = load_file(s)
        if isinstance(data, dict):
            if "generators" in data:
                return data["generators"]
            raise InvalidInput(f"{s}: expected a generator list")
        return data
    return s


def _group(args) -> modular.FiniteMatrixGroup:
    if getattr(args, "group_file", None):
        return modular.FiniteMatrixGroup.from_json(load_file(args.group_file))
    return modular.group_image(_group_spec(args.group or "full"), args.level)


def _branch(path) -> modular.BranchData:
    return modular.BranchData.from_json(load_file(path))


def _point(s):
    parts = s.replace("(", "").replace(")", "").split(",")
    if len(parts) != 2:
        raise InvalidInput(f"point must be 'x,y', got {s!r}")
    try:
        return tuple(int(x) for x in parts)
    except ValueError:
        raise InvalidInput(f"point must be 'x,y' with integers, got {s!r}") from None


def _model(path) -> weierstrass.WeierstrassModel:
    return weierstrass.WeierstrassModel.from_json(load_file(path))


def _levels(args):
    if args.max_level < args.min_level:
        raise InvalidInput("empty level range")
    return range(args.min_level, args.max_level + 1)


# --- lattice ---------------------------------------------------------------------


def cmd_lattice_standard(args):
    lat = lattice.standard_lattice(args.name)
    out = lat.to_json()
    out.update(name=args.name, signature=list(lat.signature), determinant=lat.determinant)
    return CommandResult(EXIT_OK, out)


def cmd_lattice_analyze(args):
    lat = _gram(args.gram)
    info = {"rank": lat.rank, "signature": list(lat.signature), "determinant": lat.determinant}
    if args.square is None:
        return CommandResult(EXIT_OK, info)
    res = lattice.represents(lat, args.square, args.bound, escalate=args.escalate)
    out = res.to_json()
    out["lattice"] = info
    if args.enumerate:
        vecs = lattice.enumerate_square(lat, args.square, args.bound, primitive_only=args.primitive)
        out["vectors"] = [list(v.coords) for v in vecs]
    code = EXIT_INCONCLUSIVE if res.status == lattice.UNKNOWN else EXIT_OK
    return CommandResult(code, out, [("represents", "box search, then local solubility at real and p | 2 n det")])


def cmd_lattice_random(args):
    rng = random.Random(args.seed)
    lat = lattice.random_hyperbolic_lattice(args.rank, rng)
    out = lat.to_json()
    out.update(seed=args.seed, signature=list(lat.signature), determinant=lat.determinant)
    return CommandResult(EXIT_OK, out)


# --- monodromy -------------------------------------------------------------------


def cmd_monodromy_image(args):
    return CommandResult(EXIT_OK, _group(args).to_json())


def cmd_monodromy_orbit(args):
    G = _group(args)
    orb = sorted(modular.orbit(G, _point(args.point)))
    return CommandResult(EXIT_OK, {"level": G.level, "point": list(_point(args.point)),
                                   "size": len(orb), "orbit": [list(p) for p in orb]})


def cmd_monodromy_genus(args):
    G = _group(args)
    res = modular.multisection_euler(G, _point(args.point), _branch(args.fibers))
    out = res.to_json()
    out["level"] = G.level
    out["contributions"] = res.contributions
    return CommandResult(EXIT_OK, out, [("multisection_euler", "Riemann-Hurwitz with exact cycle counts")])


def cmd_monodromy_sweep(args):
    res = modular.genus_sweep(_group_spec(args.group), _branch(args.fibers), _levels(args))
    out = res.to_json()
    out["table"] = [list(r) for r in res.table()]
    return CommandResult(EXIT_OK, out)


def cmd_monodromy_bound(args):
    if args.group_file or args.group:
        G = _group(args)
        m, index = G.level, modular.index_in_full(G)
    else:
        if args.level is None or args.index is None:
            raise InvalidInput("give --group/--group-file with --level, or --level with --index")
        G, m, index = None, args.level, args.index
    b = modular.degree_lower_bound(m, index)
    lo, _ = modular.six_over_pi_squared_bounds()
    out = b.to_json()
    out["rational_lower_6_over_pi2"] = lo
    if G is not None:
        sizes = [len(o) for o in modular.orbit_partition(G, modular.primitive_points(m))]
        out["orbit_sizes"] = sizes
        out["holds"] = all(s > lo * m * m / index for s in sizes)
    return CommandResult(EXIT_OK, out)


# --- fibers ----------------------------------------------------------------------


def _filters(args):
    return fibers.Filters(args.min_fibers, args.max_fibers, args.only_multiplicative,
                          args.require_pm, args.no_pm)


def cmd_fibers_table(args):
    rows = []
    for f in fibers.fiber_table(args.max_chi):
        rows.append({"type": f.name, "chi": f.euler, "components": f.components, "rank": f.rank,
                     "multiplicative": f.multiplicative, "potentially_multiplicative": f.potentially_multiplicative,
                     "monodromy": [list(r) for r in f.local_monodromy], "monodromy_order": f.monodromy_order})
    return CommandResult(EXIT_OK, rows)


def cmd_fibers_enumerate(args):
    if args.limit < 0:
        raise InvalidInput("--limit must be >= 0")
    gen = fibers.enumerate_configurations(args.chi, args.max_rank, _filters(args))

    def records():
        for i, conf in enumerate(gen):
            if i >= args.limit:
                print(f"k3kit: stopped after --limit {args.limit} configurations", file=sys.stderr)
                return
            yield conf.to_json()

    return CommandResult(EXIT_OK, stream=records())


def cmd_fibers_min_count(args):
    res = fibers.min_fiber_count(args.chi, args.max_rank, _filters(args))
    return CommandResult(EXIT_OK, res.to_json())


# --- weierstrass -----------------------------------------------------------------


def cmd_weierstrass_analyze(args):
    return CommandResult(EXIT_OK, weierstrass.analyze(_model(args.model)).to_json())


def cmd_weierstrass_jmap(args):
    return CommandResult(EXIT_OK, weierstrass.j_map(_model(args.model)).to_json())


def cmd_weierstrass_index_bound(args):
    if args.group_file:
        claimed = modular.FiniteMatrixGroup.from_json(load_file(args.group_file))
    elif args.index is not None:
        claimed = args.index
    else:
        raise InvalidInput("give --index or --group-file")
    return CommandResult(EXIT_OK, weierstrass.index_bound(_model(args.model), claimed).to_json())


# --- torsor ----------------------------------------------------------------------


def cmd_torsor_order(args):
    F = torsor.FibrationDescriptor(args.degree)
    out = {"degree": F.degree, "order": torsor.class_order(F)}
    if args.m is not None:
        out["m"] = args.m
        out["jm_class"] = torsor.jm_class(args.m, F)
    return CommandResult(EXIT_OK, out)


def cmd_torsor_transfer(args):
    return CommandResult(EXIT_OK, {"t": args.t, "m": args.m, "order": torsor.transfer_order(args.t, args.m)})


def cmd_torsor_reduce(args):
    return CommandResult(EXIT_OK, torsor.reduce_to_p_torsion(args.p, args.t, args.k).to_json())


def cmd_torsor_verdict(args):
    conf = fibers.FiberConfiguration.from_json(load_file(args.fibers))
    F = torsor.FibrationDescriptor(args.degree, monodromy=_group_spec(args.group), fibers=conf)
    return CommandResult(EXIT_OK, torsor.no_rat_verdict(F, args.p, args.p0).to_json())


# --- classify --------------------------------------------------------------------


def cmd_classify(args):
    v = density.classify(_gram(args.gram), args.search_bound, escalate=args.escalate)
    inconclusive = v.status != density.DENSE and any(
        isinstance(e, lattice.RepresentationResult) and e.status == lattice.UNKNOWN for e in v.evidence.values())
    code = EXIT_INCONCLUSIVE if inconclusive else EXIT_OK
    if args.explain:
        return CommandResult(code, v.to_json(), text=density.explain(v))
    return CommandResult(code, v.to_json(), [("classify", v.citation)])


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="k3kit", description=__doc__.splitlines()[0])
    areas = p.add_subparsers(dest="area", required=True, parser_class=_Parser)

    lat = areas.add_parser("lattice").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    s = lat.add_parser("standard")
    s.add_argument("--name", required=True)
    s.set_defaults(fn=cmd_lattice_standard)
    s = lat.add_parser("analyze")
    s.add_argument("--gram", required=True)
    s.add_argument("--square", type=int)
    s.add_argument("--bound", type=int, default=10)
    s.add_argument("--escalate", action="store_true")
    s.add_argument("--enumerate", action="store_true", help="also list all vectors of that square in the box")
    s.add_argument("--primitive", action="store_true")
    s.set_defaults(fn=cmd_lattice_analyze)
    s = lat.add_parser("random")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_lattice_random)

    mono = areas.add_parser("monodromy").add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def group_args(sp, required_level=True):
        sp.add_argument("--group", default=None,
                        help='"full" (default), "gamma0(N)", ..., generators JSON or file')
        sp.add_argument("--group-file", default=None, help="group image JSON from 'monodromy image'")
        sp.add_argument("--level", type=int, required=required_level)

    s = mono.add_parser("image")
    group_args(s)
    s.set_defaults(fn=cmd_monodromy_image)
    s = mono.add_parser("orbit")
    group_args(s)
    s.add_argument("--point", default="1,0")
    s.set_defaults(fn=cmd_monodromy_orbit)
    s = mono.add_parser("genus")
    group_args(s)
    s.add_argument("--point", default="1,0")
    s.add_argument("--fibers", required=True, help="fiber configuration or branch data JSON")
    s.set_defaults(fn=cmd_monodromy_genus)
    s = mono.add_parser("sweep-m0")
    s.add_argument("--group", default="full")
    s.add_argument("--fibers", required=True)
    s.add_argument("--min-level", type=int, default=2)
    s.add_argument("--max-level", type=int, default=20)
    s.set_defaults(fn=cmd_monodromy_sweep)
    s = mono.add_parser("bound")
    group_args(s, required_level=False)
    s.add_argument("--index", type=int)
    s.set_defaults(fn=cmd_monodromy_bound)

    fib = areas.add_parser("fibers").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    s = fib.add_parser("table")
    s.add_argument("--max-chi", "--max-n", dest="max_chi", type=int, default=24,
                   help="largest Euler number listed")
    s.set_defaults(fn=cmd_fibers_table)
    for name, fn in (("enumerate", cmd_fibers_enumerate), ("min-count", cmd_fibers_min_count)):
        s = fib.add_parser(name)
        s.add_argument("--chi", type=int, default=24)
        s.add_argument("--max-rank", type=int, required=True)
        s.add_argument("--min-fibers", type=int)
        s.add_argument("--max-fibers", type=int)
        s.add_argument("--only-multiplicative", action="store_true")
        s.add_argument("--require-pm", action="store_true", help="at least one I_n or I_n* (n >= 1)")
        s.add_argument("--no-pm", action="store_true", help="no I_n or I_n* (n >= 1)")
        if name == "enumerate":
            s.add_argument("--limit", type=int, default=10**6)
        s.set_defaults(fn=fn)

    w = areas.add_parser("weierstrass").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, fn in (("analyze", cmd_weierstrass_analyze), ("jmap", cmd_weierstrass_jmap),
                     ("index-bound", cmd_weierstrass_index_bound)):
        s = w.add_parser(name)
        s.add_argument("--model", required=True)
        if name == "index-bound":
            s.add_argument("--index", type=int)
            s.add_argument("--group-file")
        s.set_defaults(fn=fn)

    t = areas.add_parser("torsor").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    s = t.add_parser("order")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--m", type=int)
    s.set_defaults(fn=cmd_torsor_order)
    s = t.add_parser("transfer")
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(fn=cmd_torsor_transfer)
    s = t.add_parser("reduce")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--k", type=int, default=1)
    s.set_defaults(fn=cmd_torsor_reduce)
    s = t.add_parser("verdict")
    s.add_argument("--degree", type=int, default=1)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--p0", type=int, default=1)
    s.add_argument("--group", default="full")
    s.add_argument("--fibers", required=True)
    s.set_defaults(fn=cmd_torsor_verdict)

    s = areas.add_parser("classify")
    s.add_argument("--gram", required=True)
    s.add_argument("--search-bound", type=int, default=10)
    s.add_argument("--escalate", action="store_true")
    s.add_argument("--explain", action="store_true", help="human-readable report instead of JSON")
    s.set_defaults(fn=cmd_classify)
    return p


def run(argv=None) -> CommandResult:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except InvalidInput as exc:
        return CommandResult(EXIT_INVALID, {"error": str(exc)})


def main(argv=None) -> int:
    res = run(argv)
    out = sys.stdout
    try:
        if res.stream is not None:
            for rec in res.stream:
                out.write(dumps(rec) + "\n")
        else:
            out.write(res.render() + "\n")
    except InvalidInput as exc:  # raised lazily inside a stream
        print(dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_INVALID
    except BrokenPipeError:  # reader went away (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return res.exit_code
    if res.exit_code == EXIT_INVALID:
        print(f"k3kit: {res.payload['error']}", file=sys.stderr)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
