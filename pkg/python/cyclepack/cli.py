"""
Command-line interface.

    cyclepack gen bipartite --m 4 --n 4 --seed 1 --out g.txt
    cyclepack census --in g.txt --json
    cyclepack pack --in g.txt --method local --budget 200 --json
    cyclepack interchange diameter --rows 1,1,1 --cols 1,1,1 --json
    cyclepack experiment partition --n 49 --seed 3 --json
    cyclepack verify --target lemma21 --sizes 2x2,4x4

Exit status: 0 on success, 1 when a verification sweep finds a failure, 2 on
any library error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

from ._version import __version__
from .census import arc_profile, evaluate_bounds, four_cycle_census
from .config import (
    Limits,
    SamplerConfig,
    default_steps_bipartite,
    default_steps_tournament,
    spawn_seeds,
)
from .errors import CyclePackError, ResourceError
from .experiment import run_partition_experiment
from .formats import (
    dump,
    format_bipartite,
    format_tournament,
    load_bipartite,
    load_matrix,
)
from .interchange import antipodal_audit, diameter, enumerate_matrix_class, walkup_distance
from .model import validate_bipartite
from .packing import (
    PackMethod,
    build_c4_hypergraph,
    color_pack,
    exact_max_pack,
    greedy_pack,
    local_search_pack,
    verify_packing,
)
from .report import RunReport, digest_files, to_jsonable
from .sampling import (
    canonical_bipartite,
    canonical_regular_tournament,
    randomize_bipartite,
    randomize_tournament,
)
from .verify import COUNTEREXAMPLE_DIR, Target, verify_sweep

logger = logging.getLogger("cyclepack")

PACKING_TARGET_FACTOR = 4 + math.sqrt(8)


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from None


def _size_list(text: str) -> list[tuple[int, int]]:
    sizes = []
    for item in text.split(","):
        try:
            m, n = item.lower().split("x")
            sizes.append((int(m), int(n)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected sizes like 2x2,4x4, got {text!r}") from None
    return sizes


def _class_list(text: str) -> list[tuple[list[int], list[int]]]:
    classes = []
    for item in text.split(";"):
        rows, sep, cols = item.partition("/")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected ROWS/COLS, got {item!r}")
        classes.append((_int_list(rows), _int_list(cols)))
    return classes


# -- subcommands ---------------------------------------------------------------


def cmd_gen(args: argparse.Namespace, limits: Limits) -> RunReport:
    if args.kind == "bipartite":
        steps = default_steps_bipartite(args.m, args.n) if args.steps is None else args.steps
        G = randomize_bipartite(
            canonical_bipartite(args.m, args.n), SamplerConfig(seed=args.seed, steps=steps)
        )
        text = format_bipartite(G)
        payload = {"kind": "bipartite", "m": G.m, "n": G.n, "steps": steps}
    else:
        steps = default_steps_tournament(args.n) if args.steps is None else args.steps
        T = randomize_tournament(
            canonical_regular_tournament(args.n), SamplerConfig(seed=args.seed, steps=steps)
        )
        text = format_tournament(T)
        payload = {"kind": "tournament", "n": T.n, "steps": steps}

    if args.out_instance:
        payload["path"] = str(dump(text, args.out_instance))
    else:
        payload["instance"] = text
    return RunReport("gen", payload, seeds=[args.seed])


def cmd_census(args: argparse.Namespace, limits: Limits) -> RunReport:
    G = load_bipartite(args.input)
    validation = validate_bipartite(G)
    census = four_cycle_census(G)
    payload: dict[str, Any] = {
        "m": G.m,
        "n": G.n,
        "x": census.x,
        "h1": census.h1,
        "h2": census.h2,
        "h3": census.h3,
        "t": census.t,
        "eulerian": validation.is_eulerian,
        "delta_margin": validation.delta_margin,
        "identities_ok": census.identities_ok,
        "alpha_G": None,
        "argmin_arc": None,
        "bound_l21": None,
        "bound_l22": None,
    }
    if validation.is_eulerian:
        profile = arc_profile(G)
        bounds = evaluate_bounds(G, census, profile)
        arc = profile.argmin_arc
        payload.update(
            alpha_G=bounds.alpha_g,
            argmin_arc={"index": arc.index, "tail": arc.tail, "head": arc.head},
            bound_l21=bounds.bound_l21,
            bound_l21_sharp=bounds.bound_l21_sharp,
            bound_l22=bounds.bound_l22,
            satisfied=bounds.satisfied,
            d_max=bounds.d_max,
            packing_estimate=bounds.packing_estimate,
        )
    return RunReport("census", payload, input_digest=digest_files([args.input]))


def _run_packer(args: argparse.Namespace, limits: Limits):
    G = load_bipartite(args.input)
    H = build_c4_hypergraph(G)
    method = PackMethod(args.method)
    if method is PackMethod.GREEDY:
        return G, H, greedy_pack(G, args.seed, H)
    if method is PackMethod.LOCAL:
        budget = H.num_edges if args.budget is None else args.budget
        return G, H, local_search_pack(G, args.seed, budget, H)
    if method is PackMethod.COLOR:
        return G, H, color_pack(G, args.seed, H)
    return G, H, exact_max_pack(G, limits, args.seed, H)


def cmd_pack(args: argparse.Namespace, limits: Limits) -> RunReport:
    try:
        G, H, packing = _run_packer(args, limits)
    except ResourceError as e:
        if e.partial is not None:
            logger.warning("best packing before giving up: %d cycles", e.partial.size)
        raise
    if args.verify:
        verify_packing(G, packing)
    mn = G.m * G.n
    payload = {
        "method": packing.method.value,
        "size": packing.size,
        "upper_bound_mn4": mn // 4,
        "ratio_vs_target": packing.size * PACKING_TARGET_FACTOR / mn,
        "colors_used": packing.colors_used,
        "max_degree": H.max_degree,
        "num_c4": H.num_edges,
        "certified_optimal": packing.certified_optimal,
        "verified": args.verify,
        "cycles": packing.arc_indices(),
    }
    if packing.colors_used is not None and H.max_degree:
        payload["colors_per_degree"] = packing.colors_used / H.max_degree
    return RunReport("pack", payload, seeds=[args.seed], input_digest=digest_files([args.input]))


def cmd_interchange(args: argparse.Namespace, limits: Limits) -> RunReport:
    if args.action == "enumerate":
        matrices = enumerate_matrix_class(args.rows, args.cols, limits)
        payload: dict[str, Any] = {
            "rows": args.rows,
            "cols": args.cols,
            "count": len(matrices),
            "matrices": [A.to_rows() for A in matrices],
        }
        return RunReport("interchange enumerate", payload)

    if args.action == "distance":
        A, B = load_matrix(args.a), load_matrix(args.b)
        record = walkup_distance(A, B, limits, with_bfs=args.bfs)
        payload = {
            "d": record.d_ab,
            "q": record.q_ab,
            "i_walkup": record.i_walkup,
            "i_bfs": record.i_bfs,
            "certified": record.certified,
            "matches_bfs": record.matches_bfs,
        }
        digest = digest_files([args.a, args.b])
        return RunReport("interchange distance", payload, input_digest=digest)

    if args.action == "diameter":
        result = diameter(args.rows, args.cols, limits)
        payload = {
            "rows": args.rows,
            "cols": args.cols,
            "diameter": result.diameter,
            "class_size": result.class_size,
            "witness": [M.to_rows() for M in result.witness],
            "conjectured_bound": result.conjectured_bound,
            "known_bound": result.known_bound,
            "within_conjectured": result.within_conjectured,
            "within_known": result.within_known,
        }
        return RunReport("interchange diameter", payload)

    audit = antipodal_audit(args.m, args.n, limits, args.samples, args.seed)
    payload = {
        "m": audit.m,
        "n": audit.n,
        "exhaustive": audit.exhaustive,
        "class_size": audit.class_size,
        "pairs": len(audit.pairs),
        "i_min": audit.i_min,
        "i_max": audit.i_max,
        "lower_bound": audit.lower_bound,
        "upper_constant_bound": audit.upper_constant_bound,
        "lower_ok": audit.lower_ok,
        "upper_ok": audit.upper_ok,
        "all_certified": audit.all_certified,
        "i_upper_from_packing": audit.i_upper_from_packing_max,
    }
    return RunReport("interchange antipodal", payload, seeds=[args.seed])


def cmd_experiment(args: argparse.Namespace, limits: Limits) -> RunReport:
    tournament_seed, experiment_seed = spawn_seeds(args.seed, 2)
    steps = default_steps_tournament(args.n) if args.steps is None else args.steps
    T = randomize_tournament(
        canonical_regular_tournament(args.n), SamplerConfig(seed=tournament_seed, steps=steps)
    )
    report = run_partition_experiment(
        T,
        seed=experiment_seed,
        delta_target=args.delta,
        budget=args.budget,
        m=args.m,
        min_class_size=args.min_class_size,
        jobs=limits.jobs,
    )
    payload = {
        f: getattr(report, f)
        for f in (
            "n",
            "m",
            "delta_target",
            "delta_observed",
            "deviation_fraction",
            "size_bounds_ok",
            "all_pairs_delta_eulerian",
            "class_sizes",
            "pairs",
            "skipped_pairs",
            "per_pair_packings",
            "delta_clean_pairs",
            "total_packed",
            "target",
            "ratio",
            "within_class_arcs",
            "within_class_loss",
            "cross_arcs",
            "chernoff_tail_estimate",
            "chernoff_vertex_bound",
        )
    }
    payload["steps"] = steps
    return RunReport("experiment partition", payload, seeds=[args.seed])


def cmd_verify(args: argparse.Namespace, limits: Limits) -> RunReport:
    return verify_sweep(
        args.target,
        sizes=args.sizes,
        classes=args.classes,
        samples=args.samples,
        seed=args.seed,
        limits=limits,
        counterexample_dir=args.counterexample_dir,
    )


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    base = argparse.ArgumentParser(add_help=False)
    base.add_argument("--json", action="store_true", help="Emit the JSON run report")
    base.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="Worker processes for sweeps (default: CYCLEPACK_JOBS or 1)",
    )
    base.add_argument(
        "--no-wall-time", action="store_true", help="Leave the wall time out of the report"
    )
    base.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    common = argparse.ArgumentParser(add_help=False, parents=[base])
    common.add_argument("--out", type=Path, default=None, help="Write the report to a file")

    parser = argparse.ArgumentParser(
        prog="cyclepack",
        description="Directed 4-cycle packings, censuses and interchange distances",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Generate a random instance")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    bip = gen_sub.add_parser("bipartite", parents=[base], help="Eulerian orientation of K_{m,n}")
    bip.add_argument("--m", type=int, required=True, help="Rows (even)")
    bip.add_argument("--n", type=int, required=True, help="Columns (even)")
    tour = gen_sub.add_parser("tournament", parents=[base], help="Regular tournament")
    tour.add_argument("--n", type=int, required=True, help="Vertices (odd)")
    for p in (bip, tour):
        p.add_argument(
            "--steps", type=int, default=None, help="Chain steps (default: 20mn or 20n^2)"
        )
        p.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
        p.add_argument(
            "--out",
            dest="out_instance",
            type=Path,
            default=None,
            help="Write the instance here instead of to stdout",
        )
        p.set_defaults(handler=cmd_gen)

    census = sub.add_parser("census", parents=[common], help="Count C4s and evaluate bounds")
    census.add_argument("--in", dest="input", type=Path, required=True, help="Bipartite file")
    census.set_defaults(handler=cmd_census)

    pack = sub.add_parser("pack", parents=[common], help="Pack arc-disjoint C4s")
    pack.add_argument("--in", dest="input", type=Path, required=True, help="Bipartite file")
    pack.add_argument(
        "--method",
        choices=[m.value for m in PackMethod],
        default="local",
        help="Packer (default: local)",
    )
    pack.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    pack.add_argument(
        "--budget", type=int, default=None, help="Local search attempts (default: number of C4s)"
    )
    pack.add_argument(
        "--no-verify",
        dest="verify",
        action="store_false",
        help="Skip the independent packing check",
    )
    pack.set_defaults(handler=cmd_pack)

    inter = sub.add_parser("interchange", help="Matrix classes and interchange distances")
    inter_sub = inter.add_subparsers(dest="action", required=True)
    for action in ("enumerate", "diameter"):
        p = inter_sub.add_parser(action, parents=[common])
        p.add_argument("--rows", type=_int_list, required=True, help="Row sums, e.g. 2,2,2,2")
        p.add_argument("--cols", type=_int_list, required=True, help="Column sums")
        p.set_defaults(handler=cmd_interchange)
    dist = inter_sub.add_parser("distance", parents=[common])
    dist.add_argument("--a", type=Path, required=True, help="Matrix file")
    dist.add_argument("--b", type=Path, required=True, help="Matrix file")
    dist.add_argument("--bfs", action="store_true", help="Also compute the BFS distance")
    dist.set_defaults(handler=cmd_interchange)
    anti = inter_sub.add_parser("antipodal", parents=[common])
    anti.add_argument("--m", type=int, required=True, help="Rows (even)")
    anti.add_argument("--n", type=int, required=True, help="Columns (even)")
    anti.add_argument(
        "--samples", type=int, default=None, help="Sampled pairs (default: whole class if small)"
    )
    anti.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    anti.set_defaults(handler=cmd_interchange)

    exp = sub.add_parser("experiment", help="Tournament partition experiment")
    exp_sub = exp.add_subparsers(dest="kind", required=True)
    part = exp_sub.add_parser("partition", parents=[common])
    part.add_argument("--n", type=int, required=True, help="Tournament size (odd, >= 9)")
    part.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    part.add_argument("--delta", type=float, default=0.5, help="Delta threshold (default: 0.5)")
    part.add_argument("--m", type=int, default=None, help="Classes (default: round(sqrt(n)))")
    part.add_argument("--budget", type=int, default=None, help="Local search attempts per pair")
    part.add_argument("--steps", type=int, default=None, help="Chain steps (default: 20n^2)")
    part.add_argument(
        "--min-class-size", type=int, default=1, help="Smallest acceptable class (default: 1)"
    )
    part.set_defaults(handler=cmd_experiment)

    ver = sub.add_parser("verify", parents=[common], help="Verification sweeps")
    ver.add_argument("--target", choices=[t.value for t in Target], required=True)
    ver.add_argument("--sizes", type=_size_list, default=None, help="e.g. 2x2,4x4")
    ver.add_argument(
        "--classes", type=_class_list, default=None, help="e.g. '1,1/1,1;1,1,1/1,1,1'"
    )
    ver.add_argument("--samples", type=int, default=100, help="Sampled instances (default: 100)")
    ver.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    ver.add_argument(
        "--counterexample-dir",
        type=Path,
        default=COUNTEREXAMPLE_DIR,
        help=f"Where failing instances go (default: {COUNTEREXAMPLE_DIR})",
    )
    ver.set_defaults(handler=cmd_verify)
    return parser


def _render_text(report: RunReport) -> str:
    lines = [f"{report.subcommand}"]
    for key, value in sorted(to_jsonable(report.payload).items()):
        if key in ("instances", "cycles", "matrices", "pairs") and isinstance(value, list):
            lines.append(f"  {key}: {len(value)} entries")
        elif key == "instance":
            lines.append(value.rstrip("\n"))
        else:
            lines.append(f"  {key}: {value}")
    return "\n".join(lines) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    handler: Callable[[argparse.Namespace, Limits], RunReport] = args.handler
    started = time.perf_counter()
    try:
        limits = Limits.from_env()
        if args.jobs is not None:
            limits = limits.with_jobs(args.jobs)
        report = handler(args, limits)
    except (CyclePackError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    report.wall_time = time.perf_counter() - started

    text = report.to_json(not args.no_wall_time) if args.json else _render_text(report)
    out = getattr(args, "out", None)
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
