"""Command-line front end.

Provides `create_cli_parser()` and `run_cli_mode(args)` for the top-level
`main.py`, and `main()` for the console script. Every subcommand calls the
library and serializes the result; exit codes are 0 on success, 1 on a
failed verification, 2 on malformed input and 3 on a nonsignaling violation.
"""
import argparse
import logging
import os
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from .config_manager import ENUMERATION_METHODS, ConfigManager, merge_overrides
from .core import CLAIM_GROUPS, MerminCore
from .csv_handler import graph_to_dot, vertex_csv_text
from .errors import InputFormatError, MerminError, NonsignalingViolationError
from .fine import fine_check, pr_box, uniform_chsh
from .json_codec import (
    decode_beta,
    decode_chsh,
    decode_ns232,
    dumps,
    encode_beta,
    encode_cross_check,
    encode_fine_report,
    encode_orbits,
    encode_point,
    encode_stabilizer,
    load_json,
)
from .lambda2 import born_distribution, enumerate_ns232_vertices, membership_cross_check, uniform_ns232
from .log_manager import LogManager
from .mermin import verify_graph_structure, verify_vertex_classification, vertex_type
from .scenario import (
    CONTEXT_NAMES,
    CONTEXTS,
    MEASUREMENT_LABELS,
    BetaAssignment,
    enumerate_cnc_sets,
    enumerate_loops,
)
from .symmetry import (
    CANONICAL_VERTICES,
    canonical_vertex,
    derive_pauli_grid,
    graph_automorphism_count,
    orbit_partition,
    stabilizer,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_SEMANTIC = 0, 1, 2, 3
FORMATS = ("json", "csv", "dot", "text")
STABILIZER_VERTICES = tuple(CANONICAL_VERTICES) + ("q",)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', default="mermin_config.json", help='JSON run configuration')
    common.add_argument('--log-level', choices=["DEBUG", "INFO", "WARNING", "ERROR"], help='Log file level')
    common.add_argument('--out', help='Write the main artefact to this path')
    common.add_argument('--format', choices=FORMATS, default="text", help='Output format on stdout')
    common.add_argument('--seed', type=int, help='Random seed for sampled checks')
    common.add_argument('--workers', type=int, help='Processes for brute-force enumeration')
    common.add_argument('--method', choices=ENUMERATION_METHODS, help='Vertex enumeration algorithm')
    return common


def create_cli_parser() -> argparse.ArgumentParser:
    """Create CLI argument parser"""
    common = _common_options()
    parser = argparse.ArgumentParser(prog="mermin-polytopes", description='Exact Mermin polytope verification')
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser('scenario', parents=[common], help='Contexts, beta, loops and cnc sets')
    p.add_argument('--beta', default="beta1", help='Preset name, JSON object or JSON file')

    p = sub.add_parser('vertices', parents=[common], help='Enumerate and classify MP_beta vertices')
    p.add_argument('--beta', default="beta1", help='Preset name, JSON object or JSON file')

    p = sub.add_parser('graph', parents=[common], help='Vertex graph of MP_beta with degree report')
    p.add_argument('--beta', default="beta1", help='Preset name, JSON object or JSON file')

    p = sub.add_parser('orbits', parents=[common], help='Orbits of the symmetry group on the vertices')
    p.add_argument('--beta', default="beta1", choices=["beta0", "beta1"], help='beta0 or beta1')
    p.add_argument('--automorphism-limit', type=int, default=5000, help='Stop counting graph automorphisms here')

    p = sub.add_parser('stabilizer', parents=[common], help='Stabilizer of a canonical vertex')
    p.add_argument('--vertex', default="V58", choices=STABILIZER_VERTICES, help='Canonical vertex name')

    p = sub.add_parser('fine', parents=[common], help='Fine criteria for a CHSH distribution')
    p.add_argument('--input', required=True, help="Distribution JSON file, 'uniform' or 'pr_box[:variant]'")

    p = sub.add_parser('lambda2', parents=[common], help='Lambda2 membership of an NS(2,3,2) distribution')
    p.add_argument('--input', help="Distribution JSON file, 'uniform' or 'stabilizer:<index>'")
    p.add_argument('--enumerate', action='store_true', help='Enumerate the NS(2,3,2) vertices instead')

    p = sub.add_parser('verify-all', parents=[common], help='Run the acceptance claims')
    p.add_argument('--only', action='append', choices=CLAIM_GROUPS, help='Claim group to run; repeatable')
    p.add_argument('--samples', type=int, help='Random CHSH samples for the fine group')
    p.add_argument('--timings', action='store_true', help='Include per-claim timings in the report')
    return parser


# output helpers ------------------------------------------------------------------------------


def _write(path: str, text: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def _sidecar(path: str) -> str:
    return os.path.splitext(path)[0] + ".json"


def _banner(title: str) -> None:
    print(f"🚀 mermin-polytopes {title}")
    print("=" * 60)


def _emit(args, payload: Dict[str, Any], lines: Sequence[str], extra: Optional[Dict[str, str]] = None) -> None:
    """Print the payload in the requested format; ``extra`` holds csv or dot renderings."""
    if args.format == "json":
        print(dumps(payload))
    elif args.format in ("csv", "dot"):
        if not extra or args.format not in extra:
            raise InputFormatError(f"--format {args.format} is not available for '{args.command}'")
        sys.stdout.write(extra[args.format])
    else:
        _banner(args.command)
        for line in lines:
            print(line)


def _require_standard_beta(beta: BetaAssignment) -> None:
    if beta not in (BetaAssignment.beta0(), BetaAssignment.beta1()):
        raise InputFormatError("the symmetry groups act on beta0 and beta1 only")


# subcommands ------------------------------------------------------------------------------


def cmd_scenario(args, core: MerminCore) -> int:
    beta = decode_beta(args.beta)
    grid = derive_pauli_grid()
    loops = enumerate_loops()
    cnc = enumerate_cnc_sets(beta)
    payload = {
        "measurements": {label: grid.labels[m] for m, label in enumerate(MEASUREMENT_LABELS)},
        "contexts": {CONTEXT_NAMES[c]: [MEASUREMENT_LABELS[m] for m in ctx] for c, ctx in enumerate(CONTEXTS)},
        "beta": encode_beta(beta),
        "class": beta.cohomology_class,
        "loops": [loop.labels() for loop in loops],
        "cnc_sets": [{"kind": s.kind, "members": s.labels()} for s in cnc],
    }
    lines = [f"beta: {payload['beta']}  class {beta.cohomology_class}"]
    lines += [f"  {name}: {' '.join(ms)}" for name, ms in payload["contexts"].items()]
    lines.append(f"📝 {len(loops)} loops, {len(cnc)} maximal cnc sets")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_vertices(args, core: MerminCore) -> int:
    beta = decode_beta(args.beta)
    vertices = core.vertices(beta)
    types = core.vertex_types(beta)
    report = verify_vertex_classification(beta, vertices)
    csv_text = vertex_csv_text(vertices.vertices, types, MEASUREMENT_LABELS)
    payload = {
        "beta": encode_beta(beta),
        "enumerated": report.enumerated,
        "predicted": report.predicted,
        "type_counts": report.type_counts,
        "missing": [encode_point(v) for v in report.missing],
        "extra": [encode_point(v) for v in report.extra],
        "passed": report.passed,
    }
    if args.out:
        _write(args.out, csv_text)
        _write(_sidecar(args.out), dumps(payload) + "\n")
    status = "✅" if report.passed else "❌"
    lines = [
        f"{status} {report.enumerated} vertices enumerated, {report.predicted} predicted",
        f"   types: {report.type_counts}",
    ]
    if args.out:
        lines.append(f"📝 Wrote {args.out}")
    _emit(args, payload, lines, {"csv": csv_text})
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_graph(args, core: MerminCore) -> int:
    beta = decode_beta(args.beta)
    graph = core.graph(beta)
    structure = verify_graph_structure(beta, graph)
    dot_text = graph_to_dot(graph, name=f"MP_{''.join(map(str, beta.values))}")
    payload = {
        "beta": encode_beta(beta),
        "nodes": structure.node_count,
        "edges": structure.edge_count,
        "degree_histogram": {str(k): v for k, v in structure.degree_histogram.items()},
        "degrees_by_type": structure.degrees_by_type,
        "type1_independent": structure.type1_independent,
    }
    if args.out:
        _write(args.out, dot_text)
        _write(_sidecar(args.out), dumps(payload) + "\n")
    lines = [
        f"✅ {structure.node_count} nodes, {structure.edge_count} edges",
        f"   degrees: {structure.degree_histogram}",
        f"   by type: {structure.degrees_by_type}",
    ]
    _emit(args, payload, lines, {"dot": dot_text})
    return EXIT_OK


def cmd_orbits(args, core: MerminCore) -> int:
    beta = decode_beta(args.beta)
    _require_standard_beta(beta)
    group = core.group_for(beta)
    orbits = orbit_partition(group, core.vertices(beta))
    count, truncated = graph_automorphism_count(core.graph(beta).graph, args.automorphism_limit)
    payload = {
        "beta": encode_beta(beta),
        "group_order": group.order,
        "orbits": encode_orbits(orbits, vertex_type),
        "graph_automorphisms": count,
        "automorphism_search_truncated": truncated,
    }
    lines = [f"group order {group.order}, {len(orbits)} orbits"]
    lines += [f"   size {o['size']} ({o['type']})" for o in payload["orbits"]]
    bound = "at least " if truncated else ""
    lines.append(f"⚠ graph automorphisms: {bound}{count} (reported, not asserted)")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_stabilizer(args, core: MerminCore) -> int:
    if args.vertex == "q":
        beta = BetaAssignment.beta0()
        point = tuple(Fraction(1) for _ in MEASUREMENT_LABELS)
    else:
        beta = BetaAssignment.beta1()
        point = canonical_vertex(args.vertex)
    report = stabilizer(core.group_for(beta), point)
    neighbour_orbits = orbit_partition(report.group, core.graph(beta).neighbors(report.point))
    payload = encode_stabilizer(args.vertex, report)
    payload["neighbour_orbits"] = encode_orbits(neighbour_orbits, vertex_type)
    kind = f"dihedral of order {2 * report.dihedral.n}" if report.dihedral else "not dihedral"
    lines = [
        f"Stab({args.vertex}) has order {report.order}, {kind}",
        f"   neighbour orbits: {[o['size'] for o in payload['neighbour_orbits']]}",
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def _status(ok: bool) -> str:
    return "✅" if ok else "⚠"


def _chsh_input(spec: str):
    if spec == "uniform":
        return uniform_chsh()
    if spec.startswith("pr_box"):
        _, _, variant = spec.partition(":")
        try:
            return pr_box(int(variant or 0))
        except ValueError as e:
            raise InputFormatError(f"bad PR-box variant: {e}") from None
    return decode_chsh(load_json(spec))


def cmd_fine(args, core: MerminCore) -> int:
    report = fine_check(_chsh_input(args.input))
    payload = encode_fine_report(report)
    values = ", ".join(payload["chsh_values"])
    verdict = "noncontextual" if report.noncontextual else "contextual"
    lines = [f"{_status(report.noncontextual)} {verdict}", f"   CHSH values: {values}"]
    _emit(args, payload, lines)
    return EXIT_OK


def _ns232_input(spec: str):
    if spec == "uniform":
        return uniform_ns232()
    if spec.startswith("stabilizer:"):
        try:
            return born_distribution(int(spec.split(":", 1)[1]))
        except (ValueError, IndexError) as e:
            raise InputFormatError(f"bad stabilizer index: {e}") from None
    return decode_ns232(load_json(spec))


def cmd_lambda2(args, core: MerminCore) -> int:
    if args.enumerate:
        report = enumerate_ns232_vertices(method=core.method, workers=core.workers)
        payload = {"vertices": report.total, "deterministic": report.deterministic, "nonlocal": report.nonlocal_count}
        _emit(args, payload, [f"NS(2,3,2): {report.total} vertices, {report.deterministic} deterministic"])
        return EXIT_OK
    if not args.input:
        raise InputFormatError("lambda2 needs --input or --enumerate")
    report = membership_cross_check(_ns232_input(args.input))
    payload = encode_cross_check(report)
    verdict = "member" if report.member else f"not a member (fails {report.violating_projector})"
    _emit(args, payload, [f"{_status(report.member)} {verdict}", f"   minimum projector trace {payload['min_trace']}"])
    return EXIT_OK


def cmd_verify_all(args, core: MerminCore) -> int:
    reports = core.run_all(args.only)
    payload = core.payload(reports, timings=args.timings)
    out = args.out or os.path.join(core.working_dir, "verify_all.json")
    _write(out, dumps(payload) + "\n")
    failed = [r for r in reports if not r.passed]
    lines = [f"{'✅' if r.passed else '❌'} [{r.group}] {r.claim}" for r in reports]
    lines.append("=" * 60)
    lines.append(f"{len(reports) - len(failed)}/{len(reports)} claims passed; report written to {out}")
    _emit(args, payload, lines)
    if failed:
        print("❌ Failed claims: " + "; ".join(r.claim for r in failed), file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


COMMANDS = {
    "scenario": cmd_scenario,
    "vertices": cmd_vertices,
    "graph": cmd_graph,
    "orbits": cmd_orbits,
    "stabilizer": cmd_stabilizer,
    "fine": cmd_fine,
    "lambda2": cmd_lambda2,
    "verify-all": cmd_verify_all,
}


def build_core(args) -> MerminCore:
    """Config file values, then CLI flags on top."""
    try:
        config = ConfigManager(args.config).load_or_default()
        config = merge_overrides(config, {
            "seed": args.seed,
            "workers": args.workers,
            "enumeration_method": args.method,
            "log_level": args.log_level,
            "samples": getattr(args, "samples", None),
        })
    except (ValueError, OSError) as e:
        raise InputFormatError(f"bad configuration {args.config}: {e}") from None
    return MerminCore(config)


def run_cli_mode(args) -> int:
    """Run one subcommand and map its outcome to an exit code."""
    try:
        core = build_core(args)
        LogManager(os.path.join(core.working_dir, "run_logs")).setup_logging(core.cfg["log_level"])
        logger.info("command %s", args.command)
        return COMMANDS[args.command](args, core)
    except KeyboardInterrupt:
        print("\n⏹️  Interrupted by user", file=sys.stderr)
        return EXIT_FAILED
    except InputFormatError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except NonsignalingViolationError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_SEMANTIC
    except MerminError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    args = create_cli_parser().parse_args(argv)
    return run_cli_mode(args)


if __name__ == "__main__":
    sys.exit(main())
