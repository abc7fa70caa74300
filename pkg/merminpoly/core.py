"""Core verification engine shared by the CLI and the launcher.

`MerminCore` holds the run configuration, caches the expensive artefacts
(vertex sets, graphs, groups) and runs the acceptance claims group by group.
Every claim comes back as a `Report` comparing an expected value with the
computed one by exact equality.
"""
import logging
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

from .config_manager import DEFAULT_CONFIG, ConfigManager
from .errors import InvalidSignedLoopError, MerminError
from .exactla import Vector, format_rational
from .fine import (
    CHSH_ASSIGNMENTS,
    chsh_probability_rows,
    chsh_values,
    deterministic_chsh,
    fine_check,
    fm_chsh_inequalities,
    fm_chsh_system,
    pr_box,
    run_fine_samples,
    uniform_chsh,
)
from .lambda2 import (
    enumerate_isotropics,
    enumerate_ns_vertices,
    enumerate_stabilizer_projectors,
    lambda2_member,
    locality_split,
    run_lambda2_checks,
    uniform_ns232,
)
from .mermin import (
    build_h_rep,
    decompose_mp0,
    deterministic_points,
    edge_path,
    edge_rank,
    incidence_weight_invariance,
    mermin_member,
    mp_isomorphic,
    random_box_point,
    random_mp_point,
    signed_loop_between,
    tilde_rows_match_beta,
    two_edge_rule_holds,
    verify_graph_structure,
    verify_vertex_classification,
    vertex_type,
    zero_case_table,
    zero_pattern_rank_cases,
)
from .polytope import HPolytope, PolytopeGraph, VertexSet, build_graph, contains, vertices_of
from .scenario import (
    BETA_PRESETS,
    CANONICAL_CLASS1_WEIGHT,
    MEASUREMENT_COUNT,
    SCENARIO,
    BetaAssignment,
    IncidenceWeight,
    cycle_space,
    enumerate_cnc_sets,
    enumerate_loops,
    k33_automorphisms,
    random_incidence_weight,
)
from .symmetry import (
    FiniteGroup,
    canonical_vertex,
    chsh_loop_elements,
    commuting_triples,
    derive_pauli_grid,
    generate_G0,
    generate_G1,
    intersect_stabilizers,
    loop_element,
    named_element,
    numbered_context_map,
    orbit,
    orbit_partition,
    orbit_stabilizer_holds,
    pauli_conjugations,
    projects_isomorphically_onto_aut,
    quotient_perms,
    sign_kernel,
    stabilizer,
    triple_product_sign,
    verify_phi_isomorphism,
)

logger = logging.getLogger(__name__)

CLAIM_GROUPS = (
    "vertices",
    "graphs",
    "nonneighbor",
    "groups",
    "orbits",
    "phi",
    "ranks",
    "weights",
    "fine",
    "mp0",
    "lambda2",
    "structure",
    "membership",
)


def jsonable(value: Any) -> Any:
    """Rationals as "p/q", tuples as lists, mapping keys as strings."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [jsonable(v) for v in items]
    return str(value)


@dataclass
class Report:
    claim: str
    expected: Any
    computed: Any
    seconds: float = 0.0
    group: str = ""

    @property
    def passed(self) -> bool:
        return jsonable(self.expected) == jsonable(self.computed)

    def as_dict(self, timings: bool = False) -> Dict[str, Any]:
        data = {
            "group": self.group,
            "claim": self.claim,
            "expected": jsonable(self.expected),
            "computed": jsonable(self.computed),
            "passed": self.passed,
        }
        if timings:
            data["seconds"] = f"{self.seconds:.3f}"
        return data


def _sizes(orbits: Sequence[Sequence[Vector]]) -> List[int]:
    return sorted(len(o) for o in orbits)


class MerminCore:
    def __init__(self, config: Optional[Dict[str, Any]] = None):
        self.cfg = DEFAULT_CONFIG.copy()
        self.cfg.update(config or {})
        self.seed = int(self.cfg["seed"])
        self.method = self.cfg["enumeration_method"]
        self.workers = int(self.cfg["workers"])
        self.working_dir = self.cfg["working_dir"]

        self._polytopes: Dict[BetaAssignment, HPolytope] = {}
        self._vertices: Dict[BetaAssignment, VertexSet] = {}
        self._graphs: Dict[BetaAssignment, PolytopeGraph] = {}
        self._group = ""

    # cached artefacts -------------------------------------------------------------------

    def polytope(self, beta: BetaAssignment) -> HPolytope:
        if beta not in self._polytopes:
            self._polytopes[beta] = build_h_rep(beta)
        return self._polytopes[beta]

    def vertices(self, beta: BetaAssignment) -> VertexSet:
        if beta not in self._vertices:
            self._vertices[beta] = vertices_of(self.polytope(beta), method=self.method, workers=self.workers)
        return self._vertices[beta]

    def vertex_types(self, beta: BetaAssignment) -> List[str]:
        return [vertex_type(v) for v in self.vertices(beta)]

    def graph(self, beta: BetaAssignment) -> PolytopeGraph:
        """Vertex graph with a ``type`` attribute on every node."""
        if beta not in self._graphs:
            graph = build_graph(self.polytope(beta), self.vertices(beta))
            for k, kind in enumerate(self.vertex_types(beta)):
                graph.graph.nodes[k]["type"] = kind
            self._graphs[beta] = graph
        return self._graphs[beta]

    def g0(self) -> FiniteGroup:
        return generate_G0()

    def g1(self) -> FiniteGroup:
        return generate_G1()

    def group_for(self, beta: BetaAssignment) -> FiniteGroup:
        return self.g1() if beta.cohomology_class else self.g0()

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")

    # reporting ------------------------------------------------------------------------------

    def _check(self, claim: str, expected: Any, compute: Callable[[], Any]) -> Report:
        start = time.perf_counter()
        try:
            computed = compute()
        except MerminError as e:
            logger.error("%s raised %s: %s", claim, type(e).__name__, e)
            computed = f"error: {e}"
        report = Report(claim, expected, computed, time.perf_counter() - start, self._group)
        logger.info("%s: %s", claim, "pass" if report.passed else "FAIL")
        return report

    # claim groups ---------------------------------------------------------------------------

    def check_vertices(self) -> List[Report]:
        beta0, beta1 = BetaAssignment.beta0(), BetaAssignment.beta1()
        reports = []
        c0 = verify_vertex_classification(beta0, self.vertices(beta0))
        reports.append(self._check("MP0 vertex count", 16, lambda: c0.enumerated))
        reports.append(self._check("MP0 vertex types", {"deterministic": 16}, lambda: c0.type_counts))
        reports.append(self._check("MP0 vertices are the deterministic descriptors", True, lambda: c0.passed))

        c1 = verify_vertex_classification(beta1, self.vertices(beta1))
        reports.append(self._check("MP1 vertex count", 120, lambda: c1.enumerated))
        reports.append(self._check("MP1 vertex types", {"type-1": 48, "type-2": 72}, lambda: c1.type_counts))
        reports.append(self._check("MP1 vertices are the cnc descriptors", True, lambda: c1.passed))

        for name in ("single", "mixed"):
            beta = BETA_PRESETS[name]
            reports.append(self._check(
                f"class-1 preset '{name}' classification holds", True,
                lambda beta=beta: verify_vertex_classification(beta, self.vertices(beta)).passed,
            ))

        points = deterministic_points()
        reports.append(self._check(
            "deterministic points inside MP0", 16, lambda: sum(1 for x in points if mermin_member(x, beta0))
        ))
        reports.append(self._check(
            "deterministic points inside MP1", 0, lambda: sum(1 for x in points if mermin_member(x, beta1))
        ))
        return reports

    def check_graphs(self) -> List[Report]:
        beta0, beta1 = BetaAssignment.beta0(), BetaAssignment.beta1()
        g0 = self.graph(beta0)
        reports = [
            self._check("MP0 graph edge count", 120, lambda: g0.edge_count),
            self._check("MP0 graph degrees", {15: 16}, g0.degree_histogram),
        ]
        g1 = self.graph(beta1)
        structure = verify_graph_structure(beta1, g1)
        reports.append(self._check("MP1 graph edge count", 1152, lambda: structure.edge_count))
        reports.append(self._check("MP1 graph degrees", {12: 48, 24: 72}, lambda: structure.degree_histogram))
        reports.append(self._check(
            "MP1 degrees by type", {"type-1": [12], "type-2": [24]}, lambda: structure.degrees_by_type
        ))
        reports.append(self._check("MP1 type-1 vertices independent", True, lambda: structure.type1_independent))

        def split():
            found = set()
            for k, kind in enumerate(self.vertex_types(beta1)):
                if kind != "type-2":
                    continue
                kinds = [g1.graph.nodes[j]["type"] for j in g1.graph.neighbors(k)]
                found.add((kinds.count("type-1"), kinds.count("type-2")))
            return sorted(found)

        reports.append(self._check("MP1 type-2 neighbourhoods (type-1, type-2)", [[8, 16]], split))
        reports.append(self._check(
            "two deterministic edges force a deterministic triangle", True,
            lambda: two_edge_rule_holds(self.vertices(beta1).vertices, beta1),
        ))
        return reports

    def check_nonneighbor(self) -> List[Report]:
        beta1 = BetaAssignment.beta1()
        p = self.polytope(beta1)
        p0, v28 = canonical_vertex("V58"), canonical_vertex("V28")
        stab_p0 = stabilizer(self.g1(), p0).group
        certificate = orbit(stab_p0, v28)
        neighbours = set(self.graph(beta1).neighbors(p0))

        def loop_connected():
            count = 0
            for v in certificate:
                try:
                    path = edge_path(p, p0, signed_loop_between(p0, v))
                except InvalidSignedLoopError:
                    continue
                if path.endpoint == v and not path.is_edge:
                    count += 1
            return count

        def reached():
            out = {}
            for name in ("V57", "V99", "V22"):
                target = canonical_vertex(name)
                path = edge_path(p, p0, signed_loop_between(p0, target))
                out[name] = path.endpoint == target and path.is_edge
            return out

        return [
            self._check("Stab(p0) orbit of V28 size", 8, lambda: len(certificate)),
            self._check("V28 orbit is type-1", ["type-1"], lambda: sorted({vertex_type(v) for v in certificate})),
            self._check("V28 orbit adjacent to p0", 0, lambda: len(neighbours & set(certificate))),
            self._check("V28 orbit joined to p0 by loop paths", 8, loop_connected),
            self._check("signed loops at p0 reach canonical neighbours along edges",
                        {"V57": True, "V99": True, "V22": True}, reached),
        ]

    def check_groups(self) -> List[Report]:
        beta0, beta1 = BetaAssignment.beta0(), BetaAssignment.beta1()
        g0, g1 = self.g0(), self.g1()
        reports = [
            self._check("|G0|", 1152, lambda: g0.order),
            self._check("|G1|", 1152, lambda: g1.order),
            self._check("|G0| by permutation group", 1152, g0.sympy_order),
            self._check("|G1| by permutation group", 1152, g1.sympy_order),
            self._check("G1 closed with inverses", True, lambda: g1.is_closed() and g1.has_inverses()),
            self._check("G0 orbits on MP0 vertices", [16], lambda: _sizes(orbit_partition(g0, self.vertices(beta0)))),
            self._check("G1 orbits on MP1 vertices", [48, 72], lambda: _sizes(orbit_partition(g1, self.vertices(beta1)))),
        ]

        q = tuple(Fraction(1) for _ in range(MEASUREMENT_COUNT))
        stab_q = stabilizer(g0, q).group
        others = [v for v in self.vertices(beta0) if v != q]
        reports.append(self._check("|Stab(q)|", 72, lambda: stab_q.order))
        reports.append(self._check("Stab(q) projects onto Aut(K33)", True, lambda: projects_isomorphically_onto_aut(stab_q)))
        # q_l keeps the length of l, so the 4-cycle and 6-cycle flips stay apart
        reports.append(self._check("Stab(q) orbits on the other vertices", [6, 9], lambda: _sizes(orbit_partition(stab_q, others))))

        named = {name: named_element(name) for name in ("Q", "R", "M", "N", "SWAP")}
        s57 = stabilizer(g1, canonical_vertex("V57"))
        s58 = stabilizer(g1, canonical_vertex("V58"))
        reports.append(self._check("|Stab(V57)|", 24, lambda: s57.order))
        reports.append(self._check("Stab(V57) dihedral rotation order", 12, lambda: s57.dihedral.n if s57.dihedral else None))
        reports.append(self._check(
            "Stab(V57) generated by Q and R", True,
            lambda: set(FiniteGroup.generate([named["Q"], named["R"]], g1.identity)) == set(s57.group),
        ))
        reports.append(self._check("|Stab(p0)|", 16, lambda: s58.order))
        reports.append(self._check("Stab(p0) dihedral rotation order", 8, lambda: s58.dihedral.n if s58.dihedral else None))
        reports.append(self._check(
            "Stab(p0) generated by M and SWAP", True,
            lambda: set(FiniteGroup.generate([named["M"], named["SWAP"]], g1.identity)) == set(s58.group),
        ))

        p0 = canonical_vertex("V58")
        intersections = {
            "V22": {g1.identity, named["SWAP"]},
            "V57": {g1.identity, named["N"].inverse() * named["SWAP"]},
        }
        for name, expected in intersections.items():
            reports.append(self._check(
                f"Stab(p0) and Stab({name}) intersect in a C2", True,
                lambda name=name, expected=expected: set(intersect_stabilizers(g1, p0, canonical_vertex(name))) == expected,
            ))
        reports.append(self._check("Stab(p0) with itself", 16, lambda: intersect_stabilizers(g1, p0, p0).order))

        reports.append(self._check(
            "orbit-stabilizer on every vertex", True,
            lambda: orbit_stabilizer_holds(g0, self.vertices(beta0)) and orbit_stabilizer_holds(g1, self.vertices(beta1)),
        ))
        reports.append(self._check(
            "sign kernel is the Pauli conjugations", True,
            lambda: set(sign_kernel(g1)) == set(pauli_conjugations()) and len(pauli_conjugations()) == 16,
        ))
        reports.append(self._check("G1 modulo signs", 72, lambda: len(quotient_perms(g1))))
        reports.append(self._check(
            "generators preserve membership", 0, lambda: self._membership_violations(beta0) + self._membership_violations(beta1)
        ))
        return reports

    def _membership_violations(self, beta: BetaAssignment) -> int:
        rng = self.rng(f"invariance:{beta.values}")
        vertices = self.vertices(beta).vertices
        generators = self.group_for(beta).generators
        violations = 0
        for _ in range(int(self.cfg["invariance_samples"])):
            x = random_mp_point(vertices, rng)
            violations += sum(1 for g in generators if not mermin_member(g.act(x), beta))
        return violations

    def check_orbits(self) -> List[Report]:
        beta1 = BetaAssignment.beta1()
        g1 = self.g1()
        graph = self.graph(beta1)
        p0, v57 = canonical_vertex("V58"), canonical_vertex("V57")
        names = {canonical_vertex(n): n for n in ("V57", "V99", "V22")}

        def neighbour_orbits():
            stab = stabilizer(g1, p0).group
            out = []
            for members in orbit_partition(stab, graph.neighbors(p0)):
                rep = next((names[v] for v in members if v in names), None)
                out.append([len(members), vertex_type(members[0]), rep])
            return sorted(out, key=lambda r: (r[1], str(r[2])))

        return [
            self._check("Stab(p0) orbits on N(p0)",
                        [[8, "type-1", "V57"], [8, "type-2", "V22"], [8, "type-2", "V99"]], neighbour_orbits),
            self._check("Stab(V57) orbits on N(V57)", [12],
                        lambda: _sizes(orbit_partition(stabilizer(g1, v57).group, graph.neighbors(v57)))),
        ]

    def check_phi(self) -> List[Report]:
        report = verify_phi_isomorphism()
        return [
            self._check("phi generator cycles", {"h": "(16)(23)(45)", "s": "(12)(34)(56)", "w": "(46)"},
                        lambda: report.generator_cycles),
            self._check("phi worked products", report.expected_products, lambda: report.worked_products),
            self._check("phi respects the presentation", None, lambda: report.first_failed_relation),
            self._check("G1 satisfies the presentation", None, lambda: report.g1_first_failed_relation),
            self._check("phi is bijective onto G0", True, lambda: report.bijective),
            self._check("|image(phi)|", 1152, lambda: report.image_order),
            self._check("extension diagram commutes", True, lambda: report.diagram_commutes),
            self._check("phi matches its closed form", True, lambda: report.closed_form_agrees),
        ]

    def check_ranks(self) -> List[Report]:
        reports = [self._check(f"rank of {case.name}", case.expected, lambda case=case: case.computed)
                   for case in zero_pattern_rank_cases()]
        reports.append(self._check("zero-count cases", 7, lambda: len(zero_case_table())))

        def mp0_edge_rank():
            q = tuple(Fraction(1) for _ in range(MEASUREMENT_COUNT))
            flipped = loop_element(chsh_loop_elements()["x0"]).act(q)
            return edge_rank(self.polytope(BetaAssignment.beta0()), q, flipped)

        reports.append(self._check("MP0 edge rank between q and its x0 flip", 8, mp0_edge_rank))
        return reports

    def check_weights(self) -> List[Report]:
        rng = self.rng("weights")
        n = int(self.cfg["weight_samples"])
        weights = [random_incidence_weight(rng) for _ in range(n)]
        records = incidence_weight_invariance(weights, method=self.method)
        canonical = {0: IncidenceWeight.zero(), 1: CANONICAL_CLASS1_WEIGHT}
        beta0, beta1 = BetaAssignment.beta0(), BetaAssignment.beta1()
        return [
            self._check("weights normalized to the canonical form", n,
                        lambda: sum(1 for r in records if r.canonical == canonical[r.weight_class])),
            self._check("weighted polytope matches its class", n, lambda: sum(1 for r in records if r.isomorphic_to_class)),
            self._check("weighted polytope differs from the other class", 0,
                        lambda: sum(1 for r in records if r.isomorphic_to_other)),
            self._check("weighted rows equal the induced beta rows", n, lambda: sum(1 for w in weights if tilde_rows_match_beta(w))),
            self._check("MP1 and the 'mixed' preset isomorphic", True, lambda: mp_isomorphic(beta1, BETA_PRESETS["mixed"])),
            self._check("MP0 and MP1 isomorphic", False, lambda: mp_isomorphic(beta0, beta1)),
        ]

    def check_fine(self) -> List[Report]:
        samples = int(self.cfg["samples"])
        box_rows = {row for row in fm_chsh_system() if row[0][4] == 0}
        return [
            self._check("random CHSH samples where all criteria agree", samples,
                        lambda: run_fine_samples(samples, self.seed).agreement),
            self._check("PR box contextual", False, lambda: fine_check(pr_box(0)).noncontextual),
            self._check("PR box largest CHSH value", Fraction(3), lambda: max(chsh_values(pr_box(0)))),
            self._check("contextual PR-box variants", 8,
                        lambda: sum(1 for k in range(8) if not fine_check(pr_box(k)).noncontextual)),
            self._check("noncontextual deterministic points", 16,
                        lambda: sum(1 for s in CHSH_ASSIGNMENTS if fine_check(deterministic_chsh(s)).noncontextual)),
            self._check("uniform distribution noncontextual", True, lambda: fine_check(uniform_chsh()).noncontextual),
            self._check("eliminating z gives the CHSH rows", True,
                        lambda: set(fm_chsh_inequalities()) == set(chsh_probability_rows()) | box_rows),
        ]

    def check_mp0(self) -> List[Report]:
        rng = self.rng("mp0")
        n = int(self.cfg["mp0_samples"])
        vertices = list(self.vertices(BetaAssignment.beta0()).vertices)

        def decomposed():
            count = 0
            for _ in range(n):
                x = random_mp_point(vertices, rng)
                weights = decompose_mp0(x, vertices)
                if weights is None or sum(weights.values()) != 1:
                    continue
                rebuilt = tuple(sum((w * v[m] for v, w in weights.items()), Fraction(0)) for m in range(MEASUREMENT_COUNT))
                count += rebuilt == x
            return count

        return [self._check("MP0 members with a deterministic decomposition", n, decomposed)]

    def check_lambda2(self) -> List[Report]:
        samples = int(self.cfg["lambda2_samples"])
        summary = run_lambda2_checks(samples, self.seed)
        return [
            self._check("stabilizer Born distributions in Lambda2", 60, lambda: summary.stabilizer_members),
            self._check("deterministic NS232 points outside Lambda2", 64, lambda: summary.deterministic_nonmembers),
            self._check("random NS232 points checked", samples, lambda: summary.random_samples),
            self._check("uniform NS232 point in Lambda2", True, lambda: lambda2_member(uniform_ns232()).member),
            self._check("NS222 vertex count", 24, lambda: enumerate_ns_vertices(2, method=self.method).total),
        ]

    def check_structure(self) -> List[Report]:
        beta1 = BetaAssignment.beta1()
        loops = enumerate_loops()
        cnc = enumerate_cnc_sets(beta1)
        grid = derive_pauli_grid()

        def loop_lengths():
            lengths: Dict[int, int] = {}
            for loop in loops:
                lengths[len(loop.edges)] = lengths.get(len(loop.edges), 0) + 1
            return dict(sorted(lengths.items()))

        def cnc_kinds():
            kinds: Dict[str, int] = {}
            for s in cnc:
                kinds[s.kind] = kinds.get(s.kind, 0) + 1
            return dict(sorted(kinds.items()))

        expected_split = {
            "labels_identity": 1,
            "labels_local": 6,
            "labels_nonlocal": 9,
            "isotropics_local": 9,
            "isotropics_nonlocal": 6,
            "projectors_local": 36,
            "projectors_nonlocal": 24,
        }
        return [
            self._check("scenario incidence is K33", True, SCENARIO.check),
            self._check("cycle space size", 16, lambda: len(cycle_space())),
            self._check("K33 automorphisms", 72, lambda: len(k33_automorphisms())),
            self._check("loop lengths", {4: 9, 6: 6}, loop_lengths),
            self._check("maximal cnc sets", {"type-1": 6, "type-2": 9}, cnc_kinds),
            self._check("cnc complements are the loops", True,
                        lambda: {s.complement().edges for s in cnc} == {l.edges for l in loops}),
            self._check("maximal isotropic subspaces", 15, lambda: len(enumerate_isotropics())),
            self._check("stabilizer projectors", 60, lambda: len(enumerate_stabilizer_projectors())),
            self._check("locality split", expected_split, locality_split),
            self._check("commuting nonlocal triples", 6, lambda: len(commuting_triples())),
            self._check("numbered triples match grid contexts", 6, lambda: len(set(numbered_context_map().values()))),
            self._check("context product signs", [1, 1, 1, -1, -1, -1],
                        lambda: [triple_product_sign(t) for t in grid.horizontal + grid.vertical]),
        ]

    def check_membership(self) -> List[Report]:
        rng = self.rng("membership")
        n = int(self.cfg["membership_samples"])
        betas = (BetaAssignment.beta0(), BetaAssignment.beta1())
        points = [random_box_point(rng) for _ in range(n)]

        def disagreements():
            return sum(
                1 for x in points for beta in betas if contains(self.polytope(beta), x) != mermin_member(x, beta)
            )

        return [self._check("H-representation agrees with table nonnegativity", 0, disagreements)]

    # orchestration -------------------------------------------------------------------------

    def run_group(self, group: str) -> List[Report]:
        if group not in CLAIM_GROUPS:
            raise ValueError(f"unknown claim group '{group}'; choose from {', '.join(CLAIM_GROUPS)}")
        self._group = group
        logger.info("running claim group %s", group)
        start = time.perf_counter()
        try:
            return getattr(self, f"check_{group}")()
        except MerminError as e:
            logger.error("claim group %s aborted: %s", group, e)
            return [Report(f"{group} claims complete", True, f"error: {e}", time.perf_counter() - start, group)]

    def run_all(self, only: Optional[Sequence[str]] = None) -> List[Report]:
        reports: List[Report] = []
        for group in only or CLAIM_GROUPS:
            reports.extend(self.run_group(group))
        failed = [r.claim for r in reports if not r.passed]
        logger.info("%d claims checked, %d failed", len(reports), len(failed))
        return reports

    def payload(self, reports: Sequence[Report], timings: bool = False) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "enumeration_method": self.method,
            "claims": [r.as_dict(timings) for r in reports],
            "passed": sum(1 for r in reports if r.passed),
            "failed": sum(1 for r in reports if not r.passed),
        }


def create_core(config_path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> MerminCore:
    """Create a `MerminCore` from a config file.

    Without ``config_path`` the core looks for ``mermin_config.json`` in the
    working directory and falls back to the built-in defaults.
    """
    if config_path is None:
        config_path = "mermin_config.json"
    config = ConfigManager(config_path).load_or_default()
    config.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return MerminCore(config)


__all__ = ["CLAIM_GROUPS", "MerminCore", "Report", "create_core", "jsonable"]
