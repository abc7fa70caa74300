"""
symmetry.py
Two-qubit Pauli operators and Clifford conjugation, the symmetry groups G0
(loop flips extended by Aut(K33)) and G1 (Clifford signed permutations of the
nine nonlocal Paulis), orbits, stabilizers, dihedral recognition and the
isomorphism between G1 and G0.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import sympy
from networkx.algorithms import isomorphism
from sympy import I, Matrix, eye
from sympy.combinatorics import Permutation, PermutationGroup

from .errors import VerificationError
from .exactla import Vector, vector
from .scenario import (
    CONTEXT_COUNT,
    CONTEXTS,
    MEASUREMENT_COUNT,
    K33Automorphism,
    Loop,
    cycle_space,
    decomposition_aliases,
    enumerate_loops,
    k33_automorphisms,
    k33_generators,
)

logger = logging.getLogger(__name__)

# Paulis and Clifford gates --------------------------------------------------------------

LETTER_BITS = {"I": (0, 0), "X": (0, 1), "Y": (1, 1), "Z": (1, 0)}

_ONE_QUBIT = {
    "I": eye(2),
    "X": Matrix([[0, 1], [1, 0]]),
    "Y": Matrix([[0, -I], [I, 0]]),
    "Z": Matrix([[1, 0], [0, -1]]),
    # unnormalized; conjugation divides by U U^dagger
    "H": Matrix([[1, 1], [1, -1]]),
    "S": Matrix([[1, 0], [0, I]]),
}

SWAP = Matrix([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])

ALL_LABELS: Tuple[str, ...] = tuple(a + b for a in "IXYZ" for b in "IXYZ")
NONLOCAL_LABELS: Tuple[str, ...] = tuple(a + b for a in "XYZ" for b in "XYZ")
LOCAL_LABELS: Tuple[str, ...] = tuple(l for l in ALL_LABELS if l != "II" and l not in NONLOCAL_LABELS)


def kron(a: Matrix, b: Matrix) -> Matrix:
    rows, cols = a.rows * b.rows, a.cols * b.cols
    return Matrix(rows, cols, lambda i, j: a[i // b.rows, j // b.cols] * b[i % b.rows, j % b.cols])


def gate_word(word: str) -> Matrix:
    """Matrix product of one-qubit gate letters, read left to right."""
    result = eye(2)
    for letter in word.replace("1", ""):
        result = result * _ONE_QUBIT[letter]
    return result


def clifford_element(first_word: str, second_word: str) -> Matrix:
    return kron(gate_word(first_word), gate_word(second_word))


GATES: Dict[str, Matrix] = {
    "H1": clifford_element("H", ""),
    "S1": clifford_element("S", ""),
    "1H": clifford_element("", "H"),
    "1S": clifford_element("", "S"),
    "SWAP": SWAP,
}


@dataclass(frozen=True)
class Pauli2:
    label: str
    sign: int = 1

    def __post_init__(self):
        if len(self.label) != 2 or any(ch not in LETTER_BITS for ch in self.label):
            raise ValueError(f"bad Pauli label '{self.label}'")
        if self.sign not in (1, -1):
            raise ValueError("Pauli signs are +1 or -1")

    @property
    def symplectic(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        return LETTER_BITS[self.label[0]], LETTER_BITS[self.label[1]]

    @property
    def is_identity(self) -> bool:
        return self.label == "II"

    @property
    def is_nonlocal(self) -> bool:
        return "I" not in self.label

    @property
    def is_local(self) -> bool:
        return not self.is_identity and not self.is_nonlocal

    def matrix(self) -> Matrix:
        return self.sign * pauli_matrix(self.label)

    def __neg__(self) -> "Pauli2":
        return Pauli2(self.label, -self.sign)

    def __str__(self) -> str:
        return ("-" if self.sign < 0 else "") + self.label


@lru_cache(maxsize=None)
def pauli_matrix(label: str) -> Matrix:
    return kron(_ONE_QUBIT[label[0]], _ONE_QUBIT[label[1]])


@lru_cache(maxsize=None)
def labels_commute(a: str, b: str) -> bool:
    pa, pb = pauli_matrix(a), pauli_matrix(b)
    return pa * pb == pb * pa


def commute(p: Pauli2, q: Pauli2) -> bool:
    return labels_commute(p.label, q.label)


def pauli_coefficients(op: Matrix) -> Dict[str, object]:
    """Coefficients c_L with op = sum_L c_L P_L, from Tr(P_L op) / 4."""
    coeffs = {}
    for label in ALL_LABELS:
        c = sympy.expand((pauli_matrix(label) * op).trace() / 4)
        if c != 0:
            coeffs[label] = c
    return coeffs


def conjugate(gate: Matrix, p: Pauli2) -> Pauli2:
    """U p U^dagger as a signed Pauli; the global phase of U is irrelevant."""
    scale = sympy.expand((gate * gate.H)[0, 0])
    image = (gate * p.matrix() * gate.H / scale).expand()
    coeffs = pauli_coefficients(image)
    if len(coeffs) != 1:
        raise ValueError("gate is not a Clifford unitary")
    (label, c), = coeffs.items()
    if c not in (1, -1):
        raise ValueError(f"conjugation produced coefficient {c}")
    return Pauli2(label, int(c))


# The grid dictionary ---------------------------------------------------------------------


@dataclass(frozen=True)
class PauliGrid:
    """Nonlocal Pauli sitting on each measurement m_ij, derived from commuting triples."""

    labels: Tuple[str, ...]
    horizontal: Tuple[Tuple[str, ...], ...]
    vertical: Tuple[Tuple[str, ...], ...]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def context_labels(self, context: int) -> Tuple[str, ...]:
        return tuple(self.labels[m] for m in CONTEXTS[context])


def triple_product_sign(triple: Sequence[str]) -> int:
    product = pauli_matrix(triple[0]) * pauli_matrix(triple[1]) * pauli_matrix(triple[2])
    if product == eye(4):
        return 1
    if product == -eye(4):
        return -1
    raise VerificationError(f"product of {triple} is not +-1")


def commuting_triples() -> List[Tuple[str, str, str]]:
    return [
        t for t in itertools.combinations(NONLOCAL_LABELS, 3)
        if all(labels_commute(a, b) for a, b in itertools.combinations(t, 2))
    ]


@lru_cache(maxsize=None)
def derive_pauli_grid() -> PauliGrid:
    triples = commuting_triples()
    if len(triples) != CONTEXT_COUNT:
        raise VerificationError(f"expected 6 commuting nonlocal triples, found {len(triples)}")
    hor = sorted(tuple(sorted(t)) for t in triples if triple_product_sign(t) == 1)
    ver = sorted(tuple(sorted(t)) for t in triples if triple_product_sign(t) == -1)
    if len(hor) != 3 or len(ver) != 3:
        raise VerificationError("commuting triples do not split 3 + 3 by product sign")
    labels = []
    for i in range(3):
        for j in range(3):
            common = set(hor[i]) & set(ver[j])
            if len(common) != 1:
                raise VerificationError("commuting triples do not form a K33 incidence")
            labels.append(common.pop())
    if len(set(labels)) != MEASUREMENT_COUNT:
        raise VerificationError("grid labels are not distinct")
    logger.debug("pauli grid: %s", labels)
    return PauliGrid(tuple(labels), tuple(hor), tuple(ver))


NUMBERED_TRIPLES: Dict[int, FrozenSet[str]] = {
    1: frozenset({"YX", "XY", "ZZ"}),
    2: frozenset({"XX", "YY", "ZZ"}),
    3: frozenset({"XZ", "ZX", "YY"}),
    4: frozenset({"XY", "YZ", "ZX"}),
    5: frozenset({"XX", "YZ", "ZY"}),
    6: frozenset({"XZ", "ZY", "YX"}),
}


@lru_cache(maxsize=None)
def numbered_context_map() -> Dict[int, int]:
    """Numbering C_1..C_6 resolved to grid context indices by matching triples."""
    grid = derive_pauli_grid()
    mapping = {}
    for k, triple in NUMBERED_TRIPLES.items():
        matches = [c for c in range(CONTEXT_COUNT) if frozenset(grid.context_labels(c)) == triple]
        if len(matches) != 1:
            raise VerificationError(f"C_{k} does not match a grid context")
        mapping[k] = matches[0]
    return mapping


def cycle_notation(perm: K33Automorphism) -> str:
    """1-based cycles over C_1..C_6, e.g. (16)(23)(45)."""
    to_grid = numbered_context_map()
    from_grid = {c: k for k, c in to_grid.items()}
    image = {k: from_grid[perm.context_perm[to_grid[k]]] for k in to_grid}
    seen, cycles = set(), []
    for start in sorted(image):
        if start in seen or image[start] == start:
            seen.add(start)
            continue
        cycle, k = [], start
        while k not in seen:
            seen.add(k)
            cycle.append(k)
            k = image[k]
        cycles.append("(" + "".join(str(k) for k in cycle) + ")")
    return "".join(cycles) or "()"


CANONICAL_VERTICES: Dict[str, Dict[str, int]] = {
    "V57": {"XY": 1, "YY": -1, "ZY": 1},
    "V58": {"XX": 1, "XY": 1, "YX": 1, "YY": -1, "ZZ": 1},
    "V99": {"XX": 1, "XY": 1, "YZ": -1, "ZX": 1, "ZY": -1},
    "V22": {"XX": 1, "YY": -1, "YZ": -1, "ZY": -1, "ZZ": 1},
    "V28": {"ZX": 1, "ZY": -1, "ZZ": 1},
}


def expectation_from_operator(coeffs: Dict[str, int]) -> Vector:
    grid = derive_pauli_grid()
    values = [Fraction(0)] * MEASUREMENT_COUNT
    for label, c in coeffs.items():
        values[grid.index(label)] = Fraction(c)
    return tuple(values)


def canonical_vertex(name: str) -> Vector:
    try:
        return expectation_from_operator(CANONICAL_VERTICES[name])
    except KeyError:
        raise ValueError(f"unknown canonical vertex '{name}'") from None


# Group elements -----------------------------------------------------------------------------


def _signed_point(position: int, negative: bool) -> int:
    return 2 * position + (1 if negative else 0)


@dataclass(frozen=True)
class G1Element:
    """Signed permutation: the Pauli on m goes to sign[m] times the Pauli on target[m]."""

    targets: Tuple[int, ...]
    signs: Tuple[int, ...]

    @classmethod
    def identity(cls) -> "G1Element":
        return cls(tuple(range(MEASUREMENT_COUNT)), (1,) * MEASUREMENT_COUNT)

    @classmethod
    def from_unitary(cls, gate: Matrix) -> "G1Element":
        grid = derive_pauli_grid()
        targets, signs = [], []
        for label in grid.labels:
            image = conjugate(gate, Pauli2(label))
            if not image.is_nonlocal:
                raise ValueError(f"{label} is sent to the local Pauli {image}")
            targets.append(grid.index(image.label))
            signs.append(image.sign)
        return cls(tuple(targets), tuple(signs))

    def __mul__(self, other: "G1Element") -> "G1Element":
        # other acts first
        return G1Element(
            tuple(self.targets[other.targets[m]] for m in range(MEASUREMENT_COUNT)),
            tuple(other.signs[m] * self.signs[other.targets[m]] for m in range(MEASUREMENT_COUNT)),
        )

    def inverse(self) -> "G1Element":
        targets, signs = [0] * MEASUREMENT_COUNT, [1] * MEASUREMENT_COUNT
        for m, (t, s) in enumerate(zip(self.targets, self.signs)):
            targets[t] = m
            signs[t] = s
        return G1Element(tuple(targets), tuple(signs))

    def act(self, e: Sequence[Fraction]) -> Vector:
        out = [Fraction(0)] * MEASUREMENT_COUNT
        for m, (t, s) in enumerate(zip(self.targets, self.signs)):
            out[t] = s * e[m]
        return tuple(out)

    def context_perm(self) -> K33Automorphism:
        images = []
        for ctx in CONTEXTS:
            image = {self.targets[m] for m in ctx}
            images.append(next(c for c, other in enumerate(CONTEXTS) if set(other) == image))
        return K33Automorphism(tuple(images))

    def is_sign_flip(self) -> bool:
        return self.targets == tuple(range(MEASUREMENT_COUNT))

    def as_sympy_permutation(self) -> Permutation:
        image = [0] * (2 * MEASUREMENT_COUNT)
        for m, (t, s) in enumerate(zip(self.targets, self.signs)):
            image[2 * m] = _signed_point(t, s < 0)
            image[2 * m + 1] = _signed_point(t, s > 0)
        return Permutation(image)

    def sort_key(self):
        return self.targets, self.signs


@dataclass(frozen=True)
class G0Element:
    """Loop flip after an automorphism: permute coordinates by perm, then negate on flip."""

    flip: FrozenSet[int]
    perm: K33Automorphism

    @classmethod
    def identity(cls) -> "G0Element":
        return cls(frozenset(), K33Automorphism.identity())

    def __mul__(self, other: "G0Element") -> "G0Element":
        return G0Element(self.flip ^ self.perm.apply_edges(other.flip), self.perm * other.perm)

    def inverse(self) -> "G0Element":
        inv = self.perm.inverse()
        return G0Element(inv.apply_edges(self.flip), inv)

    def act(self, e: Sequence[Fraction]) -> Vector:
        out = [Fraction(0)] * MEASUREMENT_COUNT
        for m in range(MEASUREMENT_COUNT):
            out[self.perm.edge_image(m)] = e[m]
        return tuple(-v if k in self.flip else v for k, v in enumerate(out))

    def as_sympy_permutation(self) -> Permutation:
        image = [0] * (2 * MEASUREMENT_COUNT)
        for m in range(MEASUREMENT_COUNT):
            t = self.perm.edge_image(m)
            negative = t in self.flip
            image[2 * m] = _signed_point(t, negative)
            image[2 * m + 1] = _signed_point(t, not negative)
        return Permutation(image)

    def sort_key(self):
        return tuple(sorted(self.flip)), self.perm.context_perm


def loop_element(loop: Loop) -> G0Element:
    return G0Element(loop.edges, K33Automorphism.identity())


def element_order(g, identity) -> int:
    power, n = g, 1
    while power != identity:
        power = power * g
        n += 1
    return n


class FiniteGroup:
    """Explicit finite group: every element stored, order-stable."""

    def __init__(self, elements: Iterable, generators: Sequence, identity):
        self.elements = sorted(elements, key=lambda g: g.sort_key())
        self._members = set(self.elements)
        self.generators = list(generators)
        self.identity = identity

    @classmethod
    def generate(cls, generators: Sequence, identity) -> "FiniteGroup":
        seen = {identity}
        queue = deque([identity])
        while queue:
            g = queue.popleft()
            for s in generators:
                h = g * s
                if h not in seen:
                    seen.add(h)
                    queue.append(h)
        return cls(seen, generators, identity)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        return g in self._members

    def is_closed(self) -> bool:
        return all(g * h in self._members for g in self.generators for h in self.elements)

    def has_inverses(self) -> bool:
        return all(g.inverse() in self._members and g * g.inverse() == self.identity for g in self.elements)

    def subgroup(self, predicate: Callable) -> "FiniteGroup":
        members = [g for g in self.elements if predicate(g)]
        return FiniteGroup(members, generating_set(members, self.identity), self.identity)

    def sympy_order(self) -> int:
        gens = self.generators or [self.identity]
        return int(PermutationGroup([g.as_sympy_permutation() for g in gens]).order())


def generating_set(elements: Sequence, identity) -> List:
    gens: List = []
    span = {identity}
    for g in elements:
        if g not in span:
            gens.append(g)
            span = set(FiniteGroup.generate(gens, identity).elements)
    return gens


def g1_generators() -> Dict[str, G1Element]:
    return {
        "h": G1Element.from_unitary(GATES["H1"]),
        "s": G1Element.from_unitary(GATES["S1"]),
        "w": G1Element.from_unitary(GATES["SWAP"]),
    }


NAMED_WORDS = {"Q": ("YS", "X"), "R": ("YH", "H"), "M": ("X", "YS")}


def named_element(name: str) -> G1Element:
    """Q, R, M and N = M SWAP as signed permutations; SWAP by name too."""
    if name == "SWAP":
        return G1Element.from_unitary(SWAP)
    if name == "N":
        return named_element("M") * named_element("SWAP")
    try:
        return G1Element.from_unitary(clifford_element(*NAMED_WORDS[name]))
    except KeyError:
        raise ValueError(f"unknown named element '{name}'") from None


@lru_cache(maxsize=None)
def generate_G1() -> FiniteGroup:
    gens = list(g1_generators().values())
    group = FiniteGroup.generate(gens, G1Element.identity())
    logger.info("G1 closed with %d elements", group.order)
    return group


@lru_cache(maxsize=None)
def generate_G0() -> FiniteGroup:
    elements = [G0Element(loop.edges, perm) for loop in cycle_space() for perm in k33_automorphisms()]
    gens = [loop_element(l) for l in chsh_loop_elements().values()]
    gens += [G0Element(frozenset(), a) for a in k33_generators()]
    group = FiniteGroup(elements, gens, G0Element.identity())
    logger.info("G0 has %d elements", group.order)
    return group


def chsh_loop_elements() -> Dict[str, Loop]:
    aliases = decomposition_aliases()
    return {"x0": aliases["l2a"], "x1": aliases["l4a"], "y0": aliases["l9a"], "y1": aliases["l3a"]}


def sign_kernel(group: FiniteGroup) -> FiniteGroup:
    return group.subgroup(lambda g: g.is_sign_flip())


def pauli_conjugations() -> List[G1Element]:
    return sorted(
        {G1Element.from_unitary(clifford_element(a, b)) for a in "IXYZ" for b in "IXYZ"},
        key=lambda g: g.sort_key(),
    )


def quotient_perms(group: FiniteGroup) -> set:
    return {g.context_perm() for g in group}


# Actions, orbits and stabilizers -----------------------------------------------------------


def act(g, e: Sequence[Fraction]) -> Vector:
    return g.act(vector(e))


def orbit(group: FiniteGroup, e: Sequence[Fraction]) -> List[Vector]:
    e = vector(e)
    seen = {e}
    queue = deque([e])
    gens = group.generators or group.elements
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g.act(x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def orbit_partition(group: FiniteGroup, points: Iterable[Sequence[Fraction]]) -> List[List[Vector]]:
    """Orbits restricted to ``points``, each sorted; representative is the first entry."""
    remaining = {vector(p) for p in points}
    orbits = []
    while remaining:
        start = min(remaining)
        members = [x for x in orbit(group, start) if x in remaining]
        orbits.append(members)
        remaining -= set(members)
    return sorted(orbits, key=lambda o: o[0])


@dataclass
class DihedralPresentation:
    rotation: object
    reflection: object
    n: int


def find_dihedral_presentation(group: FiniteGroup) -> Optional[DihedralPresentation]:
    """Search a, b with a^n = b^2 = (ba)^2 = 1 generating the group of order 2n."""
    if group.order % 2:
        return None
    n = group.order // 2
    identity = group.identity
    rotations = [g for g in group if element_order(g, identity) == n]
    involutions = [g for g in group if g != identity and g * g == identity]
    for a in rotations:
        powers = set()
        p = identity
        for _ in range(n):
            powers.add(p)
            p = p * a
        for b in involutions:
            if b in powers:
                continue
            ba = b * a
            if ba * ba == identity:
                return DihedralPresentation(a, b, n)
    return None


@dataclass
class StabilizerReport:
    point: Vector
    group: FiniteGroup
    dihedral: Optional[DihedralPresentation] = None

    @property
    def order(self) -> int:
        return self.group.order


def stabilizer(group: FiniteGroup, e: Sequence[Fraction]) -> StabilizerReport:
    e = vector(e)
    stab = group.subgroup(lambda g: g.act(e) == e)
    return StabilizerReport(e, stab, find_dihedral_presentation(stab))


def intersect_stabilizers(group: FiniteGroup, v1: Sequence[Fraction], v2: Sequence[Fraction]) -> FiniteGroup:
    v1, v2 = vector(v1), vector(v2)
    return group.subgroup(lambda g: g.act(v1) == v1 and g.act(v2) == v2)


def orbit_stabilizer_holds(group: FiniteGroup, points: Iterable[Sequence[Fraction]]) -> bool:
    for p in points:
        p = vector(p)
        fixing = sum(1 for g in group if g.act(p) == p)
        if len(orbit(group, p)) * fixing != group.order:
            return False
    return True


def projects_isomorphically_onto_aut(group: FiniteGroup) -> bool:
    """True when g -> perm(g) is injective with image all of Aut(K33)."""
    perms = [g.perm for g in group]
    return len(set(perms)) == len(perms) == len(k33_automorphisms())


def graph_automorphism_count(graph: nx.Graph, limit: int = 5000) -> Tuple[int, bool]:
    """Number of automorphisms found, and whether the search stopped at ``limit``."""
    matcher = isomorphism.GraphMatcher(graph, graph)
    count = 0
    for _ in matcher.isomorphisms_iter():
        count += 1
        if count >= limit:
            return count, True
    return count, False


# The isomorphism G1 -> G0 -----------------------------------------------------------------------

RELATIONS: Tuple[Tuple[str, str], ...] = (
    ("w^2", "ww"),
    ("h^2", "hh"),
    ("s^4", "ssss"),
    ("(hs)^3", "hshshs"),
    ("[h,whw]", "[h,whw]"),
    ("[h,wsw]", "[h,wsw]"),
    ("[s,whw]", "[s,whw]"),
    ("[s,wsw]", "[s,wsw]"),
)


def evaluate_word(word: str, images: Dict[str, object], identity):
    """Product of generator letters; "[a,b]" is the commutator a b a^-1 b^-1."""
    if word.startswith("["):
        left, right = word[1:-1].split(",")
        a = evaluate_word(left, images, identity)
        b = evaluate_word(right, images, identity)
        return a * b * a.inverse() * b.inverse()
    result = identity
    for letter in word:
        result = result * images[letter]
    return result


def first_failed_relation(images: Dict[str, object], identity) -> Optional[str]:
    for name, word in RELATIONS:
        if evaluate_word(word, images, identity) != identity:
            return name
    return None


def phi_closed_form(g: G1Element) -> G0Element:
    """Negated targets, complemented when g exchanges the two context families."""
    perm = g.context_perm()
    flip = frozenset(t for t, s in zip(g.targets, g.signs) if s < 0)
    if perm.swaps_families():
        flip = frozenset(range(MEASUREMENT_COUNT)) - flip
    return G0Element(flip, perm)


def _extend_homomorphism(generators: Dict[str, G1Element], images: Dict[str, G0Element]) -> Optional[Dict[G1Element, G0Element]]:
    mapping = {G1Element.identity(): G0Element.identity()}
    queue = deque([G1Element.identity()])
    while queue:
        g = queue.popleft()
        for name, t in generators.items():
            gt = g * t
            image = mapping[g] * images[name]
            known = mapping.get(gt)
            if known is None:
                mapping[gt] = image
                queue.append(gt)
            elif known != image:
                return None
    return mapping


PAULI_GENERATOR_WORDS = {"X1": ("X", ""), "Z1": ("Z", ""), "1X": ("", "X"), "1Z": ("", "Z")}


@dataclass
class PhiMap:
    generator_images: Dict[str, G0Element]
    mapping: Dict[G1Element, G0Element]
    b_aliases: Dict[str, Loop]

    def __call__(self, g: G1Element) -> G0Element:
        return self.mapping[g]


@lru_cache(maxsize=None)
def search_phi() -> PhiMap:
    """Find 6-cycle flips for H (x) 1 and S (x) 1 making phi a homomorphism with consistent loop names."""
    gens = g1_generators()
    perms = {name: g.context_perm() for name, g in gens.items()}
    paulis = {name: G1Element.from_unitary(clifford_element(*words)) for name, words in PAULI_GENERATOR_WORDS.items()}
    six_cycles = [l for l in enumerate_loops() if len(l.edges) == 6]
    for lh, ls in itertools.product(six_cycles, repeat=2):
        images = {
            "h": G0Element(lh.edges, perms["h"]),
            "s": G0Element(ls.edges, perms["s"]),
            "w": G0Element(frozenset(), perms["w"]),
        }
        mapping = _extend_homomorphism(gens, images)
        if mapping is None:
            continue
        pauli_images = {name: mapping[p] for name, p in paulis.items()}
        if any(img.perm != K33Automorphism.identity() for img in pauli_images.values()):
            continue
        aliases = {
            "l5b": lh,
            "l3b": ls,
            "l1b": Loop(perms["w"].apply_edges(lh.edges)),
            "l6b": Loop(perms["w"].apply_edges(ls.edges)),
            "l4b": Loop(pauli_images["Z1"].flip),
            "l2b": Loop(pauli_images["1Z"].flip),
        }
        if pauli_images["X1"].flip != aliases["l3b"].edges or pauli_images["1X"].flip != aliases["l6b"].edges:
            continue
        if len({l.edges for l in aliases.values()}) != 6 or any(len(l.edges) != 6 for l in aliases.values()):
            continue
        logger.info("phi found with H -> %s, S -> %s", lh.labels(), ls.labels())
        return PhiMap(images, mapping, dict(sorted(aliases.items())))
    raise VerificationError("no assignment of loops to H and S extends to a homomorphism")


def loop_aliases(phi: Optional[PhiMap] = None) -> Dict[str, Loop]:
    phi = phi or search_phi()
    table = dict(decomposition_aliases())
    table.update(phi.b_aliases)
    return dict(sorted(table.items()))


def loop_name(loop: Loop, aliases: Dict[str, Loop]) -> str:
    if not loop.edges:
        return "l0"
    for name, other in aliases.items():
        if other.edges == loop.edges:
            return name
    return "{" + ",".join(loop.labels()) + "}"


@dataclass
class PhiReport:
    generator_cycles: Dict[str, str]
    worked_products: Dict[str, Tuple[str, str]]
    expected_products: Dict[str, Tuple[str, str]]
    first_failed_relation: Optional[str]
    g1_first_failed_relation: Optional[str]
    diagram_commutes: bool
    bijective: bool
    closed_form_agrees: bool
    image_order: int
    aliases: Dict[str, Loop] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (
            self.first_failed_relation is None
            and self.g1_first_failed_relation is None
            and self.diagram_commutes
            and self.bijective
            and self.closed_form_agrees
            and self.worked_products == self.expected_products
            and self.generator_cycles == EXPECTED_GENERATOR_CYCLES
        )


EXPECTED_GENERATOR_CYCLES = {"h": "(16)(23)(45)", "s": "(12)(34)(56)", "w": "(46)"}
EXPECTED_WORKED_PRODUCTS = {
    "whw": ("l1b", "(14)(23)(56)"),
    "wsw": ("l6b", "(12)(36)(45)"),
    "(hs)^3": ("l0", "()"),
    "[h,whw]": ("l0", "()"),
}


def verify_phi_isomorphism(phi: Optional[PhiMap] = None) -> PhiReport:
    phi = phi or search_phi()
    g1 = generate_G1()
    g0 = generate_G0()
    aliases = loop_aliases(phi)
    images = phi.generator_images
    identity = G0Element.identity()

    def render(g: G0Element) -> Tuple[str, str]:
        return loop_name(Loop(g.flip), aliases), cycle_notation(g.perm)

    words = dict(RELATIONS)
    worked = {
        key: render(evaluate_word(words.get(key, key), images, identity))
        for key in EXPECTED_WORKED_PRODUCTS
    }

    f = {"X1": "l3b", "Z1": "l4b", "1X": "l6b", "1Z": "l2b"}
    diagram = True
    for name, words in PAULI_GENERATOR_WORDS.items():
        image = phi(G1Element.from_unitary(clifford_element(*words)))
        if image != G0Element(aliases[f[name]].edges, K33Automorphism.identity()):
            diagram = False
    span = FiniteGroup.generate([loop_element(aliases[n]) for n in f.values()], identity)
    kernel_images = {phi(g) for g in sign_kernel(g1)}
    diagram = diagram and span.order == 16 and kernel_images == set(span.elements)

    image_set = set(phi.mapping.values())
    g1_gens = g1_generators()
    return PhiReport(
        generator_cycles={n: cycle_notation(g.perm) for n, g in images.items()},
        worked_products=worked,
        expected_products=dict(EXPECTED_WORKED_PRODUCTS),
        first_failed_relation=first_failed_relation(images, identity),
        g1_first_failed_relation=first_failed_relation(g1_gens, G1Element.identity()),
        diagram_commutes=diagram,
        bijective=len(image_set) == len(phi.mapping) == g1.order and image_set == set(g0.elements),
        closed_form_agrees=all(phi_closed_form(g) == img for g, img in phi.mapping.items()),
        image_order=len(image_set),
        aliases=aliases,
    )
