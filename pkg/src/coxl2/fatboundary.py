"""Boundary combinatorics of the fattened Davis complex.

Fattening is always taken with respect to the full simplex on the generator
set, so the boundary decomposes into pieces indexed by the proper nonempty
subsets whose special subgroup is infinite.  Two pieces meet exactly when one
index set contains the other, which makes the nerve of the boundary cover the
order complex of that poset.  The first page of the associated Mayer-Vietoris
spectral sequence is assembled from the Betti reports of the piece groups:
the piece indexed by T contributes the numbers of the Davis complex of the
subsystem on T, with the ambient weights restricted.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .betti import BettiReport, SymbolicRay, deduce_betti
from .classify import classify_system, is_spherical
from .growth import WeightVector
from .poly import RationalFn
from .system import CoxeterSystem, restrict

__all__ = [
    "NonsphericalPoset",
    "FlagComplexNP",
    "BoundaryPiece",
    "BoundaryDecomposition",
    "E1Summand",
    "E1Entry",
    "E1Table",
    "nonspherical_poset",
    "flag_complex",
    "boundary_decomposition",
    "e1_table",
    "boundary_b1_vanishes",
]


@dataclass(frozen=True)
class NonsphericalPoset:
    """Proper nonempty subsets with infinite special subgroup, ordered by
    inclusion.  Element tuples keep the ambient generator order."""

    elements: tuple

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, subset):
        want = frozenset(subset)
        return any(frozenset(t) == want for t in self.elements)

    def by_cardinality(self):
        out = {}
        for t in self.elements:
            out.setdefault(len(t), []).append(t)
        return {j: tuple(ts) for j, ts in sorted(out.items())}

    def nested_pairs(self):
        """All (U, V) with U strictly contained in V."""
        sets = [frozenset(t) for t in self.elements]
        return tuple(
            (u, v)
            for u, fu in zip(self.elements, sets)
            for v, fv in zip(self.elements, sets)
            if fu < fv
        )


def nonspherical_poset(system: CoxeterSystem) -> NonsphericalPoset:
    gens = system.generators
    found = []
    for k in range(1, len(gens)):
        for subset in combinations(gens, k):
            if not is_spherical(system, subset):
                found.append(subset)
    found.sort(key=lambda t: (len(t), t))
    return NonsphericalPoset(tuple(found))


@dataclass(frozen=True)
class FlagComplexNP:
    """Order complex of the poset: simplices are the inclusion chains,
    listed smallest set first."""

    vertices: tuple
    simplices: tuple

    @property
    def dim(self):
        return max((len(c) for c in self.simplices), default=0) - 1

    def faces_of_dim(self, k):
        return tuple(c for c in self.simplices if len(c) == k + 1)

    def edges(self):
        return self.faces_of_dim(1)


def flag_complex(poset: NonsphericalPoset) -> FlagComplexNP:
    elements = list(poset)
    sets = {t: frozenset(t) for t in elements}
    above = {
        t: [v for v in elements if sets[t] < sets[v]] for t in elements
    }

    chains = []

    def grow(chain):
        chains.append(tuple(chain))
        for v in above[chain[-1]]:
            chain.append(v)
            grow(chain)
            chain.pop()

    for t in elements:
        grow([t])
    chains.sort(key=lambda c: (len(c), c))
    return FlagComplexNP(tuple(elements), tuple(chains))


@dataclass(frozen=True)
class BoundaryPiece:
    subset: tuple
    group_type: str  # classification of the special subgroup on the subset


@dataclass(frozen=True)
class BoundaryDecomposition:
    """Pieces of the fattened boundary grouped by index cardinality, with the
    nested pairs recording which pieces intersect."""

    groups: tuple  # (cardinality, pieces) in increasing cardinality
    nested_pairs: tuple

    def piece_count(self):
        return sum(len(pieces) for _, pieces in self.groups)


def _subgroup_type(system, subset) -> str:
    tags = classify_system(restrict(system, subset))
    return " x ".join(str(tag) for tag in tags.values())


def boundary_decomposition(system: CoxeterSystem) -> BoundaryDecomposition:
    poset = nonspherical_poset(system)
    groups = tuple(
        (j, tuple(BoundaryPiece(t, _subgroup_type(system, t)) for t in ts))
        for j, ts in poset.by_cardinality().items()
    )
    return BoundaryDecomposition(groups, poset.nested_pairs())


# ---------------------------------------------------------------------------
# The first page of the Mayer-Vietoris spectral sequence.


@dataclass(frozen=True)
class E1Summand:
    chain: tuple  # inclusion chain of subsets, smallest first
    smallest: tuple  # the chain minimum; its piece is the intersection
    status: object  # DegreeStatus of the contributing Betti number
    rules: tuple  # rule ids fired for the subsystem report


@dataclass(frozen=True)
class E1Entry:
    value: object  # Fraction or RationalFn when determined, else None
    summands: tuple

    @property
    def determined(self):
        return self.value is not None


@dataclass(frozen=True)
class E1Table:
    entries: dict  # (chain degree i, homology degree j) -> E1Entry
    weight: object

    def value(self, i, j):
        """Entry total; absent entries are empty sums."""
        entry = self.entries.get((i, j))
        if entry is None:
            return Fraction(0)
        return entry.value

    def determined(self, i, j):
        entry = self.entries.get((i, j))
        return entry is None or entry.determined


def _fold(summands):
    parts = []
    for s in summands:
        st = s.status
        if st.kind == "zero":
            parts.append(Fraction(0))
        elif st.kind in ("value", "symbolic"):
            parts.append(st.value)
        else:
            return None
    fn = next((p for p in parts if isinstance(p, RationalFn)), None)
    if fn is None:
        return sum(parts, Fraction(0))
    acc = RationalFn.from_fraction(fn.numerator.nvars, 0)
    for p in parts:
        acc = acc + p
    return acc


def _restricted_weight(system, weight, subset):
    if isinstance(weight, SymbolicRay):
        return weight
    byname = {}
    for cls, val in zip(system.classes, weight.values):
        for name in cls:
            byname[name] = val
    sub = restrict(system, subset)
    return WeightVector.from_map(sub, {n: byname[n] for n in subset})


def piece_report(system: CoxeterSystem, weight, subset) -> BettiReport:
    """Betti report of the subsystem a boundary piece is built from."""
    sub = restrict(system, subset)
    return deduce_betti(sub, _restricted_weight(system, weight, subset))


def e1_table(system: CoxeterSystem, weight) -> E1Table:
    flag = flag_complex(nonspherical_poset(system))
    reports = {t: piece_report(system, weight, t) for t in flag.vertices}
    cells = {}
    for chain in flag.simplices:
        i = len(chain) - 1
        rep = reports[chain[0]]
        rules = tuple(e.rule for e in rep.trail)
        for j, status in rep.degrees.items():
            cells.setdefault((i, j), []).append(
                E1Summand(chain, chain[0], status, rules)
            )
    entries = {
        key: E1Entry(_fold(summands), tuple(summands))
        for key, summands in sorted(cells.items())
    }
    return E1Table(entries, weight)


def _is_zero(value):
    if isinstance(value, Fraction):
        return value == 0
    return value.is_zero


def boundary_b1_vanishes(system: CoxeterSystem, weight) -> str:
    """"Yes" when the two entries feeding degree one vanish, else "Unknown".

    Absent entries are empty sums.  An undetermined or nonvanishing entry
    gives "Unknown": this reports what the rules establish, not a converse.
    """
    table = e1_table(system, weight)
    for key in ((0, 1), (1, 0)):
        if not table.determined(*key):
            return "Unknown"
        if not _is_zero(table.value(*key)):
            return "Unknown"
    return "Yes"
