"""Type recognition: finite, affine, Lanner, quasi-Lanner, other.

Recognition of the finite and affine types goes through labeled-diagram
isomorphism against the embedded catalog rather than Gram-matrix
positive-definiteness; at rank <= 10 backtracking with vertex-signature
pruning is instant and keeps the arithmetic rational.  The (quasi-)Lanner
tags use the simplex criterion on proper subdiagrams directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .catalog import load_catalog
from .system import (
    INF,
    CoxeterError,
    CoxeterSystem,
    irreducible_components,
    restrict,
)


class NotIrreducible(CoxeterError):
    pass


class InfiniteLabel(CoxeterError):
    pass


@dataclass(frozen=True)
class TypeTag:
    kind: str  # finite | affine | lanner | quasilanner | other
    name: str | None = None  # catalog name for finite/affine
    dim: int | None = None  # hyperbolic dimension for (quasi-)lanner

    @property
    def finite(self):
        return self.kind == "finite"

    @property
    def affine(self):
        return self.kind == "affine"

    def __str__(self):
        if self.kind in ("finite", "affine"):
            return f"{self.kind}({self.name})"
        if self.kind in ("lanner", "quasilanner"):
            return f"{self.kind}({self.dim})"
        return "other-infinite"


def _signature(system):
    """Per-vertex multiset of incident labels != 2, as a sorted tuple."""
    n = system.rank
    rows = system.matrix.rows
    sig = []
    for i in range(n):
        inc = sorted(
            (0 if rows[i][j] == INF else rows[i][j])
            for j in range(n)
            if j != i and rows[i][j] != 2
        )
        sig.append(tuple(inc))
    return sig


def diagrams_isomorphic(a: CoxeterSystem, b: CoxeterSystem) -> bool:
    """Labeled-graph isomorphism by backtracking with signature pruning."""
    if a.rank != b.rank:
        return False
    siga, sigb = _signature(a), _signature(b)
    if sorted(siga) != sorted(sigb):
        return False
    n = a.rank
    ra, rb = a.matrix.rows, b.matrix.rows
    # match rare signatures first to cut the tree down
    order = sorted(range(n), key=lambda i: (siga.count(siga[i]), siga[i]))
    image = [None] * n
    used = [False] * n

    def extend(k):
        if k == n:
            return True
        i = order[k]
        for j in range(n):
            if used[j] or sigb[j] != siga[i]:
                continue
            ok = True
            for k2 in range(k):
                i2 = order[k2]
                if ra[i][i2] != rb[j][image[i2]]:
                    ok = False
                    break
            if ok:
                image[i] = j
                used[j] = True
                if extend(k + 1):
                    return True
                used[j] = False
                image[i] = None
        return False

    return extend(0)


@lru_cache(maxsize=None)
def _catalog():
    finite, affine = [], []
    for name, kind, sys_ in load_catalog():
        (finite if kind == "finite" else affine).append((name, sys_))
    return finite, affine


def _match(system, entries):
    for name, entry in entries:
        if diagrams_isomorphic(system, entry):
            return name
    return None


@lru_cache(maxsize=None)
def classify_component(system: CoxeterSystem) -> TypeTag:
    """Type of one irreducible system."""
    comps = irreducible_components(system)
    if len(comps) != 1:
        raise NotIrreducible(f"{len(comps)} components")
    if system.rank == 1:
        return TypeTag("finite", name="A1")
    if system.rank == 2:
        m = system.matrix.rows[0][1]
        if m == INF:
            return TypeTag("affine", name="A~1")
        name = {3: "A2", 4: "B2", 6: "G2"}.get(m, f"I2({m})")
        return TypeTag("finite", name=name)
    finite, affine = _catalog()
    name = _match(system, finite)
    if name:
        return TypeTag("finite", name=name)
    name = _match(system, affine)
    if name:
        return TypeTag("affine", name=name)
    rows = system.matrix.rows
    n = system.rank
    all_finite_labels = all(
        rows[i][j] != INF for i in range(n) for j in range(i + 1, n)
    )
    if all_finite_labels:
        spherical = 0
        euclidean = 0
        proper = 0
        for k in range(1, n):
            for sub in combinations(system.generators, k):
                proper += 1
                tags = [classify_component(c) for c in _components(system, sub)]
                if all(t.finite for t in tags):
                    spherical += 1
                elif all(t.finite or t.affine for t in tags):
                    euclidean += 1
        if spherical == proper:
            return TypeTag("lanner", dim=n - 1)
        if spherical + euclidean == proper and euclidean > 0:
            dim = n - 1
            if not 3 <= dim <= 10:
                raise CoxeterError(f"quasi-lanner recognized at dimension {dim}")
            return TypeTag("quasilanner", dim=dim)
    return TypeTag("other")


def _components(system, subset):
    sub = restrict(system, subset)
    return [restrict(sub, comp) for comp in irreducible_components(sub)]


def classify_system(system: CoxeterSystem) -> dict:
    """TypeTag per irreducible component, keyed by generator tuple."""
    return {
        comp: classify_component(restrict(system, comp))
        for comp in irreducible_components(system)
    }


def is_spherical(system: CoxeterSystem, subset) -> bool:
    """Does the subset generate a finite group?"""
    return all(classify_component(c).finite for c in _components(system, tuple(subset)))


def is_affine_type(system: CoxeterSystem, subset) -> bool:
    """Every component finite or affine, with at least one affine."""
    tags = [classify_component(c) for c in _components(system, tuple(subset))]
    return all(t.finite or t.affine for t in tags) and any(t.affine for t in tags)


def is_euclidean_cell(system: CoxeterSystem, subset) -> bool:
    """Is the 3-subset a Euclidean triangle (angle sum exactly pi)?"""
    subset = tuple(subset)
    if len(subset) != 3:
        raise CoxeterError("euclidean cell test needs exactly three generators")
    from fractions import Fraction

    total = Fraction(0)
    for a, b in combinations(subset, 2):
        m = system.m(a, b)
        if m == INF:
            raise InfiniteLabel(f"m({a},{b}) = inf")
        total += Fraction(1, m)
    return total == 1
