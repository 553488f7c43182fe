"""Integral homology by Smith normal form, regular cell-complex input,
sphere/disk necessary-condition checks, and virtual cohomological dimension
bounds.

Homology is computed two ways depending on the input: simplicial complexes
(given as face lists, closed downward automatically) use the alternating-sign
boundary on index-sorted vertex tuples; regular cell complexes use incidence
signs propagated upward so that every codimension-2 face is covered by exactly
two facets with cancelling signs.  Matrices are dense lists of Python ints;
everything is exact.
"""

from dataclasses import dataclass
from itertools import combinations

import networkx as nx

from .classify import classify_system
from .nerve import LabeledNerve, build_nerve
from .system import CoxeterSystem, restrict


class InvalidComplex(ValueError):
    pass


# ---------------------------------------------------------------------------
# Smith normal form.


def smith_diagonal(rows):
    """Diagonal of the Smith normal form of an integer matrix (list of row
    lists), as non-negative integers with each dividing the next."""
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return []
    nr, nc = len(m), len(m[0])
    diag = []
    top = 0
    while top < min(nr, nc):
        # pick the nonzero entry of smallest magnitude as pivot
        best = None
        for i in range(top, nr):
            for j in range(top, nc):
                v = m[i][j]
                if v and (best is None or abs(v) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        m[top], m[i] = m[i], m[top]
        for r in m:
            r[top], r[j] = r[j], r[top]
        p = m[top][top]
        dirty = False
        for i in range(top + 1, nr):
            q, rem = divmod(m[i][top], p)
            if q:
                for j in range(top, nc):
                    m[i][j] -= q * m[top][j]
            if rem:
                dirty = True
        for j in range(top + 1, nc):
            q, rem = divmod(m[top][j], p)
            if q:
                for i in range(top, nr):
                    m[i][j] -= q * m[i][top]
            if rem:
                dirty = True
        if dirty:
            continue  # smaller remainders appeared; pick a new pivot
        # pivot must divide the whole remaining block for the invariant chain
        offender = None
        for i in range(top + 1, nr):
            for j in range(top + 1, nc):
                if m[i][j] % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(top, nc):
                m[top][j] += m[offender][j]
            continue
        diag.append(abs(p))
        top += 1
    return diag


# ---------------------------------------------------------------------------
# Homology profiles.


@dataclass(frozen=True)
class HomologyProfile:
    """Free rank and invariant-factor torsion per degree, 0..dim."""

    ranks: tuple
    torsion: tuple  # per degree, a tuple of invariant factors > 1

    def __post_init__(self):
        assert len(self.ranks) == len(self.torsion)

    def euler(self):
        return sum((-1) ** i * r for i, r in enumerate(self.ranks))

    def normalized(self):
        ranks, tors = list(self.ranks), list(self.torsion)
        while ranks and ranks[-1] == 0 and not tors[-1]:
            ranks.pop()
            tors.pop()
        return HomologyProfile(tuple(ranks), tuple(tors))

    @classmethod
    def of_point(cls):
        return cls((1,), ((),))

    @classmethod
    def of_sphere(cls, n):
        if n < 0:
            return cls((), ())
        if n == 0:
            return cls((2,), ((),))
        ranks = (1,) + (0,) * (n - 1) + (1,)
        return cls(ranks, ((),) * (n + 1))

    def matches(self, other):
        return self.normalized() == other.normalized()


def _profile_from_boundaries(sizes, boundaries):
    """sizes[k] = number of k-cells; boundaries[k] = matrix of ∂_k for k >= 1
    (rows: (k-1)-cells, cols: k-cells)."""
    dim = len(sizes) - 1
    diags = {}
    for k, mat in boundaries.items():
        diags[k] = smith_diagonal(mat)
    ranks, torsion = [], []
    for k in range(dim + 1):
        rk = len(diags.get(k, []))
        rk1 = len(diags.get(k + 1, []))
        ranks.append(sizes[k] - rk - rk1)
        torsion.append(tuple(d for d in diags.get(k + 1, []) if d > 1))
    return HomologyProfile(tuple(ranks), tuple(torsion))


# ---------------------------------------------------------------------------
# Simplicial complexes, given as face lists (top faces suffice).


def _close_faces(faces):
    closed = set()
    for f in faces:
        f = tuple(f)
        if len(set(f)) != len(f):
            raise InvalidComplex(f"repeated vertex in face {f!r}")
        for k in range(1, len(f) + 1):
            closed.update(combinations(f, k))
    return closed


def _simplicial_boundaries(faces, vertices=None):
    """Index faces by dimension and build alternating-sign boundaries."""
    if vertices is None:
        vertices = sorted({v for f in faces for v in f})
    vindex = {v: i for i, v in enumerate(vertices)}
    canon = {tuple(sorted((vindex[v] for v in f))) for f in _close_faces(faces)}
    by_dim = {}
    for f in canon:
        by_dim.setdefault(len(f) - 1, []).append(f)
    if not by_dim:
        return [], {}
    dim = max(by_dim)
    levels = [sorted(by_dim.get(k, [])) for k in range(dim + 1)]
    index = [{f: i for i, f in enumerate(level)} for level in levels]
    boundaries = {}
    for k in range(1, dim + 1):
        rows = [[0] * len(levels[k]) for _ in levels[k - 1]]
        for col, f in enumerate(levels[k]):
            for drop in range(len(f)):
                sub = f[:drop] + f[drop + 1:]
                rows[index[k - 1][sub]][col] = (-1) ** drop
        boundaries[k] = rows
    return [len(level) for level in levels], boundaries


def simplicial_homology(faces, vertices=None) -> HomologyProfile:
    sizes, boundaries = _simplicial_boundaries(faces, vertices)
    if not sizes:
        return HomologyProfile((), ())
    return _profile_from_boundaries(sizes, boundaries)


# ---------------------------------------------------------------------------
# Regular cell complexes as face posets.


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    facets: tuple  # ids of cells one dimension down


@dataclass(frozen=True)
class CellComplexInput:
    """Face poset of a regular cell complex.  Validation checks the grading
    and that the boundary of every k-cell has the homology of S^(k-1)."""

    cells: tuple

    def __post_init__(self):
        ids = [c.id for c in self.cells]
        if len(set(ids)) != len(ids):
            raise InvalidComplex("duplicate cell ids")
        byid = {c.id: c for c in self.cells}
        for c in self.cells:
            if c.dim < 0:
                raise InvalidComplex(f"cell {c.id}: negative dimension")
            if c.dim == 0 and c.facets:
                raise InvalidComplex(f"vertex {c.id} has facets")
            if c.dim >= 1 and not c.facets:
                raise InvalidComplex(f"cell {c.id} has no facets")
            if len(set(c.facets)) != len(c.facets):
                raise InvalidComplex(f"cell {c.id}: repeated facet")
            if c.dim == 1 and len(c.facets) != 2:
                raise InvalidComplex(f"edge {c.id} needs two endpoints")
            for f in c.facets:
                if f not in byid:
                    raise InvalidComplex(f"cell {c.id}: unknown facet {f}")
                if byid[f].dim != c.dim - 1:
                    raise InvalidComplex(f"cell {c.id}: facet {f} has wrong dimension")

    @property
    def dim(self):
        return max((c.dim for c in self.cells), default=-1)

    def by_id(self):
        return {c.id: c for c in self.cells}

    def below(self):
        """Strict down-sets, by id."""
        byid = self.by_id()
        memo = {}

        def walk(cid):
            if cid not in memo:
                acc = set()
                for f in byid[cid].facets:
                    acc.add(f)
                    acc |= walk(f)
                memo[cid] = acc
            return memo[cid]

        for c in self.cells:
            walk(c.id)
        return memo

    def restricted(self, ids):
        keep = set(ids)
        return CellComplexInput(
            tuple(c for c in self.cells if c.id in keep)
        )

    @classmethod
    def from_simplicial(cls, faces):
        closed = sorted(
            {tuple(sorted(f)) for f in _close_faces(faces)},
            key=lambda f: (len(f), f),
        )
        cells = []
        for f in closed:
            facets = tuple(
                "|".join(map(str, f[:k] + f[k + 1:])) for k in range(len(f))
            )
            cells.append(
                Cell("|".join(map(str, f)), len(f) - 1, facets if len(f) > 1 else ())
            )
        return cls(tuple(cells))

    def to_doc(self):
        return {
            "cells": [
                {"id": c.id, "dim": c.dim, "facets": list(c.facets)}
                for c in self.cells
            ]
        }

    @classmethod
    def from_doc(cls, doc):
        try:
            cells = tuple(
                Cell(str(c["id"]), int(c["dim"]), tuple(str(f) for f in c["facets"]))
                for c in doc["cells"]
            )
        except (KeyError, TypeError) as exc:
            raise InvalidComplex(f"malformed cell document: {exc}") from exc
        cpx = cls(cells)
        validate_cell_boundaries(cpx)
        return cpx


def _orient(cpx: CellComplexInput):
    """Incidence signs sign[(cell, facet)] making every codim-2 diamond
    cancel.  Within each cell, propagation starts at its lexicographically
    least facet with +1."""
    byid = cpx.by_id()
    levels = {}
    for c in cpx.cells:
        levels.setdefault(c.dim, []).append(c)
    for level in levels.values():
        level.sort(key=lambda c: c.id)
    sign = {}
    for k in sorted(levels):
        if k == 0:
            continue
        for c in levels[k]:
            facets = sorted(c.facets)
            if k == 1:
                a, b = facets
                sign[(c.id, a)] = -1
                sign[(c.id, b)] = 1
                continue
            # group the facets by shared codimension-2 faces
            middles = {}
            for f in facets:
                for t in byid[f].facets:
                    middles.setdefault(t, []).append(f)
            for t, pair in middles.items():
                if len(pair) != 2:
                    raise InvalidComplex(
                        f"cell {c.id}: face {t} is under {len(pair)} facets, "
                        "expected exactly 2"
                    )
            adj = {}
            for t, (a, b) in middles.items():
                adj.setdefault(a, []).append((b, t))
                adj.setdefault(b, []).append((a, t))
            eps = {}
            for seed in facets:
                if seed in eps:
                    continue
                eps[seed] = 1  # one free choice per facet-graph component
                queue = [seed]
                while queue:
                    f = queue.pop()
                    for g, t in adj.get(f, ()):
                        forced = -eps[f] * sign[(f, t)] * sign[(g, t)]
                        if g in eps:
                            if eps[g] != forced:
                                raise InvalidComplex(
                                    f"cell {c.id}: boundary is not orientable"
                                )
                        else:
                            eps[g] = forced
                            queue.append(g)
            for f in facets:
                sign[(c.id, f)] = eps[f]
    return levels, sign


def _cw_boundaries(cpx: CellComplexInput):
    levels, sign = _orient(cpx)
    dim = cpx.dim
    names = [
        [c.id for c in levels.get(k, [])] for k in range(dim + 1)
    ]
    index = [{cid: i for i, cid in enumerate(level)} for level in names]
    boundaries = {}
    for k in range(1, dim + 1):
        rows = [[0] * len(names[k]) for _ in names[k - 1]]
        for col, cid in enumerate(names[k]):
            for f in cpx.by_id()[cid].facets:
                rows[index[k - 1][f]][col] = sign[(cid, f)]
        boundaries[k] = rows
    # the diamond construction must square to zero
    for k in range(2, dim + 1):
        a, b = boundaries[k - 1], boundaries[k]
        for i in range(len(a)):
            for j in range(len(b[0])):
                acc = sum(a[i][x] * b[x][j] for x in range(len(b)))
                assert acc == 0, "boundary of boundary is nonzero"
    sizes = [len(level) for level in names]
    return sizes, boundaries


def cw_homology(cpx: CellComplexInput) -> HomologyProfile:
    if not cpx.cells:
        return HomologyProfile((), ())
    sizes, boundaries = _cw_boundaries(cpx)
    return _profile_from_boundaries(sizes, boundaries)


def validate_cell_boundaries(cpx: CellComplexInput):
    """Check that every k-cell's boundary subcomplex is a homology
    S^(k-1); raises InvalidComplex otherwise."""
    below = cpx.below()
    for c in cpx.cells:
        if c.dim == 0:
            continue
        sub = cpx.restricted(below[c.id])
        profile = cw_homology(sub)
        if not profile.matches(HomologyProfile.of_sphere(c.dim - 1)):
            raise InvalidComplex(
                f"cell {c.id}: boundary is not a homology {c.dim - 1}-sphere"
            )


def homology(obj) -> HomologyProfile:
    """Integral homology of a simplicial complex (face list or LabeledNerve)
    or a regular cell complex (CellComplexInput)."""
    if isinstance(obj, CellComplexInput):
        return cw_homology(obj)
    if isinstance(obj, LabeledNerve):
        return simplicial_homology(obj.faces, obj.vertices)
    return simplicial_homology(tuple(obj))


# ---------------------------------------------------------------------------
# Sphere / disk necessary conditions.


@dataclass(frozen=True)
class CheckResult:
    status: str  # "Verified" | "Failed"
    reason: str | None = None

    def __bool__(self):
        return self.status == "Verified"

    @classmethod
    def ok(cls):
        return cls("Verified")

    @classmethod
    def failed(cls, reason):
        return cls("Failed", reason)


def _order_complex_faces(elements, lt):
    """All chains of a finite strict partial order, as tuples.  ``elements``
    must be listed in a linear extension of the order, so every chain reads
    left to right."""
    faces = []

    def grow(chain, rest):
        for i, e in enumerate(rest):
            new = chain + (e,)
            faces.append(new)
            grow(new, [r for r in rest[i + 1:] if lt(e, r)])

    grow((), list(elements))
    return faces


def _link_complex(cpx: CellComplexInput, cid, below):
    """Order complex of the cells strictly above cid."""
    byid = cpx.by_id()
    upper = sorted(
        (c.id for c in cpx.cells if cid in below[c.id]),
        key=lambda i: (byid[i].dim, i),
    )

    def lt(a, b):
        return a in below[b]

    return _order_complex_faces(upper, lt)


def ghs_check(cpx: CellComplexInput, n: int) -> CheckResult:
    """Necessary conditions for a generalized homology n-sphere: the global
    homology of an n-sphere, and every cell link the homology of a sphere of
    complementary dimension."""
    if cpx.dim != n:
        return CheckResult.failed(f"dimension {cpx.dim} != {n}")
    validate_cell_boundaries(cpx)
    if not cw_homology(cpx).matches(HomologyProfile.of_sphere(n)):
        return CheckResult.failed("global homology")
    below = cpx.below()
    for c in cpx.cells:
        want = HomologyProfile.of_sphere(n - c.dim - 1)
        got = simplicial_homology(_link_complex(cpx, c.id, below))
        if not got.matches(want):
            return CheckResult.failed(f"link of cell {c.id}")
    return CheckResult.ok()


def disk_check(cpx: CellComplexInput, n: int) -> CheckResult:
    """Necessary conditions for a triangulated n-disk: contractible global
    homology and every vertex link a homology sphere or disk."""
    if cpx.dim != n:
        return CheckResult.failed(f"dimension {cpx.dim} != {n}")
    validate_cell_boundaries(cpx)
    if not cw_homology(cpx).matches(HomologyProfile.of_point()):
        return CheckResult.failed("global homology")
    below = cpx.below()
    sphere = HomologyProfile.of_sphere(n - 1)
    point = HomologyProfile.of_point()
    for c in cpx.cells:
        if c.dim != 0:
            continue
        got = simplicial_homology(_link_complex(cpx, c.id, below))
        if not (got.matches(sphere) or got.matches(point)):
            return CheckResult.failed(f"link of vertex {c.id}")
    return CheckResult.ok()


def is_planar_graph(nerve: LabeledNerve) -> bool:
    """True when the nerve is 1-dimensional and its graph is planar."""
    if nerve.dim > 1:
        return False
    g = nx.Graph()
    g.add_nodes_from(nerve.vertices)
    g.add_edges_from(nerve.edges())
    flag, _ = nx.check_planarity(g)
    return flag


# ---------------------------------------------------------------------------
# Virtual cohomological dimension bounds.


@dataclass(frozen=True)
class VcdBounds:
    lo: int
    hi: int

    @property
    def exact(self):
        return self.lo == self.hi

    def as_pair(self):
        return (self.lo, self.hi)


def _known_exact_vcd(tags):
    """Exact vcd when recognizable: finite groups are 0; one affine or
    quasi-Lanner component (finite factors allowed) realizes its dimension."""
    infinite = [(comp, tag) for comp, tag in tags.items() if not tag.finite]
    if not infinite:
        return 0
    if len(infinite) > 1:
        return None
    comp, tag = infinite[0]
    if tag.kind == "affine":
        return len(comp) - 1
    if tag.kind == "quasilanner":
        return tag.dim - 1
    return None


def vcd_bounds(system: CoxeterSystem, disk_dim: int | None = None) -> VcdBounds:
    """Interval for the virtual cohomological dimension.

    The upper bound is dim(nerve)+1, tightened to disk_dim when the caller
    asserts the nerve is a triangulated disk of that dimension.  The lower
    bound scans subsystems whose vcd is known exactly."""
    tags = classify_system(system)
    if all(t.finite for t in tags.values()):
        return VcdBounds(0, 0)
    nerve = build_nerve(system)
    hi = nerve.dim + 1
    if disk_dim is not None:
        if disk_dim != nerve.dim:
            raise ValueError("asserted disk dimension does not match the nerve")
        hi = min(hi, disk_dim)
    lo = 0
    gens = system.generators
    for size in range(1, len(gens) + 1):
        for subset in combinations(gens, size):
            sub = restrict(system, subset)
            known = _known_exact_vcd(classify_system(sub))
            if known is not None and known > lo:
                lo = known
    assert lo <= hi, "known exact vcd exceeds the nerve bound"
    return VcdBounds(lo, hi)
