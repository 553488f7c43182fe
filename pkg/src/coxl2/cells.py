"""Finite balls of the coset cellulation, the weighted cell measure, weighted
boundary matrices, and chain-level identity verification.

Cells are cosets w W_T for spherical T, carried by their unique shortest
representative; a cell belongs to the radius-L ball when that representative
has length at most L.  Incidence signs come from the lexicographic orientation
convention: an edge's boundary is (lex-larger endpoint) - (lex-smaller
endpoint) on canonical words, and higher cells propagate signs from their
lex-least facet so that every codimension-2 diamond cancels.  Faces of a cell
near the ball frontier may fall outside the ball; identity checks that need a
complete neighborhood are restricted to interior cells.
"""

from dataclasses import dataclass
from fractions import Fraction

from .growth import WeightVector, spherical_subsets, word_exponents
from .system import CoxeterSystem, restrict
from .words import DEFAULT_CAP, NormalForm, engine_for, enumerate_ball


class IdentityViolation(RuntimeError):
    def __init__(self, which, where):
        super().__init__(f"{which} fails at {where}")
        self.which = which
        self.where = where


@dataclass(frozen=True)
class BallCell:
    rep: NormalForm  # shortest coset representative, canonical word
    ctype: tuple  # the spherical subset T, ambient generator order

    @property
    def dim(self):
        return len(self.ctype)


@dataclass
class CellBall:
    system: CoxeterSystem
    radius: int
    cells: tuple  # BallCell, sorted by (dim, type, representative)
    facets: tuple  # per cell: ((face position, sign), ...) within the ball
    interior: frozenset  # positions whose closure and cofaces are all present
    counts: tuple  # cells per dimension

    @property
    def dim(self):
        return len(self.counts) - 1

    def euler(self):
        return sum((-1) ** d * n for d, n in enumerate(self.counts))

    def positions_of_dim(self, k):
        return tuple(
            i for i, c in enumerate(self.cells) if c.dim == k
        )

    def boundary_matrix(self, i, q: WeightVector | None = None):
        """Matrix of the i-th boundary map (rows: (i-1)-cells, columns:
        i-cells).  Plain incidence signs for q=None; with a weight vector the
        entry at (face, cell) is sign * measure(cell) / measure(face), the
        scaling that makes the map the adjoint of the ordinary coboundary for
        the measure-weighted inner product."""
        rows_idx = self.positions_of_dim(i - 1)
        cols_idx = self.positions_of_dim(i)
        row_of = {p: r for r, p in enumerate(rows_idx)}
        mat = [[Fraction(0)] * len(cols_idx) for _ in rows_idx]
        for c, pos in enumerate(cols_idx):
            scale = (
                Fraction(1)
                if q is None
                else cell_measure(self.system, self.cells[pos], q)
            )
            for face_pos, sign in self.facets[pos]:
                val = Fraction(sign)
                if q is not None:
                    val = (
                        val
                        * scale
                        / cell_measure(self.system, self.cells[face_pos], q)
                    )
                mat[row_of[face_pos]][c] = val
        return mat


def _type_key(system, tset):
    return tuple(system.index(g) for g in tset)


class _Builder:
    def __init__(self, system):
        self.system = system
        self.eng = engine_for(system)
        self._subgroup = {}
        self._signs = {}
        self._sph = None

    def to_idx(self, word):
        return tuple(self.system.index(g) for g in word)

    def to_names(self, word):
        return tuple(self.system.generators[i] for i in word)

    def spherical(self):
        if self._sph is None:
            self._sph = tuple(spherical_subsets(self.system))
        return self._sph

    def subgroup_words(self, tset):
        """Canonical ambient-index words of every element of W_T."""
        if tset not in self._subgroup:
            sub = restrict(self.system, tset)
            ball = enumerate_ball(sub, 64, cap=10**6, engine="words", want_elements=True)
            words = [
                self.to_idx(nf.word) for sphere in ball.elements for nf in sphere
            ]
            self._subgroup[tset] = tuple(words)
        return self._subgroup[tset]

    def coset_faces(self, rep_idx, tset):
        """Facets of the cell (rep, T): for each T' = T minus a generator,
        the distinct subcoset representatives inside rep·W_T."""
        coset = {self.eng.canonical(rep_idx + x) for x in self.subgroup_words(tset)}
        out = {}
        for drop in tset:
            tsub = tuple(g for g in tset if g != drop)
            tidx = set(self.to_idx(tsub))
            reps = {self.eng.coset_minimal(w, tidx) for w in coset}
            for r in reps:
                out[(r, tsub)] = None
        return tuple(out)

    def signs(self, rep_idx, tset):
        """Facet signs of one cell, by the lexicographic convention."""
        key = (rep_idx, tset)
        if key in self._signs:
            return self._signs[key]
        k = len(tset)
        assert k >= 1
        if k == 1:
            far = self.eng.mult(rep_idx, self.system.index(tset[0]))
            a, b = sorted((rep_idx, far), key=lambda w: (len(w), w))
            result = {(a, ()): -1, (b, ()): 1}
            self._signs[key] = result
            return result
        facets = sorted(
            self.coset_faces(rep_idx, tset),
            key=lambda f: (_type_key(self.system, f[1]), (len(f[0]), f[0])),
        )
        middles = {}
        facet_faces = {}
        for f in facets:
            sub_signs = self.signs(*f)
            facet_faces[f] = sub_signs
            for tau in sub_signs:
                middles.setdefault(tau, []).append(f)
        for tau, pair in middles.items():
            assert len(pair) == 2, "coset interval is not a diamond"
        adj = {}
        for tau, (a, b) in middles.items():
            adj.setdefault(a, []).append((b, tau))
            adj.setdefault(b, []).append((a, tau))
        eps = {facets[0]: 1}
        queue = [facets[0]]
        while queue:
            f = queue.pop()
            for g, tau in adj[f]:
                forced = -eps[f] * facet_faces[f][tau] * facet_faces[g][tau]
                if g in eps:
                    assert eps[g] == forced, "cell boundary failed to orient"
                else:
                    eps[g] = forced
                    queue.append(g)
        assert len(eps) == len(facets), "cell boundary is disconnected"
        self._signs[key] = eps
        return eps


def coxeter_cell_ball(system: CoxeterSystem, L: int, cap=DEFAULT_CAP) -> CellBall:
    """All cells w W_T (T spherical) whose shortest representative has length
    at most L, with signed incidence and interiority flags."""
    b = _Builder(system)
    census = enumerate_ball(system, L, cap=cap, engine="words", want_elements=True)
    elements = [b.to_idx(nf.word) for sphere in census.elements for nf in sphere]
    descents = {w: b.eng.right_descents(w) for w in elements}

    cells = []
    for tset in b.spherical():
        tidx = set(b.to_idx(tset))
        for w in elements:
            if not (descents[w] & tidx):
                cells.append((w, tset))
    cells.sort(
        key=lambda c: (
            len(c[1]),
            _type_key(system, c[1]),
            (len(c[0]), c[0]),
        )
    )
    position = {c: i for i, c in enumerate(cells)}

    upsets = {}
    for tset in b.spherical():
        ups = tuple(
            u
            for u in b.spherical()
            if len(u) == len(tset) + 1 and set(tset) <= set(u)
        )
        upsets[tset] = ups

    facets = []
    closure_ok = {}
    interior = set()
    for pos, (w, tset) in enumerate(cells):
        if not tset:
            facets.append(())
            closure_ok[pos] = True
        else:
            signs = b.signs(w, tset)
            present = []
            complete = True
            for (r, tsub), sign in signs.items():
                fpos = position.get((r, tsub))
                if fpos is None:
                    complete = False
                else:
                    present.append((fpos, sign))
            facets.append(tuple(sorted(present)))
            closure_ok[pos] = complete and all(
                closure_ok[fpos] for fpos, _ in present
            )
        cofaces_present = all(
            len(b.eng.coset_minimal(w, set(b.to_idx(u)))) <= L
            for u in upsets[tset]
        )
        if closure_ok[pos] and cofaces_present:
            interior.add(pos)

    dim = max((len(t) for _, t in cells), default=0)
    counts = [0] * (dim + 1)
    for _, tset in cells:
        counts[len(tset)] += 1

    ball_cells = tuple(
        BallCell(NormalForm(b.to_names(w)), tset) for w, tset in cells
    )
    return CellBall(
        system,
        L,
        ball_cells,
        tuple(facets),
        frozenset(interior),
        tuple(counts),
    )


def cell_measure(system: CoxeterSystem, cell: BallCell, q: WeightVector) -> Fraction:
    """μ_q of a cell: the weight monomial of its shortest representative."""
    exps = word_exponents(system, cell.rep.word)
    out = Fraction(1)
    for e, v in zip(exps, q.values):
        out *= Fraction(v) ** e
    return out


@dataclass(frozen=True)
class WeightedBoundary:
    q: WeightVector
    matrices: tuple  # matrices[i-1] = weighted boundary in degree i

    def matrix(self, i):
        return self.matrices[i - 1]


def weighted_boundary(ball: CellBall, q: WeightVector) -> WeightedBoundary:
    mats = tuple(
        ball.boundary_matrix(i, q) for i in range(1, ball.dim + 1)
    )
    return WeightedBoundary(q, mats)


@dataclass(frozen=True)
class ChainIdentityReport:
    radius: int
    counts: tuple
    interior_counts: tuple
    checks: tuple  # names of the identities that were verified


def verify_chain_identities(ball: CellBall, q: WeightVector) -> ChainIdentityReport:
    """Exact checks of the weighted chain identities on the ball:

    (a) the weighted boundary squares to zero;
    (b) conjugating the weighted boundary by the diagonal measure matrices
        gives back the ordinary boundary, entrywise;
    (c) the weighted boundary is adjoint to the ordinary coboundary under
        the measure-weighted inner product, entrywise.

    (b) and (c) are checked over the whole ball; off the incidence support
    every matrix involved carries a structural zero, so the nonzero entries
    decide them.  (a) needs complete cell closures and is therefore skipped
    on columns outside the interior: a frontier cell may be missing the
    second facet of a cancelling pair.
    """
    system = ball.system
    measures = [cell_measure(system, c, q) for c in ball.cells]
    plain = [ball.boundary_matrix(i) for i in range(1, ball.dim + 1)]
    weighted = [ball.boundary_matrix(i, q) for i in range(1, ball.dim + 1)]
    # index of a cell position within its own dimension level
    level_index = {}
    for k in range(ball.dim + 1):
        for j, pos in enumerate(ball.positions_of_dim(k)):
            level_index[pos] = j

    # (a) column by column; only positions incident to the column's facets
    # can contribute, so the sum runs over the facet lists, not the matrix
    for pos in sorted(ball.interior):
        cell = ball.cells[pos]
        if cell.dim < 2:
            continue
        col = level_index[pos]
        acc = {}
        for mid_pos, _ in ball.facets[pos]:
            w1 = weighted[cell.dim - 1][level_index[mid_pos]][col]
            for tau_pos, _ in ball.facets[mid_pos]:
                w2 = weighted[cell.dim - 2][level_index[tau_pos]][level_index[mid_pos]]
                acc[tau_pos] = acc.get(tau_pos, Fraction(0)) + w2 * w1
        if any(acc.values()):
            raise IdentityViolation("boundary_squares_to_zero", cell)

    for pos, cell in enumerate(ball.cells):
        col = level_index[pos]
        for face_pos, _ in ball.facets[pos]:
            a = plain[cell.dim - 1][level_index[face_pos]][col]
            wq = weighted[cell.dim - 1][level_index[face_pos]][col]
            if a * measures[pos] != measures[face_pos] * wq:
                raise IdentityViolation("conjugation", cell)
            # adjointness, as cross-multiplied entries of the transposes
            if wq * measures[face_pos] != measures[pos] * a:
                raise IdentityViolation("adjointness", cell)

    interior_counts = [0] * (ball.dim + 1)
    for pos in ball.interior:
        interior_counts[ball.cells[pos].dim] += 1
    return ChainIdentityReport(
        ball.radius,
        ball.counts,
        tuple(interior_counts),
        ("boundary_squares_to_zero", "conjugation", "adjointness"),
    )


def ball_to_doc(ball: CellBall) -> dict:
    """JSON-ready poset view of the ball: cells with representative word,
    type, dimension, signed facet list (by cell index), interiority."""
    return {
        "radius": ball.radius,
        "generators": list(ball.system.generators),
        "counts": list(ball.counts),
        "cells": [
            {
                "rep": list(c.rep.word),
                "type": list(c.ctype),
                "dim": c.dim,
                "facets": [[p, s] for p, s in ball.facets[i]],
                "interior": i in ball.interior,
            }
            for i, c in enumerate(ball.cells)
        ],
    }


def matrix_triplets(mat) -> str:
    """Sparse text form of a matrix: a "rows cols" header line, then one
    "row col value" line per nonzero entry, values as exact rationals."""
    rows = len(mat)
    cols = len(mat[0]) if mat else 0
    lines = [f"{rows} {cols}"]
    for r, row in enumerate(mat):
        for c, v in enumerate(row):
            if v:
                lines.append(f"{r} {c} {v}")
    return "\n".join(lines) + "\n"
