"""Coxeter matrices and systems.

A Coxeter matrix on a finite ordered generator set assigns to every pair of
generators an order m(s,t) in {1, 2, 3, ...} or infinity, with m(s,s) = 1,
m(s,t) = m(t,s) and m(s,t) >= 2 off the diagonal.  A system bundles the
matrix with the generator names and the partition of the generators into
conjugacy classes, computed by connectivity through odd-labelled edges:

>>> sys_ = build_system(CoxeterMatrix.from_rows(("s", "t"), [[1, 3], [3, 1]]))
>>> sys_.classes
(('s', 't'),)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INF = math.inf  # the infinite label; serialized as the token "inf"


class CoxeterError(ValueError):
    pass


class DiagonalNotOne(CoxeterError):
    pass


class Asymmetric(CoxeterError):
    pass


class OffDiagonalBelowTwo(CoxeterError):
    pass


class UnknownGenerator(CoxeterError):
    pass


def _check_label(value):
    if value == INF:
        return INF
    if isinstance(value, int) and not isinstance(value, bool) and value >= 1:
        return value
    raise CoxeterError(f"label must be an integer >= 1 or inf, got {value!r}")


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric order matrix, entries in {1, 2, 3, ...} or INF."""

    names: tuple
    rows: tuple  # tuple of tuples, rows[i][j] = m(names[i], names[j])

    @classmethod
    def from_rows(cls, names, rows):
        n = len(rows)
        names = tuple(names)
        if len(names) != n:
            raise CoxeterError("name count does not match matrix size")
        if len(set(names)) != n:
            raise CoxeterError("duplicate generator names")
        if any(len(r) != n for r in rows):
            raise CoxeterError("matrix is not square")
        rows = tuple(tuple(_check_label(v) for v in r) for r in rows)
        for i in range(n):
            if rows[i][i] != 1:
                raise DiagonalNotOne(f"m({names[i]},{names[i]}) = {rows[i][i]}")
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise Asymmetric(f"m({names[i]},{names[j]}) != m({names[j]},{names[i]})")
                if rows[i][j] != INF and rows[i][j] < 2:
                    raise OffDiagonalBelowTwo(f"m({names[i]},{names[j]}) = {rows[i][j]}")
        return cls(names, rows)

    @classmethod
    def from_pairs(cls, names, pairs, default):
        """Build from {frozenset({s,t}): label} with a default for unlisted pairs."""
        names = tuple(names)
        default = _check_label(default)
        index = {g: i for i, g in enumerate(names)}
        for pair in pairs:
            for g in pair:
                if g not in index:
                    raise UnknownGenerator(g)
        rows = [[1 if i == j else default for j in range(len(names))] for i in range(len(names))]
        for pair, label in pairs.items():
            a, b = tuple(pair)
            i, j = index[a], index[b]
            rows[i][j] = rows[j][i] = label
        return cls.from_rows(names, rows)

    @property
    def size(self):
        return len(self.names)

    def entry(self, a, b):
        """Label m(a, b); accepts names or indices."""
        if not isinstance(a, int):
            a = self.names.index(a)
        if not isinstance(b, int):
            b = self.names.index(b)
        return self.rows[a][b]


@dataclass(frozen=True)
class CoxeterSystem:
    """A validated Coxeter matrix together with its generator class partition.

    ``classes`` partitions the generators by connectivity through edges with
    an odd finite label; generators in one class are conjugate, and weight
    vectors are constant on classes.
    """

    matrix: CoxeterMatrix
    classes: tuple  # tuple of tuples of names, each sorted by generator order

    @property
    def generators(self):
        return self.matrix.names

    @property
    def rank(self):
        return self.matrix.size

    def index(self, name):
        try:
            return self.matrix.names.index(name)
        except ValueError:
            raise UnknownGenerator(name) from None

    def m(self, s, t):
        return self.matrix.rows[self.index(s)][self.index(t)]

    def class_of(self, name):
        for c in self.classes:
            if name in c:
                return c
        raise UnknownGenerator(name)

    def class_names(self):
        """One representative name per class, in generator order."""
        return tuple(c[0] for c in self.classes)

    def class_index(self, name):
        for k, c in enumerate(self.classes):
            if name in c:
                return k
        raise UnknownGenerator(name)

    def canonical_text(self):
        """Stable serialization used for hashing and cache keys.

        Generator names are sorted so that two presentations of the same
        labeled system share a key regardless of input order.
        """
        names = sorted(self.generators)
        lines = ["gen " + " ".join(names)]
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                m = self.m(a, b)
                token = "inf" if m == INF else str(m)
                lines.append(f"m {a} {b} {token}")
        return "\n".join(lines) + "\n"


def generator_classes(matrix: CoxeterMatrix):
    """Partition generator indices by paths of odd finite labels."""
    n = matrix.size
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            m = matrix.rows[i][j]
            if m != INF and m % 2 == 1:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    classes = sorted(groups.values())
    return tuple(tuple(matrix.names[i] for i in g) for g in classes)


def build_system(matrix: CoxeterMatrix) -> CoxeterSystem:
    return CoxeterSystem(matrix, generator_classes(matrix))


def irreducible_components(system: CoxeterSystem):
    """Connected components of the diagram (edges where m >= 3, including inf)."""
    n = system.rank
    rows = system.matrix.rows
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and i != j and rows[i][j] != 2:
                    seen[j] = True
                    stack.append(j)
        comps.append(tuple(system.generators[i] for i in sorted(comp)))
    return comps


def restrict(system: CoxeterSystem, subset) -> CoxeterSystem:
    """Subsystem on a subset of generators, in ambient generator order."""
    keep = []
    for g in subset:
        system.index(g)  # raises UnknownGenerator
    for g in system.generators:
        if g in set(subset):
            keep.append(system.index(g))
    rows = tuple(tuple(system.matrix.rows[i][j] for j in keep) for i in keep)
    names = tuple(system.generators[i] for i in keep)
    return build_system(CoxeterMatrix(names, rows))
