"""Spherical-subset poset, the labeled nerve, and right-angled coning.

The nerve has one face per nonempty spherical subset, so each edge {s,t}
carries the finite label m_st.  Coning adds one generator that commutes with
everything; on the nerve side that is the simplicial join with a point whose
new edges are all labeled 2, and the two constructions commute.
"""

from dataclasses import dataclass

from .growth import spherical_subsets
from .system import CoxeterMatrix, CoxeterSystem, build_system


@dataclass(frozen=True)
class SphericalPoset:
    """All spherical subsets ordered by inclusion; downward closed, with the
    empty set as bottom.  Tuples keep the ambient generator order."""

    elements: tuple

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, subset):
        want = frozenset(subset)
        return any(frozenset(t) == want for t in self.elements)

    def maximal(self):
        sets = [frozenset(t) for t in self.elements]
        return tuple(
            t
            for t, f in zip(self.elements, sets)
            if not any(f < g for g in sets)
        )


def spherical_poset(system: CoxeterSystem) -> SphericalPoset:
    return SphericalPoset(tuple(spherical_subsets(system)))


@dataclass(frozen=True)
class LabeledNerve:
    vertices: tuple  # ambient generator order
    faces: tuple  # nonempty, ambient order inside, sorted by (dim, names)
    edge_labels: tuple  # ((a, b), m) per 1-face, in face order

    @property
    def dim(self):
        return max((len(f) for f in self.faces), default=0) - 1

    def edges(self):
        return tuple(f for f in self.faces if len(f) == 2)

    def faces_of_dim(self, k):
        return tuple(f for f in self.faces if len(f) == k + 1)

    def label(self, a, b):
        want = frozenset((a, b))
        for pair, m in self.edge_labels:
            if frozenset(pair) == want:
                return m
        raise KeyError((a, b))


def build_nerve(system: CoxeterSystem) -> LabeledNerve:
    faces = tuple(t for t in spherical_subsets(system) if t)
    labels = tuple(
        (f, system.m(f[0], f[1])) for f in faces if len(f) == 2
    )
    return LabeledNerve(system.generators, faces, labels)


def _fresh_name(taken):
    if "c" not in taken:
        return "c"
    k = 0
    while f"c{k}" in taken:
        k += 1
    return f"c{k}"


def cone_system(system: CoxeterSystem, name: str | None = None) -> CoxeterSystem:
    """Add one generator commuting with every existing one (label 2)."""
    if name is None:
        name = _fresh_name(system.generators)
    elif name in system.generators:
        raise ValueError(f"generator {name!r} already present")
    old = system.matrix.rows
    n = system.rank
    rows = [list(old[i]) + [2] for i in range(n)]
    rows.append([2] * n + [1])
    return build_system(
        CoxeterMatrix.from_rows(system.generators + (name,), rows)
    )


def right_angled_cone(nerve: LabeledNerve, name: str | None = None) -> LabeledNerve:
    """Join with one new vertex; every new edge is labeled 2."""
    if name is None:
        name = _fresh_name(nerve.vertices)
    elif name in nerve.vertices:
        raise ValueError(f"vertex {name!r} already present")
    faces = list(nerve.faces) + [(name,)]
    faces += [f + (name,) for f in nerve.faces]
    faces.sort(key=lambda f: (len(f), f))
    labels = {frozenset(pair): m for pair, m in nerve.edge_labels}
    for v in nerve.vertices:
        labels[frozenset((v, name))] = 2
    edge_labels = tuple(
        (f, labels[frozenset(f)]) for f in faces if len(f) == 2
    )
    return LabeledNerve(nerve.vertices + (name,), tuple(faces), edge_labels)
