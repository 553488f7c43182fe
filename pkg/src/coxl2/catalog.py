"""Embedded catalogs of irreducible finite and affine diagrams.

The catalogs are generated by the family builders below and shipped as a
data file (data/catalog.cox) in the diagram text format, so that tests can
diff the file against the generators and humans can read what the
classifier believes.  Families are emitted through rank 10, the working
scale of the package.
"""

from __future__ import annotations

from importlib import resources

from .diagrams import parse_diagram
from .system import INF, CoxeterMatrix, CoxeterSystem, build_system

CATALOG_VERSION = 1
MAX_RANK = 10


def _names(k):
    return tuple(f"s{i + 1}" for i in range(k))


def _path(labels):
    """Path diagram with the given consecutive edge labels."""
    names = _names(len(labels) + 1)
    pairs = {(names[i], names[i + 1]): m for i, m in enumerate(labels)}
    return build_system(CoxeterMatrix.from_pairs(names, pairs, default=2))


def _cycle(k, label=3):
    names = _names(k)
    pairs = {(names[i], names[(i + 1) % k]): label for i in range(k)}
    return build_system(CoxeterMatrix.from_pairs(names, pairs, default=2))


def _tree(*legs):
    """Star of paths: a center vertex with legs of the given edge counts,
    all labels 3."""
    names = ["c"]
    pairs = {}
    for li, leg in enumerate(legs):
        prev = "c"
        for step in range(leg):
            v = f"l{li + 1}_{step + 1}"
            names.append(v)
            pairs[(prev, v)] = 3
            prev = v
    return build_system(CoxeterMatrix.from_pairs(tuple(names), pairs, default=2))


def _single():
    return build_system(CoxeterMatrix.from_pairs(("s1",), {}, default=2))


def finite_entries(max_rank=MAX_RANK):
    """(name, system) for the irreducible finite catalog through max_rank."""
    out = [("A1", _single())]
    for n in range(2, max_rank + 1):
        out.append((f"A{n}", _path([3] * (n - 1))))
    for n in range(2, max_rank + 1):
        out.append((f"B{n}", _path([4] + [3] * (n - 2))))
    for n in range(4, max_rank + 1):
        out.append((f"D{n}", _tree(1, 1, n - 3)))
    out.append(("E6", _tree(1, 2, 2)))
    out.append(("E7", _tree(1, 2, 3)))
    out.append(("E8", _tree(1, 2, 4)))
    out.append(("F4", _path([3, 4, 3])))
    out.append(("H3", _path([5, 3])))
    out.append(("H4", _path([5, 3, 3])))
    return [(n, s) for n, s in out if s.rank <= max_rank]


def affine_entries(max_rank=MAX_RANK):
    """(name, system) for the irreducible affine catalog through max_rank.

    An affine diagram of type X~n has n+1 vertices.  The infinite dihedral
    group is included as A~1; it is the rank-2 Euclidean reflection group.
    """
    inf_pair = build_system(
        CoxeterMatrix.from_pairs(("s1", "s2"), {("s1", "s2"): INF}, default=2)
    )
    out = [("A~1", inf_pair)]
    for n in range(2, max_rank):
        out.append((f"A~{n}", _cycle(n + 1)))
    for n in range(3, max_rank):
        out.append((f"B~{n}", _btilde(n)))
    for n in range(2, max_rank):
        out.append((f"C~{n}", _path([4] + [3] * (n - 2) + [4])))
    for n in range(4, max_rank):
        out.append((f"D~{n}", _dtilde(n)))
    out.append(("E~6", _tree(2, 2, 2)))
    out.append(("E~7", _tree(1, 3, 3)))
    out.append(("E~8", _tree(1, 2, 5)))
    out.append(("F~4", _path([3, 3, 4, 3])))
    out.append(("G~2", _path([6, 3])))
    return [(n, s) for n, s in out if s.rank <= max_rank]


def _btilde(n):
    """B~n: a two-pronged fork at one end, a 4-labelled edge at the other.
    n+1 vertices."""
    names = [f"p{i}" for i in range(1, n - 1)]  # n-2 path vertices
    pairs = {}
    for i in range(len(names) - 1):
        pairs[(names[i], names[i + 1])] = 3
    for v in ("f1", "f2"):
        pairs[(v, names[0])] = 3
    pairs[(names[-1], "t")] = 4
    allnames = tuple(["f1", "f2"] + names + ["t"])
    return build_system(CoxeterMatrix.from_pairs(allnames, pairs, default=2))


def _dtilde(n):
    """D~n: a path of n-3 edges with two-pronged forks at both ends."""
    names = [f"p{i}" for i in range(1, n - 2)]  # n-3 path vertices
    pairs = {}
    for i in range(len(names) - 1):
        pairs[(names[i], names[i + 1])] = 3
    for v in ("f1", "f2"):
        pairs[(v, names[0])] = 3
    for v in ("f3", "f4"):
        pairs[(v, names[-1])] = 3
    allnames = tuple(["f1", "f2"] + names + ["f3", "f4"])
    return build_system(CoxeterMatrix.from_pairs(allnames, pairs, default=2))


def generate_catalog_text():
    lines = [f"version {CATALOG_VERSION}", ""]
    for kind, entries in (("finite", finite_entries()), ("affine", affine_entries())):
        for name, sys_ in entries:
            lines.append(f"name {name} {kind}")
            lines.append("default 2")
            lines.append("gen " + " ".join(sys_.generators))
            for i in range(sys_.rank):
                for j in range(i + 1, sys_.rank):
                    m = sys_.matrix.rows[i][j]
                    if m != 2:
                        a, b = sys_.generators[i], sys_.generators[j]
                        lines.append(f"m {a} {b} " + ("inf" if m == INF else str(m)))
            lines.append("")
    return "\n".join(lines)


def load_catalog():
    """Parse the shipped data file into (name, kind, system) rows."""
    text = resources.files("coxl2").joinpath("data/catalog.cox").read_text("utf-8")
    rows = []
    block = []
    header = None

    def flush():
        if header is not None:
            name, kind = header
            doc = parse_diagram("\n".join(block))
            rows.append((name, kind, doc.system()))

    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("version"):
            continue
        if stripped.startswith("name "):
            flush()
            _, name, kind = stripped.split()
            header = (name, kind)
            block = []
        elif stripped:
            block.append(stripped)
    flush()
    return rows
