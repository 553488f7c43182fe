"""Rule-based deduction of weighted ell-two Betti numbers.

Each rule encodes one vanishing or concentration statement about the weighted
ell-two homology of the spherical-coset complex of a Coxeter system.  A rule
fires only when its hypotheses hold for the given system and weight regime;
what was checked, and whether it was verified mechanically or supplied by the
caller, is recorded in a replayable trail.  Hypotheses that exact computation
cannot settle (full sphere or disk recognition, general cohomological
dimension) are tri-state: Verified here means the decidable necessary
conditions passed, UserAsserted means the caller vouched for the rest.

Values are exact: Fractions for concrete weight vectors, one-variable
rational functions for the symbolic rays q <= 1 and q >= 1.  Conflicting
determinations never repair themselves silently; they raise
InconsistencyError, which signals a bug or a false assertion.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import networkx as nx

from .classify import (
    InfiniteLabel,
    classify_system,
    is_affine_type,
    is_euclidean_cell,
    is_spherical,
)
from .growth import (
    WeightVector,
    equal_parameter,
    euler_characteristic,
    growth_series,
    nvars,
)
from .homology import (
    CellComplexInput,
    disk_check,
    ghs_check,
    is_planar_graph,
    vcd_bounds,
)
from .nerve import build_nerve
from .poly import MultiPoly, PoleAtQ, RationalFn
from .region import UnsupportedWeightShape, region_membership
from .system import INF, CoxeterError, CoxeterSystem, restrict

VERIFIED = "Verified"
ASSERTED = "UserAsserted"

REGIME_IN = "in-region"
REGIME_LE = "le-one"
REGIME_GE = "ge-one"
REGIME_ONE = "one"
REGIME_MIXED = "mixed"


class InconsistencyError(CoxeterError):
    """Two determinations disagree, or a completion went negative."""


class InputNotDetermined(CoxeterError):
    """The cone scaling needs a fully determined report."""


@dataclass(frozen=True)
class SymbolicRay:
    """Equal weights q = t on one side of 1, with t kept symbolic."""

    side: str  # "le" or "ge"

    def __post_init__(self):
        if self.side not in ("le", "ge"):
            raise UnsupportedWeightShape(f"unknown symbolic side {self.side!r}")

    @classmethod
    def at_most_one(cls):
        return cls("le")

    @classmethod
    def at_least_one(cls):
        return cls("ge")

    def __str__(self):
        return "q<=1" if self.side == "le" else "q>=1"


@dataclass(frozen=True)
class DegreeStatus:
    kind: str  # "zero" | "value" | "symbolic" | "unknown"
    value: object = None  # Fraction | RationalFn | None

    @property
    def determined(self):
        return self.kind != "unknown"

    def scaled(self, factor: Fraction):
        if self.kind == "value":
            return value_status(self.value * factor)
        if self.kind == "symbolic":
            return symbolic_status(self.value * factor)
        return self

    def __str__(self):
        if self.kind == "zero":
            return "0"
        if self.kind == "unknown":
            return "?"
        return str(self.value)


ZERO = DegreeStatus("zero")
UNKNOWN = DegreeStatus("unknown")

# negative-value probes for symbolic statuses, per side of 1
_SAMPLES = {
    "le": (Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 10)),
    "ge": (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(7)),
}


def value_status(x, where: str = "") -> DegreeStatus:
    x = Fraction(x)
    if x < 0:
        raise InconsistencyError(f"negative Betti value {x}" + (f" ({where})" if where else ""))
    if x == 0:
        return ZERO
    return DegreeStatus("value", x)


def symbolic_status(f: RationalFn, side: str | None = None, where: str = "") -> DegreeStatus:
    if f.is_zero:
        return ZERO
    for t in _SAMPLES.get(side, ()):
        try:
            v = f.eval((t,))
        except PoleAtQ:
            continue
        if v < 0:
            raise InconsistencyError(
                f"symbolic Betti value goes negative at q={t}"
                + (f" ({where})" if where else "")
            )
    return DegreeStatus("symbolic", f)


@dataclass(frozen=True)
class TrailEntry:
    rule: str
    hypotheses: tuple  # ((name, state), ...)
    citation: str
    note: str | None = None


@dataclass(frozen=True)
class BettiReport:
    degrees: dict  # k -> DegreeStatus, keys 0..dim
    weight: object  # WeightVector | SymbolicRay
    regime: str
    trail: tuple  # TrailEntry

    @property
    def dim(self):
        return max(self.degrees)

    @property
    def fully_determined(self):
        return all(st.determined for st in self.degrees.values())

    def alternating_sum(self):
        """Exact alternating sum over all degrees; needs full determination."""
        if not self.fully_determined:
            raise InputNotDetermined("undetermined degrees remain")
        total = None
        for k, st in sorted(self.degrees.items()):
            if st.kind == "zero":
                continue
            term = st.value if k % 2 == 0 else -st.value
            total = term if total is None else total + term
        if total is None:
            if isinstance(self.weight, WeightVector):
                return Fraction(0)
            return RationalFn.from_fraction(1, 0)
        return total

    def status(self, k):
        return self.degrees.get(k, ZERO)


# ---------------------------------------------------------------------------
# Shared deduction context.


def _symbolic_chi(system) -> RationalFn:
    return equal_parameter(growth_series(system)).inverse()


class _Context:
    def __init__(self, system: CoxeterSystem, q, assertions):
        self.system = system
        self.assertions = _normalize_assertions(assertions)
        self.tags = classify_system(system)
        self.all_finite = all(t.finite for t in self.tags.values())
        self.nerve = build_nerve(system)
        self.dim_sigma = self.nerve.dim + 1
        if isinstance(q, SymbolicRay):
            self.weight = q
            self.symbolic = True
            self.le_ok = q.side == "le"
            self.ge_ok = q.side == "ge"
            # membership is uniform along the ray only in these two cases
            if self.all_finite:
                self.membership = "In"
            elif q.side == "ge":
                self.membership = "Out"
            else:
                self.membership = None
            self.regime = REGIME_IN if self.membership == "In" else (
                REGIME_LE if q.side == "le" else REGIME_GE
            )
        elif isinstance(q, WeightVector):
            if len(q.values) != nvars(system):
                raise UnsupportedWeightShape(
                    "weight vector arity does not match the class count"
                )
            self.weight = q
            self.symbolic = False
            self.le_ok = q.le_one
            self.ge_ok = q.ge_one
            try:
                self.membership = region_membership(system, q)
            except UnsupportedWeightShape:
                self.membership = None
            if self.membership is not None and bool(self.membership):
                self.regime = REGIME_IN
            elif q.is_one:
                self.regime = REGIME_ONE
            elif self.le_ok:
                self.regime = REGIME_LE
            elif self.ge_ok:
                self.regime = REGIME_GE
            else:
                self.regime = REGIME_MIXED
        else:
            raise UnsupportedWeightShape(
                f"weights must be a WeightVector or a SymbolicRay, got {type(q).__name__}"
            )
        self._chi = None
        self._vcd = None
        self._cellulation = False  # memoized (state, dim, 2-cells) or None
        self._disk = False  # memoized CheckResult for the nerve as a complex
        self._validate_assertions()

    # -- lazy shared facts --------------------------------------------------

    def _validate_assertions(self):
        """Reject demonstrably false certificates up front, whatever the
        regime.  Valid but unused certificates are simply ignored."""
        asserted_vcd = self.assertions.get("vcd")
        if asserted_vcd is not None:
            bounds = self.vcd()
            if not bounds.lo <= asserted_vcd <= bounds.hi:
                raise InconsistencyError(
                    f"asserted vcd {asserted_vcd} falls outside the computed"
                    f" bounds {bounds.as_pair()}"
                )
        asserted_disk = self.assertions.get("disk")
        if asserted_disk is not None:
            if asserted_disk != self.nerve.dim:
                raise InconsistencyError(
                    f"asserted disk dimension {asserted_disk} differs from the"
                    f" nerve dimension {self.nerve.dim}"
                )
            check = self.disk_state()
            if not check:
                raise InconsistencyError(
                    f"asserted disk nerve fails homology checks: {check.reason}"
                )
        cpx = self.assertions.get("ghs")
        if cpx is not None:
            if self.nerve.dim == 1:
                self.cellulation_evidence(need_euclidean_cells=False)
            else:
                check = ghs_check(cpx, cpx.dim)
                if not check:
                    raise InconsistencyError(
                        f"asserted cellulation fails sphere checks: {check.reason}"
                    )
                if not _skeleton_matches(self.nerve, cpx):
                    raise InconsistencyError(
                        "asserted cellulation one-skeleton differs from the nerve"
                    )

    def disk_state(self):
        if self._disk is False:
            d = self.nerve.dim
            if d < 1:
                self._disk = None
            else:
                self._disk = disk_check(
                    CellComplexInput.from_simplicial(self.nerve.faces), d
                )
        return self._disk

    def chi(self):
        """Weighted Euler characteristic: Fraction or one-variable function."""
        if self._chi is None:
            if self.symbolic:
                self._chi = _symbolic_chi(self.system)
            else:
                self._chi = euler_characteristic(self.system, self.weight)
        return self._chi

    def chi_status(self, sign: int, where: str) -> DegreeStatus:
        c = self.chi() if sign > 0 else -self.chi()
        if self.symbolic:
            return symbolic_status(c, self.weight.side, where)
        return value_status(c, where)

    def vcd(self):
        if self._vcd is None:
            self._vcd = vcd_bounds(self.system)
        return self._vcd

    def in_region(self):
        if self.membership is None:
            return None
        if self.symbolic:
            return self.membership == "In"
        return bool(self.membership)

    def at_boundary(self):
        if self.symbolic or self.membership is None:
            return False
        return self.membership.at_boundary

    def concentrate(self, k: int, status: DegreeStatus):
        dets = [(j, ZERO) for j in range(self.dim_sigma + 1) if j != k]
        dets.append((k, status))
        return dets

    def cellulation_evidence(self, need_euclidean_cells: bool, sphere_dim: int | None = None):
        """Evidence that the graph nerve is the one-skeleton of a cellulation
        of a homology sphere: (state, dim, 2-cells) or None.  A caller
        certificate fixes dim; the automatic route builds a planar embedding,
        so its dim is always 2.  The caller may restrict the sphere dimension
        and may require every 2-cell to be Euclidean."""
        if self.nerve.dim != 1:
            return None
        if self._cellulation is False:
            asserted = _asserted_cellulation(self)
            if asserted is not None:
                self._cellulation = (ASSERTED,) + asserted
            else:
                auto = _planar_cellulation(self)
                self._cellulation = None if auto is None else (VERIFIED, 2, auto)
        if self._cellulation is None:
            return None
        state, dim, cells = self._cellulation
        if sphere_dim is not None and dim != sphere_dim:
            return None
        if need_euclidean_cells:
            if state == ASSERTED:
                _require_euclidean_cells(self.system, cells, "asserted cellulation")
            elif not all(
                _is_euclidean_2cell(self.system, verts, edges) for verts, edges in cells
            ):
                return None
        return state, dim, cells


def _normalize_assertions(assertions):
    if assertions is None:
        return {}
    out = {}
    for key, val in dict(assertions).items():
        if key == "ghs":
            if isinstance(val, dict):
                val = CellComplexInput.from_doc(val)
            if not isinstance(val, CellComplexInput):
                raise ValueError("ghs assertion must be a cell complex document")
            out[key] = val
        elif key in ("disk", "vcd"):
            val = int(val)
            if val < 0:
                raise ValueError(f"{key} assertion must be nonnegative")
            out[key] = val
        else:
            raise ValueError(f"unknown assertion {key!r}")
    return out


# ---------------------------------------------------------------------------
# Cellulation evidence helpers.


def _cpx_vertex_sets(cpx: CellComplexInput):
    """For each 2-cell: (vertex tuple, set of boundary edges as frozensets)."""
    byid = cpx.by_id()
    out = []
    for c in cpx.cells:
        if c.dim != 2:
            continue
        edges = set()
        verts = set()
        for eid in c.facets:
            edge = byid[eid]
            ends = frozenset(edge.facets)
            edges.add(ends)
            verts |= ends
        out.append((tuple(sorted(verts)), edges))
    return out


def _skeleton_matches(nerve, cpx: CellComplexInput) -> bool:
    verts = sorted(c.id for c in cpx.cells if c.dim == 0)
    if verts != sorted(nerve.vertices):
        return False
    edges = {frozenset(c.facets) for c in cpx.cells if c.dim == 1}
    return edges == {frozenset(e) for e in nerve.edges()}


def _asserted_cellulation(ctx: _Context):
    """(dim, validated 2-cells) of a caller-supplied sphere cellulation."""
    cpx = ctx.assertions.get("ghs")
    if cpx is None:
        return None
    n = cpx.dim
    if n < 2:
        raise ValueError("cellulation certificate must have dimension >= 2")
    check = ghs_check(cpx, n)
    if not check:
        raise InconsistencyError(f"asserted cellulation fails sphere checks: {check.reason}")
    if not _skeleton_matches(ctx.nerve, cpx):
        raise InconsistencyError("asserted cellulation one-skeleton differs from the nerve")
    return n, _cpx_vertex_sets(cpx)


def _nerve_graph(nerve) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(sorted(nerve.vertices))
    g.add_edges_from(sorted(tuple(sorted(e)) for e in nerve.edges()))
    return g


def _planar_cellulation(ctx: _Context):
    """2-cells of the sphere cellulation induced by a planar embedding of the
    graph nerve, or None.  Biconnectivity makes every face a simple cycle, so
    the embedding really is a cellulation."""
    if ctx.nerve.dim != 1 or len(ctx.nerve.vertices) < 3:
        return None
    g = _nerve_graph(ctx.nerve)
    if not nx.is_connected(g) or not nx.is_biconnected(g):
        return None
    planar, emb = nx.check_planarity(g)
    if not planar:
        return None
    seen = set()
    faces = []
    for u, v in sorted(emb.edges()):
        if (u, v) in seen:
            continue
        cycle = emb.traverse_face(u, v, mark_half_edges=seen)
        edges = {
            frozenset((cycle[i], cycle[(i + 1) % len(cycle)]))
            for i in range(len(cycle))
        }
        faces.append((tuple(sorted(cycle)), edges))
    return faces


def _is_euclidean_2cell(system, verts, edges) -> bool:
    """A 2-cell is Euclidean when its vertex subgroup is a rank-2 affine
    reflection group: a flat triangle, or a square with commuting sides."""
    if len(verts) == 3:
        if len(edges) != 3:
            return False
        try:
            return is_euclidean_cell(system, verts)
        except InfiniteLabel:
            return False
    if len(verts) == 4:
        if len(edges) != 4:
            return False
        if any(len(e) != 2 for e in edges):
            return False
        if not all(system.m(*sorted(e)) == 2 for e in edges):
            return False
        diagonals = [
            (a, b)
            for i, a in enumerate(verts)
            for b in verts[i + 1:]
            if frozenset((a, b)) not in edges
        ]
        return len(diagonals) == 2 and all(system.m(a, b) == INF for a, b in diagonals)
    return False


def _require_euclidean_cells(system, cells, label):
    for verts, edges in cells:
        if not _is_euclidean_2cell(system, verts, edges):
            raise InconsistencyError(
                f"{label} has a non-Euclidean 2-cell on {verts}"
            )


# ---------------------------------------------------------------------------
# Closed-form building blocks (one ray variable).


def _fn1(num_terms, den_terms) -> RationalFn:
    return RationalFn.make(
        MultiPoly.from_dict(1, {(e,): c for e, c in num_terms.items()}),
        MultiPoly.from_dict(1, {(e,): c for e, c in den_terms.items()}),
    )


def _vertex_term() -> RationalFn:
    # q / (1 + q)
    return _fn1({1: 1}, {0: 1, 1: 1})


def _edge_term_m3() -> RationalFn:
    # q^3 / (1 + 2q + 2q^2 + q^3)
    return _fn1({3: 1}, {0: 1, 1: 2, 2: 2, 3: 1})


def _edge_term_m2() -> RationalFn:
    # q^2 / (1 + 2q + q^2)
    return _fn1({2: 1}, {0: 1, 1: 2, 2: 1})


_ONE = RationalFn.from_fraction(1, 1)


def _display_terms(system):
    """Multivariate vertex and edge summands of the degree-2 value for graph
    nerves: one longest-element-over-group ratio per vertex and per edge, with
    the denominators written out per label."""
    nv = nvars(system)

    def mono(payload):
        e = [0] * nv
        for idx, p in payload:
            e[idx] += p
        return tuple(e)

    def poly(rows):
        d = {}
        for coeff, payload in rows:
            key = mono(payload)
            d[key] = d.get(key, 0) + coeff
        return MultiPoly.from_dict(nv, d)

    total = RationalFn.from_fraction(nv, 1)
    for s in system.generators:
        i = system.class_index(s)
        total = total - RationalFn.make(
            poly([(1, [(i, 1)])]), poly([(1, []), (1, [(i, 1)])])
        )
    for edge in build_nerve(system).edges():
        s, t = edge
        m = system.m(s, t)
        i, j = system.class_index(s), system.class_index(t)
        if m == 2:
            num = poly([(1, [(i, 1), (j, 1)])])
            den = poly([(1, []), (1, [(i, 1)]), (1, [(j, 1)]), (1, [(i, 1), (j, 1)])])
        elif m == 3:
            num = poly([(1, [(i, 3)])])
            den = poly([(1, []), (2, [(i, 1)]), (2, [(i, 2)]), (1, [(i, 3)])])
        elif m == 4:
            num = poly([(1, [(i, 2), (j, 2)])])
            den = poly([
                (1, []), (1, [(i, 1)]), (1, [(j, 1)]), (2, [(i, 1), (j, 1)]),
                (1, [(i, 2), (j, 1)]), (1, [(i, 1), (j, 2)]), (1, [(i, 2), (j, 2)]),
            ])
        elif m == 6:
            num = poly([(1, [(i, 3), (j, 3)])])
            den = poly([
                (1, []), (1, [(i, 1)]), (1, [(j, 1)]), (2, [(i, 1), (j, 1)]),
                (1, [(i, 2), (j, 1)]), (1, [(i, 1), (j, 2)]), (2, [(i, 2), (j, 2)]),
                (1, [(i, 2), (j, 3)]), (1, [(i, 3), (j, 2)]), (1, [(i, 3), (j, 3)]),
            ])
        else:
            raise InconsistencyError(
                f"edge {edge} carries label {m}, not a Euclidean cell label"
            )
        total = total + RationalFn.make(num, den)
    return total


def graph_nerve_degree2_value(system: CoxeterSystem) -> RationalFn:
    """The displayed vertex-edge sum for the degree-2 Betti number of a graph
    nerve, as an exact multivariate rational function.  Only Euclidean edge
    labels (2, 3, 4, 6) are meaningful here."""
    if build_nerve(system).dim != 1:
        raise CoxeterError("the vertex-edge sum needs a graph nerve")
    return _display_terms(system)


# ---------------------------------------------------------------------------
# Closed-form family recognition.


def _recognize_family(system, nerve):
    """(family-name, one-variable value) for the four graph-nerve families."""
    if nerve.dim != 1:
        return None
    n = len(nerve.vertices)
    edges = nerve.edges()
    labels = {nerve.label(a, b) for a, b in edges}
    complete = len(edges) == n * (n - 1) // 2
    vert = _vertex_term()
    e3 = _edge_term_m3()
    if labels == {3} and complete and n >= 3:
        form = _ONE - vert * n + e3 * Fraction(n * (n - 1), 2)
        return "complete-graph-3", form
    if labels == {3} and n >= 6 and n % 2 == 0:
        # octahedron skeleton: complement is a perfect matching
        g = _nerve_graph(nerve)
        if all(g.degree(v) == n - 2 for v in g.nodes):
            half = n // 2
            form = _ONE - vert * n + e3 * (n * (half - 1))
            return "octahedron-skeleton-3", form
    if labels == {2}:
        k = n.bit_length() - 1
        if n == 2 ** k and k >= 2 and len(edges) == k * 2 ** (k - 1):
            g = _nerve_graph(nerve)
            if nx.is_isomorphic(g, nx.hypercube_graph(k)):
                form = _ONE - vert * n + _edge_term_m2() * (k * 2 ** (k - 1))
                return "cube-skeleton-2", form
    if labels == {3} and n >= 5 and not complete:
        missing = n * (n - 1) // 2 - len(edges)
        if 1 <= missing <= n - 4:
            form = _ONE - vert * n + e3 * Fraction(n * (n - 1), 2) - e3 * missing
            return "complete-graph-3-minus-edges", form
    return None


def _scalar_weight(ctx):
    """The single ray value when all classes carry the same weight."""
    if ctx.symbolic:
        return None
    vals = set(ctx.weight.values)
    if len(vals) == 1:
        return next(iter(vals))
    return None


def _form_status(ctx, form: RationalFn, where: str) -> DegreeStatus:
    if ctx.symbolic:
        return symbolic_status(form, ctx.weight.side, where)
    return value_status(form.eval((_scalar_weight(ctx),)), where)


# ---------------------------------------------------------------------------
# The rules.  Each returns None, or (determinations, TrailEntry).


def _rule_region(ctx):
    inside = ctx.in_region()
    if inside is None:
        return None
    hyp = (("region-membership", VERIFIED),)
    cite = (
        "degree zero is nonzero exactly on the convergence region, where the"
        " homology concentrates in degree zero with value one over the"
        " weighted growth series"
    )
    if inside:
        b0 = ctx.chi_status(+1, "region-membership")
        if b0 == ZERO:
            raise InconsistencyError(
                "weights inside the convergence region force a positive degree zero"
            )
        return ctx.concentrate(0, b0), TrailEntry("region-membership", hyp, cite, note="In")
    return [(0, ZERO)], TrailEntry("region-membership", hyp, cite, note="Out")


def _rule_euclidean(ctx):
    if not ctx.tags or not all(t.affine for t in ctx.tags.values()):
        return None
    top = sum(len(comp) - 1 for comp in ctx.tags)
    assert top == ctx.dim_sigma, "affine product with unexpected complex dimension"
    hyp = (("all-components-affine", VERIFIED),)
    cite = (
        "products of affine reflection groups concentrate in degree zero for"
        " weights at most one and in the top degree for weights at least one"
    )
    dets = []
    if ctx.le_ok:
        dets += ctx.concentrate(0, ctx.chi_status(+1, "euclidean-regime"))
    if ctx.ge_ok:
        sign = 1 if top % 2 == 0 else -1
        dets += ctx.concentrate(top, ctx.chi_status(sign, "euclidean-regime"))
    if not dets:
        return None
    return dets, TrailEntry("euclidean-regime", hyp, cite)


def _rule_vcd_ceiling(ctx):
    hi = ctx.vcd().hi
    if hi >= ctx.dim_sigma:
        return None
    dets = [(k, ZERO) for k in range(hi + 1, ctx.dim_sigma + 1)]
    return dets, TrailEntry(
        "vcd-ceiling",
        (("vcd-upper-bound", VERIFIED),),
        "homology vanishes above the virtual cohomological dimension",
        note=f"vcd <= {hi}",
    )


def _rule_pushing_up(ctx, deduce):
    if not ctx.le_ok:
        return None
    bounds = ctx.vcd()
    asserted = ctx.assertions.get("vcd")
    if asserted is not None:
        n, state = asserted, ASSERTED
    elif bounds.exact:
        n, state = bounds.lo, VERIFIED
    else:
        return None
    if n < 1:
        return None
    unit = deduce(
        ctx.system, WeightVector.equal(ctx.system, 1), ctx.assertions, _skip_pushing_up=True
    )
    if unit.status(n) != ZERO:
        return None
    dets = [(k, ZERO) for k in range(n, ctx.dim_sigma + 1)]
    hyp = (("vcd-exact", state), ("top-degree-vanishes-at-unit-weight", VERIFIED))
    return dets, TrailEntry(
        "pushing-up",
        hyp,
        "if the top degree vanishes at weight one and the virtual cohomological"
        " dimension is exact, vanishing extends to all weights at most one from"
        " that degree upward",
        note=f"vcd = {n}",
    )


def _rule_ghs_graph(ctx):
    if not ctx.ge_ok or ctx.nerve.dim != 1:
        return None
    evidence = ctx.cellulation_evidence(need_euclidean_cells=True)
    if evidence is None:
        return None
    state, dim, _ = evidence
    value = _display_value_status(ctx)
    hyp = (
        ("graph-nerve", VERIFIED),
        ("sphere-cellulation", state),
        ("euclidean-2-cells", state),
    )
    return ctx.concentrate(2, value), TrailEntry(
        "ghs-graph-nerve",
        hyp,
        "a graph nerve that is the one-skeleton of a homology-sphere"
        " cellulation with Euclidean two-cells concentrates in degree two for"
        " weights at least one, with an explicit vertex-edge sum",
        note=f"sphere dimension {dim}",
    )


def _display_value_status(ctx):
    form = _display_terms(ctx.system)
    if ctx.symbolic:
        return symbolic_status(equal_parameter(form), ctx.weight.side, "ghs-graph-nerve")
    return value_status(form.eval(ctx.weight.values), "ghs-graph-nerve")


def _trichotomy(ctx, rule, hyp, cite):
    """Shared In / boundary / below-one / above-one case split."""
    where = rule
    if ctx.symbolic:
        if ctx.weight.side != "ge":
            return None
        dets = ctx.concentrate(2, ctx.chi_status(+1, where))
        return dets, TrailEntry(rule, hyp, cite, note="q>=1 branch")
    if ctx.membership is None:
        return None
    if bool(ctx.membership) or ctx.membership.at_boundary:
        note = "closed-region branch"
        dets = ctx.concentrate(0, ctx.chi_status(+1, where))
        return dets, TrailEntry(rule, hyp, cite, note=note)
    dets = []
    notes = []
    if ctx.le_ok:
        dets += ctx.concentrate(1, ctx.chi_status(-1, where))
        notes.append("q<=1 branch")
    if ctx.ge_ok:
        dets += ctx.concentrate(2, ctx.chi_status(+1, where))
        notes.append("q>=1 branch")
    if not dets:
        return None
    return dets, TrailEntry(rule, hyp, cite, note=", ".join(notes))


def _rule_sphere_trichotomy(ctx):
    if ctx.nerve.dim != 1:
        return None
    evidence = ctx.cellulation_evidence(need_euclidean_cells=True, sphere_dim=2)
    if evidence is None:
        return None
    state = evidence[0]
    hyp = (
        ("graph-nerve", VERIFIED),
        ("sphere-cellulation", state),
        ("euclidean-2-cells", state),
    )
    return _trichotomy(
        ctx,
        "two-sphere-trichotomy",
        hyp,
        "for a two-sphere cellulation skeleton the homology concentrates in"
        " degree zero on the closed convergence region, in degree one outside"
        " it for weights at most one, and in degree two for weights at least one",
    )


def _rule_closed_forms(ctx):
    if not ctx.ge_ok:
        return None
    if not ctx.symbolic and _scalar_weight(ctx) is None:
        return None
    found = _recognize_family(ctx.system, ctx.nerve)
    if found is None:
        return None
    family, form = found
    status = _form_status(ctx, form, f"closed-form-families[{family}]")
    hyp = (("nerve-family", VERIFIED), ("equal-weights", VERIFIED))
    return ctx.concentrate(2, status), TrailEntry(
        "closed-form-families",
        hyp,
        "complete-graph, octahedron-skeleton, cube-skeleton and edge-deleted"
        " complete-graph nerves concentrate in degree two for weights at least"
        " one, with closed-form values",
        note=family,
    )


def _rule_relabeled_complete(ctx):
    if not ctx.ge_ok:
        return None
    gens = ctx.system.generators
    n = len(gens)
    if n < 5:
        return None
    off3 = 0
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            m = ctx.system.m(a, b)
            if m == INF:
                return None
            if m != 3:
                off3 += 1
    if off3 > n - 4:
        return None
    b2 = ctx.chi_status(+1, "relabeled-complete-graph")
    hyp = (
        ("complete-finite-labeled-skeleton", VERIFIED),
        ("relabeled-edge-budget", VERIFIED),
    )
    return ctx.concentrate(2, b2), TrailEntry(
        "relabeled-complete-graph",
        hyp,
        "a complete nerve skeleton on at least five vertices, all labels"
        " finite and at most a bounded number different from three,"
        " concentrates in degree two for weights at least one",
        note=f"{off3} relabeled",
    )


def _quasilanner_tag(ctx):
    if len(ctx.tags) != 1:
        return None
    tag = next(iter(ctx.tags.values()))
    if tag.kind != "quasilanner":
        return None
    return tag


def _rule_quasilanner(ctx):
    tag = _quasilanner_tag(ctx)
    if tag is None:
        return None
    n = tag.dim
    gens = ctx.system.generators
    for size in range(1, len(gens)):
        for sub in combinations(gens, size):
            if not (is_spherical(ctx.system, sub) or is_affine_type(ctx.system, sub)):
                raise InconsistencyError(
                    "hyperbolic-simplex classification with a proper subgroup"
                    f" neither finite nor Euclidean: {sub}"
                )
    hyp = (
        ("hyperbolic-simplex-type", VERIFIED),
        ("proper-subgroups-finite-or-euclidean", VERIFIED),
    )
    cite = (
        "noncompact hyperbolic simplex groups vanish from one below the"
        " simplex dimension upward for weights at most one and through degree"
        " one for weights at least one; in dimension three the homology is"
        " concentrated in a single degree"
    )
    dets = []
    if ctx.le_ok:
        dets += [(k, ZERO) for k in range(n - 1, ctx.dim_sigma + 1)]
    if ctx.ge_ok:
        dets += [(k, ZERO) for k in range(0, min(1, ctx.dim_sigma) + 1)]
    tri = None
    if n == 3:
        tri = _trichotomy(ctx, "quasi-lanner", hyp, cite)
    if tri is not None:
        tri_dets, entry = tri
        dets += tri_dets
        return dets, entry
    if not dets:
        return None
    return dets, TrailEntry("quasi-lanner", hyp, cite, note=f"dimension {n}")


def _rule_two_spherical(ctx):
    if not ctx.ge_ok or ctx.all_finite:
        return None
    gens = ctx.system.generators
    n = len(gens)
    if n < 5:
        return None
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if ctx.system.m(a, b) == INF:
                return None
    for size in (3, 4):
        for sub in combinations(gens, size):
            if is_spherical(ctx.system, sub) or is_affine_type(ctx.system, sub):
                continue
            tags = classify_system(restrict(ctx.system, sub))
            if len(tags) == 1 and next(iter(tags.values())).kind == "quasilanner" \
                    and next(iter(tags.values())).dim == 3:
                continue
            return None
    small_hyp = ("small-subgroups-euclidean-or-hyperbolic-simplex", VERIFIED)
    vcd_hyp = _two_spherical_vcd_route(ctx)
    if vcd_hyp is None:
        return None
    dets = [(k, ZERO) for k in range(0, min(1, ctx.dim_sigma) + 1)]
    return dets, TrailEntry(
        "two-spherical",
        (small_hyp, vcd_hyp[0]),
        "an infinite two-spherical system on at least five generators whose"
        " small subgroups are Euclidean or hyperbolic-simplex and whose larger"
        " subgroups have controlled cohomological dimension vanishes below"
        " degree two for weights at least one",
        note=vcd_hyp[1],
    )


def _two_spherical_vcd_route(ctx):
    """Either the direct subgroup-dimension scan or the 3-sphere-nerve route.
    Returns ((hypothesis, state), note) or None."""
    gens = ctx.system.generators
    asserted = ctx.assertions.get("vcd")
    used_assertion = False
    direct = True
    for size in range(5, len(gens) + 1):
        for sub in combinations(gens, size):
            if len(sub) == len(gens):
                if asserted is not None:
                    used_assertion = True
                hi = asserted if asserted is not None else ctx.vcd().hi
            else:
                hi = vcd_bounds(restrict(ctx.system, sub)).hi
            if hi > size - 2:
                direct = False
                break
        if not direct:
            break
    if direct:
        state = ASSERTED if used_assertion else VERIFIED
        return ("subgroup-dimension-bounds", state), "direct route"
    if len(gens) >= 6 and ctx.nerve.dim == 3:
        cpx = CellComplexInput.from_simplicial(ctx.nerve.faces)
        if ghs_check(cpx, 3):
            return ("three-sphere-nerve", VERIFIED), "sphere-nerve route"
    return None


def _rule_disk(ctx):
    if not ctx.le_ok:
        return None
    d = ctx.nerve.dim
    # a path nerve is a 1-disk, but the vanishing fails there: amalgams of
    # finite groups over finite groups are virtually free and carry homology
    # in degree one at unit weights
    if d < 2:
        return None
    check = ctx.disk_state()
    if not check:
        return None
    state = ASSERTED if ctx.assertions.get("disk") is not None else VERIFIED
    dets = [(k, ZERO) for k in range(d, ctx.dim_sigma + 1)]
    return dets, TrailEntry(
        "disk-nerve",
        (("disk-nerve", state),),
        "a homology-disk nerve of dimension at least two forces vanishing from"
        " the disk dimension upward for weights at most one",
        note=f"disk dimension {d}",
    )


def _rule_planar(ctx):
    if not ctx.le_ok or ctx.nerve.dim > 1 or ctx.dim_sigma < 2:
        return None
    if not is_planar_graph(ctx.nerve):
        return None
    dets = [(k, ZERO) for k in range(2, ctx.dim_sigma + 1)]
    return dets, TrailEntry(
        "planar-nerve",
        (("planar-graph-nerve", VERIFIED),),
        "a planar graph nerve forces vanishing in degrees two and above for"
        " weights at most one",
    )


def _rule_sphere_skeleton(ctx):
    if not ctx.le_ok or ctx.nerve.dim != 1:
        return None
    evidence = ctx.cellulation_evidence(need_euclidean_cells=False, sphere_dim=2)
    if evidence is None:
        return None
    state = evidence[0]
    return [(2, ZERO)], TrailEntry(
        "sphere-cellulation-skeleton",
        (("sphere-cellulation-one-skeleton", state),),
        "a graph nerve that is the one-skeleton of a two-sphere cellulation"
        " has vanishing degree-two homology for weights at most one",
    )


def _rule_coning(ctx):
    if not ctx.ge_ok or ctx.nerve.dim != 2:
        return None
    if not _coned_sphere_structure(ctx):
        return None
    dets = [(k, ZERO) for k in range(0, min(1, ctx.dim_sigma) + 1)]
    hyp = (
        ("sphere-nerve", VERIFIED),
        ("right-angled-coning-structure", VERIFIED),
        ("euclidean-base-2-cells", VERIFIED),
    )
    return dets, TrailEntry(
        "cone-construction",
        hyp,
        "a homology-two-sphere nerve assembled by right-angled coning over a"
        " Euclidean-celled graph cellulation vanishes through degree one for"
        " weights at least one",
    )


def _coned_sphere_structure(ctx) -> bool:
    """Recognize a triangulated homology 2-sphere nerve obtained from a graph
    cellulation with Euclidean 2-cells by coning every cell with a commuting
    vertex.  Cone vertices are taken to be exactly the generators all of whose
    finite labels equal 2; ambiguous splittings are not searched."""
    system, nerve = ctx.system, ctx.nerve
    gens = system.generators
    cones = [
        s for s in gens
        if all(system.m(s, t) in (2, INF) for t in gens if t != s)
    ]
    base = [s for s in gens if s not in cones]
    if not cones or not base:
        return False
    if not ghs_check(CellComplexInput.from_simplicial(nerve.faces), 2):
        return False
    triangles = {frozenset(f) for f in nerve.faces_of_dim(2)}
    edges = {frozenset(e) for e in nerve.edges()}
    base_edges = {e for e in edges if all(v in base for v in e)}
    expected_triangles = set()
    covered = {e: 0 for e in base_edges}
    for c in cones:
        if any(frozenset((c, other)) in edges for other in cones if other != c):
            return False
        neighbors = [v for v in base if frozenset((c, v)) in edges]
        ring = {e for e in base_edges if e <= set(neighbors)}
        cycle = _single_cycle(neighbors, ring)
        if cycle is None:
            return False
        if not _is_euclidean_2cell(system, tuple(sorted(neighbors)), ring):
            return False
        for e in ring:
            covered[e] += 1
            expected_triangles.add(e | {c})
    if any(count != 2 for count in covered.values()):
        return False
    if any(not any(v in e for e in base_edges) for v in base):
        return False
    return triangles == expected_triangles


def _single_cycle(vertices, edges):
    """The vertex list if the edges form one cycle through all of them."""
    if len(edges) != len(vertices) or len(vertices) < 3:
        return None
    adj = {v: [] for v in vertices}
    for e in edges:
        a, b = sorted(e)
        adj[a].append(b)
        adj[b].append(a)
    if any(len(nbrs) != 2 for nbrs in adj.values()):
        return None
    start = vertices[0]
    seen = [start]
    prev, cur = None, start
    while True:
        nxt = [v for v in adj[cur] if v != prev]
        if not nxt:
            return None
        prev, cur = cur, nxt[0]
        if cur == start:
            break
        seen.append(cur)
        if len(seen) > len(vertices):
            return None
    return seen if len(seen) == len(vertices) else None


def _rule_euler_completion(ctx, table):
    open_degrees = [k for k, st in table.items() if not st.determined]
    if len(open_degrees) != 1:
        return None
    j = open_degrees[0]
    total = ctx.chi()
    for k, st in table.items():
        if k == j or st.kind == "zero":
            continue
        total = total - st.value if k % 2 == 0 else total + st.value
    if j % 2 == 1:
        total = -total
    where = f"euler-completion[degree {j}]"
    if ctx.symbolic:
        status = symbolic_status(total, ctx.weight.side, where)
    else:
        try:
            status = value_status(total, where)
        except InconsistencyError:
            raise InconsistencyError(
                f"completing degree {j} from the Euler characteristic forces a"
                f" negative value {total}"
            ) from None
    return [(j, status)], TrailEntry(
        "euler-completion",
        (("all-other-degrees-determined", VERIFIED), ("euler-characteristic", VERIFIED)),
        "with every other degree determined, the remaining one is fixed by the"
        " weighted Euler characteristic",
        note=f"degree {j}",
    )


_RULE_SEQUENCE = (
    ("region-membership", _rule_region),
    ("euclidean-regime", _rule_euclidean),
    ("vcd-ceiling", _rule_vcd_ceiling),
    ("pushing-up", _rule_pushing_up),
    ("ghs-graph-nerve", _rule_ghs_graph),
    ("two-sphere-trichotomy", _rule_sphere_trichotomy),
    ("closed-form-families", _rule_closed_forms),
    ("relabeled-complete-graph", _rule_relabeled_complete),
    ("quasi-lanner", _rule_quasilanner),
    ("two-spherical", _rule_two_spherical),
    ("disk-nerve", _rule_disk),
    ("planar-nerve", _rule_planar),
    ("sphere-cellulation-skeleton", _rule_sphere_skeleton),
    ("cone-construction", _rule_coning),
)

RULE_IDS = tuple(name for name, _ in _RULE_SEQUENCE) + ("euler-completion",)

_RULE_INDEX = {name: i for i, name in enumerate(RULE_IDS)}


def _merge(table, provenance, k, status, rule):
    current = table[k]
    if not current.determined:
        table[k] = status
        provenance[k] = rule
        return
    if not status.determined or current == status:
        return
    raise InconsistencyError(
        f"degree {k}: {provenance[k]} determined {current} but {rule} determined {status}"
    )


def deduce_betti(system: CoxeterSystem, q, assertions=None, *,
                 _rule_order=None, _skip_pushing_up=False) -> BettiReport:
    """Apply every applicable rule and return the deduced report.

    q is a WeightVector or a SymbolicRay.  assertions may carry caller
    certificates: "ghs" (a cell complex document whose one-skeleton is the
    nerve), "disk" (the nerve triangulates a disk of that dimension), "vcd"
    (the exact virtual cohomological dimension).  The result is independent of
    rule application order; _rule_order exists so tests can prove that.
    """
    ctx = _Context(system, q, assertions)
    table = {k: UNKNOWN for k in range(ctx.dim_sigma + 1)}
    provenance = {}
    entries = []
    sequence = list(_RULE_SEQUENCE)
    if _rule_order is not None:
        by_name = dict(_RULE_SEQUENCE)
        if sorted(_rule_order) != sorted(by_name):
            raise ValueError("rule order must be a permutation of the rule ids")
        sequence = [(name, by_name[name]) for name in _rule_order]
    for name, rule in sequence:
        if name == "pushing-up":
            if _skip_pushing_up:
                continue
            fired = rule(ctx, deduce_betti)
        else:
            fired = rule(ctx)
        if fired is None:
            continue
        dets, entry = fired
        for k, status in dets:
            _merge(table, provenance, k, status, name)
        entries.append(entry)
    fired = _rule_euler_completion(ctx, table)
    if fired is not None:
        dets, entry = fired
        for k, status in dets:
            _merge(table, provenance, k, status, "euler-completion")
        entries.append(entry)
    entries.sort(key=lambda e: _RULE_INDEX[e.rule])
    return BettiReport(
        degrees=dict(sorted(table.items())),
        weight=ctx.weight,
        regime=ctx.regime,
        trail=tuple(entries),
    )


# ---------------------------------------------------------------------------
# Cone scaling and the independent consistency check.


def apply_cone_rule(report: BettiReport, q_c) -> BettiReport:
    """Rescale a fully determined report for the system extended by one
    generator commuting with everything.  Each value picks up the degree-zero
    Betti number of the new order-two factor, 1/(1+q_c)."""
    q_c = Fraction(q_c)
    if q_c <= 0:
        raise ValueError("cone weight must be positive")
    if not report.fully_determined:
        raise InputNotDetermined("cone scaling needs every degree determined")
    factor = 1 / (1 + q_c)
    degrees = {k: st.scaled(factor) for k, st in report.degrees.items()}
    entry = TrailEntry(
        "cone-scaling",
        (("input-fully-determined", VERIFIED),),
        "passing to the right-angled cone multiplies every Betti number by the"
        " degree-zero value of the new order-two factor",
        note="rule-extension",
    )
    return BettiReport(
        degrees=degrees,
        weight=report.weight,
        regime=report.regime,
        trail=report.trail + (entry,),
    )


@dataclass(frozen=True)
class ConsistencyResult:
    ok: bool
    detail: str
    discrepancy: object = None  # Fraction | RationalFn | None

    def __bool__(self):
        return self.ok


def consistency_check(report: BettiReport, system: CoxeterSystem) -> ConsistencyResult:
    """Recompute the weighted Euler characteristic independently and compare
    it with the report's alternating sum."""
    if isinstance(report.weight, SymbolicRay):
        chi = _symbolic_chi(system)
    else:
        chi = euler_characteristic(system, report.weight)
    if not report.fully_determined:
        open_degrees = [k for k, st in report.degrees.items() if not st.determined]
        return ConsistencyResult(True, f"skipped: degrees {open_degrees} undetermined")
    alt = report.alternating_sum()
    diff = alt - chi
    if (diff == 0) if isinstance(diff, Fraction) else diff.is_zero:
        return ConsistencyResult(True, "alternating sum matches the Euler characteristic")
    return ConsistencyResult(
        False,
        f"alternating sum {alt} differs from the Euler characteristic {chi}",
        discrepancy=diff,
    )
