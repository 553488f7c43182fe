"""Word problem, normal forms, length, ball enumeration, coset minima.

Elements are handled through canonical reduced words: the lexicographically
least (in generator input order) among the reduced words of the element.
Canonical forms are computed by the classical rewriting closure: repeatedly
apply braid substitutions, cancel adjacent equal letters when one appears,
and take the minimum of the closure once no cancellation is possible.  The
closure is memoized per system, which keeps repeated queries cheap at the
intended scale (rank <= 10, lengths <= ~14).

Ball censuses come in three exact engines:

* ``words``  - the BFS over canonical forms described above; lists elements.
* ``vector`` - for label sets within {2, 3, inf}: BFS over the orbit of the
  all-ones vector under the dual geometric representation.  The Cartan
  numbers 2cos(pi/m) are then the integers 0, 1, 2, the orbit lives in
  Z^rank, and points of the open fundamental chamber have trivial
  stabilizer, so vector equality is element equality.  Counts only.
* ``dp``     - for right-angled systems (labels 2 or inf): dynamic program
  over right-descent sets.  In the right-angled case all braid moves are
  commutations, so D(ws) = {s} | {t in D(w) : st = ts} for any ascent s,
  and an element of length k+1 is reached from exactly |D| predecessors.
  The DP therefore divides its raw counts by |D| and asserts the division
  is exact.  Counts only, arbitrary length.

The fast engines exist because degree-12 censuses of systems like the
right-angled cube group (ball size 5.5e8) are far beyond element-by-element
enumeration; they are cross-checked against the ``words`` engine in tests.
"""

from __future__ import annotations

from dataclasses import dataclass

from .system import INF, CoxeterSystem, UnknownGenerator

DEFAULT_CAP = 2_000_000


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class NormalForm:
    word: tuple  # generator names, canonical reduced word
    canonical: bool = True

    def __len__(self):
        return len(self.word)

    def __iter__(self):
        return iter(self.word)


@dataclass(frozen=True)
class BallCensus:
    counts: tuple  # counts[k] = number of elements of length k
    elements: tuple | None  # spheres of NormalForms (words engine only)
    engine: str
    generator_order: tuple

    @property
    def total(self):
        return sum(self.counts)


@dataclass(frozen=True)
class FinitenessResult:
    finite: bool
    size: int | None  # group order when finite

    def __bool__(self):
        return self.finite


class WordEngine:
    """Memoized rewriting engine bound to one system."""

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self.n = system.rank
        self._m = [
            [None if v == INF else v for v in row] for row in system.matrix.rows
        ]
        self._canon = {(): ()}
        self._mult = {}

    # -- canonical forms -------------------------------------------------

    def _rewrite_step(self, word):
        """One closure pass.  Returns (shorter_word, None) on a cancellation
        or (None, closure_set) when the word is reduced."""
        seen = {word}
        stack = [word]
        m = self._m
        while stack:
            w = stack.pop()
            for i in range(len(w) - 1):
                if w[i] == w[i + 1]:
                    return w[:i] + w[i + 2:], None
            for i in range(len(w) - 1):
                s, t = w[i], w[i + 1]
                order = m[s][t]
                if order is None or i + order > len(w):
                    continue
                ok = True
                for k in range(order):
                    if w[i + k] != (s if k % 2 == 0 else t):
                        ok = False
                        break
                if not ok:
                    continue
                repl = tuple(t if k % 2 == 0 else s for k in range(order))
                v = w[:i] + repl + w[i + order:]
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return None, seen

    def canonical(self, word):
        """Canonical reduced word of the element spelled by ``word``."""
        w = tuple(word)
        pending = []
        while True:
            c = self._canon.get(w)
            if c is not None:
                break
            shorter, closure = self._rewrite_step(w)
            if shorter is None:
                c = min(closure)
                for x in closure:
                    self._canon[x] = c
                break
            pending.append(w)
            w = shorter
        for x in pending:
            self._canon[x] = c
        return c

    def mult(self, w, s):
        """Canonical form of w*s for a canonical w and a generator index s."""
        key = (w, s)
        r = self._mult.get(key)
        if r is None:
            r = self.canonical(w + (s,))
            self._mult[key] = r
        return r

    def right_descents(self, w):
        return frozenset(s for s in range(self.n) if len(self.mult(w, s)) < len(w))

    def coset_minimal(self, w, tset):
        """The unique shortest element of the coset w W_T."""
        w = self.canonical(w)
        changed = True
        while changed:
            changed = False
            for t in sorted(tset):
                v = self.mult(w, t)
                if len(v) < len(w):
                    w = v
                    changed = True
        return w

    # -- enumeration -----------------------------------------------------

    def spheres(self, L, cap=DEFAULT_CAP):
        """Canonical words of every element of length <= L, by length."""
        out = [[()]]
        total = 1
        for k in range(L):
            nxt = set()
            for w in out[k]:
                for s in range(self.n):
                    v = self.mult(w, s)
                    if len(v) == k + 1:
                        nxt.add(v)
            total += len(nxt)
            if cap is not None and total > cap:
                raise CapExceeded(f"ball exceeds cap {cap}")
            if not nxt:
                break
            out.append(sorted(nxt))
        return out


_engines = {}


def engine_for(system: CoxeterSystem) -> WordEngine:
    eng = _engines.get(system)
    if eng is None:
        eng = _engines[system] = WordEngine(system)
    return eng


def _to_indices(system, word):
    idx = []
    for g in word:
        idx.append(system.index(g))
    return tuple(idx)


def _to_names(system, word):
    return tuple(system.generators[i] for i in word)


def normal_form(system: CoxeterSystem, word) -> NormalForm:
    """Canonical shortest-lex representative of the element spelled by ``word``."""
    eng = engine_for(system)
    return NormalForm(_to_names(system, eng.canonical(_to_indices(system, word))))


def length(system: CoxeterSystem, word) -> int:
    eng = engine_for(system)
    return len(eng.canonical(_to_indices(system, word)))


def coset_minimal(system: CoxeterSystem, word, subset) -> NormalForm:
    """The (empty, T)-reduced representative of w W_T."""
    eng = engine_for(system)
    tset = {system.index(g) for g in subset}
    w = eng.coset_minimal(eng.canonical(_to_indices(system, word)), tset)
    return NormalForm(_to_names(system, w))


def right_descents(system: CoxeterSystem, word) -> frozenset:
    """Generators s with l(ws) < l(w), as names."""
    eng = engine_for(system)
    ds = eng.right_descents(eng.canonical(_to_indices(system, word)))
    return frozenset(system.generators[i] for i in ds)


def probe_finiteness(system: CoxeterSystem, cap=DEFAULT_CAP) -> FinitenessResult:
    """BFS until the ball closes up (finite) or exceeds ``cap`` elements."""
    eng = engine_for(system)
    try:
        sph = eng.spheres(4 * cap, cap=cap)  # length bound is moot, cap decides
    except CapExceeded:
        return FinitenessResult(False, None)
    return FinitenessResult(True, sum(len(s) for s in sph))


def _labels_within(system, allowed):
    rows = system.matrix.rows
    n = system.rank
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] not in allowed:
                return False
    return True


def _vector_counts(system, L, cap):
    import numpy as np

    n = system.rank
    cart = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            m = system.matrix.rows[i][j]
            cart[i][j] = 2 if m == INF else (0 if m == 2 else 1)

    def rows_sorted(a):
        # lexicographic row sort through a void view (rows become scalars)
        a = np.ascontiguousarray(a)
        v = a.view([("", a.dtype)] * a.shape[1]).ravel()
        order = np.argsort(v, kind="mergesort")
        return a[order], v[order]

    cur = np.ones((1, n), dtype=np.int64)
    cur_v = rows_sorted(cur)[1]
    prev_v = None
    counts = [1]
    total = 1
    for _ in range(L):
        k = len(cur)
        allc = np.empty((n * k, n), dtype=np.int64)
        for s in range(n):
            block = allc[s * k:(s + 1) * k]
            np.copyto(block, cur)
            col = cur[:, s].copy()
            for t in range(n):
                c = cart[s][t]
                if c:
                    block[:, t] += c * col
            block[:, s] = -col
        if np.abs(allc).max() > 2**60:
            raise OverflowError("orbit coordinates out of int64 safety range")
        sorted_c, v = rows_sorted(allc)
        del allc
        keep = np.ones(len(v), dtype=bool)
        keep[1:] = v[1:] != v[:-1]
        sorted_c, v = sorted_c[keep], v[keep]
        if prev_v is not None and len(prev_v):
            pos = np.searchsorted(prev_v, v)
            pos[pos == len(prev_v)] = len(prev_v) - 1
            keep = prev_v[pos] != v
            sorted_c, v = sorted_c[keep], v[keep]
        counts.append(int(len(sorted_c)))
        total += len(sorted_c)
        if cap is not None and total > cap:
            raise CapExceeded(f"ball exceeds cap {cap}")
        if not len(sorted_c):
            break
        prev_v, cur, cur_v = cur_v, sorted_c, v
    return counts


def _rightangled_counts(system, L):
    n = system.rank
    commute = [0] * n
    for i in range(n):
        for j in range(n):
            if i != j and system.matrix.rows[i][j] == 2:
                commute[i] |= 1 << j
    counts = {0: 1}
    out = [1]
    for _ in range(L):
        raw = {}
        for mask, c in counts.items():
            for s in range(n):
                if mask >> s & 1:
                    continue
                new = (1 << s) | (mask & commute[s])
                raw[new] = raw.get(new, 0) + c
        counts = {}
        tot = 0
        for mask, r in raw.items():
            d = bin(mask).count("1")
            q, rem = divmod(r, d)
            # exactness is the structural self-check of the descent recursion
            assert rem == 0, "right-angled descent recursion violated"
            counts[mask] = q
            tot += q
        out.append(tot)
        if tot == 0:
            break
    return out


def enumerate_ball(
    system: CoxeterSystem,
    L: int,
    cap=DEFAULT_CAP,
    engine="auto",
    want_elements=False,
) -> BallCensus:
    """Exact census of the ball of radius L: counts per length 0..L.

    ``want_elements`` forces the ``words`` engine, which also returns every
    element as a canonical normal form.  The counting engines (``vector``,
    ``dp``) are picked automatically for large censuses when the label set
    allows; they return ``elements=None``.
    """
    if L < 0:
        raise ValueError("negative radius")
    if engine == "auto":
        if want_elements:
            engine = "words"
        elif _labels_within(system, {2, INF}) and (L > 6 or system.rank >= 6):
            engine = "dp"
        elif _labels_within(system, {2, 3, INF}) and (L > 8 or (system.rank >= 4 and L > 5)):
            engine = "vector"
        else:
            engine = "words"

    if engine == "dp":
        if not _labels_within(system, {2, INF}):
            raise ValueError("dp engine needs a right-angled system")
        counts = _rightangled_counts(system, L)
    elif engine == "vector":
        if not _labels_within(system, {2, 3, INF}):
            raise ValueError("vector engine needs labels within {2, 3, inf}")
        counts = _vector_counts(system, L, cap)
    elif engine == "words":
        eng = engine_for(system)
        sph = eng.spheres(L, cap=cap)
        counts = [len(s) for s in sph]
        if want_elements:
            elements = [
                tuple(NormalForm(_to_names(system, w)) for w in s) for s in sph
            ]
            counts += [0] * (L + 1 - len(counts))
            elements += [()] * (L + 1 - len(elements))
            return BallCensus(tuple(counts), tuple(elements), "words", system.generators)
    else:
        raise ValueError(f"unknown engine {engine!r}")

    counts = list(counts) + [0] * (L + 1 - len(counts))
    return BallCensus(tuple(counts[: L + 1]), None, engine, system.generators)
