import math
import random

import pytest

from coxl2.system import CoxeterMatrix, build_system
from coxl2.words import (
    CapExceeded,
    coset_minimal,
    enumerate_ball,
    length,
    normal_form,
    probe_finiteness,
    right_descents,
)

INF = math.inf


def make(names, pairs, default=2):
    return build_system(CoxeterMatrix.from_pairs(names, pairs, default=default))


I23 = make(["s", "t"], {("s", "t"): 3})
I24 = make(["s", "t"], {("s", "t"): 4})
I25 = make(["s", "t"], {("s", "t"): 5})
DINF = make(["s", "t"], {("s", "t"): INF})
A3 = make(["a", "b", "c"], {("a", "b"): 3, ("b", "c"): 3})
T333 = make(["a", "b", "c"], {("a", "b"): 3, ("b", "c"): 3, ("a", "c"): 3})
K43 = make(list("abcd"), {(x, y): 3 for i, x in enumerate("abcd") for y in "abcd"[i + 1:]})
RA4 = make(list("abcd"), {(x, y): INF for x, y in [("a", "b"), ("b", "c"), ("c", "d")]})
B3 = make(["a", "b", "c"], {("a", "b"): 4, ("b", "c"): 3})


class TestNormalForm:
    def test_braid_classes_collapse(self):
        nf = normal_form(I23, ["s", "t", "s"])
        assert nf.word == ("s", "t", "s")
        assert normal_form(I23, ["t", "s", "t"]).word == ("s", "t", "s")

    def test_cancellation(self):
        assert normal_form(I23, ["s", "s"]).word == ()
        assert normal_form(I23, ["s", "t", "t", "s"]).word == ()

    def test_relation_shortens(self):
        # (st)^3 = e, so stst = ts
        assert normal_form(I23, ["s", "t", "s", "t"]).word == ("t", "s")
        assert length(I23, ["s", "t", "s", "t"]) == 2

    def test_free_product_words_stay_reduced(self):
        assert normal_form(DINF, ["s", "t", "s", "t"]).word == ("s", "t", "s", "t")
        assert length(DINF, ["s", "t", "s", "t", "s"]) == 5

    def test_lex_tiebreak(self):
        # the two reduced words for the I2(4) half-turn differ; canonical is lex-least
        assert normal_form(I24, ["t", "s", "t", "s"]).word == ("s", "t", "s", "t")

    def test_unknown_letter(self):
        with pytest.raises(Exception):
            normal_form(I23, ["s", "x"])

    def test_idempotent(self):
        rng = random.Random(7)
        for _ in range(50):
            w = [rng.choice("abc") for _ in range(rng.randint(0, 8))]
            nf = normal_form(T333, w)
            assert normal_form(T333, nf.word).word == nf.word

    def test_scramble_invariance(self):
        # apply random braid moves / insert ss pairs by hand; the canonical
        # form must not notice
        rng = random.Random(11)
        for _ in range(40):
            w = [rng.choice("st") for _ in range(rng.randint(0, 9))]
            base = normal_form(I25, w).word
            v = list(w)
            for _ in range(6):
                i = rng.randrange(len(v) + 1)
                g = rng.choice("st")
                v[i:i] = [g, g]
            assert normal_form(I25, v).word == base


class TestLength:
    def test_matches_permutation_model_a3(self):
        from .oracles import cayley_lengths, compose, symmetric_gens

        gens = symmetric_gens(4)
        dist = cayley_lengths(gens)
        by_gen = dict(zip("abc", gens))
        rng = random.Random(3)
        ident = tuple(range(4))
        for _ in range(60):
            w = [rng.choice("abc") for _ in range(rng.randint(0, 10))]
            p = ident
            for g in w:
                p = compose(p, by_gen[g])
            assert length(A3, w) == dist[p]

    def test_matches_signed_permutation_model_b3(self):
        from .oracles import cayley_lengths, compose, signed_permutation_gens

        f, s1, s2 = signed_permutation_gens(3)
        dist = cayley_lengths((f, s1, s2))
        by_gen = {"a": f, "b": s1, "c": s2}
        rng = random.Random(5)
        ident = tuple(range(6))
        for _ in range(60):
            w = [rng.choice("abc") for _ in range(rng.randint(0, 12))]
            p = ident
            for g in w:
                p = compose(p, by_gen[g])
            assert length(B3, w) == dist[p]


class TestBall:
    def test_dihedral_counts(self):
        from .oracles import sphere_counts, dihedral_gens

        for m in (3, 4, 5, 6):
            sys_ = make(["s", "t"], {("s", "t"): m})
            ball = enumerate_ball(sys_, 2 * m)
            assert list(ball.counts) == sphere_counts(dihedral_gens(m), 2 * m)

    def test_infinite_dihedral_counts(self):
        ball = enumerate_ball(DINF, 4)
        assert list(ball.counts) == [1, 2, 2, 2, 2]

    def test_a3_total(self):
        ball = enumerate_ball(A3, 6)
        assert ball.total == 24
        assert list(ball.counts) == [1, 3, 5, 6, 5, 3, 1]

    def test_elements_grouped_by_length(self):
        ball = enumerate_ball(I23, 3, want_elements=True)
        words = [[nf.word for nf in sphere] for sphere in ball.elements]
        assert words == [
            [()],
            [("s",), ("t",)],
            [("s", "t"), ("t", "s")],
            [("s", "t", "s")],
        ]
        assert len(ball.elements) == len(ball.counts)

    def test_cap_raises(self):
        with pytest.raises(CapExceeded):
            enumerate_ball(T333, 12, cap=100)

    def test_generator_order_irrelevant(self):
        fwd = make(list("abcd"), {(x, y): 3 for i, x in enumerate("abcd") for y in "abcd"[i + 1:]})
        rev = make(list("dcba"), {(x, y): 3 for i, x in enumerate("abcd") for y in "abcd"[i + 1:]})
        assert list(enumerate_ball(fwd, 5).counts) == list(enumerate_ball(rev, 5).counts)


class TestEngines:
    def test_vector_agrees_with_words(self):
        for sys_ in (DINF, T333, K43):
            w = enumerate_ball(sys_, 6, engine="words")
            v = enumerate_ball(sys_, 6, engine="vector")
            assert list(w.counts) == list(v.counts)
            assert v.engine == "vector"

    def test_dp_agrees_with_words(self):
        w = enumerate_ball(RA4, 7, engine="words")
        d = enumerate_ball(RA4, 7, engine="dp")
        assert list(w.counts) == list(d.counts)
        assert d.engine == "dp"

    def test_vector_rejects_bad_labels(self):
        with pytest.raises(ValueError):
            enumerate_ball(I24, 4, engine="vector")

    def test_dp_rejects_non_right_angled(self):
        with pytest.raises(ValueError):
            enumerate_ball(T333, 4, engine="dp")

    def test_auto_picks_fast_engine_when_legal(self):
        ball = enumerate_ball(K43, 9)
        assert ball.engine == "vector"
        ball = enumerate_ball(RA4, 9)
        assert ball.engine == "dp"

    def test_elements_force_words(self):
        ball = enumerate_ball(K43, 4, want_elements=True)
        assert ball.engine == "words"
        assert ball.elements is not None


class TestFiniteness:
    def test_dihedral(self):
        res = probe_finiteness(I25, cap=100)
        assert res.finite and res.size == 10

    def test_a3(self):
        res = probe_finiteness(A3, cap=1000)
        assert res.finite and res.size == 24

    def test_b3(self):
        res = probe_finiteness(B3, cap=1000)
        assert res.finite and res.size == 48

    def test_euclidean_triangle_exceeds_cap(self):
        res = probe_finiteness(T333, cap=1000)
        assert not res.finite and res.size is None

    def test_infinite_dihedral(self):
        assert not probe_finiteness(DINF, cap=100).finite


class TestCosetMinimal:
    def test_dihedral_examples(self):
        assert coset_minimal(I23, ["s", "t"], {"t"}).word == ("s",)
        assert coset_minimal(DINF, ["t", "s"], {"s"}).word == ("t",)

    def test_member_reduces_to_identity(self):
        assert coset_minimal(I23, ["t", "s", "t"], {"s", "t"}).word == ()

    def test_representative_has_no_descents_in_t(self):
        rng = random.Random(13)
        for _ in range(40):
            w = [rng.choice("abcd") for _ in range(rng.randint(0, 6))]
            tset = set(rng.sample("abcd", rng.randint(1, 3)))
            rep = coset_minimal(K43, w, tset)
            assert not (right_descents(K43, rep.word) & tset)
            # rep is in the same right coset: rep^{-1} w lies in W_T
            inv = list(rep)[::-1]
            resid = normal_form(K43, inv + list(normal_form(K43, w).word)).word
            assert set(resid) <= tset

    def test_minimality(self):
        # every element of rep * W_T is at least as long as rep
        for w in [["s"], ["t", "s"], ["s", "t", "s"], ["t", "s", "t", "s"]]:
            rep = coset_minimal(I24, w, {"t"})
            for x in [(), ("t",)]:
                prod = normal_form(I24, list(rep) + list(x)).word
                assert len(prod) >= len(rep)
