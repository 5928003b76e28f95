import random
from fractions import Fraction

import pytest

from focalgroups.families import (
    INF,
    FamilyError,
    LamplighterFamily,
    LamplighterWindow,
    NadicFamily,
    NadicWindow,
    ProductFamily,
    SpoofIdentityFamily,
    brute_force_a_length,
    family_from_config,
    validate_a_length,
    verify_confining,
)

L2 = LamplighterFamily(2)
L3 = LamplighterFamily(3)
N2 = NadicFamily(2)
N3 = NadicFamily(3)
PROD = ProductFamily(L2, N3)

ALL = [L2, L3, N2, N3, PROD]


def sample_elements(family, count, seed=0):
    rng = random.Random(seed)
    window = family.default_window(5)
    pool = list(family.iter_window(window))
    return [rng.choice(pool) for _ in range(count)]


class TestGroupAxioms:
    @pytest.mark.parametrize("family", ALL, ids=lambda f: f.name)
    def test_axioms_on_window(self, family):
        e = family.identity()
        elems = sample_elements(family, 25, seed=1)
        for h in elems:
            assert family.multiply(h, e) == h == family.multiply(e, h)
            assert family.multiply(h, family.invert(h)) == e
            assert family.alpha(family.alpha_inv(h)) == h
            assert family.alpha_inv(family.alpha(h)) == h
        rng = random.Random(2)
        for _ in range(60):
            a, b, c = (rng.choice(elems) for _ in range(3))
            assert family.multiply(family.multiply(a, b), c) == family.multiply(a, family.multiply(b, c))
            assert family.alpha(family.multiply(a, b)) == family.multiply(family.alpha(a), family.alpha(b))

    @pytest.mark.parametrize("family", ALL, ids=lambda f: f.name)
    def test_canonical_bytes_injective(self, family):
        window = family.default_window(5)
        seen = {}
        for h in family.iter_window(window):
            key = family.canonical_bytes(h)
            assert key not in seen or seen[key] == h
            seen[key] = h

    @pytest.mark.parametrize("family", ALL, ids=lambda f: f.name)
    def test_a_length_basics(self, family):
        assert family.a_length(family.identity()) == 0
        for h in sample_elements(family, 30, seed=3):
            la = family.a_length(h)
            if h != family.identity():
                assert (la == 1) == family.in_A(h)

    @pytest.mark.parametrize("family", ALL, ids=lambda f: f.name)
    def test_a_length_subadditive_and_alpha_monotone(self, family):
        rng = random.Random(4)
        elems = sample_elements(family, 40, seed=5)
        for _ in range(80):
            h1, h2 = rng.choice(elems), rng.choice(elems)
            l1, l2 = family.a_length(h1), family.a_length(h2)
            if l1 is not INF and l2 is not INF:
                assert family.a_length(family.multiply(h1, h2)) <= l1 + l2
            la = family.a_length(h1)
            if la is not INF:
                assert family.a_length(family.alpha(h1)) <= la

    @pytest.mark.parametrize("family", ALL, ids=lambda f: f.name)
    def test_a_factorize_round_trip(self, family):
        for h in sample_elements(family, 20, seed=6):
            la = family.a_length(h)
            if la is INF:
                continue
            parts = family.a_factorize(h)
            assert len(parts) == la
            prod = family.identity()
            for a in parts:
                assert family.in_A(a)
                prod = family.multiply(prod, a)
            assert prod == h


class TestConfining:
    def test_lamplighter_passes_with_n0_zero(self):
        window = LamplighterWindow(-3, 3, 6)
        report = verify_confining(L2, window)
        assert report.passed and report.complete
        assert L2.n0 == 0

    def test_nadic_passes_with_n0_one(self):
        report = verify_confining(N2, NadicWindow(2, 3, 6))
        assert report.passed
        assert N2.n0 == 1
        # interval arithmetic: alpha(A.A) = [-1, 1] stays inside A
        assert N2.in_A(N2.alpha(Fraction(2)))
        assert not N2.in_A(Fraction(2))

    def test_product_passes(self):
        assert verify_confining(PROD).passed

    def test_identity_alpha_fails(self):
        report = verify_confining(SpoofIdentityFamily(2))
        assert not report.passed
        assert report.strict_witness is None  # alpha(A) = A is not strict

    def test_report_dict_has_scope(self):
        d = verify_confining(L2).as_dict()
        assert {"family", "window", "exhaust_depth", "passed"} <= set(d)


class TestALengthOracle:
    def test_lamplighter_values(self):
        assert L2.a_length(L2.lamp(0)) == 1
        assert L2.a_length(L2.lamp(-1)) is INF
        # A is a subgroup: the windowed closure of A.A is A itself
        window = LamplighterWindow(-3, 3, 6)
        a_win = set(L2.iter_A_window(window))
        products = {L2.multiply(a, b) for a in a_win for b in a_win}
        assert products == a_win
        assert brute_force_a_length(L2, L2.lamp(-1), window, max_k=4) is INF

    def test_nadic_ceiling_matches_brute_force(self):
        window = NadicWindow(3, 2, 6)
        assert N2.a_length(Fraction(5)) == 5
        assert validate_a_length(N2, window, max_k=5) == []

    def test_lamplighter_closed_form_matches_brute_force(self):
        assert validate_a_length(L2, LamplighterWindow(-2, 2, 4), max_k=4) == []

    def test_product_a_length_is_max(self):
        h = (L2.lamp(0), Fraction(5, 2))
        assert PROD.a_length(h) == max(1, N3.a_length(Fraction(5, 2)))


class TestCompactionIndex:
    def test_lamplighter_index(self):
        assert L3.compaction_index() == 3
        assert L2.compaction_index() == 2

    def test_lamplighter_index_by_coset_enumeration(self):
        # independent oracle: count cosets of the shift image inside the
        # windowed subgroup A
        for family in (L2, L3):
            window = LamplighterWindow(0, 2, 4)
            a_win = list(family.iter_window(window))  # supports in [0, 2]
            image = {family.alpha(h) for h in family._iter_configs(0, 1)}  # supports in [1, 2]
            reps = {frozenset(family.multiply(h, g) for g in image) for h in a_win}
            assert len(reps) * len(image) == len(a_win)
            assert len(reps) == family.compaction_index()

    def test_spoof_index_is_trivial(self):
        assert SpoofIdentityFamily(2).compaction_index() == 1

    def test_nadic_index_symbolic_and_lattice(self):
        assert N2.compaction_index() == 2
        # windowed lattice counts converge to the symbolic ratio
        assert abs(N2.lattice_count_ratio(8) - 2) < Fraction(1, 100)
        assert N3.compaction_index() == 3

    def test_product_multiplicative(self):
        assert ProductFamily(L2, N3).compaction_index() == 6


class TestSerialization:
    @pytest.mark.parametrize("family", ALL, ids=lambda f: f.name)
    def test_json_round_trip(self, family):
        for h in sample_elements(family, 15, seed=8):
            assert family.h_from_json(family.h_to_json(h)) == h

    def test_config_round_trip(self):
        for family in ALL:
            assert family_from_config(family.config()) == family

    def test_shorthand(self):
        assert family_from_config("lamplighter:5").q == 5
        assert family_from_config("nadic:3").n == 3
        prod = family_from_config("product(lamplighter:2,nadic:3)")
        assert isinstance(prod, ProductFamily)
        with pytest.raises(FamilyError):
            family_from_config("nonsense:1")

    def test_nadic_rejects_foreign_denominators(self):
        with pytest.raises(FamilyError):
            N2.element(Fraction(1, 3))
