from fractions import Fraction

import pytest

from focalgroups.boundary import (
    BOUNDED,
    ELLIPTIC,
    FOCAL,
    HOROCYCLIC,
    HYPERBOLIC,
    LINEAL,
    PARABOLIC,
    StabilizationError,
    action_type,
    axis_distance,
    busemann_quasicharacter,
    horokernel,
    isometry_type,
    schottky_semigroup_check,
    translation_number,
)
from focalgroups.families import LamplighterFamily, NadicFamily
from focalgroups.words import alpha_point, h_point, identity_point, sample_points

L2 = LamplighterFamily(2)
N2 = NadicFamily(2)


class TestTranslationNumber:
    def test_alpha(self):
        rep = translation_number(alpha_point(L2, 1), N=16)
        assert rep.estimate == rep.upper_bound == rep.value == 1
        assert rep.exact

    def test_identity(self):
        rep = translation_number(identity_point(L2), N=8)
        assert rep.estimate == 0 and rep.value == 0

    def test_alpha_powers_exact(self):
        for k in range(-8, 9):
            rep = translation_number(alpha_point(L2, k), N=12)
            assert rep.upper_bound == abs(k)
            assert rep.estimate == abs(k)

    def test_nadic_logarithmic_orbit(self):
        rep = translation_number(h_point(N2, N2.element(1)), N=64)
        assert rep.value == 0
        assert rep.upper_bound <= Fraction(1, 4)

    @pytest.mark.parametrize("family", [L2, N2], ids=lambda f: f.name)
    def test_linear_growth_certificate(self, family):
        # excess d(1, g^n) - n|m| stabilizes: brute force for |m| <= 3
        from focalgroups.boundary import orbit_lengths

        gens = sample_points(family, 8, max_len=4, seed=21)
        for g in gens:
            for m in (1, 2, 3):
                gm = g * alpha_point(family, m - g.m)  # force the exponent
                lengths = orbit_lengths(gm, 64)
                excess = [dn - (i + 1) * abs(gm.m) for i, dn in enumerate(lengths)]
                assert min(excess) >= 0
                assert excess[63] == excess[31]


class TestIsometryType:
    def test_lamp_is_elliptic(self):
        t = isometry_type(h_point(L2, L2.lamp(0)))
        assert t.kind == ELLIPTIC and t.exact and t.witness["order"] == 2

    def test_nadic_unit_is_parabolic(self):
        t = isometry_type(h_point(N2, N2.element(1)))
        assert t.kind == PARABOLIC and t.exact

    def test_nonzero_exponent_is_hyperbolic(self):
        for m in (-3, -1, 1, 2, 3):
            t = isometry_type(h_point(L2, L2.lamp(0)) * alpha_point(L2, m))
            assert t.kind == HYPERBOLIC and t.exact
            assert t.witness["translation_number"] == abs(m)

    def test_identity_elliptic(self):
        t = isometry_type(identity_point(N2))
        assert t.kind == ELLIPTIC and t.witness["order"] == 1

    def test_busatt_consistency(self):
        # hyperbolic iff the quasicharacter does not vanish
        for family in (L2, N2):
            for g in sample_points(family, 40, max_len=6, seed=22):
                beta = busemann_quasicharacter(g, N=8).value
                hyp = isometry_type(g).kind == HYPERBOLIC
                assert hyp == (beta != 0)


class TestHorokernel:
    def test_alpha_increment(self):
        assert horokernel(identity_point(L2), alpha_point(L2, 1)) == 1

    def test_self_is_zero(self):
        x = h_point(L2, L2.lamp(1)) * alpha_point(L2, 2)
        assert horokernel(x, x) == 0

    def test_A_elements_small(self):
        one = identity_point(L2)
        window = L2.default_window(4)
        for a in L2.iter_A_window(window):
            if a != L2.identity():
                assert abs(horokernel(one, h_point(L2, a))) <= 1

    def test_antisymmetry(self):
        x = h_point(L2, L2.lamp(-1))
        y = alpha_point(L2, 2)
        assert horokernel(x, y) == -horokernel(y, x)

    def test_non_stabilization_raises(self):
        one = identity_point(L2)
        with pytest.raises(StabilizationError):
            horokernel(one, h_point(L2, L2.lamp(-40)), N=10, stable_window=6)


class TestBusemannQuasicharacter:
    def test_alpha_is_one(self):
        est = busemann_quasicharacter(alpha_point(L2, 1))
        assert est.value == 1 and est.defect_bound == 0
        assert est.estimate == 1

    def test_vanishes_on_H(self):
        for h in (L2.lamp(0), L2.lamp(-2), L2.multiply(L2.lamp(1), L2.lamp(3))):
            est = busemann_quasicharacter(h_point(L2, h))
            assert est.value == 0
            assert est.estimate == 0

    def test_homomorphism_value(self):
        g = h_point(L2, L2.lamp(0)) * alpha_point(L2, -2)
        assert busemann_quasicharacter(g).value == -2

    def test_homogeneity_exact(self):
        g = h_point(L2, L2.lamp(1)) * alpha_point(L2, 2)
        beta_g = busemann_quasicharacter(g).value
        for n in range(-8, 9):
            assert busemann_quasicharacter(g**n).value == n * beta_g

    @pytest.mark.parametrize("family", [L2, N2], ids=lambda f: f.name)
    def test_increment_tracks_value(self, family):
        # |beta(g) - h(1, g)| stays uniformly small on samples
        for g in sample_points(family, 30, max_len=6, seed=23):
            est = busemann_quasicharacter(g, N=8)
            assert abs(est.value - est.increment) <= 2

    @pytest.mark.parametrize("family", [L2, N2], ids=lambda f: f.name)
    def test_quasicharacter_sandwich(self, family):
        # C^-1|f1| - C <= |f2| <= C|f1| + C with matching signs, C = 2,
        # for f1 the exponent projection and f2 the numeric estimate.
        C = Fraction(2)
        for g in sample_points(family, 25, max_len=6, seed=24):
            f1 = Fraction(g.m)
            f2 = busemann_quasicharacter(g, N=16).estimate
            assert abs(f1) / C - C <= abs(f2) <= C * abs(f1) + C
            if f1 != 0:
                assert f1 * f2 > 0 or abs(f2) <= Fraction(1, 4)
            assert abs(f2 - f1) <= Fraction(1, 4)


class TestActionType:
    def test_alpha_is_lineal(self):
        v = action_type([alpha_point(L2, 1)])
        assert v.kind == LINEAL

    def test_full_group_is_focal(self):
        v = action_type([alpha_point(L2, 1), h_point(L2, L2.lamp(0))])
        assert v.kind == FOCAL
        v2 = action_type([alpha_point(N2, 1), h_point(N2, N2.element(1))])
        assert v2.kind == FOCAL

    def test_finite_lamp_subgroup_is_bounded(self):
        gens = [h_point(L2, L2.lamp(i)) for i in (0, 1, 2)]
        v = action_type(gens)
        assert v.kind == BOUNDED and v.exact
        assert v.witnesses["subgroup_order"] == 8

    def test_nadic_A_generators_horocyclic(self):
        v = action_type([h_point(N2, N2.element(1))])
        assert v.kind == HOROCYCLIC and v.exact
        v2 = action_type([h_point(N2, N2.element(1)), h_point(N2, N2.element(Fraction(1, 2)))])
        assert v2.kind == HOROCYCLIC

    def test_axis_distance(self):
        assert axis_distance(alpha_point(L2, 5)) == 0
        assert axis_distance(h_point(L2, L2.lamp(-3))) > 2

    def test_empty_generators_rejected(self):
        with pytest.raises(ValueError):
            action_type([])


class TestSchottky:
    def test_alpha_pair_injective(self):
        a = alpha_point(L2, 1)
        b = a * h_point(L2, L2.lamp(0))
        rep = schottky_semigroup_check(a, b, L=10)
        assert rep.injective and rep.report.injective
        assert rep.words_checked == 2**11 - 2
        assert rep.report.multiplicative_constant < 4
        assert rep.report.additive_constant <= 4

    def test_equal_pair_rejected(self):
        rep = schottky_semigroup_check(alpha_point(L2, 1), alpha_point(L2, 1), L=6)
        assert not rep.injective

    def test_lamp_pair_rejected(self):
        rep = schottky_semigroup_check(h_point(L2, L2.lamp(0)), h_point(L2, L2.lamp(1)), L=8)
        assert not rep.injective
        assert rep.collision is not None

    def test_depth_guard(self):
        with pytest.raises(ValueError):
            schottky_semigroup_check(alpha_point(L2, 1), alpha_point(L2, 2), L=15)
