import random
from fractions import Fraction

import pytest

from vlie.lie_core import SymPoly, heis3, sl2, sl2_form, sym_poisson
from vlie.poisson_c2 import (
    DPoly,
    PoissonPresentation,
    VPDiffAlgebra,
    c2_reduce,
    constant_order_table,
    p2_bracket,
    p2_generators,
    p2_product,
    p2_structure,
    pvpa_quotient,
    ultra_poisson_of_lie,
    verify_p2_iso,
    vps_add,
    vps_skew_transfer,
)
from vlie.vacuum_module import VacuumModule, state_add
from vlie.vertex_lie import VLStructure, affine, heisenberg, loop, virasoro


@pytest.fixture(scope="module")
def vir():
    return virasoro()


@pytest.fixture(scope="module")
def vir_mod(vir):
    return VacuumModule(vir)


@pytest.fixture(scope="module")
def aff_mod():
    return VacuumModule(affine(sl2(), sl2_form()), {"c": 1})


@pytest.fixture(scope="module")
def loop_mod():
    return VacuumModule(loop(sl2()), {})


class TestC2Reduce:
    def test_depth_two_drops(self, vir_mod):
        s = vir_mod.state([([("omega", -2)], 1)])
        assert c2_reduce(vir_mod, s).is_zero()

    def test_square_of_generator(self, vir_mod):
        s = vir_mod.state([([("omega", -1), ("omega", -1)], 1)])
        names = p2_generators(vir_mod.structure)
        assert c2_reduce(vir_mod, s) == SymPoly(names, {(2, 0): 1})

    def test_affine_product(self, aff_mod):
        s = aff_mod.state([([("e", -1), ("f", -1)], 1)])
        out = c2_reduce(aff_mod, s)
        names = p2_generators(aff_mod.structure)
        e = SymPoly.generator(names, "e")
        f = SymPoly.generator(names, "f")
        assert out == e * f


class TestP2Ops:
    def test_product_of_conformal_vector(self, vir_mod):
        w = vir_mod.generator_state("omega")
        names = p2_generators(vir_mod.structure)
        assert p2_product(vir_mod, w, w) == SymPoly(names, {(2, 0): 1})

    def test_bracket_of_conformal_vector_vanishes(self, vir_mod):
        w = vir_mod.generator_state("omega")
        assert p2_bracket(vir_mod, w, w).is_zero()

    def test_affine_bracket_is_structure_constant(self, aff_mod):
        e = aff_mod.generator_state("e")
        f = aff_mod.generator_state("f")
        names = p2_generators(aff_mod.structure)
        assert p2_bracket(aff_mod, e, f) == SymPoly.generator(names, "h")

    def test_deep_states_absorb(self, vir_mod, aff_mod):
        # a_{-1} (depth >= 2 state) stays in the dropped span
        for module, gen in ((vir_mod, "omega"), (aff_mod, "h")):
            a = module.generator_state(gen)
            deep = module.state([([(gen, -3), (gen, -1)], 1)])
            assert p2_product(module, a, deep).is_zero()

    def test_lambda_substitution_order(self, vir):
        # evaluating the central character before or after the quotient
        # reduction gives the same polynomial
        plain = VacuumModule(vir)
        quot = VacuumModule(vir, {"c": Fraction(1, 2)})
        pool = quot.basis_states_upto(4)
        rng = random.Random(13)
        for _ in range(8):
            a, b = rng.choice(pool), rng.choice(pool)
            for n in (-1, 0):
                before = c2_reduce(quot, quot.mode_of_state(a, n, b))
                after = c2_reduce(plain, plain.mode_of_state(a, n, b)).substitute(
                    {"c": Fraction(1, 2)}
                )
                assert before == after, n

    def test_leibniz_through_the_module(self, aff_mod):
        rng = random.Random(31)
        pres = p2_structure(aff_mod.structure, {"c": 1})
        pool = aff_mod.basis_states_upto(2)
        for _ in range(6):
            a, b, c = (rng.choice(pool) for _ in range(3))
            ab = aff_mod.mode_of_state(a, -1, b)
            lhs = p2_bracket(aff_mod, ab, c)
            rhs = (c2_reduce(aff_mod, a) * p2_bracket(aff_mod, b, c)
                   + c2_reduce(aff_mod, b) * p2_bracket(aff_mod, a, c))
            assert pres.reduce_mod_ideal(lhs) == pres.reduce_mod_ideal(rhs)


class TestP2Structure:
    def test_virasoro_quotient_is_polynomial_ring(self, vir):
        pres = p2_structure(vir, {"c": Fraction(1, 2)})
        assert pres.generators == ("omega", "c")
        assert pres.table == {}
        assert len(pres.ideal) == 1
        reduced = pres.reduce_mod_ideal(pres.generator("c"))
        assert reduced == SymPoly.constant(pres.generators, Fraction(1, 2))
        assert pres.poisson_ideal_problems() == []

    def test_loop_sl2_gives_symmetric_algebra(self):
        pres = p2_structure(loop(sl2()))
        assert pres.generators == ("e", "h", "f")
        g = sl2()
        for i, a in enumerate(g.names):
            for j, b in enumerate(g.names):
                want = g.bracket_poly(i, j)
                got = pres.bracket_gens(i, j)
                assert got == want.rename(pres.generators), (a, b)

    def test_affine_level_note(self):
        s = affine(sl2(), sl2_form(), highest_root="e")
        pres = p2_structure(s, {"c": 2})
        assert any("e^3" in note for note in pres.notes)
        # bracket restricted to the algebra generators matches sl2,
        # embedded into the four-generator polynomial ring
        g = sl2()
        for i in range(3):
            for j in range(3):
                want = SymPoly.zero(pres.generators)
                for k, c in g.bracket_basis(i, j).items():
                    want = want + pres.generator(g.names[k]).scale(c)
                got_sub = pres.reduce_mod_ideal(pres.bracket_gens(i, j))
                assert got_sub == want

    def test_presentation_rejects_asymmetric_table(self):
        names = ("a", "b")
        one = SymPoly.constant(names, 1)
        with pytest.raises(ValueError):
            PoissonPresentation(names, {("a", "b"): one, ("b", "a"): one})


class TestVerifyP2Iso:
    def test_virasoro(self, vir):
        assert verify_p2_iso(vir, {"c": Fraction(1, 2)}, samples=15, seed=3) == []

    def test_affine_sl2(self):
        s = affine(sl2(), sl2_form())
        assert verify_p2_iso(s, {"c": 1}, samples=15, seed=4) == []

    def test_loop_sl2(self):
        assert verify_p2_iso(loop(sl2()), {}, samples=15, seed=5) == []

    def test_corrupted_presentation_detected(self):
        # negative control: a wrong bracket table on the polynomial side
        # must be flagged against the vacuum-module computation
        s = loop(sl2())
        good = p2_structure(s)
        bad_table = {}
        for (ia, ib), val in good.table.items():
            bad_table[(good.generators[ia], good.generators[ib])] = val
        e_h = SymPoly.generator(good.generators, "h")
        bad_table[("e", "f")] = e_h + SymPoly.generator(good.generators, "e")
        bad_table[("f", "e")] = -bad_table[("e", "f")]
        bad = PoissonPresentation(good.generators, bad_table)
        assert verify_p2_iso(s, {}, samples=10, seed=6, presentation=bad)


class TestVPBracket:
    def test_ultra_bracket_on_generators(self):
        g = sl2()
        vp = ultra_poisson_of_lie(g)
        e, f = vp.generator("e"), vp.generator("f")
        out = vp.vp_bracket(e, f)
        assert list(out) == [0]
        assert out[0] == vp.generator("h")

    def test_bracket_with_unit_vanishes(self):
        vp = ultra_poisson_of_lie(sl2())
        one = DPoly.constant(1)
        assert vp.vp_bracket(vp.generator("e"), one) == {}
        assert vp.vp_bracket(one, vp.generator("e")) == {}

    def test_leibniz_shape(self):
        vp = ultra_poisson_of_lie(sl2())
        e, h, f = (vp.generator(n) for n in ("e", "h", "f"))
        lhs = vp.vp_bracket(e, h * f)
        rhs = vps_add(
            {k: p * f for k, p in vp.vp_bracket(e, h).items()},
            {k: p * h for k, p in vp.vp_bracket(e, f).items()},
        )
        assert lhs == rhs

    def test_ultra_mode_products(self):
        g = sl2()
        vp = ultra_poisson_of_lie(g)
        rng = random.Random(8)
        for _ in range(10):
            a = DPoly.variable(rng.randrange(3)) * DPoly.variable(rng.randrange(3))
            b = DPoly.variable(rng.randrange(3))
            prods = vp.mode_products(a, b)
            assert set(prods) <= {0}
            # order-0 product matches the symmetric-algebra bracket
            def to_sym(p):
                out = SymPoly.zero(g.names)
                for mono, c in p.coeffs.items():
                    exps = [0] * 3
                    for (i, j) in mono:
                        assert j == 0
                        exps[i] += 1
                    out = out + SymPoly(g.names, {tuple(exps): c})
                return out
            got = to_sym(prods.get(0, DPoly()))
            want = sym_poisson(g, to_sym(a), to_sym(b))
            assert got == want

    def test_constant_table_mode_products(self):
        vp = constant_order_table(("u1", "u2"), [[2, 1], [1, 3]])
        prods = vp.mode_products(vp.generator("u1"), vp.generator("u2"))
        assert list(prods) == [1]
        assert prods[1] == DPoly.constant(1)
        assert vp.mode_products(DPoly.constant(1), DPoly.constant(1)) == {}

    def test_derivative_variables(self):
        vp = ultra_poisson_of_lie(sl2())
        e = vp.generator("e")
        f1 = DPoly.variable(2, 1)  # f^{(1)}
        out = vp.vp_bracket(e, f1)
        # {e(x), f'(y)} = d/dy ({e,f}(y)Delta) = h'(y)Delta - h(y)Delta^(1)
        assert out[0] == DPoly.variable(1, 1)
        assert out[1] == DPoly.variable(1).scale(-1)


class TestSkewAndConfluence:
    def test_ultra_table_skew(self):
        assert ultra_poisson_of_lie(sl2()).check_table_skew() == []

    def test_symmetric_constant_table_skew(self):
        vp = constant_order_table(("u1", "u2"), [[2, 1], [1, 3]])
        assert vp.check_table_skew() == []

    def test_asymmetric_constant_table_fails(self):
        vp = constant_order_table(("u1", "u2"), [[0, 1], [2, 0]])
        assert vp.check_table_skew()

    def test_full_bracket_skew_via_window(self):
        # {f(x), g(y)} = -sigma({g(x), f(y)}) for polynomial arguments,
        # compared through the raw mode-window expansion
        rng = random.Random(21)
        vp = ultra_poisson_of_lie(heis3())
        gens = [DPoly.variable(i, j) for i in range(3) for j in range(2)]
        for _ in range(8):
            f = rng.choice(gens) * rng.choice(gens)
            g = rng.choice(gens)
            lhs = vp.vp_bracket(f, g)
            rhs = vps_skew_transfer(vp.vp_bracket(g, f))
            assert vp.mode_window(lhs, 6) == vp.mode_window(rhs, 6)

    def test_mode_products_round_trip(self):
        vp = ultra_poisson_of_lie(sl2())
        e, h = vp.generator("e"), vp.generator("h")
        f = e * h
        g = vp.generator("f")
        series = vp.vp_bracket(f, g)
        prods = vp.mode_products(f, g)
        rebuilt = {}
        fact = 1
        for i, p in sorted(prods.items()):
            fact = 1
            for t in range(1, i + 1):
                fact *= t
            rebuilt = vps_add(rebuilt, {i: p.scale(Fraction(1, fact))})
        assert vp.mode_window(series, 5) == vp.mode_window(rebuilt, 5)


class TestPvpaQuotient:
    def test_ultra_recovers_symmetric_poisson(self):
        g = sl2()
        pres = pvpa_quotient(ultra_poisson_of_lie(g))
        assert pres.generators == g.names
        for i in range(3):
            for j in range(3):
                assert pres.bracket_gens(i, j) == g.bracket_poly(i, j)

    def test_central_table_gives_abelian(self):
        vp = constant_order_table(("u1", "u2"), [[0, 1], [1, 0]])
        pres = pvpa_quotient(vp)
        assert pres.table == {}

    def test_single_generator_zero_bracket(self):
        vp = VPDiffAlgebra(("u",), {})
        pres = pvpa_quotient(vp)
        assert pres.generators == ("u",)
        assert pres.table == {}
