import random
from fractions import Fraction

import pytest

from vlie.lie_core import (
    BilinearForm,
    FiniteLieAlgebra,
    SymPoly,
    abelian,
    check_invariance,
    check_lie_axioms,
    heis3,
    sl2,
    sl2_form,
    sym_poisson,
)


def random_sympoly(rng, names, max_degree=4):
    coeffs = {}
    for _ in range(rng.randint(1, 5)):
        e = [0] * len(names)
        for _ in range(rng.randint(0, max_degree)):
            e[rng.randrange(len(names))] += 1
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        if c:
            coeffs[tuple(e)] = coeffs.get(tuple(e), Fraction(0)) + c
    return SymPoly(names, coeffs)


class TestAxioms:
    def test_abelian_valid(self):
        assert check_lie_axioms(("a", "b", "c"), {}) == []

    def test_sl2_valid(self):
        table = {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}}
        assert check_lie_axioms(("e", "h", "f"), table) == []

    def test_broken_sl2_reports_jacobi(self):
        table = {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"e": 1}}
        problems = check_lie_axioms(("e", "h", "f"), table)
        assert any("Jacobi" in p for p in problems)

    def test_symmetric_entry_reports_antisymmetry(self):
        table = {("a", "b"): {"a": 1}, ("b", "a"): {"a": 1}}
        problems = check_lie_axioms(("a", "b"), table)
        assert any("antisymmetry" in p for p in problems)

    def test_constructor_rejects_invalid(self):
        with pytest.raises(ValueError):
            FiniteLieAlgebra(("e", "h", "f"), {("e", "f"): {"e": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}})


class TestInvariance:
    def test_sl2_standard_form(self):
        assert check_invariance(sl2(), sl2_form()) == []

    def test_identity_form_fails_on_sl2(self):
        ident = BilinearForm([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert check_invariance(sl2(), ident)

    def test_any_form_invariant_on_abelian(self):
        form = BilinearForm([[2, 1], [1, 3]])
        assert check_invariance(abelian(2), form) == []

    def test_nondegeneracy(self):
        assert sl2_form().is_nondegenerate()
        assert not BilinearForm([[1, 1], [1, 1]]).is_nondegenerate()


class TestSymPoisson:
    def test_generators_give_bracket(self):
        g = sl2()
        e, f = g.generator("e"), g.generator("f")
        assert sym_poisson(g, e, f) == g.generator("h")

    def test_leibniz_example(self):
        g = sl2()
        e, f = g.generator("e"), g.generator("f")
        assert sym_poisson(g, e * e, f) == g.generator("h") * e.scale(2)

    def test_axioms_randomized(self):
        rng = random.Random(23)
        for g in (sl2(), heis3()):
            for _ in range(20):
                a = random_sympoly(rng, g.names)
                b = random_sympoly(rng, g.names)
                c = random_sympoly(rng, g.names)
                # antisymmetry
                assert sym_poisson(g, a, b) == -sym_poisson(g, b, a)
                # Leibniz
                assert sym_poisson(g, a, b * c) == (
                    sym_poisson(g, a, b) * c + sym_poisson(g, a, c) * b
                )
                # Jacobi
                jac = (
                    sym_poisson(g, a, sym_poisson(g, b, c))
                    + sym_poisson(g, b, sym_poisson(g, c, a))
                    + sym_poisson(g, c, sym_poisson(g, a, b))
                )
                assert jac.is_zero()

    def test_degree_bookkeeping(self):
        # deg {f,g} = deg f + deg g - 1 for homogeneous inputs with linear brackets
        g = sl2()
        e, h, f = (g.generator(n) for n in g.names)
        p = e * e * h
        q = f * f
        out = sym_poisson(g, p, q)
        assert not out.is_zero()
        assert out.total_degree() == p.total_degree() + q.total_degree() - 1

    def test_substitute(self):
        g = sl2()
        p = g.generator("e") * g.generator("h") + SymPoly.constant(g.names, 3)
        out = p.substitute({"h": Fraction(1, 2)})
        assert out == g.generator("e").scale(Fraction(1, 2)) + SymPoly.constant(g.names, 3)
