from math import factorial, prod

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cnormal, random_form, random_linear
from oracles import differentiate, linear_power, naive_power, naive_product
from waring7.errors import AntiderivativeUndefined, PreconditionError
from waring7.poly import (
    DUAL,
    PRIMAL,
    DecompositionTerm,
    HomogeneousForm,
    antiderivative,
    apolar_apply,
    catalecticant_matrix,
    dual,
    dual_multiply,
    evaluate_dual,
    evaluate_primal,
    expand_terms,
    linear_substitution,
    monomials,
    power_of_linear,
    primal,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def lin(*c, side=PRIMAL):
    return HomogeneousForm.linear(side, c)


def test_monomial_order_is_graded_lex():
    assert monomials(3, 2) == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
    assert monomials(2, 3) == ((3, 0), (2, 1), (1, 2), (0, 3))
    assert len(monomials(3, 4)) == 15


def test_coefficient_length_checked():
    with pytest.raises(PreconditionError):
        HomogeneousForm(PRIMAL, 3, 2, [1, 2, 3])
    with pytest.raises(PreconditionError):
        HomogeneousForm(PRIMAL, 3, 1, [1, np.nan, 0])
    with pytest.raises(PreconditionError):
        HomogeneousForm(PRIMAL, 4, 1, [1, 0, 0, 0])


class TestApolarApply:
    def test_monomial_rule(self):
        out = apolar_apply(dual(3, 2, {(1, 1, 0): 1}), primal(3, 4, {(2, 1, 1): 1}))
        assert out.allclose(primal(3, 2, {(1, 0, 1): 2}))

    def test_absent_variable(self):
        out = apolar_apply(dual(3, 1, {(0, 0, 1): 1}), primal(3, 3, {(3, 0, 0): 1}))
        assert out.norm() == 0

    def test_triple_derivative_of_quartic_power(self):
        f = power_of_linear(lin(1, 1, 1), 4)
        x = dual(3, 3, {(1, 1, 1): 1})
        expected = differentiate(x, linear_power([1, 1, 1], 4))
        assert expected.allclose(24 * lin(1, 1, 1))
        assert apolar_apply(x, f).allclose(expected)

    def test_degree_too_high(self):
        with pytest.raises(PreconditionError):
            apolar_apply(dual(3, 3, {(1, 1, 1): 1}), primal(3, 2, {(2, 0, 0): 1}))

    def test_nvars_mismatch(self):
        with pytest.raises(PreconditionError):
            apolar_apply(dual(2, 1, {(1, 0): 1}), primal(3, 2, {(2, 0, 0): 1}))

    def test_side_mismatch(self):
        with pytest.raises(PreconditionError):
            apolar_apply(primal(3, 1, {(1, 0, 0): 1}), primal(3, 2, {(2, 0, 0): 1}))

    @pytest.mark.parametrize("nvars,dx,df", [(3, 1, 4), (3, 2, 4), (3, 3, 3), (2, 1, 3), (2, 2, 2)])
    def test_matches_symbolic_differentiation(self, rng, nvars, dx, df):
        x = random_form(rng, DUAL, nvars, dx)
        f = random_form(rng, PRIMAL, nvars, df)
        assert apolar_apply(x, f).allclose(differentiate(x, f), rtol=1e-12)


class TestPowers:
    def test_basis_vector(self):
        assert power_of_linear(lin(1, 0, 0), 4).allclose(primal(3, 4, {(4, 0, 0): 1}))

    def test_binomial(self):
        assert power_of_linear(lin(1, 1, 0), 2).allclose(primal(3, 2, {(2, 0, 0): 1, (1, 1, 0): 2, (0, 2, 0): 1}))

    def test_cube_against_repeated_multiplication(self):
        v = lin(2, 0, -1)
        expected = naive_power(v, 3)
        assert expected.allclose(primal(3, 3, {(3, 0, 0): 8, (2, 0, 1): -12, (1, 0, 2): 6, (0, 0, 3): -1}))
        assert power_of_linear(v, 3).allclose(expected)

    def test_degree_zero(self):
        assert power_of_linear(lin(3, 4, 5), 0).allclose(primal(3, 0, {(0, 0, 0): 1}))

    def test_random_complex(self, rng):
        for d in range(6):
            v = random_linear(rng)
            assert power_of_linear(v, d).allclose(naive_power(v, d), rtol=1e-12)


class TestDualMultiply:
    def test_examples(self):
        X0, X1, X2 = (dual(3, 1, {e: 1}) for e in [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        assert dual_multiply(X0, X1).allclose(dual(3, 2, {(1, 1, 0): 1}))
        assert dual_multiply(X0 + X1, X0 - X1).allclose(dual(3, 2, {(2, 0, 0): 1, (0, 2, 0): -1}))
        assert dual_multiply(dual_multiply(X0, X1), X2).allclose(dual(3, 3, {(1, 1, 1): 1}))

    def test_side_mismatch(self):
        with pytest.raises(PreconditionError):
            dual_multiply(dual(3, 1, {(1, 0, 0): 1}), primal(3, 1, {(1, 0, 0): 1}))

    def test_matches_naive_product(self, rng):
        a = random_form(rng, DUAL, 3, 2)
        b = random_form(rng, DUAL, 3, 1)
        assert dual_multiply(a, b).allclose(naive_product(a, b), rtol=1e-13)
        assert dual_multiply(a, b).allclose(dual_multiply(b, a), rtol=1e-14)


class TestEvaluateDual:
    def test_examples(self):
        assert evaluate_dual(dual(3, 3, {(1, 1, 1): 1}), lin(1, 1, 1)) == pytest.approx(1)
        assert evaluate_dual(dual(3, 2, {(2, 0, 0): 1}), lin(0, 1, 0)) == 0

    def test_against_brute_force(self):
        x = dual(3, 2, {(2, 0, 0): 1, (1, 1, 0): 2, (0, 2, 0): 1})
        v = lin(2, 0, 0)
        # (d/dy0)^2 (2 y0)^2 / 2! = 8 / 2
        brute = differentiate(x, linear_power([2, 0, 0], 2)).coeffs[0] / 2
        assert brute == pytest.approx(4)
        assert evaluate_dual(x, v) == pytest.approx(brute)

    def test_definition_on_random(self, rng):
        for d in (1, 2, 3):
            x = random_form(rng, DUAL, 3, d)
            v = random_linear(rng)
            direct = apolar_apply(x, power_of_linear(v, d)).coeffs[0] / factorial(d)
            assert evaluate_dual(x, v) == pytest.approx(direct, rel=1e-12)


class TestAntiderivative:
    def test_single_term(self):
        x = dual(3, 3, {(1, 1, 1): 1})
        v = lin(1, 1, 1)
        F = antiderivative([DecompositionTerm(1, v)], 1, x)
        assert F.allclose(power_of_linear(v, 4) / 24)
        assert apolar_apply(x, F).allclose(v)

    def test_undefined(self):
        with pytest.raises(AntiderivativeUndefined):
            antiderivative([DecompositionTerm(1, lin(1, 0, 0))], 1, dual(3, 1, {(0, 1, 0): 1}))

    def test_binary(self):
        terms = [DecompositionTerm(1, lin(1, 1)), DecompositionTerm(1, lin(1, -1))]
        x = dual(2, 1, {(1, 0): 1})
        F = antiderivative(terms, 2, x)
        expected = (power_of_linear(lin(1, 1), 3) + power_of_linear(lin(1, -1), 3)) / 3
        assert F.allclose(expected)
        target = linear_power([1, 1], 2) + linear_power([1, -1], 2)
        assert differentiate(x, F).allclose(target, rtol=1e-12)


class TestCatalecticant:
    def _rank(self, f):
        s = np.linalg.svd(catalecticant_matrix(f), compute_uv=False)
        return int(np.sum(s > 1e-9 * s[0]))

    def test_ranks(self, rng):
        assert self._rank(primal(3, 4, {(4, 0, 0): 1})) == 1
        assert self._rank(primal(3, 4, {(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1})) == 3
        assert self._rank(random_form(rng, PRIMAL, 3, 4)) == 6

    def test_symmetric_after_row_scaling(self, rng):
        m = catalecticant_matrix(random_form(rng, PRIMAL, 3, 4))
        scale = np.array([prod(factorial(e) for e in b) for b in monomials(3, 2)])
        sym = scale[:, None] * m
        assert np.allclose(sym, sym.T, rtol=1e-13)


def test_linear_substitution_matches_evaluation(rng):
    f = random_form(rng, PRIMAL, 3, 3)
    a = cnormal(rng, 3, 2)
    g = linear_substitution(f, a)
    for _ in range(3):
        z = cnormal(rng, 2)
        assert evaluate_primal(g, z) == pytest.approx(evaluate_primal(f, a @ z), rel=1e-12)


# properties


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(0, 2), st.integers(0, 2), st.integers(0, 4))
def test_leibniz_composition(seed, a, b, extra):
    rng = np.random.default_rng(seed)
    d = a + b + extra
    x, y = random_form(rng, DUAL, 3, a), random_form(rng, DUAL, 3, b)
    f = random_form(rng, PRIMAL, 3, d)
    lhs = apolar_apply(x, apolar_apply(y, f))
    assert lhs.allclose(apolar_apply(dual_multiply(x, y), f), rtol=1e-12)
    assert lhs.allclose(apolar_apply(y, apolar_apply(x, f)), rtol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 5))
def test_derivative_of_power(seed, d):
    rng = np.random.default_rng(seed)
    x = random_linear(rng, side=DUAL)
    v = random_linear(rng)
    lhs = apolar_apply(x, power_of_linear(v, d))
    rhs = d * evaluate_dual(x, v) * power_of_linear(v, d - 1)
    assert lhs.allclose(rhs, rtol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(1, 3), st.integers(1, 3))
def test_antiderivative_inverse(seed, r, d, delta):
    rng = np.random.default_rng(seed)
    x = random_form(rng, DUAL, 3, delta)
    terms = [DecompositionTerm(complex(cnormal(rng, 1)[0]), random_linear(rng)) for _ in range(r)]
    F = antiderivative(terms, d, x)
    target = expand_terms(terms, d)
    assert (apolar_apply(x, F) - target).norm() <= 1e-10 * target.norm()


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_evaluation_multiplicative(seed):
    rng = np.random.default_rng(seed)
    a, b = random_linear(rng, side=DUAL), random_linear(rng, side=DUAL)
    v = random_linear(rng)
    assert evaluate_dual(dual_multiply(a, b), v) == pytest.approx(evaluate_dual(a, v) * evaluate_dual(b, v), rel=1e-12)
