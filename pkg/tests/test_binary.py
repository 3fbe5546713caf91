import numpy as np
import pytest
import scipy.linalg

from conftest import cnormal, random_form, random_frame
from oracles import omega_matrix, proj_dist
from waring7.binary import (
    ProjMap,
    ProjPoint,
    binary_context,
    frame_from_matrix,
    is_square,
    l_basis,
    omega_map,
    omega_point,
    omega_system,
    quadric_perp,
    roots_of_dual_quadratic,
    standard_frame,
    sum_of_squares_coeffs,
)
from waring7.errors import (
    CollinearDirections,
    DegenerateFrame,
    InconsistentSystem,
    NotInKernel,
    OmegaDegenerate,
    PreconditionError,
    ZeroForm,
)
from waring7.poly import (
    DUAL,
    PRIMAL,
    HomogeneousForm,
    apolar_apply,
    dual,
    evaluate_dual,
    pairing,
    power_of_linear,
    primal,
)

B1 = dual(2, 1, {(1, 0): 1})
B2 = dual(2, 1, {(0, 1): 1})


def bin_lin(s, t):
    return HomogeneousForm.linear(PRIMAL, [s, t])


def random_perp_element(rng, q):
    ha, hb = quadric_perp(q)
    a, b = cnormal(rng, 2)
    return a * ha + b * hb


class TestFrame:
    def test_standard(self):
        fr = standard_frame()
        assert np.allclose(fr.v, np.eye(3))

    def test_dependent(self):
        with pytest.raises(DegenerateFrame):
            frame_from_matrix([[1, 0, 0], [0, 1, 0], [1, 1, 0]])

    def test_sum_frame(self):
        fr = frame_from_matrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
        # solved by hand: v0 = (y0 + y1 - y2)/2 and cyclic shifts
        assert np.allclose(fr.v[0], [0.5, 0.5, -0.5])
        assert np.allclose(fr.v[1], [-0.5, 0.5, 0.5])
        assert np.allclose(fr.v[2], [0.5, -0.5, 0.5])

    def test_dual_basis_identity(self, rng):
        fr = random_frame(rng)
        for i in range(3):
            for j in range(3):
                val = evaluate_dual(fr.dual_form(i), fr.primal_form(j))
                assert abs(val - (i == j)) <= 1e-12


class TestRestriction:
    def test_relabeling(self):
        ctx = binary_context(standard_frame(), 0)
        out = ctx.restrict(primal(3, 3, {(0, 2, 1): 1}))
        assert out.allclose(primal(2, 3, {(2, 1): 1}))

    def test_not_in_kernel(self):
        ctx = binary_context(standard_frame(), 0)
        with pytest.raises(NotInKernel):
            ctx.restrict(primal(3, 3, {(1, 2, 0): 1}))

    @pytest.mark.parametrize("i", [0, 1, 2])
    def test_round_trip(self, rng, i):
        fr = random_frame(rng)
        ctx = binary_context(fr, i)
        for _ in range(20):
            d = int(rng.integers(1, 5))
            p = random_form(rng, PRIMAL, 2, d)
            F = ctx.embed_primal(p)
            assert apolar_apply(fr.dual_form(i), F).norm() <= 1e-12 * F.norm()
            assert ctx.restrict(F).allclose(p, rtol=1e-12)

    def test_pairings_agree(self, rng):
        fr = random_frame(rng)
        ctx = binary_context(fr, 1)
        h = random_form(rng, DUAL, 2, 2)
        p = random_form(rng, PRIMAL, 2, 3)
        ternary = apolar_apply(ctx.embed_dual(h), ctx.embed_primal(p))
        assert ternary.allclose(ctx.embed_primal(apolar_apply(h, p)), rtol=1e-12)


class TestSquares:
    def test_examples(self):
        assert is_square(primal(2, 2, {(2, 0): 1, (1, 1): 2, (0, 2): 1}))
        assert not is_square(primal(2, 2, {(2, 0): 1, (0, 2): 1}))

    def test_perturbed_square(self):
        q = primal(2, 2, {(2, 0): 1, (1, 1): 2 * (1 + 1e-12), (0, 2): 1})
        assert is_square(q, 1e-9)

    def test_zero(self):
        with pytest.raises(ZeroForm):
            is_square(primal(2, 2, {}))


class TestQuadricPerp:
    def test_product(self):
        ha, hb = quadric_perp(primal(2, 2, {(1, 1): 1}))
        span = np.column_stack([ha.coeffs, hb.coeffs])
        for h in (dual(2, 2, {(2, 0): 1}), dual(2, 2, {(0, 2): 1})):
            c, *_ = np.linalg.lstsq(span, h.coeffs, rcond=None)
            assert np.allclose(span @ c, h.coeffs)

    def test_square(self):
        ha, hb = quadric_perp(primal(2, 2, {(2, 0): 1}))
        span = np.column_stack([ha.coeffs, hb.coeffs])
        for h in (dual(2, 2, {(1, 1): 1}), dual(2, 2, {(0, 2): 1})):
            c, *_ = np.linalg.lstsq(span, h.coeffs, rcond=None)
            assert np.allclose(span @ c, h.coeffs)

    def test_random_pairing(self, rng):
        for _ in range(10):
            q = random_form(rng, PRIMAL, 2, 2)
            ha, hb = quadric_perp(q)
            for h in (ha, hb):
                assert abs(pairing(h, q)) <= 1e-12 * q.norm()
            assert np.linalg.matrix_rank(np.column_stack([ha.coeffs, hb.coeffs])) == 2

    def test_zero(self):
        with pytest.raises(ZeroForm):
            quadric_perp(primal(2, 2, {}))


def omega_oracle(q, x, h):
    return scipy.linalg.null_space(omega_matrix(q, x, h), rcond=1e-10)


class TestOmega:
    def test_example_against_oracle(self):
        q = primal(2, 2, {(2, 0): 1, (0, 2): 1})
        h = dual(2, 2, {(1, 1): 1})
        F = omega_point(q, B2, h)
        ns = omega_oracle(q, B2, h)
        assert ns.shape[1] == 1
        assert proj_dist(ns[:, 0], F.coeffs) <= 1e-10
        assert apolar_apply(h, F).norm() <= 1e-10
        dF = apolar_apply(B2, F)
        assert np.linalg.matrix_rank(np.vstack([dF.coeffs, q.coeffs]), tol=1e-10) <= 1

    def test_random_against_oracle(self, rng):
        for _ in range(5):
            q = random_form(rng, PRIMAL, 2, 2)
            x = random_form(rng, DUAL, 2, 1)
            h = random_perp_element(rng, q)
            ns = omega_oracle(q, x, h)
            assert ns.shape[1] == 1
            assert proj_dist(ns[:, 0], omega_point(q, x, h).coeffs) <= 1e-9

    def test_h_not_apolar(self):
        q = primal(2, 2, {(2, 0): 1, (0, 2): 1})
        with pytest.raises(PreconditionError):
            omega_point(q, B2, dual(2, 2, {(2, 0): 1}))

    def test_square_q(self):
        q = primal(2, 2, {(2, 0): 1})
        with pytest.raises(OmegaDegenerate):
            omega_point(q, B2, dual(2, 2, {(0, 2): 1}))

    def test_prope_biconditional(self, rng):
        for _ in range(20):
            q = random_form(rng, PRIMAL, 2, 2)
            x = random_form(rng, DUAL, 2, 1)
            h = random_perp_element(rng, q)
            F = omega_point(q, x, h)
            assert apolar_apply(h, F).norm() <= 1e-9 * h.norm()
            sv = np.linalg.svd(omega_system(q, x, h), compute_uv=False)
            assert sv[-1] <= 1e-12 * sv[0] < sv[-2]
            # converse: other elements of L are not annihilated by h
            basis = l_basis(q, x)
            G = HomogeneousForm(PRIMAL, 2, 3, basis @ cnormal(rng, 2))
            if apolar_apply(h, G).norm() > 1e-6 * G.norm():
                assert proj_dist(G.coeffs, F.coeffs) > 1e-6

    def test_map_consistency_and_fourth_point(self, rng):
        for _ in range(10):
            q = random_form(rng, PRIMAL, 2, 2)
            x = random_form(rng, DUAL, 2, 1)
            perp = quadric_perp(q)
            basis = l_basis(q, x)
            m = omega_map(q, x, perp, basis)
            ha, hb = perp
            for coords, h in [((1, 0), ha), ((0, 1), hb), ((1, 2), ha + 2 * hb), ((1j, -0.3), 1j * ha - 0.3 * hb)]:
                image = basis @ m.apply(np.array(coords, complex))
                assert proj_dist(image, omega_point(q, x, h).coeffs) <= 1e-9


class TestRoots:
    def _check(self, h, expected):
        rp = roots_of_dual_quadratic(h)
        got = [p.coords for p in rp]
        for e in expected:
            assert min(proj_dist(e, g) for g in got) <= 1e-12
        return rp

    def test_examples(self):
        self._check(dual(2, 2, {(2, 0): 1, (0, 2): -1}), [[1, 1], [1, -1]])
        self._check(dual(2, 2, {(1, 1): 1}), [[1, 0], [0, 1]])
        self._check(dual(2, 2, {(2, 0): 1, (0, 2): 1}), [[1, 1j], [1, -1j]])

    def test_repeated(self):
        rp = self._check(dual(2, 2, {(2, 0): 1, (1, 1): -2, (0, 2): 1}), [[1, 1]])
        assert rp.repeated
        rp = self._check(dual(2, 2, {(2, 0): 1}), [[0, 1]])
        assert rp.repeated

    def test_random_roots_vanish(self, rng):
        for _ in range(20):
            h = random_form(rng, DUAL, 2, 2)
            rp = roots_of_dual_quadratic(h)
            assert not rp.repeated
            for p in rp:
                u = HomogeneousForm(PRIMAL, 2, 1, p.coords)
                assert abs(evaluate_dual(h, u)) <= 1e-12 * h.norm()

    def test_zero(self):
        with pytest.raises(ZeroForm):
            roots_of_dual_quadratic(dual(2, 2, {}))


class TestSumOfSquares:
    def test_examples(self):
        a, b = sum_of_squares_coeffs(primal(2, 2, {(2, 0): 1, (0, 2): 1}), bin_lin(1, 0), bin_lin(0, 1))
        assert a == pytest.approx(1) and b == pytest.approx(1)
        a, b = sum_of_squares_coeffs(primal(2, 2, {(1, 1): 1}), bin_lin(1, 1), bin_lin(1, -1))
        assert a == pytest.approx(0.25) and b == pytest.approx(-0.25)

    def test_apolar_roots(self, rng):
        for _ in range(20):
            q = random_form(rng, PRIMAL, 2, 2)
            h = random_perp_element(rng, q)
            u, w = (HomogeneousForm(PRIMAL, 2, 1, p.coords) for p in roots_of_dual_quadratic(h))
            a, b = sum_of_squares_coeffs(q, u, w)
            rebuilt = a * power_of_linear(u, 2) + b * power_of_linear(w, 2)
            assert (rebuilt - q).norm() <= 1e-10 * q.norm()

    def test_collinear(self):
        with pytest.raises(CollinearDirections):
            sum_of_squares_coeffs(primal(2, 2, {(1, 1): 1}), bin_lin(1, 1), bin_lin(2, 2))

    def test_inconsistent(self):
        with pytest.raises(InconsistentSystem):
            sum_of_squares_coeffs(primal(2, 2, {(1, 1): 1}), bin_lin(1, 0), bin_lin(0, 1))


class TestProjective:
    def test_point_normalization(self):
        p = ProjPoint.from_vector([2j, 1])
        assert p.coords[0] == 1
        assert np.allclose(ProjPoint.from_vector(p.coords).coords, p.coords)
        with pytest.raises(ZeroForm):
            ProjPoint.from_vector([0, 0])

    def test_map_normalized(self):
        m = ProjMap([[2, 0], [0, 1]])
        assert np.linalg.norm(m.matrix) == pytest.approx(1)
        assert np.allclose(m.then(m.inverse()).matrix / m.then(m.inverse()).matrix[0, 0], np.eye(2))
