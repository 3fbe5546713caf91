import numpy as np
import pytest

from waring7.binary import frame_from_matrix
from waring7.poly import PRIMAL, DecompositionTerm, HomogeneousForm, dimension, expand_terms, linear_substitution, monomials


def cnormal(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_form(rng, side, nvars, degree):
    return HomogeneousForm(side, nvars, degree, cnormal(rng, dimension(nvars, degree)))


def random_linear(rng, nvars=3, side=PRIMAL):
    return HomogeneousForm(side, nvars, 1, cnormal(rng, nvars))


def random_frame(rng):
    return frame_from_matrix(rng.uniform(-1, 1, (3, 3)) + 1j * rng.uniform(-1, 1, (3, 3)))


def power_sum(rng, r):
    terms = [DecompositionTerm(complex(cnormal(rng, 1)[0]), random_linear(rng)) for _ in range(r)]
    return expand_terms(terms, 4), terms


def harmonic_quartic(rng, frame=None):
    """Random quartic killed by x^0 x^1 x^2 of the frame (standard frame if None)."""
    coeffs = cnormal(rng, 15)
    for k, e in enumerate(monomials(3, 4)):
        if min(e) > 0:
            coeffs[k] = 0
    g = HomogeneousForm(PRIMAL, 3, 4, coeffs)
    if frame is not None:
        g = linear_substitution(g, frame.v)
    return g


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
