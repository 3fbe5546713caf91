"""Dense homogeneous polynomials in two or three variables.

Coefficients are complex and stored in graded-lexicographic order with the
exponent of the first variable most significant, e.g. for three variables in
degree 2::

    y0^2, y0 y1, y0 y2, y1^2, y1 y2, y2^2

A form is either *primal* (an element of S_d, variables y_i) or *dual* (an
element of S^d, variables X_i). Dual forms act on primal forms by constant
coefficient differentiation, X_i acting as d/dy_i.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, prod

import numpy as np

from .errors import AntiderivativeUndefined, PreconditionError
from .tolerances import DEFAULT

PRIMAL = "primal"
DUAL = "dual"


@lru_cache(maxsize=None)
def monomials(nvars, degree):
    """Exponent tuples of the given degree in graded-lex order."""
    if nvars == 1:
        return ((degree,),)
    out = []
    for a in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars, degree):
    return {m: k for k, m in enumerate(monomials(nvars, degree))}


def dimension(nvars, degree):
    return comb(degree + nvars - 1, nvars - 1)


def _factorial_vector(exps):
    return prod(factorial(e) for e in exps)


@dataclass(frozen=True, eq=False)
class HomogeneousForm:
    side: str
    nvars: int
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.side not in (PRIMAL, DUAL):
            raise PreconditionError(f"unknown side {self.side!r}")
        if self.nvars not in (2, 3):
            raise PreconditionError(f"nvars must be 2 or 3, got {self.nvars}")
        if self.degree < 0:
            raise PreconditionError("negative degree")
        c = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        if c.shape[0] != dimension(self.nvars, self.degree):
            raise PreconditionError(
                f"expected {dimension(self.nvars, self.degree)} coefficients, got {c.shape[0]}"
            )
        if not np.all(np.isfinite(c)):
            raise PreconditionError("non-finite coefficient")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    # construction helpers

    @classmethod
    def zero(cls, side, nvars, degree):
        return cls(side, nvars, degree, np.zeros(dimension(nvars, degree), complex))

    @classmethod
    def from_terms(cls, side, nvars, degree, terms):
        """Build from a mapping ``{exponent tuple: value}``."""
        c = np.zeros(dimension(nvars, degree), complex)
        index = monomial_index(nvars, degree)
        for exp, val in dict(terms).items():
            exp = tuple(int(e) for e in exp)
            if exp not in index:
                raise PreconditionError(f"exponent {exp} not of degree {degree} in {nvars} vars")
            c[index[exp]] += val
        return cls(side, nvars, degree, c)

    @classmethod
    def linear(cls, side, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        return cls(side, len(coeffs), 1, coeffs)

    # arithmetic

    def _check_compatible(self, other):
        if not isinstance(other, HomogeneousForm):
            return NotImplemented
        if (self.side, self.nvars, self.degree) != (other.side, other.nvars, other.degree):
            raise PreconditionError("forms of different side, nvars or degree")
        return None

    def __add__(self, other):
        if self._check_compatible(other) is NotImplemented:
            return NotImplemented
        return self.with_coeffs(self.coeffs + other.coeffs)

    def __sub__(self, other):
        if self._check_compatible(other) is NotImplemented:
            return NotImplemented
        return self.with_coeffs(self.coeffs - other.coeffs)

    def __neg__(self):
        return self.with_coeffs(-self.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, HomogeneousForm):
            return multiply(self, scalar)
        return self.with_coeffs(self.coeffs * complex(scalar))

    def __rmul__(self, scalar):
        return self.with_coeffs(self.coeffs * complex(scalar))

    def __truediv__(self, scalar):
        return self.with_coeffs(self.coeffs / complex(scalar))

    def with_coeffs(self, coeffs):
        return HomogeneousForm(self.side, self.nvars, self.degree, coeffs)

    def norm(self):
        """Max coefficient modulus."""
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def coeff(self, exp):
        return complex(self.coeffs[monomial_index(self.nvars, self.degree)[tuple(exp)]])

    def allclose(self, other, rtol=1e-12):
        scale = max(self.norm(), other.norm(), 1e-300)
        return (self - other).norm() <= rtol * scale

    def __repr__(self):
        terms = []
        for exp, c in zip(monomials(self.nvars, self.degree), self.coeffs):
            if c != 0:
                terms.append(f"{c:.6g}*{exp}")
        body = " + ".join(terms) or "0"
        return f"HomogeneousForm({self.side}, n={self.nvars}, d={self.degree}: {body})"


def _require(cond, msg):
    if not cond:
        raise PreconditionError(msg)


def primal(nvars, degree, terms):
    return HomogeneousForm.from_terms(PRIMAL, nvars, degree, terms)


def dual(nvars, degree, terms):
    return HomogeneousForm.from_terms(DUAL, nvars, degree, terms)


def relative_residual(a, b):
    """``|a - b| / |b|`` in max-coefficient norm (``|a - b|`` if b vanishes)."""
    diff = (a - b).norm()
    ref = b.norm()
    return diff / ref if ref > 0 else diff


# apolarity action


@lru_cache(maxsize=None)
def _apolar_tensor(nvars, dx, df):
    mx, mf, mo = monomials(nvars, dx), monomials(nvars, df), monomial_index(nvars, df - dx)
    t = np.zeros((len(mx), len(mf), len(mo)))
    for i, a in enumerate(mx):
        for j, b in enumerate(mf):
            if all(ak <= bk for ak, bk in zip(a, b)):
                rest = tuple(bk - ak for ak, bk in zip(a, b))
                t[i, j, mo[rest]] = _factorial_vector(b) / _factorial_vector(rest)
    t.flags.writeable = False
    return t


def apolar_apply(x, f):
    """Return the derivative of the primal form ``f`` along the dual form ``x``."""
    _require(x.side == DUAL and f.side == PRIMAL, "apolar_apply needs (dual, primal)")
    _require(x.nvars == f.nvars, "nvars mismatch")
    _require(x.degree <= f.degree, f"operator degree {x.degree} exceeds form degree {f.degree}")
    t = _apolar_tensor(f.nvars, x.degree, f.degree)
    out = np.einsum("i,j,ijk->k", x.coeffs, f.coeffs, t)
    return HomogeneousForm(PRIMAL, f.nvars, f.degree - x.degree, out)


def pairing(x, f):
    """Scalar apolarity pairing of a dual and primal form of equal degree."""
    _require(x.degree == f.degree, "pairing needs equal degrees")
    return complex(apolar_apply(x, f).coeffs[0])


# products and powers


@lru_cache(maxsize=None)
def _product_tensor(nvars, da, db):
    ma, mb, mo = monomials(nvars, da), monomials(nvars, db), monomial_index(nvars, da + db)
    t = np.zeros((len(ma), len(mb), len(mo)))
    for i, a in enumerate(ma):
        for j, b in enumerate(mb):
            t[i, j, mo[tuple(x + y for x, y in zip(a, b))]] = 1.0
    t.flags.writeable = False
    return t


def multiply(a, b):
    _require(a.side == b.side, "cannot multiply primal and dual forms")
    _require(a.nvars == b.nvars, "nvars mismatch")
    t = _product_tensor(a.nvars, a.degree, b.degree)
    out = np.einsum("i,j,ijk->k", a.coeffs, b.coeffs, t)
    return HomogeneousForm(a.side, a.nvars, a.degree + b.degree, out)


def dual_multiply(x, y):
    _require(x.side == DUAL and y.side == DUAL, "dual_multiply needs dual forms")
    return multiply(x, y)


@lru_cache(maxsize=None)
def _multinomials(nvars, degree):
    return np.array([factorial(degree) / _factorial_vector(m) for m in monomials(nvars, degree)])


@lru_cache(maxsize=None)
def _exponent_matrix(nvars, degree):
    return np.array(monomials(nvars, degree), dtype=int).reshape(-1, nvars)


def _monomial_values(c, degree):
    """Values of every degree-d monomial at the point ``c``."""
    exps = _exponent_matrix(len(c), degree)
    return np.prod(np.power.outer(c, np.arange(degree + 1))[np.arange(len(c)), exps], axis=1)


def power_of_linear(v, d):
    _require(v.degree == 1, "power_of_linear needs a linear form")
    _require(d >= 0, "negative exponent")
    c = np.asarray(v.coeffs)
    coeffs = _multinomials(v.nvars, d) * _monomial_values(c, d)
    return HomogeneousForm(v.side, v.nvars, d, coeffs)


def evaluate_dual(x, v):
    """``x(v) = (x-derivative of v^d) / d!``, i.e. plain evaluation of x at v's coefficients."""
    _require(x.side == DUAL and v.side == PRIMAL and v.degree == 1, "evaluate_dual needs (dual, primal linear)")
    _require(x.nvars == v.nvars, "nvars mismatch")
    return complex(np.dot(x.coeffs, _monomial_values(np.asarray(v.coeffs), x.degree)))


def evaluate_primal(f, point):
    """Evaluate a primal form as a polynomial function at a coordinate vector."""
    point = np.asarray(point, dtype=complex)
    _require(point.shape == (f.nvars,), "point has wrong length")
    return complex(np.dot(f.coeffs, _monomial_values(point, f.degree)))


def linear_substitution(f, matrix):
    """Compose ``f`` with a linear change of variables.

    Old variable j becomes ``sum_k matrix[j, k] * new_k``; ``matrix`` has shape
    ``(f.nvars, new_nvars)``. The side of the form is kept.
    """
    a = np.asarray(matrix, dtype=complex)
    _require(a.shape[0] == f.nvars and a.shape[1] in (2, 3), "bad substitution matrix shape")
    n_new = a.shape[1]
    images = [HomogeneousForm(f.side, n_new, 1, a[j]) for j in range(f.nvars)]
    powers = [[HomogeneousForm(f.side, n_new, 0, [1.0])] for _ in range(f.nvars)]
    for j in range(f.nvars):
        for _ in range(f.degree):
            powers[j].append(multiply(powers[j][-1], images[j]))
    out = HomogeneousForm.zero(f.side, n_new, f.degree)
    for exp, c in zip(monomials(f.nvars, f.degree), f.coeffs):
        if c == 0:
            continue
        term = powers[0][exp[0]]
        for j in range(1, f.nvars):
            term = multiply(term, powers[j][exp[j]])
        out = out + c * term
    return out


# decompositions


@dataclass(frozen=True)
class DecompositionTerm:
    coefficient: complex
    direction: HomogeneousForm

    def __post_init__(self):
        _require(self.direction.degree == 1 and self.direction.side == PRIMAL,
                 "term direction must be a primal linear form")
        _require(self.direction.norm() > 0, "term direction is zero")
        object.__setattr__(self, "coefficient", complex(self.coefficient))


def expand_terms(terms, d):
    terms = list(terms)
    _require(terms, "empty term list")
    out = HomogeneousForm.zero(PRIMAL, terms[0].direction.nvars, d)
    for t in terms:
        out = out + t.coefficient * power_of_linear(t.direction, d)
    return out


@dataclass(frozen=True)
class Decomposition:
    degree: int
    terms: tuple
    target_residual: float = 0.0
    provenance: tuple = ()

    def __post_init__(self):
        _require(len(self.terms) > 0, "empty decomposition")
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "provenance", tuple(self.provenance))

    def expand(self):
        return expand_terms(self.terms, self.degree)

    def __len__(self):
        return len(self.terms)


def antiderivative_terms(terms, d, x, tol=DEFAULT):
    """Weighted terms of the x-antiderivative of ``sum coefficient * direction^d``.

    Each coefficient is multiplied by ``d! / ((d + delta)! * x(v))``, delta being
    the degree of x; the directions are unchanged.
    """
    _require(x.side == DUAL, "operator must be dual")
    terms = list(terms)
    _require(terms, "empty term list")
    scale = factorial(d) / factorial(d + x.degree)
    xnorm = np.max(np.abs(x.coeffs))
    out = []
    for t in terms:
        _require(t.direction.nvars == x.nvars, "nvars mismatch")
        val = evaluate_dual(x, t.direction)
        ref = xnorm * np.max(np.abs(t.direction.coeffs)) ** x.degree
        if abs(val) <= tol.zero * ref:
            raise AntiderivativeUndefined(f"operator vanishes on direction {t.direction.coeffs}")
        out.append(DecompositionTerm(scale * t.coefficient / val, t.direction))
    return out


def antiderivative(terms, d, x, tol=DEFAULT):
    """The x-antiderivative of ``sum coefficient * direction^d`` relative to ``terms``.

    The result F satisfies ``apolar_apply(x, F) == sum coefficient * direction^d``.
    """
    return expand_terms(antiderivative_terms(terms, d, x, tol), d + x.degree)


def catalecticant_matrix(f):
    """Matrix of ``x -> apolar_apply(x, f)`` from dual to primal quadrics.

    Column k holds the coefficients of the derivative along the k-th dual
    quadratic monomial X^a; entry (b, a) equals ``f[a+b] * (a+b)! / b!``.
    Multiplying row b by ``b!`` gives the symmetric matrix ``f[a+b] (a+b)!``.
    """
    _require(f.side == PRIMAL and f.nvars == 3 and f.degree == 4, "need a primal ternary quartic")
    m2 = monomials(3, 2)
    cols = []
    for a in m2:
        cols.append(apolar_apply(dual(3, 2, {a: 1}), f).coeffs)
    return np.array(cols).T
