"""Binary forms inside a ternary frame, and the correspondence omega.

For a frame ``x^0, x^1, x^2`` and an index i, the forms annihilated by the
derivative along ``x^i`` make up a polynomial ring in the two linear forms
``v_{i'}, v_{i''}`` (indices cyclic). :class:`BinaryContext` converts between
ternary forms in that ring and binary forms in variables ``b1, b2`` standing
for ``v_{i'}, v_{i''}``; the dual variables ``B1, B2`` stand for the classes
of ``x^{i'}, x^{i''}`` modulo ``x^i``. Because the two bases are dual, the
ordinary binary apolarity action agrees with the ternary one.
"""

from dataclasses import dataclass, field
from math import factorial, prod

import numpy as np

from .errors import (
    CollinearDirections,
    DegenerateFrame,
    FrameFitFailed,
    InconsistentSystem,
    NotInKernel,
    OmegaDegenerate,
    PreconditionError,
    ZeroForm,
)
from .poly import (
    DUAL,
    PRIMAL,
    HomogeneousForm,
    apolar_apply,
    evaluate_dual,
    linear_substitution,
    monomial_index,
    monomials,
    pairing,
    power_of_linear,
)
from .tolerances import DEFAULT


def cyclic(i):
    """Return ``(i', i'')`` for the cyclic permutation 0 -> 1 -> 2 -> 0."""
    return (i + 1) % 3, (i + 2) % 3


def proj_distance(p, q):
    """Sine of the angle between two nonzero complex vectors (0 iff proportional)."""
    p = np.asarray(p, dtype=complex).ravel()
    q = np.asarray(q, dtype=complex).ravel()
    np_, nq = np.linalg.norm(p), np.linalg.norm(q)
    if np_ == 0 or nq == 0:
        raise ZeroForm("projective distance of a zero vector")
    p, q = p / np_, q / nq
    wedge = np.outer(p, q) - np.outer(q, p)
    return float(np.linalg.norm(wedge) / np.sqrt(2.0))


def nullspace(a, dim=None, tol=DEFAULT.zero):
    """Orthonormal nullspace basis (as columns) and the singular values of ``a``.

    With ``dim`` given, the last ``dim`` right singular vectors are returned
    regardless of the numerical rank.
    """
    a = np.asarray(a, dtype=complex)
    _, s, vh = np.linalg.svd(a)
    n = a.shape[1]
    sv = np.zeros(n)
    sv[: len(s)] = s
    if dim is None:
        top = sv[0] if sv[0] > 0 else 1.0
        dim = int(np.sum(sv <= tol * top))
    return vh[n - dim:].conj().T, sv


def _complement_rows(vec):
    """Rows spanning the linear functionals that vanish exactly on ``span(vec)``."""
    vec = np.asarray(vec, dtype=complex)
    _, _, vh = np.linalg.svd(vec[None, :])
    return vh[1:].conj()


# frames and binary contexts


@dataclass(frozen=True, eq=False)
class Frame:
    """Three independent dual linear forms and their dual-basis primal vectors.

    ``x[i]`` holds the coefficients of ``x^i``; ``v[i]`` those of ``v_i``, with
    ``x^j(v_i) = delta_ij``.
    """

    x: np.ndarray
    v: np.ndarray = field(repr=False)

    def dual_form(self, i):
        return HomogeneousForm(DUAL, 3, 1, self.x[i])

    def primal_form(self, i):
        return HomogeneousForm(PRIMAL, 3, 1, self.v[i])

    def to_json(self):
        return {f"x{i}": [[float(c.real), float(c.imag)] for c in self.x[i]] for i in range(3)}


def make_frame(x0, x1, x2, tol=DEFAULT):
    forms = (x0, x1, x2)
    for f in forms:
        if f.side != DUAL or f.degree != 1 or f.nvars != 3:
            raise PreconditionError("frame members must be dual ternary linear forms")
    x = np.array([f.coeffs for f in forms], dtype=complex)
    scale = np.prod(np.linalg.norm(x, axis=1))
    if scale == 0 or abs(np.linalg.det(x)) <= tol.zero * scale:
        raise DegenerateFrame("frame forms are linearly dependent")
    v = np.linalg.inv(x).T
    x.flags.writeable = False
    v.flags.writeable = False
    return Frame(x, v)


def frame_from_matrix(matrix, tol=DEFAULT):
    m = np.asarray(matrix, dtype=complex)
    return make_frame(*(HomogeneousForm(DUAL, 3, 1, row) for row in m), tol=tol)


def standard_frame():
    return frame_from_matrix(np.eye(3))


@dataclass(frozen=True, eq=False)
class BinaryContext:
    frame: Frame
    index: int

    @property
    def head(self):
        return cyclic(self.index)[0]

    @property
    def tail(self):
        return cyclic(self.index)[1]

    def _primal_rows(self):
        return np.array([self.frame.v[self.head], self.frame.v[self.tail]])

    def embed_primal(self, p):
        """Binary primal form -> ternary form in the kernel of ``x^i``."""
        _check_binary(p, PRIMAL)
        return linear_substitution(p, self._primal_rows())

    def embed_dual(self, h):
        """Binary dual form -> ternary dual representative built from ``x^{i'}, x^{i''}``."""
        _check_binary(h, DUAL)
        return linear_substitution(h, np.array([self.frame.x[self.head], self.frame.x[self.tail]]))

    def embed_point(self, coords):
        """Binary coordinates ``[s:t]`` -> ternary primal linear form ``s v_{i'} + t v_{i''}``."""
        c = np.asarray(coords, dtype=complex)
        return HomogeneousForm(PRIMAL, 3, 1, c[0] * self.frame.v[self.head] + c[1] * self.frame.v[self.tail])

    def restrict(self, f, tol=DEFAULT):
        """Ternary primal form annihilated by ``x^i`` -> binary coordinates."""
        if f.side != PRIMAL or f.nvars != 3:
            raise PreconditionError("restrict needs a primal ternary form")
        ref = f.norm()
        if f.degree > 0 and ref > 0:
            if apolar_apply(self.frame.dual_form(self.index), f).norm() > tol.zero * ref * max(1, f.degree):
                raise NotInKernel(f"form is not annihilated by x^{self.index}")
        g = linear_substitution(f, self.frame.x.T)
        idx = monomial_index(3, f.degree)
        out = []
        for e1, e2 in monomials(2, f.degree):
            exp = [0, 0, 0]
            exp[self.head], exp[self.tail] = e1, e2
            out.append(g.coeffs[idx[tuple(exp)]])
        return HomogeneousForm(PRIMAL, 2, f.degree, out)


def binary_context(frame, i):
    if i not in (0, 1, 2):
        raise PreconditionError("context index must be 0, 1 or 2")
    return BinaryContext(frame, i)


def _check_binary(f, side, degree=None):
    if f.nvars != 2 or f.side != side:
        raise PreconditionError(f"expected a binary {side} form")
    if degree is not None and f.degree != degree:
        raise PreconditionError(f"expected degree {degree}, got {f.degree}")


# projective points and maps


@dataclass(frozen=True, eq=False)
class ProjPoint:
    coords: np.ndarray

    @classmethod
    def from_vector(cls, vec):
        vec = np.asarray(vec, dtype=complex).ravel()
        k = int(np.argmax(np.abs(vec)))
        if vec[k] == 0:
            raise ZeroForm("zero vector is not a projective point")
        out = vec / vec[k]
        out[k] = 1.0
        out.flags.writeable = False
        return cls(out)

    def distance(self, other):
        return proj_distance(self.coords, getattr(other, "coords", other))

    def to_json(self):
        return [[float(c.real), float(c.imag)] for c in self.coords]


@dataclass(frozen=True, eq=False)
class ProjMap:
    """Automorphism-up-to-scale between two projective lines, as a 2x2 matrix.

    ``domain`` and ``codomain`` name the bases the coordinates refer to.
    """

    matrix: np.ndarray
    domain: str = ""
    codomain: str = ""

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex).reshape(2, 2)
        n = np.linalg.norm(m)
        if n == 0:
            raise ZeroForm("zero matrix")
        m = m / n
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def apply(self, vec):
        return self.matrix @ np.asarray(vec, dtype=complex)

    def then(self, other):
        """``other`` after ``self``."""
        return ProjMap(other.matrix @ self.matrix, self.domain, other.codomain)

    def inverse(self):
        return ProjMap(np.linalg.inv(self.matrix), self.codomain, self.domain)

    def det(self):
        return complex(np.linalg.det(self.matrix))

    def to_json(self):
        return {
            "matrix": [[[float(c.real), float(c.imag)] for c in row] for row in self.matrix],
            "domain": self.domain,
            "codomain": self.codomain,
        }


# binary quadratics


def is_square(q, tol=DEFAULT.zero):
    """True when the binary quadratic has a (numerically) vanishing discriminant."""
    _check_binary(q, PRIMAL, 2)
    return abs(relative_discriminant(q)) <= tol


def relative_discriminant(q):
    """``(b^2 - 4ac) / max(|a|, |b|, |c|)^2`` for ``q = a b1^2 + b b1 b2 + c b2^2``."""
    a, b, c = q.coeffs
    ref = q.norm()
    if ref == 0:
        raise ZeroForm("zero quadratic")
    return complex((b * b - 4 * a * c) / ref**2)


def _pairing_row(f):
    """Row r with ``r @ h.coeffs == pairing(h, f)`` for dual h of the same degree."""
    fact = [prod(factorial(e) for e in m) for m in monomials(f.nvars, f.degree)]
    return f.coeffs * np.array(fact, dtype=float)


def quadric_perp(q):
    """Basis ``(h_a, h_b)`` of the dual quadratics apolar to ``q``."""
    _check_binary(q, PRIMAL, 2)
    if q.norm() == 0:
        raise ZeroForm("zero quadratic")
    basis, _ = nullspace(_pairing_row(q / q.norm())[None, :], dim=2)
    return tuple(HomogeneousForm(DUAL, 2, 2, basis[:, k]) for k in range(2))


def _derivative_matrix(op, degree):
    """Matrix of ``F -> apolar_apply(op, F)`` on binary primal forms of ``degree``."""
    cols = []
    for k in range(degree + 1):
        e = np.zeros(degree + 1, complex)
        e[k] = 1
        cols.append(apolar_apply(op, HomogeneousForm(PRIMAL, 2, degree, e)).coeffs)
    return np.array(cols).T


def _normalize_unit(f):
    k = int(np.argmax(np.abs(f.coeffs)))
    return f / f.coeffs[k]


def omega_system(q, x, h):
    """The 4x4 linear system whose nullspace is omega(h) in binary cubics."""
    qn = q / q.norm()
    xn = x / x.norm()
    hn = h / h.norm()
    rows_a = _derivative_matrix(hn, 3)
    rows_b = _complement_rows(qn.coeffs) @ _derivative_matrix(xn, 3)
    return np.vstack([rows_a, rows_b])


def _check_omega_args(q, x, h, tol):
    _check_binary(q, PRIMAL, 2)
    _check_binary(x, DUAL, 1)
    _check_binary(h, DUAL, 2)
    if q.norm() == 0:
        raise ZeroForm("zero quadratic")
    if x.norm() == 0 or h.norm() == 0:
        raise PreconditionError("x and h must be nonzero")
    if abs(pairing(h, q)) > tol.zero * 2 * h.norm() * q.norm():
        raise PreconditionError("h is not apolar to q")


def omega_point(q, x, h, tol=DEFAULT):
    """The cubic F (unit max coefficient) with ``d_h F = 0`` and ``d_x F`` in ``<q>``."""
    _check_omega_args(q, x, h, tol)
    basis, sv = nullspace(omega_system(q, x, h), tol=tol.zero)
    if basis.shape[1] != 1:
        raise OmegaDegenerate(f"nullspace has dimension {basis.shape[1]} (singular values {sv})")
    return _normalize_unit(HomogeneousForm(PRIMAL, 2, 3, basis[:, 0]))


def l_basis(q, x, tol=DEFAULT):
    """Orthonormal basis (4x2 columns) of the binary cubics F with ``d_x F`` in ``<q>``."""
    _check_binary(q, PRIMAL, 2)
    _check_binary(x, DUAL, 1)
    a = _complement_rows((q / q.norm()).coeffs) @ _derivative_matrix(x / x.norm(), 3)
    basis, sv = nullspace(a, tol=tol.zero)
    if basis.shape[1] != 2:
        raise OmegaDegenerate(f"preimage space has dimension {basis.shape[1]}")
    return basis


def l_coordinates(basis, f, tol=DEFAULT):
    """Coordinates of the binary cubic ``f`` in an orthonormal L basis."""
    c = basis.conj().T @ f.coeffs
    resid = np.max(np.abs(basis @ c - f.coeffs))
    if resid > tol.verify * max(f.norm(), 1e-300):
        raise InconsistentSystem(f"cubic is not in L (residual {resid:.3g})")
    return c


def omega_map(q, x, perp, basis, tol=DEFAULT):
    """Fit the 2x2 matrix of omega from perp coordinates to L coordinates.

    Uses the images of ``h_a``, ``h_b`` and ``h_a + h_b``.
    """
    h_a, h_b = perp
    images = [omega_point(q, x, h, tol) for h in (h_a, h_b, h_a + h_b)]
    ca, cb, cc = (l_coordinates(basis, f, tol) for f in images)
    pair = np.column_stack([ca, cb])
    scale = np.linalg.norm(ca) * np.linalg.norm(cb)
    if abs(np.linalg.det(pair)) <= tol.zero * scale:
        raise FrameFitFailed("images of h_a and h_b coincide")
    alpha, beta = np.linalg.solve(pair, cc)
    ref = np.linalg.norm(cc) / max(np.linalg.norm(ca), np.linalg.norm(cb))
    if min(abs(alpha), abs(beta)) <= tol.zero * ref:
        raise FrameFitFailed("third image coincides with one of the first two")
    return ProjMap(np.column_stack([alpha * ca, beta * cb]), domain="perp", codomain="L")


# roots and sums of squares


@dataclass(frozen=True, eq=False)
class RootPair:
    first: ProjPoint
    second: ProjPoint
    repeated: bool

    def __iter__(self):
        return iter((self.first, self.second))


def roots_of_dual_quadratic(h, ctx=None, tol=DEFAULT):
    """Points ``[s:t]`` with ``A s^2 + B s t + C t^2 = 0`` for ``h = A B1^2 + B B1 B2 + C B2^2``.

    ``ctx`` is accepted for symmetry with the callers; coordinates always refer
    to the binary basis ``(b1, b2)``.
    """
    _check_binary(h, DUAL, 2)
    if h.norm() == 0:
        raise ZeroForm("zero dual quadratic")
    a, b, c = h.coeffs / h.norm()
    d = np.sqrt(complex(b * b - 4 * a * c))
    if (b.conjugate() * d).real < 0:
        d = -d
    m = -(b + d) / 2
    if abs(m) <= tol.zero:
        # b and the discriminant vanish: h is A B1^2 or C B2^2
        pt = [0, 1] if abs(a) >= abs(c) else [1, 0]
        p = ProjPoint.from_vector(pt)
        return RootPair(p, p, True)
    p1 = ProjPoint.from_vector([m, a])
    p2 = ProjPoint.from_vector([c, m])
    return RootPair(p1, p2, proj_distance(p1.coords, p2.coords) <= tol.distinct)


def sum_of_squares_coeffs(q, u, w, tol=DEFAULT):
    """``(alpha, beta)`` with ``q = alpha u^2 + beta w^2``."""
    _check_binary(q, PRIMAL, 2)
    _check_binary(u, PRIMAL, 1)
    _check_binary(w, PRIMAL, 1)
    if proj_distance(u.coeffs, w.coeffs) <= tol.zero:
        raise CollinearDirections("u and w span the same point")
    a = np.column_stack([power_of_linear(u, 2).coeffs, power_of_linear(w, 2).coeffs])
    sol, *_ = np.linalg.lstsq(a, q.coeffs, rcond=None)
    resid = np.max(np.abs(a @ sol - q.coeffs))
    if resid > tol.verify * max(q.norm(), 1e-300):
        raise InconsistentSystem(f"q is not a combination of u^2, w^2 (residual {resid:.3g})")
    return complex(sol[0]), complex(sol[1])


def point_value(h, coords):
    """``h(u)`` for u with binary coordinates ``coords``."""
    return evaluate_dual(h, HomogeneousForm(PRIMAL, 2, 1, coords))
