"""The maps psi and theta between consecutive binary restrictions, and their chain.

For a quartic g and a frame with index i (and ``i', i''`` cyclic successors),
``c = d_{x^{i''}} g`` is a cubic and

* ``L_src``: cubics in the kernel of ``x^i`` whose ``x^{i'}``-derivative lies in ``<q_i>``,
* ``L_tgt``: cubics in the kernel of ``x^{i'}`` whose ``x^i``-derivative lies in ``<q_{i'}>``,

where ``q_i = d_{x^{i'} x^{i''}} g``. The map psi sends ``F`` to
``lambda(F) c - F`` with ``d_{x^{i'}} F = lambda(F) q_i``; theta_i transports
it back to dual quadrics through omega on both sides.
"""

from dataclasses import dataclass, field

import numpy as np

from .binary import (
    ProjMap,
    ProjPoint,
    binary_context,
    cyclic,
    is_square,
    l_basis,
    l_coordinates,
    omega_map,
    proj_distance,
    quadric_perp,
    relative_discriminant,
)
from .errors import IdentityMap, NotInL, PreconditionError, QSquare, QZero
from .poly import PRIMAL, HomogeneousForm, apolar_apply, dual, dual_multiply, power_of_linear
from .tolerances import DEFAULT

PARABOLIC = "parabolic"
DIAGONALIZABLE = "diagonalizable"

B1 = dual(2, 1, {(1, 0): 1})
B2 = dual(2, 1, {(0, 1): 1})


def mixed_operator(frame, indices):
    """Product of the frame's dual linear forms with the given indices."""
    out = dual(3, 0, {(0, 0, 0): 1})
    for k in indices:
        out = dual_multiply(out, frame.dual_form(k))
    return out


def harmonic_defect(g, frame):
    """Relative size of ``d_{x^0 x^1 x^2} g``; zero for forms the six-term construction accepts."""
    ref = g.norm()
    d = apolar_apply(mixed_operator(frame, (0, 1, 2)), g).norm()
    return d / ref if ref > 0 else d


def q_form(g, frame, i, tol=DEFAULT):
    """``q_i = d_{x^{i'} x^{i''}} g`` restricted to the binary ring of index i."""
    ip, ipp = cyclic(i)
    q = apolar_apply(mixed_operator(frame, (ip, ipp)), g)
    return binary_context(frame, i).restrict(q, tol)


def _check_q(q, i, scale, tol):
    if q.norm() <= tol.zero * scale:
        raise QZero(i)
    if is_square(q, tol.zero):
        raise QSquare(i, f"q_{i} is a square (relative discriminant {abs(relative_discriminant(q)):.3g})")


def lambda_functional(F, q_tail, x_tail, tol=DEFAULT):
    """The scalar with ``d_{x_tail} F = lambda * q_tail`` (binary coordinates)."""
    dF = apolar_apply(x_tail, F)
    qc = q_tail.coeffs
    lam = complex(np.vdot(qc, dF.coeffs) / np.vdot(qc, qc))
    resid = (dF - lam * q_tail).norm()
    if resid > tol.verify * max(F.norm(), dF.norm(), abs(lam) * q_tail.norm(), 1e-300):
        raise NotInL(f"derivative is not a multiple of q (residual {resid:.3g})")
    return lam


@dataclass(frozen=True, eq=False)
class PsiContext:
    """Data for psi at index i of a frame, with ``c = d_{x^{i''}} g``.

    ``q_tail`` is ``q_i`` in the source binary ring (derivative along
    ``x^{i'}`` = B1 there) and ``q_head`` is ``q_{i'}`` in the target ring
    (derivative along ``x^i`` = B2 there).
    """

    g: HomogeneousForm
    frame: object
    index: int
    c: HomogeneousForm = field(init=False)
    q_tail: HomogeneousForm = field(init=False)
    q_head: HomogeneousForm = field(init=False)
    src: object = field(init=False)
    tgt: object = field(init=False)
    vcube: HomogeneousForm = field(init=False)

    def __post_init__(self):
        i = self.index
        ip, ipp = cyclic(i)
        fr = self.frame
        set_ = object.__setattr__
        set_(self, "src", binary_context(fr, i))
        set_(self, "tgt", binary_context(fr, ip))
        set_(self, "c", apolar_apply(fr.dual_form(ipp), self.g))
        # same code path for q_i whether it is a source or a target, so that
        # consecutive thetas see identical quadrics and identical perp bases
        set_(self, "q_tail", q_form(self.g, fr, i))
        set_(self, "q_head", q_form(self.g, fr, ip))
        set_(self, "vcube", power_of_linear(fr.primal_form(ipp), 3))

    x_tail = B1
    x_head = B2


def make_psi_context(g, frame, i, tol=DEFAULT, squares=False):
    """Validated PsiContext; with ``squares`` the q's must also be non-squares."""
    if g.side != PRIMAL or g.nvars != 3 or g.degree != 4:
        raise PreconditionError("need a primal ternary quartic")
    if harmonic_defect(g, frame) > tol.zero * 24:
        raise PreconditionError("the x^0 x^1 x^2 derivative of the quartic does not vanish")
    ctx = PsiContext(g, frame, i)
    scale = g.norm()
    for q, k in ((ctx.q_tail, i), (ctx.q_head, cyclic(i)[0])):
        if squares:
            _check_q(q, k, scale, tol)
        elif q.norm() <= tol.zero * scale:
            raise QZero(k)
    return ctx


def psi_apply(ctx, F, tol=DEFAULT):
    """``lambda(F) c - F`` as a ternary cubic; ``F`` binary (source ring) or ternary."""
    if F.nvars == 3:
        Fb = ctx.src.restrict(F, tol)
        Ft = F
    else:
        Fb = F
        Ft = ctx.src.embed_primal(F)
    lam = lambda_functional(Fb, ctx.q_tail, ctx.x_tail, tol)
    return lam * ctx.c - Ft


def psi_matrix(ctx, basis_src, basis_tgt, tol=DEFAULT):
    """2x2 matrix of psi between orthonormal L bases (columns of 4x2 arrays)."""
    cols = []
    for k in range(2):
        F = HomogeneousForm(PRIMAL, 2, 3, basis_src[:, k])
        G = ctx.tgt.restrict(psi_apply(ctx, F, tol), tol)
        cols.append(l_coordinates(basis_tgt, G, tol))
    return np.column_stack(cols)


@dataclass(frozen=True, eq=False)
class ThetaMap:
    """theta_i together with the pieces it was built from."""

    index: int
    map: ProjMap
    psi: PsiContext
    perp_src: tuple
    perp_tgt: tuple
    l_src: np.ndarray
    l_tgt: np.ndarray
    omega_src: ProjMap
    omega_tgt: ProjMap
    psi_matrix: np.ndarray

    def apply(self, coords):
        return self.map.apply(coords)

    def dual_quadric(self, coords, which="src"):
        basis = self.perp_src if which == "src" else self.perp_tgt
        return coords[0] * basis[0] + coords[1] * basis[1]


def build_theta(g, frame, i, tol=DEFAULT):
    """theta_i from the apolar quadrics of ``q_i`` to those of ``q_{i'}``.

    Matrices are taken in the bases returned by :func:`quadric_perp`.
    """
    ctx = make_psi_context(g, frame, i, tol, squares=True)
    ip = cyclic(i)[0]
    perp_src = quadric_perp(ctx.q_tail)
    perp_tgt = quadric_perp(ctx.q_head)
    l_src = l_basis(ctx.q_tail, ctx.x_tail, tol)
    l_tgt = l_basis(ctx.q_head, ctx.x_head, tol)
    om_src = omega_map(ctx.q_tail, ctx.x_tail, perp_src, l_src, tol)
    om_tgt = omega_map(ctx.q_head, ctx.x_head, perp_tgt, l_tgt, tol)
    psi = psi_matrix(ctx, l_src, l_tgt, tol)
    m = np.linalg.solve(om_tgt.matrix, psi @ om_src.matrix)
    theta = ProjMap(m, domain=f"perp(q{i})", codomain=f"perp(q{ip})")
    return ThetaMap(i, theta, ctx, perp_src, perp_tgt, l_src, l_tgt, om_src, om_tgt, psi)


@dataclass(frozen=True)
class FixedPoints:
    points: tuple
    kind: str
    discriminant: complex
    eigenvalues: tuple

    def __len__(self):
        return len(self.points)


def _null_vector(n):
    """Kernel vector of a (numerically) singular 2x2 matrix, from its larger row."""
    r = n[0] if np.linalg.norm(n[0]) >= np.linalg.norm(n[1]) else n[1]
    return np.array([-r[1], r[0]])


def fixed_points(m, tol=DEFAULT):
    """Fixed points of a projective line automorphism, i.e. eigenvectors of its matrix."""
    mat = np.asarray(getattr(m, "matrix", m), dtype=complex)
    norm = np.linalg.norm(mat)
    if norm == 0:
        raise PreconditionError("zero matrix")
    mat = mat / norm
    if abs(np.linalg.det(mat)) <= tol.zero:
        raise PreconditionError("singular matrix")
    tr = mat[0, 0] + mat[1, 1]
    if np.linalg.norm(mat - tr / 2 * np.eye(2)) <= tol.zero:
        raise IdentityMap("map is a multiple of the identity")
    disc = complex(tr * tr - 4 * np.linalg.det(mat))
    if abs(disc) < tol.parabolic:
        mu = tr / 2
        p = _null_vector(mat - mu * np.eye(2))
        return FixedPoints((ProjPoint.from_vector(p),), PARABOLIC, disc, (complex(mu),))
    sq = np.sqrt(disc)
    mus = ((tr + sq) / 2, (tr - sq) / 2)
    pts = tuple(ProjPoint.from_vector(_null_vector(mat - mu * np.eye(2))) for mu in mus)
    return FixedPoints(pts, DIAGONALIZABLE, disc, tuple(complex(mu) for mu in mus))


@dataclass(frozen=True, eq=False)
class ThetaChain:
    g: HomogeneousForm
    frame: object
    qs: tuple
    contexts: tuple
    thetas: tuple
    composite: ProjMap
    fixed: FixedPoints
    closure: tuple

    @property
    def fixed_points(self):
        return self.fixed.points

    def orbit(self, h0):
        """``(h^0, h^1, h^2)`` coordinates with ``h^{i'} = theta_i(h^i)``."""
        h0 = np.asarray(getattr(h0, "coords", h0), dtype=complex)
        h1 = self.thetas[0].apply(h0)
        h2 = self.thetas[1].apply(h1)
        return h0, h1, h2

    def dual_quadrics(self, h0):
        """The binary dual quadrics ``h^0, h^1, h^2`` of the orbit of ``h0``."""
        return tuple(self.thetas[i].dual_quadric(c) for i, c in enumerate(self.orbit(h0)))

    def to_json(self):
        return {
            "theta": [t.map.to_json() for t in self.thetas],
            "composite": self.composite.to_json(),
            "discriminant": [self.fixed.discriminant.real, self.fixed.discriminant.imag],
            "classification": self.fixed.kind,
            "fixed_points": [p.to_json() for p in self.fixed.points],
            "closure": list(self.closure),
        }


def build_chain(g, frame, tol=DEFAULT):
    if harmonic_defect(g, frame) > tol.zero * 24:
        raise PreconditionError("the x^0 x^1 x^2 derivative of the quartic does not vanish")
    thetas = tuple(build_theta(g, frame, i, tol) for i in range(3))
    comp = thetas[0].map.then(thetas[1].map).then(thetas[2].map)
    fp = fixed_points(comp, tol)
    closure = []
    for p in fp.points:
        h = p.coords
        for t in thetas:
            h = t.apply(h)
        closure.append(proj_distance(h, p.coords))
    qs = tuple(t.psi.q_tail for t in thetas)
    ctxs = tuple(t.psi.src for t in thetas)
    return ThetaChain(g, frame, qs, ctxs, thetas, comp, fp, tuple(closure))
