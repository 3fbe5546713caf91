"""Six- and seven-term power sum decompositions of ternary quartics."""

import enum
from dataclasses import dataclass, field

import numpy as np

from . import errors
from .binary import (
    binary_context,
    cyclic,
    is_square,
    proj_distance,
    relative_discriminant,
    roots_of_dual_quadratic,
    sum_of_squares_coeffs,
)
from .poly import (
    PRIMAL,
    Decomposition,
    DecompositionTerm,
    HomogeneousForm,
    antiderivative_terms,
    apolar_apply,
    evaluate_dual,
    expand_terms,
)
from .theta import build_chain, harmonic_defect, mixed_operator, q_form
from .tolerances import DEFAULT


class Reason(str, enum.Enum):
    V_DEGENERATE = "V_DEGENERATE"
    Q_ZERO = "Q_ZERO"
    Q_SQUARE = "Q_SQUARE"
    THETA_DEGENERATE = "THETA_DEGENERATE"
    NO_VALID_FIXED_POINT = "NO_VALID_FIXED_POINT"
    ROOT_COLLISION = "ROOT_COLLISION"
    ROOT_FORBIDDEN = "ROOT_FORBIDDEN"
    ANTIDERIVATIVE_UNDEFINED = "ANTIDERIVATIVE_UNDEFINED"
    RESIDUAL_TOO_LARGE = "RESIDUAL_TOO_LARGE"


@dataclass(frozen=True)
class FailureReason:
    code: Reason
    detail: str = ""
    indices: tuple = ()

    def to_json(self):
        out = {"reason": self.code.value, "detail": self.detail}
        if self.indices:
            out["indices"] = list(self.indices)
        return out


class _Invalid(Exception):
    def __init__(self, reason):
        self.reason = reason


@dataclass(frozen=True, eq=False)
class Result:
    """Outcome of a decomposition attempt: either ``decomposition`` or ``failure`` is set."""

    decomposition: Decomposition = None
    failure: FailureReason = None
    chain: object = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.decomposition is not None

    @property
    def reason(self):
        return None if self.failure is None else self.failure.code


SixResult = Result
SevenResult = Result


def verify(f, dec):
    """Relative residual ``|f - expansion| / |f|`` in max-coefficient norm."""
    if dec.degree != f.degree:
        raise errors.PreconditionError("degree mismatch")
    diff = (f - dec.expand()).norm()
    ref = f.norm()
    return diff / ref if ref > 0 else diff


def _check_quartic(f):
    if f.side != PRIMAL or f.nvars != 3 or f.degree != 4:
        raise errors.PreconditionError("need a primal ternary quartic")


def _qs(g, frame, scale, tol):
    ternary = [apolar_apply(mixed_operator(frame, cyclic(i)), g) for i in range(3)]
    zero = tuple(i for i, q in enumerate(ternary) if q.norm() <= tol.zero * scale)
    if zero:
        raise _Invalid(FailureReason(Reason.Q_ZERO, f"q vanishes for indices {list(zero)}", zero))
    qs = [q_form(g, frame, i, tol) for i in range(3)]
    square = tuple(i for i, q in enumerate(qs) if is_square(q, tol.zero))
    if square:
        discs = [abs(relative_discriminant(qs[i])) for i in square]
        raise _Invalid(FailureReason(Reason.Q_SQUARE, f"q is a square for indices {list(square)} "
                                     f"(relative discriminants {discs})", square))
    return qs


def _pair_terms(g, frame, chain, h0, tol):
    """Terms and provenance for one fixed point, or raise ``_Invalid``."""
    hs = chain.dual_quadrics(h0)
    roots = []
    for i, h in enumerate(hs):
        rp = roots_of_dual_quadratic(h, tol=tol)
        if rp.repeated:
            raise _Invalid(FailureReason(Reason.ROOT_COLLISION, f"h^{i} has a double root", (i,)))
        for p in rp:
            c = p.coords
            if min(abs(c[0]), abs(c[1])) <= tol.zero * np.max(np.abs(c)):
                raise _Invalid(FailureReason(Reason.ROOT_FORBIDDEN, f"a root of h^{i} is a frame point", (i,)))
        roots.append(rp)
    dirs = []
    for i, rp in enumerate(roots):
        ctx = binary_context(frame, i)
        for k, p in enumerate(rp):
            dirs.append((i, k, ctx.embed_point(p.coords)))
    for a in range(len(dirs)):
        for b in range(a + 1, len(dirs)):
            if proj_distance(dirs[a][2].coeffs, dirs[b][2].coeffs) <= tol.distinct:
                raise _Invalid(FailureReason(
                    Reason.ROOT_COLLISION,
                    f"roots ({dirs[a][0]},{dirs[a][1]}) and ({dirs[b][0]},{dirs[b][1]}) coincide",
                    (dirs[a][0], dirs[b][0]),
                ))
    terms, prov = [], []
    for i, rp in enumerate(roots):
        ip, ipp = cyclic(i)
        ctx = binary_context(frame, i)
        u, w = (HomogeneousForm(PRIMAL, 2, 1, p.coords) for p in rp)
        try:
            alpha, beta = sum_of_squares_coeffs(chain.qs[i], u, w, tol)
        except (errors.CollinearDirections, errors.InconsistentSystem) as exc:
            raise _Invalid(FailureReason(Reason.ROOT_COLLISION, f"index {i}: {exc}", (i,)))
        op = mixed_operator(frame, (ip, ipp))
        pair = [DecompositionTerm(alpha, ctx.embed_point(rp.first.coords)),
                DecompositionTerm(beta, ctx.embed_point(rp.second.coords))]
        try:
            terms.extend(antiderivative_terms(pair, 2, op, tol))
        except errors.AntiderivativeUndefined as exc:
            raise _Invalid(FailureReason(Reason.ANTIDERIVATIVE_UNDEFINED, f"index {i}: {exc}", (i,)))
        for k in range(2):
            prov.append({"index": i, "root": k})
    return terms, prov, hs


def decompose_six(g, frame, tol=DEFAULT, scale=None):
    """Write a quartic with vanishing ``x^0 x^1 x^2`` derivative as six fourth powers.

    Pair i of the result spans the two roots of ``h^i`` in the binary ring of
    index i, where ``h^0`` is a fixed point of the theta chain and
    ``h^{i'} = theta_i(h^i)``. ``scale`` is the reference size for zero tests
    (defaults to the size of ``g``).
    """
    _check_quartic(g)
    scale = g.norm() if scale is None else scale
    if scale == 0:
        return Result(failure=FailureReason(Reason.Q_ZERO, "the form vanishes", (0, 1, 2)))
    if harmonic_defect(g, frame) * g.norm() > tol.zero * 24 * scale:
        raise errors.PreconditionError("the x^0 x^1 x^2 derivative of the quartic does not vanish")
    try:
        _qs(g, frame, scale, tol)
        chain = build_chain(g, frame, tol)
    except _Invalid as exc:
        return Result(failure=exc.reason)
    except errors.QZero as exc:
        return Result(failure=FailureReason(Reason.Q_ZERO, str(exc), (exc.index,)))
    except errors.QSquare as exc:
        return Result(failure=FailureReason(Reason.Q_SQUARE, str(exc), (exc.index,)))
    except (errors.OmegaDegenerate, errors.FrameFitFailed, errors.IdentityMap,
            errors.NotInL, errors.InconsistentSystem, errors.NotInKernel) as exc:
        return Result(failure=FailureReason(Reason.THETA_DEGENERATE, f"{type(exc).__name__}: {exc}"))

    candidates, failures = [], []
    for n, p in enumerate(chain.fixed_points):
        try:
            terms, prov, hs = _pair_terms(g, frame, chain, p.coords, tol)
        except _Invalid as exc:
            failures.append(exc.reason)
            continue
        dec = Decomposition(4, terms, 0.0, tuple(dict(d, fixed_point=n) for d in prov))
        res = verify(g, dec)
        candidates.append((res, n, dec, hs))

    diag = {
        "fixed_point_count": len(chain.fixed_points),
        "classification": chain.fixed.kind,
        "discriminant": chain.fixed.discriminant,
        "closure": chain.closure,
        "rejected": [r.to_json() for r in failures],
    }
    if not candidates:
        codes = {r.code for r in failures}
        if len(codes) == 1:
            first = failures[0]
            return Result(failure=FailureReason(first.code, "; ".join(r.detail for r in failures), first.indices),
                          chain=chain, diagnostics=diag)
        return Result(failure=FailureReason(Reason.NO_VALID_FIXED_POINT, "; ".join(
            f"{r.code.value}: {r.detail}" for r in failures)), chain=chain, diagnostics=diag)
    candidates.sort(key=lambda c: c[0])
    res, n, dec, hs = candidates[0]
    diag["residuals"] = [c[0] for c in sorted(candidates, key=lambda c: c[1])]
    diag["fixed_point_used"] = n
    diag["h"] = hs
    if res > tol.verify:
        return Result(failure=FailureReason(Reason.RESIDUAL_TOO_LARGE, f"residual {res:.3g}"),
                      chain=chain, diagnostics=diag)
    dec = Decomposition(4, dec.terms, res, dec.provenance)
    return Result(decomposition=dec, chain=chain, diagnostics=diag)


def seventh_term(f, frame, tol=DEFAULT):
    """The term ``(coefficient, v)`` whose fourth power has the same ``x^0 x^1 x^2`` derivative as f.

    Returns ``None`` when that derivative vanishes; raises
    :class:`~waring7.errors.AntiderivativeUndefined` when some ``x^i(v)`` does.
    """
    op = mixed_operator(frame, (0, 1, 2))
    v = apolar_apply(op, f)
    if v.norm() <= tol.zero * f.norm() * 24:
        return None
    for i in range(3):
        xi = frame.dual_form(i)
        if abs(evaluate_dual(xi, v)) <= tol.zero * np.max(np.abs(xi.coeffs)) * v.norm():
            raise errors.AntiderivativeUndefined(f"x^{i}(v) vanishes")
    return antiderivative_terms([DecompositionTerm(1.0, v)], 1, op, tol)[0]


def decompose_seven(f, frame, tol=DEFAULT):
    """Seven fourth powers: one along ``v = d_{x^0 x^1 x^2} f`` plus six for the remainder."""
    _check_quartic(f)
    scale = f.norm()
    if scale == 0:
        return Result(failure=FailureReason(Reason.Q_ZERO, "the form vanishes", (0, 1, 2)))
    try:
        vterm = seventh_term(f, frame, tol)
    except errors.AntiderivativeUndefined as exc:
        return Result(failure=FailureReason(Reason.V_DEGENERATE, str(exc)))
    diag = {}
    if vterm is None:
        g = f
        diag["already_harmonic"] = True
    else:
        g = f - expand_terms([vterm], 4)
        diag["already_harmonic"] = False
    diag["g_relative_norm"] = g.norm() / scale
    diag["g"] = g
    six = decompose_six(g, frame, tol, scale=scale)
    diag.update(six.diagnostics)
    if not six.ok:
        failure = six.failure
        if failure.code == Reason.Q_ZERO and g.norm() <= tol.zero * scale:
            failure = FailureReason(Reason.Q_ZERO, "g vanishes", failure.indices)
        return Result(failure=failure, chain=six.chain, diagnostics=diag)
    terms = list(six.decomposition.terms)
    prov = list(six.decomposition.provenance)
    if vterm is not None:
        terms.append(vterm)
        prov.append({"index": None, "root": "v"})
    dec = Decomposition(4, terms, 0.0, prov)
    res = verify(f, dec)
    if res > tol.verify:
        return Result(failure=FailureReason(Reason.RESIDUAL_TOO_LARGE, f"residual {res:.3g}"),
                      chain=six.chain, diagnostics=diag)
    return Result(decomposition=Decomposition(4, terms, res, prov), chain=six.chain, diagnostics=diag)


def proof_identities(g, frame, dec):
    """Residuals of the intermediate identities behind a six-term decomposition.

    ``f_i`` is the pair of terms of index i, ``F_{ii'} = d_{x^i} f_{i'}`` and
    ``F_{ii''} = d_{x^i} f_{i''}``. Returns the largest relative deviation of

    * ``d_{x^i} f_i = 0``,
    * ``d_{x^{i'}} F_{ii'} = 0`` and ``d_{x^{i''}} F_{ii''} = 0``,
    * ``d_{x^{i'}} d_{x^i} g = q_{i''} = d_{x^{i'}} F_{ii''}``,
    * ``d_{x^i} g = F_{ii'} + F_{ii''}``.
    """
    parts = [[], [], []]
    for t, p in zip(dec.terms, dec.provenance):
        if p.get("index") in (0, 1, 2):
            parts[p["index"]].append(t)
    fs = [expand_terms(ts, 4) for ts in parts]
    ref = g.norm()
    worst = {"kernel": 0.0, "F_vanish": 0.0, "q_match": 0.0, "split": 0.0}
    for i in range(3):
        ip, ipp = cyclic(i)
        xi, xip, xipp = (frame.dual_form(k) for k in (i, ip, ipp))
        worst["kernel"] = max(worst["kernel"], apolar_apply(xi, fs[i]).norm() / ref)
        F_ip = apolar_apply(xi, fs[ip])
        F_ipp = apolar_apply(xi, fs[ipp])
        worst["F_vanish"] = max(worst["F_vanish"], apolar_apply(xip, F_ip).norm() / ref,
                                apolar_apply(xipp, F_ipp).norm() / ref)
        dg = apolar_apply(xi, g)
        q_ipp = apolar_apply(mixed_operator(frame, (i, ip)), g)
        worst["q_match"] = max(worst["q_match"], (apolar_apply(xip, dg) - q_ipp).norm() / ref,
                               (apolar_apply(xip, F_ipp) - q_ipp).norm() / ref)
        worst["split"] = max(worst["split"], (dg - (F_ip + F_ipp)).norm() / ref)
    return worst
