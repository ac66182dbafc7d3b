"""Birkhoff-James orthogonality and the one-sided relations x+ / x-.

Two independent deciders are provided. The minimisation oracle evaluates
``min_lambda ||x + lambda y||`` by ternary search and compares it with
``||x||``; the functional oracle looks for a support functional of ``x`` that
annihilates ``y``, which in the real case reduces to the sign range of
``f(y)`` over ``J(x)``. On sup-sums a third route works block by block over
the norm-attainment set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .spaces import (
    TAU_NORM,
    TAU_TIE,
    Space,
    SpaceError,
    SupSum,
    ZeroVectorError,
    _as_array,
    attainment,
    block_norms,
    blocks,
    norm,
    support_set,
    jset_range,
)

TAU_REL = 1e-9
MAX_ITER = 220

DOMAINS = ("all", "nonneg", "nonpos")


class Decision(str, Enum):
    ORTHOGONAL = "orthogonal"
    NOT_ORTHOGONAL = "not_orthogonal"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class OrthoVerdict:
    decision: Decision
    oracle: str
    lam: float | None = None
    value: float | None = None
    interval: tuple | None = None

    @property
    def orthogonal(self) -> bool:
        return self.decision is Decision.ORTHOGONAL

    def to_dict(self) -> dict:
        return {
            "decision": self.decision.value,
            "oracle": self.oracle,
            "lambda_star": self.lam,
            "value": self.value,
            "interval": list(self.interval) if self.interval is not None else None,
        }


def ternary_min(fun, lo, hi, max_iter: int = MAX_ITER):
    """Minimise a convex function on ``[lo, hi]`` elementwise.

    ``fun`` maps an array of abscissae (same shape as ``lo``) to values.
    Iteration stops after ``max_iter`` rounds or once every bracket is shorter
    than ``1e-14 * (1 + radius)``. Returns ``(argmin, min)`` taken over the
    final midpoint and both original endpoints.
    """
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    a0, b0 = lo.copy(), hi.copy()
    stop = 1e-14 * (1 + np.maximum(np.abs(a0), np.abs(b0)))
    for _ in range(max_iter):
        live = (hi - lo) >= stop
        if not np.any(live):
            break
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        f1, f2 = fun(m1), fun(m2)
        left = f1 < f2
        hi = np.where(live & left, m2, hi)
        lo = np.where(live & ~left, m1, lo)
    cands = np.stack([(lo + hi) / 2, a0, b0])
    vals = np.stack([fun(c) for c in cands])
    k = np.argmin(vals, axis=0)
    lam = np.take_along_axis(cands, k[None], axis=0)[0]
    val = np.take_along_axis(vals, k[None], axis=0)[0]
    return lam, val


def min_norm_along(space: Space, x, y, domain: str = "all"):
    """``(lambda*, min ||x + lambda y||)`` over the reals, ``lambda >= 0`` or ``lambda <= 0``.

    Beyond ``|lambda| > 2||x||/||y||`` the triangle inequality gives
    ``||x + lambda y|| > ||x||``, so the search bracket has radius
    ``2||x||/||y|| + 1``. Batched over leading axes.
    """
    if domain not in DOMAINS:
        raise ValueError(f"domain must be one of {DOMAINS}")
    x = _as_array(space, x)
    y = _as_array(space, y)
    x, y = np.broadcast_arrays(x, y)
    nx, ny = norm(space, x), norm(space, y)
    if np.any(np.asarray(ny) == 0):
        raise ZeroVectorError("direction y must be nonzero")
    radius = 2 * np.asarray(nx) / np.asarray(ny) + 1
    lo = np.zeros_like(radius) if domain == "nonneg" else -radius
    hi = np.zeros_like(radius) if domain == "nonpos" else radius

    def fun(lam):
        return norm(space, x + np.asarray(lam)[..., None] * y)

    lam, val = ternary_min(fun, lo, hi)
    # lambda = 0 is feasible in every domain
    better = np.asarray(nx) <= val
    lam = np.where(better, 0.0, lam)
    val = np.where(better, nx, val)
    if np.ndim(lam) == 0:
        return float(lam), float(val)
    return lam, val


def _classify_value(value, nx, tau_rel):
    value, nx = np.asarray(value), np.asarray(nx)
    ortho = value >= nx * (1 - tau_rel)
    refuted = value <= nx * (1 - 10 * tau_rel)
    return ortho, refuted


def bj_min_batch(space: Space, x, y, tau_rel: float = TAU_REL):
    """Vectorised minimisation oracle: returns ``(decision codes, lambda*, value)``.

    Codes: 1 orthogonal, 0 not orthogonal, -1 inconclusive. Zero ``y`` is
    orthogonal to everything.
    """
    x = _as_array(space, x)
    y = _as_array(space, y)
    x, y = np.broadcast_arrays(x, y)
    nx = np.asarray(norm(space, x))
    ny = np.asarray(norm(space, y))
    zero_y = ny == 0
    y_safe = np.where(zero_y[..., None], x, y)
    lam, val = min_norm_along(space, x, y_safe)
    lam = np.where(zero_y, 0.0, lam)
    val = np.where(zero_y, nx, val)
    ortho, refuted = _classify_value(val, nx, tau_rel)
    code = np.where(ortho, 1, np.where(refuted, 0, -1))
    return code, lam, val


def is_bj_min(space: Space, x, y, tau_rel: float = TAU_REL) -> OrthoVerdict:
    """Decide ``x ⊥_B y`` from the minimum of ``||x + lambda y||``.

    Orthogonal when the minimum is within ``tau_rel`` of ``||x||``, refuted
    (with the minimising lambda as certificate) when it is at least
    ``10 tau_rel`` below, inconclusive in between.
    """
    x = _as_array(space, x)
    if norm(space, x) == 0:
        raise ZeroVectorError("x must be nonzero")
    if norm(space, y) == 0:
        raise ZeroVectorError("y must be nonzero")
    code, lam, val = bj_min_batch(space, x, y, tau_rel)
    decision = {1: Decision.ORTHOGONAL, 0: Decision.NOT_ORTHOGONAL, -1: Decision.INCONCLUSIVE}[int(code)]
    return OrthoVerdict(decision, "minimization", float(lam), float(val))


def _sign_verdict(lo, hi, scale, tau):
    return lo <= tau * scale and hi >= -tau * scale


def is_bj_functional(space: Space, x, y, tau: float = TAU_NORM, certificate: bool = True) -> OrthoVerdict:
    """Decide ``x ⊥_B y`` by looking for ``f in J(x)`` with ``f(y) = 0``.

    Since J(x) is convex, this holds iff the range ``[lo, hi]`` of ``f(y)``
    over J(x) straddles zero. A refutation carries the minimiser on the
    decreasing side as a certificate unless ``certificate`` is false.
    """
    x = _as_array(space, x)
    y = _as_array(space, y)
    J = support_set(space, x, tau)
    lo, hi = (float(v) for v in jset_range(J, y))
    ny = norm(space, y)
    if ny == 0 or _sign_verdict(lo, hi, ny, tau):
        return OrthoVerdict(Decision.ORTHOGONAL, "functional", interval=(lo, hi))
    if not certificate:
        return OrthoVerdict(Decision.NOT_ORTHOGONAL, "functional", interval=(lo, hi))
    side = "nonpos" if lo > 0 else "nonneg"
    lam, val = min_norm_along(space, x, y, side)
    return OrthoVerdict(Decision.NOT_ORTHOGONAL, "functional", lam, val, (lo, hi))


def _range(space, x, y, tau):
    x = _as_array(space, x)
    if norm(space, x) == 0:
        raise ZeroVectorError("x must be nonzero")
    lo, hi = jset_range(support_set(space, x, tau), _as_array(space, y))
    return float(lo), float(hi), norm(space, y)


def in_plus(space: Space, x, y, tau: float = TAU_NORM) -> bool:
    """``y in x+``: ``||x + lambda y|| >= ||x||`` for all ``lambda >= 0``."""
    lo, hi, ny = _range(space, x, y, tau)
    return hi >= -tau * ny


def in_minus(space: Space, x, y, tau: float = TAU_NORM) -> bool:
    """``y in x-``: ``||x + lambda y|| >= ||x||`` for all ``lambda <= 0``."""
    lo, hi, ny = _range(space, x, y, tau)
    return lo <= tau * ny


def _check_eps(eps):
    if not 0 <= eps < 1:
        raise ValueError(f"epsilon must lie in [0, 1), got {eps}")


def _eps_test(space, x, y, eps, tau_rel, domain):
    _check_eps(eps)
    x = _as_array(space, x)
    nx = norm(space, x)
    if nx == 0:
        raise ZeroVectorError("x must be nonzero")
    if norm(space, y) == 0:
        return True
    _, val = min_norm_along(space, x, y, domain)
    return val >= math.sqrt(1 - eps * eps) * nx * (1 - tau_rel)


def in_plus_eps(space: Space, x, y, eps: float, tau_rel: float = TAU_REL) -> bool:
    return _eps_test(space, x, y, eps, tau_rel, "nonneg")


def in_minus_eps(space: Space, x, y, eps: float, tau_rel: float = TAU_REL) -> bool:
    return _eps_test(space, x, y, eps, tau_rel, "nonpos")


def _require_supsum(space):
    if not isinstance(space, SupSum):
        raise SpaceError("this criterion is stated for sup-sums")


def supsum_orthogonal(
    space: SupSum, f, g, tau_tie: float = TAU_TIE, tau: float = TAU_NORM
) -> OrthoVerdict:
    """``f ⊥_B g`` in a finite sup-sum, read off the attainment set of ``f``.

    Over every block ``k`` where ``||f(k)|| = ||f||`` collect the interval of
    values ``y*(g(k))`` for ``y*`` in the support face of ``f(k)``; ``f ⊥ g``
    iff the convex hull of these intervals contains zero.
    """
    _require_supsum(space)
    fb, gb = blocks(space, f), blocks(space, g)
    M = attainment(space, f, tau_tie)
    lo, hi = math.inf, -math.inf
    for k in M:
        comp = space.components[k]
        a, b = jset_range(support_set(comp, fb[k], tau, tau_tie), gb[k])
        lo, hi = min(lo, float(a)), max(hi, float(b))
    ng = norm(space, g)
    if ng == 0 or _sign_verdict(lo, hi, ng, tau):
        return OrthoVerdict(Decision.ORTHOGONAL, "supsum-hull", interval=(lo, hi))
    side = "nonpos" if lo > 0 else "nonneg"
    lam, val = min_norm_along(space, f, g, side)
    return OrthoVerdict(Decision.NOT_ORTHOGONAL, "supsum-hull", lam, val, (lo, hi))


def supsum_orthogonal_general(
    space: SupSum, g, f, tau_tie: float = TAU_TIE, tau: float = TAU_NORM
) -> OrthoVerdict:
    """``g ⊥_B f`` via the two-condition test on the attainment set of ``g``.

    On a finite index set the limits in the general criterion become exact:
    either ``f`` vanishes on some block where ``g`` attains its norm, or
    there are attaining blocks ``k1, k2`` with ``f(k1) in g(k1)+`` and
    ``f(k2) in g(k2)-``.
    """
    _require_supsum(space)
    g = _as_array(space, g)
    f = _as_array(space, f)
    M = attainment(space, g, tau_tie)
    nf = norm(space, f)
    fn = block_norms(space, f)
    if nf == 0 or any(fn[k] <= tau * nf for k in M):
        return OrthoVerdict(Decision.ORTHOGONAL, "supsum-general")
    gb, fb = blocks(space, g), blocks(space, f)
    plus = [k for k in M if in_plus(space.components[k], gb[k], fb[k], tau)]
    minus = [k for k in M if in_minus(space.components[k], gb[k], fb[k], tau)]
    if plus and minus:
        return OrthoVerdict(Decision.ORTHOGONAL, "supsum-general")
    side = "nonpos" if not minus else "nonneg"
    lam, val = min_norm_along(space, g, f, side)
    return OrthoVerdict(Decision.NOT_ORTHOGONAL, "supsum-general", lam, val)
