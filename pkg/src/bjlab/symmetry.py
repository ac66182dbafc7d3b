"""Left and right symmetric points.

``x`` is left symmetric when ``x ⊥_B y`` always forces ``y ⊥_B x``, and right
symmetric when ``y ⊥_B x`` always forces ``x ⊥_B y``. This module offers

* closed-form classifiers for l_p^n and for finite sup-sums of classifiable
  components,
* randomised counterexample searches, which can refute symmetry with a
  verified witness but never prove it,
* the witness constructions for sup-sums that follow the necessity
  arguments (block indicators, block replacement, and lifting a component
  counterexample).

Choice of block for the multi-block left witness. Let ``f`` be a unit vector
with at least two nonzero blocks and ``M`` its attainment set. If some
nonzero block ``j`` lies outside ``M``, put ``g = e_j(f(j)/||f(j)||)``: every
attaining block of ``f`` sees ``g = 0`` there, so ``f ⊥ g``; ``g`` attains
only at ``j`` where every support functional gives ``f(j)`` the positive
value ``||f(j)||``, so ``g`` is not orthogonal to ``f``. Otherwise all nonzero
blocks attain, there are at least two of them, and the same ``g`` built on
the first one works because a second attaining block of ``f`` sees ``g = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .orthogonality import (
    TAU_REL,
    Decision,
    OrthoVerdict,
    is_bj_functional,
    is_bj_min,
    min_norm_along,
)
from .spaces import (
    TAU_NORM,
    TAU_TIE,
    Lp,
    Polyhedral,
    Space,
    SpaceError,
    SupSum,
    ZeroVectorError,
    _as_array,
    _drange,
    _norm,
    attainment,
    block_norms,
    format_space,
    jset_centroid,
    jset_range,
    jset_sample,
    norm,
    norming_vector,
    support_set,
)

TAU_FORM = 1e-8
DEFAULT_BUDGET = 10_000
BATCH = 2048
NEAR_MISS = 1e-3
REFINE_STEPS = 50
MAX_REFINES = 4
PATIENCE = 10
SCREEN = 64


class NonUnitInput(ValueError):
    pass


class UnsupportedSpace(SpaceError):
    """No closed-form classifier is available for this descriptor."""


class ConditionSatisfied(ValueError):
    """A witness was requested for a point that meets the characterisation."""


class SearchExhausted(RuntimeError):
    pass


class Kind(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    BOTH = "both"
    NEITHER = "neither"


class Method(str, Enum):
    CLOSED_FORM = "closed_form"
    SEARCH_NO_COUNTEREXAMPLE = "search_no_counterexample"
    SEARCH_REFUTED = "search_refuted"


@dataclass(frozen=True, eq=False)
class Witness:
    """A certified asymmetric pair.

    For ``direction="left"``: ``x ⊥ y`` holds (``forward``) while ``y ⊥ x``
    fails (``reverse``). For ``"right"``: ``y ⊥ x`` holds and ``x ⊥ y`` fails.
    ``mu`` is the coefficient produced by a construction, when there is one.
    """

    space: Space
    x: np.ndarray
    y: np.ndarray
    direction: str
    forward: OrthoVerdict
    reverse: OrthoVerdict
    mu: float | None = None

    @property
    def margin(self) -> float:
        """Relative drop ``1 - min||a + lambda b|| / ||a||`` in the failing direction."""
        anchor = self.y if self.direction == "left" else self.x
        return 1.0 - self.reverse.value / norm(self.space, anchor)

    def to_dict(self) -> dict:
        out = {
            "space": format_space(self.space),
            "f": [float(v) for v in self.x],
            "g": [float(v) for v in self.y],
            "direction": self.direction,
            "lambda_star": self.reverse.lam,
            "margins": {
                "reverse": self.margin,
                "forward_interval": list(self.forward.interval) if self.forward.interval else None,
            },
        }
        if self.mu is not None:
            out["mu"] = self.mu
        return out


@dataclass(frozen=True, eq=False)
class SymmetryVerdict:
    kind: Kind
    method: Method
    witness: Witness | None = None


# --------------------------------------------------------------------------
# orthogonal constructors


def _slope_range(space, V, x):
    if isinstance(space, Lp) and space.is_smooth and space.dim > 1:
        # only the sign matters here, so the normalisation by ||v|| is skipped
        s = (np.sign(V) * np.abs(V) ** (space.p - 1) * x).sum(axis=-1)
        return s, s
    # exact ties: a tie band would stop the bisection early on nearly flat blocks
    return _drange(space, V, np.broadcast_to(x, V.shape), 0.0, 0.0)


def _foot_batch(space: Space, x: np.ndarray, Z: np.ndarray, iters: int = 80) -> np.ndarray:
    """Minimisers of ``lambda -> ||z + lambda x||`` by bisection on the derivative sign."""
    nx = float(_norm(space, x))
    r = 2 * _norm(space, Z) / nx + 1
    lo, hi = -r, r.copy()
    stop = 1e-15 * (1 + r)
    hit = np.zeros(len(Z), dtype=bool)
    lam = np.zeros(len(Z))
    for _ in range(iters):
        mid = np.where(hit, lam, (lo + hi) / 2)
        dlo, dhi = _slope_range(space, Z + mid[:, None] * x, x)
        go_left = (dlo > 0) & ~hit
        go_right = (dhi < 0) & ~hit
        new = ~go_left & ~go_right & ~hit
        lam = np.where(new, mid, lam)
        hit |= new
        hi = np.where(go_left, mid, hi)
        lo = np.where(go_right, mid, lo)
        if np.all(hit | ((hi - lo) < stop)):
            break
    return np.where(hit, lam, (lo + hi) / 2)


def orthogonalize_right(space: Space, x, z) -> np.ndarray:
    """Return ``y = z + lambda* x`` with ``y ⊥_B x`` (foot of the perpendicular)."""
    x = _as_array(space, x)
    z = _as_array(space, z)
    if norm(space, x) == 0:
        raise ZeroVectorError("x must be nonzero")
    lam = _foot_batch(space, x, z[None, :])[0]
    y = z + lam * x
    if norm(space, y) <= 1e-12 * max(norm(space, z), 1.0):
        raise ValueError("z is parallel to x")
    return y


def orthogonalize_left(space: Space, x, z, f=None) -> np.ndarray:
    """Return ``y = z - (f(z)/f(x)) x`` with ``f in J(x)``, so ``x ⊥_B y``.

    Without an explicit ``f`` the centroid of the support face is used.
    """
    x = _as_array(space, x)
    z = _as_array(space, z)
    if f is None:
        f = jset_centroid(support_set(space, x))
    y = z - (f @ z) / (f @ x) * x
    if norm(space, y) <= 1e-12 * max(norm(space, z), 1.0):
        raise ValueError("z is parallel to x")
    return y


# --------------------------------------------------------------------------
# randomised search


def sample_sphere(space: Space, rng: np.random.Generator, size: int) -> np.ndarray:
    """Gaussian directions, a quarter of them sparsified, normalised in the space's norm."""
    Z = rng.standard_normal((size, space.dim))
    if space.dim > 1:
        sparse = rng.random(size) < 0.25
        mask = rng.random((size, space.dim)) < 0.5
        Z = np.where(sparse[:, None] & mask, 0.0, Z)
    n = _norm(space, Z)
    bad = n == 0
    Z[bad] = rng.standard_normal((int(bad.sum()), space.dim))
    return Z / _norm(space, Z)[:, None]


def _violation(lo, hi, scale):
    # > 0 exactly when 0 lies outside [lo, hi]
    return np.maximum(lo, -hi) / scale


def _certify(space, x, y, direction, tau_rel):
    """Re-verify a candidate with both oracles; return a Witness or None."""
    try:
        if direction == "left":
            forward = is_bj_functional(space, x, y)
            reverse = is_bj_min(space, y, x, tau_rel)
            forward_min = is_bj_min(space, x, y, tau_rel)
            reverse_fn = is_bj_functional(space, y, x)
        else:
            forward = is_bj_functional(space, y, x)
            reverse = is_bj_min(space, x, y, tau_rel)
            forward_min = is_bj_min(space, y, x, tau_rel)
            reverse_fn = is_bj_functional(space, x, y)
    except (ZeroVectorError, ValueError):
        return None
    ok = (
        forward.orthogonal
        and forward_min.decision is not Decision.NOT_ORTHOGONAL
        and reverse.decision is Decision.NOT_ORTHOGONAL
        and reverse_fn.decision is Decision.NOT_ORTHOGONAL
    )
    return Witness(space, x.copy(), y.copy(), direction, forward, reverse) if ok else None


class _Searcher:
    def __init__(self, space, x, direction, rng, tau_rel):
        self.space, self.x, self.direction = space, x, direction
        self.rng, self.tau_rel = rng, tau_rel
        self.nx = float(_norm(space, x))
        self.J = support_set(space, x)

    def candidates(self, Z, F=None):
        """Map raw directions to vectors satisfying the assumed orthogonality."""
        sp, x = self.space, self.x
        if self.direction == "left":
            Y = Z - ((F * Z).sum(axis=1) / (F @ x))[:, None] * x
        else:
            Y = Z + _foot_batch(sp, x, Z)[:, None] * x
            # second pass on the rescaled foot: when z is nearly parallel to x
            # the first pass leaves cancellation residue of order eps * ||z||
            ny = _norm(sp, Y)
            Y = Y / np.where(ny > 0, ny, 1.0)[:, None]
            Y = Y + _foot_batch(sp, x, Y)[:, None] * x
        return Y

    def scores(self, Y):
        """Violation of the implication: positive when the converse orthogonality fails."""
        sp, x = self.space, self.x
        ny = _norm(sp, Y)
        if self.direction == "left":
            lo, hi = _drange(sp, Y, np.broadcast_to(x, Y.shape), TAU_NORM, TAU_TIE)
            s = _violation(lo, hi, self.nx)
        else:
            lo, hi = jset_range(self.J, Y)
            s = _violation(lo, hi, np.where(ny > 0, ny, 1.0))
        return np.where(ny > 1e-9, s, -np.inf)

    def margins(self, Y):
        """Relative drop ``1 - min ||a + lambda b|| / ||a||`` of the converse pair."""
        sp, x = self.space, self.x
        X = np.broadcast_to(x, Y.shape)
        if self.direction == "left":
            _, val = min_norm_along(sp, Y, X)
            return 1 - val / _norm(sp, Y)
        _, val = min_norm_along(sp, X, Y)
        return 1 - val / self.nx

    def objective(self, Y):
        """Slope score while it is nonpositive, ``1 + margin`` once it is positive.

        A positive slope already refutes the converse, but the certificate
        needs a visible drop, which a steep yet strongly curved direction may
        not give.
        """
        s = self.scores(Y)
        out = s.copy()
        pos = s > TAU_NORM
        if np.any(pos):
            out[pos] = 1 + self.margins(Y[pos])
        return out

    def refine(self, z, f):
        """Coordinate-wise perturbation of ``z`` that increases the objective."""
        step, n = 1e-2, self.space.dim
        best_y = self.candidates(z[None], None if f is None else f[None])
        best = self.objective(best_y)[0]
        stale = 0
        for _ in range(REFINE_STEPS):
            trial = np.concatenate([z + step * np.eye(n), z - step * np.eye(n)])
            F = None if f is None else np.repeat(f[None], len(trial), axis=0)
            Y = self.candidates(trial, F)
            s = self.objective(Y)
            k = int(np.argmax(s))
            if s[k] > best:
                best, z, best_y = s[k], trial[k], Y[k : k + 1]
                stale = 0
            else:
                stale += 1
                if stale >= PATIENCE:
                    break
            step *= 0.7
        return best, best_y[0]


def _search(space, x, direction, budget, seed, tau_rel, batch=BATCH):
    x = _as_array(space, x)
    if x.ndim != 1 or norm(space, x) == 0:
        raise ZeroVectorError("x must be a nonzero vector")
    rng = np.random.default_rng(seed)
    s = _Searcher(space, x, direction, rng, tau_rel)
    done = refines = 0
    while done < budget:
        b = min(batch, budget - done)
        done += b
        Z = sample_sphere(space, rng, b)
        F = jset_sample(s.J, rng, b) if direction == "left" else None
        Y = s.candidates(Z, F)
        sc = s.scores(Y)
        order = np.argsort(-sc)
        top = order[:SCREEN][sc[order[:SCREEN]] > TAU_NORM]
        if len(top):
            m = s.margins(Y[top])
            for k in top[np.argsort(-m)][:3]:
                w = _certify(space, x, Y[k], direction, tau_rel)
                if w is not None:
                    return w
        k = int(order[0])
        if -NEAR_MISS < sc[k] and refines < MAX_REFINES:
            refines += 1
            best, y = s.refine(Z[k], None if F is None else F[k])
            if best > 1:
                w = _certify(space, x, y, direction, tau_rel)
                if w is not None:
                    return w
    return None


def search_left_counterexample(
    space: Space, x, budget: int = DEFAULT_BUDGET, seed: int = 0, tau_rel: float = TAU_REL
) -> Witness | None:
    """Look for ``y`` with ``x ⊥_B y`` but not ``y ⊥_B x``.

    Each round draws a direction ``z`` and a support functional ``f`` of
    ``x`` and projects ``z`` into ``ker f``. Returns ``None`` when the budget
    is spent, which is evidence of left symmetry and nothing more.
    """
    return _search(space, x, "left", budget, seed, tau_rel)


def search_right_counterexample(
    space: Space, x, budget: int = DEFAULT_BUDGET, seed: int = 0, tau_rel: float = TAU_REL
) -> Witness | None:
    """Look for ``y`` with ``y ⊥_B x`` but not ``x ⊥_B y`` (``y`` sampled as feet of perpendiculars)."""
    return _search(space, x, "right", budget, seed, tau_rel)


# --------------------------------------------------------------------------
# closed forms


def _require_unit(space, x, tau_form):
    n = norm(space, x)
    if abs(n - 1) > tau_form:
        raise NonUnitInput(f"expected a unit vector, got norm {n!r}")


def _two_spike(a: np.ndarray, p: float, tau_form: float) -> bool:
    nz = a > tau_form
    k = int(nz.sum())
    if k == 1:
        return True
    return k == 2 and bool(np.all(np.abs(a[nz] - 2 ** (-1 / p)) <= tau_form))


def classify_left_lp(space: Lp, x, tau_form: float = TAU_FORM) -> bool:
    """Closed-form left symmetry of a unit vector of l_p^n.

    Accepted: ``±e_k`` and two-spike vectors with both entries of modulus
    ``2^(-1/p)`` for ``1 < p < inf``; ``±e_k`` for ``p = inf``; for ``p = 1``
    only the two-spike vectors of l_1^2 (there are none when ``n > 2``).
    Every unit vector of l_2^n and of the real line qualifies.
    """
    x = _as_array(space, x)
    _require_unit(space, x, tau_form)
    a, p, n = np.abs(x), space.p, space.dim
    if p == 2 or n == 1:
        return True
    if p == math.inf:
        return int((a > tau_form).sum()) == 1
    if p == 1:
        return n == 2 and bool(np.all(np.abs(a - 0.5) <= tau_form))
    return _two_spike(a, p, tau_form)


def classify_right_lp(space: Lp, x, tau_form: float = TAU_FORM) -> bool:
    """Closed-form right symmetry of a unit vector of l_p^n.

    Same two-spike forms as the left case for ``1 < p < inf``; all
    coordinates of modulus one for ``p = inf``; ``±e_k`` for ``p = 1``.
    """
    x = _as_array(space, x)
    _require_unit(space, x, tau_form)
    a, p, n = np.abs(x), space.p, space.dim
    if p == 2 or n == 1:
        return True
    if p == math.inf:
        return bool(np.all(np.abs(a - 1) <= tau_form))
    if p == 1:
        return int((a > tau_form).sum()) == 1
    return _two_spike(a, p, tau_form)


def classify_left(space: Space, x, tau_form: float = TAU_FORM) -> bool:
    if isinstance(space, Lp):
        return classify_left_lp(space, x, tau_form)
    if isinstance(space, SupSum):
        return classify_left_supsum(space, x, tau_form)
    raise UnsupportedSpace(f"no closed form for {format_space(space)}; use the search")


def classify_right(space: Space, x, tau_form: float = TAU_FORM) -> bool:
    if isinstance(space, Lp):
        return classify_right_lp(space, x, tau_form)
    if isinstance(space, SupSum):
        return classify_right_supsum(space, x, tau_form)
    raise UnsupportedSpace(f"no closed form for {format_space(space)}; use the search")


def classify_left_supsum(space: SupSum, f, tau_form: float = TAU_FORM) -> bool:
    """Unit ``f`` is left symmetric iff exactly one block is nonzero and that
    block value is a left symmetric unit vector of its component."""
    f = _as_array(space, f)
    _require_unit(space, f, tau_form)
    bn = block_norms(space, f)
    nonzero = np.flatnonzero(bn > tau_form)
    if len(nonzero) != 1:
        return False
    k = int(nonzero[0])
    if abs(bn[k] - 1) > tau_form:
        return False
    return classify_left(space.components[k], f[space.slices[k]], tau_form)


def classify_right_supsum(space: SupSum, f, tau_form: float = TAU_FORM) -> bool:
    """Unit ``f`` is right symmetric iff every block is a unit, right symmetric
    vector of its component."""
    f = _as_array(space, f)
    _require_unit(space, f, tau_form)
    bn = block_norms(space, f)
    if np.any(np.abs(bn - 1) > tau_form):
        return False
    return all(
        classify_right(c, f[s], tau_form) for c, s in zip(space.components, space.slices)
    )


def is_symmetric_supsum(space: SupSum, f, tau_form: float = TAU_FORM) -> bool:
    """Both left and right symmetric; with two or more blocks only ``f = 0`` qualifies."""
    f = _as_array(space, f)
    nf = norm(space, f)
    if nf == 0:
        return True
    if len(space.components) >= 2:
        return False
    c = space.components[0]
    return classify_left(c, f / nf, tau_form) and classify_right(c, f / nf, tau_form)


# --------------------------------------------------------------------------
# sup-sum witnesses


def _embed(space: SupSum, k: int, v) -> np.ndarray:
    g = np.zeros(space.dim)
    g[space.slices[k]] = v
    return g


def _verified(space, f, g, direction, tau_rel, mu=None) -> Witness:
    w = _certify(space, f, g, direction, tau_rel)
    if w is None:
        raise SearchExhausted("constructed witness failed re-verification")
    return Witness(space, w.x, w.y, direction, w.forward, w.reverse, mu)


def witness_left_supsum(
    space: SupSum,
    f,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    tau_form: float = TAU_FORM,
    tau_rel: float = TAU_REL,
) -> Witness:
    """Construct ``g`` with ``f ⊥ g`` and not ``g ⊥ f`` for a unit ``f`` that is
    not left symmetric. See the module docstring for the block choice."""
    f = _as_array(space, f)
    _require_unit(space, f, tau_form)
    bn = block_norms(space, f)
    nonzero = [int(k) for k in np.flatnonzero(bn > tau_form)]
    if len(nonzero) >= 2:
        M = set(attainment(space, f))
        outside = [k for k in nonzero if k not in M]
        j = outside[0] if outside else min(k for k in nonzero if k in M)
        g = _embed(space, j, f[space.slices[j]] / bn[j])
        return _verified(space, f, g, "left", tau_rel)
    k0 = nonzero[0]
    comp, v = space.components[k0], f[space.slices[k0]]
    try:
        if classify_left(comp, v, tau_form):
            raise ConditionSatisfied("f is left symmetric: one nonzero block, left symmetric value")
    except UnsupportedSpace:
        pass
    w = search_left_counterexample(comp, v, budget, seed, tau_rel)
    if w is None:
        raise SearchExhausted(f"no left counterexample for block {k0} within {budget} rounds")
    return _verified(space, f, _embed(space, k0, w.y), "left", tau_rel)


def _right_block_vector(comp, v, rng):
    """Unit ``w`` with ``w ⊥_B v``; on the real line fall back to ``-v/|v|``.

    ``w`` is built from the dual side: draw ``h`` with ``h(v) = 0`` and take a
    norming vector of ``h``, so ``h/||h||`` lies in ``J(w)``. Computing a foot
    of the perpendicular instead leaves rounding residue in coordinates that
    should vanish, and for ``p < 2`` the support functional magnifies it.

    In one dimension no unit vector is orthogonal to a nonzero scalar, yet the
    anti-parallel choice keeps the replaced block in ``f(k)-`` which is all the
    witness needs.
    """
    nv = norm(comp, v)
    if nv <= TAU_NORM:
        return sample_sphere(comp, rng, 1)[0]
    if comp.dim == 1:
        return -v / nv
    for _ in range(16):
        h = rng.standard_normal(comp.dim)
        h -= (h @ v) / (v @ v) * v
        if np.abs(h).max() > 1e-8:
            w = norming_vector(comp, h)
            return w / norm(comp, w)
    raise SearchExhausted("could not draw a functional vanishing on the block value")


def witness_right_supsum(
    space: SupSum,
    f,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    tau_form: float = TAU_FORM,
    tau_rel: float = TAU_REL,
) -> Witness:
    """Construct ``g`` with ``g ⊥ f`` and not ``f ⊥ g`` for a unit ``f`` that is
    not right symmetric.

    Case (i), some block with ``||f(k0)|| < 1``: replace that block by a unit
    ``w0`` orthogonal to ``f(k0)``; the construction coefficient is
    ``mu = -(1 - ||f(k0)||)/2`` and ``||f + mu g|| <= (1 + ||f(k0)||)/2``.
    Case (ii), all blocks unit but ``f(k0)`` not right symmetric: take a
    component witness ``(w0, lambda0)``, set ``g(k0) = w0`` and
    ``g(k) = -mu f(k)`` elsewhere with ``mu = t0 lambda0``, ``|mu| < 1``.
    """
    f = _as_array(space, f)
    _require_unit(space, f, tau_form)
    rng = np.random.default_rng(seed)
    bn = block_norms(space, f)
    short = np.flatnonzero(bn < 1 - tau_form)
    if len(short):
        k0 = int(short[np.argmin(bn[short])])
        comp, s = space.components[k0], space.slices[k0]
        g = f.copy()
        g[s] = _right_block_vector(comp, f[s], rng)
        mu = -(1 - bn[k0]) / 2
        return _verified(space, f, g, "right", tau_rel, mu)

    for k0, (comp, s) in enumerate(zip(space.components, space.slices)):
        try:
            if classify_right(comp, f[s], tau_form):
                continue
        except UnsupportedSpace:
            pass
        w = search_right_counterexample(comp, f[s], budget, seed + k0, tau_rel)
        if w is None:
            continue
        nw = norm(comp, w.y)
        w0 = w.y / nw
        lam0 = w.reverse.lam * nw
        ts = np.linspace(1, 0, 200, endpoint=False)
        ts = ts[np.abs(ts * lam0) < 1]
        vals = np.maximum(1 - (ts * lam0) ** 2, _norm(comp, f[s] + (ts * lam0)[:, None] * w0))
        mu = float(ts[np.argmin(vals)] * lam0)
        g = -mu * f
        g[s] = w0
        return _verified(space, f, g, "right", tau_rel, mu)
    raise ConditionSatisfied("every block is a unit right symmetric vector (or the search found nothing)")


# --------------------------------------------------------------------------
# combined classification


def classify_point(
    space: Space, x, budget: int = DEFAULT_BUDGET, seed: int = 0, tau_form: float = TAU_FORM
) -> dict:
    """Closed-form verdicts (when available) next to search evidence, for reports."""
    x = _as_array(space, x)
    out = {}
    for side, classify, search in (
        ("left", classify_left, search_left_counterexample),
        ("right", classify_right, search_right_counterexample),
    ):
        try:
            closed = bool(classify(space, x, tau_form))
        except UnsupportedSpace:
            closed = None
        w = search(space, x, budget, seed)
        out[side] = {
            "closed_form": closed,
            "search": Method.SEARCH_REFUTED.value if w else Method.SEARCH_NO_COUNTEREXAMPLE.value,
            "witness": w.to_dict() if w else None,
        }
    left, right = out["left"]["closed_form"], out["right"]["closed_form"]
    if left is not None and right is not None:
        kind = {(True, True): Kind.BOTH, (True, False): Kind.LEFT, (False, True): Kind.RIGHT}.get(
            (left, right), Kind.NEITHER
        )
        out["kind"] = kind.value
    else:
        out["kind"] = None
    return out
