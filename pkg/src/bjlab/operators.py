"""Matrix operators between the supported spaces.

An operator ``T : X -> Y`` is stored as an ``n x m`` matrix acting on flat
coordinates. Its norm is computed exactly through one of these reductions,
tried in order:

1. ``l_1^m`` domain: the largest codomain norm of a column (the column tuple
   is an isometric copy of ``T`` in the m-fold sup-sum of ``Y``);
2. codomain with finitely many dual extreme points (``l_inf``, ``l_1``,
   polyhedral, sup-sums of those): ``max ||T^t y*||_{X*}`` over those
   extremes; with ``l_inf^n`` codomain these are the rows of ``T``;
3. domain with finitely many extreme points: ``max ||T v||`` over vertices;
4. ``l_2 -> l_2``: the largest singular value.

Anything else raises :class:`UnsupportedPair` instead of approximating.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .orthogonality import (
    TAU_REL,
    Decision,
    OrthoVerdict,
    _classify_value,
    ternary_min,
)
from .spaces import (
    TAU_NORM,
    TAU_TIE,
    DimensionMismatch,
    Lp,
    Polyhedral,
    Space,
    SpaceError,
    SupSum,
    ZeroVectorError,
    _drange,
    _dual_norm,
    _norm,
    _up_to_sign,
    dual_norm,
    dual_space,
    ext_dual,
    format_space,
    has_finite_extremes,
    jset_range,
    support_set,
    norm,
    norming_vector,
    parse_space,
    primal_vertices,
)
from .symmetry import TAU_FORM, NonUnitInput, classify_left, classify_left_supsum, classify_right_supsum


class UnsupportedPair(SpaceError):
    """No exact reduction is available for this (domain, codomain) pair."""


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    entries: np.ndarray
    domain: Space
    codomain: Space

    def __post_init__(self):
        A = np.array(self.entries, dtype=float)
        if A.ndim != 2 or A.shape != (self.codomain.dim, self.domain.dim):
            raise DimensionMismatch(
                f"entries of shape {A.shape} do not map dim {self.domain.dim} to dim {self.codomain.dim}"
            )
        A.setflags(write=False)
        object.__setattr__(self, "entries", A)

    @property
    def shape(self) -> tuple:
        return self.entries.shape

    def __call__(self, x) -> np.ndarray:
        return self.entries @ np.asarray(x, dtype=float)

    def adjoint(self) -> "OperatorMatrix":
        """Transpose between the dual descriptors (when both duals are representable)."""
        return OperatorMatrix(self.entries.T, dual_space(self.codomain), dual_space(self.domain))

    def with_entries(self, entries) -> "OperatorMatrix":
        return OperatorMatrix(entries, self.domain, self.codomain)


@dataclass(frozen=True, eq=False)
class FaceSet:
    """Extreme points of the domain ball where ``||Tv|| = ||T||``, one per sign pair.

    ``single_face`` reports whether one supporting functional of the domain
    ball touches every listed vertex after orienting them; ``functional`` is
    that functional when it exists.
    """

    vertices: np.ndarray
    sign_paired: bool = True
    single_face: bool | None = None
    functional: np.ndarray | None = None


def _is_lp(space, p) -> bool:
    return isinstance(space, Lp) and space.p == p


def _has_finite_ext_dual(space) -> bool:
    return has_finite_extremes(space)


# --------------------------------------------------------------------------
# isometric embeddings


def embed_l1_domain(T: OperatorMatrix) -> np.ndarray:
    """Columns ``(T e_1, ..., T e_m)`` as one vector of ``SupSum^m(codomain)``."""
    if not _is_lp(T.domain, 1):
        raise UnsupportedPair("embed_l1_domain needs an l_1 domain")
    return T.entries.T.reshape(-1).copy()


def l1_domain_target(T: OperatorMatrix) -> SupSum:
    return SupSum((T.codomain,) * T.domain.dim)


def unembed_l1_domain(vec, domain: Space, codomain: Space) -> OperatorMatrix:
    m, n = domain.dim, codomain.dim
    return OperatorMatrix(np.asarray(vec, dtype=float).reshape(m, n).T, domain, codomain)


def embed_linf_codomain(T: OperatorMatrix) -> np.ndarray:
    """Row functionals ``(e_1∘T, ..., e_n∘T)`` as one vector of ``SupSum^n(dual(domain))``."""
    if not _is_lp(T.codomain, math.inf):
        raise UnsupportedPair("embed_linf_codomain needs an l_inf codomain")
    return T.entries.reshape(-1).copy()


def linf_codomain_target(T: OperatorMatrix) -> SupSum:
    return SupSum((dual_space(T.domain),) * T.codomain.dim)


def unembed_linf_codomain(vec, domain: Space, codomain: Space) -> OperatorMatrix:
    return OperatorMatrix(np.asarray(vec, dtype=float).reshape(codomain.dim, domain.dim), domain, codomain)


def embedding(T: OperatorMatrix):
    """``(target sup-sum, vector, inverse)`` for the first applicable embedding."""
    if _is_lp(T.domain, 1):
        return l1_domain_target(T), embed_l1_domain(T), lambda v: unembed_l1_domain(v, T.domain, T.codomain)
    if _is_lp(T.codomain, math.inf):
        return (
            linf_codomain_target(T),
            embed_linf_codomain(T),
            lambda v: unembed_linf_codomain(v, T.domain, T.codomain),
        )
    raise UnsupportedPair(
        f"no sup-sum embedding for {format_space(T.domain)} -> {format_space(T.codomain)}"
    )


# --------------------------------------------------------------------------
# norms


def _reduction(domain: Space, codomain: Space) -> str:
    if _is_lp(domain, 1):
        return "columns"
    if _has_finite_ext_dual(codomain):
        return "dual_extremes"
    if has_finite_extremes(domain):
        return "vertices"
    if _is_lp(domain, 2) and _is_lp(codomain, 2):
        return "svd"
    raise UnsupportedPair(
        f"no exact operator norm for {format_space(domain)} -> {format_space(codomain)}"
    )


def _opnorm_batch(A: np.ndarray, domain: Space, codomain: Space) -> np.ndarray:
    """Operator norms of a stack of matrices (leading axes are batch axes)."""
    how = _reduction(domain, codomain)
    if how == "columns":
        return _norm(codomain, np.swapaxes(A, -1, -2)).max(axis=-1)
    if how == "dual_extremes":
        E = _up_to_sign(np.asarray(ext_dual(codomain)))
        return _dual_norm(domain, np.einsum("kn,...nm->...km", E, A)).max(axis=-1)
    if how == "vertices":
        V = _up_to_sign(np.asarray(primal_vertices(domain)))
        return _norm(codomain, np.einsum("...nm,km->...kn", A, V)).max(axis=-1)
    return np.linalg.svd(A, compute_uv=False)[..., 0]


def operator_norm(T: OperatorMatrix) -> float:
    return float(_opnorm_batch(T.entries, T.domain, T.codomain))


# --------------------------------------------------------------------------
# attainment


def _supporting_functional(oriented: np.ndarray, all_vertices: np.ndarray):
    """Find ``h`` with ``h.v = 1`` on ``oriented`` and ``|h.u| <= 1`` on all vertices."""
    m = oriented.shape[1]
    res = linprog(
        np.zeros(m),
        A_ub=np.vstack([all_vertices, -all_vertices]),
        b_ub=np.ones(2 * len(all_vertices)) + 1e-9,
        A_eq=oriented,
        b_eq=np.ones(len(oriented)),
        bounds=[(None, None)] * m,
        method="highs",
    )
    return res.x if res.status == 0 else None


def attainment_faces(T: OperatorMatrix, tau_tie: float = TAU_TIE) -> FaceSet:
    """Vertices of the domain ball on which ``T`` attains its norm (up to sign)."""
    if not has_finite_extremes(T.domain):
        raise UnsupportedPair(f"{format_space(T.domain)} has a continuum of extreme points")
    V = np.asarray(primal_vertices(T.domain))
    Vs = _up_to_sign(V)
    vals = _norm(T.codomain, Vs @ T.entries.T)
    top = vals.max()
    if top == 0:
        raise ZeroVectorError("the zero operator attains its norm everywhere")
    att = Vs[vals >= top * (1 - tau_tie)]
    # orient along the dominant singular direction so a common face can be sought
    _, _, Vt = np.linalg.svd(T.entries)
    lead = att @ Vt[0]
    oriented = np.where((lead < 0)[:, None], -att, att)
    h = _supporting_functional(oriented, V)
    return FaceSet(att, True, h is not None, h)


# --------------------------------------------------------------------------
# rank one


def rank1(f, w, domain: Space, codomain: Space) -> OperatorMatrix:
    """The operator ``x -> f(x) w``."""
    f = np.asarray(f, dtype=float)
    w = np.asarray(w, dtype=float)
    if not np.any(f) or not np.any(w):
        raise ZeroVectorError("rank1 needs nonzero f and w")
    return OperatorMatrix(np.outer(w, f), domain, codomain)


def is_rank1(T: OperatorMatrix, tol: float = 1e-10) -> bool:
    s = np.linalg.svd(T.entries, compute_uv=False)
    return s[0] > 0 and (len(s) < 2 or s[1] <= tol * s[0])


def rank1_factors(T: OperatorMatrix):
    """``(f, w)`` with ``T = w f^t`` and ``||w|| = 1`` in the codomain."""
    if not is_rank1(T):
        raise ValueError("operator is not rank one")
    U, s, Vt = np.linalg.svd(T.entries)
    w = U[:, 0] * s[0]
    f = Vt[0]
    nw = norm(T.codomain, w)
    return f * nw, w / nw


# --------------------------------------------------------------------------
# orthogonality of operators


def operator_min_along(T: OperatorMatrix, S: OperatorMatrix):
    """``(lambda*, min_lambda ||T + lambda S||)`` by ternary search."""
    nT = operator_norm(T)
    nS = operator_norm(S)
    if nS == 0:
        raise ZeroVectorError("S must be nonzero")
    r = 2 * nT / nS + 1

    def fun(lam):
        lam = np.asarray(lam)
        return _opnorm_batch(T.entries + lam[..., None, None] * S.entries, T.domain, T.codomain)

    lam, val = ternary_min(fun, np.array(-r), np.array(r))
    lam, val = float(lam), float(val)
    if nT <= val:
        return 0.0, nT
    return lam, val


def operator_min_batch(A: np.ndarray, B: np.ndarray, domain: Space, codomain: Space):
    """Batched ``(lambda*, min_lambda ||A_i + lambda B_i||, ||A_i||)`` over stacks of matrices."""
    nA = _opnorm_batch(A, domain, codomain)
    nB = _opnorm_batch(B, domain, codomain)
    if np.any(nB == 0):
        raise ZeroVectorError("directions must be nonzero")
    r = 2 * nA / nB + 1

    def fun(lam):
        return _opnorm_batch(A + lam[..., None, None] * B, domain, codomain)

    lam, val = ternary_min(fun, -r, r)
    keep = nA <= val
    return np.where(keep, 0.0, lam), np.where(keep, nA, val), nA


def operator_is_bj_min(T: OperatorMatrix, S: OperatorMatrix, tau_rel: float = TAU_REL) -> OrthoVerdict:
    nT = operator_norm(T)
    if nT == 0:
        raise ZeroVectorError("T must be nonzero")
    lam, val = operator_min_along(T, S)
    ortho, refuted = _classify_value(val, nT, tau_rel)
    d = Decision.ORTHOGONAL if ortho else Decision.NOT_ORTHOGONAL if refuted else Decision.INCONCLUSIVE
    return OrthoVerdict(d, "operator-minimization", lam, val)


def ortho_operators_rank1(
    T: OperatorMatrix, S: OperatorMatrix, tau: float = TAU_NORM, tau_tie: float = TAU_TIE
) -> OrthoVerdict:
    """``T ⊥_B S`` from the attainment set of ``T``.

    The operator norm is a maximum of ``||(T + lambda S) v||`` over the
    attaining directions ``v``, so ``T ⊥_B S`` holds iff some attaining
    ``v1`` has ``S v1`` in ``(T v1)+`` and some ``v2`` has ``S v2`` in
    ``(T v2)-``. Exact for any ``T`` when the domain has finitely many
    extreme points; on a smooth l_p domain ``T`` must have rank one, so the
    attainment set is the single pair ``±`` norming vector of its functional.
    """
    if T.domain.dim != S.domain.dim or T.codomain.dim != S.codomain.dim:
        raise DimensionMismatch("T and S act between different spaces")
    if has_finite_extremes(T.domain):
        vs = attainment_faces(T, tau_tie).vertices
    elif isinstance(T.domain, Lp) and is_rank1(T):
        f, _ = rank1_factors(T)
        vs = norming_vector(T.domain, f)[None, :]
    else:
        raise UnsupportedPair("attainment set is not finite for this operator")
    TV, SV = vs @ T.entries.T, vs @ S.entries.T
    # tolerance relative to ||S||: S v may be tiny on the attainment set
    scale = tau * operator_norm(S)
    ranges = [jset_range(support_set(T.codomain, a, tau), b) for a, b in zip(TV, SV)]
    plus = any(hi >= -scale for _, hi in ranges)
    minus = any(lo <= scale for lo, _ in ranges)
    if plus and minus:
        return OrthoVerdict(Decision.ORTHOGONAL, "attainment")
    lam, val = operator_min_along(T, S)
    return OrthoVerdict(Decision.NOT_ORTHOGONAL, "attainment", lam, val)


# --------------------------------------------------------------------------
# classification


def _require_unit_operator(T, tau_form):
    n = operator_norm(T)
    if abs(n - 1) > tau_form:
        raise NonUnitInput(f"expected ||T|| = 1, got {n!r}")


def classify_left_operator(T: OperatorMatrix, tau_form: float = TAU_FORM) -> bool:
    """Left symmetry of a unit operator, read off its sup-sum image."""
    target, vec, _ = embedding(T)
    _require_unit_operator(T, tau_form)
    return classify_left_supsum(target, vec, tau_form)


def classify_right_operator(T: OperatorMatrix, tau_form: float = TAU_FORM) -> bool:
    target, vec, _ = embedding(T)
    _require_unit_operator(T, tau_form)
    return classify_right_supsum(target, vec, tau_form)


def check_nice_left_sufficient(T: OperatorMatrix, tau_form: float = TAU_FORM) -> bool:
    """Sufficient test for left symmetry: exactly one sign pair of dual extremes
    ``y*`` of the codomain has ``T^t y* != 0``, and that image is a unit, left
    symmetric functional on the domain."""
    E = _up_to_sign(np.asarray(ext_dual(T.codomain)))
    images = E @ T.entries
    dn = _dual_norm(T.domain, images)
    live = np.flatnonzero(dn > tau_form)
    if len(live) != 1:
        return False
    k = int(live[0])
    if abs(dn[k] - 1) > tau_form:
        return False
    return classify_left(dual_space(T.domain), images[k], tau_form)


# --------------------------------------------------------------------------
# Hilbert space probe


def hilbert_no_left_probe(n: int, trials: int = 100, seed: int = 0, attempts: int = 20) -> dict:
    """Try to refute left symmetry of random rank-one operators on l_2^n.

    For ``T = w f^t`` the attainment set is ``±v`` with ``v = f/||f||`` and
    ``T ⊥_B S`` iff ``<S v, w> = 0``. Each trial draws Gaussian ``S``, projects
    it onto that hyperplane, and checks that ``S ⊥_B T`` fails by direct
    minimisation of the spectral norm.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    H = Lp(2, n)
    rng = np.random.default_rng(seed)
    details = []
    refuted = 0
    for t in range(trials):
        f = rng.standard_normal(n)
        w = rng.standard_normal(n)
        T = rank1(f, w, H, H)
        T = T.with_entries(T.entries / operator_norm(T))
        v = f / np.linalg.norm(f)
        u = w / np.linalg.norm(w)
        record = {"trial": t, "refuted": False}
        for _ in range(attempts):
            G = rng.standard_normal((n, n))
            G -= np.outer(u, v) * (u @ G @ v)
            S = T.with_entries(G)
            fwd = ortho_operators_rank1(T, S)
            rev = operator_is_bj_min(S, T)
            if fwd.orthogonal and rev.decision is Decision.NOT_ORTHOGONAL:
                record.update(refuted=True, lambda_star=rev.lam, margin=1 - rev.value / operator_norm(S))
                break
        refuted += record["refuted"]
        details.append(record)
    return {"n": n, "trials": trials, "refuted": refuted, "rate": refuted / trials, "details": details}


# --------------------------------------------------------------------------
# matrix I/O


def to_json(T: OperatorMatrix) -> str:
    return json.dumps(
        {
            "domain": format_space(T.domain),
            "codomain": format_space(T.codomain),
            "entries": [[float(v) for v in row] for row in T.entries],
        }
    )


def from_json(text: str) -> OperatorMatrix:
    d = json.loads(text)
    return OperatorMatrix(np.array(d["entries"], dtype=float), parse_space(d["domain"]), parse_space(d["codomain"]))


def to_csv(T: OperatorMatrix) -> str:
    """Row-major CSV; ``repr`` floats keep the round trip exact."""
    buf = io.StringIO()
    buf.write(f"# domain={format_space(T.domain)}\n# codomain={format_space(T.codomain)}\n")
    w = csv.writer(buf, lineterminator="\n")
    for row in T.entries:
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def from_csv(text: str, domain: Space | None = None, codomain: Space | None = None) -> OperatorMatrix:
    rows, meta = [], {}
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            meta[key.strip()] = val.strip()
        elif line.strip():
            rows.append(next(csv.reader([line])))
    A = np.array([[float(v) for v in r] for r in rows], dtype=float)
    domain = domain or parse_space(meta["domain"])
    codomain = codomain or parse_space(meta["codomain"])
    return OperatorMatrix(A, domain, codomain)
