"""Randomised property suites, one per structural result.

Every suite is a function ``trial(rng, config) -> (ok, record)``. A run draws
an independent generator per trial from ``SeedSequence(seed).spawn(trials)``
so reports are reproducible and independent of execution order.
"""

from __future__ import annotations

import itertools
import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .operators import (
    OperatorMatrix,
    attainment_faces,
    check_nice_left_sufficient,
    classify_left_operator,
    classify_right_operator,
    embed_l1_domain,
    embed_linf_codomain,
    embedding,
    is_rank1,
    l1_domain_target,
    linf_codomain_target,
    operator_is_bj_min,
    operator_min_batch,
    operator_norm,
    ortho_operators_rank1,
    rank1,
)
from .orthogonality import (
    Decision,
    is_bj_min,
    supsum_orthogonal,
    supsum_orthogonal_general,
)
from .sampling import (
    canonical_forms,
    dual_canonical_forms,
    random_polyhedral,
    random_supsum,
    random_unit,
    random_vector,
)
from .spaces import (
    Lp,
    Polyhedral,
    SpaceError,
    SupSum,
    _norm,
    _up_to_sign,
    block_norms,
    conjugate_exponent,
    dual_norm,
    format_space,
    ext_dual,
    jset_range,
    jset_sample,
    norm,
    norming_vector,
    support_set,
)
from .symmetry import (
    DEFAULT_BUDGET,
    ConditionSatisfied,
    SearchExhausted,
    UnsupportedSpace,
    classify_left,
    classify_left_supsum,
    classify_right,
    classify_right_supsum,
    is_symmetric_supsum,
    orthogonalize_left,
    orthogonalize_right,
    search_left_counterexample,
    search_right_counterexample,
    witness_left_supsum,
    witness_right_supsum,
)

DEFAULT_SEED = 1729
DEFAULT_TRIALS = 100
INF = math.inf
PS = (1.0, 1.5, 2.0, 3.0, INF)


@dataclass
class RunConfig:
    seed: int = DEFAULT_SEED
    budget: int = DEFAULT_BUDGET
    tol_rel: float = 1e-9
    tol_norm: float = 1e-10
    output: str = "json"
    trials: int | None = None
    no_timestamp: bool = False

    def __post_init__(self):
        if self.tol_rel <= 0 or self.tol_norm <= 0:
            raise ValueError("tolerances must be positive")
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.output not in ("json", "csv", "human"):
            raise ValueError("output must be json, csv or human")

    @classmethod
    def from_env(cls, **kw) -> "RunConfig":
        if kw.get("seed") is None:
            kw["seed"] = int(os.environ.get("BJLAB_SEED", DEFAULT_SEED))
        return cls(**{k: v for k, v in kw.items() if v is not None or k == "trials"})


@dataclass
class TheoremReport:
    theorem_id: str
    trials: int
    passes: int
    failures: list = field(default_factory=list)
    wall_time: float | None = None
    seed: int = DEFAULT_SEED
    budget: int = DEFAULT_BUDGET
    summary: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures and self.passes == self.trials

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "trials": self.trials,
            "passes": self.passes,
            "failures": self.failures,
            "wall_time": self.wall_time,
            "seed": self.seed,
            "budget": self.budget,
            "summary": self.summary,
        }


def _seed(rng) -> int:
    return int(rng.integers(0, 2**31))


def _vec(x):
    return [float(v) for v in x]


def _op_record(T):
    return {"entries": [_vec(r) for r in T.entries]}


# --------------------------------------------------------------------------
# sup-sum suites

CLASSIFIABLE = (1.0, 1.5, 2.0, 3.0, INF)


def _canonical_or_random(comp, side, rng):
    """A unit vector of ``comp`` accepted by the ``side`` closed form."""
    if isinstance(comp, Lp):
        try:
            forms = canonical_forms(comp.p, comp.dim, side)
        except SpaceError:
            return random_unit(comp, rng)
        if forms:
            return forms[rng.integers(len(forms))]
    return None


def _left_symmetric_candidate(space, rng):
    order = rng.permutation(len(space.components))
    for k in order:
        v = _canonical_or_random(space.components[k], "left", rng)
        if v is not None:
            f = np.zeros(space.dim)
            f[space.slices[k]] = v
            return f
    return random_unit(space, rng)


def trial_left_supsum(rng, cfg):
    space = random_supsum(rng, (2, 4), 3, CLASSIFIABLE)
    f = _left_symmetric_candidate(space, rng) if rng.random() < 0.5 else random_unit(space, rng)
    rec = {"space": format_space(space), "f": _vec(f)}
    if classify_left_supsum(space, f):
        w = search_left_counterexample(space, f, cfg.budget, _seed(rng), cfg.tol_rel)
        rec["accepted"] = True
        rec["counterexample"] = w.to_dict() if w else None
        return w is None, rec
    try:
        w = witness_left_supsum(space, f, cfg.budget, _seed(rng), tau_rel=cfg.tol_rel)
    except (SearchExhausted, ConditionSatisfied) as e:
        rec["error"] = str(e)
        return False, rec
    rec.update(accepted=False, margin=w.margin)
    return w.margin >= 1e-8, rec


def _right_violating(space, rng):
    """Unit f with a short block or a block value outside the right closed form."""
    for _ in range(100):
        parts = []
        for c in space.components:
            v = random_unit(c, rng)
            parts.append(v * (rng.uniform(0, 0.9) if rng.random() < 0.4 else 1.0))
        if all(norm(c, v) < 1 for c, v in zip(space.components, parts)):
            parts[0] = parts[0] / norm(space.components[0], parts[0])
        f = np.concatenate(parts)
        f = f / norm(space, f)
        if not classify_right_supsum(space, f):
            return f
    raise RuntimeError("could not draw a violating vector")


def trial_right_nec(rng, cfg):
    space = random_supsum(rng, (2, 4), 3, CLASSIFIABLE)
    f = _right_violating(space, rng)
    rec = {"f": _vec(f)}
    try:
        w = witness_right_supsum(space, f, cfg.budget, _seed(rng), tau_rel=cfg.tol_rel)
    except (SearchExhausted, ConditionSatisfied) as e:
        rec["error"] = str(e)
        return False, rec
    drop = norm(space, f + w.mu * w.y)
    rec.update(g=_vec(w.y), mu=w.mu, constructed_norm=drop)
    return bool(w.forward.orthogonal and drop <= 1 - 1e-6), rec


def _right_symmetric_vector(space, rng):
    parts = []
    for c in space.components:
        v = _canonical_or_random(c, "right", rng)
        parts.append(v if v is not None else random_unit(c, rng))
    return np.concatenate(parts)


def trial_right_suff(rng, cfg):
    space = random_supsum(rng, (2, 4), 3, CLASSIFIABLE)
    f = _right_symmetric_vector(space, rng)
    rec = {"f": _vec(f)}
    if not classify_right_supsum(space, f):
        rec["error"] = "classifier rejected a right symmetric tuple"
        return False, rec
    w = search_right_counterexample(space, f, cfg.budget, _seed(rng), cfg.tol_rel)
    rec["counterexample"] = w.to_dict() if w else None
    return w is None, rec


def trial_directsum(rng, cfg):
    space = random_supsum(rng, (2, 4), 3, CLASSIFIABLE)
    f = _left_symmetric_candidate(space, rng) if rng.random() < 0.3 else random_unit(space, rng)
    rec = {"f": _vec(f)}
    if is_symmetric_supsum(space, f):
        rec["error"] = "nonzero vector reported symmetric"
        return False, rec
    left = classify_left_supsum(space, f)
    right = classify_right_supsum(space, f)
    if left and right:
        rec["error"] = "accepted by both classifiers"
        return False, rec
    try:
        if not left:
            w = witness_left_supsum(space, f, cfg.budget, _seed(rng), tau_rel=cfg.tol_rel)
        else:
            w = witness_right_supsum(space, f, cfg.budget, _seed(rng), tau_rel=cfg.tol_rel)
    except (SearchExhausted, ConditionSatisfied) as e:
        rec["error"] = str(e)
        return False, rec
    rec.update(direction=w.direction, margin=w.margin)
    return True, rec


def random_pair_supsum(space, rng):
    f = random_vector(space, rng, integer=rng.random() < 0.2)
    mode = rng.integers(0, 3)
    z = random_vector(space, rng, integer=rng.random() < 0.2)
    try:
        if mode == 1:
            J = support_set(space, f)
            return f, orthogonalize_left(space, f, z, jset_sample(J, rng, 1)[0])
        if mode == 2:
            return f, orthogonalize_right(space, f, z)
    except (ValueError, SpaceError):
        pass
    return f, z


def trial_orth_general(rng, cfg):
    space = random_supsum(rng, (2, 4), 3, allow_poly=True)
    f, g = random_pair_supsum(space, rng)
    hull = supsum_orthogonal(space, f, g)
    general = supsum_orthogonal_general(space, f, g)
    direct = is_bj_min(space, f, g, cfg.tol_rel)
    rec = {"f": _vec(f), "g": _vec(g), "hull": hull.decision.value, "general": general.decision.value,
           "min": direct.decision.value}
    ok = hull.decision is general.decision
    if direct.decision is not Decision.INCONCLUSIVE:
        ok = ok and hull.decision is direct.decision
    return ok, rec


# --------------------------------------------------------------------------
# operator suites


def random_operator(rng, domain, codomain, scale=True):
    A = rng.standard_normal((codomain.dim, domain.dim))
    T = OperatorMatrix(A, domain, codomain)
    return T.with_entries(A / operator_norm(T)) if scale else T


def isometric_deviation(T) -> dict:
    """Embedding norms against primal evaluations of ``||T v||``."""
    out = {}
    nT = operator_norm(T)
    if isinstance(T.domain, Lp) and T.domain.p == 1:
        emb = norm(l1_domain_target(T), embed_l1_domain(T))
        primal = max(norm(T.codomain, T(e)) for e in np.eye(T.domain.dim))
        out["l1_domain"] = max(abs(emb - nT), abs(primal - nT))
    if isinstance(T.codomain, Lp) and T.codomain.p == INF:
        emb = norm(linf_codomain_target(T), embed_linf_codomain(T))
        primal = max(
            norm(T.codomain, T(norming_vector(T.domain, row))) for row in T.entries if np.any(row)
        ) if np.any(T.entries) else 0.0
        out["linf_codomain"] = max(abs(emb - nT), abs(primal - nT))
    return out


def trial_isometric(rng, cfg):
    m, n = int(rng.integers(1, 5)), int(rng.integers(1, 5))
    if rng.random() < 0.5:
        T = random_operator(rng, Lp(1, m), Lp(float(rng.choice(PS)), n), scale=False)
    else:
        T = random_operator(rng, Lp(float(rng.choice(PS)), m), Lp(INF, n), scale=False)
    dev = isometric_deviation(T)
    worst = max(dev.values())
    return worst <= 1e-12, {"deviation": worst, **_op_record(T)}


def operator_left_evidence(T, budget, seed, tau_rel=1e-9):
    """Operator-level evidence for the left classifier verdict.

    Accepted: no sup-sum counterexample within ``budget``. Rejected: a witness
    on the sup-sum image, transported back to an operator ``S`` and
    re-verified with exact operator norms (``T ⊥ S``, not ``S ⊥ T``).
    """
    target, vec, back = embedding(T)
    if classify_left_operator(T):
        w = search_left_counterexample(target, vec, budget, seed, tau_rel)
        return w is None, {"accepted": True, "counterexample": w.to_dict() if w else None}
    w = search_left_counterexample(target, vec, budget, seed, tau_rel)
    source = "search"
    if w is None:
        w = witness_left_supsum(target, vec, budget, seed, tau_rel=tau_rel)
        source = "construction"
    S = back(w.y)
    fwd = operator_is_bj_min(T, S, tau_rel)
    rev = operator_is_bj_min(S, T, tau_rel)
    ok = fwd.decision is not Decision.NOT_ORTHOGONAL and rev.decision is Decision.NOT_ORTHOGONAL
    return ok, {"accepted": False, "source": source, "S": _vec(S.entries.ravel()), "lambda_star": rev.lam}


def operator_right_evidence(T, budget, seed, tau_rel=1e-9):
    target, vec, back = embedding(T)
    if classify_right_operator(T):
        w = search_right_counterexample(target, vec, budget, seed, tau_rel)
        return w is None, {"accepted": True, "counterexample": w.to_dict() if w else None}
    w = search_right_counterexample(target, vec, budget, seed, tau_rel)
    source = "search"
    if w is None:
        w = witness_right_supsum(target, vec, budget, seed, tau_rel=tau_rel)
        source = "construction"
    S = back(w.y)
    fwd = operator_is_bj_min(S, T, tau_rel)
    rev = operator_is_bj_min(T, S, tau_rel)
    ok = fwd.decision is not Decision.NOT_ORTHOGONAL and rev.decision is Decision.NOT_ORTHOGONAL
    return ok, {"accepted": False, "source": source, "S": _vec(S.entries.ravel()), "lambda_star": rev.lam}


def canonical_operators(p: float, m: int, n: int, side: str) -> list:
    """All unit operators ``l_p^m -> l_inf^n`` the closed form for ``side`` accepts,
    exhaustively over index and sign choices of the row forms."""
    forms = dual_canonical_forms(p, m, side)
    dom, cod = Lp(p, m), Lp(INF, n)
    out = []
    if side == "left":
        for i in range(n):
            for v in forms:
                A = np.zeros((n, m))
                A[i] = v
                out.append(OperatorMatrix(A, dom, cod))
        return out
    for rows in itertools.product(range(len(forms)), repeat=n):
        out.append(OperatorMatrix(np.array([forms[r] for r in rows]), dom, cod))
    return out


def non_canonical_row_operators(p: float, m: int, n: int, side: str) -> list:
    """Operators whose rows come from ``{0} ∪ forms`` but that miss the accepted shape."""
    forms = [np.zeros(m)] + dual_canonical_forms(p, m, side)
    dom, cod = Lp(p, m), Lp(INF, n)
    out = []
    for rows in itertools.product(range(len(forms)), repeat=n):
        nonzero = sum(r > 0 for r in rows)
        accepted = nonzero == 1 if side == "left" else nonzero == n
        if not accepted and nonzero > 0:
            out.append(OperatorMatrix(np.array([forms[r] for r in rows]), dom, cod))
    return out


def perturb_operator(T, rng):
    size = 10 ** rng.uniform(-2, math.log10(0.3))
    A = T.entries + size * rng.standard_normal(T.shape)
    if T.shape[1] > 1 and rng.random() < 0.3:
        # keep some rows at unit dual norm so only the shape is perturbed;
        # with one column this would snap every row back to +-1
        q = conjugate_exponent(T.domain.p)
        A = A / np.maximum(np.linalg.norm(A, q, axis=1, keepdims=True), 1e-300)
    S = T.with_entries(A)
    return S.with_entries(A / operator_norm(S))


def _lp_trial(rng, cfg, side):
    p = float(rng.choice((1.5, 3.0)))
    m, n = int(rng.integers(2, 5)), int(rng.integers(1, 4))
    ops = canonical_operators(p, m, n, side)
    T = ops[rng.integers(len(ops))]
    perturbed = rng.random() < 0.5
    if perturbed:
        T = perturb_operator(T, rng)
    classify = classify_left_operator if side == "left" else classify_right_operator
    evidence = operator_left_evidence if side == "left" else operator_right_evidence
    verdict = classify(T)
    rec = {"p": p, "perturbed": perturbed, "accepted": verdict, **_op_record(T)}
    if verdict == perturbed:
        rec["error"] = "closed form disagrees with construction"
        return False, rec
    ok, ev = evidence(T, min(cfg.budget, 4000), _seed(rng), cfg.tol_rel)
    rec.update(ev)
    return ok, rec


def trial_left_lp(rng, cfg):
    return _lp_trial(rng, cfg, "left")


def trial_right_lp(rng, cfg):
    return _lp_trial(rng, cfg, "right")


def trial_left_infty(rng, cfg):
    p = float(rng.choice((1.5, 2.0, 3.0, INF)))
    m, n = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    dom, cod = Lp(p, m), Lp(INF, n)
    if rng.random() < 0.5:
        A = np.zeros((n, m))
        comp = Lp(conjugate_exponent(p), m)
        v = _canonical_or_random(comp, "left", rng)
        A[rng.integers(n)] = v if v is not None else random_unit(comp, rng)
        T = OperatorMatrix(A, dom, cod)
    else:
        T = random_operator(rng, dom, cod)
    s = _seed(rng)
    okl, left = operator_left_evidence(T, min(cfg.budget, 4000), s, cfg.tol_rel)
    okr, right = operator_right_evidence(T, min(cfg.budget, 4000), s + 1, cfg.tol_rel)
    return okl and okr, {"left": left, "right": right, **_op_record(T)}


def _nice_operator(rng):
    """Rank-one ``T`` whose adjoint kills all but one pair of codomain dual extremes."""
    m = int(rng.integers(2, 4))
    p = float(rng.choice((1.5, 2.0, 3.0)))
    dom = Lp(p, m)
    n = int(rng.integers(2, 4))
    if rng.random() < 0.5:
        cod = Lp(INF, n)
        G = np.eye(n)
    else:
        for _ in range(50):
            G = rng.integers(-2, 3, (n, n)).astype(float)
            if abs(np.linalg.det(G)) > 0.5:
                break
        cod = Polyhedral(tuple(map(tuple, G)))
    i = int(rng.integers(n))
    w = np.linalg.solve(G, np.eye(n)[i])
    comp = Lp(conjugate_exponent(p), m)
    phi = _canonical_or_random(comp, "left", rng)
    if phi is None or rng.random() < 0.25:
        phi = random_unit(comp, rng)
    return rank1(phi, w, dom, cod)


def _operator_left_probe(T, rng, samples, tau_rel=1e-9):
    """Search for ``S`` with ``T ⊥ S`` and ``S`` not ``⊥ T`` for rank-one ``T`` on a smooth domain."""
    f, _ = _rank1_parts(T)
    v = norming_vector(T.domain, f)
    J = support_set(T.codomain, T(v))
    S0 = rng.standard_normal((samples,) + T.shape)
    phi = jset_sample(J, rng, samples)
    # shift each S0 along T so that phi(S v) = 0, which gives T ⊥ S
    beta = np.einsum("bn,bn->b", phi, S0 @ v) / (phi @ T(v))
    S = S0 - beta[:, None, None] * T.entries
    _, val, nS = operator_min_batch(S, np.broadcast_to(T.entries, S.shape), T.domain, T.codomain)
    for i in np.flatnonzero(val <= nS * (1 - 10 * tau_rel)):
        Si = T.with_entries(S[i])
        if ortho_operators_rank1(T, Si).orthogonal and operator_is_bj_min(Si, T, tau_rel).decision is Decision.NOT_ORTHOGONAL:
            return Si
    return None


def _rank1_parts(T):
    U, s, Vt = np.linalg.svd(T.entries)
    return Vt[0] * s[0], U[:, 0]


def trial_nice_left(rng, cfg):
    T = _nice_operator(rng)
    T = T.with_entries(T.entries / operator_norm(T))
    nice = check_nice_left_sufficient(T)
    rec = {"nice": nice, **_op_record(T)}
    if not nice:
        return True, rec
    S = _operator_left_probe(T, rng, 200, cfg.tol_rel)
    rec["counterexample"] = _vec(S.entries.ravel()) if S is not None else None
    return S is None, rec


def trial_rank_face(rng, cfg):
    m = int(rng.integers(2, 5))
    kind = rng.integers(0, 3)
    dom = Lp(1, m) if kind == 0 else Lp(INF, m) if kind == 1 else random_polyhedral(rng, m, 6)
    cod = Lp(float(rng.choice(PS)), int(rng.integers(1, 4)))
    f = random_vector(dom, rng, integer=rng.random() < 0.5)
    w = random_vector(cod, rng)
    T = rank1(f, w, dom, cod)
    fs = attainment_faces(T)
    rec = {"vertices": [_vec(v) for v in fs.vertices], "single_face": fs.single_face}
    return bool(fs.single_face), rec


def trial_left_rank_nec(rng, cfg):
    """Rank-one ``T = w f^t`` with ``w`` or ``f`` not left symmetric is refuted."""
    m = int(rng.integers(2, 4))
    p = float(rng.choice((1.5, 2.0, 3.0)))
    dom = Lp(p, m)
    n = int(rng.integers(2, 4))
    cod = Lp(INF, n) if rng.random() < 0.5 else Lp(1, n)
    dual = Lp(conjugate_exponent(p), m)
    while True:  # sparse draws can make both factors left symmetric
        f = random_unit(dual, rng)
        w = random_unit(cod, rng)
        if not (classify_left(cod, w) and classify_left(dual, f)):
            break
    T = rank1(f, w, dom, cod)
    T = T.with_entries(T.entries / operator_norm(T))
    rec = {**_op_record(T)}
    s = _seed(rng)
    wv = search_left_counterexample(cod, w, cfg.budget, s, cfg.tol_rel)
    if wv is not None:
        S = rank1(f, wv.y, dom, cod)
        rec["via"] = "codomain"
    else:
        fg = search_left_counterexample(Lp(conjugate_exponent(p), m), f, cfg.budget, s + 1, cfg.tol_rel)
        if fg is None:
            rec["error"] = "neither factor refuted"
            return False, rec
        S = rank1(fg.y, w, dom, cod)
        rec["via"] = "functional"
    fwd = ortho_operators_rank1(T, S)
    fwd_min = operator_is_bj_min(T, S, cfg.tol_rel)
    rev = operator_is_bj_min(S, T, cfg.tol_rel)
    rec.update(forward=fwd.decision.value, reverse=rev.decision.value, lambda_star=rev.lam)
    ok = (
        fwd.orthogonal
        and fwd_min.decision is not Decision.NOT_ORTHOGONAL
        and rev.decision is Decision.NOT_ORTHOGONAL
    )
    return ok, rec


def hilbert_trial(n, rng, attempts=20, tau_rel=1e-9):
    H = Lp(2, n)
    f = rng.standard_normal(n)
    w = rng.standard_normal(n)
    T = rank1(f, w, H, H)
    T = T.with_entries(T.entries / operator_norm(T))
    v = f / np.linalg.norm(f)
    u = w / np.linalg.norm(w)
    for _ in range(attempts):
        G = rng.standard_normal((n, n))
        G -= np.outer(u, v) * (u @ G @ v)
        S = T.with_entries(G)
        if not ortho_operators_rank1(T, S).orthogonal:
            continue
        rev = operator_is_bj_min(S, T, tau_rel)
        if rev.decision is Decision.NOT_ORTHOGONAL:
            return True, {"n": n, "lambda_star": rev.lam, "margin": 1 - rev.value / operator_norm(S)}
    return False, {"n": n, **_op_record(T)}


def trial_hilbert(rng, cfg):
    return hilbert_trial(int(rng.integers(2, 4)), rng, tau_rel=cfg.tol_rel)


SUITES = {
    "THM-LEFT-SUPSUM": (trial_left_supsum, "left symmetric points of finite sup-sums"),
    "THM-RIGHT-NEC": (trial_right_nec, "necessary conditions for right symmetry in sup-sums"),
    "THM-RIGHT-SUFF-FINITE": (trial_right_suff, "unit right symmetric blocks give right symmetry"),
    "COR-DIRECTSUM": (trial_directsum, "no nonzero symmetric point in a sup-sum of two or more blocks"),
    "THM-ORTH-GENERAL-FINITE": (trial_orth_general, "orthogonality in sup-sums via attainment sets"),
    "PROP-ISOMETRIC": (trial_isometric, "column and row embeddings are isometric"),
    "THM-LEFT-INFTY": (trial_left_infty, "symmetric operators into l_inf^n"),
    "COR-LEFT-LP": (trial_left_lp, "left symmetric operators l_p^m -> l_inf^n"),
    "COR-RIGHT-LP": (trial_right_lp, "right symmetric operators l_p^m -> l_inf^n"),
    "THM-NICE-LEFT": (trial_nice_left, "sufficient condition via codomain dual extremes"),
    "PROP-RANK-FACE": (trial_rank_face, "rank-one attainment set is a face pair"),
    "THM-LEFT-RANK-NEC": (trial_left_rank_nec, "left symmetric rank-one operators need symmetric factors"),
    "HILBERT-NO-LEFT": (trial_hilbert, "no nonzero left symmetric rank-one operator on l_2^n"),
}


def run_suite(theorem_id: str, cfg: RunConfig | None = None) -> TheoremReport:
    if theorem_id not in SUITES:
        raise KeyError(theorem_id)
    cfg = cfg or RunConfig()
    trials = cfg.trials if cfg.trials is not None else DEFAULT_TRIALS
    trial, _ = SUITES[theorem_id]
    start = time.perf_counter()
    passes, failures = 0, []
    children = np.random.SeedSequence(cfg.seed).spawn(trials)
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        try:
            ok, rec = trial(rng, cfg)
        except Exception as e:  # a crash inside a trial is a reported failure
            ok, rec = False, {"exception": f"{type(e).__name__}: {e}"}
        if ok:
            passes += 1
        else:
            failures.append({"trial": i, **rec})
    wall = None if cfg.no_timestamp else round(time.perf_counter() - start, 6)
    return TheoremReport(theorem_id, trials, passes, failures, wall, cfg.seed, cfg.budget)
