"""Acceptance criteria, one test each, at the stated sizes and tolerances.

Every test prints a single ``[PASS]``/``[FAIL]`` line; the lines are repeated
in the pytest terminal summary under "acceptance criteria". Witnesses are
re-verified here with both orthogonality oracles instead of trusting the
flags returned by the constructors.
"""

import hashlib
import itertools
import math
import subprocess
import sys
from collections import Counter
from time import perf_counter

import numpy as np

from bjlab.cli import main
from bjlab.operators import (
    OperatorMatrix,
    classify_left_operator,
    classify_right_operator,
    hilbert_no_left_probe,
    operator_norm,
)
from bjlab.orthogonality import Decision, bj_min_batch, is_bj_functional, is_bj_min, supsum_orthogonal
from bjlab.sampling import canonical_forms, random_space, random_supsum, random_unit, random_vector
from bjlab.spaces import Lp, Polyhedral, SupSum, block_norms, jset_sample, norm, support_set
from bjlab.symmetry import (
    classify_left_supsum,
    classify_right_lp,
    classify_right_supsum,
    is_symmetric_supsum,
    orthogonalize_left,
    orthogonalize_right,
    search_left_counterexample,
    search_right_counterexample,
    witness_left_supsum,
    witness_right_supsum,
)
from bjlab.theorems import (
    CLASSIFIABLE,
    SUITES,
    _left_symmetric_candidate,
    canonical_operators,
    isometric_deviation,
    non_canonical_row_operators,
    operator_left_evidence,
    operator_right_evidence,
    perturb_operator,
)

INF = math.inf
SEED = 20240611
TAU_REL = 1e-9
PS = (1.0, 1.5, 2.0, 3.0, INF)


def _kind(space):
    if isinstance(space, SupSum):
        return "supsum"
    return "polyhedral" if isinstance(space, Polyhedral) else "lp"


def _pair(space, rng):
    """A nonzero pair, with ``y`` made left or right orthogonal to ``x`` two times in three."""
    x = random_vector(space, rng, integer=rng.random() < 0.2)
    z = random_vector(space, rng, integer=rng.random() < 0.2)
    mode = rng.integers(3)
    try:
        if mode == 1:
            return x, orthogonalize_left(space, x, z, jset_sample(support_set(space, x), rng, 1)[0])
        if mode == 2:
            return x, orthogonalize_right(space, x, z)
    except ValueError:  # z parallel to x
        pass
    return x, z


def _witness_ok(w, direction):
    """``a ⊥ b`` by the functional oracle and ``b ⊥ a`` refuted by both oracles with margin."""
    a, b = (w.x, w.y) if direction == "left" else (w.y, w.x)
    if not is_bj_functional(w.space, a, b).orthogonal:
        return False
    rev = is_bj_min(w.space, b, a, TAU_REL)
    margin = 1 - rev.value / norm(w.space, b)
    return (
        rev.decision is Decision.NOT_ORTHOGONAL
        and not is_bj_functional(w.space, b, a).orthogonal
        and margin >= 1e-8
    )


# ---------------------------------------------------------------------------


def test_criterion_1_oracle_concordance(acceptance):
    rng = np.random.default_rng(SEED + 1)
    start = perf_counter()
    total = inconclusive = disagree = orthogonal = 0
    kinds = Counter()
    while total < 10_000:
        space = random_space(rng, max_dim=8)
        pairs = [_pair(space, rng) for _ in range(10)]
        X = np.array([p[0] for p in pairs])
        Y = np.array([p[1] for p in pairs])
        codes, _, _ = bj_min_batch(space, X, Y, TAU_REL)
        for x, y, code in zip(X, Y, codes):
            fun = is_bj_functional(space, x, y, certificate=False)
            if code == -1:
                inconclusive += 1
            elif (code == 1) != fun.orthogonal:
                disagree += 1
            orthogonal += fun.orthogonal
        kinds[_kind(space)] += 10
        total += 10
    elapsed = perf_counter() - start
    rate = inconclusive / total
    ok = disagree == 0 and rate < 0.005 and elapsed < 60
    acceptance(
        1,
        ok,
        f"{total} triples ({dict(kinds)}), {orthogonal} orthogonal, {disagree} disagreements, "
        f"inconclusive rate {rate:.4%}, {elapsed:.1f} s",
    )


def test_criterion_2_supsum_equivalence(acceptance):
    rng = np.random.default_rng(SEED + 2)
    total = disagree = band = orthogonal = 0
    while total < 10_000:
        space = random_supsum(rng, (2, 4), 3, allow_poly=True, nested=rng.random() < 0.3)
        pairs = [_pair(space, rng) for _ in range(10)]
        F = np.array([p[0] for p in pairs])
        G = np.array([p[1] for p in pairs])
        codes, _, _ = bj_min_batch(space, F, G, TAU_REL)
        for f, g, code in zip(F, G, codes):
            hull = supsum_orthogonal(space, f, g)
            orthogonal += hull.orthogonal
            if code == -1:
                band += 1
            elif (code == 1) != hull.orthogonal:
                disagree += 1
        total += 10
    acceptance(
        2,
        disagree == 0,
        f"{total} pairs, {orthogonal} orthogonal, {disagree} disagreements, {band} in the tolerance band",
    )


def test_criterion_3_left_supsum(acceptance):
    rng = np.random.default_rng(SEED + 3)
    accepted = rejected = bad = 0
    min_margin = INF
    while accepted + rejected < 600:
        space = random_supsum(rng, (2, 4), 3, CLASSIFIABLE, nested=rng.random() < 0.2)
        f = _left_symmetric_candidate(space, rng) if rng.random() < 0.5 else random_unit(space, rng)
        seed = int(rng.integers(2**31))
        if classify_left_supsum(space, f):
            accepted += 1
            bad += search_left_counterexample(space, f, 10_000, seed) is not None
        else:
            rejected += 1
            w = witness_left_supsum(space, f, 10_000, seed)
            min_margin = min(min_margin, w.margin)
            bad += not _witness_ok(w, "left")
    acceptance(
        3,
        bad == 0 and accepted >= 200 and rejected >= 200,
        f"{accepted} accepted survived 10^4 rounds, {rejected} rejected with verified witnesses "
        f"(min margin {min_margin:.3g}), {bad} failures",
    )


def _right_violating(rng):
    """``(space, f, case)`` with a block of norm <= 0.9, or all blocks unit and one not right symmetric."""
    while True:
        space = random_supsum(rng, (2, 4), 3, CLASSIFIABLE)
        parts = [random_unit(c, rng) for c in space.components]
        if rng.random() < 0.5:
            k = int(rng.integers(len(parts)))
            parts[k] = parts[k] * rng.uniform(0, 0.9)
            if len(parts) > 1:
                return space, np.concatenate(parts), "short block"
            continue
        f = np.concatenate(parts)
        if not classify_right_supsum(space, f):
            return space, f, "non-symmetric block"


def test_criterion_4_right_necessity(acceptance):
    rng = np.random.default_rng(SEED + 4)
    cases = Counter()
    bad = 0
    worst = 0.0
    for _ in range(1000):
        space, f, case = _right_violating(rng)
        cases[case] += 1
        w = witness_right_supsum(space, f, 10_000, int(rng.integers(2**31)))
        drop = norm(space, f + w.mu * w.y)
        worst = max(worst, drop)
        if not (_witness_ok(w, "right") and drop <= 1 - 1e-6):
            bad += 1
    acceptance(
        4,
        bad == 0,
        f"1000 instances ({dict(cases)}), {bad} failures, max ||f + mu g|| = {worst:.6f}",
    )


def test_criterion_5_no_symmetric_points(acceptance):
    rng = np.random.default_rng(SEED + 5)
    refuted = Counter()
    bad = 0
    for _ in range(1000):
        space = random_supsum(rng, (2, 4), 3, CLASSIFIABLE, nested=rng.random() < 0.2)
        f = _left_symmetric_candidate(space, rng) if rng.random() < 0.3 else random_unit(space, rng)
        if is_symmetric_supsum(space, f):
            bad += 1
            continue
        seed = int(rng.integers(2**31))
        if not classify_left_supsum(space, f):
            w, side = witness_left_supsum(space, f, 10_000, seed), "left"
        else:
            w, side = witness_right_supsum(space, f, 10_000, seed), "right"
        if _witness_ok(w, side):
            refuted[side] += 1
        else:
            bad += 1
    total = sum(refuted.values())
    acceptance(5, total == 1000 and bad == 0, f"{total}/1000 refuted ({dict(refuted)}), {bad} failures")


def test_criterion_6_isometric_embeddings(acceptance):
    rng = np.random.default_rng(SEED + 6)
    worst = {"l1_domain": 0.0, "linf_codomain": 0.0}
    counts = Counter()
    for which in worst:
        for _ in range(10_000):
            m, n = (int(v) for v in rng.integers(1, 5, 2))
            p = PS[rng.integers(len(PS))]
            A = rng.standard_normal((n, m))
            if rng.random() < 0.2:
                A[rng.random(A.shape) < 0.5] = 0.0
            dom, cod = (Lp(1, m), Lp(p, n)) if which == "l1_domain" else (Lp(p, m), Lp(INF, n))
            dev = isometric_deviation(OperatorMatrix(A, dom, cod))
            worst[which] = max(worst[which], dev[which])
            counts[which] += 1
    ok = max(worst.values()) <= 1e-12
    acceptance(
        6,
        ok,
        f"{counts['l1_domain']} l_1-domain and {counts['linf_codomain']} l_inf-codomain operators, "
        f"max deviation {worst['l1_domain']:.2e} / {worst['linf_codomain']:.2e}",
    )


def test_criterion_7_lp_operator_forms(acceptance):
    rng = np.random.default_rng(SEED + 7)
    exhaustive = wrong = 0
    for side, classify in (("left", classify_left_operator), ("right", classify_right_operator)):
        for p, m, n in itertools.product((1.5, 3.0), (1, 2, 3, 4), (1, 2, 3)):
            for T in canonical_operators(p, m, n, side):
                exhaustive += 1
                wrong += not classify(T)
            for T in non_canonical_row_operators(p, m, n, side):
                exhaustive += 1
                wrong += classify(T.with_entries(T.entries / operator_norm(T)))
    perturbed = backed = far = 0
    for i in range(1000):
        side = "left" if i % 2 == 0 else "right"
        p = (1.5, 3.0)[rng.integers(2)]
        m, n = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        if m == n == 1:  # every unit operator R -> R is canonical
            m = int(rng.integers(2, 5))
        ops = canonical_operators(p, m, n, side)
        T = perturb_operator(ops[rng.integers(len(ops))], rng)
        far += min(np.abs(T.entries - S.entries).max() for S in ops) > 1e-6
        classify = classify_left_operator if side == "left" else classify_right_operator
        evidence = operator_left_evidence if side == "left" else operator_right_evidence
        if classify(T):
            continue
        perturbed += 1
        ok, _ = evidence(T, 10_000, int(rng.integers(2**31)))
        backed += ok
    acceptance(
        7,
        wrong == 0 and far == perturbed == backed == 1000,
        f"{exhaustive} exhaustive row-form operators, {wrong} misclassified; "
        f"{far}/1000 perturbations off the canonical set, {perturbed} rejected, {backed} backed by transported witnesses",
    )


def test_criterion_8_hilbert_probe(acceptance):
    start = perf_counter()
    reports = [hilbert_no_left_probe(n, trials=100, seed=SEED + 8 + n) for n in (2, 3)]
    elapsed = perf_counter() - start
    refuted = [r["refuted"] for r in reports]
    acceptance(8, refuted == [100, 100] and elapsed < 120, f"refuted {refuted[0]}/100 (n=2), {refuted[1]}/100 (n=3), {elapsed:.1f} s")


def test_criterion_9_right_forms_against_search(acceptance):
    rng = np.random.default_rng(SEED + 9)
    points = []
    for p in (1.5, 3.0):
        for n in (1, 2, 3):
            points += [(p, x, "canonical") for x in canonical_forms(p, n, "right")]
    n_canonical = len(points)
    while len(points) < 200:
        p = (1.5, 3.0)[rng.integers(2)]
        n = int(rng.integers(2, 4))
        if rng.random() < 0.5:
            x = random_unit(Lp(p, n), rng)
            points.append((p, x, "random"))
        else:
            forms = canonical_forms(p, n, "right")
            x = forms[rng.integers(len(forms))] + 10 ** rng.uniform(-3, -1) * rng.standard_normal(n)
            points.append((p, x / norm(Lp(p, n), x), "perturbed"))
    disagreements = []
    accepted = 0
    for i, (p, x, origin) in enumerate(points):
        space = Lp(p, len(x))
        closed = classify_right_lp(space, x)
        accepted += closed
        w = search_right_counterexample(space, x, 100_000, seed=SEED + i)
        if w is not None and not _witness_ok(w, "right"):
            disagreements.append((p, origin, list(x), "invalid witness"))
        elif closed != (w is None):
            disagreements.append((p, origin, list(x), "closed form" if closed else "search"))
    acceptance(
        9,
        not disagreements and n_canonical == 56,
        f"{len(points)} points ({n_canonical} canonical), {accepted} accepted, "
        f"{len(disagreements)} disagreements {disagreements[:3]}",
    )


def test_criterion_10_deterministic_reports(acceptance, capsys):
    mismatched = []
    for tid in sorted(SUITES):
        argv = ["verify-theorem", tid, "--trials", "5", "--seed", "99", "--budget", "2048", "--no-timestamp"]
        digests = []
        for _ in range(2):
            main(argv)
            digests.append(hashlib.sha256(capsys.readouterr().out.encode()).hexdigest())
        if digests[0] != digests[1]:
            mismatched.append(tid)
    cmd = [sys.executable, "-m", "bjlab.cli", "verify-theorem", "COR-DIRECTSUM", "--trials", "20", "--no-timestamp"]
    outs = [hashlib.sha256(subprocess.run(cmd, capture_output=True, check=True).stdout).hexdigest() for _ in range(2)]
    if outs[0] != outs[1]:
        mismatched.append("COR-DIRECTSUM (separate processes)")
    acceptance(
        10,
        not mismatched,
        f"{len(SUITES)} suites run twice in process and one twice in separate processes, "
        f"mismatches: {mismatched or 'none'}",
    )
