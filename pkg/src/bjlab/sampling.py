"""Random spaces, vectors and the canonical symmetric forms used by tests and suites."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .spaces import Lp, Polyhedral, Space, SpaceError, SupSum, _norm, conjugate_exponent, real_line

P_CHOICES = (1.0, 1.5, 2.0, 3.0, math.inf)


def random_lp(rng: np.random.Generator, max_dim: int = 3, ps=P_CHOICES) -> Lp:
    return Lp(float(rng.choice(ps)), int(rng.integers(1, max_dim + 1)))


def random_polyhedral(rng: np.random.Generator, dim: int, max_generators: int = 8, integer: bool | None = None) -> Polyhedral:
    """A polyhedral norm on ``R^dim`` with between ``dim`` and ``max_generators`` generators."""
    if integer is None:
        integer = bool(rng.random() < 0.3)
    for _ in range(100):
        k = int(rng.integers(dim, max(dim, max_generators) + 1))
        G = rng.integers(-2, 3, (k, dim)).astype(float) if integer else np.round(rng.standard_normal((k, dim)), 6)
        try:
            return Polyhedral(tuple(map(tuple, G)))
        except SpaceError:
            continue
    return Polyhedral(tuple(map(tuple, np.eye(dim))))


def random_component(rng: np.random.Generator, max_dim: int = 3, ps=P_CHOICES, allow_poly: bool = True) -> Space:
    if allow_poly and rng.random() < 0.2:
        return random_polyhedral(rng, int(rng.integers(1, max_dim + 1)), 6)
    return random_lp(rng, max_dim, ps)


def random_supsum(
    rng: np.random.Generator,
    blocks=(2, 4),
    max_component_dim: int = 3,
    ps=P_CHOICES,
    allow_poly: bool = False,
    nested: bool = False,
) -> SupSum:
    """Sup-sum with a block count drawn from ``blocks`` (inclusive range)."""
    k = int(rng.integers(blocks[0], blocks[1] + 1))
    comps = []
    for _ in range(k):
        if nested and rng.random() < 0.3:
            comps.append(SupSum(tuple(random_lp(rng, 2, ps) for _ in range(2))))
        else:
            comps.append(random_component(rng, max_component_dim, ps, allow_poly))
    return SupSum(tuple(comps))


def random_space(rng: np.random.Generator, max_dim: int = 8) -> Space:
    """l_p, polyhedral or two-level sup-sum, total dimension at most ``max_dim``."""
    kind = rng.integers(0, 3)
    if kind == 0:
        return random_lp(rng, min(4, max_dim))
    if kind == 1:
        return random_polyhedral(rng, int(rng.integers(1, min(4, max_dim) + 1)))
    for _ in range(50):
        s = random_supsum(rng, (1, 3), 3, allow_poly=True, nested=True)
        if s.dim <= max_dim:
            return s
    return SupSum((real_line(), real_line()))


def random_vector(space: Space, rng: np.random.Generator, integer: bool = False) -> np.ndarray:
    """A nonzero vector: Gaussian, sparse Gaussian, or small integers."""
    n = space.dim
    while True:
        if integer:
            x = rng.integers(-2, 3, n).astype(float)
        else:
            x = rng.standard_normal(n)
            if n > 1 and rng.random() < 0.3:
                x[rng.random(n) < 0.5] = 0.0
        if np.any(x):
            return x


def random_unit(space: Space, rng: np.random.Generator, integer: bool = False) -> np.ndarray:
    x = random_vector(space, rng, integer)
    return x / _norm(space, x)


def _signed_placements(n: int, k: int, modulus: float):
    for idx in itertools.combinations(range(n), k):
        for signs in itertools.product((1.0, -1.0), repeat=k):
            v = np.zeros(n)
            v[list(idx)] = np.array(signs) * modulus
            yield v


def canonical_forms(p: float, n: int, side: str) -> list:
    """Every unit vector of l_p^n that the closed form for ``side`` accepts,
    when that set is finite (otherwise ``SpaceError``)."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if p == 2 and n > 1:
        raise SpaceError("every unit vector of l_2^n qualifies")
    if n == 1:
        return [np.array([1.0]), np.array([-1.0])]
    spikes = list(_signed_placements(n, 1, 1.0))
    if p == math.inf:
        return spikes if side == "left" else [np.array(s) for s in itertools.product((1.0, -1.0), repeat=n)]
    if p == 1:
        if side == "right":
            return spikes
        return list(_signed_placements(2, 2, 0.5)) if n == 2 else []
    return spikes + list(_signed_placements(n, 2, 2 ** (-1 / p)))


def dual_canonical_forms(p: float, m: int, side: str) -> list:
    """Canonical forms of the dual space ``l_q^m`` of ``l_p^m``."""
    return canonical_forms(conjugate_exponent(p), m, side)
