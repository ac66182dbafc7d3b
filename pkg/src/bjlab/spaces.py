"""Finite-dimensional real normed spaces.

Three descriptor families are supported and can be nested:

* ``Lp(p, dim)``: the usual l_p norm, ``1 <= p <= inf``.
* ``Polyhedral(generators)``: ``||x|| = max_i |<g_i, x>|``; the generators are
  the extreme points of the dual unit ball, listed up to sign.
* ``SupSum(components)``: the direct sum of the components under the maximum
  of the component norms (l_inf^n(X) when all components are equal).

Vectors and functionals are plain numpy arrays of flat coordinates; the
descriptor supplies the block structure. Functionals pair with vectors by the
standard dot product. Most evaluation routines act along the last axis so
batches of vectors can be processed at once.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Union

import numpy as np

TAU_NORM = 1e-10
TAU_TIE = 1e-9
MAX_FINITE_P = 1e6
MAX_DEPTH = 8


class SpaceError(ValueError):
    """Invalid descriptor or an operation the descriptor cannot support."""


class DimensionMismatch(SpaceError):
    pass


class ZeroVectorError(SpaceError):
    pass


class SmoothSpaceHasContinuumExtremes(SpaceError):
    """Raised when a finite list of extreme points is requested from a smooth l_p ball."""


class DescriptorParseError(SpaceError):
    pass


# --------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class Lp:
    p: float
    dim: int

    def __post_init__(self):
        p = float(self.p)
        if math.isnan(p) or p < 1:
            raise SpaceError(f"exponent must satisfy p >= 1, got {self.p}")
        if math.isfinite(p) and p > MAX_FINITE_P:
            raise SpaceError(f"finite exponent {p} exceeds {MAX_FINITE_P:g}; use inf")
        if int(self.dim) != self.dim or self.dim < 1:
            raise SpaceError(f"dimension must be a positive integer, got {self.dim}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "dim", int(self.dim))

    @property
    def depth(self) -> int:
        return 0

    @property
    def is_smooth(self) -> bool:
        """True when the unit sphere has a continuum of extreme points."""
        return 1 < self.p < math.inf and self.dim > 1

    def __str__(self) -> str:
        return format_space(self)


@dataclass(frozen=True)
class Polyhedral:
    generators: tuple

    def __post_init__(self):
        gens = tuple(tuple(float(v) for v in g) for g in self.generators)
        if not gens:
            raise SpaceError("polyhedral space needs at least one generator")
        n = len(gens[0])
        if n == 0 or any(len(g) != n for g in gens):
            raise SpaceError("generators must be nonempty and of equal length")
        G = np.array(gens)
        if not np.all(np.isfinite(G)):
            raise SpaceError("generators must be finite")
        if np.linalg.matrix_rank(G) < n:
            raise SpaceError("generators do not span the dual space; the norm is degenerate")
        lengths = np.linalg.norm(G, axis=1, keepdims=True)
        if np.any(lengths == 0):
            raise SpaceError("generators must be nonzero")
        unit = G / lengths
        for i, j in itertools.combinations(range(len(gens)), 2):
            if np.allclose(unit[i], unit[j], atol=1e-12):
                raise SpaceError(f"generator {j} is a positive multiple of generator {i}")
        object.__setattr__(self, "generators", gens)

    @property
    def dim(self) -> int:
        return len(self.generators[0])

    @property
    def depth(self) -> int:
        return 0

    @property
    def is_smooth(self) -> bool:
        return False

    @cached_property
    def matrix(self) -> np.ndarray:
        G = np.array(self.generators)
        G.setflags(write=False)
        return G

    def __str__(self) -> str:
        return format_space(self)


@dataclass(frozen=True)
class SupSum:
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise SpaceError("sup-sum needs at least one component")
        for c in comps:
            if not isinstance(c, (Lp, Polyhedral, SupSum)):
                raise SpaceError(f"not a space descriptor: {c!r}")
        object.__setattr__(self, "components", comps)
        if self.depth > MAX_DEPTH:
            raise SpaceError(f"sup-sum nesting depth {self.depth} exceeds {MAX_DEPTH}")

    @cached_property
    def dim(self) -> int:
        return sum(c.dim for c in self.components)

    @cached_property
    def depth(self) -> int:
        return 1 + max(c.depth for c in self.components)

    @property
    def is_smooth(self) -> bool:
        return False

    @cached_property
    def slices(self) -> tuple:
        out, start = [], 0
        for c in self.components:
            out.append(slice(start, start + c.dim))
            start += c.dim
        return tuple(out)

    def __len__(self) -> int:
        return len(self.components)

    def __str__(self) -> str:
        return format_space(self)


Space = Union[Lp, Polyhedral, SupSum]


def real_line() -> Lp:
    return Lp(math.inf, 1)


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return math.inf
    if p == math.inf:
        return 1.0
    return p / (p - 1)


def _as_array(space: Space, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or x.shape[-1] != space.dim:
        raise DimensionMismatch(
            f"expected {space.dim} coordinates for {format_space(space)}, got shape {x.shape}"
        )
    return x


def blocks(space: SupSum, x) -> list:
    """Split flat coordinates into the component blocks of a sup-sum."""
    x = _as_array(space, x)
    return [x[..., s] for s in space.slices]


# --------------------------------------------------------------------------
# norms


def _lp_norm(x: np.ndarray, p: float) -> np.ndarray:
    a = np.abs(x)
    if p == 1:
        return a.sum(axis=-1)
    m = a.max(axis=-1)
    if p == math.inf:
        return m
    # scale by the max coordinate so large p cannot overflow
    safe = np.where(m > 0, m, 1.0)
    s = ((a / safe[..., None]) ** p).sum(axis=-1) ** (1.0 / p)
    return np.where(m > 0, m * s, 0.0)


def _norm(space: Space, x: np.ndarray) -> np.ndarray:
    if isinstance(space, Lp):
        return _lp_norm(x, space.p)
    if isinstance(space, Polyhedral):
        return np.abs(x @ space.matrix.T).max(axis=-1)
    parts = [_norm(c, x[..., s]) for c, s in zip(space.components, space.slices)]
    return np.max(np.stack(parts, axis=-1), axis=-1)


def norm(space: Space, x):
    """Norm of ``x`` (or of each row of a batch, along the last axis)."""
    out = _norm(space, _as_array(space, x))
    return float(out) if np.ndim(out) == 0 else out


def block_norms(space: SupSum, x) -> np.ndarray:
    x = _as_array(space, x)
    return np.stack([_norm(c, x[..., s]) for c, s in zip(space.components, space.slices)], axis=-1)


def _dual_norm(space: Space, f: np.ndarray) -> np.ndarray:
    if isinstance(space, Lp):
        return _lp_norm(f, conjugate_exponent(space.p))
    if isinstance(space, Polyhedral):
        return np.abs(f @ primal_vertices(space).T).max(axis=-1)
    parts = [_dual_norm(c, f[..., s]) for c, s in zip(space.components, space.slices)]
    return np.sum(np.stack(parts, axis=-1), axis=-1)


def dual_norm(space: Space, f):
    """Dual norm ``sup{f(x) : ||x|| <= 1}`` of a functional on ``space``.

    l_p pairs with l_q; a polyhedral ball is scanned over its vertices; a
    sup-sum dualises to the l_1-sum of the component dual norms.
    """
    out = _dual_norm(space, _as_array(space, f))
    return float(out) if np.ndim(out) == 0 else out


def norming_vector(space: Space, f) -> np.ndarray:
    """A unit vector ``x`` with ``f(x) = ||f||_*`` (f nonzero)."""
    f = _as_array(space, f)
    if _dual_norm(space, f) == 0:
        raise ZeroVectorError("the zero functional has no norming vector")
    if isinstance(space, SupSum):
        parts = []
        for c, s in zip(space.components, space.slices):
            fk = f[s]
            if _dual_norm(c, fk) > 0:
                parts.append(norming_vector(c, fk))
            else:
                parts.append(np.zeros(c.dim))
        return np.concatenate(parts)
    if isinstance(space, Polyhedral):
        V = primal_vertices(space)
        return V[np.argmax(V @ f)].copy()
    q = conjugate_exponent(space.p)
    if space.p == 1:
        x = np.zeros(space.dim)
        k = int(np.argmax(np.abs(f)))
        x[k] = np.sign(f[k])
        return x
    if space.p == math.inf:
        return np.where(f >= 0, 1.0, -1.0)
    u = f / _lp_norm(f, q)
    x = np.sign(u) * np.abs(u) ** (q - 1)
    return x / _lp_norm(x, space.p)


# --------------------------------------------------------------------------
# extreme points


def _polyhedral_vertices(G: np.ndarray) -> np.ndarray:
    m, n = G.shape
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    found = []
    scale = np.abs(G).max()
    for rows in itertools.combinations(range(m), n):
        A = G[list(rows)]
        if abs(np.linalg.det(A / scale)) < 1e-12:
            continue
        X = np.linalg.solve(A, signs.T).T
        ok = np.abs(X @ G.T).max(axis=1) <= 1 + 1e-9
        found.append(X[ok])
    V = np.concatenate(found)
    # deduplicate vertices reached from several active sets
    keys = np.round(V, 9)
    _, idx = np.unique(keys, axis=0, return_index=True)
    return V[np.sort(idx)]


@lru_cache(maxsize=256)
def _vertices_cached(space: Space) -> np.ndarray:
    if isinstance(space, Polyhedral):
        V = _polyhedral_vertices(space.matrix)
    elif isinstance(space, Lp):
        if space.is_smooth:
            raise SmoothSpaceHasContinuumExtremes(
                f"{format_space(space)} has a continuum of extreme points"
            )
        n = space.dim
        if space.p == math.inf or n == 1:
            V = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
        else:
            V = np.concatenate([np.eye(n), -np.eye(n)])
    else:
        per_block = [_vertices_cached(c) for c in space.components]
        total = math.prod(len(v) for v in per_block)
        if total > 200_000:
            raise SpaceError(f"sup-sum ball has {total} vertices; refusing to enumerate")
        V = np.array([np.concatenate(combo) for combo in itertools.product(*per_block)])
    V.setflags(write=False)
    return V


def primal_vertices(space: Space) -> np.ndarray:
    """All extreme points of the closed unit ball (both signs), one per row."""
    return _vertices_cached(space)


@lru_cache(maxsize=256)
def _ext_dual_cached(space: Space) -> np.ndarray:
    if isinstance(space, Lp):
        n = space.dim
        if space.is_smooth:
            raise SmoothSpaceHasContinuumExtremes(
                f"{format_space(space)} is smooth: its dual ball has a continuum of "
                "extreme points; use support_set instead"
            )
        if space.p == 1 and n > 1:
            E = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
        else:
            E = np.concatenate([np.eye(n), -np.eye(n)])
    elif isinstance(space, Polyhedral):
        # a generator is extreme iff it exposes a facet of the primal ball
        G, V, n = space.matrix, primal_vertices(space), space.dim
        keep = []
        for g in G:
            on_face = V[V @ g >= 1 - 1e-9]
            if len(on_face) and np.linalg.matrix_rank(on_face - on_face[0], tol=1e-9) == n - 1:
                keep.append(g)
        K = np.array(keep)
        E = np.concatenate([K, -K])
    else:
        rows = []
        for c, s in zip(space.components, space.slices):
            for e in _ext_dual_cached(c):
                row = np.zeros(space.dim)
                row[s] = e
                rows.append(row)
        E = np.array(rows)
    E.setflags(write=False)
    return E


def ext_dual(space: Space) -> np.ndarray:
    """Extreme points of the dual unit ball, both signs, one functional per row."""
    return _ext_dual_cached(space)


def has_finite_extremes(space: Space) -> bool:
    if isinstance(space, Lp):
        return not space.is_smooth
    if isinstance(space, Polyhedral):
        return True
    return all(has_finite_extremes(c) for c in space.components)


def dual_space(space: Space) -> Space:
    """Descriptor of the dual space, when it is expressible in the three families."""
    if isinstance(space, Lp):
        return Lp(conjugate_exponent(space.p), space.dim)
    if isinstance(space, (Polyhedral, SupSum)):
        if isinstance(space, SupSum) and not has_finite_extremes(space):
            raise SpaceError(
                f"dual of {format_space(space)} is an l_1-sum with a smooth summand; "
                "not representable"
            )
        V = primal_vertices(space)
        return Polyhedral(tuple(map(tuple, _up_to_sign(V))))
    raise SpaceError(f"unknown descriptor {space!r}")


def _up_to_sign(rows: np.ndarray) -> np.ndarray:
    """Keep one row of every +/- pair: the one whose first nonzero entry is positive."""
    out = []
    for r in rows:
        nz = np.flatnonzero(np.abs(r) > 1e-12)
        if len(nz) and r[nz[0]] > 0:
            out.append(r)
    return np.array(out)


def up_to_sign(rows) -> np.ndarray:
    return _up_to_sign(np.asarray(rows, dtype=float))


# --------------------------------------------------------------------------
# support functionals


@dataclass(frozen=True, eq=False)
class Singleton:
    functional: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.functional)


@dataclass(frozen=True, eq=False)
class SignedBox:
    """Face of the l_inf dual ball of l_1: fixed signs on the support, free elsewhere."""

    dim: int
    fixed: dict = field(default_factory=dict)
    free: tuple = ()


@dataclass(frozen=True, eq=False)
class Hull:
    generators: np.ndarray

    @property
    def dim(self) -> int:
        return self.generators.shape[1]


JSet = Union[Singleton, SignedBox, Hull]


def support_set(space: Space, x, tau: float = TAU_NORM, tie: float = TAU_TIE) -> JSet:
    """The face J(x) of norm-one functionals f with f(x) = ||x||."""
    x = _as_array(space, x)
    if x.ndim != 1:
        raise DimensionMismatch("support_set takes a single vector")
    nx = float(_norm(space, x))
    if nx == 0:
        raise ZeroVectorError("J(0) is the whole dual ball; x must be nonzero")
    if isinstance(space, Lp):
        if space.dim == 1:
            return Singleton(np.sign(x))
        if space.p == 1:
            supp = np.abs(x) > tau * nx
            fixed = {int(i): int(np.sign(x[i])) for i in np.flatnonzero(supp)}
            return SignedBox(space.dim, fixed, tuple(int(i) for i in np.flatnonzero(~supp)))
        if space.p == math.inf:
            active = np.flatnonzero(np.abs(x) >= nx * (1 - tau))
            G = np.zeros((len(active), space.dim))
            G[np.arange(len(active)), active] = np.sign(x[active])
            return Hull(G)
        u = x / nx
        return Singleton(np.sign(u) * np.abs(u) ** (space.p - 1))
    if isinstance(space, Polyhedral):
        vals = space.matrix @ x
        active = np.abs(vals) >= nx * (1 - tau)
        return Hull(np.sign(vals[active])[:, None] * space.matrix[active])
    rows = []
    for k in attainment(space, x, tie):
        c, s = space.components[k], space.slices[k]
        for g in jset_extremes(support_set(c, x[s], tau, tie)):
            row = np.zeros(space.dim)
            row[s] = g
            rows.append(row)
    return Hull(np.array(rows))


def jset_extremes(J: JSet) -> np.ndarray:
    """A finite list of functionals whose convex hull is J."""
    if isinstance(J, Singleton):
        return J.functional[None, :].copy()
    if isinstance(J, Hull):
        return J.generators.copy()
    if len(J.free) > 16:
        raise SpaceError("too many free coordinates to enumerate the face")
    base = np.zeros(J.dim)
    for i, s in J.fixed.items():
        base[i] = s
    out = []
    for signs in itertools.product((1.0, -1.0), repeat=len(J.free)):
        f = base.copy()
        f[list(J.free)] = signs
        out.append(f)
    return np.array(out)


def jset_centroid(J: JSet) -> np.ndarray:
    if isinstance(J, Singleton):
        return J.functional.copy()
    if isinstance(J, Hull):
        return J.generators.mean(axis=0)
    f = np.zeros(J.dim)
    for i, s in J.fixed.items():
        f[i] = s
    return f


def jset_range(J: JSet, y):
    """Closed-form ``[min, max]`` of ``f(y)`` over ``f in J`` (batched over y)."""
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != J.dim:
        raise DimensionMismatch(f"J-set acts on {J.dim} coordinates, got shape {y.shape}")
    if isinstance(J, Singleton):
        v = y @ J.functional
        return v, v
    if isinstance(J, Hull):
        v = y @ J.generators.T
        return v.min(axis=-1), v.max(axis=-1)
    idx = np.array(list(J.fixed), dtype=int)
    sg = np.array(list(J.fixed.values()), dtype=float)
    fixed = y[..., idx] @ sg if len(idx) else np.zeros(y.shape[:-1])
    free = np.abs(y[..., list(J.free)]).sum(axis=-1)
    return fixed - free, fixed + free


def jset_sample(J: JSet, rng: np.random.Generator, size: int) -> np.ndarray:
    """Random functionals in J, biased toward extreme points and edges of the face."""
    if isinstance(J, Singleton):
        return np.repeat(J.functional[None, :], size, axis=0)
    kind = rng.integers(0, 3, size)  # 0 vertex, 1 edge, 2 interior
    if isinstance(J, SignedBox):
        out = np.zeros((size, J.dim))
        for i, s in J.fixed.items():
            out[:, i] = s
        free = list(J.free)
        if free:
            verts = rng.choice((-1.0, 1.0), size=(size, len(free)))
            inner = rng.uniform(-1, 1, size=(size, len(free)))
            edge = verts.copy()
            col = rng.integers(0, len(free), size)
            edge[np.arange(size), col] = rng.uniform(-1, 1, size)
            out[:, free] = np.where(kind[:, None] == 0, verts, np.where(kind[:, None] == 1, edge, inner))
        return out
    G = J.generators
    k = len(G)
    i = rng.integers(0, k, size)
    j = rng.integers(0, k, size)
    t = rng.uniform(0, 1, size)[:, None]
    w = rng.dirichlet(np.ones(k), size)
    return np.where(
        kind[:, None] == 0, G[i], np.where(kind[:, None] == 1, t * G[i] + (1 - t) * G[j], w @ G)
    )


def directional_range(space: Space, x, d, tau: float = TAU_NORM, tie: float = TAU_TIE):
    """One-sided derivatives of the norm at ``x`` in direction ``d``.

    Returns ``(lo, hi)`` with ``hi = lim_{t->0+} (||x+td|| - ||x||)/t`` and
    ``lo`` the corresponding limit from the left; equivalently the range of
    ``f(d)`` over ``f in J(x)``. Evaluated directly from the coordinates and
    vectorised over leading axes, without building the J-set.
    """
    x = _as_array(space, x)
    d = _as_array(space, d)
    x, d = np.broadcast_arrays(x, d)
    return _drange(space, x, d, tau, tie)


def _drange(space, x, d, tau, tie):
    nx = _norm(space, x)
    zero = nx == 0
    if isinstance(space, Lp):
        if space.dim == 1:
            v = np.sign(x[..., 0]) * d[..., 0]
            lo = hi = v
        elif space.p == 1:
            supp = np.abs(x) > tau * nx[..., None]
            fixed = np.where(supp, np.sign(x) * d, 0.0).sum(axis=-1)
            free = np.where(supp, 0.0, np.abs(d)).sum(axis=-1)
            lo, hi = fixed - free, fixed + free
        elif space.p == math.inf:
            active = np.abs(x) >= (nx * (1 - tau))[..., None]
            v = np.sign(x) * d
            lo = np.where(active, v, np.inf).min(axis=-1)
            hi = np.where(active, v, -np.inf).max(axis=-1)
        else:
            safe = np.where(zero, 1.0, nx)[..., None]
            u = x / safe
            v = (np.sign(u) * np.abs(u) ** (space.p - 1) * d).sum(axis=-1)
            lo = hi = v
    elif isinstance(space, Polyhedral):
        G = space.matrix
        gx, gd = x @ G.T, d @ G.T
        active = np.abs(gx) >= (nx * (1 - tau))[..., None]
        v = np.sign(gx) * gd
        lo = np.where(active, v, np.inf).min(axis=-1)
        hi = np.where(active, v, -np.inf).max(axis=-1)
    else:
        bn = np.stack([_norm(c, x[..., s]) for c, s in zip(space.components, space.slices)], axis=-1)
        att = bn >= (bn.max(axis=-1) * (1 - tie))[..., None]
        los, his = [], []
        for c, s in zip(space.components, space.slices):
            a, b = _drange(c, x[..., s], d[..., s], tau, tie)
            los.append(a)
            his.append(b)
        lo = np.where(att, np.stack(los, axis=-1), np.inf).min(axis=-1)
        hi = np.where(att, np.stack(his, axis=-1), -np.inf).max(axis=-1)
    if np.any(zero):
        nd = _norm(space, d)
        lo = np.where(zero, -nd, lo)
        hi = np.where(zero, nd, hi)
    return lo, hi


def attainment(space: SupSum, f, tau_tie: float = TAU_TIE) -> list:
    """Indices (0-based, ascending) of blocks whose norm is within ``tau_tie`` of the max."""
    if not isinstance(space, SupSum):
        raise SpaceError("attainment sets are defined for sup-sums")
    bn = block_norms(space, f)
    if bn.ndim != 1:
        raise DimensionMismatch("attainment takes a single vector")
    m = bn.max()
    if m == 0:
        raise ZeroVectorError("the zero function attains its norm everywhere")
    return [int(k) for k in np.flatnonzero(bn >= m * (1 - tau_tie))]


# --------------------------------------------------------------------------
# text grammar: lp(<p>,<n>) | poly[<f1>;<f2>;...] | sup(<desc>,...)


def _fmt_num(v: float) -> str:
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    if float(v).is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def format_space(space: Space) -> str:
    if isinstance(space, Lp):
        return f"lp({_fmt_num(space.p)},{space.dim})"
    if isinstance(space, Polyhedral):
        return "poly[" + ";".join(",".join(_fmt_num(v) for v in g) for g in space.generators) + "]"
    return "sup(" + ",".join(format_space(c) for c in space.components) + ")"


_NUM = re.compile(r"[+-]?(inf|∞|(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)")


class _Parser:
    def __init__(self, text: str):
        self.s = re.sub(r"\s+", "", text)
        self.i = 0

    def fail(self, msg: str):
        raise DescriptorParseError(f"{msg} at position {self.i} in {self.s!r}")

    def eat(self, tok: str):
        if not self.s.startswith(tok, self.i):
            self.fail(f"expected {tok!r}")
        self.i += len(tok)

    def number(self) -> float:
        m = _NUM.match(self.s, self.i)
        if not m:
            self.fail("expected a number")
        self.i = m.end()
        return float(m.group(0).replace("∞", "inf"))

    def space(self, depth: int = 0) -> Space:
        if depth > MAX_DEPTH:
            self.fail("nesting too deep")
        if self.s.startswith("lp(", self.i):
            self.eat("lp(")
            p = self.number()
            self.eat(",")
            n = self.number()
            self.eat(")")
            if not float(n).is_integer():
                self.fail("dimension must be an integer")
            return Lp(p, int(n))
        if self.s.startswith("poly[", self.i):
            self.eat("poly[")
            gens = [[self.number()]]
            while self.s[self.i : self.i + 1] in (",", ";"):
                sep = self.s[self.i]
                self.i += 1
                if sep == ";":
                    gens.append([])
                gens[-1].append(self.number())
            self.eat("]")
            return Polyhedral(tuple(map(tuple, gens)))
        if self.s.startswith("sup(", self.i):
            self.eat("sup(")
            comps = [self.space(depth + 1)]
            while self.s.startswith(",", self.i):
                self.i += 1
                comps.append(self.space(depth + 1))
            self.eat(")")
            return SupSum(tuple(comps))
        self.fail("expected lp(, poly[ or sup(")


def parse_space(text: str) -> Space:
    """Parse the descriptor grammar; the inverse of :func:`format_space`."""
    parser = _Parser(text)
    try:
        out = parser.space()
    except DescriptorParseError:
        raise
    except SpaceError as exc:
        raise DescriptorParseError(str(exc)) from exc
    if parser.i != len(parser.s):
        parser.fail("trailing input")
    return out
