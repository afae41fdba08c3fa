"""Cayley graphs of finite groups (SL_2(F_p) in particular), girth, and
second-eigenvalue estimation of the degree-normalized adjacency operator.

The graph is stored as one index permutation per generator (edges
x -> x*s), never as an explicit matrix; matvecs stream over generators.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from .errors import (BorelElement, DuplicateGenerators, IdentityGenerator,
                     NotConnected)
from .field import FieldCtx
from .sl2 import Mat2, enumerate_sl2, u, weyl


def build_generator_set_bg(ctx: FieldCtx, g: Mat2, n: int, stride: int = 2) -> list[Mat2]:
    """The conjugated-unipotent generator family
    {u(-stride*j) * g * u(stride*j) : 1 <= j <= n}."""
    if g.c == 0:
        raise BorelElement(f"{g} lies in B; the family degenerates")
    gens = [u(ctx, -stride * j) * g * u(ctx, stride * j) for j in range(1, n + 1)]
    if len({m.entries() for m in gens}) != n:
        raise DuplicateGenerators(f"collisions in the family (stride*n={stride * n} vs p={ctx.p})")
    return gens


def symmetrize(gens: list[Mat2]) -> list[Mat2]:
    """S union S^-1, deduplicated, in stable order."""
    seen = {}
    for m in gens:
        seen.setdefault(m.entries(), m)
    for m in gens:
        seen.setdefault(m.inv().entries(), m.inv())
    return list(seen.values())


@dataclass
class CayleyGraph:
    n_vertices: int
    perms: list[np.ndarray]  # perms[k][i] = index of vertex_i * s_k
    identity_index: int = 0

    @property
    def degree(self) -> int:
        return len(self.perms)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """Degree-normalized adjacency applied to v (edges x -> x*s, so
        (Av)[i] = mean over s of v[i*s])."""
        out = np.zeros_like(v)
        for perm in self.perms:
            out += v[perm]
        return out / len(self.perms)

    def neighbors(self, i: int) -> list[int]:
        return sorted({int(perm[i]) for perm in self.perms})


def _sl2_index_codes(ctx: FieldCtx, elements: list[Mat2]) -> np.ndarray:
    p = ctx.p
    return np.array([((m.a * p + m.b) * p + m.c) * p + m.d for m in elements],
                    dtype=np.int64)


def cayley_sl2(ctx: FieldCtx, gens: list[Mat2]) -> CayleyGraph:
    """Cayley graph of SL_2(F_p) on the fixed enumeration order."""
    for m in gens:
        if m.is_identity():
            raise IdentityGenerator("identity element in generator set")
        assert m.det == 1, "generators must lie in SL_2"
    elements = enumerate_sl2(ctx)
    p = ctx.p
    codes = _sl2_index_codes(ctx, elements)
    order = np.argsort(codes, kind="stable")
    sorted_codes = codes[order]

    a = np.array([m.a for m in elements], dtype=np.int64)
    b = np.array([m.b for m in elements], dtype=np.int64)
    c = np.array([m.c for m in elements], dtype=np.int64)
    d = np.array([m.d for m in elements], dtype=np.int64)
    perms = []
    for s in gens:
        na = (a * s.a + b * s.c) % p
        nb = (a * s.b + b * s.d) % p
        nc = (c * s.a + d * s.c) % p
        nd = (c * s.b + d * s.d) % p
        ncodes = ((na * p + nb) * p + nc) * p + nd
        pos = np.searchsorted(sorted_codes, ncodes)
        perms.append(order[pos].astype(np.int64))
    ident_code = ((1 * p + 0) * p + 0) * p + 1
    ident = int(order[np.searchsorted(sorted_codes, ident_code)])
    return CayleyGraph(len(elements), perms, identity_index=ident)


def cayley_cyclic(n: int, steps: list[int]) -> CayleyGraph:
    """Cay(Z_n, steps); steps given as residues mod n."""
    idx = np.arange(n, dtype=np.int64)
    perms = []
    for s in steps:
        s %= n
        if s == 0:
            raise IdentityGenerator("step 0 is the identity")
        perms.append((idx + s) % n)
    return CayleyGraph(n, perms, identity_index=0)


def girth(graph: CayleyGraph, symmetric: bool = True) -> int:
    """Length of the shortest nontrivial cycle through the identity vertex
    (sufficient for vertex-transitive graphs).

    For symmetric generator sets: BFS girth on the simple graph. For
    asymmetric sets: length of the shortest relation, i.e. the shortest
    directed cycle through the identity.
    """
    root = graph.identity_index
    if any(int(perm[root]) == root for perm in graph.perms):
        raise IdentityGenerator("generator set contains the identity")
    n = graph.n_vertices
    if not symmetric:
        dist = np.full(n, -1, dtype=np.int64)
        queue = deque()
        for perm in graph.perms:
            v = int(perm[root])
            if v == root:
                return 1
            if dist[v] < 0:
                dist[v] = 1
                queue.append(v)
        while queue:
            x = queue.popleft()
            for perm in graph.perms:
                y = int(perm[x])
                if y == root:
                    return int(dist[x]) + 1
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        raise NotConnected("no relation found; generators do not generate")
    # Undirected BFS girth: a non-tree edge (x, y) closes a cycle of
    # length dist[x] + dist[y] + 1.
    dist = np.full(n, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    dist[root] = 0
    queue = deque([root])
    best = None
    while queue:
        x = queue.popleft()
        if best is not None and dist[x] * 2 >= best:
            break
        for y in graph.neighbors(x):
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                parent[y] = x
                queue.append(y)
            elif y != parent[x] and parent[y] != x:
                cyc = int(dist[x] + dist[y] + 1)
                if best is None or cyc < best:
                    best = cyc
    if best is None:
        raise NotConnected("acyclic component; generators do not generate a cycle")
    return best


@dataclass
class SpectralReport:
    lambda2: float       # second-largest eigenvalue, signed
    lambda_min: float    # most negative eigenvalue
    lambda2_abs: float   # operator norm on the complement of constants
    iterations: int
    residual: float


def second_eigenvalue(graph: CayleyGraph, tol: float = 1e-8,
                      seed: int = 0,
                      require_connected: bool = True) -> SpectralReport:
    """Spectral edge data of the degree-normalized adjacency restricted to
    the complement of constants: the signed second-largest eigenvalue, the
    most negative eigenvalue, and their larger absolute value.

    Uses implicitly-restarted Lanczos on the mean-deflated operator with a
    seeded deterministic start vector.  The deflation leaves a spurious 0
    eigenvalue on the constants, so the extremes are found through the
    shifts A+I (top) and A-I (bottom), whose relevant eigenvalues dominate
    0 in magnitude.  Connectivity is verified by a BFS cover first.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if require_connected:
        _check_connected(graph)
    # (a disconnected graph is still well-defined spectrally: lambda2 = 1)
    n = graph.n_vertices
    matvec_count = [0]

    def deflated(v):
        matvec_count[0] += 1
        v = v - v.mean()
        w = graph.matvec(v)
        return w - w.mean()

    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(n)
    v0 -= v0.mean()

    def extreme(shift):
        # largest-magnitude eigenvalue of P(A + shift*I)P; the projection
        # keeps the constants at 0, which |lam + shift| always dominates
        def op(v):
            return deflated(v) + shift * (v - v.mean())
        lin = spla.LinearOperator((n, n), matvec=op, dtype=np.float64)
        vals, vecs = spla.eigsh(lin, k=1, which="LM", tol=tol, v0=v0,
                                ncv=min(n, 64), maxiter=100_000)
        lam = float(vals[0]) - shift
        vec = vecs[:, 0]
        res = float(np.linalg.norm(deflated(vec) - lam * vec))
        return lam, res

    top, res_top = extreme(1.0)
    bot, res_bot = extreme(-1.0)
    return SpectralReport(lambda2=top, lambda_min=bot,
                          lambda2_abs=max(abs(top), abs(bot)),
                          iterations=matvec_count[0],
                          residual=max(res_top, res_bot))


def _check_connected(graph: CayleyGraph):
    n = graph.n_vertices
    seen = np.zeros(n, dtype=bool)
    seen[graph.identity_index] = True
    frontier = np.array([graph.identity_index], dtype=np.int64)
    # treat edges as undirected for the cover (spectral analysis expects a
    # symmetric set anyway)
    inv_perms = [np.argsort(perm) for perm in graph.perms]
    while frontier.size:
        nxt = []
        for perm in graph.perms + inv_perms:
            cand = perm[frontier]
            fresh = cand[~seen[cand]]
            if fresh.size:
                seen[fresh] = True
                nxt.append(fresh)
        frontier = np.unique(np.concatenate(nxt)) if nxt else np.array([], dtype=np.int64)
    if not seen.all():
        raise NotConnected("generator set does not generate the group")
