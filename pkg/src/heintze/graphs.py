"""Two-step nilpotent Lie algebras attached to simple directed graphs."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .algebra import NilpotentLieAlgebra, structure_from_brackets, validate_algebra
from .errors import InputError, TooLarge
from .spectral import Derivation, validate_derivation

MAX_ISO_VERTICES = 12


@dataclass(frozen=True)
class DirectedGraph:
    vertex_count: int
    edges: tuple

    def __post_init__(self):
        edges = tuple((int(s), int(t)) for s, t in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.vertex_count < 1:
            raise InputError("a graph needs at least one vertex")
        seen = set()
        for s, t in edges:
            if not (0 <= s < self.vertex_count and 0 <= t < self.vertex_count):
                raise InputError(f"edge ({s + 1},{t + 1}) out of range")
            if s == t:
                raise InputError(f"loop at vertex {s + 1}")
            key = frozenset((s, t))
            if key in seen:
                raise InputError(f"duplicate edge between {s + 1} and {t + 1}")
            seen.add(key)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def undirected(self) -> frozenset:
        return frozenset(frozenset(e) for e in self.edges)

    def degrees(self) -> list:
        deg = [0] * self.vertex_count
        for s, t in self.edges:
            deg[s] += 1
            deg[t] += 1
        return deg


def graph_labels(g: DirectedGraph) -> tuple:
    return tuple(f"X{i + 1}" for i in range(g.vertex_count)) + tuple(
        f"Z{k + 1}" for k in range(g.edge_count)
    )


def build_algebra(g: DirectedGraph) -> NilpotentLieAlgebra:
    """``[X_i, X_j] = Z_k`` when ``e_k = (v_i, v_j)``; every other bracket vanishes."""
    p = g.vertex_count
    triples = [(s, t, p + k, 1) for k, (s, t) in enumerate(g.edges)]
    return validate_algebra(structure_from_brackets(p + g.edge_count, triples), graph_labels(g))


def derivation_from_weights(g: DirectedGraph, weights: Sequence, algebra: NilpotentLieAlgebra | None = None) -> Derivation:
    w = la.vec(weights)
    if len(w) != g.vertex_count:
        raise InputError("one weight per vertex required")
    if any(x <= 0 for x in w):
        raise InputError("vertex weights must be positive")
    diag = list(w) + [w[s] + w[t] for s, t in g.edges]
    n = len(diag)
    m = tuple(tuple(diag[i] if i == j else Fraction(0) for j in range(n)) for i in range(n))
    return validate_derivation(algebra or build_algebra(g), m)


def graph_isomorphic(g1: DirectedGraph, g2: DirectedGraph):
    """Isomorphism of the underlying undirected graphs.

    Returns ``(True, perm)`` with ``perm[i]`` the image of vertex ``i``, or
    ``(False, None)``.
    """
    if max(g1.vertex_count, g2.vertex_count) > MAX_ISO_VERTICES:
        raise TooLarge(f"graph isomorphism is capped at {MAX_ISO_VERTICES} vertices")
    if g1.vertex_count != g2.vertex_count or g1.edge_count != g2.edge_count:
        return False, None
    d1, d2 = g1.degrees(), g2.degrees()
    if sorted(d1) != sorted(d2):
        return False, None
    n = g1.vertex_count
    adj1 = [set() for _ in range(n)]
    adj2 = [set() for _ in range(n)]
    for s, t in g1.edges:
        adj1[s].add(t)
        adj1[t].add(s)
    for s, t in g2.edges:
        adj2[s].add(t)
        adj2[t].add(s)
    order = sorted(range(n), key=lambda v: -d1[v])
    perm = [-1] * n
    used = [False] * n

    def extend(pos: int) -> bool:
        if pos == n:
            return True
        v = order[pos]
        for cand in range(n):
            if used[cand] or d2[cand] != d1[v]:
                continue
            if any((perm[u] in adj2[cand]) != (u in adj1[v]) for u in order[:pos]):
                continue
            perm[v] = cand
            used[cand] = True
            if extend(pos + 1):
                return True
            used[cand] = False
            perm[v] = -1
        return False

    if not extend(0):
        return False, None
    mapped = frozenset(frozenset((perm[s], perm[t])) for s, t in g1.edges)
    if mapped != g2.undirected():
        raise AssertionError("internal: isomorphism witness failed verification")
    return True, tuple(perm)
