"""Bundled fixtures and seeded generators of random test instances."""
from __future__ import annotations

import random
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import linalg as la
from .algebra import NilpotentLieAlgebra, change_basis, structure_from_brackets, validate_algebra
from .graphs import DirectedGraph, build_algebra, derivation_from_weights
from .invariants import HeintzeData, make_heintze
from .spectral import validate_derivation

FIXTURE_NAMES = ("gamma1", "gamma2", "heisenberg-diag", "heisenberg-block")
PAIR_NAMES = ("pair-gamma", "pair-heisenberg")


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("heintze") / "fixtures" / f"{name}.json"))


def load_fixture(name: str):
    from .io import parse_any

    return parse_any(str(fixture_path(name)))


def fixtures() -> list[HeintzeData]:
    return [load_fixture(n) for n in FIXTURE_NAMES]


def random_rational(rng: random.Random, lo: int = 1, hi: int = 6, max_den: int = 3) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_vector(rng: random.Random, n: int, bound: int = 5, max_den: int = 4) -> tuple:
    return tuple(Fraction(rng.randint(-bound, bound), rng.randint(1, max_den)) for _ in range(n))


def random_graph(rng: random.Random, max_vertices: int = 5) -> DirectedGraph:
    p = rng.randint(2, max_vertices)
    edges = []
    for s in range(p):
        for t in range(s + 1, p):
            if rng.random() < 0.5:
                edges.append((s, t) if rng.random() < 0.5 else (t, s))
    if not edges:
        edges.append((0, 1))
    rng.shuffle(edges)
    return DirectedGraph(p, tuple(edges))


def random_graph_instance(rng: random.Random, max_vertices: int = 5) -> HeintzeData:
    g = random_graph(rng, max_vertices)
    a = build_algebra(g)
    w = [random_rational(rng) for _ in range(g.vertex_count)]
    return make_heintze(a, derivation_from_weights(g, w, a), "graph")


def heisenberg_sum(n: int, p: int = 0) -> NilpotentLieAlgebra:
    """``k_n + R^p`` with basis ``X_1..X_n, Y_1..Y_n, Z, R_1..R_p``."""
    triples = [(i, n + i, 2 * n, 1) for i in range(n)]
    labels = [f"X{i + 1}" for i in range(n)] + [f"Y{i + 1}" for i in range(n)] + ["Z"]
    labels += [f"R{i + 1}" for i in range(p)]
    return validate_algebra(structure_from_brackets(2 * n + 1 + p, triples), labels)


def random_class_c_derivation(rng: random.Random, n: int, p: int = 0, jordan: bool = True) -> HeintzeData:
    """Random derivation of ``k_n + R^p`` with rational positive spectrum.

    On ``span(X, Y)`` the matrix is ``[[B, S], [0, cI - B^T]]`` with ``B``
    upper triangular and ``S`` symmetric; ``Z`` goes to ``cZ``; the ``R``
    block is upper triangular and may leak into ``Z``.
    """
    a = heisenberg_sum(n, p)
    dim = a.dim
    m = [[Fraction(0)] * dim for _ in range(dim)]
    pool = [Fraction(1), Fraction(3, 2), Fraction(2)]
    diag = [rng.choice(pool) if jordan else random_rational(rng, 1, 4) for _ in range(n)]
    diag.sort()
    # c = 2 max(B) lets S couple equal eigenvalues into Jordan blocks
    c = 2 * max(diag) if jordan and rng.random() < 0.6 else max(diag) + random_rational(rng, 1, 3)
    for i in range(n):
        m[i][i] = diag[i]
        for j in range(i + 1, n):
            if jordan and diag[j] == diag[i]:
                m[i][j] = Fraction(rng.choice((0, 1)))
            elif rng.random() < 0.3:
                m[i][j] = random_rational(rng, -2, 2)
    for i in range(n):
        for j in range(i, n):
            s = Fraction(rng.choice((0, 0, 1))) if jordan else Fraction(0)
            m[i][n + j] = m[j][n + i] = s
    for i in range(n):
        for j in range(n):
            m[n + i][n + j] = (c if i == j else Fraction(0)) - m[j][i]
    z = 2 * n
    m[z][z] = c
    for j in range(2 * n):
        if rng.random() < 0.3:
            m[z][j] = random_rational(rng, -2, 2)
    for r in range(p):
        col = z + 1 + r
        m[col][col] = random_rational(rng, 1, 4)
        for r2 in range(r):
            if rng.random() < 0.4:
                m[z + 1 + r2][col] = Fraction(rng.choice((0, 1)))
        if rng.random() < 0.3:
            m[z][col] = random_rational(rng, -1, 1)
    mat = tuple(tuple(row) for row in m)
    return make_heintze(a, validate_derivation(a, mat), f"classC-{n}-{p}")


def random_basis_change(rng: random.Random, n: int) -> tuple:
    """Product of unit lower and upper triangular integer matrices (always invertible)."""
    lower = [[Fraction(1) if i == j else (Fraction(rng.randint(-2, 2)) if i > j else Fraction(0)) for j in range(n)]
             for i in range(n)]
    upper = [[Fraction(1) if i == j else (Fraction(rng.randint(-2, 2)) if i < j else Fraction(0)) for j in range(n)]
             for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    pm = [[Fraction(int(perm[i] == j)) for j in range(n)] for i in range(n)]
    return la.matmul(la.matmul(pm, lower), upper)


def rebase(h: HeintzeData, p) -> HeintzeData:
    """The same Heintze group written in the basis given by the columns of ``p``."""
    a = change_basis(h.algebra, p)
    m = la.matmul(la.matmul(la.inverse(p), h.derivation.matrix), p)
    return make_heintze(a, validate_derivation(a, m), h.name)


def strictly_upper_triangular(n: int) -> NilpotentLieAlgebra:
    """Matrices ``E_ij`` (i < j) under the commutator; nilpotency class ``n - 1``."""
    idx = [(i, j) for i in range(n) for j in range(i + 1, n)]
    pos = {e: k for k, e in enumerate(idx)}
    triples = []
    for u, (i, j) in enumerate(idx):
        for v, (k, l) in enumerate(idx):
            if u < v:
                if j == k:
                    triples.append((u, v, pos[(i, l)], 1))
                if l == i:
                    triples.append((u, v, pos[(k, j)], -1))
    labels = [f"E{i + 1}{j + 1}" for i, j in idx]
    return validate_algebra(structure_from_brackets(len(idx), triples), labels)


def random_heintze(rng: random.Random) -> HeintzeData:
    """One random valid Heintze group from a mix of families."""
    kind = rng.randrange(3)
    if kind == 0:
        h = random_graph_instance(rng)
    else:
        h = random_class_c_derivation(rng, rng.randint(1, 2), rng.randint(0, 1), jordan=kind == 1)
    if rng.random() < 0.5:
        h = rebase(h, random_basis_change(rng, h.dim))
    return h


def class_c_corpus(seed: int = 0, count: int = 12) -> list[HeintzeData]:
    rng = random.Random(seed)
    out = [load_fixture("heisenberg-diag"), load_fixture("heisenberg-block")]
    for k in range(count):
        out.append(random_class_c_derivation(rng, 1 + k % 3, k % 2, jordan=k % 4 != 3))
    return out


def heintze_corpus(seed: int = 0, graphs: int = 10) -> list[HeintzeData]:
    rng = random.Random(seed)
    out = fixtures()
    out += [random_graph_instance(rng) for _ in range(graphs)]
    out += class_c_corpus(seed, 6)[2:]
    return out
