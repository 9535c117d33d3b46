"""Quasi-isometry invariants of purely real Heintze groups and the pairwise verdict."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .algebra import (
    NilpotentLieAlgebra,
    center,
    derived_subalgebra,
    is_ideal,
    lie_span,
    normalizer_chain,
    quotient,
    subalgebra,
)
from .errors import NonPositiveEigenvalue
from .polynomial import Polynomial, factored_string
from .spectral import (
    Derivation,
    EigenDecomposition,
    JordanData,
    char_poly,
    eigen_decomposition,
    jordan_data,
    validate_derivation,
)
from .subspace import Subspace


@dataclass(frozen=True)
class HeintzeData:
    algebra: NilpotentLieAlgebra
    derivation: Derivation
    eigen: EigenDecomposition
    jordan: JordanData
    trace: Fraction
    name: str = field(default="", compare=False)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def smallest_eigenvalue(self) -> Fraction:
        return self.eigen.eigenvalues[0]

    @property
    def largest_eigenvalue(self) -> Fraction:
        return self.eigen.eigenvalues[-1]

    def char_poly(self) -> Polynomial:
        return char_poly(self.derivation.matrix)

    def eigenvalue_list(self) -> list:
        return [lam for lam, k in zip(self.eigen.eigenvalues, self.eigen.multiplicities) for _ in range(k)]

    def is_diagonalizable(self) -> bool:
        return all(max(sizes) == 1 for _, sizes in self.jordan.blocks)


def make_heintze(a: NilpotentLieAlgebra, d, name: str = "") -> HeintzeData:
    """Validate the Heintze condition (all eigenvalues rational and positive)."""
    if not isinstance(d, Derivation):
        d = validate_derivation(a, d)
    eig = eigen_decomposition(d)
    for lam in eig.eigenvalues:
        if lam <= 0:
            raise NonPositiveEigenvalue(lam)
    return HeintzeData(a, d, eig, jordan_data(d), la.trace(d.matrix), name)


def scale_heintze(h: HeintzeData, s) -> HeintzeData:
    s = la.to_fraction(s)
    if s <= 0:
        raise ValueError("scale must be positive")
    eig = EigenDecomposition(
        tuple(lam * s for lam in h.eigen.eigenvalues), h.eigen.spaces, h.eigen.multiplicities
    )
    return HeintzeData(
        h.algebra, h.derivation.scaled(s), eig, h.jordan.scaled(s), h.trace * s, h.name
    )


def eigenspace(h: HeintzeData, lam=None) -> Subspace:
    """True eigenspace ``ker(alpha - lam)``; defaults to the smallest eigenvalue."""
    lam = h.smallest_eigenvalue if lam is None else lam
    return Subspace.span(h.dim, la.nullspace(la.shift(h.derivation.matrix, lam), h.dim))


def is_carnot_type(h: HeintzeData) -> bool:
    return lie_span(h.algebra, eigenspace(h).basis).is_full()


def u_alpha(h: HeintzeData) -> Subspace:
    """Subalgebra generated by the generalized eigenspace of the smallest eigenvalue."""
    return lie_span(h.algebra, h.eigen.spaces[0].basis)


def top_eigenvectors(h: HeintzeData) -> Subspace:
    """Span of smallest-eigenvalue eigenvectors heading Jordan blocks of maximal size."""
    lam = h.smallest_eigenvalue
    chains = [c for c in h.jordan.chains if c.eigenvalue == lam]
    m = max(c.size for c in chains)
    return Subspace.span(h.dim, [c.vectors[0] for c in chains if c.size == m])


def h_alpha(h: HeintzeData) -> Subspace:
    return lie_span(h.algebra, top_eigenvectors(h).basis)


@dataclass(frozen=True)
class FoliationSubalgebras:
    u_alpha: Subspace
    h_alpha: Subspace
    carnot: bool

    @property
    def h_alpha_proper(self) -> bool:
        return not self.h_alpha.is_full()


def foliation_subalgebras(h: HeintzeData) -> FoliationSubalgebras:
    """Both subalgebras plus the Carnot flag (for Carnot inputs they need not be proper)."""
    return FoliationSubalgebras(u_alpha(h), h_alpha(h), is_carnot_type(h))


def normalize_scale(h1: HeintzeData, h2: HeintzeData):
    s = h1.smallest_eigenvalue / h2.smallest_eigenvalue
    return h1, (h2 if s == 1 else scale_heintze(h2, s)), s


def jump_set(h: HeintzeData) -> list:
    return sorted({h.trace / lam for lam in h.eigen.eigenvalues})


@dataclass(frozen=True)
class SpectrumProfile:
    """Dimensions on the open intervals ``(1, j_1), (j_1, j_2), ..., (j_last, inf)``."""

    jump_points: tuple
    dims: tuple

    def evaluate(self, p) -> int:
        p = la.to_fraction(p) if not isinstance(p, Fraction) else p
        if p < 1:
            raise ValueError("p must lie in [1, inf)")
        if p in self.jump_points:
            raise ValueError(f"p = {la.format_fraction(p)} is a jump point; no value assigned")
        idx = sum(1 for j in self.jump_points if j < p)
        return self.dims[idx]

    def to_dict(self) -> dict:
        return {
            "jump_points": [la.format_fraction(j) for j in self.jump_points],
            "dims": list(self.dims),
        }


def _profile_dim(h: HeintzeData, p: Fraction) -> int:
    cutoff = h.trace / p
    gens = [b for lam, s in zip(h.eigen.eigenvalues, h.eigen.spaces) if lam < cutoff for b in s.basis]
    return h.dim - lie_span(h.algebra, gens).dim


def spectrum_profile(h: HeintzeData) -> SpectrumProfile:
    """Codimension of the subalgebra generated by the eigenspaces with ``lam < tr/p``.

    Evaluated at exact midpoints of the intervals cut out by the candidate
    jump points; neighbouring intervals with equal values are merged.
    """
    cands = [j for j in jump_set(h) if j > 1]
    edges = [Fraction(1)] + cands
    samples = [(lo + hi) / 2 for lo, hi in zip(edges, edges[1:])] + [edges[-1] + 1]
    dims = [_profile_dim(h, p) for p in samples]
    jumps, merged = [], [dims[0]]
    for j, d in zip(cands, dims[1:]):
        if d != merged[-1]:
            jumps.append(j)
            merged.append(d)
    return SpectrumProfile(tuple(jumps), tuple(merged))


def is_heisenberg(a: NilpotentLieAlgebra) -> bool:
    if a.dim < 3 or a.dim % 2 == 0:
        return False
    z = center(a)
    if z.dim != 1 or derived_subalgebra(a) != z:
        return False
    zrow = z.basis[0]
    piv = z.pivots[0]
    comp = z.complement_indices()
    form = [[a.structure[i][j][piv] / zrow[piv] for j in comp] for i in comp]
    return la.rank(form) == len(comp)


def is_abelian(a: NilpotentLieAlgebra) -> bool:
    return a.is_abelian()


# Verdict outcome tags
CARNOT_TYPE = "CarnotType"
CHAR_POLY = "CharPoly"
JORDAN_FORM = "JordanForm"
SPECTRUM_PROFILE = "SpectrumProfile"
NOT_DISTINGUISHED = "NotDistinguished"


@dataclass
class Verdict:
    outcome: str
    normalization: Fraction
    evidence: dict
    notes: list = field(default_factory=list)

    @property
    def distinguished(self) -> bool:
        return self.outcome != NOT_DISTINGUISHED

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome if not self.distinguished else f"DistinguishedBy({self.outcome})",
            "tag": self.outcome,
            "normalization": la.format_fraction(self.normalization),
            "evidence": self.evidence,
            "notes": list(self.notes),
        }


def _poly_evidence(h: HeintzeData) -> dict:
    p = h.char_poly()
    roots = list(zip(h.eigen.eigenvalues, h.eigen.multiplicities))
    return {"coefficients": p.to_strings(), "factored": factored_string(roots)}


def _same_family(h1: HeintzeData, h2: HeintzeData) -> str | None:
    if h1.algebra.is_abelian() and h2.algebra.is_abelian() and h1.dim == h2.dim:
        return "abelian"
    if is_heisenberg(h1.algebra) and is_heisenberg(h2.algebra) and h1.dim == h2.dim:
        return "heisenberg"
    return None


def compare(h1: HeintzeData, h2: HeintzeData) -> Verdict:
    """Run the invariant pipeline; a negative answer never asserts quasi-isometry.

    Within the abelian and Heisenberg families the Jordan form is itself an
    invariant, so a Jordan mismatch under equal normalized characteristic
    polynomials is reported as such even when the Carnot flags also differ.
    """
    c1, c2 = is_carnot_type(h1), is_carnot_type(h2)
    evidence = {"carnot": [c1, c2]}
    notes = []
    family = _same_family(h1, h2)
    g1, g2, s = normalize_scale(h1, h2)
    if c1 != c2:
        if family and g1.char_poly() == g2.char_poly() and g1.jordan != g2.jordan:
            evidence["char_poly"] = [_poly_evidence(g1), _poly_evidence(g2)]
            evidence["jordan"] = [g1.jordan.to_dict(), g2.jordan.to_dict()]
            evidence["jordan_family"] = family
            notes.append("the Carnot flags differ as well; the Jordan form is the finer invariant here")
            return Verdict(JORDAN_FORM, s, evidence, notes)
        return Verdict(CARNOT_TYPE, Fraction(1), evidence, notes)
    if c1 and c2:
        notes.append(
            "both groups are of Carnot type: quasi-isometric Carnot-type groups are isomorphic, "
            "so an algebra isomorphism test (not provided) is the decisive tool"
        )
    p1, p2 = _poly_evidence(g1), _poly_evidence(g2)
    evidence["char_poly"] = [p1, p2]
    if g1.char_poly() != g2.char_poly():
        return Verdict(CHAR_POLY, s, evidence, notes)
    if family:
        evidence["jordan"] = [g1.jordan.to_dict(), g2.jordan.to_dict()]
        evidence["jordan_family"] = family
        if g1.jordan != g2.jordan:
            return Verdict(JORDAN_FORM, s, evidence, notes)
    else:
        notes.append("Jordan forms are only compared for abelian or Heisenberg pairs")
    prof1, prof2 = spectrum_profile(g1), spectrum_profile(g2)
    evidence["profile"] = [prof1.to_dict(), prof2.to_dict()]
    if prof1 != prof2:
        return Verdict(SPECTRUM_PROFILE, s, evidence, notes)
    notes.append("no implemented invariant separates the pair; this is not a quasi-isometry claim")
    return Verdict(NOT_DISTINGUISHED, s, evidence, notes)


@dataclass
class TowerNode:
    """One step of the characteristic-polynomial induction: split along an invariant ideal."""

    dim: int
    char_poly: Polynomial
    carnot: bool
    chain_length: int = 0
    ideal_dim: int = 0
    multiplicative: bool | None = None
    sub: "TowerNode | None" = None
    quot: "TowerNode | None" = None

    def all_multiplicative(self) -> bool:
        ok = self.multiplicative is not False
        for child in (self.sub, self.quot):
            if child is not None:
                ok = ok and child.all_multiplicative()
        return ok

    def count_splits(self) -> int:
        n = int(self.multiplicative is not None)
        return n + sum(c.count_splits() for c in (self.sub, self.quot) if c is not None)


def split_along_ideal(a: NilpotentLieAlgebra, d: Derivation, k: Subspace):
    """Restricted and induced derivations for an invariant ideal ``k``."""
    sub = subalgebra(a, k)
    restricted = validate_derivation(sub.algebra, sub.restrict(d.matrix))
    q = quotient(a, k)
    induced = validate_derivation(q.algebra, q.induced(d.matrix)) if q.algebra.dim else None
    return restricted, induced


def multiplicativity_holds(d: Derivation, k: Subspace) -> bool:
    """``p_alpha == p_restricted * p_induced`` along an alpha-invariant ideal."""
    restricted, induced = split_along_ideal(d.algebra, d, k)
    prod = char_poly(restricted.matrix)
    if induced is not None:
        prod = prod * char_poly(induced.matrix)
    return prod == char_poly(d.matrix)


def invariant_tower(a: NilpotentLieAlgebra, d: Derivation, depth: int = 0) -> TowerNode:
    """Recursively split along the penultimate normalizer of the foliation subalgebra."""
    h = make_heintze(a, d)
    node = TowerNode(a.dim, h.char_poly(), is_carnot_type(h))
    if a.dim <= 1 or depth > 64:
        return node
    start = h_alpha(h)
    if start.is_full():
        start = u_alpha(h)
    if start.is_full():
        return node
    chain = normalizer_chain(a, start)
    ideal = chain[-2]
    if not (is_ideal(a, ideal) and ideal.is_invariant(d.matrix)):
        raise AssertionError("internal: penultimate normalizer is not an invariant ideal")
    restricted, induced = split_along_ideal(a, d, ideal)
    node.chain_length = len(chain) - 1
    node.ideal_dim = ideal.dim
    node.multiplicative = multiplicativity_holds(d, ideal)
    node.sub = invariant_tower(restricted.algebra, restricted, depth + 1)
    if induced is not None:
        node.quot = invariant_tower(induced.algebra, induced, depth + 1)
    return node


def invariant_ideals_in_chains(h: HeintzeData) -> list:
    """Every alpha-invariant proper nonzero ideal met in the normalizer chains of u_alpha and h_alpha."""
    seen = []
    for start in (h_alpha(h), u_alpha(h)):
        if start.is_full():
            continue
        for sp in normalizer_chain(h.algebra, start):
            if sp.is_full() or sp.is_zero() or sp in seen:
                continue
            if is_ideal(h.algebra, sp) and sp.is_invariant(h.derivation.matrix):
                seen.append(sp)
    return seen


def describe_eigenvalues(values: Sequence) -> list:
    return [la.format_fraction(v) for v in values]
