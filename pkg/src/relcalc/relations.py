"""The calculus of linear relations.

A linear relation from H to K is identified with its graph, a canonical
subspace of H (+) K.  Multivalued parts, non-dense domains and purely
multivalued relations are all first-class citizens here; an operator is
just a relation with trivial multivalued part.  At finite dimension every
relation is closed, so closure is the identity map; it is still exposed so
that double-adjoint formulas transcribe verbatim and the degeneracy is
asserted rather than hidden.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import AmbientMismatchError, PreconditionError
from .linalg import Mat, Vec, hstack, kernel, ldl_psd_certificate, rat, solve, vec
from .spaces import (
    InnerProductSpace,
    ProductSpace,
    Subspace,
    contains,
    gram_on,
    intersect,
    project,
    span,
    subspace_sum,
)


@dataclass(frozen=True)
class LinearRelation:
    """A (possibly multivalued, possibly non-densely-defined) linear relation."""

    src: InnerProductSpace
    dst: InnerProductSpace
    graph: Subspace

    def __post_init__(self) -> None:
        expected = ProductSpace(self.src, self.dst).space
        if self.graph.space != expected:
            raise ValueError("graph must live in the product of src and dst")

    @property
    def product(self) -> ProductSpace:
        return ProductSpace(self.src, self.dst)

    def pairs(self) -> list[tuple[Vec, Vec]]:
        """Graph basis as (first, second) component pairs."""
        prod = self.product
        return [prod.split(col) for col in self.graph.basis_vectors()]

    def graph_dim(self) -> int:
        return self.graph.dim

    def is_extension_of(self, other: "LinearRelation") -> bool:
        _same_spaces(self, other)
        return contains(self.graph, other.graph)


@dataclass(frozen=True)
class RelationParts:
    dom: Subspace
    ran: Subspace
    ker: Subspace
    mul: Subspace


def _same_spaces(a: LinearRelation, b: LinearRelation) -> None:
    if a.src != b.src or a.dst != b.dst:
        raise AmbientMismatchError("relations act between different spaces")


def relation_from_pairs(
    src: InnerProductSpace,
    dst: InnerProductSpace,
    pairs: Iterable[tuple[Sequence[Fraction], Sequence[Fraction]]],
) -> LinearRelation:
    prod = ProductSpace(src, dst)
    return LinearRelation(src, dst, span(prod.space, [prod.embed(f, g) for f, g in pairs]))


def relation_from_graph_vectors(
    src: InnerProductSpace, dst: InnerProductSpace, vectors: Iterable[Sequence[Fraction]]
) -> LinearRelation:
    prod = ProductSpace(src, dst)
    return LinearRelation(src, dst, span(prod.space, [vec(v) for v in vectors]))


def operator_relation(src: InnerProductSpace, dst: InnerProductSpace, matrix: Mat, domain: Subspace | None = None) -> LinearRelation:
    """Graph of x -> matrix @ x, restricted to ``domain`` when given."""
    if matrix.rows != dst.dim or matrix.cols != src.dim:
        raise ValueError("operator matrix shape does not match spaces")
    if domain is None:
        from .spaces import full_subspace

        domain = full_subspace(src)
    basis = domain.basis_vectors()
    return relation_from_pairs(src, dst, [(b, matrix.mul_vec(b)) for b in basis])


def identity_relation(space: InnerProductSpace) -> LinearRelation:
    pairs = []
    for i in range(space.dim):
        e = tuple(Fraction(1) if j == i else Fraction(0) for j in range(space.dim))
        pairs.append((e, e))
    return relation_from_pairs(space, space, pairs)


def zero_relation(src: InnerProductSpace, dst: InnerProductSpace) -> LinearRelation:
    return relation_from_pairs(src, dst, [])


def product_relation(x: Subspace, y: Subspace) -> LinearRelation:
    """The relation X x Y, whose graph is all pairs {x, y}."""
    src, dst = x.space, y.space
    pairs = [(b, dst.zero_vec()) for b in x.basis_vectors()]
    pairs += [(src.zero_vec(), b) for b in y.basis_vectors()]
    return relation_from_pairs(src, dst, pairs)


@lru_cache(maxsize=None)
def parts(t: LinearRelation) -> RelationParts:
    cols = t.graph.basis
    n = t.src.dim
    firsts = Mat(n, cols.cols, tuple(cols.data[:n]))
    seconds = Mat(t.dst.dim, cols.cols, tuple(cols.data[n:]))
    dom = span(t.src, [firsts.col(j) for j in range(firsts.cols)])
    ran = span(t.dst, [seconds.col(j) for j in range(seconds.cols)])
    # mul: combinations of graph vectors with vanishing first component.
    mul_combos = kernel(firsts)
    mul = span(t.dst, [seconds.mul_vec(mul_combos.col(j)) for j in range(mul_combos.cols)])
    ker_combos = kernel(seconds)
    ker = span(t.src, [firsts.mul_vec(ker_combos.col(j)) for j in range(ker_combos.cols)])
    return RelationParts(dom=dom, ran=ran, ker=ker, mul=mul)


def lift(t: LinearRelation, x: Sequence[Fraction]) -> Vec:
    """Some g with {x, g} in t; requires x in dom t."""
    cols = t.graph.basis
    n = t.src.dim
    firsts = Mat(n, cols.cols, tuple(cols.data[:n]))
    seconds = Mat(t.dst.dim, cols.cols, tuple(cols.data[n:]))
    combo = solve(firsts, vec(x))
    if combo is None:
        raise PreconditionError("vector is not in the domain of the relation")
    return seconds.mul_vec(combo)


@lru_cache(maxsize=None)
def adjoint(t: LinearRelation) -> LinearRelation:
    """T* = {{h, k} : (g, h)_K = (f, k)_H for all {f, g} in T}.

    Both Gram matrices enter the pairing; with weighted codomains this is
    what makes the dual-pair identities hold exactly.
    """
    n, m = t.src.dim, t.dst.dim
    cols = t.graph.basis
    firsts = Mat(n, cols.cols, tuple(cols.data[:n]))
    seconds = Mat(m, cols.cols, tuple(cols.data[n:]))
    pairing = hstack((seconds.T @ t.dst.gram), (firsts.T @ t.src.gram).scale(-1))
    sol = kernel(pairing)  # columns are [h | k] with h in dst, k in src
    prod = ProductSpace(t.dst, t.src)
    return LinearRelation(t.dst, t.src, span(prod.space, [sol.col(j) for j in range(sol.cols)]))


@lru_cache(maxsize=None)
def inverse(t: LinearRelation) -> LinearRelation:
    prod = t.product
    swapped = [(g, f) for f, g in t.pairs()]
    return relation_from_pairs(t.dst, t.src, swapped)


@lru_cache(maxsize=None)
def shift(t: LinearRelation, c: Fraction | int | str) -> LinearRelation:
    """shift(T, c) = {{f, g + c f}}, so T - c is shift(T, -c)."""
    if t.src != t.dst:
        raise PreconditionError("shift requires equal source and target spaces")
    c = rat(c)
    return relation_from_pairs(t.src, t.dst, [(f, tuple(x + c * y for x, y in zip(g, f))) for f, g in t.pairs()])


def scale(t: LinearRelation, a: Fraction | int | str) -> LinearRelation:
    a = rat(a)
    return relation_from_pairs(t.src, t.dst, [(f, tuple(a * x for x in g)) for f, g in t.pairs()])


def closure(t: LinearRelation) -> LinearRelation:
    """Closure of the graph; the identity at finite dimension, asserted."""
    assert adjoint(adjoint(t)) == t
    return t


@lru_cache(maxsize=None)
def compose(r: LinearRelation, t: LinearRelation) -> LinearRelation:
    """R after T: {{f, g} : exists k with {f, k} in T and {k, g} in R}.

    Computed by intersecting T (+) L with H (+) R inside H (+) K (+) L and
    projecting out the middle coordinates.  Exact, no tolerance anywhere.
    """
    if t.dst != r.src:
        raise AmbientMismatchError("compose requires target of T to equal source of R")
    h, k, l = t.src, t.dst, r.dst
    triple = ProductSpace(ProductSpace(h, k).space, l).space
    a_cols = []
    for f, g in t.pairs():
        a_cols.append(vec(f) + vec(g) + l.zero_vec())
    for i in range(l.dim):
        e = tuple(Fraction(1) if j == i else Fraction(0) for j in range(l.dim))
        a_cols.append(h.zero_vec() + k.zero_vec() + e)
    b_cols = []
    for i in range(h.dim):
        e = tuple(Fraction(1) if j == i else Fraction(0) for j in range(h.dim))
        b_cols.append(e + k.zero_vec() + l.zero_vec())
    for f, g in r.pairs():
        b_cols.append(h.zero_vec() + vec(f) + vec(g))
    meet = intersect(span(triple, a_cols), span(triple, b_cols))
    out_pairs = []
    for v in meet.basis_vectors():
        f = v[: h.dim]
        g = v[h.dim + k.dim :]
        out_pairs.append((f, g))
    return relation_from_pairs(h, l, out_pairs)


@lru_cache(maxsize=None)
def hsum(a: LinearRelation, b: LinearRelation) -> LinearRelation:
    """Graph sum: the span of the union of the two graphs."""
    _same_spaces(a, b)
    return LinearRelation(a.src, a.dst, subspace_sum(a.graph, b.graph))


@lru_cache(maxsize=None)
def rel_sum(a: LinearRelation, b: LinearRelation) -> LinearRelation:
    """Componentwise sum {{f, g + h} : {f, g} in A, {f, h} in B}.

    This is the operator-style sum (shared first component), not the graph
    span; it is the sum under which a relation recombines from its regular
    and singular parts.
    """
    _same_spaces(a, b)
    h, k = a.src, a.dst
    triple = ProductSpace(ProductSpace(h, k).space, k).space
    u_cols = [vec(f) + vec(g) + k.zero_vec() for f, g in a.pairs()]
    for i in range(k.dim):
        e = tuple(Fraction(1) if j == i else Fraction(0) for j in range(k.dim))
        u_cols.append(h.zero_vec() + k.zero_vec() + e)
    v_cols = [vec(f) + k.zero_vec() + vec(g) for f, g in b.pairs()]
    for i in range(k.dim):
        e = tuple(Fraction(1) if j == i else Fraction(0) for j in range(k.dim))
        v_cols.append(h.zero_vec() + e + k.zero_vec())
    meet = intersect(span(triple, u_cols), span(triple, v_cols))
    out = []
    for w in meet.basis_vectors():
        f = w[: h.dim]
        g = tuple(x + y for x, y in zip(w[h.dim : h.dim + k.dim], w[h.dim + k.dim :]))
        out.append((f, g))
    return relation_from_pairs(h, k, out)


@lru_cache(maxsize=None)
def restrict_domain(t: LinearRelation, d: Subspace) -> LinearRelation:
    """T restricted to D: graph elements whose first component lies in D."""
    if d.space != t.src:
        raise AmbientMismatchError("restriction subspace must live in the source space")
    window_cols = [vec(b) + t.dst.zero_vec() for b in d.basis_vectors()]
    for i in range(t.dst.dim):
        e = tuple(Fraction(1) if j == i else Fraction(0) for j in range(t.dst.dim))
        window_cols.append(t.src.zero_vec() + e)
    window = span(t.graph.space, window_cols)
    return LinearRelation(t.src, t.dst, intersect(t.graph, window))


@lru_cache(maxsize=None)
def regular_part(t: LinearRelation) -> LinearRelation:
    """(I - P) T with P the orthogonal projection onto mul T; an operator."""
    mul = parts(t).mul
    out = [(f, tuple(x - y for x, y in zip(g, project(g, mul)))) for f, g in t.pairs()]
    return relation_from_pairs(t.src, t.dst, out)


@lru_cache(maxsize=None)
def singular_part(t: LinearRelation) -> LinearRelation:
    mul = parts(t).mul
    out = [(f, project(g, mul)) for f, g in t.pairs()]
    return relation_from_pairs(t.src, t.dst, out)


@lru_cache(maxsize=None)
def eigenspace(t: LinearRelation, c: Fraction | int | str) -> Subspace:
    """ker(T - c) = {h : {h, c h} in T} as a subspace of the source space."""
    if t.src != t.dst:
        raise PreconditionError("eigenspace requires equal source and target spaces")
    c = rat(c)
    cols = t.graph.basis
    n = t.src.dim
    firsts = Mat(n, cols.cols, tuple(cols.data[:n]))
    seconds = Mat(n, cols.cols, tuple(cols.data[n:]))
    condition = seconds - firsts.scale(c)
    combos = kernel(condition)
    return span(t.src, [firsts.mul_vec(combos.col(j)) for j in range(combos.cols)])


@lru_cache(maxsize=None)
def eigen_relation(t: LinearRelation, c: Fraction | int | str) -> LinearRelation:
    """The graph {{h, c h} : h in ker(T - c)}."""
    c = rat(c)
    ev = eigenspace(t, c)
    return relation_from_pairs(t.src, t.src, [(h, tuple(c * x for x in h)) for h in ev.basis_vectors()])


def is_symmetric(s: LinearRelation) -> bool:
    if s.src != s.dst:
        raise PreconditionError("symmetry requires equal source and target spaces")
    return adjoint(s).is_extension_of(s)


def is_selfadjoint(s: LinearRelation) -> bool:
    if s.src != s.dst:
        raise PreconditionError("selfadjointness requires equal source and target spaces")
    return adjoint(s) == s


def form_matrix_on_domain(s: LinearRelation) -> tuple[Subspace, Mat]:
    """Domain of s and the matrix (phi_i', phi_j) in its canonical basis.

    Requires mul s to be orthogonal to dom s so the value is independent of
    the chosen graph lifts; that independence is what makes the quadratic
    form of a relation well defined.
    """
    p = parts(s)
    dom = p.dom
    lifts = [lift(s, b) for b in dom.basis_vectors()]
    if not (p.mul.basis.T @ s.src.gram @ dom.basis).is_zero():
        raise PreconditionError("mul S is not orthogonal to dom S: the form of S is not well defined")
    entries = [[s.src.inner(lifts[i], dom.basis.col(j)) for j in range(dom.dim)] for i in range(dom.dim)]
    return dom, Mat(dom.dim, dom.dim, tuple(tuple(r) for r in entries))


@dataclass(frozen=True)
class SemiboundedCheck:
    ok: bool
    witness: tuple[Vec, Vec] | None  # a graph element violating the bound


@lru_cache(maxsize=None)
def is_nonneg_above(s: LinearRelation, c: Fraction | int | str) -> SemiboundedCheck:
    """Decide (phi', phi) >= c (phi, phi) over the whole graph of s.

    On failure the witness is an explicit graph element {phi, phi'} with
    (phi', phi) < c (phi, phi).
    """
    if s.src != s.dst:
        raise PreconditionError("semiboundedness requires equal source and target spaces")
    c = rat(c)
    p = parts(s)
    cross = p.mul.basis.T @ s.src.gram @ p.dom.basis
    if not cross.is_zero():
        # Some m in mul S is not orthogonal to some phi in dom S; adding a
        # large multiple of m to a lift of phi drives the pairing below any
        # bound.
        i, j = next((i, j) for i in range(cross.rows) for j in range(cross.cols) if cross.data[i][j] != 0)
        m = p.mul.basis.col(i)
        phi = p.dom.basis.col(j)
        base = lift(s, phi)
        pairing = cross.data[i][j]
        norm2 = s.src.inner(phi, phi)
        # Choose t with (base + t m, phi) < c (phi, phi).
        t = -(s.src.inner(base, phi) - c * norm2 + 1) / pairing
        bad = tuple(x + t * y for x, y in zip(base, m))
        return SemiboundedCheck(False, (phi, bad))
    dom, form = form_matrix_on_domain(s)
    sym = (form + form.T).scale(Fraction(1, 2))
    res = ldl_psd_certificate(sym - gram_on(dom).scale(c))
    if res.ok:
        return SemiboundedCheck(True, None)
    v = res.counterexample
    phi = dom.basis.mul_vec(v)
    return SemiboundedCheck(False, (phi, lift(s, phi)))


def numerical_range_zero(s: LinearRelation) -> bool:
    """W(S) = {0}, equivalently dom S orthogonal to ran S."""
    if s.src != s.dst:
        raise PreconditionError("numerical range requires equal source and target spaces")
    p = parts(s)
    return (p.dom.basis.T @ s.src.gram @ p.ran.basis).is_zero()
