"""Inner-product spaces with explicit rational Gram matrices, and canonical
subspace arithmetic inside them.

A subspace is stored as the unique reduced row echelon basis of its span,
so subspace equality is plain data equality.  Orthogonal complements and
projections always go through the ambient Gram matrix: representing-map
codomains carry weighted inner products, and the weighted pairing is what
keeps every construction rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import AmbientMismatchError
from .linalg import (
    Mat,
    Vec,
    from_cols,
    hstack,
    identity,
    kernel,
    ldl_psd_certificate,
    block_diag,
    rref,
    solve,
    vec,
)


@dataclass(frozen=True)
class InnerProductSpace:
    """Finite-dimensional space with inner product (x, y) = x^T G y."""

    dim: int
    gram: Mat

    def __post_init__(self) -> None:
        if self.gram.rows != self.dim or self.gram.cols != self.dim:
            raise ValueError("Gram matrix must be dim x dim")
        if not self.gram.is_symmetric():
            raise ValueError("Gram matrix must be symmetric")
        res = ldl_psd_certificate(self.gram)
        if not res.ok or any(d == 0 for d in res.certificate.diag):
            raise ValueError("Gram matrix must be positive definite")

    def inner(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        gx = self.gram.mul_vec(x)
        return sum((a * b for a, b in zip(gx, y)), Fraction(0))

    def zero_vec(self) -> Vec:
        return tuple(Fraction(0) for _ in range(self.dim))


@lru_cache(maxsize=None)
def standard_space(dim: int) -> InnerProductSpace:
    return InnerProductSpace(dim, identity(dim))


@dataclass(frozen=True)
class ProductSpace:
    """H (+) K with the graph inner product: Gram is block diagonal."""

    left: InnerProductSpace
    right: InnerProductSpace

    @property
    def space(self) -> InnerProductSpace:
        return _product_ips(self.left, self.right)

    def embed(self, f: Sequence[Fraction], g: Sequence[Fraction]) -> Vec:
        if len(f) != self.left.dim or len(g) != self.right.dim:
            raise ValueError("component lengths do not match factors")
        return vec(f) + vec(g)

    def split(self, v: Sequence[Fraction]) -> tuple[Vec, Vec]:
        n = self.left.dim
        return vec(v[:n]), vec(v[n:])


@lru_cache(maxsize=None)
def _product_ips(left: InnerProductSpace, right: InnerProductSpace) -> InnerProductSpace:
    return InnerProductSpace(left.dim + right.dim, block_diag(left.gram, right.gram))


@dataclass(frozen=True)
class Subspace:
    """Canonical subspace of an ambient space.

    ``basis`` is dim x k with columns forming a basis.  The stored basis is
    the RREF of the transposed spanning set, which is unique per subspace:
    two Subspace values are equal iff they are the same subspace of the
    same ambient space.  The zero subspace has a 0-column basis.
    """

    space: InnerProductSpace
    basis: Mat

    def __post_init__(self) -> None:
        if self.basis.rows != self.space.dim:
            raise ValueError("basis vectors must live in the ambient space")

    @property
    def dim(self) -> int:
        return self.basis.cols

    def basis_vectors(self) -> list[Vec]:
        return [self.basis.col(j) for j in range(self.basis.cols)]

    def is_zero(self) -> bool:
        return self.basis.cols == 0


def span(space: InnerProductSpace, vectors: Iterable[Sequence[Fraction]]) -> Subspace:
    """Canonical subspace spanned by the given ambient vectors."""
    rows = [vec(v) for v in vectors]
    for r in rows:
        if len(r) != space.dim:
            raise ValueError("spanning vector has wrong length")
    if not rows:
        return Subspace(space, from_cols(space.dim, []))
    red, pivots = rref(Mat(len(rows), space.dim, tuple(rows)))
    cols = [red.row(i) for i in range(len(pivots))]
    return Subspace(space, from_cols(space.dim, cols))


def span_mat(space: InnerProductSpace, columns: Mat) -> Subspace:
    return span(space, [columns.col(j) for j in range(columns.cols)])


def zero_subspace(space: InnerProductSpace) -> Subspace:
    return span(space, [])


def full_subspace(space: InnerProductSpace) -> Subspace:
    return span(space, identity(space.dim).data)


def _check_same_ambient(v: Subspace, w: Subspace) -> None:
    if v.space != w.space:
        raise AmbientMismatchError("subspaces live in different ambient spaces")


@lru_cache(maxsize=None)
def complement(w: Subspace) -> Subspace:
    """G-orthogonal complement {x : x^T G b = 0 for all basis vectors b}."""
    conditions = w.basis.T @ w.space.gram  # k x dim
    return span_mat(w.space, kernel(conditions))


@lru_cache(maxsize=None)
def intersect(v: Subspace, w: Subspace) -> Subspace:
    _check_same_ambient(v, w)
    if v.is_zero() or w.is_zero():
        return zero_subspace(v.space)
    stacked = hstack(v.basis, w.basis.scale(-1))
    combos = kernel(stacked)  # (kv + kw) x m
    kv = v.basis.cols
    cols = [v.basis.mul_vec([combos.data[i][j] for i in range(kv)]) for j in range(combos.cols)]
    return span(v.space, cols)


@lru_cache(maxsize=None)
def subspace_sum(v: Subspace, w: Subspace) -> Subspace:
    _check_same_ambient(v, w)
    return span(v.space, list(v.basis_vectors()) + list(w.basis_vectors()))


def contains(w: Subspace, v: Subspace) -> bool:
    """True when v is a subspace of w."""
    _check_same_ambient(v, w)
    return subspace_sum(w, v) == w


def coordinates(x: Sequence[Fraction], w: Subspace) -> Vec | None:
    """Coordinates of x in the canonical basis of w, or None when x is outside."""
    return solve(w.basis, vec(x))


def member(x: Sequence[Fraction], w: Subspace) -> bool:
    return coordinates(x, w) is not None


def project(x: Sequence[Fraction], w: Subspace) -> Vec:
    """G-orthogonal projection of x onto w via the exact normal equations."""
    if len(x) != w.space.dim:
        raise ValueError("vector has wrong length")
    if w.is_zero():
        return w.space.zero_vec()
    b = w.basis
    g = w.space.gram
    normal = b.T @ g @ b
    rhs = (b.T @ g).mul_vec(vec(x))
    coeff = solve(normal, rhs)
    assert coeff is not None  # B^T G B is positive definite
    return b.mul_vec(coeff)


@lru_cache(maxsize=None)
def gram_on(w: Subspace) -> Mat:
    """Gram matrix of the ambient inner product in the canonical basis of w."""
    return w.basis.T @ w.space.gram @ w.basis


def map_image(space_out: InnerProductSpace, m: Mat, w: Subspace) -> Subspace:
    """Image of the subspace w under the linear map given by matrix m."""
    if m.cols != w.space.dim or m.rows != space_out.dim:
        raise ValueError("matrix shape does not match spaces")
    return span_mat(space_out, m @ w.basis)


def preimage(m: Mat, domain_space: InnerProductSpace, w: Subspace) -> Subspace:
    """Exact preimage {x : m x in w} as a subspace of domain_space."""
    if m.rows != w.space.dim or m.cols != domain_space.dim:
        raise ValueError("matrix shape does not match spaces")
    if w.is_zero():
        return span_mat(domain_space, kernel(m))
    # m x in w  iff  exists c with m x - B c = 0.
    stacked = hstack(m, w.basis.scale(-1))
    combos = kernel(stacked)
    cols = [tuple(combos.data[i][j] for i in range(m.cols)) for j in range(combos.cols)]
    return span(domain_space, cols)
