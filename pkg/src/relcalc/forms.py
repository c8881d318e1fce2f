"""Quadratic forms of semibounded relations and their representing maps.

The central objects: the form t(S)[phi, psi] = (phi', psi) of a symmetric
relation, exact lower-bound certificates for it, and two independent
constructions of a representing map Q_c with

    (t(S) - c)[phi, psi] = (Q_c phi, Q_c psi)  in a weighted codomain.

No square roots are ever taken: the codomain Gram matrix carries the
weights, which keeps every certificate identity inside the rational field.
Each representing map has a companion relation J_c = {{Q_c phi, phi'-c phi}}
forming an exact dual pair with it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import BoundCertificationError, CrossCheckError, PreconditionError
from .linalg import (
    Mat,
    PsdCertificate,
    Vec,
    block_diag,
    diag,
    from_cols,
    identity,
    kernel,
    ldl_psd_certificate,
    rank,
    rat,
    solve,
    solve_mat,
    vec,
    vstack,
    zeros,
)
from .relations import (
    LinearRelation,
    adjoint,
    eigenspace,
    inverse,
    is_symmetric,
    lift,
    parts,
    regular_part,
    relation_from_pairs,
    shift,
)
from .spaces import (
    InnerProductSpace,
    ProductSpace,
    Subspace,
    contains,
    coordinates,
    gram_on,
    intersect,
    span,
    subspace_sum,
)


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric bilinear form on a domain subspace, in basis coordinates.

    t[B x, B y] = x^T matrix y where B is the canonical domain basis.
    """

    space: InnerProductSpace
    domain: Subspace
    matrix: Mat

    def __post_init__(self) -> None:
        if self.domain.space != self.space:
            raise ValueError("domain must live in the carrying space")
        k = self.domain.dim
        if self.matrix.rows != k or self.matrix.cols != k:
            raise ValueError("form matrix must be square of the domain dimension")
        if not self.matrix.is_symmetric():
            raise ValueError("form matrix must be symmetric")

    @property
    def domain_gram(self) -> Mat:
        return gram_on(self.domain)

    def evaluate(self, x, y) -> Fraction:
        cx = coordinates(x, self.domain)
        cy = coordinates(y, self.domain)
        if cx is None or cy is None:
            raise PreconditionError("form arguments must lie in the form domain")
        gx = self.matrix.mul_vec(cx)
        return sum((a * b for a, b in zip(gx, cy)), Fraction(0))

    def restrict(self, sub: Subspace) -> "QuadraticForm":
        """Restriction to a subspace of the domain."""
        if not contains(self.domain, sub):
            raise PreconditionError("restriction target is not inside the form domain")
        coords = solve_mat(self.domain.basis, sub.basis)
        assert coords is not None
        return QuadraticForm(self.space, sub, coords.T @ self.matrix @ coords)

    def is_restriction_of(self, other: "QuadraticForm") -> bool:
        if self.space != other.space or not contains(other.domain, self.domain):
            return False
        return other.restrict(self.domain).matrix == self.matrix


@dataclass(frozen=True)
class LowerBoundCert:
    c: Fraction
    certificate: PsdCertificate


@dataclass(frozen=True)
class CertifyResult:
    cert: LowerBoundCert | None
    witness: Vec | None  # ambient vector phi with t[phi] < c (phi, phi)

    @property
    def ok(self) -> bool:
        return self.cert is not None


@lru_cache(maxsize=None)
def form_of_relation(s: LinearRelation) -> QuadraticForm:
    """t(S)[phi, psi] = (phi', psi) on dom S, phi' any graph lift of phi."""
    if not is_symmetric(s):
        raise PreconditionError("the form of a relation requires a symmetric relation")
    dom = parts(s).dom
    lifts = [lift(s, b) for b in dom.basis_vectors()]
    entries = [[s.src.inner(lifts[i], dom.basis.col(j)) for j in range(dom.dim)] for i in range(dom.dim)]
    m = Mat(dom.dim, dom.dim, tuple(tuple(r) for r in entries))
    assert m.is_symmetric()
    return QuadraticForm(s.src, dom, m)


@lru_cache(maxsize=None)
def certify_lower_bound(t: QuadraticForm, c) -> CertifyResult:
    """Exact PSD certificate for t - c (.,.), or a violating domain vector."""
    c = rat(c)
    res = ldl_psd_certificate(t.matrix - t.domain_gram.scale(c))
    if res.ok:
        return CertifyResult(LowerBoundCert(c, res.certificate), None)
    return CertifyResult(None, t.domain.basis.mul_vec(res.counterexample))


@dataclass(frozen=True)
class BoundInterval:
    lo: Fraction  # certified: t - lo is PSD
    hi: Fraction  # refuted: t - hi is not PSD
    estimate: float  # floating generalized eigenvalue, display only

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def bound_bisect(t: QuadraticForm, width) -> BoundInterval:
    """Certified rational interval of the requested width around the exact
    lower bound, by pure bisection on the exact PSD test.

    The bound itself is algebraic and in general irrational, so it is never
    computed; only certified rational brackets are.  The float estimate is
    for display.
    """
    width = rat(width)
    if t.domain.dim == 0:
        raise PreconditionError("bound_bisect requires a nonzero form domain")
    if width <= 0:
        raise PreconditionError("interval width must be positive")
    gram = t.domain_gram
    gf = np.array([[float(x) for x in r] for r in gram.data])
    mf = np.array([[float(x) for x in r] for r in t.matrix.data])
    chol = np.linalg.cholesky(gf)
    inv = np.linalg.inv(chol)
    est = float(np.min(np.linalg.eigvalsh(inv @ mf @ inv.T)))

    lo = Fraction(int(np.floor(est)) - 1)
    step = Fraction(1)
    while not certify_lower_bound(t, lo).ok:
        lo -= step
        step *= 2
    hi = Fraction(int(np.ceil(est)) + 1)
    step = Fraction(1)
    while certify_lower_bound(t, hi).ok:
        hi += step
        step *= 2
    while hi - lo > width:
        mid = (hi + lo) / 2
        if certify_lower_bound(t, mid).ok:
            lo = mid
        else:
            hi = mid
    # When the bound is attained at a simple rational, pin it exactly.
    cand = _simplest_in(lo, hi)
    if cand != lo:
        if certify_lower_bound(t, cand).ok:
            lo = cand
        else:
            hi = cand
    return BoundInterval(lo, hi, est)


def _simplest_in(a: Fraction, b: Fraction) -> Fraction:
    """The fraction with the smallest denominator in the closed interval."""
    if a == b:
        return a
    ceil_a = -((-a.numerator) // a.denominator)
    if ceil_a <= b:
        return Fraction(ceil_a)
    floor_a = a.numerator // a.denominator
    return floor_a + 1 / _simplest_in(1 / (b - floor_a), 1 / (a - floor_a))


@dataclass(frozen=True)
class RepresentingMap:
    """A map Q from a domain subspace into a weighted codomain certifying

        matrix^T Gram_codomain matrix = form_matrix - c Gram_domain.

    ``matrix`` sends domain-basis coordinates to codomain coordinates;
    ``form_matrix`` is the represented form t in the same coordinates.  The
    identity above is verified exactly at construction.
    """

    domain: Subspace
    codomain: InnerProductSpace
    matrix: Mat  # r x k
    base_point: Fraction
    form_matrix: Mat  # k x k

    def __post_init__(self) -> None:
        k = self.domain.dim
        if self.matrix.cols != k or self.matrix.rows != self.codomain.dim:
            raise ValueError("representing map matrix has wrong shape")
        lhs = self.matrix.T @ self.codomain.gram @ self.matrix
        rhs = self.form_matrix - gram_on(self.domain).scale(self.base_point)
        if lhs != rhs:
            raise CrossCheckError("representing map certificate identity failed")

    def apply(self, x) -> Vec:
        cx = coordinates(x, self.domain)
        if cx is None:
            raise PreconditionError("argument outside the representing map domain")
        return self.matrix.mul_vec(cx)

    def as_relation(self) -> LinearRelation:
        pairs = [
            (self.domain.basis.col(j), self.matrix.col(j))
            for j in range(self.domain.dim)
        ]
        return relation_from_pairs(self.domain.space, self.codomain, pairs)


def repmap_ldl(t: QuadraticForm, c) -> RepresentingMap:
    """Representing map from the pivoted LDL^T factorization of t - c.

    Zero pivots are dropped; the kept pivots become the diagonal codomain
    Gram, so no square root is ever taken.
    """
    c = rat(c)
    res = certify_lower_bound(t, c)
    if not res.ok:
        raise BoundCertificationError("form is not bounded below by the base point", res.witness)
    cert = res.cert.certificate
    k = t.domain.dim
    # P^T (M - cG) P = L D L^T, so M - cG = R^T D R with R = L^T P^T,
    # i.e. R[a][j] = L[perm[j]... ]: R = L^T composed with the permutation.
    perm = cert.perm
    lt = cert.lower.T
    rows = []
    weights = []
    for i in range(k):
        if cert.diag[i] == 0:
            continue
        rows.append(tuple(lt.data[i][_perm_index(perm, j)] for j in range(k)))
        weights.append(cert.diag[i])
    r = len(rows)
    matrix = Mat(r, k, tuple(rows))
    codomain = InnerProductSpace(r, diag(tuple(weights)))
    return RepresentingMap(t.domain, codomain, matrix, c, t.matrix)


def _perm_index(perm: tuple[int, ...], j: int) -> int:
    return perm.index(j)


def repmap_quotient(s: LinearRelation, c) -> RepresentingMap:
    """Minimal representing map q_c phi = [phi' - c phi] on the quotient
    ran(S-c) / (ran(S-c) ∩ mul S*), with the induced semi-inner product as
    the codomain Gram.

    The quotient is realized on a complement of the null subspace inside
    ran(S-c); the induced Gram is certified positive definite before the
    map is accepted.
    """
    c = rat(c)
    t = form_of_relation(s)
    res = certify_lower_bound(t, c)
    if not res.ok:
        raise BoundCertificationError("form is not bounded below by the base point", res.witness)
    smc = shift(s, -c)
    ran_smc = parts(smc).ran
    null = intersect(ran_smc, parts(adjoint(s)).mul)
    # Extend the null basis to a basis of ran(S-c); the added vectors span
    # the complement carrying the quotient.
    comp: list[Vec] = []
    current = null
    for u in ran_smc.basis_vectors():
        candidate = subspace_sum(current, span(s.src, [u]))
        if candidate.dim > current.dim:
            comp.append(u)
            current = candidate
    r = len(comp)
    # Induced semi-inner product: ([u], [v])_{S-c} = (u, psi)_H where
    # {psi, psi'} in S and psi' - c psi = v.
    preimages = [lift(inverse(smc), u) for u in comp]
    w_entries = [[s.src.inner(comp[i], preimages[j]) for j in range(r)] for i in range(r)]
    w = Mat(r, r, tuple(tuple(row) for row in w_entries))
    if not w.is_symmetric():
        raise CrossCheckError("induced quotient inner product is not symmetric")
    wres = ldl_psd_certificate(w)
    if not wres.ok or any(d == 0 for d in wres.certificate.diag):
        raise CrossCheckError("induced quotient inner product failed the PSD certificate")
    codomain = InnerProductSpace(r, w)
    # Coordinates of [phi' - c phi] on the complement part.
    section = from_cols(s.src.dim, comp + list(null.basis_vectors()))
    cols = []
    for b in t.domain.basis_vectors():
        image = lift(smc, b)
        sol = solve(section, image)
        assert sol is not None
        cols.append(tuple(sol[:r]))
    matrix = from_cols(r, cols) if r else zeros(0, t.domain.dim)
    q = RepresentingMap(t.domain, codomain, matrix, c, t.matrix)
    # ran q_c is dense in the quotient, which at finite dimension means all
    # of it.
    assert rank(matrix) == r
    return q


def repmap_from_operator(op: LinearRelation, t: QuadraticForm, c) -> RepresentingMap:
    """Package an operator relation as a representing map for t at c.

    The exact certificate identity is checked on construction, so this
    doubles as the verification that op really represents t - c.
    """
    if op.src != t.space:
        raise PreconditionError("operator source must carry the form")
    cols = [lift(op, b) for b in t.domain.basis_vectors()]
    matrix = from_cols(op.dst.dim, cols)
    return RepresentingMap(t.domain, op.dst, matrix, rat(c), t.matrix)


def scalar_repmap(domain: Subspace, c) -> RepresentingMap:
    """Representing map for the zero form at base point c <= 0.

    Realizes sqrt(|c|) * identity without the square root: the map is the
    identity in domain coordinates and the codomain Gram is |c| times the
    domain Gram.  For c = 0 the codomain is zero-dimensional.
    """
    c = rat(c)
    if c > 0:
        raise PreconditionError("the zero form is only bounded below by nonpositive base points")
    k = domain.dim
    zero_form = zeros(k, k)
    if c == 0:
        return RepresentingMap(domain, InnerProductSpace(0, Mat(0, 0, ())), zeros(0, k), c, zero_form)
    codomain = InnerProductSpace(k, gram_on(domain).scale(-c))
    return RepresentingMap(domain, codomain, identity(k), c, zero_form)


def stack_maps(q1: RepresentingMap, q2: RepresentingMap) -> RepresentingMap:
    """Column stack into the orthogonal direct sum codomain.

    Represents the sum of the represented nonnegative forms: the result is
    a representing map for the form with matrix form1 + form2 at base
    point c1 + c2.
    """
    if q1.domain != q2.domain:
        raise PreconditionError("stacked representing maps must share their domain")
    codomain = InnerProductSpace(
        q1.codomain.dim + q2.codomain.dim, block_diag(q1.codomain.gram, q2.codomain.gram)
    )
    return RepresentingMap(
        q1.domain,
        codomain,
        vstack(q1.matrix, q2.matrix),
        q1.base_point + q2.base_point,
        q1.form_matrix + q2.form_matrix,
    )


def stack_relations(t1: LinearRelation, t2: LinearRelation) -> LinearRelation:
    """Column stack of two relations with the same source:
    {{f, g1 (+) g2} : {f, g1} in T1, {f, g2} in T2}."""
    if t1.src != t2.src:
        raise PreconditionError("stacked relations must share their source space")
    h, k1, k2 = t1.src, t1.dst, t2.dst
    triple = ProductSpace(ProductSpace(h, k1).space, k2).space
    u_cols = [vec(f) + vec(g) + k2.zero_vec() for f, g in t1.pairs()]
    for i in range(k2.dim):
        e = tuple(Fraction(1) if j == i else Fraction(0) for j in range(k2.dim))
        u_cols.append(h.zero_vec() + k1.zero_vec() + e)
    v_cols = [vec(f) + k1.zero_vec() + vec(g) for f, g in t2.pairs()]
    for i in range(k1.dim):
        e = tuple(Fraction(1) if j == i else Fraction(0) for j in range(k1.dim))
        v_cols.append(h.zero_vec() + e + k2.zero_vec())
    meet = intersect(span(triple, u_cols), span(triple, v_cols))
    out = [(w[: h.dim], w[h.dim :]) for w in meet.basis_vectors()]
    dst = InnerProductSpace(k1.dim + k2.dim, block_diag(k1.gram, k2.gram))
    return relation_from_pairs(h, dst, out)


def companion(s: LinearRelation, q: RepresentingMap) -> LinearRelation:
    """Companion relation J_c = {{Q_c phi, phi' - c phi} : {phi, phi'} in S}.

    The dual pair inclusions Q_c in J_c* and J_c in Q_c* are asserted at
    construction.
    """
    t = form_of_relation(s)
    if q.domain != t.domain or q.form_matrix != t.matrix:
        raise PreconditionError("representing map does not certify the form of this relation")
    c = q.base_point
    pairs = []
    for phi, phi_prime in s.pairs():
        shifted = tuple(x - c * y for x, y in zip(phi_prime, phi))
        pairs.append((q.apply(phi), shifted))
    j = relation_from_pairs(q.codomain, s.src, pairs)
    q_rel = q.as_relation()
    if not adjoint(j).is_extension_of(q_rel) or not adjoint(q_rel).is_extension_of(j):
        raise CrossCheckError("companion relation does not form a dual pair with its representing map")
    return j


def form_s_of(s: LinearRelation, c, q: RepresentingMap | None = None) -> QuadraticForm:
    """The closed form c (phi, psi) + ((J_c*)_reg phi, (J_c*)_reg psi) on
    dom J_c*; extends t(S), with lower bound exactly c whenever the adjoint
    has an eigenvector at c."""
    c = rat(c)
    if q is None:
        q = repmap_ldl(form_of_relation(s), c)
    j = companion(s, q)
    jstar = adjoint(j)
    dom = parts(jstar).dom
    reg = regular_part(jstar)
    images = [lift(reg, b) for b in dom.basis_vectors()]
    k = dom.dim
    entries = [
        [
            c * s.src.inner(dom.basis.col(i), dom.basis.col(j2)) + q.codomain.inner(images[i], images[j2])
            for j2 in range(k)
        ]
        for i in range(k)
    ]
    out = QuadraticForm(s.src, dom, Mat(k, k, tuple(tuple(r) for r in entries)))
    assert certify_lower_bound(out, c).ok
    if eigenspace(adjoint(s), c).dim > 0:
        # The bound is attained: the shifted form has a null vector.
        assert kernel(out.matrix - out.domain_gram.scale(c)).cols > 0
    return out


def lebesgue_form(q_rel: LinearRelation, c=0) -> tuple[QuadraticForm, QuadraticForm]:
    """Regular and singular parts of the form induced by a relation-valued
    representing map, via the Lebesgue decomposition of the relation.

    The total form is built from fixed graph lifts of the domain basis; its
    regular part uses the (lift-independent) regular component and the
    singular part the orthogonal remainder, and total = regular + singular
    is asserted.  For an operator the singular form vanishes.
    """
    c = rat(c)
    dom = parts(q_rel).dom
    k = dom.dim
    lifts = [lift(q_rel, b) for b in dom.basis_vectors()]
    reg = regular_part(q_rel)
    reg_imgs = [lift(reg, b) for b in dom.basis_vectors()]
    sing_imgs = [tuple(x - y for x, y in zip(g, r)) for g, r in zip(lifts, reg_imgs)]
    gdom = gram_on(dom)
    kk = q_rel.dst
    total = [[c * gdom.data[i][j] + kk.inner(lifts[i], lifts[j]) for j in range(k)] for i in range(k)]
    regm = [[c * gdom.data[i][j] + kk.inner(reg_imgs[i], reg_imgs[j]) for j in range(k)] for i in range(k)]
    singm = [[kk.inner(sing_imgs[i], sing_imgs[j]) for j in range(k)] for i in range(k)]
    total_m = Mat(k, k, tuple(tuple(r) for r in total))
    reg_m = Mat(k, k, tuple(tuple(r) for r in regm))
    sing_m = Mat(k, k, tuple(tuple(r) for r in singm))
    # The base term enters the total and the regular part exactly once.
    if reg_m + sing_m != total_m:
        raise CrossCheckError("Lebesgue decomposition identity failed")
    space = q_rel.src
    return QuadraticForm(space, dom, reg_m), QuadraticForm(space, dom, sing_m)


def ran_adjoint_by_inequality(s: LinearRelation, c, phi) -> bool:
    """Decide whether |(psi, phi)|^2 <= C (psi', psi) holds over S - c for
    some finite C, without constructing Q_c*.

    In domain coordinates the inequality holds iff B^T G phi lies in the
    range of the shifted form matrix; membership is an exact rational range
    test.
    """
    c = rat(c)
    t = form_of_relation(s)
    m = t.matrix - t.domain_gram.scale(c)
    v = (t.domain.basis.T @ s.src.gram).mul_vec(vec(phi))
    return solve(m, v) is not None


def inequality_range_subspace(s: LinearRelation, c) -> Subspace:
    """The set of phi passing the ran_adjoint_by_inequality test, as an
    exact subspace: the preimage of ran(M) under phi -> B^T G phi.

    Since M is symmetric, ran(M) is the orthogonal complement of ker(M) in
    coordinates, so the condition is ker(M)^T B^T G phi = 0.
    """
    c = rat(c)
    t = form_of_relation(s)
    m = t.matrix - t.domain_gram.scale(c)
    null = kernel(m)  # k x r
    conditions = null.T @ t.domain.basis.T @ s.src.gram  # r x dim
    sol = kernel(conditions)
    return span(s.src, [sol.col(j) for j in range(sol.cols)])


def dom_companion_by_inequality(s: LinearRelation, c, psi) -> bool:
    """The dom J_c* inequality criterion: the same range test applied to
    the inverse of S - c."""
    return ran_adjoint_by_inequality(inverse(shift(s, -rat(c))), 0, psi)


def inequality_domain_subspace(s: LinearRelation, c) -> Subspace:
    return inequality_range_subspace(inverse(shift(s, -rat(c))), 0)
