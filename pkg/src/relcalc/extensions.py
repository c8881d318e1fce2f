"""Friedrichs and Krein type extensions, the selfadjoint order, and
extremal extensions.

Every headline object is computed by at least two independent formulas and
the results are compared exactly; a mismatch raises CrossCheckError.  That
redundancy is the point of the artifact: the formulas come from different
parts of the theory and their agreement is the machine-checked content.

Fractional powers never appear.  The square-root domains and ranges are
reached only through their exact surrogates ran Q_c* and dom J_c*.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import BoundCertificationError, CrossCheckError, PreconditionError
from .forms import (
    QuadraticForm,
    RepresentingMap,
    certify_lower_bound,
    companion,
    form_of_relation,
    inequality_domain_subspace,
    repmap_ldl,
    repmap_quotient,
)
from .linalg import Mat, Vec, kernel, ldl_psd_certificate, rat, solve, solve_mat, vec
from .relations import (
    LinearRelation,
    adjoint,
    closure,
    compose,
    eigen_relation,
    hsum,
    inverse,
    is_nonneg_above,
    is_selfadjoint,
    is_symmetric,
    parts,
    product_relation,
    regular_part,
    relation_from_pairs,
    restrict_domain,
    shift,
)
from .spaces import (
    InnerProductSpace,
    ProductSpace,
    Subspace,
    complement,
    contains,
    coordinates,
    gram_on,
    intersect,
    span,
)

REPMAP_BUILDERS = {
    "ldl": lambda s, c: repmap_ldl(form_of_relation(s), c),
    "quotient": repmap_quotient,
}


def _require_semibounded(s: LinearRelation, c: Fraction) -> QuadraticForm:
    if not is_symmetric(s):
        raise PreconditionError("extension theory requires a symmetric relation")
    t = form_of_relation(s)
    res = certify_lower_bound(t, c)
    if not res.ok:
        raise BoundCertificationError(
            f"the form of the relation is not bounded below by {c}", res.witness
        )
    return t


def selfadjoint_from_form(space: InnerProductSpace, domain: Subspace, matrix: Mat) -> LinearRelation:
    """The selfadjoint relation H with dom H = domain, mul H = domain-perp
    and (H phi, psi) = matrix in domain coordinates."""
    if not matrix.is_symmetric():
        raise PreconditionError("a selfadjoint relation needs a symmetric form matrix")
    b = domain.basis
    gdom = gram_on(domain)
    coeffs = solve_mat(gdom, matrix)  # G_dom^{-1} M, exact
    assert coeffs is not None
    images = b @ coeffs
    pairs = [(b.col(j), images.col(j)) for j in range(domain.dim)]
    rel = relation_from_pairs(space, space, pairs)
    mul_rel = product_relation(span(space, []), complement(domain))
    out = hsum(rel, mul_rel)
    assert is_selfadjoint(out)
    return out


def friedrichs(s: LinearRelation, c, method: str = "ldl") -> LinearRelation:
    """Friedrichs extension, cross-checked three ways.

    (1) c + Q_c* Q_c** via the representing map;
    (2) the graph elements of S* whose first component lies in dom S;
    (3) the graph sum S +| ({0} x mul S*).
    """
    return _friedrichs_cached(s, rat(c), method)


@lru_cache(maxsize=None)
def _friedrichs_cached(s: LinearRelation, c: Fraction, method: str) -> LinearRelation:
    _require_semibounded(s, c)
    q = REPMAP_BUILDERS[method](s, c)
    qrel = q.as_relation()
    via_repmap = shift(compose(adjoint(qrel), closure(qrel)), c)

    sstar = adjoint(s)
    prod = ProductSpace(s.src, s.src)
    window = _domain_window(prod, parts(s).dom)
    via_adjoint = LinearRelation(s.src, s.src, intersect(sstar.graph, window))

    mulstar = parts(sstar).mul
    via_weak = hsum(s, product_relation(span(s.src, []), mulstar))

    if not (via_repmap == via_adjoint == via_weak):
        raise CrossCheckError("Friedrichs extension formulas disagree")
    out = via_repmap
    if not is_selfadjoint(out) or not out.is_extension_of(s):
        raise CrossCheckError("Friedrichs extension is not a selfadjoint extension")
    if parts(out).mul != mulstar:
        raise CrossCheckError("mul S_F must equal mul S*")
    if not certify_lower_bound(form_of_relation(out), c).ok:
        raise CrossCheckError("Friedrichs extension lost the lower bound")
    return out


def weak_friedrichs(s: LinearRelation, c) -> LinearRelation:
    """S +| ({0} x mul S*); equals the Friedrichs extension here, asserted.

    At finite dimension dom S is closed, which is exactly the
    coincidence criterion for the weak and full extensions to coincide.
    """
    c = rat(c)
    _require_semibounded(s, c)
    out = hsum(s, product_relation(span(s.src, []), parts(adjoint(s)).mul))
    if out != friedrichs(s, c):
        raise CrossCheckError("weak Friedrichs extension differs from the Friedrichs extension")
    return out


def _domain_window(prod: ProductSpace, dom: Subspace) -> Subspace:
    """The subspace dom x (full space) of the product."""
    space = prod.space
    cols = [vec(b) + prod.right.zero_vec() for b in dom.basis_vectors()]
    cols += [
        prod.left.zero_vec() + tuple(Fraction(1) if j == i else Fraction(0) for j in range(prod.right.dim))
        for i in range(prod.right.dim)
    ]
    return span(space, cols)


def krein(s: LinearRelation, c, method: str = "ldl") -> LinearRelation:
    """Krein type extension at c, cross-checked four ways.

    (1) c + J_c** J_c* via the companion relation, together with its
        operator-part variant c + ((J_c*)_reg)* (J_c*)_reg;
    (2) the graph sum S +| N_c(S*) with the eigen-relation at c;
    (3) inverse duality c + (((S-c)^{-1})_F)^{-1};
    (4) closure(S) +| N_c(S*), the version stated for c strictly below the
        bound, which at finite dimension coincides with (2).
    """
    return _krein_cached(s, rat(c), method)


@lru_cache(maxsize=None)
def _krein_cached(s: LinearRelation, c: Fraction, method: str) -> LinearRelation:
    _require_semibounded(s, c)
    q = REPMAP_BUILDERS[method](s, c)
    j = companion(s, q)
    via_companion = shift(compose(closure(j), adjoint(j)), c)

    reg = regular_part(adjoint(j))
    via_operator_part = shift(compose(adjoint(reg), closure(reg)), c)

    nhat = eigen_relation(adjoint(s), c)
    via_weak = hsum(s, nhat)

    inv = inverse(shift(s, -c))
    via_duality = shift(inverse(friedrichs(inv, 0, method)), c)

    via_closure = hsum(closure(s), nhat)

    if not (via_companion == via_operator_part == via_weak == via_duality == via_closure):
        raise CrossCheckError("Krein type extension formulas disagree")
    out = via_companion
    if not is_selfadjoint(out) or not out.is_extension_of(s):
        raise CrossCheckError("Krein type extension is not a selfadjoint extension")
    if not certify_lower_bound(form_of_relation(out), c).ok:
        raise CrossCheckError("Krein type extension lost the lower bound")
    return out


def weak_krein(s: LinearRelation, c) -> LinearRelation:
    """S +| N_c(S*), equal to c + J_c J_c* and to the Krein type extension
    here, both asserted.

    The coincidence criterion is ran(S-c) closed, which always holds at
    finite dimension.
    """
    c = rat(c)
    _require_semibounded(s, c)
    out = hsum(s, eigen_relation(adjoint(s), c))
    q = repmap_ldl(form_of_relation(s), c)
    j = companion(s, q)
    if out != shift(compose(j, adjoint(j)), c):
        raise CrossCheckError("weak Krein extension differs from c + J J*")
    if out != krein(s, c):
        raise CrossCheckError("weak Krein extension differs from the Krein type extension")
    return out


@dataclass(frozen=True)
class OrderResult:
    leq: bool
    witness: Vec | None  # vector in dom t_K with t_H[phi] > t_K[phi], or missing-domain witness


def order_leq(h: LinearRelation, k: LinearRelation) -> OrderResult:
    """The semibounded selfadjoint order: H <= K iff dom t_K is contained
    in dom t_H and t_H <= t_K on dom t_K.  At finite dimension the form
    domains are the operator domains."""
    for r in (h, k):
        if not is_selfadjoint(r):
            raise PreconditionError("order comparison requires selfadjoint relations")
    th = form_of_relation(h)
    tk = form_of_relation(k)
    if not contains(th.domain, tk.domain):
        missing = next(b for b in tk.domain.basis_vectors() if coordinates(b, th.domain) is None)
        return OrderResult(False, missing)
    restricted = th.restrict(tk.domain)
    res = ldl_psd_certificate(tk.matrix - restricted.matrix)
    if res.ok:
        return OrderResult(True, None)
    return OrderResult(False, tk.domain.basis.mul_vec(res.counterexample))


def extension_interval_check(s: LinearRelation, c, h: LinearRelation) -> bool:
    """Verify the order-interval equivalence for a selfadjoint extension H:

        H >= c  iff  S_K,c <= H <= S_F.

    Returns True when the two sides agree (they must; both are computed
    honestly and compared)."""
    c = rat(c)
    if not h.is_extension_of(s):
        raise PreconditionError("interval check requires an extension of the base relation")
    if not is_selfadjoint(h):
        raise PreconditionError("interval check requires a selfadjoint extension")
    lhs = is_nonneg_above(h, c).ok
    rhs = order_leq(krein(s, c), h).leq and order_leq(h, friedrichs(s, c)).leq
    return lhs == rhs


def _definitional_extremal(h: LinearRelation, s: LinearRelation, c: Fraction) -> bool:
    """inf over {h0, h0'} in S of (t(H) - c)[f - h0] vanishes for every f.

    The minimizing set {f : inf = 0} equals span(dom S) + ker of the shifted
    form, a subspace, so checking the canonical basis of dom H suffices.
    The minimum itself is computed exactly from the normal equations.
    """
    if not is_nonneg_above(h, c).ok:
        return False
    th = form_of_relation(h)
    n = th.matrix - th.domain_gram.scale(c)
    dom_s = parts(s).dom
    cmat = solve_mat(th.domain.basis, dom_s.basis)
    assert cmat is not None  # dom S inside dom H
    k = th.domain.dim
    for idx in range(k):
        y = tuple(Fraction(1) if i == idx else Fraction(0) for i in range(k))
        ny = n.mul_vec(y)
        rhs = cmat.T.mul_vec(ny)
        normal = cmat.T @ n @ cmat
        x = solve(normal, rhs)
        assert x is not None  # always solvable for PSD n
        yny = sum(a * b for a, b in zip(ny, y))
        cross = sum(a * b for a, b in zip(rhs, x))
        minimum = yny - cross
        assert minimum >= 0
        if minimum != 0:
            return False
    return True


def _sandwich_extremal(h: LinearRelation, s: LinearRelation, c: Fraction) -> bool:
    """t_{S_F} and t_{S_K,c} sandwich t_H as form restrictions."""
    tf = form_of_relation(friedrichs(s, c))
    tk = form_of_relation(krein(s, c))
    th = form_of_relation(h)
    return tf.is_restriction_of(th) and th.is_restriction_of(tk)


def extremal_check(h: LinearRelation, s: LinearRelation, c) -> bool:
    """Extremality of a selfadjoint extension, by two independent routes
    whose agreement is asserted: the definitional quadratic infimum test
    and the form-restriction sandwich."""
    c = rat(c)
    _require_semibounded(s, c)
    if not h.is_extension_of(s):
        raise PreconditionError("extremality is relative to an extension")
    if not is_selfadjoint(h):
        raise PreconditionError("extremality requires a selfadjoint extension")
    by_def = _definitional_extremal(h, s, c)
    by_sandwich = _sandwich_extremal(h, s, c)
    if by_def != by_sandwich:
        raise CrossCheckError("extremality characterizations disagree")
    return by_def


def extremal_from_domain(s: LinearRelation, c, d: Subspace) -> LinearRelation:
    """The extremal extension c + R_c* R_c** built from the restriction
    R_c of (J_c*)_reg to an intermediate domain dom S <= D <= dom J_c*."""
    c = rat(c)
    _require_semibounded(s, c)
    q = repmap_ldl(form_of_relation(s), c)
    j = companion(s, q)
    jstar = adjoint(j)
    reg = regular_part(jstar)
    dom_s = parts(s).dom
    dom_jstar = parts(jstar).dom
    if not (contains(d, dom_s) and contains(dom_jstar, d)):
        raise PreconditionError("domain must sit between dom S and dom J_c*")
    r = restrict_domain(reg, d)
    out = shift(compose(adjoint(r), closure(r)), c)
    if not is_selfadjoint(out) or not out.is_extension_of(s):
        raise CrossCheckError("extremal construction did not produce a selfadjoint extension")
    if not extremal_check(out, s, c):
        raise CrossCheckError("extremal construction failed its own extremality test")
    if d == dom_s and out != friedrichs(s, c):
        raise CrossCheckError("endpoint D = dom S must reproduce the Friedrichs extension")
    if d == dom_jstar and out != krein(s, c):
        raise CrossCheckError("endpoint D = dom J_c* must reproduce the Krein type extension")
    return out


def krein_is_operator(s: LinearRelation, c) -> bool:
    """Whether the Krein type extension at c is an operator: exactly when
    ran(S-c) and mul S* meet trivially; asserted against mul S_K,c and,
    when true, against the factorization S - c = (J_c J_c*) restricted to
    dom S."""
    c = rat(c)
    _require_semibounded(s, c)
    meet = intersect(parts(shift(s, -c)).ran, parts(adjoint(s)).mul)
    res = meet.dim == 0
    k = krein(s, c)
    if (parts(k).mul.dim == 0) != res:
        raise CrossCheckError("operator criterion disagrees with mul S_K,c")
    if res:
        q = repmap_ldl(form_of_relation(s), c)
        j = companion(s, q)
        factor = restrict_domain(compose(j, adjoint(j)), parts(s).dom)
        if factor != shift(s, -c):
            raise CrossCheckError("closable factorization S - c = J_c J_c* | dom S failed")
    return res


def krein_equals_friedrichs(s: LinearRelation, gamma) -> bool | None:
    """Decide S_K,gamma = S_F when gamma is the exactly attained rational
    lower bound; None means undecided (gamma certified but not attained).

    The criterion is ker(S* - c) meets dom J_gamma* trivially for some
    c < gamma; it is evaluated at c = gamma - 1, cross-checked against the
    direct graph comparison and against the sup-finiteness range test."""
    gamma = rat(gamma)
    t = _require_semibounded(s, gamma)
    shifted = t.matrix - t.domain_gram.scale(gamma)
    if kernel(shifted).cols == 0:
        # gamma is certified but not attained: the true bound is strictly
        # larger (or the domain is trivial) and rational arithmetic cannot
        # settle the question at gamma.
        return None
    c = gamma - 1
    q = repmap_ldl(t, gamma)
    j = companion(s, q)
    ker_c = _eigenspace_of_adjoint(s, c)
    meet = intersect(ker_c, parts(adjoint(j)).dom)
    res = meet.dim == 0
    direct = krein(s, gamma) == friedrichs(s, gamma)
    if res != direct:
        raise CrossCheckError("square-root-domain criterion disagrees with the graph comparison")
    meet_ineq = intersect(ker_c, inequality_domain_subspace(s, gamma))
    if (meet_ineq.dim == 0) != res:
        raise CrossCheckError("sup-finiteness criterion disagrees with the graph comparison")
    return res


def _eigenspace_of_adjoint(s: LinearRelation, c: Fraction) -> Subspace:
    from .relations import eigenspace

    return eigenspace(adjoint(s), c)


def relations_of_form(q, c=0) -> tuple[LinearRelation, LinearRelation]:
    """The symmetric relation c + Q*Q and the selfadjoint relation
    c + Q*Q** induced by a (possibly multivalued) representing relation.

    At finite dimension the two coincide since Q is closed; for a singular
    Q the explicit product formulas are verified exactly."""
    c = rat(c)
    qrel = q.as_relation() if isinstance(q, RepresentingMap) else q
    qstar = adjoint(qrel)
    s_t = shift(compose(qstar, qrel), c)
    a_t = shift(compose(qstar, closure(qrel)), c)
    if s_t != a_t:
        raise CrossCheckError("c + Q*Q and c + Q*Q** must coincide for closed Q")
    p = parts(qrel)
    singular = contains(p.mul, p.ran)
    if singular:
        if shift(s_t, -c) != product_relation(p.ker, complement(p.dom)):
            raise CrossCheckError("singular product formula Q*Q = ker Q x (dom Q)-perp failed")
        reg = regular_part(qrel)
        s_r = compose(adjoint(reg), reg)
        if s_r != product_relation(p.dom, complement(p.dom)):
            raise CrossCheckError("regular-part product formula failed")
    return s_t, a_t


@dataclass(frozen=True)
class NamedCheck:
    name: str
    passed: bool
    witness: str | None = None


@dataclass(frozen=True)
class ExtensionReport:
    relation: LinearRelation
    c: Fraction
    friedrichs: LinearRelation
    weak_friedrichs: LinearRelation
    krein: LinearRelation
    weak_krein: LinearRelation
    checks: tuple[NamedCheck, ...]
    bound: object | None  # BoundInterval when the form domain is nonzero


def build_extension_report(s: LinearRelation, c) -> ExtensionReport:
    c = rat(c)
    f = friedrichs(s, c)
    wf = weak_friedrichs(s, c)
    k = krein(s, c)
    wk = weak_krein(s, c)
    t = form_of_relation(s)
    if t.domain.dim > 0:
        from .forms import bound_bisect

        bound = bound_bisect(t, Fraction(1, 64))
    else:
        bound = None
    checks = (
        NamedCheck("friedrichs-extends", f.is_extension_of(s)),
        NamedCheck("krein-extends", k.is_extension_of(s)),
        NamedCheck("weak-equals-full-friedrichs", wf == f),
        NamedCheck("weak-equals-full-krein", wk == k),
        NamedCheck("krein-below-friedrichs", order_leq(k, f).leq),
        NamedCheck("mul-friedrichs-is-mul-adjoint", parts(f).mul == parts(adjoint(s)).mul),
        NamedCheck(
            "mul-krein-is-intersection",
            parts(k).mul == intersect(parts(shift(s, -c)).ran, parts(adjoint(s)).mul),
        ),
    )
    return ExtensionReport(s, c, f, wf, k, wk, checks, bound)
