from fractions import Fraction

import pytest

from relcalc.errors import BoundCertificationError, CrossCheckError, PreconditionError
from relcalc.extensions import (
    build_extension_report,
    extension_interval_check,
    extremal_check,
    extremal_from_domain,
    friedrichs,
    krein,
    krein_equals_friedrichs,
    krein_is_operator,
    order_leq,
    relations_of_form,
    selfadjoint_from_form,
    weak_friedrichs,
    weak_krein,
)
from relcalc.forms import (
    companion,
    form_of_relation,
    repmap_ldl,
    scalar_repmap,
    stack_relations,
)
from relcalc.linalg import mat, vec
from relcalc.relations import (
    adjoint,
    compose,
    operator_relation,
    parts,
    relation_from_pairs,
    shift,
)
from relcalc.spaces import (
    complement,
    full_subspace,
    span,
    standard_space,
    subspace_sum,
    zero_subspace,
)

Q1 = standard_space(1)
Q2 = standard_space(2)
Q3 = standard_space(3)
Q4 = standard_space(4)


def e1():
    return relation_from_pairs(Q2, Q2, [(vec([1, 1]), vec([1, 3]))])


def e2():
    return relation_from_pairs(Q3, Q3, [(vec([1, 0, 0]), vec([0, 1, 0]))])


def dim4_fixture():
    """diag(1,2,3,4) restricted to a two-dimensional domain."""
    d = operator_relation(Q4, Q4, mat([[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 0], [0, 0, 0, 4]]))
    from relcalc.relations import restrict_domain

    return restrict_domain(d, span(Q4, [vec([1, 1, 1, 1]), vec([1, -1, 1, -1])]))


def a_family(b):
    """All symmetric operator extensions of E1: A_b (1,1) = (1,3)."""
    b = Fraction(b)
    return operator_relation(Q2, Q2, mat([[1 - b, b], [b, 3 - b]]))


def test_friedrichs_of_selfadjoint_is_itself():
    d = operator_relation(Q2, Q2, mat([[1, 0], [0, 3]]))
    assert friedrichs(d, 1) == d
    assert friedrichs(d, 0) == d


def test_friedrichs_e1():
    s = e1()
    f = friedrichs(s, 0)
    # Operator part is multiplication by 2 on span{(1,1)}, mul is span{(1,-1)}.
    p = parts(f)
    assert p.dom == span(Q2, [vec([1, 1])])
    assert p.mul == span(Q2, [vec([1, -1])])
    assert f.is_extension_of(s)
    for phi, phi_prime in f.pairs():
        assert phi_prime[0] + phi_prime[1] == 4 * phi[0]


def test_friedrichs_is_base_point_independent():
    s = e1()
    assert friedrichs(s, 0) == friedrichs(s, 2) == friedrichs(s, -5)


def test_friedrichs_e2_orthogonal():
    s = e2()
    f = friedrichs(s, 0)
    from relcalc.relations import product_relation

    assert f == product_relation(span(Q3, [vec([1, 0, 0])]), span(Q3, [vec([0, 1, 0]), vec([0, 0, 1])]))


def test_friedrichs_bound_failure():
    with pytest.raises(BoundCertificationError):
        friedrichs(e1(), 3)


def test_krein_e1_is_rank_one_operator():
    s = e1()
    k = krein(s, 0)
    expected = operator_relation(
        Q2, Q2, mat([[Fraction(1, 4), Fraction(3, 4)], [Fraction(3, 4), Fraction(9, 4)]])
    )
    assert k == expected
    assert parts(k).ker == span(Q2, [vec([3, -1])])


def test_krein_e2_orthogonal():
    s = e2()
    k = krein(s, 0)
    from relcalc.relations import product_relation

    assert k == product_relation(span(Q3, [vec([1, 0, 0]), vec([0, 0, 1])]), span(Q3, [vec([0, 1, 0])]))


def test_krein_of_selfadjoint_at_certified_bound():
    d = operator_relation(Q2, Q2, mat([[1, 0], [0, 3]]))
    assert krein(d, 1) == d


def test_krein_lower_bound_is_exactly_c_below_gamma():
    s = e1()
    from relcalc.forms import certify_lower_bound

    k = krein(s, 0)
    tk = form_of_relation(k)
    assert certify_lower_bound(tk, 0).ok
    assert not certify_lower_bound(tk, Fraction(1, 1000)).ok


def test_weak_variants_coincide():
    s = e1()
    assert weak_friedrichs(s, 0) == friedrichs(s, 0)
    assert weak_krein(s, 0) == krein(s, 0)
    assert weak_krein(s, 2) == krein(s, 2)


def test_methods_agree():
    s = e1()
    for c in (0, 1, 2):
        assert friedrichs(s, c, method="ldl") == friedrichs(s, c, method="quotient")
        assert krein(s, c, method="ldl") == krein(s, c, method="quotient")


def test_order_reflexive_and_sandwich():
    s = e1()
    h = a_family(0)  # diag(1, 3)
    assert order_leq(h, h).leq
    assert order_leq(krein(s, 0), h).leq
    assert order_leq(h, friedrichs(s, 0)).leq


def test_order_incomparable():
    a = operator_relation(Q2, Q2, mat([[1, 0], [0, 3]]))
    b = operator_relation(Q2, Q2, mat([[3, 0], [0, 1]]))
    assert not order_leq(a, b).leq
    assert not order_leq(b, a).leq
    assert order_leq(a, b).witness is not None


def test_order_witness_is_exact():
    s = e1()
    h = a_family(1)
    res = order_leq(krein(s, 0), h)
    assert not res.leq
    phi = res.witness
    tk = form_of_relation(krein(s, 0))
    th = form_of_relation(h)
    assert tk.evaluate(phi, phi) > th.evaluate(phi, phi)


def test_extension_interval_e1_family():
    s = e1()
    for b, expected in ((0, True), (Fraction(3, 4), True), (1, False)):
        h = a_family(b)
        assert h.is_extension_of(s)
        assert extension_interval_check(s, 0, h)
        from relcalc.relations import is_nonneg_above

        assert is_nonneg_above(h, 0).ok == expected


def test_extension_interval_rejects_non_extension():
    with pytest.raises(PreconditionError):
        extension_interval_check(e1(), 0, operator_relation(Q2, Q2, mat([[5, 0], [0, 5]])))


def test_krein_equals_a_family_at_three_quarters():
    assert krein(e1(), 0) == a_family(Fraction(3, 4))


def test_extremal_endpoints():
    s = e1()
    assert extremal_check(friedrichs(s, 0), s, 0)
    assert extremal_check(krein(s, 0), s, 0)


def test_extremal_rejects_diag13():
    # The infimum at f = (1, -1) is 3, attained at h = -(1,1)/2: not extremal.
    s = e1()
    assert not extremal_check(a_family(0), s, 0)


def test_extremal_from_domain_endpoints():
    s = e1()
    dom_s = parts(s).dom
    q = repmap_ldl(form_of_relation(s), 0)
    j = companion(s, q)
    dom_jstar = parts(adjoint(j)).dom
    assert extremal_from_domain(s, 0, dom_s) == friedrichs(s, 0)
    assert extremal_from_domain(s, 0, dom_jstar) == krein(s, 0)


def test_extremal_from_domain_dim4_third_extension():
    s = dim4_fixture()
    dom_s = parts(s).dom
    q = repmap_ldl(form_of_relation(s), 0)
    j = companion(s, q)
    dom_jstar = parts(adjoint(j)).dom
    assert dom_jstar.dim - dom_s.dim >= 2
    middle = subspace_sum(dom_s, span(Q4, [dom_jstar.basis_vectors()[0]]))
    candidates = {friedrichs(s, 0), krein(s, 0)}
    found = None
    for b in dom_jstar.basis_vectors():
        d = subspace_sum(dom_s, span(Q4, [b]))
        if d.dim == dom_s.dim + 1:
            h = extremal_from_domain(s, 0, d)
            if h not in candidates:
                found = h
                break
    assert found is not None
    assert extremal_check(found, s, 0)
    assert order_leq(krein(s, 0), found).leq
    assert order_leq(found, friedrichs(s, 0)).leq


def test_extremal_from_domain_rejects_bad_domain():
    s = e1()
    with pytest.raises(PreconditionError):
        extremal_from_domain(s, 0, zero_subspace(Q2))


def test_krein_is_operator_e1():
    assert krein_is_operator(e1(), 0)


def test_krein_is_operator_e2_false():
    # ran S = span e2 meets mul S* = span{e2, e3} nontrivially.
    assert not krein_is_operator(e2(), 0)


def test_krein_is_operator_densely_defined():
    d = operator_relation(Q2, Q2, mat([[1, 0], [0, 3]]))
    assert krein_is_operator(d, 0)


def test_krein_equals_friedrichs_e1_true_at_two():
    # At the attained bound 2 the only selfadjoint extension of E1 bounded
    # below by 2 is the Friedrichs extension itself (no operator extension
    # A_b satisfies A_b >= 2), so the Krein type extension at 2 equals it.
    assert krein_equals_friedrichs(e1(), 2) is True
    assert krein(e1(), 2) == friedrichs(e1(), 2)


def test_krein_equals_friedrichs_selfadjoint_true():
    d = operator_relation(Q2, Q2, mat([[1, 0], [0, 3]]))
    assert krein_equals_friedrichs(d, 1) is True


def test_krein_equals_friedrichs_undecided_below_bound():
    assert krein_equals_friedrichs(e1(), 1) is None


def test_krein_equals_friedrichs_e2():
    # S_F = span{e1} x span{e2,e3} differs from S_K = span{e1,e3} x span{e2}.
    assert krein_equals_friedrichs(e2(), 0) is False


def test_relations_of_form_zero_map():
    z = operator_relation(Q2, Q2, mat([[0, 0], [0, 0]]))
    s_t, a_t = relations_of_form(z, 0)
    assert s_t == z
    s_t2, _ = relations_of_form(z, 5)
    assert s_t2 == operator_relation(Q2, Q2, mat([[5, 0], [0, 5]]))


def test_relations_of_form_singular_relation():
    q = relation_from_pairs(Q1, Q1, [(vec([1]), vec([1])), (vec([0]), vec([1]))])
    s_t, a_t = relations_of_form(q, 0)
    # Q* = {(0, 0)} and Q*Q = ker Q x (dom Q)-perp, here the zero operator
    # on the full line since the graph of Q is everything.
    assert adjoint(q).graph.dim == 0
    assert s_t == operator_relation(Q1, Q1, mat([[0]]))
    assert a_t == s_t


def test_relations_of_form_stacked_map_identity():
    # Q_c = stack(q_c, Q) with c < 0 satisfies Q_c* Q_c = Q*Q - c.
    q = relation_from_pairs(Q1, Q1, [(vec([1]), vec([1])), (vec([0]), vec([1]))])
    dom = full_subspace(Q1)
    for c in (Fraction(-1), Fraction(-3, 2)):
        qc_map = scalar_repmap(dom, c)
        stacked = stack_relations(qc_map.as_relation(), q)
        lhs = compose(adjoint(stacked), stacked)
        rhs = shift(compose(adjoint(q), q), -c)
        assert lhs == rhs


def test_selfadjoint_from_form_roundtrip():
    dom = span(Q3, [vec([1, 0, 0]), vec([0, 1, 1])])
    m = mat([[2, 1], [1, 5]])
    h = selfadjoint_from_form(Q3, dom, m)
    assert parts(h).dom == dom
    assert parts(h).mul == complement(dom)
    assert form_of_relation(h).restrict(dom).matrix == m


def test_extension_report_checks_pass():
    rep = build_extension_report(e1(), 0)
    assert all(c.passed for c in rep.checks)
    assert rep.friedrichs == friedrichs(e1(), 0)


def test_purely_multivalued_relation_degenerate_path():
    # dom S = {0}: the form is empty, representing maps have 0-dim domain,
    # companions are {0} x ran S, and the extension formulas still apply.
    s = relation_from_pairs(Q2, Q2, [(vec([0, 0]), vec([1, 0]))])
    t = form_of_relation(s)
    assert t.domain.dim == 0 and t.matrix.rows == 0
    q = repmap_ldl(t, 5)  # any base point certifies the empty form
    assert q.domain.dim == 0
    j = companion(s, q)
    assert parts(j).mul == span(Q2, [vec([1, 0])])
    assert parts(j).dom.dim == 0

    f = friedrichs(s, 5)
    from relcalc.relations import product_relation
    from relcalc.spaces import full_subspace, zero_subspace

    assert f == product_relation(zero_subspace(Q2), full_subspace(Q2))
    k = krein(s, 0)
    assert k.is_extension_of(s)
    assert parts(k).dom == span(Q2, [vec([0, 1])])
    assert parts(k).mul == span(Q2, [vec([1, 0])])
    assert extremal_check(f, s, 0) and extremal_check(k, s, 0)
