from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relcalc.errors import AmbientMismatchError
from relcalc.linalg import mat, vec
from relcalc.spaces import (
    InnerProductSpace,
    ProductSpace,
    complement,
    contains,
    full_subspace,
    gram_on,
    intersect,
    member,
    project,
    span,
    standard_space,
    subspace_sum,
    zero_subspace,
)

Q2 = standard_space(2)
Q4 = standard_space(4)


def test_gram_must_be_positive_definite():
    with pytest.raises(ValueError):
        InnerProductSpace(2, mat([[1, 3], [3, 9]]))
    with pytest.raises(ValueError):
        InnerProductSpace(2, mat([[0, 1], [1, 0]]))


def test_complement_standard_axis():
    w = span(Q2, [vec([1, 0])])
    assert complement(w) == span(Q2, [vec([0, 1])])


def test_complement_weighted_gram():
    # Solve x1 + 2*x2 = 0 for the diag(1, 2) Gram against (1, 1).
    space = InnerProductSpace(2, mat([[1, 0], [0, 2]]))
    w = span(space, [vec([1, 1])])
    assert complement(w) == span(space, [vec([2, -1])])


def test_complement_of_full_space_is_zero():
    assert complement(full_subspace(Q2)) == zero_subspace(Q2)


def test_intersect_trivial_cases():
    v = span(Q2, [vec([1, 0]), vec([0, 1])])
    w = span(Q2, [vec([1, 1])])
    assert intersect(v, w) == w
    assert intersect(w, w) == w


def test_intersect_transverse_lines():
    v = span(Q2, [vec([1, 3])])
    w = span(Q2, [vec([1, -1])])
    assert intersect(v, w) == zero_subspace(Q2)


def test_sum_spans_union():
    assert subspace_sum(span(Q2, [vec([1, 0])]), span(Q2, [vec([0, 1])])) == full_subspace(Q2)
    v = span(Q2, [vec([1, 3])])
    assert subspace_sum(v, zero_subspace(Q2)) == v


def test_sum_e1_fixture_graph():
    v = span(Q4, [vec([1, 1, 1, 3])])
    w = span(Q4, [vec([3, -1, 0, 0])])
    s = subspace_sum(v, w)
    assert s.dim == 2
    assert contains(s, v) and contains(s, w)


def test_member_and_project():
    assert member(vec([1, 1]), span(Q2, [vec([2, 2])]))
    assert not member(vec([1, 0]), span(Q2, [vec([2, 2])]))
    p = project(vec([1, 0]), span(Q2, [vec([1, 1])]))
    assert p == vec([Fraction(1, 2), Fraction(1, 2)])
    assert project(vec([1, 0]), full_subspace(Q2)) == vec([1, 0])


def test_mixed_ambients_are_rejected():
    space = InnerProductSpace(2, mat([[2, 0], [0, 1]]))
    with pytest.raises(AmbientMismatchError):
        intersect(full_subspace(Q2), full_subspace(space))


def test_product_space_block_gram():
    left = InnerProductSpace(1, mat([[4]]))
    prod = ProductSpace(left, Q2)
    assert prod.space.gram == mat([[4, 0, 0], [0, 1, 0], [0, 0, 1]])
    f, g = prod.split(vec([5, 1, 2]))
    assert f == vec([5]) and g == vec([1, 2])
    assert prod.embed(f, g) == vec([5, 1, 2])


rationals = st.builds(
    Fraction,
    st.integers(min_value=-4, max_value=4),
    st.integers(min_value=1, max_value=3),
)


@st.composite
def space_and_subspaces(draw):
    n = draw(st.integers(min_value=1, max_value=4))
    b = mat([[draw(rationals) for _ in range(n)] for _ in range(n)])
    space = InnerProductSpace(n, (b.T @ b) + mat([[1 if i == j else 0 for j in range(n)] for i in range(n)]))
    nv = draw(st.integers(min_value=0, max_value=n))
    nw = draw(st.integers(min_value=0, max_value=n))
    v = span(space, [[draw(rationals) for _ in range(n)] for _ in range(nv)])
    w = span(space, [[draw(rationals) for _ in range(n)] for _ in range(nw)])
    return space, v, w


@given(space_and_subspaces())
@settings(max_examples=40, deadline=None)
def test_complement_involution_and_dimension(data):
    space, v, _ = data
    comp = complement(v)
    assert v.dim + comp.dim == space.dim
    assert intersect(v, comp) == zero_subspace(space)
    assert complement(comp) == v


@given(space_and_subspaces())
@settings(max_examples=40, deadline=None)
def test_de_morgan(data):
    _, v, w = data
    assert complement(subspace_sum(v, w)) == intersect(complement(v), complement(w))


@given(space_and_subspaces())
@settings(max_examples=40, deadline=None)
def test_modular_dimension_formula(data):
    _, v, w = data
    assert subspace_sum(v, w).dim == v.dim + w.dim - intersect(v, w).dim


@given(space_and_subspaces())
@settings(max_examples=40, deadline=None)
def test_projection_idempotent_and_gram_symmetric(data):
    space, v, _ = data
    x = tuple(Fraction(i + 1, 3) for i in range(space.dim))
    y = tuple(Fraction(2 * i - 1, 2) for i in range(space.dim))
    px = project(x, v)
    assert project(px, v) == px
    assert member(px, v)
    # (Gx)^T P y == (Px)^T G y, i.e. the projector is G-selfadjoint.
    assert space.inner(x, project(y, v)) == space.inner(px, y)
    g = gram_on(v)
    assert g.is_symmetric()
