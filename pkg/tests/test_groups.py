import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rrzero.groups import (
    ActionError,
    DimensionError,
    FGAbelianGroup,
    FiniteGroupTable,
    GroupTableError,
    SemidirectProductGroup,
    invariant_factors,
    torsion_subgroup_and_free_quotient,
    translation_center,
)

G = FGAbelianGroup(2, (2, 6))


def elements(group, bound=4):
    free = st.lists(st.integers(-bound, bound), min_size=group.free_rank, max_size=group.free_rank)
    tors = st.tuples(*(st.integers(0, n - 1) for n in group.torsion))
    return st.builds(lambda f, t: group.element(tuple(f), tuple(t)), free, tors)


@given(elements(G), elements(G), elements(G))
def test_abelian_group_laws(x, y, z):
    assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))
    assert G.mul(x, y) == G.mul(y, x)
    assert G.mul(x, G.inv(x)) == G.identity
    assert G.mul(G.identity, x) == x


@given(elements(G), st.integers(-5, 5))
def test_power_is_repeated_multiplication(x, k):
    acc = G.identity
    for _ in range(abs(k)):
        acc = G.mul(acc, x if k > 0 else G.inv(x))
    assert G.power(x, k) == acc


def test_invariant_factors():
    assert invariant_factors([4, 6]) == (2, 12)
    assert invariant_factors([2, 3]) == (6,)
    assert invariant_factors([1, 1]) == ()
    assert FGAbelianGroup.from_cyclic(1, [4, 6]) == FGAbelianGroup(1, (2, 12))


def test_divisibility_chain_is_enforced():
    with pytest.raises(ValueError):
        FGAbelianGroup(1, (4, 6))


def test_shape_errors():
    with pytest.raises(DimensionError):
        G.element((1,), (0, 0))


def test_torsion_split_and_json():
    t, q = torsion_subgroup_and_free_quotient(G)
    assert t == FGAbelianGroup(0, (2, 6)) and q == FGAbelianGroup(2)
    x = G.element((3, -1), (1, 5))
    assert G.element_from_json(G.element_to_json(x)) == x
    assert not x.is_torsion() and G.element((0, 0), (1, 0)).is_torsion()
    assert G.order is None and t.order == 12 and t.is_locally_finite


def test_finite_table_validation():
    with pytest.raises(GroupTableError):
        FiniteGroupTable([[0, 1], [1, 1]])
    with pytest.raises(GroupTableError):
        FiniteGroupTable([[1, 0], [0, 1]])
    t = FiniteGroupTable.abelian([2, 2])
    assert t.order == 4 and t.is_abelian and t.restricts_to(FiniteGroupTable.cyclic(2))
    assert FiniteGroupTable.cyclic(6).element_order(2) == 3


def test_nonabelian_table_s3():
    perms = [(0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0), (2, 0, 1)]
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(a[b[k]] for k in range(3))] for b in perms] for a in perms]
    s3 = FiniteGroupTable(table, "S3")
    assert not s3.is_abelian
    assert all(s3.mul(x, s3.inv(x)) == 0 for x in s3.elements())


def hand_mul(A, x, y):
    """(v1, h1)(v2, h2) = (v1 + A(h1) v2, h1 h2) expanded by hand for one acting generator of order 2."""
    (v1, h1), (v2, h2) = x, y
    m = A if h1 == 1 else [[int(i == j) for j in range(len(v1))] for i in range(len(v1))]
    w = tuple(v1[i] + sum(m[i][j] * v2[j] for j in range(len(v2))) for i in range(len(v1)))
    return w, (h1 + h2) % 2


@settings(max_examples=100)
@given(
    st.tuples(st.lists(st.integers(-5, 5), min_size=2, max_size=2), st.integers(0, 1)),
    st.tuples(st.lists(st.integers(-5, 5), min_size=2, max_size=2), st.integers(0, 1)),
)
def test_semidirect_law_matches_hand_expansion(x, y):
    A = [[0, 1], [1, 0]]
    S = SemidirectProductGroup.from_generator_action(2, (2,), [A])
    gx, gy = S.element(tuple(x[0]), x[1]), S.element(tuple(y[0]), y[1])
    w, h = hand_mul(A, (tuple(x[0]), x[1]), (tuple(y[0]), y[1]))
    assert S.mul(gx, gy) == S.element(w, h)
    assert S.mul(gx, S.inv(gx)) == S.identity


def test_semidirect_validation():
    with pytest.raises(ActionError):
        SemidirectProductGroup.from_generator_action(1, (2,), [[[2]]])
    with pytest.raises(ActionError):
        # order-3 rotation cannot be the image of an order-2 generator
        SemidirectProductGroup.from_generator_action(2, (2,), [[[0, -1], [1, -1]]])


def test_dinf_conjugation_inverts(dinf):
    a, s = dinf.element((1,), 0), dinf.element((0,), 1)
    assert dinf.conjugate(s, a) == dinf.element((-1,), 0)
    assert not dinf.is_abelian


def test_translation_center(dinf):
    assert translation_center(dinf).rank == 0
    swap = SemidirectProductGroup.from_generator_action(2, (2,), [[[0, 1], [1, 0]]])
    c = translation_center(swap)
    assert c.rank == 1 and c.contains((1, 1)) and not c.contains((1, 0))


def test_random_elements_are_reproducible(dinf):
    a = [dinf.random_element(np.random.default_rng(3)) for _ in range(5)]
    b = [dinf.random_element(np.random.default_rng(3)) for _ in range(5)]
    assert a == b
