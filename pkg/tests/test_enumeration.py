import pytest

from galcov.enumeration import (
    EnumerationOverflow,
    coset_enumeration,
    generator_permutations,
    group_order,
    verify_table,
)
from galcov.permutations import Permutation
from galcov.presentation import GroupPresentation

from .conftest import mulclose


def cyclic(n):
    return GroupPresentation.make(("a",), [(1,) * n])


def dihedral(n):
    # <r, s | r^n, s^2, (rs)^2>
    return GroupPresentation.make(
        ("r", "s"), [(1,) * n, (2, 2), (1, 2, 1, 2)]
    )


def symmetric(n):
    # Coxeter presentation on adjacent transpositions
    names = tuple(f"s{i}" for i in range(1, n))
    relators = [(i, i) for i in range(1, n)]
    for i in range(1, n - 1):
        relators.append((i, i + 1) * 3)
    for i in range(1, n):
        for j in range(i + 2, n):
            relators.append((i, j) * 2)
    return GroupPresentation.make(names, relators)


def rotation(n):
    return Permutation(tuple(list(range(2, n + 1)) + [1]))


def reflection(n):
    return Permutation(tuple(range(n, 0, -1)))


ORACLE_CORPUS = [
    (cyclic(1), [Permutation.identity(1)]),
    (cyclic(2), [rotation(2)]),
    (cyclic(3), [rotation(3)]),
    (cyclic(6), [rotation(6)]),
    (dihedral(3), [rotation(3), reflection(3)]),
    (dihedral(4), [rotation(4), reflection(4)]),
    (dihedral(5), [rotation(5), reflection(5)]),
    (dihedral(6), [rotation(6), reflection(6)]),
    (symmetric(3), [Permutation.transposition(3, 1, 2), Permutation.transposition(3, 2, 3)]),
    (
        symmetric(4),
        [
            Permutation.transposition(4, 1, 2),
            Permutation.transposition(4, 2, 3),
            Permutation.transposition(4, 3, 4),
        ],
    ),
]


def test_cyclic_three():
    table = coset_enumeration(cyclic(3), (), 1000)
    assert group_order(table) == 3
    (a,) = generator_permutations(table)
    # a single 3-cycle on the cosets
    assert sorted(a.images) == [1, 2, 3]
    assert not a.is_identity()
    assert (a * a * a).is_identity()


def test_s3_presentation():
    p = GroupPresentation.make(("a", "b"), [(1, 1), (2, 2), (1, 2) * 3])
    table = coset_enumeration(p, (), 1000)
    # oracle: closure of the two transpositions generating S3
    oracle = mulclose(
        [Permutation.transposition(3, 1, 2), Permutation.transposition(3, 2, 3)]
    )
    assert group_order(table) == len(oracle) == 6


@pytest.mark.parametrize("pres,model", ORACLE_CORPUS, ids=lambda x: str(x)[:24])
def test_todd_coxeter_matches_cayley_oracle(pres, model):
    if isinstance(pres, GroupPresentation):
        table = coset_enumeration(pres, (), 100_000)
        assert group_order(table) == len(mulclose(model))
        verify_table(pres, table)


def test_t4_group_order(t4_presentation):
    table = coset_enumeration(t4_presentation, (), 100_000)
    assert group_order(table) == 24
    verify_table(t4_presentation, table)


def test_generator_squares_act_trivially(t4_presentation):
    table = coset_enumeration(t4_presentation, (), 100_000)
    for perm in generator_permutations(table):
        assert (perm * perm).is_identity()


def test_dt4_projective_relator_traces_identity(dt4, dt4_presentation, dt4_table):
    from galcov.presentation import projective_relator

    proj = projective_relator(dt4)
    perms = generator_permutations(dt4_table)
    acc = Permutation.identity(dt4_table.coset_count)
    for x in proj:
        g = perms[abs(x) - 1]
        acc = acc * (g if x > 0 else g.inverse())
    assert acc.is_identity()


def test_one_coset_table():
    p = GroupPresentation.make(("a",), [(1,)])
    assert group_order(coset_enumeration(p, (), 10)) == 1


def test_overflow_raises():
    p = symmetric(4)
    with pytest.raises(EnumerationOverflow) as info:
        coset_enumeration(p, (), 5)
    assert info.value.max_cosets == 5


def test_overflow_monotone():
    p = dihedral(6)
    # find the smallest bound that closes, then every larger bound must
    # close to the identical table
    bound = 1
    table = None
    while table is None:
        try:
            table = coset_enumeration(p, (), bound)
        except EnumerationOverflow:
            bound += 1
    for extra in (1, 7, 1000):
        again = coset_enumeration(p, (), bound + extra)
        assert again.rows == table.rows


def test_determinism():
    p = symmetric(4)
    t1 = coset_enumeration(p, (), 100_000)
    t2 = coset_enumeration(p, (), 100_000)
    assert t1.rows == t2.rows


def test_subgroup_enumeration_consistency():
    # |G| over trivial subgroup = index of H * |H| for dihedral examples
    p = dihedral(4)
    full = group_order(coset_enumeration(p, (), 1000))
    over_r = coset_enumeration(p, [(1,)], 1000)  # subgroup <r>
    r_alone = group_order(coset_enumeration(cyclic(4), (), 1000))
    assert full == over_r.coset_count * r_alone == 8

    p6 = dihedral(6)
    full6 = group_order(coset_enumeration(p6, (), 1000))
    over_s = coset_enumeration(p6, [(2,)], 1000)  # subgroup <s>
    s_alone = group_order(coset_enumeration(cyclic(2), (), 1000))
    assert full6 == over_s.coset_count * s_alone == 12


def test_group_order_requires_trivial_subgroup():
    p = dihedral(4)
    t = coset_enumeration(p, [(1,)], 1000)
    with pytest.raises(ValueError):
        group_order(t)


def test_relators_trace_identity_from_every_coset(dt4_presentation, dt4_table):
    verify_table(dt4_presentation, dt4_table)


def test_larger_coxeter_style_groups():
    # two harder validation targets with known orders
    f4 = GroupPresentation.make(
        ("a", "b", "c", "d"),
        [
            (1, 1), (2, 2), (3, 3), (4, 4),
            (1, 2) * 3, (2, 3) * 4, (3, 4) * 3,
            (1, 3) * 2, (1, 4) * 2, (2, 4) * 2,
        ],
    )
    assert group_order(coset_enumeration(f4, (), 200_000)) == 1152

    klein = GroupPresentation.make(
        ("a", "b"),
        [(1,) * 3, (2,) * 7, (1, 2) * 2, (1, -2, -2) * 4],
    )
    assert group_order(coset_enumeration(klein, (), 200_000)) == 168
