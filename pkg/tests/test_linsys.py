from fractions import Fraction

import pytest

from src.code.linsys import (
    LinForm,
    RelationSet,
    SymbolicSeries,
    UnknownId,
    UnknownKind,
    apply_relations,
    build_fTv,
    build_symbolic_ab,
    changeables,
    get_relations,
    unknown_less,
)
from src.code.polycore import X, Y, pbar

a, b = UnknownId.a, UnknownId.b


def _system(p, j):
    extension = pbar(p, j)
    n = 2 * j - 2 + extension.e1_degree()
    sa, sb = build_symbolic_ab(j, n)
    return extension, n, sa, sb, build_fTv(j, extension, sa, sb)


def test_a_unknowns_dominate_b_unknowns():
    assert unknown_less(b(9, 9), a(1, 0))
    assert not unknown_less(a(1, 0), b(9, 9))


def test_order_within_a_kind():
    assert unknown_less(a(1, 1), a(2, 0))
    assert unknown_less(b(2, 0), b(2, 1))
    assert sorted([a(2, 0), b(2, 1), a(1, 1), b(2, 0)], reverse=True) == [a(2, 0), a(1, 1), b(2, 1), b(2, 0)]


def test_unknown_text():
    assert str(b(6, 9)) == "b_{6,9}"
    assert str(LinForm({b(6, 9): 1, b(5, 6): -1})) == "b_{6,9} - b_{5,6}"


def test_symbolic_counts_for_j2():
    sa, sb = build_symbolic_ab(2, 3)
    assert len(sa.unknowns()) == 10
    assert len(sb.unknowns()) == 18
    assert a(2, 3) not in sa.unknowns()
    sa.check_bounds(2, 3)
    sb.check_bounds(2, 3)


def test_symbolic_ab_needs_enough_room():
    with pytest.raises(ValueError):
        build_symbolic_ab(3, 3)


def test_fTv_coefficients_for_x():
    _, n, _, _, fTv = _system(X, 2)
    assert n == 3
    assert fTv[(0, 2)] == LinForm.unknown(a(0, 0))
    assert fTv[(2, 3)] == LinForm({a(2, 1): 1, b(1, 3): 1})


def test_fake_relation_coefficient():
    _, n, _, _, fTv = _system(X**2 - Y**3, 3)
    assert n == 7
    assert fTv[(8, 9)] == LinForm({b(6, 9): 1, b(5, 6): -1})


def test_relations_for_x():
    _, _, _, _, fTv = _system(X, 2)
    relations = get_relations(fTv)
    assert a(0, 0) in relations.nonfree
    assert LinForm.unknown(a(0, 0)) in relations.rows


def test_fake_relation_is_generated():
    _, _, _, _, fTv = _system(X**2 - Y**3, 3)
    relations = get_relations(fTv)
    fake = LinForm({b(6, 9): 1, b(5, 6): -1})
    assert fake in relations.generating
    assert relations.origins[relations.generating.index(fake)] == (8, 9)
    assert fake.leading() == b(6, 9)


def test_no_changeable_in_relations_beyond_the_cutoff():
    j = 3
    _, _, sa, sb, fTv = _system(X**2 - Y**3, j)
    relations = get_relations(fTv)
    chosen = set(changeables(j, sa.unknowns() | sb.unknowns(), relations.nonfree))
    assert chosen and all(u.i <= 2 * j - 2 for u in chosen)
    for form in [*relations.generating, *relations.rows]:
        if all(u.i > 2 * j - 2 for u in form.terms):
            assert not form.support() & chosen


def test_only_monomials_above_the_diagonal_give_relations():
    _, _, _, _, fTv = _system(X**2 - Y**3, 3)
    relations = get_relations(fTv)
    assert all(l > i for i, l in relations.origins)
    assert len(relations.origins) == sum(1 for (i, l) in fTv.coeffs if l > i)


@pytest.mark.parametrize("p, j", [(X, 2), (X * Y, 2), (X**2 - Y**3, 3), (X**3 - X**2 * Y + Y**3, 3)])
def test_echelon_and_single_a_properties(p, j):
    _, _, _, _, fTv = _system(p, j)
    relations = get_relations(fTv)
    leads = [row.leading() for row in relations.rows]
    assert len(set(leads)) == len(leads)
    for row in relations.rows:
        assert row.coeff(row.leading()) == 1
        others = set(leads) - {row.leading()}
        assert not row.support() & others
    for form in [*relations.generating, *relations.rows]:
        assert sum(1 for u in form.terms if u.kind is UnknownKind.A) <= 1


@pytest.mark.parametrize("p, j", [(X, 2), (X**2 - Y**3, 3), (X**2 * Y, 3)])
def test_applied_series_only_mentions_free_unknowns(p, j):
    extension, _, sa, sb, fTv = _system(p, j)
    relations = get_relations(fTv)
    free_a = apply_relations(sa, relations)
    free_b = apply_relations(sb, relations)
    assert not (free_a.unknowns() | free_b.unknowns()) & relations.nonfree
    reduced = build_fTv(j, extension, free_a, free_b)
    # any assignment of the free unknowns kills every coefficient above the diagonal
    for (i, l), form in reduced.items():
        if l > i:
            assert form.is_zero()
    assert not get_relations(reduced).pivots


def test_x_relation_removes_a00():
    _, _, sa, _, fTv = _system(X, 2)
    free_a = apply_relations(sa, get_relations(fTv))
    assert a(0, 0) not in free_a.unknowns()


def test_applying_empty_relations_is_identity():
    sa, _ = build_symbolic_ab(2, 3)
    assert apply_relations(sa, RelationSet()) is sa


def test_changeables_exclusions_and_order():
    sa, sb = build_symbolic_ab(2, 3)
    everything = sa.unknowns() | sb.unknowns()
    chosen = changeables(2, everything, set())
    assert len(chosen) == 18
    assert chosen == sorted(chosen, reverse=True)
    assert all(u.i <= 2 for u in chosen)
    assert a(0, 0) not in changeables(2, everything, {a(0, 0)})


def test_scaling_p_scales_only_b_contributions():
    j = 3
    sa, sb = build_symbolic_ab(j, 7)
    base = build_fTv(j, pbar(X**2 - Y**3, j), sa, sb)
    scaled = build_fTv(j, pbar((X**2 - Y**3) * Fraction(7, 3), j), sa, sb)
    for mono, form in base.items():
        other = scaled[mono]
        for u, c in form.terms.items():
            factor = 1 if u.kind is UnknownKind.A else Fraction(7, 3)
            assert other.coeff(u) == c * factor


def test_relation_set_back_substitutes():
    relations = RelationSet()
    relations.add(LinForm({b(2, 0): 1, b(1, 0): 1}))
    relations.add(LinForm({b(1, 0): 1, b(0, 0): -1}))
    assert relations.pivots[b(2, 0)] == LinForm({b(2, 0): 1, b(0, 0): 1})
    assert relations.solve_for(b(2, 0)) == LinForm({b(0, 0): -1})
    assert relations.solve_for(b(0, 0)) is None
    assert relations.add(LinForm({b(2, 0): 2, b(0, 0): 2})) is None
    assert len(relations.generating) == 3


def test_series_specialization():
    series = SymbolicSeries({(1, 0): LinForm({a(0, 0): 2, b(0, 0): 1}), (2, 1): LinForm({a(0, 0): -1})})
    assert dict(series.specialize(a(0, 0)).terms) == {(1, 0): 2, (2, 1): -1}
    assert series.specializations()[b(0, 0)] == series.specialize(b(0, 0))
