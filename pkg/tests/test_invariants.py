from fractions import Fraction

import pytest

from src.code.errors import InstantonInputError, InstantonInternalError
from src.code.golden import load_corpus
from src.code.invariants import (
    InstantonResult,
    charge,
    classical_invariants,
    compute_instanton,
    instanton_height,
    instanton_width,
    milnor,
    multiplicity,
    polyconv,
    setvectors,
    strip_common_monomial,
    tjurina,
    width_with_trace,
)
from src.code.linsys import UnknownId, build_symbolic_ab
from src.code.modgb import FreeVector
from src.code.polycore import X, Y, BiPoly, TruncationMode

U = BiPoly.monomial(1, 0)
Z = BiPoly.monomial(0, 1)

CORPUS = load_corpus()
SLOW_TABLES = {"III", "VII", "VIII"}


def _golden_params(rows):
    return [
        pytest.param(row, id=row.label, marks=[pytest.mark.slow] if row.table in SLOW_TABLES else [])
        for row in rows
    ]


FAST_ROWS = [
    (X, 2, 1),
    (X * Y, 2, 2),
    (X**2, 3, 3),
    (X**2 * Y, 3, 4),
    (Y**2, 3, 3),
    (X**3 - X**2 * Y + Y**3, 3, 4),
]


def test_height_examples():
    assert instanton_height(X, 2) == 1
    assert instanton_height(X**2 - Y**3, 3) == 3
    assert instanton_height(X**2 - Y**2, 7) == 11
    assert instanton_height(X**3 - Y**3, 8) == 18


def test_polyconv_drops_terms_above_the_diagonal():
    assert polyconv(U**3 * Z + U * Z**2 + 2 * U**2) == X**2 * Y + 2 * X**2
    assert polyconv(BiPoly.zero()).is_zero()


def test_setvectors_gives_one_generator_per_changeable():
    j, n = 2, 3
    a, b = build_symbolic_ab(j, n)
    chosen = [UnknownId.a(1, 0), UnknownId.b(0, 2)]
    gens = setvectors(a.shifted(n + j), b.shifted(n + j), chosen)
    # a_{1,0} sits at u^1 z^0, b_{0,2} at u^0 z^2; both shifted by u^5
    assert gens == [FreeVector([X**6, BiPoly.zero()]), FreeVector([BiPoly.zero(), X**3 * Y**2])]


def test_strip_common_monomial():
    stripped, factor = strip_common_monomial([FreeVector([X**2 * Y, X * Y**2])])
    assert factor == (1, 1)
    assert stripped == [FreeVector([X, Y])]
    untouched, factor = strip_common_monomial([FreeVector([X, Y])])
    assert factor == (0, 0) and untouched == [FreeVector([X, Y])]


def test_width_of_a_smooth_branch():
    assert instanton_width(X, 2) == 1
    assert charge(X, 2) == 2


@pytest.mark.parametrize("row", _golden_params(CORPUS))
def test_golden_row(row):
    result = compute_instanton(row.polynomial(), row.j)
    assert (result.w, result.h, result.charge) == (row.w, row.h, row.charge)


@pytest.mark.parametrize("row", _golden_params([r for r in CORPUS if r.has_classical]))
def test_golden_classical_columns(row):
    c = classical_invariants(row.polynomial())
    assert c.multiplicity == row.m
    assert c.milnor.value == row.mu
    assert c.tjurina.value == row.tau
    assert c.tjurina.value <= c.milnor.value


def _wh(p, j):
    result = compute_instanton(p, j)
    return result.w, result.h


@pytest.mark.parametrize("c", [2, -1, Fraction(7, 3)])
@pytest.mark.parametrize("p, j, w", FAST_ROWS)
def test_width_and_height_ignore_nonzero_scaling(p, j, w, c):
    scaled = _wh(p * c, j)
    assert scaled == _wh(p, j)
    assert scaled[0] == w


@pytest.mark.parametrize(
    "p, q, j",
    [
        (X, Y, 2),
        (X**2 * Y, X * Y**2, 3),
        (X**2, Y**2, 3),
        (X**3 - X**2 * Y + Y**3, (X**3 - X**2 * Y + Y**3).swap(), 3),
    ],
)
def test_width_and_height_are_symmetric_in_x_and_y(p, q, j):
    assert _wh(p, j) == _wh(q, j)


@pytest.mark.parametrize("shift", [0, 1, 2])
@pytest.mark.parametrize("p, j, w", FAST_ROWS[:4])
def test_width_ignores_extra_u_shift(p, j, w, shift):
    assert instanton_width(p, j, shift=shift, strip_common_factor=False) == w


def test_strict_truncation_keeps_simple_rows():
    assert compute_instanton(X, 2, TruncationMode.STRICT).w == 1
    assert instanton_width(X**2 - Y**3, 3, TruncationMode.STRICT) == instanton_width(X**2, 3)


@pytest.mark.parametrize(
    "p, j, message",
    [
        (X**5, 2, "trivial extension class"),
        (1 + X, 2, "does not pass through the origin"),
        (X, 1, "at least 2"),
        (BiPoly.zero(), 3, "zero polynomial"),
    ],
)
def test_invalid_inputs(p, j, message):
    with pytest.raises(InstantonInputError, match=message):
        compute_instanton(p, j)


def test_classical_invariants_of_a_node():
    node = X**2 - Y**2
    assert multiplicity(node) == 2
    assert milnor(node).value == 1
    assert tjurina(node).value == 1
    assert not milnor(X**2, n_max=8).is_finite
    with pytest.raises(InstantonInputError):
        multiplicity(1 + X)


def test_trace_records_pipeline_sizes():
    width, trace = width_with_trace(X**2 - Y**3, 3, debug_checks=True)
    assert trace.n == 7
    assert trace.width == width
    assert trace.a_shape[0] == trace.basis_size
    assert trace.b_shape[0] == trace.basis_size
    assert trace.changeable_count >= trace.generator_count > 0
    assert "N=7" in trace.summary()


def test_debug_checks_pass_on_table_rows():
    assert instanton_width(X**3 - X**2 * Y + Y**3, 3, debug_checks=True) == 4
    assert instanton_width(X * Y, 2, debug_checks=True) == 2


def test_computation_is_deterministic():
    p = X**3 - X**2 * Y**2 + Y**3
    first = width_with_trace(p, 3)
    second = width_with_trace(p, 3)
    assert first == second
    assert first[0] == 5


def test_result_checks_charge():
    with pytest.raises(InstantonInternalError):
        InstantonResult(p=X, j=2, pbar_mode=TruncationMode.DEFAULT, w=1, h=1, charge=3)


def test_compute_with_classical():
    result = compute_instanton(X**3 - X**2 * Y + Y**3, 3, classical=True)
    assert (result.w, result.h, result.charge) == (4, 3, 7)
    assert result.classical.multiplicity == 3
    assert result.classical.milnor.value == 4
