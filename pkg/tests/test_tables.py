import math
from fractions import Fraction

import pytest

from smallball.errors import ResolutionError
from smallball.reports import FAIL, PASS
from smallball.tables import (
    check_row,
    grid_optimum,
    load_tables,
    regular_configuration,
    table_check,
    validate_rows,
    verify_configuration,
)

PENTAGON_R = 0.5 / math.sin(math.pi / 5)


def test_unit_side_pentagon_sits_on_the_threshold():
    # side exactly 1 is not a strict separation, so the closed threshold fails
    at = verify_configuration(regular_configuration(5, PENTAGON_R), PENTAGON_R)
    assert at.status == FAIL
    r = PENTAGON_R * 1.001
    above = verify_configuration(regular_configuration(5, r), r)
    assert above.status == PASS and above.lhs == 5


def test_centered_hexagon():
    ok = verify_configuration(regular_configuration(6, 1.05, center=True), 1.05, centered=True)
    assert ok.status == PASS and ok.lhs == 7
    tight = verify_configuration(regular_configuration(6, 1.0, center=True), 1.0, centered=True)
    assert tight.status == FAIL
    missing = verify_configuration(regular_configuration(6, 1.05), 1.05, centered=True)
    assert missing.status == FAIL


def test_table_rows_contiguous_and_kissing_row_present():
    tables = load_tables()
    for name, start in (("N+", 0.0), ("N-", 1.0)):
        validate_rows(tables[name].rows, start)
    kissing = [row for row in tables["N-"].rows if row.kissing_row]
    assert [row.value for row in kissing] == [7]
    assert math.isclose(kissing[0].r_hi.value, 0.5 / math.sin(math.pi / 7))
    assert 6 not in [row.value for row in tables["N+"].rows]


def test_small_rows_by_grid():
    rows = {row.value: row for row in load_tables()["N+"].rows}
    assert check_row(rows[1], False).status == PASS
    value, points, _ = grid_optimum(Fraction(11, 20), Fraction(1, 50))
    assert value == 2 and len(points) == 2


def test_n_minus_nine_row():
    row = next(r for r in load_tables()["N-"].rows if r.value == 9)
    assert math.isclose(row.r_lo.value, 0.5 / math.sin(math.pi / 8))
    assert math.isclose(row.r_hi.value, 0.5 / math.sin(math.pi / 9))


def test_coarse_pitch_refused():
    with pytest.raises(ResolutionError):
        table_check("N+", pitch=Fraction(1, 10))


def test_full_plus_table():
    assert table_check("N+").status == PASS
