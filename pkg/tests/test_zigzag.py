import pytest

from altpoly.rationals import rat
from altpoly.trees import average_alt_count
from altpoly.zigzag import (
    asymptotic_check,
    brute_alternating_count,
    expected_count,
    sec_tan_series,
    zigzag_numbers,
)


def test_small_values():
    table = zigzag_numbers(8)
    assert table.tilde[:5] == (1, 1, 2, 4, 10)
    assert table.euler[:8] == (1, 1, 1, 2, 5, 16, 61, 272)
    assert all(t % 2 == 0 for t in table.tilde[2:])


@pytest.mark.parametrize("n", range(0, 9))
def test_matches_brute_force(n):
    assert zigzag_numbers(n).tilde[n] == brute_alternating_count(n)


def test_brute_bound():
    with pytest.raises(ValueError):
        brute_alternating_count(11)


def test_sec_tan_coefficients():
    coeffs = sec_tan_series(12)
    assert coeffs[0] == 1
    assert coeffs[4] == rat(5, 24)
    table = zigzag_numbers(12)
    fact = 1
    for k in range(13):
        if k:
            fact *= k
        value = coeffs[k] * fact
        assert value == table.euler[k], k


def test_expected_count():
    assert expected_count(2) == 2
    assert expected_count(3) == rat(8, 3)
    for n in range(1, 7):
        assert expected_count(n) == average_alt_count(n), n


def test_asymptotics():
    r10 = asymptotic_check(10)
    assert r10.density_error() < 1e-3
    r15 = asymptotic_check(15)
    assert r15.density_error() < 1e-5
    errors = [asymptotic_check(n).density_error() for n in range(10, 22)]
    assert all(a > b for a, b in zip(errors, errors[1:]))
    # expected-count form converges to the same limit
    assert asymptotic_check(15).expected_error() < 1e-4


def test_growth_eventually_beats_expectation():
    # 6^{1/4} > 4/pi: the exact maxima overtake the mean at small n already
    from altpoly.pipeline import Registry, check_tables

    reg = Registry()
    report = check_tables(reg, 12)
    r = {case["n"]: case["r"] for case in report.cases}
    first = next(n for n in sorted(r) if rat(r[n]) > rat(expected_count(n)))
    assert first == 3
