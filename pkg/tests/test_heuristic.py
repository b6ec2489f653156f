from fractions import Fraction

import mpmath
import pytest
from sympy import primerange

from partial_steinhaus.core.heuristic import (
    LogMagnitude,
    exact_m_p,
    heuristic_table,
    ln_m_p,
    log10_factorial,
    log_m_p,
    stirling_residual,
)

PUBLISHED_ROWS = [
    (3, "1.4E15"),
    (5, "5.8E49"),
    (7, "1.0E2"),
    (11, "1.1E-1438"),
    (13, "4.0E-3748"),
]


@pytest.mark.parametrize("p, display", PUBLISHED_ROWS)
def test_published_table(p, display):
    assert log_m_p(p).display() == display


def test_table_rows_are_ordered():
    rows = heuristic_table([3, 5, 7, 11, 13])
    assert [p for p, _ in rows] == [3, 5, 7, 11, 13]
    assert [m.display() for _, m in rows] == [d for _, d in PUBLISHED_ROWS]


def test_exact_m_3():
    exact = exact_m_p(3)
    assert exact == Fraction(3 ** 9 * 2 ** 36)
    assert exact.denominator == 1
    with mpmath.workdps(60):
        expected = mpmath.log10(mpmath.mpf(3 ** 9 * 2 ** 36))
        assert abs(log_m_p(3).log10_value - expected) < mpmath.mpf(10) ** -40


@pytest.mark.parametrize("p", [5, 7])
def test_exact_matches_log(p):
    exact = exact_m_p(p)
    with mpmath.workdps(60):
        expected = mpmath.log10(mpmath.mpf(exact.numerator)) - mpmath.log10(mpmath.mpf(exact.denominator))
        assert abs(log_m_p(p).log10_value - expected) < mpmath.mpf(10) ** -30


def test_log10_factorial():
    with mpmath.workdps(60):
        assert abs(log10_factorial(10) - mpmath.log10(3628800)) < mpmath.mpf(10) ** -50
        assert log10_factorial(1) == 0


@pytest.mark.parametrize("p", [31, 101])
def test_stirling_residual_bound(p):
    assert abs(stirling_residual(p)) <= p ** 3


def test_natural_log():
    with mpmath.workdps(60):
        assert abs(ln_m_p(3) - mpmath.log(mpmath.mpf(3 ** 9 * 2 ** 36))) < mpmath.mpf(10) ** -40


def test_blow_down():
    values = [log_m_p(p).log10_value for p in primerange(11, 201)]
    assert all(v < 0 for v in values)
    assert all(b < a for a, b in zip(values, values[1:]))
    assert log_m_p(13).log10_value < 0


@pytest.mark.parametrize("p", list(primerange(3, 201)))
def test_precision_independence(p):
    assert log_m_p(p, dps=60).display() == log_m_p(p, dps=120).display()


def test_rounding_carries_into_exponent():
    with mpmath.workdps(60):
        magnitude = LogMagnitude(mpmath.log10(mpmath.mpf("9.96")) + 4)
        assert magnitude.display() == "1.0E5"
        assert magnitude.display(3) == "9.96E4"
        assert LogMagnitude(mpmath.mpf(2)).display() == "1.0E2"
        assert LogMagnitude(mpmath.log10(mpmath.mpf("1.44")) - 3).display(1) == "1E-3"
