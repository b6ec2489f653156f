"""
The heuristic expected count M_p = p^(3p^3) * (p!/p^p)^((p+1)p^2).

M_p is astronomically large or small, so it is evaluated in log space with
mpmath at an explicit working precision; the exact rational value is also
available for small p as a cross-check.
"""

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Any, Dict, Iterable, Iterator, List, Tuple

import mpmath

from ..models.field import PrimeLike, as_prime
from ..utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_DPS = 60
DISPLAY_DIGITS = 2


@contextmanager
def _precision(dps: int) -> Iterator[None]:
    with mpmath.workdps(dps):
        yield


@dataclass(frozen=True)
class LogMagnitude:
    """A positive quantity held as its base-10 logarithm."""
    log10_value: Any  # mpmath.mpf
    dps: int = DEFAULT_DPS

    @property
    def exponent(self) -> int:
        with _precision(self.dps):
            return int(mpmath.floor(self.log10_value))

    @property
    def mantissa(self) -> Any:
        with _precision(self.dps):
            return mpmath.power(10, self.log10_value - self.exponent)

    def rounded(self, digits: int = DISPLAY_DIGITS) -> Tuple[str, int]:
        """Mantissa string with `digits` significant digits and the matching exponent."""
        exponent = self.exponent
        with _precision(self.dps):
            scaled = int(mpmath.nint(self.mantissa * 10 ** (digits - 1)))
            if scaled >= 10 ** digits:
                exponent += 1
                scaled = int(mpmath.nint(self.mantissa * 10 ** (digits - 2)))
        digits_text = str(scaled)
        text = digits_text[0] + ("." + digits_text[1:] if digits > 1 else "")
        return text, exponent

    def display(self, digits: int = DISPLAY_DIGITS) -> str:
        """The table form, e.g. '1.4E15'."""
        text, exponent = self.rounded(digits)
        return f"{text}E{exponent}"

    def __str__(self) -> str:
        return self.display()

    def to_dict(self) -> Dict[str, Any]:
        text, exponent = self.rounded()
        with _precision(self.dps):
            log_text = mpmath.nstr(self.log10_value, 20)
        return {'log10': log_text, 'mantissa': text, 'exponent': exponent, 'display': self.display()}


def log10_factorial(p: int, dps: int = DEFAULT_DPS) -> Any:
    """log10(p!) as the finite sum of log10(k)."""
    with _precision(dps):
        return mpmath.fsum(mpmath.log10(k) for k in range(2, p + 1))


def log_m_p(p: PrimeLike, dps: int = DEFAULT_DPS) -> LogMagnitude:
    """log10 M_p = 3p^3 log10 p + (p+1)p^2 (log10 p! - p log10 p)."""
    q = as_prime(p).value
    with _precision(dps):
        log_p = mpmath.log10(q)
        value = 3 * q ** 3 * log_p + (q + 1) * q ** 2 * (log10_factorial(q, dps) - q * log_p)
    logger.debug(f"log10 M_{q} computed at {dps} digits")
    return LogMagnitude(value, dps)


def ln_m_p(p: PrimeLike, dps: int = DEFAULT_DPS) -> Any:
    """Natural logarithm of M_p."""
    with _precision(dps):
        return log_m_p(p, dps).log10_value * mpmath.log(10)


def stirling_residual(p: PrimeLike, dps: int = DEFAULT_DPS) -> Any:
    """ln M_p - (-p^4 + 3.5 p^3 ln p)."""
    q = as_prime(p).value
    with _precision(dps):
        leading = -mpmath.mpf(q) ** 4 + mpmath.mpf(7) / 2 * q ** 3 * mpmath.log(q)
        return ln_m_p(q, dps) - leading


def exact_m_p(p: PrimeLike) -> Fraction:
    """M_p as an exact rational number."""
    q = as_prime(p).value
    return Fraction(q) ** (3 * q ** 3) * Fraction(factorial(q), q ** q) ** ((q + 1) * q ** 2)


def heuristic_table(primes: Iterable[PrimeLike], dps: int = DEFAULT_DPS) -> List[Tuple[int, LogMagnitude]]:
    """Rows (p, M_p) for the table printed by the CLI."""
    return [(as_prime(p).value, log_m_p(p, dps)) for p in primes]
