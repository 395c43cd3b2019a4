"""High-precision constants and certified rational enclosures.

Boundary comparisons against irrational cutoffs (multiples of e, powers
x^{m/N}, ...) are decided against 50-digit rational enclosures.  A comparison
that lands inside the enclosure's error bar is ambiguous and must be flagged
by the caller (AmbiguousBoundary), never guessed.
"""

from fractions import Fraction

from mpmath import mp, mpf, exp as mp_exp

# Euler-Mascheroni constant, digits as commonly quoted; e^gamma pinned to the
# double used throughout the reports.
EULER_GAMMA = 0.5772156649
E_GAMMA = 1.7810724179901979

_DPS = 50

with mp.workdps(_DPS + 10):
    _e_hi_str = mp.nstr(mp.e + mpf(10) ** (-_DPS), _DPS + 2)
    _e_lo_str = mp.nstr(mp.e - mpf(10) ** (-_DPS), _DPS + 2)

# Certified enclosure E_LO < e < E_HI with width 2*10^-50.
E_LO = Fraction(_e_lo_str)
E_HI = Fraction(_e_hi_str)
assert E_LO < E_HI


def exp_enclosure(x, dps: int = _DPS) -> tuple[Fraction, Fraction]:
    """Rational enclosure (lo, hi) of exp(x) with width ~2*10^-dps relative."""
    with mp.workdps(dps + 10):
        val = mp_exp(mpf(x) if not isinstance(x, Fraction) else mpf(x.numerator) / x.denominator)
        eps = abs(val) * mpf(10) ** (-dps) + mpf(10) ** (-dps)
        lo = Fraction(mp.nstr(val - eps, dps + 2))
        hi = Fraction(mp.nstr(val + eps, dps + 2))
    return lo, hi


def power_enclosure(base: int, num: int, den: int, dps: int = _DPS) -> tuple[Fraction, Fraction]:
    """Rational enclosure of base**(num/den) for integer base >= 1."""
    with mp.workdps(dps + 10):
        val = mpf(base) ** (mpf(num) / den)
        eps = abs(val) * mpf(10) ** (-dps)
        lo = Fraction(mp.nstr(val - eps, dps + 2))
        hi = Fraction(mp.nstr(val + eps, dps + 2))
    return lo, hi
