"""Welch's t-test, pooled Cohen's d, and 2x2 chi-square with phi.

The t and chi-square tail probabilities come from the regularized
incomplete beta and gamma functions, evaluated with continued fractions,
so no statistical tables or external libraries are involved. Sample
standard deviations use the n-1 denominator throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import UndefinedStatisticError

_FPMIN = 1e-300
_EPS = 3e-16
_MAX_ITER = 300


@dataclass(frozen=True)
class SampleSummary:
    """Sufficient statistics of one sample: size, mean, sample sd."""

    n: int
    mean: float
    sd: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("summary needs n >= 2")
        if self.sd < 0:
            raise ValueError("sd must be nonnegative")

    @classmethod
    def from_sample(cls, xs: Sequence[float]) -> "SampleSummary":
        n = len(xs)
        if n < 2:
            raise ValueError("sample needs n >= 2")
        mean = sum(xs) / n
        var = sum((x - mean) ** 2 for x in xs) / (n - 1)
        return cls(n=n, mean=mean, sd=math.sqrt(var))


@dataclass(frozen=True)
class TestResult:
    statistic: float
    df: float
    p_value: float
    ci95: tuple[float, float] | None = None
    effect_size: float | None = None


def _beta_cont_frac(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError("incomplete beta did not converge")


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """I_x(a, b) for x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    front = math.exp(math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                     + a * math.log(x) + b * math.log1p(-x))
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cont_frac(a, b, x) / a
    return 1.0 - front * _beta_cont_frac(b, a, 1.0 - x) / b


def _gamma_series(a: float, x: float) -> float:
    """Series expansion of P(a, x), valid for x < a + 1."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cont_frac(a: float, x: float) -> float:
    """Continued fraction for Q(a, x), valid for x >= a + 1."""
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def regularized_lower_gamma(a: float, x: float) -> float:
    """P(a, x) = gamma(a, x) / Gamma(a)."""
    if a <= 0 or x < 0:
        raise ValueError("need a > 0 and x >= 0")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_series(a, x)
    return 1.0 - _gamma_cont_frac(a, x)


def chi2_sf(x: float, df: float) -> float:
    """Chi-square survival function, from the upper incomplete gamma."""
    if x <= 0.0:
        return 1.0
    a = df / 2.0
    half = x / 2.0
    if half < a + 1.0:
        return 1.0 - _gamma_series(a, half)
    return _gamma_cont_frac(a, half)


def student_t_two_sided_p(t: float, df: float) -> float:
    """P(|T| >= |t|) under Student's t with df degrees of freedom."""
    if df <= 0:
        raise ValueError("df must be positive")
    t = abs(t)
    if math.isinf(t):
        return 0.0
    return regularized_incomplete_beta(df / (df + t * t), df / 2.0, 0.5)


def student_t_cdf(t: float, df: float) -> float:
    half_p = student_t_two_sided_p(t, df) / 2.0
    return 1.0 - half_p if t >= 0 else half_p


def student_t_quantile(prob: float, df: float) -> float:
    """Inverse CDF by bisection; accurate to ~1e-13."""
    if not 0.0 < prob < 1.0:
        raise ValueError("prob must be in (0, 1)")
    if prob == 0.5:
        return 0.0
    lo, hi = -1.0, 1.0
    while student_t_cdf(lo, df) > prob:
        lo *= 2.0
    while student_t_cdf(hi, df) < prob:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if student_t_cdf(mid, df) < prob:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _as_summary(sample) -> SampleSummary:
    if isinstance(sample, SampleSummary):
        return sample
    return SampleSummary.from_sample(sample)


def welch_t_test(a, b) -> TestResult:
    """Welch's unequal-variance t-test, two-sided, with a 95% CI.

    Accepts raw samples or SampleSummary on either side. Degrees of freedom
    follow Welch-Satterthwaite and are fractional.
    """
    sa, sb = _as_summary(a), _as_summary(b)
    va = sa.sd ** 2 / sa.n
    vb = sb.sd ** 2 / sb.n
    se2 = va + vb
    if se2 == 0.0:
        raise UndefinedStatisticError("both samples have zero variance")
    diff = sa.mean - sb.mean
    t = diff / math.sqrt(se2)
    # Welch-Satterthwaite df, written over variance ratios so tiny
    # variances cannot underflow the quotient
    ra, rb = va / se2, vb / se2
    df = 1.0 / (ra ** 2 / (sa.n - 1) + rb ** 2 / (sb.n - 1))
    p = student_t_two_sided_p(t, df)
    t_crit = student_t_quantile(0.975, df)
    half_width = t_crit * math.sqrt(se2)
    return TestResult(statistic=t, df=df, p_value=p,
                      ci95=(diff - half_width, diff + half_width))


def cohens_d_pooled(a, b) -> float:
    """Cohen's d with pooled standard deviation; sign follows mean(a) - mean(b)."""
    sa, sb = _as_summary(a), _as_summary(b)
    pooled_var = (((sa.n - 1) * sa.sd ** 2 + (sb.n - 1) * sb.sd ** 2)
                  / (sa.n + sb.n - 2))
    if pooled_var == 0.0:
        raise UndefinedStatisticError("pooled standard deviation is zero")
    return (sa.mean - sb.mean) / math.sqrt(pooled_var)


def chi_square_2x2(table: Sequence[Sequence[int]]) -> TestResult:
    """Chi-square test of association on a 2x2 table, without continuity
    correction, with the phi effect size.
    """
    (a, b), (c, d) = table
    for cell in (a, b, c, d):
        if cell < 0:
            raise ValueError("counts must be nonnegative")
    n = a + b + c + d
    r1, r2 = a + b, c + d
    c1, c2 = a + c, b + d
    if min(r1, r2, c1, c2) == 0:
        raise UndefinedStatisticError("chi-square undefined with a zero marginal")
    chi2 = n * (a * d - b * c) ** 2 / (r1 * r2 * c1 * c2)
    phi = math.sqrt(chi2 / n)
    return TestResult(statistic=chi2, df=1.0, p_value=chi2_sf(chi2, 1.0),
                      effect_size=phi)
