"""Self-contained numerical kernel.

Dense least squares via Householder QR, log-gamma, the regularized
incomplete beta function, Student-t and F tail probabilities, and an
Anderson-Darling normality test. Nothing here knows about projects or
effort; the regression layer builds on these primitives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CollinearityError, DegenerateInputError, DomainError

RANK_PIVOT_THRESHOLD = 1e-10

AD_CRITICAL_95 = 0.752

_BETA_EPS = 1e-14
_BETA_TINY = 1e-300
_BETA_MAX_ITER = 500


@dataclass(frozen=True, slots=True)
class LinearSystemSolution:
    coefficients: np.ndarray
    residual_sum_of_squares: float
    unscaled_covariance: np.ndarray
    rank: int


@dataclass(frozen=True, slots=True)
class NormalityReport:
    statistic: float
    critical_value: float
    alpha: float
    is_normal_at_95: bool
    test_name: str = "anderson-darling"


def solve_least_squares(design: np.ndarray,
                        response: np.ndarray) -> LinearSystemSolution:
    """Minimize ||design @ beta - response|| by Householder QR."""
    X = np.asarray(design, dtype=float)
    y = np.asarray(response, dtype=float)
    if X.ndim != 2:
        raise DomainError("design must be a 2-d matrix")
    n, p = X.shape
    if p < 1 or n < p:
        raise DomainError(f"need rows >= columns >= 1, got {n}x{p}")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise DomainError("design and response must be finite")

    Q, R = np.linalg.qr(X)
    diag = np.abs(np.diag(R))
    scale = diag.max()
    if scale == 0.0:
        raise CollinearityError("design matrix is zero", column=0)
    small = diag < RANK_PIVOT_THRESHOLD * scale
    if small.any():
        col = int(np.nonzero(small)[0][0])
        raise CollinearityError(
            f"column {col} is linearly dependent on earlier columns",
            column=col,
        )

    qty = Q.T @ y
    beta = _back_substitute(R, qty)
    resid = y - X @ beta
    rss = float(resid @ resid)
    r_inv = _back_substitute_matrix(R, np.eye(p))
    unscaled = r_inv @ r_inv.T
    return LinearSystemSolution(
        coefficients=beta,
        residual_sum_of_squares=rss,
        unscaled_covariance=unscaled,
        rank=p,
    )


def _back_substitute(R: np.ndarray, b: np.ndarray) -> np.ndarray:
    p = R.shape[1]
    x = np.zeros(p)
    for i in range(p - 1, -1, -1):
        x[i] = (b[i] - R[i, i + 1:] @ x[i + 1:]) / R[i, i]
    return x


def _back_substitute_matrix(R: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.column_stack([_back_substitute(R, B[:, j])
                            for j in range(B.shape[1])])


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    if x <= 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) by the continued-fraction expansion (Lentz's method)."""
    if a <= 0 or b <= 0:
        raise DomainError("shape parameters must be positive")
    if x < 0 or x > 1:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def _beta_cf(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _BETA_TINY:
        d = _BETA_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAX_ITER + 1):
        m2 = 2 * m
        coef = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + coef * d
        if abs(d) < _BETA_TINY:
            d = _BETA_TINY
        c = 1.0 + coef / c
        if abs(c) < _BETA_TINY:
            c = _BETA_TINY
        d = 1.0 / d
        h *= d * c
        coef = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + coef * d
        if abs(d) < _BETA_TINY:
            d = _BETA_TINY
        c = 1.0 + coef / c
        if abs(c) < _BETA_TINY:
            c = _BETA_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_EPS:
            return h
    raise DomainError(
        f"incomplete beta failed to converge for a={a}, b={b}, x={x}"
    )


def t_two_sided_p(t: float, df: int) -> float:
    """Two-sided tail probability of Student-t with df degrees of freedom."""
    if df < 1:
        raise DomainError(f"df must be >= 1, got {df}")
    if math.isnan(t):
        raise DomainError("t must be a number")
    if math.isinf(t):
        return 0.0
    x = df / (df + t * t)
    return min(1.0, regularized_incomplete_beta(df / 2.0, 0.5, x))


def f_upper_tail_p(f: float, df1: int, df2: int) -> float:
    """Upper-tail probability of the F distribution."""
    if df1 < 1 or df2 < 1:
        raise DomainError("degrees of freedom must be >= 1")
    if f < 0:
        raise DomainError(f"f must be >= 0, got {f}")
    if math.isinf(f):
        return 0.0
    x = df2 / (df2 + df1 * f)
    return min(1.0, regularized_incomplete_beta(df2 / 2.0, df1 / 2.0, x))


def _normal_cdf(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.vectorize(math.erf)(z / math.sqrt(2.0)))


def normality_test(sample, alpha: float = 0.05) -> NormalityReport:
    """Anderson-Darling test with estimated mean and variance (case 3).

    The statistic uses the small-sample adjustment
    A2 * (1 + 0.75/n + 2.25/n^2) and the 0.752 critical value at the
    95% level.
    """
    x = np.sort(np.asarray(sample, dtype=float))
    n = len(x)
    if n < 8:
        raise DomainError(f"need at least 8 observations, got {n}")
    if alpha != 0.05:
        raise DomainError("only alpha=0.05 is supported")
    mu = x.mean()
    sd = x.std(ddof=1)
    if sd == 0.0:
        raise DegenerateInputError("sample is constant")
    z = _normal_cdf((x - mu) / sd)
    z = np.clip(z, 1e-15, 1.0 - 1e-15)
    i = np.arange(1, n + 1)
    a2 = -n - np.mean((2 * i - 1) * (np.log(z) + np.log(1.0 - z[::-1])))
    adjusted = a2 * (1.0 + 0.75 / n + 2.25 / n ** 2)
    return NormalityReport(
        statistic=float(adjusted),
        critical_value=AD_CRITICAL_95,
        alpha=alpha,
        is_normal_at_95=bool(adjusted < AD_CRITICAL_95),
    )
