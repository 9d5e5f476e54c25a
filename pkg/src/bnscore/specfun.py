"""Log-gamma and digamma in double precision.

Every score and entropy formula in this package reduces to sums of
``log_gamma`` and ``digamma`` evaluations, so these two functions are the
numerical foundation of everything else.  Both are scalar, pure, and safe to
call concurrently.
"""

import math

__all__ = ["log_gamma", "digamma"]

# Lanczos approximation, g = 607/128 with 15 coefficients (Godfrey's set).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_TWO_PI = 0.91893853320467274178


def _check_positive(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"{name} requires a finite argument > 0, got {x!r}")
    return x


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0.

    Relative error is below 1e-13 across [1e-4, 1e6] away from the zeros of
    ln(Gamma) at x = 1 and x = 2, where the error is instead tiny in absolute
    terms.  Raises ValueError for non-positive or non-finite arguments.
    """
    x = _check_positive(x, "log_gamma")
    if x < 0.5:
        # recurrence ln G(x) = ln G(x + 1) - ln x keeps the Lanczos sum
        # in its well-conditioned region
        return log_gamma(x + 1.0) - math.log(x)
    z = x - 1.0
    s = _LANCZOS_C[0]
    for k in range(1, 15):
        s += _LANCZOS_C[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * math.log(t) - t + math.log(s)


# Upward recurrence is applied until the argument reaches this threshold,
# after which the asymptotic (de Moivre) expansion is accurate to ~1e-15.
_ASYMPTOTIC_MIN = 10.0

# Coefficients of x^(-2k) in the asymptotic tail: -B_{2k} / (2k).
_ASYMPTOTIC_TAIL = (
    -1.0 / 12.0,
    1.0 / 120.0,
    -1.0 / 252.0,
    1.0 / 240.0,
    -1.0 / 132.0,
    691.0 / 32760.0,
    -1.0 / 12.0,
)


def digamma(x: float) -> float:
    """Digamma (psi_0) for x > 0.

    Uses the recurrence psi(x + 1) = psi(x) + 1/x to shift the argument above
    ``_ASYMPTOTIC_MIN``, then the asymptotic expansion; all terms are combined
    with ``math.fsum`` so the absolute error stays at or below 1e-12 wherever
    the result is representable that finely (for x near 1e-4 the value is
    ~ -1e4 and the error is bounded by one unit in the last place).
    """
    x = _check_positive(x, "digamma")
    terms = []
    while x < _ASYMPTOTIC_MIN:
        terms.append(-1.0 / x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    p = inv2
    for c in _ASYMPTOTIC_TAIL:
        terms.append(c * p)
        p *= inv2
    terms.append(math.log(x))
    terms.append(-0.5 * inv)
    return math.fsum(terms)
