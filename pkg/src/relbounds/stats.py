"""Score-interval confidence bounds for exceedance frequencies."""

import math

from scipy.stats import norm

from .errors import DomainError


def _z(confidence: float) -> float:
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must lie in (0, 1), got {confidence!r}")
    # endpoint of the two-sided score interval at this level
    return float(norm.ppf(0.5 + confidence / 2.0))


def _wilson(successes: int, trials: int, confidence: float, sign: int) -> float:
    if trials < 1 or not 0 <= successes <= trials:
        raise DomainError("need 0 <= successes <= trials and trials >= 1")
    z = _z(confidence)
    n = trials
    p = successes / n
    z2 = z * z
    centre = p + z2 / (2 * n)
    spread = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n))
    return (centre + sign * spread) / (1 + z2 / n)


def frequency_upper(successes: int, trials: int, confidence: float = 0.99) -> float:
    """Wilson score upper bound; equals ``z^2 / (n + z^2)`` at zero successes."""
    if successes == trials:
        _wilson(successes, trials, confidence, 1)  # validate arguments
        return 1.0
    return min(1.0, _wilson(successes, trials, confidence, +1))


def frequency_lower(successes: int, trials: int, confidence: float = 0.99) -> float:
    if successes == 0:
        _wilson(successes, trials, confidence, -1)
        return 0.0
    return max(0.0, _wilson(successes, trials, confidence, -1))
