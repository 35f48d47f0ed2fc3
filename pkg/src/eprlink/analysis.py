"""Derived quantities: threshold lengths, error-density estimation, sweeps.

The total-length concurrence of a received pair decays with distance; when at
least two error densities are positive it hits zero at a finite threshold
length, found in closed form for the symmetric special cases and by bisection
in general.  Going the other way, a measured channel error rate (QBER) at a
known total length inverts to a per-km error density under the depolarizing
model: qber = 3/4 * (1 - exp(-4 mu L)).
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

from .channel import ErrorDensities, _as_length
from .epr import LinkGeometry, _raw_concurrence, concurrence_vs_length, transmit_at_length
from .errors import DomainError, NumericError, ValidationError

__all__ = [
    "MeasurementPoint",
    "ThresholdResult",
    "SweepRow",
    "SweepTable",
    "threshold_depolarizing",
    "threshold_double_flip",
    "threshold_generic",
    "estimate_mu",
    "fit_mu",
    "sweep",
]

# Fidelity with any Bell state cannot drop below 1/4 under depolarization,
# so a channel-attributed QBER of 3/4 or more has no pre-image.
QBER_FLOOR_LIMIT = 0.75

_BISECT_TOL_KM = 1e-10
_MAX_DOUBLINGS = 60


@dataclass(frozen=True)
class MeasurementPoint:
    """One experimental observation: channel-attributed QBER at a total length."""

    qber: float
    total_length_km: float

    def __post_init__(self):
        if not isinstance(self.qber, (int, float)) or not math.isfinite(self.qber):
            raise ValidationError(f"qber must be a finite number, got {self.qber!r}")
        if self.qber < 0.0:
            raise ValidationError(f"qber must be >= 0, got {self.qber!r}")
        if self.qber >= QBER_FLOOR_LIMIT:
            raise DomainError(
                f"qber {self.qber!r} exceeds the depolarizing fidelity floor (must be < 0.75)"
            )
        length = _as_length(self.total_length_km)
        if length <= 0.0:
            raise ValidationError(f"total length must be > 0 km, got {length!r}")
        object.__setattr__(self, "qber", float(self.qber))
        object.__setattr__(self, "total_length_km", length)


@dataclass(frozen=True)
class ThresholdResult:
    """Threshold total length, or None when the concurrence never vanishes."""

    length_km: float | None

    def __post_init__(self):
        if self.length_km is not None:
            length = _as_length(self.length_km)
            if length <= 0.0:
                raise ValidationError(f"finite threshold must be > 0 km, got {length!r}")
            object.__setattr__(self, "length_km", length)

    @property
    def is_finite(self) -> bool:
        return self.length_km is not None

    @property
    def kind(self) -> str:
        return "finite" if self.is_finite else "never-vanishes"


@dataclass(frozen=True)
class SweepRow:
    length_km: float
    concurrence: float
    fidelity: float


@dataclass(frozen=True)
class SweepTable:
    """Rows of (length, concurrence, psi+ fidelity) on an increasing length grid."""

    rows: tuple[SweepRow, ...]

    def __post_init__(self):
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        for prev, cur in zip(rows, rows[1:]):
            if cur.length_km <= prev.length_km:
                raise ValidationError("sweep lengths must be strictly increasing")
            if cur.concurrence > prev.concurrence + 1e-12:
                raise ValidationError("sweep concurrence must be non-increasing")


def threshold_depolarizing(mu: float) -> ThresholdResult:
    """Threshold length ln(3) / (4 mu) of the depolarizing channel."""
    _check_mu(mu)
    if mu == 0.0:
        return ThresholdResult(None)
    return ThresholdResult(math.log(3.0) / (4.0 * mu))


def threshold_double_flip(mu: float) -> ThresholdResult:
    """Threshold length when exactly two flips occur at equal rate ``mu``.

    The root of e^2 + 2e - 1 in e = exp(-2 mu L), i.e.
    ln(1/(sqrt(2) - 1)) / (2 mu).
    """
    _check_mu(mu)
    if mu == 0.0:
        return ThresholdResult(None)
    return ThresholdResult(math.log(1.0 / (math.sqrt(2.0) - 1.0)) / (2.0 * mu))


def _check_mu(mu: float) -> None:
    if not isinstance(mu, (int, float)) or not math.isfinite(mu):
        raise ValidationError(f"error density must be a finite number, got {mu!r}")
    if mu < 0.0:
        raise ValidationError(f"error density must be >= 0, got {mu!r}")


def threshold_generic(mu: ErrorDensities) -> ThresholdResult:
    """Threshold length for arbitrary error densities, by bracketed bisection.

    With fewer than two positive densities the concurrence stays positive for
    every finite length (single-flip regime), so the result is
    never-vanishes.  Otherwise the unclamped concurrence is strictly
    decreasing; the bracket doubles from 1 km until it turns negative and is
    then bisected to 1e-10 km.  The returned length is the upper bracket end,
    so the clamped concurrence at the threshold is exactly zero.
    """
    if sum(1 for m in mu.as_tuple() if m > 0.0) < 2:
        return ThresholdResult(None)
    lo, hi = 0.0, 1.0
    for _ in range(_MAX_DOUBLINGS):
        if _raw_concurrence(mu, hi) <= 0.0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        # ~1e18 km without a sign change: numerically indistinguishable
        # from a non-vanishing concurrence.
        return ThresholdResult(None)
    while hi - lo > _BISECT_TOL_KM:
        mid = 0.5 * (lo + hi)
        if _raw_concurrence(mu, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return ThresholdResult(hi)


def estimate_mu(point: MeasurementPoint) -> float:
    """Per-km error density implied by one QBER observation.

    Inverts qber = 3/4 * (1 - exp(-4 mu L)) for the depolarizing model:
    mu = -ln((3 - 4 qber) / 3) / (4 L), in 1/km.
    """
    return -math.log((3.0 - 4.0 * point.qber) / 3.0) / (4.0 * point.total_length_km)


def _qber_model(mu: float, length_km: float) -> float:
    return 0.75 * (1.0 - math.exp(-4.0 * mu * length_km))


def fit_mu(points) -> tuple[float, float]:
    """Least-squares error density over several QBER observations.

    Minimizes sum_i (qber_i - 3/4 (1 - exp(-4 mu L_i)))^2 by bisecting the
    objective's derivative in mu (the model is monotone in mu per point, so
    the objective is unimodal).  A single point reduces exactly to
    `estimate_mu`.  Returns (mu, rms residual).
    """
    points = list(points)
    if not points:
        raise ValidationError("at least one measurement point is required")
    if len(points) == 1:
        mu = estimate_mu(points[0])
        return mu, _rms_residual(mu, points)
    if all(p.qber == 0.0 for p in points):
        return 0.0, 0.0

    def derivative(mu: float) -> float:
        total = 0.0
        for p in points:
            decay = math.exp(-4.0 * mu * p.total_length_km)
            total += (
                2.0
                * (_qber_model(mu, p.total_length_km) - p.qber)
                * 3.0
                * p.total_length_km
                * decay
            )
        return total

    lo, hi = 0.0, 1.0
    for _ in range(_MAX_DOUBLINGS):
        if derivative(hi) > 0.0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise NumericError("could not bracket the least-squares optimum")
    # Bisect until the bracket collapses to adjacent floats; each halving is
    # four exponentials, so running past the 1e-12 contract costs nothing and
    # keeps the residual at noise level for exact-model data.
    while True:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if derivative(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    mu = 0.5 * (lo + hi)
    return mu, _rms_residual(mu, points)


def _rms_residual(mu: float, points) -> float:
    sse = sum((p.qber - _qber_model(mu, p.total_length_km)) ** 2 for p in points)
    return math.sqrt(sse / len(points))


def sweep(mu: ErrorDensities, l_max_km: float, steps) -> SweepTable:
    """Concurrence and psi+ fidelity on a uniform length grid 0..l_max_km.

    ``steps`` is the number of grid intervals, so the table has steps + 1
    rows; the first row is always (0, 1, 1).
    """
    l_max_km = _as_length(l_max_km)
    if l_max_km <= 0.0:
        raise ValidationError(f"maximum sweep length must be > 0 km, got {l_max_km!r}")
    try:
        steps = operator.index(steps)
    except TypeError as exc:
        raise ValidationError(f"steps must be an integer, got {steps!r}") from exc
    if steps < 2:
        raise ValidationError(f"steps must be >= 2, got {steps}")
    rows = []
    for i in range(steps + 1):
        length = l_max_km * (i / steps)
        state = transmit_at_length(mu, LinkGeometry(length, 0.0))
        rows.append(
            SweepRow(
                length_km=length,
                concurrence=concurrence_vs_length(mu, length),
                fidelity=state.a,
            )
        )
    return SweepTable(tuple(rows))
