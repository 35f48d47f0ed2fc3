"""Closed-form analytics for a maximally entangled pair sent through two Pauli channels.

The source emits (|00> + |11>)/sqrt(2) and sends one qubit through a channel
of length L1 and the other through a channel of length L2 of the same type.
The received state is always diagonal in the Bell basis

    psi+- = (|00> +- |11>)/sqrt(2),   phi+- = (|01> +- |10>)/sqrt(2)

with weights (a, b, c, d) that are bilinear in the two channels' error
probabilities and, for length-parameterized channels, depend on the lengths
only through L = L1 + L2.  The concurrence of a Bell-diagonal state is
max(0, 2 max(a, b, c, d) - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import ErrorDensities, PauliProbs, _as_length, _validate_distribution, _clamp01
from .errors import ValidationError

__all__ = [
    "BellDiagonal",
    "LinkGeometry",
    "transmit",
    "transmit_at_length",
    "concurrence",
    "fidelity_psi_plus",
    "concurrence_vs_length",
    "doubleflip_coefficients",
    "dominant_bell_state",
    "BELL_LABELS",
]

BELL_LABELS = ("psi+", "psi-", "phi+", "phi-")


@dataclass(frozen=True)
class BellDiagonal:
    """Weights (a, b, c, d) on the psi+, psi-, phi+, phi- projectors.

    Each weight is the fidelity of the state with the corresponding Bell
    state.  Weights lie in [0, 1] and sum to 1 (both up to 1e-12).
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        _validate_distribution("Bell weight", ("a", "b", "c", "d"), (self.a, self.b, self.c, self.d))
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, _clamp01(getattr(self, name)))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class LinkGeometry:
    """Distances (km) from the pair source to the two receivers."""

    l1_km: float
    l2_km: float

    def __post_init__(self):
        object.__setattr__(self, "l1_km", _as_length(self.l1_km))
        object.__setattr__(self, "l2_km", _as_length(self.l2_km))

    @property
    def total_km(self) -> float:
        return self.l1_km + self.l2_km


def transmit(r: PauliProbs, s: PauliProbs) -> BellDiagonal:
    """Bell-diagonal weights of the received pair for arm channels ``r`` and ``s``.

    Each weight collects the error-index pairs (k, l) whose Klein-four
    product maps psi+ to the respective Bell state: index XOR 0 keeps psi+,
    1 gives phi+, 2 gives phi-, and 3 gives psi-.
    """
    r0, r1, r2, r3 = r.as_tuple()
    s0, s1, s2, s3 = s.as_tuple()
    return BellDiagonal(
        a=r0 * s0 + r1 * s1 + r2 * s2 + r3 * s3,
        b=r0 * s3 + r1 * s2 + r2 * s1 + r3 * s0,
        c=r0 * s1 + r1 * s0 + r2 * s3 + r3 * s2,
        d=r0 * s2 + r1 * s3 + r2 * s0 + r3 * s1,
    )


def _exponents(mu: ErrorDensities, total_km: float) -> tuple[float, float, float]:
    m1, m2, m3 = mu.as_tuple()
    x = math.exp(-2.0 * (m1 + m2) * total_km)
    y = math.exp(-2.0 * (m1 + m3) * total_km)
    z = math.exp(-2.0 * (m2 + m3) * total_km)
    return x, y, z


def transmit_at_length(mu: ErrorDensities, geom: LinkGeometry) -> BellDiagonal:
    """Bell-diagonal weights for two length-parameterized arms of the same type.

    Only the total length L = L1 + L2 enters: the weights are the four
    (1 +- x +- y +- z)/4 sign combinations of the three exponentials
    x = exp(-2 (mu1 + mu2) L), y = exp(-2 (mu1 + mu3) L),
    z = exp(-2 (mu2 + mu3) L).  Equal to
    ``transmit(at_length(mu, L1), at_length(mu, L2))``.
    """
    x, y, z = _exponents(mu, geom.total_km)
    return BellDiagonal(
        a=0.25 * (1.0 + x + y + z),
        b=0.25 * (1.0 + x - y - z),
        c=0.25 * (1.0 - x - y + z),
        d=0.25 * (1.0 - x + y - z),
    )


def concurrence(state: BellDiagonal) -> float:
    """Concurrence of a Bell-diagonal state: max(0, 2 max(a,b,c,d) - 1).

    Zero for separable states, 1 for a pure Bell state; positive exactly when
    one weight exceeds 1/2.  Clamped to [0, 1] to absorb float overshoot.
    """
    value = 2.0 * max(state.as_tuple()) - 1.0
    return min(1.0, max(0.0, value))


def fidelity_psi_plus(state: BellDiagonal) -> float:
    """Overlap of the received state with psi+; above 1/2 the pair beats any
    classical teleportation strategy."""
    return state.a


def _raw_concurrence(mu: ErrorDensities, total_length_km: float) -> float:
    # Unclamped (x + y + z - 1)/2; negative beyond the threshold length.
    # Root-finding in `analysis` needs the sign, which the clamp destroys.
    x, y, z = _exponents(mu, total_length_km)
    return 0.5 * (x + y + z - 1.0)


def concurrence_vs_length(mu: ErrorDensities, total_length_km: float) -> float:
    """Concurrence of the received pair as a function of total length.

    max(0, (x + y + z - 1)/2) with the exponentials of `transmit_at_length`.
    Evaluated through ``concurrence(transmit_at_length(...))`` so the two
    routes agree bit-for-bit.  Non-increasing in the length, 1 at L = 0.
    """
    total_length_km = _as_length(total_length_km)
    return concurrence(transmit_at_length(mu, LinkGeometry(total_length_km, 0.0)))


def doubleflip_coefficients(mu: float, total_length_km: float) -> BellDiagonal:
    """Bell weights when exactly the x and y flips occur at equal rate ``mu``.

    a = (1 + e)^2 / 4, b = (1 - e)^2 / 4, c = d = (1 - e^2)/4 with
    e = exp(-2 mu L).  The concurrence max(0, (e^2 + 2e - 1)/2) vanishes
    beyond a finite threshold length, unlike the single-flip case.
    """
    if not isinstance(mu, (int, float)) or not math.isfinite(mu) or mu < 0:
        raise ValidationError(f"error density must be finite and >= 0, got {mu!r}")
    total_length_km = _as_length(total_length_km)
    e = math.exp(-2.0 * mu * total_length_km)
    return BellDiagonal(
        a=0.25 * (1.0 + e) ** 2,
        b=0.25 * (1.0 - e) ** 2,
        c=0.25 * (1.0 - e * e),
        d=0.25 * (1.0 - e * e),
    )


def dominant_bell_state(state: BellDiagonal) -> str:
    """Label of the Bell state with the largest weight.

    Ties resolve to the lowest index in the (a, b, c, d) = (psi+, psi-,
    phi+, phi-) ordering, so the report is deterministic.
    """
    weights = state.as_tuple()
    best = max(range(4), key=lambda i: (weights[i], -i))
    return BELL_LABELS[best]
