"""Ground-truth engines that validate the closed forms.

Everything here works on dense complex matrices: explicit Kraus sums for the
one- and two-qubit Pauli channels, a cyclic Jacobi eigensolver for Hermitian
matrices, the general Wootters concurrence, and a Monte Carlo sampler that
draws segment errors stochastically instead of evaluating the closed form.
States are plain ``numpy.ndarray`` density matrices (Hermitian, unit trace,
positive semidefinite up to float noise).
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

import numpy as np

from . import _mc
from .channel import ErrorDensities, PauliProbs
from .epr import BellDiagonal, LinkGeometry
from .errors import DomainError, NumericError, ValidationError

__all__ = [
    "PAULI",
    "McEstimate",
    "bell_state",
    "bell_vector",
    "apply_single_qubit_pauli",
    "apply_two_sided",
    "hermitian_eigenvalues",
    "psd_sqrt",
    "wootters_concurrence",
    "bell_diagonal_project",
    "validate_density_matrix",
    "monte_carlo_transmit",
]

# I, sigma_x, sigma_y, sigma_z
PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)

# All 16 two-qubit Pauli products sigma_k (x) sigma_l, flattened k*4 + l.
_PAULI2 = np.array([np.kron(PAULI[k], PAULI[l]) for k in range(4) for l in range(4)])

_SIGMA_YY = np.kron(PAULI[2], PAULI[2]).real  # entries are real (+-1)

_SQRT_HALF = 1.0 / math.sqrt(2.0)

# Bell vectors in the |00>, |01>, |10>, |11> product basis, ordered to match
# the (a, b, c, d) weights: psi+- = (|00> +- |11>)/sqrt2, phi+- = (|01> +- |10>)/sqrt2.
_BELL_VECTORS = {
    "psi+": np.array([_SQRT_HALF, 0.0, 0.0, _SQRT_HALF], dtype=np.complex128),
    "psi-": np.array([_SQRT_HALF, 0.0, 0.0, -_SQRT_HALF], dtype=np.complex128),
    "phi+": np.array([0.0, _SQRT_HALF, _SQRT_HALF, 0.0], dtype=np.complex128),
    "phi-": np.array([0.0, _SQRT_HALF, -_SQRT_HALF, 0.0], dtype=np.complex128),
}
_BELL_ORDER = ("psi+", "psi-", "phi+", "phi-")

# Folded two-arm error index m = k XOR l -> position in the (a, b, c, d) weights.
_OUTCOME_TO_WEIGHT = (0, 2, 3, 1)  # 0 -> psi+ (a), 1 -> phi+ (c), 2 -> phi- (d), 3 -> psi- (b)

_HERMITICITY_TOL = 1e-12
_TRACE_TOL = 1e-12
_EIG_FLOOR = -1e-10
_JACOBI_TOL = 1e-14
_JACOBI_MAX_SWEEPS = 100


def bell_vector(kind: str) -> np.ndarray:
    """State vector of the requested Bell state; kind in {psi+, psi-, phi+, phi-}."""
    try:
        return _BELL_VECTORS[kind].copy()
    except KeyError:
        raise ValidationError(
            f"unknown Bell state {kind!r}; expected one of {_BELL_ORDER}"
        ) from None


def bell_state(kind: str) -> np.ndarray:
    """Rank-1 density matrix (projector) of the requested Bell state."""
    v = bell_vector(kind)
    return np.outer(v, v.conj())


def _check_square(m, dim, what: str) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (dim, dim):
        raise ValidationError(f"{what} must be {dim}x{dim}, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValidationError(f"{what} has non-finite entries")
    return m


def _check_hermitian(m, tol: float, what: str) -> None:
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise ValidationError(f"{what} is not Hermitian within {tol}")


def validate_density_matrix(rho, dim: int = 4) -> np.ndarray:
    """Check Hermiticity (1e-12), unit trace (1e-12) and spectrum >= -1e-10.

    Returns the matrix as a fresh complex128 array.  The eigenvalue floor
    separates float noise from genuinely unphysical inputs.
    """
    rho = _check_square(rho, dim, "density matrix")
    _check_hermitian(rho, _HERMITICITY_TOL, "density matrix")
    tr = rho.trace()
    if abs(tr - 1.0) > _TRACE_TOL:
        raise ValidationError(f"density matrix trace must be 1, got {tr!r}")
    eig, _ = _jacobi_eigh(0.5 * (rho + rho.conj().T))
    if eig.min() < _EIG_FLOOR:
        raise ValidationError(f"density matrix has negative eigenvalue {eig.min():.3e}")
    return rho


def apply_single_qubit_pauli(p: PauliProbs, rho) -> np.ndarray:
    """Kraus sum sum_k p_k sigma_k rho sigma_k on a single-qubit density matrix."""
    rho = validate_density_matrix(rho, dim=2)
    out = np.zeros((2, 2), dtype=np.complex128)
    for weight, sigma in zip(p.as_tuple(), PAULI):
        out += weight * (sigma @ rho @ sigma)
    return out


def apply_two_sided(r: PauliProbs, s: PauliProbs, rho) -> np.ndarray:
    """Kraus sum sum_kl r_k s_l (sigma_k (x) sigma_l) rho (sigma_k (x) sigma_l).

    The ground-truth action of independent Pauli channels on the two qubits
    of a shared pair; Hermiticity and trace are preserved exactly.
    """
    rho = validate_density_matrix(rho, dim=4)
    weights = np.outer(r.as_array(), s.as_array()).ravel()
    out = np.zeros((4, 4), dtype=np.complex128)
    for weight, op in zip(weights, _PAULI2):
        if weight != 0.0:
            out += weight * (op @ rho @ op)
    return out


def _jacobi_rotation(a: np.ndarray, p: int, q: int) -> np.ndarray:
    """Unitary (identity except the p,q block) that zeroes a[p, q] under J^H a J."""
    apq = a[p, q]
    phase = apq / abs(apq)
    tau = (a[q, q].real - a[p, p].real) / (2.0 * abs(apq))
    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    j = np.eye(a.shape[0], dtype=np.complex128)
    j[p, p] = c
    j[q, q] = c
    j[p, q] = s * phase
    j[q, p] = -s * np.conj(phase)
    return j


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _jacobi_eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Sweeps the upper triangle with complex plane rotations until the
    off-diagonal Frobenius norm drops below 1e-14 of the matrix norm.
    Returns (eigenvalues unsorted, unitary V) with a = V diag V^H.
    """
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n), v
    for _ in range(_JACOBI_MAX_SWEEPS):
        if _offdiag_norm(a) <= _JACOBI_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) == 0.0:
                    continue
                j = _jacobi_rotation(a, p, q)
                a = j.conj().T @ a @ j
                v = v @ j
    else:
        raise NumericError(f"Jacobi eigensolver did not converge in {_JACOBI_MAX_SWEEPS} sweeps")
    return np.diag(a).real.copy(), v


def hermitian_eigenvalues(m) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, descending.

    The input must be Hermitian within 1e-10; non-convergence after 100
    sweeps raises ``NumericError`` (never observed for well-posed input).
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValidationError("matrix has non-finite entries")
    _check_hermitian(m, 1e-10 * max(1.0, float(np.linalg.norm(m))), "matrix")
    eig, _ = _jacobi_eigh(0.5 * (m + m.conj().T))
    return np.sort(eig)[::-1].copy()


def psd_sqrt(m) -> np.ndarray:
    """Hermitian square root V sqrt(diag) V^H of a positive semidefinite matrix.

    Eigenvalues below -1e-8 are rejected; small negatives (float noise) are
    clamped to zero before the root.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    _check_hermitian(m, 1e-10 * max(1.0, float(np.linalg.norm(m))), "matrix")
    eig, v = _jacobi_eigh(0.5 * (m + m.conj().T))
    if eig.min() < -1e-8:
        raise ValidationError(f"matrix is not PSD: eigenvalue {eig.min():.3e}")
    roots = np.sqrt(np.clip(eig, 0.0, None))
    out = (v * roots) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def wootters_concurrence(rho) -> float:
    """Concurrence of an arbitrary two-qubit density matrix.

    Builds the spin-flipped state rho~ = (sigma_y (x) sigma_y) conj(rho)
    (sigma_y (x) sigma_y) and takes the eigenvalues of rho rho~ as those of
    the Hermitian PSD matrix sqrt(rho~) rho sqrt(rho~) (the two share a
    spectrum).  With the descending square roots r_i the concurrence is
    max(0, r_1 - r_2 - r_3 - r_4), clamped to [0, 1].
    """
    rho = validate_density_matrix(rho, dim=4)
    rho_tilde = _SIGMA_YY @ rho.conj() @ _SIGMA_YY
    root = psd_sqrt(rho_tilde)
    m = root @ rho @ root
    eig = hermitian_eigenvalues(0.5 * (m + m.conj().T))
    r = np.sqrt(np.clip(eig, 0.0, None))
    return min(1.0, max(0.0, float(r[0] - r[1] - r[2] - r[3])))


def bell_diagonal_project(rho) -> tuple[BellDiagonal, float]:
    """Bell-basis diagonal weights of a state plus the off-diagonal residual.

    Weights are <B_i| rho |B_i>; the residual is the Frobenius norm of
    rho minus its Bell-diagonal part (zero for any two-sided Pauli-channel
    output on a Bell state).
    """
    rho = validate_density_matrix(rho, dim=4)
    weights = []
    diag_part = np.zeros((4, 4), dtype=np.complex128)
    for kind in _BELL_ORDER:
        v = _BELL_VECTORS[kind]
        w = float(np.real(v.conj() @ rho @ v))
        weights.append(w)
        diag_part += w * np.outer(v, v.conj())
    residual = float(np.linalg.norm(rho - diag_part))
    return BellDiagonal(*weights), residual


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo estimate of the Bell weights.

    ``bell_diagonal`` holds the sample frequencies (integer tallies over the
    total, so they sum to 1 exactly); ``standard_errors`` are the binomial
    standard errors of (a, b, c, d).
    """

    bell_diagonal: BellDiagonal
    samples: int
    standard_errors: tuple[float, float, float, float]


def monte_carlo_transmit(
    mu: ErrorDensities,
    geom: LinkGeometry,
    segments_per_km: int,
    samples: int,
    seed: int,
    backend: str | None = None,
) -> McEstimate:
    """Stochastic two-arm transmission: per-segment error draws, tallied in the Bell basis.

    Each arm is discretized into ``length * segments_per_km`` segments of
    delta = 1/segments_per_km km; a segment applies error i with probability
    mu_i * delta.  Error indices fold through the Klein four-group, and the
    folded pair index selects the received Bell state.  Randomness is keyed
    by (seed, sample, segment), so identical seeds give identical tallies no
    matter how the work is split; see ``eprlink._mc`` for the backends.

    Raises
    ------
    DomainError
        If ``sum(mu) / segments_per_km`` exceeds 1, i.e. the discretization
        is too coarse for the requested error densities.
    """
    segments_per_km = _as_positive_count(segments_per_km, "segments_per_km")
    samples = _as_positive_count(samples, "samples")
    delta = 1.0 / segments_per_km
    t1 = mu.mu1 * delta
    t2 = t1 + mu.mu2 * delta
    t3 = t2 + mu.mu3 * delta
    if t3 > 1.0:
        raise DomainError(
            f"per-segment error probability {t3:.4g} exceeds 1; "
            f"increase segments_per_km above {math.ceil(mu.mu1 + mu.mu2 + mu.mu3)}"
        )
    n1 = round(geom.l1_km * segments_per_km)
    n2 = round(geom.l2_km * segments_per_km)
    counts = _mc.bell_outcome_counts(seed, samples, n1, n2, t1, t2, t3, backend=backend)
    freq = [0.0, 0.0, 0.0, 0.0]
    for m, count in enumerate(counts):
        freq[_OUTCOME_TO_WEIGHT[m]] = count / samples
    errors = tuple(math.sqrt(f * (1.0 - f) / samples) for f in freq)
    return McEstimate(
        bell_diagonal=BellDiagonal(*freq), samples=samples, standard_errors=errors
    )


def _as_positive_count(n, what: str) -> int:
    try:
        n = operator.index(n)
    except TypeError as exc:
        raise ValidationError(f"{what} must be an integer, got {n!r}") from exc
    if n < 1:
        raise ValidationError(f"{what} must be >= 1, got {n}")
    return n
