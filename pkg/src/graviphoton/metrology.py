"""Distinguishability of Gaussian states and estimation error bounds.

Fidelity here is the squared Uhlmann overlap; for zero-mean Gaussian states
of at most two modes it reduces to a closed form in three determinants.  The
quantum Fisher information of a parametrized channel follows from the decay
of that fidelity under a small parameter step,

    H(theta) = lim 8 (1 - sqrt(F(rho_theta, rho_theta+dtheta))) / dtheta^2,

which bounds the variance of any unbiased estimate through the Cramer-Rao
inequality ``var >= 1 / (N H)`` for ``N`` independent probes.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    NumericalError,
    StepUnderflow,
)
from .symplectic import (
    GaussianState,
    apply_symplectic,
    embed_symplectic,
    gate_beamsplitter,
    gate_two_mode_squeezer,
    partial_trace,
    state_vacuum,
)

logger = logging.getLogger(__name__)

_CLAMP_TOL = 1e-9
_PURITY_TOL = 1e-10
_BASE_STEP_SCALE = 1e-4
MIN_STEP = 1e-12

QFI_SWEEP_CSV_COLUMNS = ("theta", "qfi", "cr_bound", "fidelity_step", "runtime_ms")


class FidelityInputs:
    """Pair of zero-mean covariance matrices prepared for comparison."""

    def __init__(self, sigma_a, sigma_b):
        a = GaussianState(np.zeros(np.shape(sigma_a)[0]), sigma_a)
        b = GaussianState(np.zeros(np.shape(sigma_b)[0]), sigma_b)
        if a.n_modes != b.n_modes:
            raise DimensionMismatch(
                f"covariances act on {a.n_modes} and {b.n_modes} modes"
            )
        self.sigma_a = a.covariance
        self.sigma_b = b.covariance
        self.n_modes = a.n_modes

    @classmethod
    def from_states(cls, a: GaussianState, b: GaussianState) -> "FidelityInputs":
        for st in (a, b):
            drift = float(np.max(np.abs(st.first_moments))) if st.first_moments.size else 0.0
            if drift > 1e-12:
                raise DomainError(
                    f"fidelity requires vanishing first moments, found |d| up to {drift:.3e}"
                )
        return cls(a.covariance, b.covariance)


def _single_mode_fidelity(sa: np.ndarray, sb: np.ndarray) -> float:
    """One-mode closed form in two determinants.

    Every term is non-negative, so unlike the two-mode radical there is
    nothing to cancel and near-pure inputs keep full precision.
    """
    delta = float(np.linalg.det(sa + sb).real)
    if delta <= 0.0:
        raise NumericalError(f"fidelity determinant delta is not positive: {delta:.3e}")
    excess = []
    for name, sigma in (("a", sa), ("b", sb)):
        p = float(np.linalg.det(sigma).real) - 1.0
        if p < -_CLAMP_TOL:
            raise NumericalError(
                f"covariance {name} has determinant {1.0 + p!r}, below the pure-state floor"
            )
        excess.append(max(p, 0.0))
    lam = excess[0] * excess[1]
    # rationalized from 2 / (sqrt(delta + lam) - sqrt(lam))
    return 2.0 * (math.sqrt(delta + lam) + math.sqrt(lam)) / delta


def gaussian_fidelity(pair: FidelityInputs) -> float:
    """Squared Uhlmann fidelity of two zero-mean Gaussian states.

    Supports one- and two-mode inputs, each through its own closed form in
    a handful of determinants.  Larger registers are rejected.
    """
    if pair.n_modes > 2:
        raise DimensionMismatch(
            f"closed-form fidelity covers at most 2 modes, got {pair.n_modes}"
        )
    sa, sb = pair.sigma_a, pair.sigma_b
    if pair.n_modes == 1:
        return _finish_fidelity(_single_mode_fidelity(sa, sb))
    k = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)  # i * Omega
    eye = np.eye(4)
    gamma_c = np.linalg.det(eye + k @ sa @ k @ sb)
    lam_c = np.linalg.det(eye + k @ sa) * np.linalg.det(eye + k @ sb)
    # det(K) = 1 on four modes, so the symplectic-form prefactor drops out.
    eta_c = np.linalg.det(k @ sa + k @ sb)
    scale = max(1.0, abs(gamma_c), abs(lam_c), abs(eta_c))
    for name, val in (("gamma", gamma_c), ("lambda", lam_c), ("eta", eta_c)):
        if abs(val.imag) > 1e-8 * scale:
            raise NumericalError(
                f"fidelity determinant {name} has imaginary part {val.imag:.3e}"
            )
    gamma, lam, eta = gamma_c.real, lam_c.real, eta_c.real

    def _clamped_sqrt(name, x):
        if x < 0.0:
            if x < -_CLAMP_TOL * scale:
                raise NumericalError(f"fidelity determinant {name} is negative: {x:.3e}")
            logger.debug("clamping slightly negative %s = %.3e to zero", name, x)
            x = 0.0
        return math.sqrt(x)

    if eta <= 0.0:
        raise NumericalError(f"fidelity determinant eta is not positive: {eta:.3e}")
    det_a = float(np.linalg.det(sa).real)
    det_b = float(np.linalg.det(sb).real)
    rg = _clamped_sqrt("gamma", gamma)
    if min(abs(det_a - 1.0), abs(det_b - 1.0)) < _PURITY_TOL:
        # with a pure input, lambda and the radical vanish identically; the
        # general branch would take sqrt of pure rounding noise there
        fid = 4.0 * rg / eta
    else:
        rl = _clamped_sqrt("lambda", lam)
        inner = _clamped_sqrt("radical", (rg + rl) ** 2 - eta)
        # 4 / (rg + rl - inner) after multiplying through by the conjugate;
        # the direct form cancels whenever the states nearly agree
        fid = 4.0 * (rg + rl + inner) / eta
    return _finish_fidelity(fid)


def _finish_fidelity(fid: float) -> float:
    if fid > 1.0:
        if fid > 1.0 + _CLAMP_TOL:
            raise NumericalError(f"fidelity {fid!r} exceeds 1 beyond tolerance")
        fid = 1.0
    if fid < 0.0:
        raise NumericalError(f"fidelity {fid!r} is negative")
    return fid


@dataclass(frozen=True)
class EstimationReport:
    """Outcome of a quantum Fisher information evaluation at one angle."""

    theta: float
    qfi: float
    cramer_rao_bound: float
    probe_count: int
    step_used: float


def cramer_rao_bound(qfi: float, probe_count: int = 1) -> float:
    """Lower bound ``1 / (probe_count * qfi)`` on the estimator variance."""
    probe_count = int(probe_count)
    if probe_count < 1:
        raise DomainError(f"probe_count must be >= 1, got {probe_count}")
    qfi = float(qfi)
    if not math.isfinite(qfi) or qfi < 0.0:
        raise DomainError(f"qfi must be finite and >= 0, got {qfi!r}")
    if qfi == 0.0:
        return math.inf
    return 1.0 / (probe_count * qfi)


def qfi_finite_difference(
    channel,
    theta: float,
    *,
    base_step: float | None = None,
    probe_count: int = 1,
) -> EstimationReport:
    """Quantum Fisher information of ``channel`` at ``theta``.

    ``channel`` maps a real parameter to a zero-mean :class:`GaussianState`.
    The curvature of the fidelity is taken by central differences at a base
    step and half of it, combined with one Richardson extrapolation; the base
    step defaults to ``1e-4 * max(1, |theta|)``.
    """
    theta = float(theta)
    if base_step is None:
        base_step = _BASE_STEP_SCALE * max(1.0, abs(theta))
    base_step = float(base_step)
    if not math.isfinite(base_step) or base_step <= 0.0:
        raise DomainError(f"base_step must be finite and positive, got {base_step!r}")
    fine_step = base_step / 2.0
    if fine_step < MIN_STEP:
        raise StepUnderflow(
            f"required step {fine_step:.3e} is below the floor {MIN_STEP:g}"
        )

    def curvature(step):
        lo = channel(theta - step / 2.0)
        hi = channel(theta + step / 2.0)
        fid = gaussian_fidelity(FidelityInputs.from_states(lo, hi))
        return 8.0 * (1.0 - math.sqrt(fid)) / step**2

    coarse = curvature(base_step)
    fine = curvature(fine_step)
    qfi = (4.0 * fine - coarse) / 3.0
    if qfi < 0.0:
        if qfi < -1e-6:
            raise NumericalError(f"quantum Fisher information is negative: {qfi!r}")
        qfi = 0.0
    return EstimationReport(
        theta=theta,
        qfi=qfi,
        cramer_rao_bound=cramer_rao_bound(qfi, probe_count),
        probe_count=probe_count,
        step_used=fine_step,
    )


@dataclass(frozen=True)
class SensingChannel:
    """Twin-beam probe interfering with two weak taps of angle ``theta``.

    A two-mode squeezed pair (modes ``b1, b2``) meets two vacuum ports
    (``c1, c2``) on a pair of beamsplitters with angles ``theta1`` and
    ``theta2``; the ``c`` ports are discarded.  Angles live in ``[0, pi/2]``.
    """

    squeezing_r: float
    theta1: float = 0.0
    theta2: float = 0.0

    def __post_init__(self):
        if not math.isfinite(float(self.squeezing_r)):
            raise DomainError("squeezing_r must be finite")
        for name in ("theta1", "theta2"):
            val = float(getattr(self, name))
            if not (0.0 <= val <= math.pi / 2.0):
                raise DomainError(
                    f"{name} must lie in [0, pi/2], got {val!r}"
                )


def build_sensing_channel(channel: SensingChannel):
    """Initial four-mode state and the map from angles to the kept pair.

    Returns ``(initial, apply)`` where ``apply(theta1, theta2=None)`` gives
    the reduced two-mode state after the beamsplitters; a single argument is
    used for both angles.
    """
    squeezer = embed_symplectic(
        gate_two_mode_squeezer(channel.squeezing_r), 4, (0, 1)
    )
    initial = apply_symplectic(state_vacuum(4), squeezer)

    def apply(theta1: float, theta2: float | None = None) -> GaussianState:
        if theta2 is None:
            theta2 = theta1
        for name, val in (("theta1", theta1), ("theta2", theta2)):
            val = float(val)
            if not (0.0 <= val <= math.pi / 2.0):
                raise DomainError(f"{name} must lie in [0, pi/2], got {val!r}")
        taps = embed_symplectic(gate_beamsplitter(theta1), 4, (0, 2)) @ embed_symplectic(
            gate_beamsplitter(theta2), 4, (1, 3)
        )
        return partial_trace(apply_symplectic(initial, taps), (0, 1))

    return initial, apply


def qfi_sweep(channel, thetas, probe_count: int = 1) -> list[EstimationReport]:
    """Evaluate :func:`qfi_finite_difference` over a grid of angles."""
    return [
        qfi_finite_difference(channel, float(t), probe_count=probe_count)
        for t in thetas
    ]
