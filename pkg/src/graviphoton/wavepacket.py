"""Spectral amplitudes of finite-bandwidth photons and their gravitational reshaping.

A single photon is described by a square-integrable spectral amplitude
``F(omega)`` supported on positive frequencies.  Propagation between two
observers with frequency factor ``chi`` acts as

    F'(omega) = chi * F(chi**2 * omega)

which preserves the L2 norm exactly.  Overlaps between amplitudes are plain
L2 inner products, ``<F, G> = integral conj(F(w)) G(w) dw``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from .errors import ConfigParseError, DomainError, NormalizationError, QuadratureError
from .spacetime import RedshiftFactor

NORM_TOL = 1e-9
QUAD_ABS_TOL = 1e-10
QUAD_EVAL_BUDGET = 2**20
# Subinterval cap per quad call; each subinterval costs 21 evaluations,
# so a pair of calls stays far inside the evaluation budget.
_QUAD_LIMIT = 1000
# Half width of the integration window of a Gaussian, in units of sigma.
# The neglected tail mass is below 1e-30 of the norm.
_SUPPORT_SIGMAS = 12.0
# A Gaussian amplitude must satisfy omega0/sigma > this ratio so that the
# negative-frequency tail stays below 1e-14 of the norm.
MIN_CARRIER_TO_WIDTH = 8.0


@dataclass(frozen=True)
class GaussianProfile:
    """Gaussian spectral amplitude centred at ``omega0_rad_s``.

    The amplitude is ``(pi sigma^2)^(-1/4) exp(-(w - w0)^2 / (2 sigma^2))``
    times an optional constant phase, which gives unit L2 norm over the real
    line.  ``sigma_rad_s`` is the 1/e half width of the amplitude, so the
    intensity ``|F|^2`` has standard deviation ``sigma / sqrt(2)``.
    """

    omega0_rad_s: float
    sigma_rad_s: float
    phase_rad: float = 0.0

    kind = "gaussian"

    def __post_init__(self):
        w0, sg = float(self.omega0_rad_s), float(self.sigma_rad_s)
        ph = float(self.phase_rad)
        if not math.isfinite(w0) or w0 <= 0.0:
            raise DomainError(f"omega0_rad_s must be finite and positive, got {w0!r}")
        if not math.isfinite(sg) or sg <= 0.0:
            raise DomainError(f"sigma_rad_s must be finite and positive, got {sg!r}")
        if not math.isfinite(ph):
            raise DomainError(f"phase_rad must be finite, got {ph!r}")
        if w0 / sg <= MIN_CARRIER_TO_WIDTH:
            raise DomainError(
                f"carrier to width ratio omega0/sigma = {w0 / sg:.3f} is too small; "
                f"require > {MIN_CARRIER_TO_WIDTH:g} so the amplitude is negligible "
                "at negative frequencies"
            )
        object.__setattr__(self, "omega0_rad_s", w0)
        object.__setattr__(self, "sigma_rad_s", sg)
        object.__setattr__(self, "phase_rad", ph)

    def __call__(self, omega):
        w = np.asarray(omega, dtype=float)
        x = (w - self.omega0_rad_s) / self.sigma_rad_s
        amp = (math.pi * self.sigma_rad_s**2) ** (-0.25) * np.exp(-0.5 * x * x)
        out = amp * np.exp(1j * self.phase_rad)
        return out if out.shape else complex(out)

    def amplitude_at_offset(self, ref, u):
        # Evaluate at omega = ref + u without forming the large absolute
        # frequency.  Optical carriers sit around 1e15 rad/s while sub-MHz
        # bandwidths need the argument resolved far below one ULP of that,
        # so the shift from the carrier is accumulated in small numbers.
        x = ((ref - self.omega0_rad_s) + np.asarray(u, dtype=float)) / self.sigma_rad_s
        amp = (math.pi * self.sigma_rad_s**2) ** (-0.25) * np.exp(-0.5 * x * x)
        return amp * np.exp(1j * self.phase_rad)

    def support(self):
        lo = max(0.0, self.omega0_rad_s - _SUPPORT_SIGMAS * self.sigma_rad_s)
        return (lo, self.omega0_rad_s + _SUPPORT_SIGMAS * self.sigma_rad_s)

    def interior_points(self):
        return (self.omega0_rad_s,)


class SampledGridProfile:
    """Spectral amplitude tabulated on a strictly increasing frequency grid.

    Values between nodes come from a complex cubic spline; outside the grid
    the amplitude is zero.  The tabulated amplitude must already be unit
    normalized (within ``NORM_TOL``); use :meth:`from_samples` to normalize
    raw data.
    """

    kind = "grid"

    def __init__(self, omega_rad_s, amplitude, phase_rad: float = 0.0):
        omega = np.asarray(omega_rad_s, dtype=float)
        amp = np.asarray(amplitude, dtype=complex)
        if omega.ndim != 1 or omega.size < 4:
            raise DomainError("frequency grid must be one dimensional with >= 4 nodes")
        if amp.shape != omega.shape:
            raise DomainError(
                f"amplitude shape {amp.shape} does not match grid shape {omega.shape}"
            )
        if not np.all(np.isfinite(omega)) or not np.all(np.isfinite(amp)):
            raise DomainError("grid nodes and amplitudes must be finite")
        if omega[0] < 0.0:
            raise DomainError("frequency grid must be non-negative")
        if not np.all(np.diff(omega) > 0.0):
            raise DomainError("frequency grid must be strictly increasing")
        if not math.isfinite(float(phase_rad)):
            raise DomainError(f"phase_rad must be finite, got {phase_rad!r}")
        self._init_from_offsets(float(omega[0]), omega - omega[0], amp, float(phase_rad))

    def _init_from_offsets(self, base, du, amp, phase_rad):
        # The grid is held as a base frequency plus small offsets and the
        # spline lives in offset coordinates, so evaluation and rescaling
        # keep full precision at optical frequencies where one ULP of the
        # absolute node value can rival a narrow bandwidth.
        self._base = base
        self._du = du
        self._amp = amp
        self.phase_rad = phase_rad
        self._spline = CubicSpline(du, amp, extrapolate=False)
        nrm = l2_norm(self)
        if abs(nrm - 1.0) > NORM_TOL:
            raise NormalizationError(
                f"grid profile has L2 norm {nrm!r}, expected 1 within {NORM_TOL:g}"
            )

    @classmethod
    def from_samples(cls, omega_rad_s, amplitude, phase_rad: float = 0.0):
        """Build a profile from raw samples, rescaling to unit norm."""
        omega = np.asarray(omega_rad_s, dtype=float)
        amp = np.asarray(amplitude, dtype=complex)
        if omega.ndim != 1 or omega.size < 4:
            raise DomainError("frequency grid must be one dimensional with >= 4 nodes")
        if amp.shape != omega.shape:
            raise DomainError("amplitude array must match the frequency grid shape")
        if not np.all(np.isfinite(omega)) or not np.all(np.isfinite(amp)):
            raise DomainError("grid nodes and amplitudes must be finite")
        if not np.all(np.diff(omega) > 0.0) or omega[0] < 0.0:
            raise DomainError("frequency grid must be non-negative and increasing")
        du = omega - omega[0]
        # bring arbitrary sample scales near unit norm first, so the absolute
        # quadrature tolerance below stays meaningful for any input scaling
        rough = math.sqrt(float(np.trapezoid(np.abs(amp) ** 2, du)))
        if rough <= 0.0 or not math.isfinite(rough):
            raise DomainError("samples have no usable L2 norm")
        amp = amp / rough
        trial = cls.__new__(cls)
        trial._base = float(omega[0])
        trial._du = du
        trial._amp = amp
        trial.phase_rad = float(phase_rad)
        trial._spline = CubicSpline(trial._du, amp, extrapolate=False)
        nrm = l2_norm(trial)
        if nrm <= 0.0 or not math.isfinite(nrm):
            raise DomainError("samples have no usable L2 norm")
        return cls(omega, amp / nrm, phase_rad)

    @classmethod
    def _rescaled(cls, other, scale):
        """Copy of ``other`` with nodes divided and amplitudes multiplied.

        Offsets are rescaled directly, so node spacing (and with it the
        tabulated norm) is preserved to machine precision; only the base
        frequency picks up a single rounding.
        """
        out = cls.__new__(cls)
        out._init_from_offsets(
            other._base / scale,
            other._du / scale,
            other._amp * math.sqrt(scale),
            other.phase_rad,
        )
        return out

    @property
    def omega_rad_s(self):
        return self._base + self._du

    @property
    def amplitude(self):
        return self._amp.copy()

    def __call__(self, omega):
        w = np.asarray(omega, dtype=float)
        vals = self._spline(w - self._base)
        vals = np.where(np.isnan(vals), 0.0 + 0.0j, vals)
        out = vals * np.exp(1j * self.phase_rad)
        return out if out.shape else complex(out)

    def amplitude_at_offset(self, ref, u):
        t = (ref - self._base) + np.asarray(u, dtype=float)
        vals = self._spline(t)
        vals = np.where(np.isnan(vals), 0.0 + 0.0j, vals)
        return vals * np.exp(1j * self.phase_rad)

    def support(self):
        return (self._base + float(self._du[0]), self._base + float(self._du[-1]))

    def interior_points(self):
        return ()


def _quad_window(a, b):
    """Integration window, reference frequency and interior break points.

    The window covers both supports.  Quadrature runs in the offset variable
    ``u = omega - ref`` so node placement is not limited by the ULP of the
    absolute optical frequency.
    """
    lo_a, hi_a = a.support()
    lo_b, hi_b = b.support()
    lo, hi = max(0.0, min(lo_a, lo_b)), max(hi_a, hi_b)
    ref = 0.5 * (lo + hi)
    pts = sorted(
        p - ref for p in (*a.interior_points(), *b.interior_points()) if lo < p < hi
    )
    return lo - ref, hi - ref, ref, pts or None


def _adaptive_integral(func, lo, hi, points):
    """Integrate a real scalar function, returning (value, error, nevals)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, info = integrate.quad(
            func,
            lo,
            hi,
            points=points,
            epsabs=QUAD_ABS_TOL / 10.0,
            epsrel=1e-11,
            limit=_QUAD_LIMIT,
            full_output=True,
        )[:3]
    return val, err, int(info["neval"])


def _check_quadrature(errs, nevals):
    total = sum(nevals)
    if total > QUAD_EVAL_BUDGET:
        raise QuadratureError(
            f"integration used {total} evaluations, budget is {QUAD_EVAL_BUDGET}"
        )
    worst = max(errs)
    if worst > QUAD_ABS_TOL:
        raise QuadratureError(
            f"integration error estimate {worst:.3e} exceeds tolerance {QUAD_ABS_TOL:g}"
        )


_GL_RULES: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl_rule(n):
    if n not in _GL_RULES:
        _GL_RULES[n] = np.polynomial.legendre.leggauss(n)
    return _GL_RULES[n]


def _panel_edges(profiles, ref, lo, hi):
    """Subdivision of ``[lo, hi]`` aligned with every profile's structure.

    Tabulated profiles contribute their spline nodes, so between consecutive
    edges each spline factor is a single cubic piece.  Analytic profiles
    contribute a half-width lattice around their carrier so the peak is
    resolved.  All coordinates are offsets from ``ref``.
    """
    parts = [np.array([lo, hi])]
    for p in profiles:
        if isinstance(p, SampledGridProfile):
            parts.append((p._base - ref) + p._du)
        else:
            step = 0.5 * p.sigma_rad_s
            count = (hi - lo) / step
            if count > QUAD_EVAL_BUDGET:
                raise QuadratureError(
                    f"integration used {int(count)} evaluations, "
                    f"budget is {QUAD_EVAL_BUDGET}"
                )
            c = p.omega0_rad_s - ref
            k0 = math.floor((lo - c) / step)
            k1 = math.ceil((hi - c) / step)
            parts.append(c + step * np.arange(k0, k1 + 1))
    edges = np.concatenate(parts)
    edges = edges[(edges > lo) & (edges < hi)]
    return np.unique(np.concatenate((edges, [lo, hi])))


def _panel_integral(func, edges):
    """Nested fixed-order Gauss rule per panel, returning (value, error, nevals).

    The seven point rule is exact for products of two cubic spline pieces,
    so on spline panels the reported error is pure rounding; the four point
    companion supplies the estimate.
    """
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])

    def on(nodes, weights):
        u = mid[:, None] + half[:, None] * nodes[None, :]
        vals = np.asarray(func(u.ravel())).reshape(u.shape)
        return complex(np.sum(vals * (half[:, None] * weights[None, :])))

    coarse = on(*_gl_rule(4))
    fine = on(*_gl_rule(7))
    return fine, abs(fine - coarse), 11 * (edges.size - 1)


def overlap(a, b) -> complex:
    """L2 inner product ``<a, b>`` over non-negative frequencies.

    Analytic pairs integrate by adaptive quadrature on a window covering
    both supports.  As soon as a tabulated profile is involved the window is
    integrated panel by panel between the spline nodes, where a nested Gauss
    rule is exact for the spline pieces; adaptive subdivision would otherwise
    stall on the curvature kinks at the nodes.  Both paths check their error
    estimate against ``QUAD_ABS_TOL`` and their evaluation count against
    ``QUAD_EVAL_BUDGET``.

    Raises
    ------
    QuadratureError
        If the error estimate or evaluation budget cannot be met.
    """
    lo, hi, ref, pts = _quad_window(a, b)
    if isinstance(a, SampledGridProfile) or isinstance(b, SampledGridProfile):
        def prod_arr(u):
            return np.conj(a.amplitude_at_offset(ref, u)) * b.amplitude_at_offset(ref, u)

        val, err, n = _panel_integral(prod_arr, _panel_edges((a, b), ref, lo, hi))
        _check_quadrature((err,), (n,))
        return val

    def prod(u):
        return complex(np.conj(a.amplitude_at_offset(ref, u)) * b.amplitude_at_offset(ref, u))

    re, re_err, re_n = _adaptive_integral(lambda u: prod(u).real, lo, hi, pts)
    im, im_err, im_n = _adaptive_integral(lambda u: prod(u).imag, lo, hi, pts)
    _check_quadrature((re_err, im_err), (re_n, im_n))
    return complex(re, im)


def l2_norm(profile) -> float:
    """L2 norm ``sqrt(integral |F|^2)`` of a profile over its support."""
    lo, hi, ref, pts = _quad_window(profile, profile)
    if isinstance(profile, SampledGridProfile):
        val, err, n = _panel_integral(
            lambda u: np.abs(profile.amplitude_at_offset(ref, u)) ** 2,
            _panel_edges((profile,), ref, lo, hi),
        )
        _check_quadrature((err,), (n,))
        return math.sqrt(max(val.real, 0.0))
    val, err, n = _adaptive_integral(
        lambda u: abs(complex(profile.amplitude_at_offset(ref, u))) ** 2, lo, hi, pts
    )
    _check_quadrature((err,), (n,))
    return math.sqrt(max(val, 0.0))


def _chi_value(chi) -> float:
    if isinstance(chi, RedshiftFactor):
        chi = chi.chi
    chi = float(chi)
    if not math.isfinite(chi) or chi <= 0.0:
        raise DomainError(f"chi must be finite and positive, got {chi!r}")
    return chi


def redshift_transform(profile, chi):
    """Image of a spectral amplitude under the frequency factor ``chi``.

    Implements ``F'(w) = chi F(chi**2 w)``.  Gaussian profiles map to
    Gaussian profiles with rescaled centre and width; grid profiles keep
    their tabulated values and rescale their nodes, both exactly norm
    preserving.  ``chi`` may be a float or a :class:`RedshiftFactor`.
    """
    c = _chi_value(chi)
    if c == 1.0:
        return profile
    c2 = c * c
    if isinstance(profile, GaussianProfile):
        return GaussianProfile(
            profile.omega0_rad_s / c2, profile.sigma_rad_s / c2, profile.phase_rad
        )
    if isinstance(profile, SampledGridProfile):
        return SampledGridProfile._rescaled(profile, c2)
    raise DomainError(f"unsupported profile type {type(profile).__name__!r}")


def mixing_angle(expected, received):
    """Beamsplitter angles ``(theta, phi)`` equivalent to an imperfect overlap.

    ``cos(theta)`` equals the overlap magnitude between the expected and the
    received amplitude; the relative phase ``phi`` is fixed to zero by
    convention (constant phases drop out of the magnitude).
    """
    mag = abs(overlap(expected, received))
    theta = math.acos(min(mag, 1.0))
    return theta, 0.0


def sharp_commutator_scale(alpha: complex) -> float:
    """Scale ``1/|alpha|`` at which a sharp-frequency mode description fails.

    A strictly monochromatic mode cannot support a canonical commutator for
    any finite normalization constant ``alpha``; the returned scale quantifies
    the divergence and never vanishes.
    """
    alpha = complex(alpha)
    if alpha == 0:
        raise DomainError("alpha must be nonzero")
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise DomainError(f"alpha must be finite, got {alpha!r}")
    return 1.0 / abs(alpha)


def profile_to_record(profile) -> dict:
    """Serializable record of a profile (JSON compatible plain dict)."""
    if isinstance(profile, GaussianProfile):
        rec = {
            "kind": "gaussian",
            "omega0_rad_s": profile.omega0_rad_s,
            "sigma_rad_s": profile.sigma_rad_s,
        }
        if profile.phase_rad != 0.0:
            rec["phase_rad"] = profile.phase_rad
        return rec
    if isinstance(profile, SampledGridProfile):
        rec = {
            "kind": "grid",
            "omega_rad_s": [float(w) for w in profile.omega_rad_s],
            "re": [float(v) for v in profile.amplitude.real],
            "im": [float(v) for v in profile.amplitude.imag],
        }
        if profile.phase_rad != 0.0:
            rec["phase_rad"] = profile.phase_rad
        return rec
    raise DomainError(f"unsupported profile type {type(profile).__name__!r}")


def profile_from_record(record) -> object:
    """Rebuild a profile from :func:`profile_to_record` output.

    Raises :class:`ConfigParseError` for structurally invalid records; value
    level problems (negative widths and the like) surface as
    :class:`DomainError` from the profile constructors.
    """
    if not isinstance(record, dict):
        raise ConfigParseError(f"profile record must be an object, got {type(record).__name__}")
    kind = record.get("kind")
    if kind == "gaussian":
        allowed = {"kind", "omega0_rad_s", "sigma_rad_s", "phase_rad"}
        unknown = set(record) - allowed
        if unknown:
            raise ConfigParseError(f"unknown keys in gaussian profile record: {sorted(unknown)}")
        try:
            w0 = float(record["omega0_rad_s"])
            sg = float(record["sigma_rad_s"])
            ph = float(record.get("phase_rad", 0.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigParseError(f"invalid gaussian profile record: {exc}") from exc
        return GaussianProfile(w0, sg, ph)
    if kind == "grid":
        allowed = {"kind", "omega_rad_s", "re", "im", "phase_rad"}
        unknown = set(record) - allowed
        if unknown:
            raise ConfigParseError(f"unknown keys in grid profile record: {sorted(unknown)}")
        try:
            omega = [float(v) for v in record["omega_rad_s"]]
            re = [float(v) for v in record["re"]]
            im = [float(v) for v in record["im"]]
            ph = float(record.get("phase_rad", 0.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigParseError(f"invalid grid profile record: {exc}") from exc
        if not (len(omega) == len(re) == len(im)):
            raise ConfigParseError("grid profile arrays must have equal length")
        amp = np.asarray(re, dtype=float) + 1j * np.asarray(im, dtype=float)
        return SampledGridProfile(omega, amp, ph)
    raise ConfigParseError(f"unknown profile kind {kind!r}")
