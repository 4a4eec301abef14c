"""Arbitrary-precision reference values for the closed-form quantities.

Everything here is computed with mpmath at 60 significant digits and written
independently of the package under test: formulas are spelled out from
scratch rather than imported, so agreement is meaningful.
"""

import mpmath as mp

mp.mp.dps = 60

C_LIGHT = mp.mpf("299792458")
G_NEWTON = mp.mpf("6.67430e-11")


def chi_squared_static_static(r_s_m, radius_a_m, radius_b_m):
    """Frequency ratio (receiver over emitter) for two hovering observers."""
    r_s = mp.mpf(r_s_m)
    fa = 1 - r_s / mp.mpf(radius_a_m)
    fb = 1 - r_s / mp.mpf(radius_b_m)
    return mp.sqrt(fa) / mp.sqrt(fb)


def chi_squared_static_orbit(r_s_m, radius_a_m, radius_b_m):
    """Hovering emitter, circularly orbiting receiver."""
    r_s = mp.mpf(r_s_m)
    fa = 1 - r_s / mp.mpf(radius_a_m)
    fb = 1 - mp.mpf(3) / 2 * r_s / mp.mpf(radius_b_m)
    return mp.sqrt(fa) / mp.sqrt(fb)


def gravitational_parameter(r_s_m):
    return mp.mpf(r_s_m) * C_LIGHT**2 / 2


def hover_acceleration(r_s_m, radius_m):
    return gravitational_parameter(r_s_m) / mp.mpf(radius_m) ** 2


def orbit_angular_velocity(r_s_m, radius_m):
    return mp.sqrt(gravitational_parameter(r_s_m) / mp.mpf(radius_m) ** 3)


def gaussian_overlap(omega1, sigma1, omega2, sigma2):
    """Inner product of two normalized real Gaussian amplitudes.

    Both are (pi s^2)^(-1/4) exp(-(w - w0)^2 / (2 s^2)); the negative
    frequency tail is ignored, which is exact to far below working precision
    whenever the carriers sit many widths above zero.
    """
    s1, s2 = mp.mpf(sigma1), mp.mpf(sigma2)
    d = mp.mpf(omega1) - mp.mpf(omega2)
    return mp.sqrt(2 * s1 * s2 / (s1**2 + s2**2)) * mp.exp(
        -(d**2) / (2 * (s1**2 + s2**2))
    )


def as_float(x):
    return float(x)
