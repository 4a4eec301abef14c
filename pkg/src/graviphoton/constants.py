"""Physical constants in SI units."""

C_LIGHT = 299792458.0        # speed of light, m/s (exact)
G_NEWTON = 6.67430e-11       # Newtonian constant, m^3 kg^-1 s^-2 (CODATA 2018)
HBAR = 1.054571817e-34       # reduced Planck constant, J s
K_BOLTZMANN = 1.380649e-23   # Boltzmann constant, J/K (exact)

# convenient reference values for Earth scenarios
EARTH_MASS_KG = 5.9722e24
EARTH_RADIUS_M = 6.371e6
