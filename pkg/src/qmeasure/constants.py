"""Physical constants (SI, 2019 exact values where defined)."""

import math

K_B = 1.380649e-23  # J/K
HBAR = 1.054571817e-34  # J s
H_PLANCK = 6.62607015e-34  # J s
LN2 = math.log(2.0)

# N2 molecule, used as the default gas.
N2_MASS = 4.6518e-26  # kg
