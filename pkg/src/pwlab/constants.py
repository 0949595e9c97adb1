import cmath
import math

OMEGA = cmath.exp(2j * math.pi / 3)  # primitive cube root of unity
SQRT3 = math.sqrt(3.0)
BASE_POINT = 0.5
DEFAULT_RADIUS = 0.1
