"""
Fitting a flow on the regular pentagon
======================================

Four velocity samples inside a regular pentagon, fitted with tangent
fields of increasing degree.  Coordinates are rationalized with
denominators up to 10**6.
"""

import math
from fractions import Fraction as F

from tangentfit import Observation, Polytope, fit_with_degree, fit_with_error_bound, is_tangent

hs = [((math.cos(2 * i * math.pi / 5), math.sin(2 * i * math.pi / 5)), -math.cos(math.pi / 5)) for i in range(1, 6)]
pent = Polytope.from_halfspaces(hs, max_denominator=10**6)

obs = [
    Observation((F(-1, 3), F(-7, 10)), (3, 0)),
    Observation((F(1, 4), F(1, 10)), (0, 0)),
    Observation((F(-4, 5), 0), (-2, 4)),
    Observation((F(1, 3), F(7, 10)), (2, 0)),
]

for k in (2, 3, 4, 5):
    r = fit_with_degree(pent, k, obs)
    print(f"k={k}: {len(r.basis_fields)} basis fields, squared error {r.error:.6g}")

# smallest degree reaching the bound
r = fit_with_error_bound(pent, 1e-9, obs, k_max=8)
print("degree", r.degree_used, "error", r.error, "tangent", is_tangent(r.field, pent))
print("largest residual", max(abs(float(c)) for res in r.residuals for c in res))
