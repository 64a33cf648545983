"""
Tangent fields on a triangle
============================

Builds the degree <= 2 tangent basis of the triangle x1 <= 0, x2 <= 0,
x1 + x2 >= -1 and checks it facet by facet.
"""

from tangentfit import Polytope, dimension_by_resolution, facet_tangency_check, tangent_basis

# halfspaces are (normal, offset) with normal . x + offset <= 0
tri = Polytope.from_halfspaces([((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)])

for k in range(5):
    print(f"k={k}: dim {tangent_basis(tri, k).dim}, by resolution {dimension_by_resolution(tri, k)}")

B = tangent_basis(tri, 2)
names = ["x1", "x2"]
for xi in B.fields:
    print("(" + ", ".join(f.to_str(names) for f in xi) + ")")

# each field's normal component vanishes on every facet
for xi in B.fields:
    print([v.tangent for v in facet_tangency_check(xi, tri)])
