"""Exact Pell/ray-class arithmetic and numerical equiangular-line certificates.

The package pairs two computational layers over a real quadratic field
Q(sqrt(D)): an exact one (units, dimension towers, congruences, ray class
group orders) and a numerical one (Weyl-Heisenberg displacement operators,
Clifford symmetries, equiangular fiducial search), together with the
cross-checks tying the two together.
"""

__version__ = "0.1.0"
