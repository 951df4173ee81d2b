"""How the coupling phase degrades the search.

With a = d the success probability at read-out depends on the coupling
only through r sin(phi): it is exactly one at phi = 0 or pi, dips to its
minimum at pi/2, and the dip obeys

    1 - P(T) = r^2 sin^2(phi) x^2 (1 - x^2) / D^2,

an O(x^2) penalty — visible below as the deficit shrinking fourfold
each time the overlap halves.
"""

import math

import numpy as np

from hsearch import make_params, near_perfect_deficit, phase_sweep, pg_bound_check

X = 0.1

report = phase_sweep(a=1.0, d=1.0, r=1.0, energy=1.0, x=X,
                     phi_grid=np.linspace(0, math.pi, 9))

print(f"overlap x = {X}")
print("   phi      P(T)        T")
for phi, p, t in zip(report.axis_values, report.probabilities,
                     report.readout_times):
    print(f"  {phi:6.4f}  {p:8.6f}  {t:8.5f}")
print(f"monotone on [0, pi/2]: {report.monotone_first_quadrant}\n")

# The worst case, phi = pi/2, as the overlap shrinks:
params = make_params(1.0, 1.0, 1.0, 1.0, math.pi / 2)
xs = (0.2, 0.1, 0.05, 0.025)
print("phi = pi/2 deficits")
print("    x      1 - P(T)    (1 - P(T)) / x^2")
for x in xs:
    deficit = near_perfect_deficit(params, x)
    print(f"  {x:5.3f}   {deficit:.3e}   {deficit / x**2:.4f}")

check = pg_bound_check(params, xs)
print(f"deficit stays within a constant factor of x^2: {check.bounded}")
