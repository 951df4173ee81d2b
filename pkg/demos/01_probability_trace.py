"""Watch the success probability oscillate.

Two runs of the same two-level search, differing only in the coupling
phase.  With a real coupling (phi = 0) the probability climbs all the
way to one at the read-out time T = pi/(2 E D); at phi = pi/2 it falls
just short, and the shortfall is the closed-form deficit.
"""

import math

from hsearch import (
    make_params,
    near_perfect_deficit,
    probability_trace,
    readout_time,
)

X = 0.1  # overlap between the marked state and the initial state

for phi in (0.0, math.pi / 2):
    params = make_params(energy=1.0, a=1.0, d=1.0, r=1.0, phi=phi)
    t_read = readout_time(params, X)
    trace = probability_trace(params, X, t_max=2 * t_read, steps=9)

    print(f"phi = {phi:.4f}   T = {t_read:.6f}")
    print("      t        P(t)")
    for t, p in zip(trace.times, trace.probs):
        marker = "  <- T" if abs(t - t_read) < 1e-9 else ""
        print(f"  {t:7.4f}   {p:8.6f}{marker}")

    deficit = near_perfect_deficit(params, X)
    print(f"  1 - P(T) = {1 - trace.probs[4]:.3e}"
          f"   closed form: {deficit:.3e}\n")
