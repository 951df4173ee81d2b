"""Read-out time versus database size.

For an unstructured search over N items the overlap is x = 1/sqrt(N).
Fitting log T against log N across the built-in Hamiltonian families
shows which ones pay the square-root bill and which do not:

  * farhi, fenner        — T ~ sqrt(N), the usual quantum-search cost
  * perfect_fixed_r      — the gap D = 1 + x stays O(1), so T saturates
  * new (a = d = 0)      — D = r exactly; T is independent of N, but the
                           constant-time read-out buys nothing for free:
                           driving it needs coupling r fixed as N grows.
"""

from hsearch import FAMILIES, scaling_study

SIZES = (4, 16, 64, 256, 1024, 4096)

print(f"sizes: {SIZES}\n")
print(f"{'family':>16}  {'slope':>8}  {'rms':>9}   T(N=4) .. T(N=4096)")
for family in FAMILIES:
    rep = scaling_study(family, SIZES)
    t_first, t_last = rep.readout_times[0], rep.readout_times[-1]
    print(f"{family:>16}  {rep.slope:8.4f}  {rep.residual_rms:9.2e}"
          f"   {t_first:8.4f} .. {t_last:9.4f}")
