"""
A monotone rule with no fixed point
===================================

On a two-point space a credal set is an interval [lo, hi] of probabilities
for the second outcome. The shift rule moves the upper end up by delta
until it passes 1 - delta, where it jumps back. The rule is monotone, yet
it is not Hausdorff-continuous at hi = 1 - delta and has no fixed point:
every orbit keeps moving.
"""

from credalfix import IntervalCredal, ShiftRule, hausdorff_interval, iterate

delta = 0.1
rule = ShiftRule(delta)

trace = iterate(rule, IntervalCredal(0.2, 0.3), tol=1e-9, max_iter=1000)
print(f"converged={trace.converged} after {trace.iterations} updates")
print(f"smallest distance to own image: {trace.d_fix.min():.4f} (delta/2 = {delta / 2})")
print("first iterates:")
for s in trace.steps[:8]:
    print(f"  n={s.n:2d}  [{s.set.lo:.2f}, {s.set.hi:.2f}]")

###############################################################################
# The jump
# --------
# Approach I = [a, 1 - delta] from below with I_n = [a, 1 - delta - 1/n].
# I_n -> I, but f(I_n) stays about delta away from f(I).
a = 0.3
f_base = rule.apply(IntervalCredal(a, 1 - delta))
print("\n     n   d(I_n, I)   d(f(I_n), f(I))")
for n in (100, 1000, 10_000, 100_000):
    I_n = IntervalCredal(a, 1 - delta - 1 / n)
    print(f"{n:6d}   {hausdorff_interval(I_n, IntervalCredal(a, 1 - delta)):.1e}     "
          f"{hausdorff_interval(rule.apply(I_n), f_base):.4f}")
print(f"delta = {delta}; the jump does not shrink, so no modulus psi(t) < t exists here.")
