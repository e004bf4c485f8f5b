"""
Sandwiching an alternating schedule
===================================

Two anchor contractions f_j(I) = anchor + gamma_j (I - anchor) act on
intervals. Alternating them gives a composed orbit. At each step the
intersection of the two images (lower envelope) and the hull of their
union (upper envelope) bound the composed step, so running the envelopes
from the same start gives a lower and an upper orbit around it.

With a shared anchor every map fixes the anchor, so the intersection is
never empty. With different anchors it can be: shrinking [0, 1] towards
0.3 and towards 0.7 by gamma = 0.5 gives disjoint images after two steps.
"""
from credalfix import AnchorContraction, EmptyEnvelopeError, IntervalCredal, sandwich_run

rules = [AnchorContraction(0.3, 0.5), AnchorContraction(0.6, 0.5)]
rep = sandwich_run(rules, [0, 1], IntervalCredal(0.0, 1.0), max_iter=100, stop_early=False)
print(f"{len(rep.steps) - 1} steps, inclusion chain holds at every step: {rep.chain_holds}")
print("  n   lower              composed           upper")
for s in rep.steps[:6]:
    print(f"{s.n:3d}   [{s.lower.lo:.4f}, {s.lower.hi:.4f}]   [{s.composed.lo:.4f}, {s.composed.hi:.4f}]"
          f"   [{s.upper.lo:.4f}, {s.upper.hi:.4f}]")

print("\ndifferent anchors:")
try:
    sandwich_run([AnchorContraction(0.5, 0.3), AnchorContraction(0.5, 0.7)], [0, 1],
                 IntervalCredal(0.0, 1.0), max_iter=10, stop_early=False)
except EmptyEnvelopeError as exc:
    print(f"  {type(exc).__name__}: {exc}")
