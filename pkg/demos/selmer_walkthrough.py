"""Walk through a 2-descent on E_p: y^2 = (x + 6p)(x - 9p)(x - 18p).

    python3 demos/selmer_walkthrough.py [p]
"""

import sys
from collections import Counter

from twodescent import compute_selmer, make_curve, phi, rank_bounds
from twodescent.curve import RationalPoint, two_torsion
from twodescent.descent import torsion_image

p = int(sys.argv[1]) if len(sys.argv) > 1 else 17
C = make_curve(p)
print(f"E_{p}: y^2 = x^3 - {-C.a2} x^2 + {C.a6}  (roots {C.roots}, class {C.theorem_class.value})")

print("\nimage of the 2-torsion under phi:")
for T, a in zip(two_torsion(C), torsion_image(C)):
    print(f"  {'O' if T.inf else (T.r, 0)!s:>12} -> {a}")

G = compute_selmer(C)
rules = Counter(tr.rule.value for tr in G.trace if tr.in_selmer is False)
print(f"\n256 cosets of A; {len(G.elements) // 4} survive. Exclusions by rule:")
for rule, n in rules.most_common():
    print(f"  {n:4d}  {rule}")
print(f"\nSel_2(E_{p}) = {' '.join(map(str, G.sorted_elements()))}")
print(f"2-Selmer rank s = {G.rank_s}")

if p == 17:
    P = RationalPoint(5257, 4, 83581)
    print(f"\nknown point {P}: phi = {phi(P, C)}")
    rb = rank_bounds(C, [P], G)
    print(f"{rb.lower} <= rank <= {rb.upper}")
