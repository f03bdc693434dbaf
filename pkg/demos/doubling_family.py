"""Fields Q(sqrt 3p, sqrt(r - 21pt^2)) along P, 2P, 4P, ... with their certificates.

    python3 demos/doubling_family.py [depth]
"""

import sys

from twodescent import biquad_estimate, double_family, make_curve
from twodescent.curve import RationalPoint

depth = int(sys.argv[1]) if len(sys.argv) > 1 else 3
C = make_curve(17)
P = RationalPoint(5257, 4, 83581)

for L in double_family(P, C, depth):
    K, cert = L.field, L.certificate
    d2 = str(K.d2)
    if len(d2) > 40:
        d2 = d2[:18] + "..." + d2[-18:]
    print(f"level {L.level}: t has {len(str(L.point.t))} digits; d2 = {d2}")
    print(f"  real={K.real}  s mod 4 = {cert.congruence_class}  m = {cert.adjustment}  checks {cert.checks}")
    if abs(K.d2) < 10**6 and K.factorization_complete:
        est = biquad_estimate(K)
        print(f"  h(d1), h(d2), h(d3) = {est.h1}, {est.h2}, {est.h3}; h(K) candidates {list(est.candidates)}")
