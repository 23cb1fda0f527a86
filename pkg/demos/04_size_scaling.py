# How certificate size grows
#
# Treedepth certificates should grow linearly in t and in log n.  The same
# table is available as CSV through `locert stats`.

import math

from locert.certs import cert_size_bits
from locert.graph import random_bounded_treedepth_graph
from locert.schemes import treedepth_scheme

print(f"{'n':>4} {'t':>2} {'log2 idBound':>13} {'maxBits':>8}")
for t in (1, 2, 3, 4):
    for n in (7, 15, 31, 63):
        g, m = random_bounded_treedepth_graph(t, n, seed=1)
        mx = cert_size_bits(treedepth_scheme(t).prove(g, model=m))[0]
        print(f"{n:>4} {t:>2} {math.ceil(math.log2(g.id_bound)):>13} {mx:>8}")
