# From sentences to certificates
#
# Three routes, from cheapest to most general.

from locert.certs import CannotCertify, cert_size_bits, run_verification
from locert.graph import complete_graph, cycle_graph, random_bounded_treedepth_graph, star_graph
from locert.logic import evaluate, parse_formula
from locert.schemes import depth2_fo_scheme, existential_fo_scheme, fo_treedepth_scheme

triangle = parse_formula("exists x exists y exists z (x ~ y & y ~ z & x ~ z)")
dominating = parse_formula("exists x forall y (x = y | x ~ y)")

# 1. Existential sentences: name the witnesses and route everyone to them.

efo = existential_fo_scheme(triangle)
g = complete_graph(4)
print("triangle in K4, accepted:", run_verification(g, efo.prove(g), efo).accepted)
try:
    efo.prove(cycle_graph(5))
except CannotCertify as exc:
    print("C5:", exc)

# 2. Depth two: the truth value depends only on a few local bits.

d2 = depth2_fo_scheme(dominating)
for g in (star_graph(6), cycle_graph(6)):
    try:
        ok = run_verification(g, d2.prove(g), d2).accepted
    except CannotCertify:
        ok = False
    print(f"dominating vertex on n={g.n}: certified={ok}, truth={evaluate(g, dominating)}")

# 3. Any sentence on bounded treedepth: certify the kernel, let every vertex
#    evaluate the sentence on the kernel description.

# twins: two vertices with the same neighbourhood
twins = parse_formula("exists x exists y (!x = y & forall z (z ~ x <-> z ~ y))")
s = fo_treedepth_scheme(twins, 2)
for seed in range(6):
    g, m = random_bounded_treedepth_graph(2, 15, seed, p=0.4)
    try:
        certs = s.prove(g, model=m)
        print(f"seed {seed}: true, accepted={run_verification(g, certs, s).accepted}, "
              f"{cert_size_bits(certs)[0]} bits")
    except CannotCertify:
        print(f"seed {seed}: sentence false, nothing to certify")
