# Certifying small treedepth on a path
#
# A path on seven vertices has an elimination tree of height 2: put the
# middle vertex on top, then the middle of each half, then the leaves.

from locert.certs import dump_certs, run_verification, cert_size_bits
from locert.graph import path_graph
from locert.schemes import treedepth_scheme
from locert.treedepth import compute_treedepth_exact, save_model

g = path_graph(7)
t, model = compute_treedepth_exact(g)
print("treedepth of P7:", t)
print(save_model(model))

# Every vertex stores its ancestor list plus one spanning-tree fragment per
# ancestor level.  Each neighbour list must be a suffix or an extension of
# its own, which is all the verifier needs to rebuild the model locally.

scheme = treedepth_scheme(t)
certs = scheme.prove(g, model=model)
print(dump_certs(certs))

verdict = run_verification(g, certs, scheme)
print("honest certificates accepted:", verdict.accepted)
mx, total, _ = cert_size_bits(certs)
print(f"largest certificate {mx} bits, {total} bits overall")

# Claiming height 1 is a lie: no labelling should survive.  The fuzzer runs
# every structured adversary plus random mutations of their output.

from locert.certs import fuzz_scheme

report = fuzz_scheme(g, treedepth_scheme(1), seed=0, budget=2000)
print(f"t=1 on P7: {report.attempts} forged labellings, {report.escaped} accepted")

# Tamper with one honest label and see which vertices object.

bad = dict(certs)
anc = bad[1]["anc"]
bad[1] = bad[1].replace("anc", (anc[0], anc[2], anc[1]))
print("vertices rejecting a shuffled ancestor list:", sorted(run_verification(g, bad, scheme).rejecting))
