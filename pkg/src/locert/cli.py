"""Command-line front end.

Exit codes: 0 success or accept, 1 reject or false, 2 usage error,
3 cannot certify or undecided.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .certs import (
    CannotCertify, MissingCertificateError, cert_size_bits, certs_from_json, certs_to_json, dump_certs, fuzz_scheme,
    run_verification,
)
from .ef import EFBudgetExceeded, ef_equivalent
from .graph import (
    GraphError, complete_graph, cycle_graph, load_graph, path_graph, random_bounded_treedepth_graph,
    random_connected_graph, save_graph, star_graph,
)
from .kernel import dump_reduction, k_reduce
from .logic import FormulaSyntaxError, UnboundVariableError, evaluate, parse_formula
from .schemes import (
    count_scheme, depth2_fo_scheme, existential_fo_scheme, fo_treedepth_scheme, kernel_scheme,
    spanning_tree_scheme, treedepth_scheme,
)
from .schemes.treedepth_scheme import find_model
from .treedepth import (
    ModelError, SizeLimitError, compute_treedepth_exact, is_valid_model, load_model, save_model,
)

OK, FALSE, USAGE, UNDECIDED = 0, 1, 2, 3
SCHEMES = ("st", "count", "efo", "fo2", "td", "kernel", "fo-td")


class UsageError(Exception):
    pass


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _graph(path):
    return load_graph(_read(path))


def _model(path):
    return None if path is None else load_model(_read(path))


def _formula(text):
    if text is None:
        raise UsageError("--formula is required")
    return parse_formula(text)


def build_scheme(name, *, t=None, k=None, formula=None):
    """Scheme object for a CLI name; raises :class:`UsageError` on missing parameters."""
    def need(value, flag):
        if value is None:
            raise UsageError(f"scheme {name} needs {flag}")
        return value

    if name == "st":
        return spanning_tree_scheme()
    if name == "count":
        return count_scheme()
    if name == "efo":
        f = _formula(formula)
        try:
            return existential_fo_scheme(f)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if name == "fo2":
        try:
            return depth2_fo_scheme(_formula(formula))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if name == "td":
        return treedepth_scheme(need(t, "--t"))
    if name == "kernel":
        return kernel_scheme(need(k, "--k"), need(t, "--t"))
    if name == "fo-td":
        return fo_treedepth_scheme(_formula(formula), need(t, "--t"))
    raise UsageError(f"unknown scheme {name}")


def _prove(scheme, g, model):
    if model is not None and scheme.name in ("td", "kernel", "fo-td"):
        return scheme.prove(g, model=model)
    return scheme.prove(g)


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# -- commands ------------------------------------------------------------------

def cmd_gen(a):
    model = None
    if a.family == "path":
        g = path_graph(a.n)
    elif a.family == "cycle":
        g = cycle_graph(a.n)
    elif a.family == "complete":
        g = complete_graph(a.n)
    elif a.family == "star":
        g = star_graph(a.n - 1)
    elif a.family == "random":
        g = random_connected_graph(a.n, a.seed, p=a.p)
    else:
        if a.t is None:
            raise UsageError("family td needs --t")
        g, model = random_bounded_treedepth_graph(a.t, a.n, a.seed, p=a.p)
    _emit(save_graph(g), a.out)
    if model is not None and a.model_out:
        Path(a.model_out).write_text(save_model(model))
    return OK


def cmd_td(a):
    g = _graph(a.graph)
    if a.model is not None:
        if a.t is None:
            raise UsageError("model validation needs --t")
        ok = is_valid_model(g, _model(a.model), a.t)
        print("valid" if ok else "invalid")
        return OK if ok else FALSE
    try:
        t, m = compute_treedepth_exact(g)
    except SizeLimitError as exc:
        print(str(exc), file=sys.stderr)
        return UNDECIDED
    print(f"treedepth {t}")
    _emit(save_model(m), a.model_out)
    return OK


def cmd_eval(a):
    ok = evaluate(_graph(a.graph), _formula(a.formula))
    print("true" if ok else "false")
    return OK if ok else FALSE


def cmd_equiv(a):
    try:
        ok = ef_equivalent(_graph(a.g), _graph(a.h), a.k, budget=a.budget)
    except EFBudgetExceeded as exc:
        print(f"undecided: {exc}")
        return UNDECIDED
    print("equivalent" if ok else "distinguishable")
    return OK if ok else FALSE


def cmd_kernelize(a):
    g = _graph(a.graph)
    model = _model(a.model)
    if model is None:
        try:
            _, model = compute_treedepth_exact(g)
        except SizeLimitError as exc:
            raise UsageError(f"{exc}; pass --model") from exc
    elif a.t is not None:
        model = find_model(g, a.t, model)
    r = k_reduce(g, model, a.k)
    _emit(dump_reduction(r), a.out)
    return OK


def cmd_certify(a):
    g = _graph(a.graph)
    scheme = build_scheme(a.scheme, t=a.t, k=a.k, formula=a.formula)
    certs = _prove(scheme, g, _model(a.model))
    sys.stdout.write(dump_certs(certs))
    if a.out:
        Path(a.out).write_text(certs_to_json(certs, scheme=a.scheme, **scheme.params()))
    return OK


def cmd_verify(a):
    g = _graph(a.graph)
    scheme = build_scheme(a.scheme, t=a.t, k=a.k, formula=a.formula)
    try:
        certs = certs_from_json(_read(a.certs))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed certificate file: {exc}") from exc
    verdict = run_verification(g, certs, scheme)
    if verdict.accepted:
        print("accept")
        return OK
    print("reject " + " ".join(map(str, sorted(verdict.rejecting))))
    return FALSE


def cmd_fuzz(a):
    g = _graph(a.graph)
    scheme = build_scheme(a.scheme, t=a.t, k=a.k, formula=a.formula)
    report = fuzz_scheme(g, scheme, seed=a.seed, budget=a.budget)
    print(f"attempts {report.attempts} escapes {report.escaped}")
    return OK if not report.escaped else FALSE


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def cmd_stats(a):
    rows = []
    for t in _ints(a.ts):
        for k in _ints(a.ks):
            for n in _ints(a.ns):
                g, m = random_bounded_treedepth_graph(t, n, a.seed)
                scheme = build_scheme(a.scheme, t=t, k=k, formula=a.formula)
                try:
                    certs = _prove(scheme, g, m)
                except CannotCertify:
                    rows.append([a.scheme, n, t, k, "", "", "cannot-certify", a.seed])
                    continue
                mx, total, _ = cert_size_bits(certs)
                verdict = "accept" if run_verification(g, certs, scheme).accepted else "reject"
                rows.append([a.scheme, n, t, k, mx, total, verdict, a.seed])
    fh = open(a.out, "w", newline="") if a.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["scheme", "n", "t", "k", "maxBits", "totalBits", "verdict", "seed"])
        w.writerows(rows)
    finally:
        if a.out:
            fh.close()
    return OK


# -- parser ----------------------------------------------------------------------

def _scheme_flags(p, *, required=True):
    p.add_argument("--scheme", choices=SCHEMES, required=required)
    p.add_argument("--t", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--formula")
    p.add_argument("--model")


def make_parser():
    top = argparse.ArgumentParser(prog="locert", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a graph (and a model for family td)")
    p.add_argument("--family", choices=("path", "cycle", "complete", "star", "random", "td"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--model-out")
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("td", help="exact treedepth, or validate a model with --model/--t")
    p.add_argument("--graph", required=True)
    p.add_argument("--model")
    p.add_argument("--t", type=int)
    p.add_argument("--model-out")
    p.set_defaults(run=cmd_td)

    p = sub.add_parser("eval", help="evaluate a sentence")
    p.add_argument("--graph", required=True)
    p.add_argument("--formula", required=True)
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("equiv", help="k-round Ehrenfeucht-Fraisse game")
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=int, default=10_000_000)
    p.set_defaults(run=cmd_equiv)

    p = sub.add_parser("kernelize", help="k-reduction dump")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int)
    p.add_argument("--model")
    p.add_argument("--out")
    p.set_defaults(run=cmd_kernelize)

    p = sub.add_parser("certify", help="run a prover and dump certificates")
    p.add_argument("--graph", required=True)
    _scheme_flags(p)
    p.add_argument("--out", help="write the JSON certificate file here")
    p.set_defaults(run=cmd_certify)

    p = sub.add_parser("verify", help="run the local verifier on a certificate file")
    p.add_argument("--graph", required=True)
    p.add_argument("--certs", required=True)
    _scheme_flags(p)
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("fuzz", help="structured attacks plus mutations on a no-instance")
    p.add_argument("--graph", required=True)
    _scheme_flags(p)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_fuzz)

    p = sub.add_parser("stats", help="certificate sizes over an (n, t, k) grid as CSV")
    _scheme_flags(p)
    p.add_argument("--ns", default="7,15,31")
    p.add_argument("--ts", default="2")
    p.add_argument("--ks", default="1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(run=cmd_stats)
    return top


def main(argv=None) -> int:
    parser = make_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return a.run(a)
    except CannotCertify as exc:
        print(f"cannot certify: {exc}", file=sys.stderr)
        return UNDECIDED
    except (
        UsageError, GraphError, ModelError, FormulaSyntaxError, UnboundVariableError,
        MissingCertificateError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
