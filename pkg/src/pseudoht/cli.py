"""Batch command-line interface.

Subcommands: catalog, validate, kernel (eval | cone), specfun (table), pair,
verify-fs, verify-cone, verify-nonexistence, report.  Every command writes
machine-readable JSON (and CSV for the tabulation commands) with all node
budgets and tolerances echoed; floats are printed with 17 significant digits
so reruns byte-reproduce the artifacts.

Exit codes: 0 success / all checks passed, 1 usage error, 2 numerical check
failed its tolerance.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2


def _fmt(x):
    if isinstance(x, float):
        return float(f"{x:.17g}")
    if isinstance(x, complex):
        return {"re": float(f"{x.real:.17g}"), "im": float(f"{x.imag:.17g}")}
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in sorted(x.items())}
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    if isinstance(x, (np.floating,)):
        return _fmt(float(x))
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def write_json(obj, path):
    text = json.dumps(_fmt(obj), indent=1, sort_keys=True)
    if path in (None, "-"):
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _parse_sig(text):
    from .clifford import Signature

    parts = [int(p) for p in text.split(",")]
    if len(parts) == 2:
        from .clifford import CATALOG_SIGNATURES

        match = [s for s in CATALOG_SIGNATURES if (s.r, s.s) == tuple(parts)]
        if not match:
            raise SystemExit(f"no catalog entry with (r, s) = {tuple(parts)}")
        return match[0]
    if len(parts) == 3:
        return Signature(*parts)
    raise SystemExit("signature must be 'r,s' or 'r,s,n'")


# ---------------------------------------------------------------- commands

def cmd_catalog(args) -> int:
    from .clifford import CATALOG_SIGNATURES, build_module, validate_module

    rows = []
    for sig in CATALOG_SIGNATURES:
        rep = validate_module(build_module(sig))
        rows.append({
            "r": sig.r, "s": sig.s, "n": sig.n,
            "passed": rep.passed,
            "max_residual": rep.max_residual(),
            "residuals": rep.residuals,
        })
    write_json({"catalog": rows}, args.output)
    return EXIT_OK if all(r["passed"] for r in rows) else EXIT_CHECK_FAILED


def cmd_validate(args) -> int:
    from .clifford import build_module, validate_module

    sig = _parse_sig(args.sig)
    rep = validate_module(build_module(sig), tol=args.tol)
    write_json({"sig": [sig.r, sig.s, sig.n], "passed": rep.passed,
                "tol": args.tol, "residuals": rep.residuals}, args.output)
    return EXIT_OK if rep.passed else EXIT_CHECK_FAILED


def cmd_kernel(args) -> int:
    from .kernels import KernelSelector, kernel_q_lm, smooth_kernel_offcone

    if args.mode == "eval":
        sel = KernelSelector.heaviside() if args.selector == "heaviside" \
            else KernelSelector.constant(complex(args.lam))
        rng = np.random.default_rng(args.seed)
        rows = []
        for _ in range(args.count):
            xi = rng.normal(size=2 * args.n)
            th = rng.normal(size=args.s)
            while np.linalg.norm(th) < 1e-3:
                th = rng.normal(size=args.s)
            q = kernel_q_lm(args.n, args.s, xi, th, sel)
            rows.append(list(xi) + list(th) + [q.real, q.imag])
        header = [f"xi{i+1}" for i in range(2 * args.n)] \
            + [f"theta{k+1}" for k in range(args.s)] + ["re_q", "im_q"]
        _write_csv(args.output, header, rows)
        return EXIT_OK
    # cone sampling: K(x, z) on a grid of the smooth region |P| > 4 |z|
    rows = []
    for x1 in np.linspace(args.xmin, args.xmax, args.grid):
        x = np.zeros(2 * args.n)
        x[0] = x1
        for z1 in np.linspace(-args.zmax, args.zmax, args.grid):
            z = np.zeros(args.s)
            z[0] = z1
            P = x1 * x1
            if abs(P) <= 4 * abs(z1) + 1e-9:
                continue
            K = smooth_kernel_offcone(args.n, args.s, x, z)
            rows.append([x1, z1, K.real, K.imag])
    _write_csv(args.output, ["x1", "z1", "re_K", "im_K"], rows)
    return EXIT_OK


def _write_csv(path, header, rows):
    fh = sys.stdout if path in (None, "-") else open(path, "w", newline="")
    try:
        wr = csv.writer(fh)
        wr.writerow(header)
        for row in rows:
            wr.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    finally:
        if fh is not sys.stdout:
            fh.close()


def cmd_specfun(args) -> int:
    from .specfun import specfun_table

    v = np.linspace(args.vmin, args.vmax, args.count)
    rows = specfun_table(args.nu, v)
    _write_csv(args.output, ["v", "J", "Y", "H"], rows)
    return EXIT_OK


def cmd_pair(args) -> int:
    from .gausspoly import GaussPoly
    from .kernels import KernelSelector
    from .pairing import PairBudget, pair_k

    with open(args.testfn) as fh:
        phi = GaussPoly.from_json_dict(json.load(fh))
    if phi.dim != 2 * args.n + args.s:
        print(f"test function dim {phi.dim} != 2n+s = {2*args.n+args.s}", file=sys.stderr)
        return EXIT_USAGE
    sel = KernelSelector.heaviside() if args.selector == "heaviside" \
        else KernelSelector.constant(complex(args.lam))
    res = pair_k(args.n, args.s, phi, sel, PairBudget())
    write_json({"value": res.value, "est_error": res.est_error,
                "budget": res.node_budget}, args.output)
    return EXIT_OK


def cmd_verify_fs(args) -> int:
    """Delta-reproduction pair_K(Delta phi) = phi(0) for the requested (n, s)."""
    from .clifford import Signature
    from .gausspoly import GaussPoly
    from .group import GroupStructure
    from .kernels import KernelSelector
    from .pairing import pair_k

    sig = Signature(0, args.s, args.n)
    G = GroupStructure.from_signature(sig)
    d = sig.total_dim
    phi = GaussPoly.iso_gaussian(d)
    sel = KernelSelector.heaviside() if args.s == 1 else KernelSelector.constant(1.0)
    res = pair_k(args.n, args.s, G.apply_delta_rs(phi), sel)
    rel = abs(res.value - 1.0)
    ok = rel <= args.tol
    write_json({"n": args.n, "s": args.s, "value": res.value,
                "phi_at_0": 1.0, "relative_error": rel, "tol": args.tol,
                "est_error": res.est_error, "budget": res.node_budget,
                "passed": ok}, args.output)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_verify_cone(args) -> int:
    """Support/cone checks: vanishing region of the iterated-integral form and
    the off-cone smooth-kernel pairing against the Fourier-side value."""
    from .verification import cone_checks

    out = cone_checks()
    write_json(out, args.output)
    return EXIT_OK if out["passed"] else EXIT_CHECK_FAILED


def cmd_verify_nonexistence(args) -> int:
    from .clifford import Signature
    from .group import GroupStructure
    from .witness import WitnessConfig, build_witness, certify_kernel_residual, \
        nonsolvability_report

    sig = _parse_sig(args.sig)
    if sig.r < 1:
        print("nonexistence verification needs r > 0", file=sys.stderr)
        return EXIT_USAGE
    G = GroupStructure.from_signature(sig)
    eta0 = np.array([float(x) for x in args.eta0.split(",")])
    cfg = WitnessConfig(sig, eta0, args.delta, flow_nodes=args.flow_nodes)
    w = build_witness(G, cfg)
    cert = certify_kernel_residual(w)
    rep = nonsolvability_report(w)
    ok = cert["relative_residual"] <= args.tol
    write_json({"sig": [sig.r, sig.s, sig.n], "eta0": list(eta0),
                "delta": args.delta, "tol": args.tol,
                "residual": cert["residual_sup"],
                "relative_residual": cert["relative_residual"],
                "integral": cert["integral_psi"],
                "phi_at_0": rep["phi_at_0"],
                "delta_phi_sup": rep["delta_phi_sup"],
                "flow_nodes": cert["flow_nodes"], "passed": ok}, args.output)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_report(args) -> int:
    """Run the full acceptance battery and write one JSON report."""
    from .verification import full_report

    out = full_report(quick=args.quick)
    write_json(out, args.output)
    return EXIT_OK if out["all_passed"] else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pseudoht",
                                 description="pseudo H-type groups and ultra-hyperbolic "
                                             "fundamental solutions")
    ap.add_argument("--output", "-o", default="-", help="output path (default stdout)")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("catalog", help="list shipped signatures with validation residuals")

    p = sub.add_parser("validate", help="re-validate one catalog module")
    p.add_argument("--sig", required=True, help="r,s or r,s,n")
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("kernel", help="tabulate kernels")
    p.add_argument("mode", choices=["eval", "cone"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--selector", default="constant", choices=["constant", "heaviside"])
    p.add_argument("--lam", default="1")
    p.add_argument("--count", type=int, default=32)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--grid", type=int, default=21)
    p.add_argument("--xmin", type=float, default=1.0)
    p.add_argument("--xmax", type=float, default=3.0)
    p.add_argument("--zmax", type=float, default=0.45)

    p = sub.add_parser("specfun", help="CSV table of J, Y, H")
    p.add_argument("mode", choices=["table"])
    p.add_argument("--nu", type=float, default=0.5)
    p.add_argument("--vmin", type=float, default=0.1)
    p.add_argument("--vmax", type=float, default=20.0)
    p.add_argument("--count", type=int, default=100)

    p = sub.add_parser("pair", help="pair a JSON test function against the kernel family")
    p.add_argument("--testfn", required=True, help="JSON file with the test function")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--selector", default="constant", choices=["constant", "heaviside"])
    p.add_argument("--lam", default="1")

    p = sub.add_parser("verify-fs", help="delta-reproduction check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-3)

    sub.add_parser("verify-cone", help="support-cone checks")

    p = sub.add_parser("verify-nonexistence", help="kernel witness for r > 0")
    p.add_argument("--sig", default="1,1")
    p.add_argument("--eta0", default="2,1")
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--flow-nodes", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("report", help="full acceptance battery")
    p.add_argument("--quick", action="store_true", help="reduced budgets")

    return ap


_DISPATCH = {
    "catalog": cmd_catalog,
    "validate": cmd_validate,
    "kernel": cmd_kernel,
    "specfun": cmd_specfun,
    "pair": cmd_pair,
    "verify-fs": cmd_verify_fs,
    "verify-cone": cmd_verify_cone,
    "verify-nonexistence": cmd_verify_nonexistence,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except SystemExit:
        raise
    except BrokenPipeError:
        return EXIT_OK
    except Exception as exc:  # usage-level errors surface with a message
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
