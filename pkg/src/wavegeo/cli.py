"""Command-line front end.

Subcommands: sphere, torus, lattice, chaos-table, constants, kernel,
verify.  Exit codes: 0 success, 1 failed acceptance, 2 configuration error.
Precedence for options: command-line flags > --config file (key=value
lines) > built-in defaults.  WAVEGEO_OUT sets the default output directory.
"""

import argparse
import hashlib
import json
import math
import os
import sys

from . import __version__, chaos, kernels, oracles, torus
from .harness import ConfigError, ExperimentSpec, run


def _header(seed, payload):
    h = hashlib.sha256(json.dumps(payload, sort_keys=True, default=str).encode()).hexdigest()[:12]
    return f"# wavegeo {__version__} seed={seed} config={h}"


def _emit(lines, out_path):
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _out_path(args, default_name):
    if getattr(args, "out", None):
        return args.out
    base = os.environ.get("WAVEGEO_OUT")
    if base:
        os.makedirs(base, exist_ok=True)
        return os.path.join(base, default_name)
    return None


def _load_config(path):
    opts = {}
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"config line without '=': {line!r}")
            k, v = line.split("=", 1)
            opts[k.strip().replace("-", "_")] = v.strip()
    return opts


def _apply_config(args, parser):
    """Fill still-default options from the config file (flags win)."""
    if not getattr(args, "config", None):
        return args
    opts = _load_config(args.config)
    defaults = {a.dest: a.default for a in parser._actions}
    for k, v in opts.items():
        if hasattr(args, k) and getattr(args, k) == defaults.get(k, None):
            cur = defaults.get(k)
            typ = type(cur) if cur is not None else str
            setattr(args, k, typ(v) if typ is not bool else v.lower() in ("1", "true", "yes"))
    return args


def cmd_lattice(args):
    lat = torus.lattice_points(args.n)
    orc = oracles.torus_oracles(lat)
    lines = [_header(0, {"cmd": "lattice", "n": args.n}),
             "n,N_n,mu_hat4,c_n,E_n",
             f"{lat.n},{lat.N_n},{float(lat.mu_hat4_exact)!r},{orc['c_n']!r},{lat.E_n!r}"]
    if args.rational:
        lines.append(f"# mu_hat4 = {lat.mu_hat4_exact}")
    _emit(lines, _out_path(args, f"lattice_n{args.n}.csv"))
    return 0


def cmd_chaos_table(args):
    levels = tuple(float(z) for z in args.z.split(","))
    rows = chaos.table_rows(alpha_max=args.alpha_max, beta_max=args.beta_max,
                            levels=levels, j_max=args.j_max)
    lines = [_header(0, {"cmd": "chaos-table", "alpha_max": args.alpha_max,
                         "beta_max": args.beta_max, "z": args.z, "j_max": args.j_max}),
             "family,index1,index2,z,value"]
    lines += [f"{f},{i1},{i2},{z},{v!r}" for (f, i1, i2, z, v) in rows]
    _emit(lines, _out_path(args, "chaos_table.csv"))
    return 0


def cmd_constants(args):
    rows = []
    fam = args.family
    if fam == "cqd":
        if args.q is None or args.d is None:
            raise ConfigError("constants --family cqd needs --q and --d")
        rows.append(oracles.cqd_constant(args.q, args.d, as_oracle=True))
    elif fam == "c3d":
        for d in range(3, 7):
            rows.append(oracles.OracleValue(f"c_3;{d}_closed", oracles.c3d_closed_form(d),
                                            "closed-form", 0.0))
    elif fam == "defect":
        if args.d is None:
            raise ConfigError("constants --family defect needs --d")
        rows.append(oracles.defect_variance_constant(args.d, "integral", as_oracle=True))
        rows.append(oracles.defect_variance_constant(args.d, "series",
                                                     terms=args.terms, as_oracle=True))
    elif fam == "arcsine":
        for k in range(1, (args.terms or 10) + 1):
            rows.append(oracles.OracleValue(f"a_{k}", oracles.arcsine_taylor(k),
                                            "closed-form", 0.0))
    else:
        raise ConfigError(f"unknown constants family {fam!r}")
    lines = [_header(0, {"cmd": "constants", "family": fam, "q": args.q, "d": args.d}),
             "name,value,method,error_bound"]
    lines += [f"{r.name},{r.value!r},{r.method},{r.error_bound!r}" for r in rows]
    _emit(lines, _out_path(args, f"constants_{fam}.csv"))
    return 0


def cmd_kernel(args):
    if args.gram:
        if args.space == "so3":
            mats = kernels.sample_so3(args.points, args.seed)
            res = kernels.gram_restricted_nd_test(kernels.so3_distance_matrix(mats), "so3")
        elif args.space == "s2":
            pts = kernels.sample_s2_points(args.points, args.seed)
            res = kernels.gram_restricted_nd_test(kernels.s2_distance_matrix(pts), "s2")
        else:
            raise ConfigError(f"gram test supports so3 and s2, not {args.space!r}")
        verdict = "restricted-negative-definite" if res.restricted_negative_definite else "NOT"
        lines = [_header(args.seed, {"cmd": "kernel-gram", "space": args.space,
                                     "points": args.points}),
                 "space,points,max_zero_sum_eigenvalue,verdict",
                 f"{args.space},{args.points},{res.max_eigenvalue!r},{verdict}"]
    else:
        v = kernels.character_verdict(args.space, args.lmax)
        verdict = "restricted-negative-definite" if v.restricted_negative_definite else "NOT"
        lines = [_header(args.seed, {"cmd": "kernel", "space": args.space, "lmax": args.lmax}),
                 "ell,alpha"]
        lines += [f"{ell},{a!r}" for ell, a in enumerate(v.alphas, start=1)]
        lines.append(f"# verdict: {verdict} ({v.witness})")
    _emit(lines, _out_path(args, f"kernel_{args.space}.csv"))
    return 0


def _run_experiment(args, kind):
    want = tuple(args.functionals.split(","))
    params = {"want": want, "spw": args.spw}
    if kind == "sphere":
        params.update(ell=args.ell, z=args.z)
        ident = f"ell{args.ell}"
    else:
        params.update(n=args.n)
        ident = f"n{args.n}"
    spec = ExperimentSpec(kind=kind, params=params, replicates=args.replicates,
                          seed=args.seed)
    report = run(spec, workers=args.workers)
    csv_path = _out_path(args, f"{kind}_{ident}.csv")
    json_path = _out_path(args, f"{kind}_{ident}.json")
    if csv_path:
        report.to_csv(csv_path)
        report.to_json(json_path)
    else:
        print(report.header_line())
        print(json.dumps(report.summary(), indent=2))
    return 0


def cmd_sphere(args):
    return _run_experiment(args, "sphere")


def cmd_torus(args):
    return _run_experiment(args, "torus")


def cmd_verify(args):
    from .acceptance import run_criteria

    profile = "quick" if args.quick else "full"
    results = run_criteria(profile=profile, seed=args.seed, workers=args.workers,
                           out_dir=_out_path(args, "") or None)
    ok = all(r.passed for r in results)
    return 0 if ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="wavegeo",
                                description="Random eigenfunction geometry: "
                                            "experiments, tables, verdicts")
    p.add_argument("--version", action="version", version=f"wavegeo {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="output file (default: stdout or WAVEGEO_OUT)")
        sp.add_argument("--config", help="key=value config file (flags win)")

    sp = sub.add_parser("lattice", help="lattice-point table for one energy")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--rational", action="store_true",
                    help="append the exact rational mu_hat4")
    common(sp)
    sp.set_defaults(fn=cmd_lattice)

    sp = sub.add_parser("chaos-table", help="dump alpha/beta/J coefficient tables")
    sp.add_argument("--alpha-max", type=int, default=8)
    sp.add_argument("--beta-max", type=int, default=6)
    sp.add_argument("--j-max", type=int, default=8)
    sp.add_argument("--z", default="0.0,1.0", help="comma-separated levels")
    common(sp)
    sp.set_defaults(fn=cmd_chaos_table)

    sp = sub.add_parser("constants", help="oracle constants with error bounds")
    sp.add_argument("--family", required=True,
                    choices=["cqd", "c3d", "defect", "arcsine"])
    sp.add_argument("--q", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--terms", type=int, default=60)
    common(sp)
    sp.set_defaults(fn=cmd_constants)

    sp = sub.add_parser("kernel", help="restricted-negative-definiteness verdicts")
    sp.add_argument("--space", required=True, choices=["so3", "su2", "s2"])
    sp.add_argument("--lmax", type=int, default=50)
    sp.add_argument("--gram", action="store_true", help="empirical Gram test")
    sp.add_argument("--points", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(fn=cmd_kernel)

    sp = sub.add_parser("sphere", help="spherical functional experiments")
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--z", type=float, default=0.0)
    sp.add_argument("--functionals", default="area",
                    help="comma list: area,defect,length,nodal_length,proj2,tsq,h2,h3,h4")
    sp.add_argument("--replicates", "-M", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--spw", type=int, default=6, help="samples per wavelength")
    sp.add_argument("--workers", type=int, default=1)
    common(sp)
    sp.set_defaults(fn=cmd_sphere)

    sp = sub.add_parser("torus", help="toral functional experiments")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--functionals", default="length",
                    help="comma list: length,h1,h2,h3,h4")
    sp.add_argument("--replicates", "-M", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--spw", type=int, default=8)
    sp.add_argument("--workers", type=int, default=1)
    common(sp)
    sp.set_defaults(fn=cmd_torus)

    sp = sub.add_parser("verify", help="run the acceptance suite")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--quick", action="store_true",
                   help="reduced replicates, widened tolerances")
    g.add_argument("--full", action="store_true", help="stated tolerances (default)")
    sp.add_argument("--seed", type=int, default=20250810)
    sp.add_argument("--workers", type=int, default=1)
    common(sp)
    sp.set_defaults(fn=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(args, parser)
        _validate(args)
        return args.fn(args)
    except (ConfigError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def _validate(args):
    for name, low in (("ell", 1), ("n", 1), ("replicates", 1), ("lmax", 1),
                      ("points", 3), ("spw", 4), ("workers", 1)):
        v = getattr(args, name, None)
        if v is not None and v < low:
            raise ConfigError(f"--{name} must be >= {low}, got {v}")
    z = getattr(args, "z", None)
    if isinstance(z, float) and not math.isfinite(z):
        raise ConfigError("--z must be finite")


if __name__ == "__main__":
    sys.exit(main())
