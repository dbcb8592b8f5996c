"""Command line interface.

One subcommand per task; every invocation writes a ResultRecord JSON (path
printed last) and a human-readable summary to stdout.  Option values resolve
in the order defaults < config file < flags.  The config file is INI style:
a [common] section plus one section per subcommand, keys matching the long
option names (dashes or underscores both work), e.g.

    [common]
    seed = 7

    [wilson-mc]
    samples = 200000
    gauge-fixed = true

Exit codes: 0 success (and pass verdicts), 1 a verification verdict failed,
2 usage errors, 3 numeric failures (quadrature not converging, a quadratic
form losing positivity) or I/O failures.
"""

import argparse
import configparser
import itertools
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import mc
from .actions import GaugeConfig, ModelParams
from .bounds import (BoundConstants, verify_bose_bounds, verify_full_model,
                     verify_gauge_bounds)
from .errors import NumericError, UsageError
from .lattice import GaugeFixing, Lattice
from .partition import (z_bose_exact, z_bose_exact_unscaled, z_single_bond,
                        z_wilson_d2_exact, z_wilson_mc)
from .records import (ResultRecord, default_output_dir, estimate_payload,
                      utc_now_iso, write_csv)
from .rmt import sweep_cue_gue, sweep_d2_limit
from .su2 import su2_bounds_check

_BOOL_STRINGS = {"1": True, "true": True, "yes": True, "on": True,
                 "0": False, "false": False, "no": False, "off": False}


@dataclass(frozen=True)
class Opt:
    flag: str
    kind: str            # int | float | str | bool | floats | ints | choice
    default: object
    help: str
    choices: tuple = None

    @property
    def dest(self):
        return self.flag.lstrip("-").replace("-", "_")


def _parse_float_list(text):
    try:
        return tuple(float(t) for t in str(text).split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma list of numbers: {text!r}")


def _parse_int_list(text):
    try:
        return tuple(int(t) for t in str(text).split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma list of integers: {text!r}")


COMMON_OPTS = (
    Opt("--config", "str", None, "INI file with [common] and per-command sections"),
    Opt("--output", "str", None,
        "result record path (default: $BOSELGT_OUTPUT_DIR/<command>-<utc>.json)"),
)

MODEL_OPTS = (
    Opt("--d", "int", 2, "lattice dimension (2, 3 or 4)"),
    Opt("--L", "int", 3, "sites per side (>= 2)"),
    Opt("--n", "int", 1, "matrix size N of the gauge group"),
    Opt("--kind", "choice", "U", "gauge group family", ("U", "SU")),
    Opt("--field-kind", "choice", "real", "matter field type", ("real", "complex")),
    Opt("--a", "float", 1.0, "lattice spacing in (0, 1]"),
    Opt("--g-sq", "float", 1.0, "gauge coupling g^2"),
    Opt("--g0-sq", "float", 4.0, "reference coupling bound g0^2 >= g^2"),
    Opt("--kappa-u-sq", "float", 1.0, "unscaled hopping parameter squared"),
    Opt("--m-u", "float", 0.0, "unscaled mass"),
    Opt("--n-flavors", "int", 1, "number of matter flavors"),
)

MC_OPTS = (
    Opt("--samples", "int", 100_000, "Monte Carlo sample count"),
    Opt("--seed", "int", 0, "base seed of the counter RNG"),
    Opt("--workers", "int", 1, "worker threads (results identical for any count)"),
    Opt("--block-size", "int", mc.DEFAULT_BLOCK_SIZE,
        "samples per RNG block (fixed block size keeps runs reproducible)"),
)


def _params_from_cfg(cfg):
    return ModelParams(
        d=cfg["d"], L=cfg["L"], n=cfg["n"], kind=cfg["kind"],
        field_kind=cfg["field_kind"], a=cfg["a"], g_sq=cfg["g_sq"],
        g0_sq=cfg["g0_sq"], kappa_u_sq=cfg["kappa_u_sq"], m_u=cfg["m_u"],
        n_flavors=cfg["n_flavors"])


# ------------------------------------------------------------ subcommands

def run_lattice_info(cfg):
    lat = Lattice(d=cfg["d"], L=cfg["L"], a=cfg["a"])
    fixing = GaugeFixing.enhanced_temporal(lat)
    payload = {
        "n_sites": lat.n_sites,
        "n_bonds": lat.n_bonds,
        "n_plaquettes": lat.n_plaquettes,
        "n_tree_bonds": int(len(fixing.tree_bonds)),
        "n_retained_bonds": fixing.n_retained,
        "spanning_tree": bool(fixing.is_spanning_tree()),
    }
    print(f"lattice d={lat.d} L={lat.L} a={lat.a}")
    for key in ("n_sites", "n_bonds", "n_plaquettes", "n_retained_bonds"):
        print(f"  {key} = {payload[key]}")
    return payload, 0


def run_z_bond(cfg):
    if cfg["coupling"] is not None:
        c = cfg["coupling"]
    else:
        c = cfg["a"] ** (cfg["d"] - 4) / cfg["g_sq"]
    z = z_single_bond(c, cfg["n"], kind=cfg["kind"])
    payload = {"coupling": float(c), "n": cfg["n"], "kind": cfg["kind"],
               "value": float(z), "log_value": float(np.log(z))}
    print(f"z({cfg['kind']}({cfg['n']}), c={c:g}) = {z:.12g}")
    return payload, 0


def run_bose_exact(cfg):
    params = _params_from_cfg(cfg)
    if cfg["gauge"] == "identity":
        config = GaugeConfig.identity(params.lattice, n=params.n, kind=params.kind)
    else:
        rng = mc.block_rng(cfg["seed"], 0)
        config = GaugeConfig.random(params.lattice, rng, n=params.n,
                                    kind=params.kind)
    scaled = z_bose_exact(params, config)
    unscaled = z_bose_exact_unscaled(params, config)
    payload = {"gauge": cfg["gauge"], "seed": cfg["seed"],
               "scaled": estimate_payload(scaled),
               "unscaled": estimate_payload(unscaled)}
    print(f"log Z_B (scaled)   = {scaled.log_value:.12g}")
    print(f"log Z_B (unscaled) = {unscaled.log_value:.12g}")
    return payload, 0


def run_wilson_mc(cfg):
    params = _params_from_cfg(cfg)
    est = z_wilson_mc(params, cfg["samples"], cfg["seed"],
                      n_workers=cfg["workers"], gauge_fixed=cfg["gauge_fixed"],
                      block_size=cfg["block_size"])
    payload = {"gauge_fixed": cfg["gauge_fixed"], **estimate_payload(est)}
    print(f"Z_w = {est.value:.10g} +/- {est.std_error:.3g} "
          f"({est.n_samples} samples, seed {est.seed})")
    return payload, 0


def run_verify_bounds(cfg):
    params = _params_from_cfg(cfg)
    checks = {}
    all_pass = True
    which = cfg["which"]
    if which in ("bose", "all"):
        chk = verify_bose_bounds(params, cfg["configs"], cfg["seed"],
                                 n_workers=cfg["workers"])
        checks["bose"] = {"violations": chk.violations,
                          "n_samples": chk.n_samples,
                          "worst_margin": chk.worst_margin,
                          "verdict": "pass" if chk.passed else "fail"}
        all_pass &= chk.passed
        print(f"bose-sector bounds: {checks['bose']['verdict']} "
              f"({chk.violations} violations in {chk.n_samples} configs)")
    if which in ("gauge", "all"):
        rep = verify_gauge_bounds(params, n_samples=cfg["samples"],
                                  seed=cfg["seed"], n_workers=cfg["workers"])
        checks["gauge"] = _report_payload(rep)
        all_pass &= rep.passed
        _print_report(rep)
    if which in ("full", "all"):
        rep = verify_full_model(params, cfg["samples"], cfg["seed"],
                                n_workers=cfg["workers"])
        checks["full"] = _report_payload(rep)
        all_pass &= rep.passed
        _print_report(rep)
    consts = BoundConstants.for_params(params)
    payload = {"checks": checks,
               "rates": {"bose_upper": consts.bose_upper,
                         "gauge_lower": consts.gauge_lower,
                         "gauge_upper": consts.gauge_upper},
               "overall": "pass" if all_pass else "fail"}
    print(f"overall: {payload['overall']}")
    return payload, 0 if all_pass else 1


def _report_payload(rep):
    return {"log_value": rep.log_value, "log_lower": rep.log_lower,
            "log_upper": rep.log_upper, "std_error_log": rep.std_error_log,
            "n_samples": rep.n_samples, "method": rep.method,
            "verdict": rep.verdict}


def _print_report(rep):
    print(f"{rep.name}: {rep.verdict} (log value {rep.log_value:.6g} "
          f"in [{rep.log_lower:.6g}, {rep.log_upper:.6g}], "
          f"sigma_log {rep.std_error_log:.2g})")


def run_cue_gue(cfg):
    sweep = sweep_cue_gue(cfg["betas"], cfg["n"], action=cfg["action"])
    csv_path = cfg["csv"] or default_output_dir() / (
        f"cue-gue-n{cfg['n']}-{cfg['action']}.csv")
    write_csv(csv_path, ["beta", "value", "target", "abs_err"], sweep.rows())
    for beta, val, target, err in sweep.rows():
        print(f"beta={beta:<10g} ratio={val:.10g} target={target:.10g} "
              f"abs_err={err:.3g}")
    payload = {"n": cfg["n"], "action": cfg["action"],
               "betas": list(sweep.values), "results": list(sweep.results),
               "target": sweep.target, "csv": str(csv_path)}
    return payload, 0


def run_d2_limit(cfg):
    sweep = sweep_d2_limit(cfg["a_values"], n=cfg["n"], g_sq=cfg["g_sq"])
    csv_path = cfg["csv"] or default_output_dir() / f"d2-limit-n{cfg['n']}.csv"
    write_csv(csv_path, ["a", "value", "target", "abs_err"], sweep.rows())
    for a, val, target, err in sweep.rows():
        print(f"a={a:<10g} f={val:.10g} target={target:.10g} abs_err={err:.3g}")
    payload = {"n": cfg["n"], "g_sq": cfg["g_sq"],
               "a_values": list(sweep.values), "results": list(sweep.results),
               "target": sweep.target, "csv": str(csv_path)}
    return payload, 0


def run_su2_check(cfg):
    chk = su2_bounds_check(cfg["a"], cfg["g_sq"], cfg["d"], g0_sq=cfg["g0_sq"])
    payload = {"scaled_value": chk.scaled_value, "lower": chk.lower,
               "upper": chk.upper, "verdict": "pass" if chk.passed else "fail"}
    print(f"SU(2) scaled one-bond value {chk.scaled_value:.10g} in "
          f"[{chk.lower:.6g}, {chk.upper:.6g}]: {payload['verdict']}")
    return payload, 0 if chk.passed else 1


def run_sweep(cfg):
    if cfg["d"] != 2:
        raise UsageError("the sweep uses the exact d = 2 factorization; "
                         f"got d = {cfg['d']}")
    out_dir = Path(cfg["out_dir"]) if cfg["out_dir"] else (
        default_output_dir() / "sweep")
    out_dir.mkdir(parents=True, exist_ok=True)
    computed = skipped = 0
    points = list(itertools.product(
        cfg["a_values"], cfg["g_sq_values"], cfg["L_values"], cfg["n_values"]))
    for a, g_sq, L, n in points:
        name = f"point_a{a:g}_g{g_sq:g}_L{L}_n{n}_{cfg['kind']}.json"
        path = out_dir / name
        if path.exists() and not cfg["force"]:
            skipped += 1
            print(f"skip {name} (record exists)")
            continue
        t0 = time.perf_counter()
        params = ModelParams(d=2, L=L, n=n, kind=cfg["kind"], a=a, g_sq=g_sq,
                             g0_sq=max(cfg["g0_sq"], g_sq))
        gauge = z_wilson_d2_exact(params)
        bose = z_bose_exact(
            params, GaugeConfig.identity(params.lattice, n=n, kind=cfg["kind"]))
        point_payload = {
            "gauge": estimate_payload(gauge),
            "bose_identity": estimate_payload(bose),
            "log_gauge_per_retained_bond":
                gauge.log_value / params.gauge_fixing.n_retained,
            "log_bose_per_site": bose.log_value / params.lattice.n_sites,
        }
        point_cfg = {"a": a, "g_sq": g_sq, "L": L, "n": n,
                     "kind": cfg["kind"], "d": 2}
        ResultRecord(command="sweep-point", config=point_cfg,
                     payload=point_payload,
                     wall_time_s=time.perf_counter() - t0).write(path)
        computed += 1
        print(f"done {name}")
    payload = {"n_points": len(points), "computed": computed,
               "skipped": skipped, "out_dir": str(out_dir)}
    print(f"sweep: {computed} computed, {skipped} skipped, "
          f"records in {out_dir}")
    return payload, 0


@dataclass(frozen=True)
class Command:
    help: str
    opts: tuple
    run: callable


COMMANDS = {
    "lattice-info": Command(
        "site, bond, plaquette and gauge-tree counts",
        (Opt("--d", "int", 2, "lattice dimension"),
         Opt("--L", "int", 3, "sites per side"),
         Opt("--a", "float", 1.0, "lattice spacing")),
        run_lattice_info),
    "z-bond": Command(
        "one-bond gauge partition value by quadrature",
        (Opt("--coupling", "float", None,
             "coupling c directly (overrides --a/--g-sq/--d)"),
         Opt("--n", "int", 1, "matrix size N"),
         Opt("--kind", "choice", "U", "group family", ("U", "SU")),
         Opt("--a", "float", 1.0, "lattice spacing"),
         Opt("--g-sq", "float", 1.0, "gauge coupling g^2"),
         Opt("--d", "int", 2, "dimension (sets c = a^{d-4}/g^2)")),
        run_z_bond),
    "bose-exact": Command(
        "exact matter-sector determinant on a fixed gauge configuration",
        MODEL_OPTS + (
            Opt("--gauge", "choice", "identity", "gauge configuration",
                ("identity", "random")),
            Opt("--seed", "int", 0, "seed for --gauge random")),
        run_bose_exact),
    "wilson-mc": Command(
        "Monte Carlo estimate of the gauge partition value",
        MODEL_OPTS + MC_OPTS + (
            Opt("--gauge-fixed", "bool", False,
                "sample only bonds outside the gauge tree"),),
        run_wilson_mc),
    "verify-bounds": Command(
        "check partition values against their proved rate bounds",
        MODEL_OPTS + MC_OPTS + (
            Opt("--which", "choice", "all", "which sector to verify",
                ("bose", "gauge", "full", "all")),
            Opt("--configs", "int", 100,
                "random gauge configurations for the matter-sector check")),
        run_verify_bounds),
    "cue-gue": Command(
        "sweep of the normalized one-bond value toward its Gaussian limit",
        (Opt("--n", "int", 1, "matrix size N"),
         Opt("--betas", "floats", (1e-1, 1e-2, 1e-3, 1e-4),
             "comma list of inverse couplings"),
         Opt("--action", "choice", "cosine", "integrand family",
             ("cosine", "quadratic")),
         Opt("--csv", "str", None, "CSV output path")),
        run_cue_gue),
    "d2-limit": Command(
        "sweep of the d = 2 normalized free energy toward its limit",
        (Opt("--n", "int", 1, "matrix size N"),
         Opt("--a-values", "floats", (1.0, 1e-1, 1e-2, 1e-3),
             "comma list of lattice spacings"),
         Opt("--g-sq", "float", 1.0, "gauge coupling g^2"),
         Opt("--csv", "str", None, "CSV output path")),
        run_d2_limit),
    "su2-check": Command(
        "SU(2) scaled one-bond value against its uniform bounds",
        (Opt("--d", "int", 3, "lattice dimension"),
         Opt("--a", "float", 1.0, "lattice spacing"),
         Opt("--g-sq", "float", 1.0, "gauge coupling g^2"),
         Opt("--g0-sq", "float", 4.0, "reference coupling bound")),
        run_su2_check),
    "sweep": Command(
        "grid of exact d = 2 values over (a, g^2, L, N), resumable",
        (Opt("--a-values", "floats", (1.0, 0.5), "lattice spacings"),
         Opt("--g-sq-values", "floats", (1.0,), "gauge couplings"),
         Opt("--L-values", "ints", (2, 3), "side lengths"),
         Opt("--n-values", "ints", (1,), "matrix sizes"),
         Opt("--kind", "choice", "U", "group family", ("U", "SU")),
         Opt("--g0-sq", "float", 4.0, "reference coupling bound"),
         Opt("--d", "int", 2, "dimension (must be 2)"),
         Opt("--out-dir", "str", None,
             "directory for per-point records (resume unit)"),
         Opt("--force", "bool", False, "recompute existing records")),
        run_sweep),
}


# ------------------------------------------------------- option resolution

def _add_opt(sp, opt):
    kw = {"help": opt.help, "default": argparse.SUPPRESS, "dest": opt.dest}
    if opt.kind == "bool":
        sp.add_argument(opt.flag, action="store_true", **kw)
    elif opt.kind == "floats":
        sp.add_argument(opt.flag, type=_parse_float_list, **kw)
    elif opt.kind == "ints":
        sp.add_argument(opt.flag, type=_parse_int_list, **kw)
    elif opt.kind == "choice":
        sp.add_argument(opt.flag, type=str, choices=opt.choices, **kw)
    elif opt.kind == "int":
        sp.add_argument(opt.flag, type=int, **kw)
    elif opt.kind == "float":
        sp.add_argument(opt.flag, type=float, **kw)
    else:
        sp.add_argument(opt.flag, type=str, **kw)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="boselgt",
        description="lattice gauge-matter partition values, bounds and limits")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, command in COMMANDS.items():
        sp = sub.add_parser(name, help=command.help, description=command.help)
        for opt in COMMON_OPTS + command.opts:
            _add_opt(sp, opt)
    return parser


def _coerce(opt, raw, origin):
    raw = raw.strip()
    try:
        if opt.kind == "bool":
            return _BOOL_STRINGS[raw.lower()]
        if opt.kind == "int":
            return int(raw)
        if opt.kind == "float":
            return float(raw)
        if opt.kind == "floats":
            return tuple(float(t) for t in raw.split(",") if t.strip())
        if opt.kind == "ints":
            return tuple(int(t) for t in raw.split(",") if t.strip())
        if opt.kind == "choice":
            if raw not in opt.choices:
                raise UsageError(
                    f"{origin}: {opt.flag} must be one of {opt.choices}, got {raw!r}")
            return raw
        return raw
    except (ValueError, KeyError):
        raise UsageError(f"{origin}: cannot parse {raw!r} for {opt.flag}") from None


def read_config_file(path, command, opts):
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keep case so keys match option names like --L
    if not parser.read(path):
        raise UsageError(f"config file not found or unreadable: {path}")
    by_dest = {o.dest: o for o in opts}
    out = {}
    for section in ("common", command):
        if not parser.has_section(section):
            continue
        for key, raw in parser.items(section):
            dest = key.replace("-", "_")
            if dest in ("config", "output"):
                continue
            if dest not in by_dest:
                if section == "common":
                    continue  # shared key some other command uses
                raise UsageError(
                    f"unknown option {key!r} in section [{section}] of {path}")
            out[dest] = _coerce(by_dest[dest], raw, f"{path} [{section}]")
    return out


def resolve_config(command, given, opts):
    cfg = {o.dest: o.default for o in opts}
    config_file = given.get("config", cfg.get("config"))
    if config_file:
        cfg.update(read_config_file(config_file, command, opts))
    cfg.update(given)
    return cfg


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    given = vars(args)
    command = given.pop("command")
    spec = COMMANDS[command]
    opts = COMMON_OPTS + spec.opts
    try:
        cfg = resolve_config(command, given, opts)
        start = time.perf_counter()
        payload, code = spec.run(cfg)
        wall = time.perf_counter() - start
        out = cfg.get("output")
        stamp = utc_now_iso().replace(":", "").replace("+0000", "Z")
        path = Path(out) if out else (
            default_output_dir() / f"{command}-{stamp}.json")
        echo = {k: (list(v) if isinstance(v, tuple) else v)
                for k, v in cfg.items() if k not in ("config", "output")}
        ResultRecord(command=command, config=echo, payload=payload,
                     wall_time_s=wall).write(path)
        print(f"record: {path}")
        return code
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
