"""
Command line front end: ``heckeplane <command> [options]``.

Exit status is 0 when every check passes, 1 when a verification fails and 2 for
usage or configuration errors.
"""

import argparse
import os
import sys
from dataclasses import dataclass, field, replace

from . import checks
from ._kernels import set_threads
from .errors import DomainError
from .hecke_words import alpha_csv, alpha_table
from .report import VerificationReport, emit

THREADS_ENV = "HECKEPLANE_THREADS"

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


def _default_threads():
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV}={raw!r} is not an integer")
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1")
    return n


@dataclass(frozen=True)
class RunConfig:
    """Everything a command may read.  ``None`` means the command's own default."""

    tolerances: dict = field(default_factory=lambda: dict(checks.DEFAULT_TOLS))
    cutoff: int = None
    trunc: int = None
    primes: tuple = None
    weights: tuple = None
    threads: int = 1
    seed: int = 0
    format: str = "json"
    out: str = None
    timing: bool = False

    def validate(self):
        for k, v in self.tolerances.items():
            if not v > 0:
                raise ConfigError(f"tolerance {k} must be positive, got {v}")
        if self.cutoff is not None and self.cutoff < 1:
            raise ConfigError("cutoff must be >= 1")
        if self.trunc is not None and self.trunc < 0:
            raise ConfigError("trunc must be >= 0")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.format!r}")
        for p in self.primes or ():
            if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
                raise ConfigError(f"{p} is not prime")
        for w in self.weights or ():
            if w < 12 or w % 2:
                raise ConfigError(f"weight {w} must be even and >= 12")
        return self


def _ints(text):
    return tuple(int(t) for t in text.replace(",", " ").split())


def load_config(path, base=None):
    """Read ``key = value`` lines; ``#`` starts a comment.

    Keys: cutoff, trunc, primes, weights, threads, seed, format, out, timing,
    and tol.<family> for each tolerance family.
    """
    cfg = base or RunConfig()
    tols = dict(cfg.tolerances)
    upd = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}")
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        try:
            if key.startswith("tol."):
                fam = key[4:]
                if fam not in tols:
                    raise ConfigError(f"{path}:{lineno}: unknown tolerance family {fam!r}")
                tols[fam] = float(val)
            elif key in ("cutoff", "trunc", "threads", "seed"):
                upd[key] = int(val)
            elif key in ("primes", "weights"):
                upd[key] = _ints(val)
            elif key in ("format", "out"):
                upd[key] = val
            elif key == "timing":
                upd[key] = val.lower() in ("1", "true", "yes", "on")
            else:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        except ValueError as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {val!r}")
    return replace(cfg, tolerances=tols, **upd).validate()


def _or(v, default):
    return default if v is None else v


def _tol(cfg, fam):
    return cfg.tolerances[fam]


def run_alpha(cfg):
    return checks.check_alpha(K=_or(cfg.trunc, 24))


def run_intertwine(cfg):
    return checks.check_intertwine(seed=cfg.seed, tol=_tol(cfg, "intertwine"))


def run_closed_form(cfg):
    return checks.check_closed_form(bound=_or(cfg.cutoff, 20), tol=_tol(cfg, "closed_form"))


def run_transfer(cfg):
    return checks.check_transfer(ps=_or(cfg.primes, (2, 3)), seed=cfg.seed, tol=_tol(cfg, "transfer"))


def run_identity(cfg):
    return checks.check_insertion_identity(seed=cfg.seed, tol=_tol(cfg, "identity"))


def run_bound(cfg):
    return checks.check_bound_scans(B=_or(cfg.cutoff, 200))


def run_averaging(cfg):
    return checks.check_averaging(ps=_or(cfg.primes, (2, 3)), seed=cfg.seed, tol=_tol(cfg, "averaging"))


def run_poincare(cfg):
    w = (cfg.weights or (12,))[0]
    return checks.check_poincare(m=w - 1, B=_or(cfg.cutoff, 200), tol=_tol(cfg, "poincare"))


def run_growth(cfg):
    p = (cfg.primes or (2,))[0]
    return checks.check_growth(p=p, Ns=tuple(range(_or(cfg.trunc, 3) + 1)), B=_or(cfg.cutoff, 40))


def run_ramanujan(cfg):
    pmax = max(cfg.primes) if cfg.primes else 97
    return checks.check_ramanujan(weights=_or(cfg.weights, (12, 16, 18, 20, 22, 26)), pmax=pmax,
                                  N=cfg.trunc)


# fixed order for `all`
COMMANDS = {
    "ramanujan": run_ramanujan,
    "alpha-table": run_alpha,
    "verify-intertwine": run_intertwine,
    "verify-lemma22": run_closed_form,
    "verify-transfer": run_transfer,
    "verify-identity-223": run_identity,
    "averaging-check": run_averaging,
    "bound-scan": run_bound,
    "poincare-coeffs": run_poincare,
    "growth-scan": run_growth,
}


def run_command(name, cfg):
    if name == "all":
        rep = VerificationReport("all", {"commands": list(COMMANDS)}, seed=cfg.seed)
        for sub, fn in COMMANDS.items():
            r = fn(cfg)
            rep.extend(r, prefix=f"{sub}:")
            rep.wall_time += r.wall_time
        return rep
    if name not in COMMANDS:
        raise ConfigError(f"unknown command {name!r}")
    return COMMANDS[name](cfg)


def build_parser():
    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = argparse.ArgumentParser(prog="heckeplane", formatter_class=fmt,
                                description="Planar Hecke operator verification suite.")
    p.add_argument("command", choices=list(COMMANDS) + ["all"])
    p.add_argument("--config", help="key = value file; command line flags override it")
    p.add_argument("--weight", type=int, action="append",
                   help="weight (repeatable); ramanujan default 12 16 18 20 22 26, poincare-coeffs 12")
    p.add_argument("--prime", type=int, action="append",
                   help="prime (repeatable); transfer/averaging 2 3, growth 2, ramanujan pmax 97")
    p.add_argument("--cutoff", type=int, help="lattice max-norm B (verify-lemma22 20, scans 200, growth 40)")
    p.add_argument("--trunc", type=int, help="truncation: alpha K (24), growth N max (3), q-series length")
    p.add_argument("--tol", type=float, help="override the tolerance of the command's check family")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default 0)")
    p.add_argument("--threads", type=int, default=None, help=f"numba threads (default ${THREADS_ENV} or 1)")
    p.add_argument("--format", choices=["json", "csv"], default=None, help="report format (default json)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true", help="include wall time in JSON (not deterministic)")
    p.add_argument("--alpha-csv", metavar="PATH", help="alpha-table: also write the (k, ell, r, alpha) table")
    return p


TOL_FAMILY = {
    "verify-intertwine": "intertwine", "verify-lemma22": "closed_form", "verify-transfer": "transfer",
    "verify-identity-223": "identity", "averaging-check": "averaging", "poincare-coeffs": "poincare",
    "growth-scan": "growth",
}


def config_from_args(args):
    cfg = RunConfig(threads=_default_threads())
    if args.config:
        cfg = load_config(args.config, cfg)
    upd = {}
    for key in ("cutoff", "trunc", "seed", "threads", "format", "out"):
        v = getattr(args, key)
        if v is not None:
            upd[key] = v
    if args.weight:
        upd["weights"] = tuple(args.weight)
    if args.prime:
        upd["primes"] = tuple(args.prime)
    if args.timing:
        upd["timing"] = True
    tols = dict(cfg.tolerances)
    if args.tol is not None:
        fams = [TOL_FAMILY[args.command]] if args.command in TOL_FAMILY else list(tols)
        for f in fams:
            tols[f] = args.tol
    return replace(cfg, tolerances=tols, **upd).validate()


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        cfg = config_from_args(args)
        set_threads(cfg.threads)
        rep = run_command(args.command, cfg)
    except (ConfigError, DomainError) as e:
        print(f"heckeplane: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = emit(rep, cfg.format, timing=cfg.timing)
    try:
        if cfg.out:
            with open(cfg.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        if args.alpha_csv and args.command == "alpha-table":
            with open(args.alpha_csv, "w") as fh:
                fh.write(alpha_csv(alpha_table(_or(cfg.trunc, 24))))
    except OSError as e:
        print(f"heckeplane: cannot write output: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_PASS if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
