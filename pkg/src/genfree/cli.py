"""Command-line front end: ``genfree enumerate|density|ehyp|certify``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .barriers import (
    CommutingPairs,
    DensityReport,
    OPred,
    TPred,
    UPred,
    VPred,
    WPred,
    ZPred,
    density,
)
from .config import ExperimentConfig, load_config_values, parse_ns
from .enumeration import (
    AllVertices,
    CyclicSuborbit,
    enumerate_ball,
    growth_csv,
    load_ball,
    region,
    save_ball,
)
from .errors import BudgetExceeded, GenfreeError, InputError, RangeExceeded
from .groups import load_model

log = logging.getLogger("genfree")

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_RANGE = 0, 1, 2, 3

SETS = ("U", "W", "V", "Z", "T", "O", "commuting")

# command-line flag -> config key
_PARAM_FLAGS = {
    "eps": str, "eps1": str, "eps2": str, "rho": str, "Delta": int, "C": int, "D": int,
    "tau": int, "nu": int, "M": int, "M1": int, "M2": int, "h": str, "m": int, "L": int,
    "Lambda": str, "zt_constant": int, "suborbit": str, "region": str,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(p):
    p.add_argument("--config", help="key=value experiment file")
    p.add_argument("--model", help="model spec (free2, abelian2, raag3:0-1,1-2, surface2, ...)")
    p.add_argument("--presentation", help="presentation file (overrides --model)")
    p.add_argument("--radius", type=int)
    p.add_argument("--ns", help="values of n: '6-12' or '2,4,8'")
    p.add_argument("--mode", choices=("exact", "sampled"))
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--cache", help="ball cache file")
    p.add_argument("--out", help="output file (default: stdout)")
    for name, typ in _PARAM_FLAGS.items():
        p.add_argument(f"--{name}", type=typ, dest=f"param_{name}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="genfree", description="Generic free subgroups and statistical hyperbolicity experiments.")
    parser.add_argument("--version", action="version", version=f"genfree {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    p = sub.add_parser("enumerate", help="enumerate a ball, write the cache and a growth CSV")
    _common(p)
    p = sub.add_parser("density", help="density series of a negligible set")
    _common(p)
    p.add_argument("--set", dest="set_name", choices=SETS)
    p = sub.add_parser("ehyp", help="e(n) series over balls and annuli with a convergence fit")
    _common(p)
    p.add_argument("--fit-out", help="convergence fit JSON file")
    p.add_argument("--kinds", default="ball,annulus", help="comma list of ball, annulus")
    p = sub.add_parser("certify", help="certify that a tuple generates a free subgroup")
    _common(p)
    p.add_argument("words", nargs="+", help="[MODEL] WORD ...")
    return parser


def make_config(args) -> ExperimentConfig:
    values = load_config_values(args.config) if getattr(args, "config", None) else {}
    for key in ("model", "presentation", "radius", "mode", "samples", "seed", "workers", "cache", "out"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    if getattr(args, "ns", None):
        values["ns"] = parse_ns(args.ns)
    if getattr(args, "set_name", None):
        values["set"] = args.set_name
    for name in _PARAM_FLAGS:
        v = getattr(args, f"param_{name}", None)
        if v is not None:
            values[name] = v
    try:
        return ExperimentConfig(**values)
    except TypeError as exc:
        raise InputError(str(exc)) from None


def _model_of(cfg: ExperimentConfig):
    return load_model(cfg.presentation or cfg.model, max_radius=max(cfg.radius, 6))


def _header(cfg: ExperimentConfig, what: str) -> str:
    return f"# genfree {__version__} {what} config={cfg.config_hash()} model={cfg.model}\n"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _ball(cfg: ExperimentConfig, model, need: int):
    """Load the cache (required to exist when named) or enumerate in memory."""
    if cfg.cache:
        path = Path(cfg.cache)
        if not path.exists():
            raise FileNotFoundError(
                f"ball cache {path} not found; create it with "
                f"'genfree enumerate --model {cfg.model} --radius {need} --cache {path}'")
        ball = load_ball(path, model)
        if ball.radius < need:
            raise RangeExceeded(f"cache radius {ball.radius} < needed {need}; re-run genfree enumerate "
                                f"with --radius {need}", needed=need, available=ball.radius)
        return ball
    return enumerate_ball(model, need)


# -- commands ------------------------------------------------------------------------

def cmd_enumerate(cfg: ExperimentConfig) -> int:
    model = _model_of(cfg)
    if cfg.cache and Path(cfg.cache).exists():
        ball = load_ball(cfg.cache, model)
        if ball.radius < cfg.radius:
            ball = enumerate_ball(model, cfg.radius)
            save_ball(ball, cfg.cache)
        log.info("cache %s reused", cfg.cache)
    else:
        ball = enumerate_ball(model, cfg.radius)
        if cfg.cache:
            save_ball(ball, cfg.cache)
    text = growth_csv(ball)
    lines = text.splitlines()
    keep = [lines[0]] + lines[1:cfg.radius + 2]
    _emit(_header(cfg, "enumerate") + "\n".join(keep) + "\n", cfg.out)
    return EXIT_OK


def _predicate(cfg: ExperimentConfig, model, ball):
    s = cfg.set
    if s == "U":
        orbit = AllVertices() if cfg.suborbit == "all" else CyclicSuborbit(model, cfg.h)
        return UPred(model, cfg.eps, cfg.M, orbit)
    if s == "W":
        return WPred(model, cfg.eps, model.word(cfg.h), cfg.C)
    if s == "V":
        return VPred(model, cfg.eps1, cfg.eps2, cfg.barrier_spec(model))
    if s == "Z":
        return ZPred(model, cfg.eps, 1 - cfg.eps, cfg.C if cfg.zt_constant is None else cfg.zt_constant)
    if s == "T":
        return TPred(model, cfg.eps, 1 - cfg.eps, cfg.C if cfg.zt_constant is None else cfg.zt_constant)
    if s == "O":
        orbit = AllVertices() if cfg.suborbit == "all" else CyclicSuborbit(model, cfg.h)
        return OPred(ball, cfg.M1, cfg.M2, orbit)
    if s == "commuting":
        return CommutingPairs(model)
    raise InputError(f"unknown set {s!r}")


def cmd_density(cfg: ExperimentConfig) -> int:
    cfg.validate()
    model = _model_of(cfg)
    ns = cfg.ns or [cfg.radius]
    ball = _ball(cfg, model, cfg.radius if cfg.cache else max(ns) + cfg.Delta)
    pred = _predicate(cfg, model, ball)
    params = " ".join(f"{k}={v}" for k, v in sorted(pred.params().items()))
    lines = [f"# set={cfg.set} region={cfg.region} rho={cfg.rho} Delta={cfg.Delta} mode={cfg.mode} "
             f"seed={cfg.seed} {params}".rstrip(), "n,count,total,density,se"]
    for n in ns:
        try:
            reg = region(ball, cfg.region, n, cfg.Delta, cfg.rho)
            rep: DensityReport = density(pred, reg, cfg.mode, cfg.samples, cfg.seed + n, cfg.workers)
        except (RangeExceeded, BudgetExceeded) as exc:
            log.warning("n=%d: %s", n, exc)
            lines.append(f"{n},unknown,unknown,unknown,unknown")
            continue
        lines.append(rep.row())
    _emit(_header(cfg, "density") + "\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_ehyp(cfg: ExperimentConfig, kinds=("ball", "annulus"), fit_out=None) -> int:
    from .stathyp import convergence_fit, sprawl_csv, sprawl_series

    model = _model_of(cfg)
    ns = cfg.ns or list(range(1, cfg.radius + 1))
    if min(ns) < 1:
        raise InputError("n >= 1 required")
    need = max(ns) + (cfg.Delta if "annulus" in kinds else 0)
    ball = _ball(cfg, model, need)
    series = {}
    for kind in kinds:
        series[kind] = sprawl_series(ball, kind, ns, cfg.Delta, cfg.mode, cfg.samples, cfg.seed)
    text = _header(cfg, "ehyp") + sprawl_csv(series.get("ball"), series.get("annulus"))
    fits = {}
    for kind, s in series.items():
        if len(s) >= 4:
            fits[kind] = convergence_fit(s).as_dict()
    fit_doc = {"version": __version__, "config_hash": cfg.config_hash(), "model": cfg.model,
               "Delta": cfg.Delta, "fits": fits}
    fit_text = json.dumps(fit_doc, sort_keys=True, indent=2) + "\n"
    if cfg.out:
        _emit(text, cfg.out)
        Path(fit_out or Path(cfg.out).with_suffix(".fit.json")).write_text(fit_text)
    else:
        sys.stdout.write(text)
        if fit_out:
            Path(fit_out).write_text(fit_text)
        else:
            sys.stdout.write("# fit " + json.dumps(fit_doc, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_certify(cfg: ExperimentConfig, words) -> int:
    from .freeness import certify_tuple, single_element_certificate

    cfg.validate()
    model = _model_of(cfg)
    cfg.validate(model)
    tup = [model.word(w) for w in words]
    if len(tup) == 1:
        cert = single_element_certificate(tup[0], model, seed=cfg.seed)
    else:
        cert = certify_tuple(tup, cfg.params, cfg.L, model, spec=cfg.barrier_spec(model), D=cfg.D,
                             tau=cfg.tau, Lambda=cfg.Lambda, zt_constant=cfg.zt_constant, seed=cfg.seed)
    doc = json.loads(cert.to_json())
    doc["config_hash"] = cfg.config_hash()
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", cfg.out)
    return EXIT_OK


def _split_model(args, words):
    """``certify free2 a10 b10``: a leading model spec when --model is absent."""
    if args.model is None and args.presentation is None and len(words) >= 2:
        try:
            load_model(words[0])
        except GenfreeError:
            return words
        args.model = words[0]
        return words[1:]
    return words


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"genfree: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        words = _split_model(args, args.words) if args.command == "certify" else None
        cfg = make_config(args)
        if args.command == "enumerate":
            return cmd_enumerate(cfg)
        if args.command == "density":
            return cmd_density(cfg)
        if args.command == "ehyp":
            kinds = tuple(k.strip() for k in args.kinds.split(",") if k.strip())
            if not kinds or any(k not in ("ball", "annulus") for k in kinds):
                raise InputError("--kinds takes ball and/or annulus")
            return cmd_ehyp(cfg, kinds, args.fit_out)
        return cmd_certify(cfg, words)
    except (RangeExceeded, BudgetExceeded) as exc:
        print(f"genfree: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except InputError as exc:
        print(f"genfree: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GenfreeError, OSError) as exc:
        print(f"genfree: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
