"""Command-line driver: ``arcticpaths <command> [options]``.

Exit codes: 0 ok, 2 configuration error, 3 invariant violation,
4 size-guard refusal.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import arctic, asymptotics, exactcomb, onepoint, sampler, selftest
from .boundary import ShapeError, StartSequence, realize
from .shapefile import load_shape

EXIT_OK, EXIT_CONFIG, EXIT_INVARIANT, EXIT_GUARD = 0, 2, 3, 4
COMMANDS = ("partition", "onepoint", "arctic", "converge", "sample", "selftest")


class ConfigError(ValueError):
    pass


class InvariantError(AssertionError):
    pass


@dataclass
class RunConfig:
    command: str
    shape: str | None = None
    seq: str | None = None
    n: tuple = ()
    grid: int = arctic.PORTION_SAMPLES
    tol: float = 1e-9
    seed: int = 0
    out: str | None = None
    svg: bool = False
    triangular: bool = False
    kind: str = "H"
    family: str = "I"
    samples: int = 1000
    burn_in: int | None = None
    thin: int | None = None
    chains: int = 1
    brute: bool = False
    fans: tuple = ()

    def canonical(self) -> str:
        """``key=value`` lines in field order; ``None`` written as ``-``."""
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                s = "-"
            elif isinstance(v, tuple):
                s = ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)
            elif isinstance(v, float):
                s = repr(v)
            else:
                s = str(v)
            lines.append(f"{f.name}={s}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_canonical(cls, text: str) -> "RunConfig":
        raw = dict(line.split("=", 1) for line in text.splitlines() if line)
        kw = {}
        for f in fields(cls):
            s = raw.get(f.name, "-")
            if s == "-" and f.name not in ("command",):
                kw[f.name] = None if f.default is None else f.default
                if f.name in ("n", "fans"):
                    kw[f.name] = ()
                continue
            if f.name == "n":
                kw[f.name] = tuple(int(x) for x in s.split(",") if x)
            elif f.name == "fans":
                kw[f.name] = tuple(float(x) for x in s.split(",") if x)
            elif f.name in ("svg", "triangular", "brute"):
                kw[f.name] = s == "True"
            elif f.name in ("grid", "seed", "samples", "burn_in", "thin", "chains"):
                kw[f.name] = int(s)
            elif f.name == "tol":
                kw[f.name] = float(s)
            else:
                kw[f.name] = s
        return cls(**kw)


# --------------------------------------------------------------------------
# argument parsing


def _int_list(text: str) -> tuple:
    try:
        vals = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected INT[,INT...], got {text!r}") from None
    if not vals or any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError(f"expected positive integers, got {text!r}")
    return vals


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected FLOAT[,FLOAT...], got {text!r}") from None


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2^64)")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--shape", metavar="FILE", help="YAML shape file")
    common.add_argument("--seq", metavar="LIST", help="explicit starting points, e.g. 0,2,3")
    common.add_argument("--n", type=_int_list, default=(), metavar="INT[,INT...]",
                        help="system size(s) used to realize --shape")
    common.add_argument("--grid", type=int, default=arctic.PORTION_SAMPLES,
                        help="samples per arctic portion")
    common.add_argument("--tol", type=float, default=1e-9, help="tangency tolerance")
    common.add_argument("--seed", type=_u64, default=0, metavar="U64")
    common.add_argument("--out", metavar="DIR", help="write outputs into DIR instead of stdout")
    common.add_argument("--svg", action="store_true", help="also emit an SVG figure")
    common.add_argument("--triangular", action="store_true", help="triangular-lattice frame in SVG")

    p = argparse.ArgumentParser(prog="arcticpaths",
                                description="Exact and asymptotic tools for lattice paths "
                                            "with arbitrary starting points.")
    p.add_argument("--selftest", action="store_true", help="same as the selftest command")
    sub = p.add_subparsers(dest="command")
    sub.add_parser("partition", parents=[common], help="partition function by every route") \
        .add_argument("--brute", action="store_true", help="also count by enumeration")
    op = sub.add_parser("onepoint", parents=[common], help="exact one-point table (CSV)")
    op.add_argument("--kind", default="H", choices=onepoint.KINDS)
    ar = sub.add_parser("arctic", parents=[common], help="arctic curve portions (CSV, SVG)")
    ar.add_argument("--fans", type=_float_list, default=(), metavar="T[,T...]",
                    help="draw tangent lines at these parameter values")
    cv = sub.add_parser("converge", parents=[common], help="finite-n vs saddle-point rate (CSV)")
    cv.add_argument("--family", default="I", choices=("I", "II"))
    sm = sub.add_parser("sample", parents=[common], help="Monte Carlo samples (text, SVG)")
    sm.add_argument("--samples", type=int, default=1000)
    sm.add_argument("--burn-in", dest="burn_in", type=int, default=None)
    sm.add_argument("--thin", type=int, default=None)
    sm.add_argument("--chains", type=int, default=1)
    sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    return p


def config_from_args(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    command = "selftest" if ns.selftest else ns.command
    if command is None:
        raise ConfigError("field 'command': one of " + ", ".join(COMMANDS) + " is required")
    kw = {f.name: getattr(ns, f.name) for f in fields(RunConfig)
          if f.name != "command" and hasattr(ns, f.name)}
    return RunConfig(command=command, **kw)


# --------------------------------------------------------------------------
# helpers


def _sequence(cfg: RunConfig, n: int | None = None) -> StartSequence:
    if cfg.seq:
        try:
            return StartSequence.parse(cfg.seq)
        except (ShapeError, ValueError) as err:
            raise ConfigError(f"field '--seq': {err}") from None
    if cfg.shape:
        if n is None:
            if len(cfg.n) != 1:
                raise ConfigError("field '--n': give exactly one size with --shape")
            n = cfg.n[0]
        return realize(_shape(cfg), n)
    raise ConfigError("field '--seq'/'--shape': one of them is required")


_shape_cache = {}


def _shape(cfg: RunConfig):
    if not cfg.shape:
        raise ConfigError("field '--shape': required for this command")
    if cfg.shape not in _shape_cache:
        _shape_cache[cfg.shape] = load_shape(cfg.shape)
    return _shape_cache[cfg.shape]


def _emit(cfg: RunConfig, name: str, text: str, stdout):
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        path = os.path.join(cfg.out, name)
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {path}", file=sys.stderr)
    else:
        stdout.write(text)


# --------------------------------------------------------------------------
# commands


def cmd_partition(cfg: RunConfig, stdout=sys.stdout) -> str:
    seq = _sequence(cfg)
    routes = [
        ("det_A", lambda: exactcomb.det_exact(exactcomb.lgv_A(seq))),
        ("det_Atilde", lambda: exactcomb.det_exact(exactcomb.lgv_Atilde(seq))),
        ("det_Ahat", lambda: exactcomb.det_exact(exactcomb.lgv_Ahat(seq))),
        ("vandermonde", lambda: exactcomb.partition_product(seq)),
        ("bform", lambda: exactcomb.partition_bform(seq)),
    ]
    if cfg.brute:
        routes.append(("brute_force", lambda: exactcomb.brute_force_count(seq)))
    vals = [(name, f()) for name, f in routes]
    text = f"sequence {seq}\n" + "".join(f"{name:<12} {v}\n" for name, v in vals)
    if len({v for _, v in vals}) != 1:
        dump = (f"A = {exactcomb.lgv_A(seq)}\nAtilde = {exactcomb.lgv_Atilde(seq)}\n"
                f"Ahat = {exactcomb.lgv_Ahat(seq)}\n")
        raise InvariantError("partition routes disagree\n" + text + dump)
    _emit(cfg, "partition.txt", text, stdout)
    return text


def cmd_onepoint(cfg: RunConfig, stdout=sys.stdout) -> str:
    seq = _sequence(cfg)
    try:
        tab = onepoint.table(seq, cfg.kind)
    except ValueError as err:
        raise ConfigError(f"field '--kind': {err}") from None
    text = onepoint.table_to_csv(tab)
    _emit(cfg, f"onepoint_{cfg.kind}.csv", text, stdout)
    return text


def cmd_arctic(cfg: RunConfig, stdout=sys.stdout) -> str:
    from .svg import render

    shape = _shape(cfg)
    parts = arctic.portions(shape, cfg.grid)
    for p in parts:
        r = p.tangency_residual()
        print(f"# {p.kind}: {len(p.t)} samples, conjectured={str(p.conjectured).lower()}, "
              f"cusps={len(p.cusps)}, tangency={r:.1e}", file=sys.stderr)
        if r > cfg.tol:
            raise InvariantError(f"tangency residual {r:.3e} exceeds --tol on {p.kind}")
    text = arctic.portions_to_csv(parts)
    _emit(cfg, "arctic.csv", text, stdout)
    if cfg.svg:
        res = arctic.resolvent(shape)

        def tangent(t):
            line = arctic.tangent_at(res, t)
            return line.slope, t

        svg = render(parts, float(shape.alpha1), fans=cfg.fans, tangents=tangent,
                     triangular=cfg.triangular)
        if cfg.out:
            _emit(cfg, "arctic.svg", svg, stdout)
        else:
            with open("arctic.svg", "w", newline="\n") as fh:
                fh.write(svg)
            print("wrote arctic.svg", file=sys.stderr)
    return text


def cmd_converge(cfg: RunConfig, stdout=sys.stdout) -> str:
    shape = _shape(cfg)
    if not cfg.n:
        raise ConfigError("field '--n': at least one size is required")
    tab = asymptotics.convergence_study(shape, cfg.n, family=cfg.family)
    for n, d in tab.max_deviation.items():
        print(f"# n={n}: max deviation {d:.4f}", file=sys.stderr)
    text = tab.to_csv()
    _emit(cfg, f"converge_{cfg.family}.csv", text, stdout)
    return text


def cmd_sample(cfg: RunConfig, stdout=sys.stdout) -> str:
    seq = _sequence(cfg)
    if cfg.samples <= 0 or cfg.chains <= 0:
        raise ConfigError("field '--samples'/'--chains': must be positive")
    samples = sampler.sample_ensemble(seq, cfg.samples, cfg.burn_in, cfg.thin,
                                      seed=cfg.seed, chains=cfg.chains)
    text = sampler.samples_to_text(samples)
    _emit(cfg, "samples.txt", text, stdout)
    if cfg.svg:
        if not cfg.shape:
            raise ConfigError("field '--shape': the overlay figure needs a shape")
        shape = _shape(cfg)
        parts = arctic.portions(shape, cfg.grid)
        csv_text, svg = sampler.overlay_export(samples, parts, float(shape.alpha1),
                                               triangular=cfg.triangular)
        X1 = arctic.special_points(shape).X1Y1.X
        pts = [sampler.outer_shell(s) for s in samples]
        frac = sampler.overlay_fraction(np.concatenate(pts), parts, X1, 0.1)
        print(f"# outer-shell vertices inside the 0.1-inflated region: {frac:.4f}",
              file=sys.stderr)
        target = cfg.out or "."
        os.makedirs(target, exist_ok=True)
        for name, body in (("overlay.csv", csv_text), ("overlay.svg", svg)):
            with open(os.path.join(target, name), "w", newline="\n") as fh:
                fh.write(body)
    return text


def cmd_selftest(cfg: RunConfig, stdout=sys.stdout) -> str:
    lines = []
    ok = selftest.run(cfg.seed, out=lambda s: (lines.append(s), print(s, file=stdout)))
    if not ok:
        raise InvariantError("selftest failed")
    return "\n".join(lines)


HANDLERS = {
    "partition": cmd_partition,
    "onepoint": cmd_onepoint,
    "arctic": cmd_arctic,
    "converge": cmd_converge,
    "sample": cmd_sample,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = config_from_args(argv)
        HANDLERS[cfg.command](cfg, sys.stdout)
    except SystemExit as err:  # argparse usage errors
        return EXIT_CONFIG if err.code not in (0, None) else EXIT_OK
    except exactcomb.SizeGuardError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_GUARD
    except (ConfigError, ShapeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except AssertionError as err:
        print(f"invariant violation: {err}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
