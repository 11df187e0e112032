"""Command-line entry point: ``ellqg verify`` and ``ellqg bethe``.

Exit status is 0 when every check passes, 1 when any check fails and 2 for an
invalid configuration.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from typing import Optional

from . import __version__, bethe
from .errors import ConfigError, EllqgError
from .representation import build_module
from .sampling import generic_samples
from .theta import ModularParams
from .verify import SUITES, CheckRecord, SuiteContext, pipeline_records, run_suite

SCHEMA_VERSION = 1
MAX_SITES = 4

DEFAULTS = {
    "tau": [0.0, 0.8],
    "eta": [0.12, 0.03],
    "c": [0.0, 0.0],
    "z": [[0.1, 0.0], [0.45, 0.0]],
    "suite": "all",
    "samples": 20,
    "tol": None,
    "seed": 42,
}


@dataclass(frozen=True)
class RunConfig:
    tau: complex
    eta: complex
    c: complex
    z: tuple
    n: int
    suite: str
    samples: int
    tol: Optional[float]
    seed: int

    @property
    def params(self) -> ModularParams:
        return ModularParams(tau=self.tau, eta=self.eta)

    def context(self) -> SuiteContext:
        return SuiteContext(self.params, self.z, self.c, self.samples, self.seed, self.tol)

    def echo(self) -> dict:
        return {"tau": _pair(self.tau), "eta": _pair(self.eta), "c": _pair(self.c),
                "z": [_pair(v) for v in self.z], "n": self.n, "suite": self.suite,
                "samples": self.samples, "tol": self.tol, "seed": self.seed}


def _pair(v) -> list:
    v = complex(v)
    return [v.real, v.imag]


def _complex(field, value) -> complex:
    if isinstance(value, bool):
        raise ConfigError(field, "expected a number or [re, im] pair")
    if isinstance(value, (int, float)):
        out = complex(value)
    elif isinstance(value, (list, tuple)) and len(value) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
        out = complex(value[0], value[1])
    else:
        raise ConfigError(field, f"expected a number or [re, im] pair, got {value!r}")
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise ConfigError(field, "must be finite")
    return out


def parse_config(raw: dict, overrides: Optional[dict] = None) -> RunConfig:
    """Validate a config mapping (plus CLI overrides) into a RunConfig.

    Raises
    ------
    ConfigError
        Naming the first offending field.
    """
    if not isinstance(raw, dict):
        raise ConfigError("config", "top level must be a JSON object")
    data = dict(DEFAULTS)
    data.update(raw)
    for k, v in (overrides or {}).items():
        if v is not None:
            data[k] = v
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"unsupported version {version!r}")
    tau = _complex("tau", data["tau"])
    if tau.imag <= 0:
        raise ConfigError("tau", f"Im(tau) must be positive, got {tau}")
    eta = _complex("eta", data["eta"])
    c = _complex("c", data["c"])
    if not isinstance(data["z"], list):
        raise ConfigError("z", "expected a list of evaluation points")
    z = tuple(_complex("z", v) for v in data["z"])
    n = data.get("n", len(z))
    if isinstance(n, bool) or not isinstance(n, int):
        raise ConfigError("n", f"expected an integer, got {n!r}")
    if n < 1:
        raise ConfigError("n", f"need at least one site, got {n}")
    if n > MAX_SITES:
        raise ConfigError("n", f"at most {MAX_SITES} sites are supported, got {n}")
    if n != len(z):
        raise ConfigError("n", f"n={n} does not match len(z)={len(z)}")
    suite = data["suite"]
    if suite not in SUITES + ("all",):
        raise ConfigError("suite", f"unknown suite {suite!r}")
    samples = data["samples"]
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 1:
        raise ConfigError("samples", f"must be a positive integer, got {samples!r}")
    tol = data["tol"]
    if tol is not None and (isinstance(tol, bool) or not isinstance(tol, (int, float))
                            or not tol > 0 or not math.isfinite(tol)):
        raise ConfigError("tol", f"must be a positive number, got {tol!r}")
    seed = data["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2 ** 64:
        raise ConfigError("seed", f"must be an unsigned 64-bit integer, got {seed!r}")
    try:
        ModularParams(tau=tau, eta=eta)
    except ValueError as exc:
        raise ConfigError("eta", str(exc)) from None
    return RunConfig(tau, eta, c, z, n, suite, samples, None if tol is None else float(tol), seed)


def load_config(path: Optional[str], overrides: Optional[dict] = None) -> RunConfig:
    raw = {}
    if path is not None:
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from None
    return parse_config(raw, overrides)


def _finite(x: float):
    # JSON has no infinity; failed checks report null
    return x if math.isfinite(x) else None


def _report(config: RunConfig, records: list, started: float, extra: Optional[dict] = None) -> dict:
    records = sorted(records, key=lambda r: r.check_name)
    checks = []
    for r in records:
        d = r.to_dict()
        d["max_residual"] = _finite(d["max_residual"])
        checks.append(d)
    out = {
        "schema_version": SCHEMA_VERSION,
        "pass": all(r.passed for r in records),
        "checks": checks,
        "environment": {"config": config.echo(), "version": __version__,
                        "wall_time_ms": round((time.perf_counter() - started) * 1000, 3)},
    }
    if extra:
        out.update(extra)
    return out


def run_verify(config: RunConfig) -> dict:
    """Run the configured suite and return the report mapping."""
    started = time.perf_counter()
    records = run_suite(config.suite, config.context())
    return _report(config, records, started)


def run_bethe(config: RunConfig) -> dict:
    """Solve the Bethe equations, eigencheck, and report roots and Lambda samples."""
    started = time.perf_counter()
    ctx = config.context()
    p = config.params
    try:
        system = bethe.solve_bethe(config.n, config.z, config.c, params=p, seed=config.seed)
    except EllqgError as exc:
        rec = CheckRecord("bethe.solve", 0, getattr(exc, "best_residual", None) or math.inf,
                          ctx.tolerance(1e-10), False, f"{type(exc).__name__}: {exc}")
        return _report(config, [rec], started, {"system": None})
    records = pipeline_records(ctx, system)
    module = build_module(config.z)
    rng = ctx.rng("bethe.lambda_samples")
    lam = generic_samples(rng, 1, min(config.samples, 5),
                          lambda u: bethe.eigenvalue_lambda(u, system.roots, module.z, system.c, p), p)
    k_rng = ctx.rng("bethe.k_values")
    (uq, kvals), = generic_samples(k_rng, 2, 1, lambda u, q: bethe.unwanted_coefficients(
        module, system.roots, system.c, u, q, p), p)
    system_record = {
        "n": system.n, "z": [_pair(v) for v in system.z], "c": _pair(system.c),
        "roots": [_pair(v) for v in system.roots],
        "residual_norm": system.residual_norm,
        "newton_iterations": system.newton_iterations,
        "restarts_used": system.restarts_used,
        "lambda_samples": [{"u": _pair(u), "lambda": _pair(v)} for (u,), v in lam],
        "k_values": {"u": _pair(uq[0]), "q": _pair(uq[1]),
                     "abs": {f"{name}{''.join(map(str, idx))}": abs(v)
                             for (name, idx), v in sorted(kvals.items())}},
    }
    return _report(config, records, started, {"system": system_record})


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ellqg", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (defaults are used for missing fields)")
    common.add_argument("--tol", type=float, help="override every check tolerance")
    common.add_argument("--samples", type=int, help="random samples per check")
    common.add_argument("--seed", type=int, help="seed for the deterministic sampler")
    common.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", choices=SUITES + ("all",))
    sub.add_parser("bethe", parents=[common], help="solve and check the Bethe ansatz")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = {"tol": args.tol, "samples": args.samples, "seed": args.seed,
                 "suite": getattr(args, "suite", None)}
    try:
        config = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    report = run_verify(config) if args.command == "verify" else run_bethe(config)
    text = json.dumps(report, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
