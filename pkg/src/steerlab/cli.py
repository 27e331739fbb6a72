"""Command-line entry point: ``steerlab <command> [options]``.

Exit status is 0 on success, 1 when an invariant check fails and 2 on usage
errors (bad flags, out-of-range parameters, unreadable input files).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import output
from .basis import theta_from_state
from .experiments import (
    DEFAULT_OMEGA_GRID,
    InvariantError,
    default_workers,
    run_pairwise_demo,
    run_pqt_scan,
    run_random_trials,
    status_counts,
)
from .states import DensityMatrix, GenerationConfig, GenerationError, InvalidStateError, slocc_canonicalize
from .steering import domain_rank, reduced_steer_s, sample_x, steering_ellipsoid
from .tomography import MapStatus, TomographyError, map_from_theta
from .verification import run_verification_suite

DEFAULTS = {
    "seed": 0,
    "states": 500,
    "unitaries": 100,
    "step": 0.1,
    "omega_grid": DEFAULT_OMEGA_GRID,
    "omega": 2.0,
    "out": "out",
    "format": "csv",
    "svg": False,
    "min_concurrence": 0.05,
    "max_se_concurrence": 1e-6,
    "max_attempts": None,
    "samples": 200,
    "extend": False,
}
# per-command fallbacks when neither flag nor config sets a value
COMMAND_DEFAULTS = {
    "trials": {"max_attempts": 1},
    "demo": {"max_attempts": 10000},
}
# options that determine each command's results; only these enter the manifest
_RESULT_KEYS = {
    "demo": ("seed", "omega", "min_concurrence", "max_se_concurrence", "max_attempts"),
    "scan": ("step", "omega_grid"),
    "trials": ("seed", "states", "unitaries", "min_concurrence", "max_se_concurrence", "max_attempts"),
    "steer": ("state", "seed", "samples"),
    "tomography": ("state", "omega", "unitary", "extend"),
}


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="steerlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, records=False):
        sp.add_argument("--config", help="JSON file of option values; flags override it")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out", help="output directory (default: out)")
        if records:
            sp.add_argument("--workers", type=int, help="worker processes (default: $STEERLAB_WORKERS or 1)")
            sp.add_argument("--format", choices=["csv", "json"])
            sp.add_argument("--svg", action="store_true", default=None, help="also write scatter-plot SVGs")

    sp = sub.add_parser("demo", help="pairwise-entangled state under V(omega)")
    common(sp)
    sp.add_argument("--omega", type=float)
    sp.add_argument("--min-concurrence", type=float)
    sp.add_argument("--max-attempts", type=int)
    sp.add_argument("--svg", action="store_true", default=None)

    sp = sub.add_parser("scan", help="rho(P,Q,T) grid scan with nu maximized over omega")
    common(sp, records=True)
    sp.add_argument("--step", type=float)
    sp.add_argument("--omega-grid", type=int)

    sp = sub.add_parser("trials", help="random states with nu maximized over random unitaries")
    common(sp, records=True)
    sp.add_argument("--states", type=int)
    sp.add_argument("--unitaries", type=int)
    sp.add_argument("--min-concurrence", type=float)
    sp.add_argument("--max-attempts", type=int, help="generation attempts per trial (default 1)")

    sub.add_parser("verify", help="run the cross-module verification suite")

    sp = sub.add_parser("steer", help="steering ellipsoid of a state file")
    common(sp)
    sp.add_argument("--state", required=True, help="JSON state file")
    sp.add_argument("--samples", type=int, help="number of sampled domain points to emit")

    sp = sub.add_parser("tomography", help="map reconstruction for a state file and SE unitary")
    common(sp)
    sp.add_argument("--state", required=True, help="JSON state file")
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--omega", type=float, help="use V(omega) = exp(i omega sy x sy)")
    group.add_argument("--unitary", help="JSON file with a 4x4 matrix of [re, im] pairs")
    sp.add_argument("--extend", action="store_true", default=None,
                    help="minimum-norm extension on rank-deficient domains")
    return p


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < command-line flags."""
    cfg = dict(DEFAULTS)
    cfg.update(COMMAND_DEFAULTS.get(args.command, {}))
    cfg["workers"] = default_workers()
    if getattr(args, "config", None):
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(loaded) - set(cfg)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key, val in vars(args).items():
        if val is not None:
            cfg[key] = val
    for key in ("states", "unitaries", "omega_grid", "workers", "samples", "max_attempts"):
        if cfg.get(key) is not None and int(cfg[key]) < 1:
            raise UsageError(f"--{key.replace('_', '-')} must be >= 1")
    if not 0 < float(cfg["step"]) <= 0.25:
        raise UsageError(f"--step must lie in (0, 0.25], got {cfg['step']}")
    return cfg


def _manifest_config(cfg: dict) -> dict:
    return {k: cfg.get(k) for k in _RESULT_KEYS[cfg["command"]]}


def _out_dir(cfg: dict) -> Path:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _gen_config(cfg: dict) -> GenerationConfig:
    try:
        return GenerationConfig(
            seed=int(cfg["seed"]),
            min_concurrence=float(cfg["min_concurrence"]),
            max_se_concurrence=float(cfg["max_se_concurrence"]),
            max_attempts=int(cfg["max_attempts"]),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _load_state(path: str) -> DensityMatrix:
    try:
        state = DensityMatrix.from_dict(json.loads(Path(path).read_text()))
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot load state {path}: {exc}") from exc
    if state.dims != (2, 2, 2):
        raise UsageError(f"state must be three qubits, got dims {state.dims}")
    return state


def _load_unitary(path: str) -> np.ndarray:
    try:
        pairs = np.asarray(json.loads(Path(path).read_text()), dtype=float)
        u = (pairs[..., 0] + 1j * pairs[..., 1]).reshape(4, 4)
    except (OSError, ValueError, IndexError) as exc:
        raise UsageError(f"cannot load unitary {path}: {exc}") from exc
    if np.max(np.abs(u.conj().T @ u - np.eye(4))) > 1e-10:
        raise UsageError(f"{path} is not unitary")
    return u


def cmd_demo(cfg: dict) -> int:
    out = _out_dir(cfg)
    report = run_pairwise_demo(_gen_config(cfg), omega=float(cfg["omega"]))
    files = [
        output.write_json(report, out / "demo.json"),
        output.write_json(report["ellipsoids"], out / "ellipsoids.json"),
        output.write_json(report["map"], out / "map.json"),
    ]
    if cfg["svg"]:
        from .basis import ThetaMatrix

        theta = ThetaMatrix.from_dict(report["theta"])
        tilde = np.asarray(report["probes"]["outputs"])
        rng = np.random.Generator(np.random.PCG64(int(cfg["seed"])))
        pts = np.array([reduced_steer_s(theta, sample_x(rng)) for _ in range(400)])
        files.append(output.svg_scatter(pts[:, 0], pts[:, 2], out / "demo_domain_xz.svg", "x", "z", "initial domain"))
        files.append(output.svg_scatter(tilde[:, 0], tilde[:, 2], out / "demo_probes_out_xz.svg", "x", "z", "evolved probes"))
    output.write_manifest(out, "demo", _manifest_config(cfg), files)
    m = report["map"]
    print(f"C_RS={report['concurrences']['c_rs']:.4f} C_RE={report['concurrences']['c_re']:.4f} "
          f"C_SE={report['concurrences']['c_se']:.1e}")
    print("B eigenvalues: " + ", ".join(f"{v:.4f}" for v in m["eigenvalues"]))
    print(f"B_neg={m['b_neg']:.4f} CP={m['cp']} -> {out}")
    return 0


def _emit_records(records, cfg, stem, writer_csv, columns) -> list[Path]:
    out = _out_dir(cfg)
    if cfg["format"] == "csv":
        files = [writer_csv(records, out / f"{stem}.csv")]
    else:
        files = [output.write_json([r.to_dict() for r in records], out / f"{stem}.json")]
    if cfg["svg"]:
        ok = [r for r in records if r.status == "OK"]
        cols = {name: [getattr(r, attr) for r in ok] for name, attr in columns.items()}
        files += output.write_projections(cols, out, stem)
    return files


def cmd_scan(cfg: dict) -> int:
    points = run_pqt_scan(float(cfg["step"]), int(cfg["omega_grid"]), int(cfg["workers"]))
    files = _emit_records(points, cfg, "scan", output.write_scan_csv, {"cmi": "cmi", "nu": "nu", "b_neg": "b_neg"})
    output.write_manifest(_out_dir(cfg), "scan", _manifest_config(cfg), files)
    print(f"{len(points)} grid points: {status_counts(points)}")
    return 0


def cmd_trials(cfg: dict) -> int:
    records = run_random_trials(int(cfg["states"]), int(cfg["unitaries"]), _gen_config(cfg), int(cfg["workers"]))
    files = _emit_records(records, cfg, "trials", output.write_trials_csv,
                          {"cmi": "cmi", "nu": "nu_max", "b_neg": "b_neg"})
    output.write_manifest(_out_dir(cfg), "trials", _manifest_config(cfg), files)
    print(f"{len(records)} trials: {status_counts(records)}")
    return 0


def cmd_verify(cfg: dict) -> int:
    results = run_verification_suite()
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail} ({r.seconds:.2f}s)")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_steer(cfg: dict) -> int:
    state = _load_state(cfg["state"])
    try:
        rho = slocc_canonicalize(state.mat)
    except ValueError as exc:
        raise UsageError(f"state cannot be canonicalized: {exc}") from exc
    theta = theta_from_state(rho)
    geom = steering_ellipsoid(theta)
    rng = np.random.Generator(np.random.PCG64(int(cfg["seed"])))
    pts = [reduced_steer_s(theta, sample_x(rng)) for _ in range(int(cfg["samples"]))]
    out = _out_dir(cfg)
    files = [output.write_json(
        {"ellipsoid": geom.to_dict(), "domain_rank": domain_rank(theta), "theta": theta.to_dict(), "samples": pts},
        out / "steer.json",
    )]
    output.write_manifest(out, "steer", _manifest_config(cfg), files)
    print(f"domain rank {domain_rank(theta)}; semiaxes " + ", ".join(f"{s:.4f}" for s in geom.semiaxes))
    return 0


def cmd_tomography(cfg: dict) -> int:
    from .dynamics import evolve_theta, u_coeffs, v_omega

    state = _load_state(cfg["state"])
    u = _load_unitary(cfg["unitary"]) if cfg.get("unitary") else v_omega(float(cfg["omega"]))
    theta = theta_from_state(state.mat)
    tilde = evolve_theta(theta, u_coeffs(u))
    out = _out_dir(cfg)
    try:
        dmap = map_from_theta(theta, tilde, extend=bool(cfg["extend"]))
    except TomographyError as exc:
        files = [output.write_json({"status": exc.status.value, "error": str(exc)}, out / "map.json")]
        output.write_manifest(out, "tomography", _manifest_config(cfg), files)
        print(f"{exc.status.value}: {exc}")
        # a degenerate domain is a result; a failed reconstruction is not
        return 0 if exc.status is MapStatus.DEGENERATE_DOMAIN else 1
    files = [output.write_json(dmap.to_dict(), out / "map.json")]
    output.write_manifest(out, "tomography", _manifest_config(cfg), files)
    print("B eigenvalues: " + ", ".join(f"{v:.4f}" for v in dmap.eigenvalues) + f"; B_neg={dmap.b_neg:.4f}")
    return 0


COMMANDS = {
    "demo": cmd_demo,
    "scan": cmd_scan,
    "trials": cmd_trials,
    "verify": cmd_verify,
    "steer": cmd_steer,
    "tomography": cmd_tomography,
}


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"steerlab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (InvariantError, GenerationError, InvalidStateError) as exc:
        print(f"steerlab {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
