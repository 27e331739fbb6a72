"""The three numerical studies as reproducible pipelines.

* :func:`run_pairwise_demo` - one pairwise-entangled state evolved by
  ``v_omega(2)``, its steering ellipsoids and reconstructed map.
* :func:`run_pqt_scan` - the rho(P, Q, T) family on a grid, with the DPI
  violation maximized over omega.
* :func:`run_random_trials` - random pairwise-entangled states with the DPI
  violation maximized over Haar-random SE unitaries.

Grid points and trials are independent; ``workers > 1`` farms them out to a
process pool and results are always returned in index order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .basis import state_from_theta, theta_from_state
from .dynamics import evolve_full, evolve_theta, u_coeffs, v_omega
from .info import InfoReport, cond_mutual_info, mi_rs
from .linalg import eigvalsh
from .states import (
    GenerationConfig,
    GenerationError,
    gen_pairwise_entangled,
    haar_unitary,
    pqt_theta,
)
from .steering import ellipsoid_from_block, sample_x, steering_ellipsoid
from .tomography import (
    STANDARD_PROBES,
    DynamicalMap,
    MapStatus,
    ProbeSet,
    TomographyError,
    apply_map,
    map_from_theta,
)

DEFAULT_OMEGA_GRID = 64
OMEGA_XTOL = 1e-6
_GOLDEN = (math.sqrt(5) - 1) / 2


class InvariantError(AssertionError):
    """A pipeline-level invariant check failed."""


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("STEERLAB_WORKERS", "1")))
    except ValueError:
        return 1


def _ordered_map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


# -- DPI maximization ------------------------------------------------------


def _golden_max(f: Callable[[float], float], lo: float, hi: float, xtol: float) -> tuple[float, float]:
    c, d = hi - _GOLDEN * (hi - lo), lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > xtol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def maximize_nu_over_omega(
    rho, grid_points: int = DEFAULT_OMEGA_GRID, xtol: float = OMEGA_XTOL
) -> tuple[float, InfoReport]:
    """Maximize I(R:S') - I(R:S) over ``v_omega`` for omega in [0, pi).

    A uniform grid locates the best cell; golden-section search refines it to
    ``xtol``. The returned omega is never worse than the best grid point.
    """
    before = mi_rs(rho)

    def gain(w):
        return mi_rs(evolve_full(rho, v_omega(w))) - before

    grid = np.arange(grid_points) * (np.pi / grid_points)
    values = [gain(w) for w in grid]
    k = int(np.argmax(values))
    h = np.pi / grid_points
    w_ref, g_ref = _golden_max(gain, grid[k] - h, grid[k] + h, xtol)
    if g_ref > values[k]:
        w_star, g_star = w_ref % np.pi, g_ref
    else:
        w_star, g_star = float(grid[k]), values[k]
    report = InfoReport(cond_mutual_info(rho), before, before + g_star, max(0.0, g_star))
    return float(w_star), report


def maximize_nu_over_unitaries(rho, n_samples: int, rng: np.random.Generator) -> tuple[np.ndarray, InfoReport]:
    """Best of ``n_samples`` Haar SE unitaries; ties keep the earliest sample."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    before = mi_rs(rho)
    best_u, best_after = None, -np.inf
    for _ in range(n_samples):
        u = haar_unitary(4, rng)
        after = mi_rs(evolve_full(rho, u))
        if after > best_after:
            best_u, best_after = u, after
    report = InfoReport(cond_mutual_info(rho), before, best_after, max(0.0, best_after - before))
    return best_u, report


# -- map diagnostics -------------------------------------------------------


def domain_positivity(dmap: DynamicalMap, theta, n_samples: int, rng: np.random.Generator) -> float:
    """Smallest output eigenvalue over ``n_samples`` states of the steering domain."""
    from .steering import reduced_steer_s, state_from_bloch

    worst = np.inf
    for _ in range(n_samples):
        r = reduced_steer_s(theta, sample_x(rng))
        worst = min(worst, float(eigvalsh(apply_map(dmap, state_from_bloch(r)), tol=1e-8)[0]))
    return worst


def check_map_invariants(dmap: DynamicalMap, tol: float = 1e-8) -> list[str]:
    problems = []
    tr = np.trace(dmap.B)
    if abs(tr - 2) > tol:
        problems.append(f"tr B = {tr.real:.12g} differs from 2")
    herm = float(np.max(np.abs(dmap.B - dmap.B.conj().T)))
    if herm > tol:
        problems.append(f"B not Hermitian (deviation {herm:.3e})")
    return problems


# -- pairwise demo ---------------------------------------------------------


def run_pairwise_demo(cfg: GenerationConfig, omega: float = 2.0, domain_samples: int = 200) -> dict:
    """Generate a pairwise-entangled state, evolve it with ``v_omega(omega)`` and
    reconstruct the induced map from the four standard probes.

    Raises :class:`InvariantError` if the map violates tr B = 2, B = B^dag or
    positivity on its steering domain.
    """
    rho, diag = gen_pairwise_entangled(cfg)
    theta = theta_from_state(rho.mat)
    u = v_omega(omega)
    theta_tilde = evolve_theta(theta, u_coeffs(u))
    probes = ProbeSet.from_theta(theta, theta_tilde, STANDARD_PROBES)
    dmap = map_from_theta(theta, theta_tilde)
    problems = check_map_invariants(dmap)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([cfg.seed, 1])))
    worst = domain_positivity(dmap, theta, domain_samples, rng)
    if worst < -1e-9:
        problems.append(f"map leaves the state space on its domain (min eigenvalue {worst:.3e})")
    initial = steering_ellipsoid(theta)
    final = ellipsoid_from_block(theta_tilde)
    surface = initial.center + np.array([initial.matrix @ sample_x(rng, "boundary")[1:] for _ in range(500)])
    if np.max(np.linalg.norm(surface, axis=1)) > 1 + 1e-9:
        problems.append("initial ellipsoid leaves the Bloch ball")
    if problems:
        raise InvariantError("; ".join(problems))
    info = InfoReport(
        cond_mutual_info(rho.mat), mi_rs(rho.mat), mi_rs(evolve_full(rho.mat, u)), 0.0
    )
    info.nu = max(0.0, info.delta)
    return {
        "seed": cfg.seed,
        "omega": omega,
        "concurrences": {"c_rs": diag.c_rs, "c_re": diag.c_re, "c_se": diag.c_se},
        "attempts": diag.attempts,
        "noise_weight": diag.noise_weight,
        "info": info.to_dict(),
        "probes": {
            "x": probes.xs.tolist(),
            "inputs": probes.inputs.tolist(),
            "outputs": probes.outputs.tolist(),
        },
        "map": dmap.to_dict(),
        "domain_min_eigenvalue": worst,
        "ellipsoids": {"initial": initial.to_dict(), "final": final.to_dict()},
        "theta": theta.to_dict(),
    }


# -- P, Q, T scan ----------------------------------------------------------


@dataclass
class ScanPoint:
    P: float
    Q: float
    T: float
    psd: bool
    min_eigenvalue: float
    omega_star: float | None = None
    cmi: float | None = None
    nu: float | None = None
    b_neg: float | None = None
    status: str | None = None
    domain_rank: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def scan_grid(step: float) -> np.ndarray:
    if not 0 < step <= 0.25:
        raise ValueError(f"step must lie in (0, 0.25], got {step}")
    n = int(math.floor(2.0 / step + 1e-9)) + 1
    return np.round(-1.0 + step * np.arange(n), 12)


def evaluate_pqt_point(p: float, q: float, t: float, omega_grid: int = DEFAULT_OMEGA_GRID) -> ScanPoint:
    """One scan point; maps on rank-1/2 domains use the minimum-norm extension."""
    from .steering import domain_rank

    theta = pqt_theta(p, q, t)
    rho = state_from_theta(theta)
    lam = float(eigvalsh(rho)[0])
    if lam < -1e-9:
        return ScanPoint(p, q, t, False, lam)
    w, info = maximize_nu_over_omega(rho, omega_grid)
    pt = ScanPoint(p, q, t, True, lam, w, info.cmi, info.nu, domain_rank=domain_rank(theta))
    try:
        dmap = map_from_theta(theta, evolve_theta(theta, u_coeffs(v_omega(w))), extend=True)
    except TomographyError as exc:
        pt.status = exc.status.value
        return pt
    pt.b_neg, pt.status = dmap.b_neg, dmap.status.value
    return pt


def _scan_task(args):
    return evaluate_pqt_point(*args)


def run_pqt_scan(step: float = 0.1, omega_grid: int = DEFAULT_OMEGA_GRID, workers: int = 1) -> list[ScanPoint]:
    """Scan (P, Q, T) over [-1, 1]^3; points are ordered P-major, then Q, then T."""
    g = scan_grid(step)
    tasks = [(float(p), float(q), float(t), omega_grid) for p in g for q in g for t in g]
    return _ordered_map(_scan_task, tasks, workers)


# -- random trials ---------------------------------------------------------


@dataclass
class TrialRecord:
    trial_id: int
    seed: int
    c_rs: float = math.nan
    c_re: float = math.nan
    c_se: float = math.nan
    cmi: float = math.nan
    nu_max: float = math.nan
    b_neg: float = math.nan
    status: str = MapStatus.OK.value

    FIELDS = ("trial_id", "seed", "c_rs", "c_re", "c_se", "cmi", "nu_max", "b_neg", "status")

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.FIELDS}


def trial_seed(master_seed: int, trial_id: int) -> int:
    """64-bit seed of one trial, a hash of (master seed, trial id)."""
    return int(np.random.SeedSequence([master_seed, trial_id]).generate_state(1, np.uint64)[0])


def run_trial(trial_id: int, n_unitaries: int, cfg: GenerationConfig) -> TrialRecord:
    seed = trial_seed(cfg.seed, trial_id)
    rng = np.random.Generator(np.random.PCG64(seed))
    rec = TrialRecord(trial_id, seed)
    try:
        rho, diag = gen_pairwise_entangled(cfg, rng)
    except GenerationError:
        rec.status = MapStatus.GENERATION_FAILURE.value
        return rec
    rec.c_rs, rec.c_re, rec.c_se = diag.c_rs, diag.c_re, diag.c_se
    u, info = maximize_nu_over_unitaries(rho.mat, n_unitaries, rng)
    rec.cmi, rec.nu_max = info.cmi, info.nu
    theta = theta_from_state(rho.mat)
    try:
        dmap = map_from_theta(theta, evolve_theta(theta, u_coeffs(u)))
    except TomographyError as exc:
        rec.status = exc.status.value
        return rec
    rec.b_neg, rec.status = dmap.b_neg, dmap.status.value
    return rec


def _trial_task(args):
    return run_trial(*args)


def run_random_trials(
    n_states: int, n_unitaries: int, cfg: GenerationConfig, workers: int = 1
) -> list[TrialRecord]:
    """Independent trials 0..n_states-1; each draws from its own derived stream."""
    if n_states < 1 or n_unitaries < 1:
        raise ValueError("n_states and n_unitaries must be >= 1")
    return _ordered_map(_trial_task, [(i, n_unitaries, cfg) for i in range(n_states)], workers)


def status_counts(records: Iterable) -> dict[str, int]:
    out: dict[str, int] = {}
    for r in records:
        key = r.status if r.status is not None else "NON_PSD"
        out[key] = out.get(key, 0) + 1
    return dict(sorted(out.items()))

