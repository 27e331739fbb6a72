"""Cross-module consistency checks with fixed seeds (the ``verify`` command)."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .basis import state_from_theta, theta_from_state
from .dynamics import bloch_closed_form, evolve_full, evolve_theta, u_coeffs, v_omega
from .info import concurrence, cond_mutual_info, dpi_violation, ppt_separable
from .linalg import is_psd, kron, partial_trace
from .states import (
    GenerationConfig,
    gen_pairwise_entangled,
    haar_unitary,
    random_density_matrix,
    slocc_canonicalize,
)
from .steering import bloch_vector, reduced_steer_s, sample_x, steer_se, state_from_bloch
from .tomography import (
    STANDARD_PROBES,
    ProbeSet,
    map_from_theta,
    negativity_from_eigenvalues,
    reconstruct_map,
    reshuffle,
    vec,
)

SEED = 20240607


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _rng(k: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([SEED, k])))


def _canonical_random_state(rng) -> np.ndarray:
    return slocc_canonicalize(random_density_matrix(8, rng))


def oracle_bloch_after(rho, u, x) -> np.ndarray:
    """Steer with full matrices, evolve SE, trace out E."""
    se = steer_se(rho, x)
    return bloch_vector(partial_trace(u @ se @ u.conj().T, (2, 2), [0]))


def oracle_map_matrix(rho, u, xs=STANDARD_PROBES) -> np.ndarray:
    """A-matrix extended linearly from full-matrix steered preimages and images."""
    ins = np.array([vec(partial_trace(steer_se(rho, x), (2, 2), [0])) for x in xs]).T
    outs = []
    for x in xs:
        se = steer_se(rho, x)
        outs.append(vec(partial_trace(u @ se @ u.conj().T, (2, 2), [0])))
    return np.array(outs).T @ np.linalg.inv(ins)


def check_keystone(n_states=20, n_x=20) -> tuple[bool, str]:
    rng = _rng(1)
    worst = 0.0
    for _ in range(n_states):
        rho = _canonical_random_state(rng)
        u = haar_unitary(4, rng)
        theta = theta_from_state(rho)
        tt = evolve_theta(theta, u_coeffs(u))
        for _ in range(n_x):
            x = sample_x(rng)
            worst = max(worst, float(np.max(np.abs(tt @ x - oracle_bloch_after(rho, u, x)))))
    return worst < 1e-10, f"max deviation {worst:.2e}"


def check_closed_form(n_states=10, n_omega=10) -> tuple[bool, str]:
    rng = _rng(2)
    worst = 0.0
    for _ in range(n_states):
        theta = theta_from_state(_canonical_random_state(rng))
        x = sample_x(rng)
        for w in rng.uniform(0, np.pi, n_omega):
            tt = evolve_theta(theta, u_coeffs(v_omega(w)))
            worst = max(worst, float(np.max(np.abs(bloch_closed_form(theta.steer(x), w) - tt @ x))))
    return worst < 1e-12, f"max deviation {worst:.2e}"


def check_theta_round_trip(n=10) -> tuple[bool, str]:
    rng = _rng(3)
    worst = max(
        float(np.max(np.abs(state_from_theta(theta_from_state(r)) - r)))
        for r in (random_density_matrix(8, rng) for _ in range(n))
    )
    return worst < 1e-12, f"max deviation {worst:.2e}"


def check_steering_paths(n=10) -> tuple[bool, str]:
    rng = _rng(4)
    worst = 0.0
    for _ in range(n):
        rho = random_density_matrix(8, rng)
        theta = theta_from_state(rho)
        x = sample_x(rng)
        full = bloch_vector(partial_trace(steer_se(rho, x), (2, 2), [0]))
        worst = max(worst, float(np.max(np.abs(reduced_steer_s(theta, x) - full))))
    return worst < 1e-12, f"max deviation {worst:.2e}"


def check_cross_module_evolution(n=10) -> tuple[bool, str]:
    rng = _rng(5)
    worst = 0.0
    for _ in range(n):
        rho = random_density_matrix(8, rng)
        u = haar_unitary(4, rng)
        theta = theta_from_state(rho)
        direct = theta_from_state(evolve_full(rho, u)).s_block
        worst = max(worst, float(np.max(np.abs(evolve_theta(theta, u_coeffs(u)) - direct))))
    return worst < 1e-10, f"max deviation {worst:.2e}"


def check_u_isometry(n=10) -> tuple[bool, str]:
    rng = _rng(6)
    worst = 0.0
    for _ in range(n):
        c = u_coeffs(haar_unitary(4, rng)).reshape(16, 16)
        worst = max(worst, float(np.max(np.abs(c @ c.T - np.eye(16)))))
    return worst < 1e-10, f"max deviation {worst:.2e}"


def check_identity_reshuffle() -> tuple[bool, str]:
    lam = np.linalg.eigvalsh(reshuffle(np.eye(4)))
    ok = np.allclose(np.sort(lam), [0, 0, 0, 2], atol=1e-12)
    return bool(ok), f"eigenvalues {np.round(lam, 12).tolist()}"


def check_oracle_map(n=10) -> tuple[bool, str]:
    rng = _rng(7)
    worst = 0.0
    for _ in range(n):
        rho = _canonical_random_state(rng)
        u = haar_unitary(4, rng)
        theta = theta_from_state(rho)
        dmap = map_from_theta(theta, evolve_theta(theta, u_coeffs(u)))
        worst = max(worst, float(np.max(np.abs(dmap.B - reshuffle(oracle_map_matrix(rho, u))))))
    return worst < 1e-8, f"max deviation {worst:.2e}"


def check_probe_invariance(n=10) -> tuple[bool, str]:
    rng = _rng(8)
    worst = 0.0
    for _ in range(n):
        theta = theta_from_state(_canonical_random_state(rng))
        tt = evolve_theta(theta, u_coeffs(haar_unitary(4, rng)))
        a1 = map_from_theta(theta, tt).A
        xs = np.array([sample_x(rng, "boundary") for _ in range(4)])
        a2 = reconstruct_map(ProbeSet.from_theta(theta, tt, xs)).A
        worst = max(worst, float(np.max(np.abs(a1 - a2))))
    return worst < 1e-8, f"max deviation {worst:.2e}"


def check_markov_chain_cp(n=10) -> tuple[bool, str]:
    rng = _rng(9)
    worst_eig, worst_nu = np.inf, 0.0
    for _ in range(n):
        rho = slocc_canonicalize(kron(random_density_matrix(4, rng), random_density_matrix(2, rng)))
        u = haar_unitary(4, rng)
        theta = theta_from_state(rho)
        dmap = map_from_theta(theta, evolve_theta(theta, u_coeffs(u)))
        worst_eig = min(worst_eig, float(dmap.eigenvalues[0]))
        worst_nu = max(worst_nu, dpi_violation(rho, u).nu)
    ok = worst_eig >= -1e-7 and worst_nu <= 1e-9
    return ok, f"min B eigenvalue {worst_eig:.2e}, max nu {worst_nu:.2e}"


def check_strong_subadditivity(n=100) -> tuple[bool, str]:
    rng = _rng(10)
    worst = min(cond_mutual_info(random_density_matrix(8, rng)) for _ in range(n))
    return worst >= -1e-9, f"min I(R:E|S) {worst:.2e}"


def check_concurrence_ppt(n=200) -> tuple[bool, str]:
    rng = _rng(11)
    bad = 0
    for _ in range(n):
        rho = random_density_matrix(4, rng, rank=int(rng.integers(1, 5)))
        bad += (concurrence(rho) > 1e-6) == ppt_separable(rho)
    return bad == 0, f"{bad} disagreements"


def check_generated_states(n=5) -> tuple[bool, str]:
    worst_se, worst_r, worst_pos = 0.0, 0.0, np.inf
    for seed in range(n):
        rho, diag = gen_pairwise_entangled(GenerationConfig(seed=SEED + seed))
        worst_se = max(worst_se, diag.c_se)
        worst_r = max(worst_r, float(np.max(np.abs(rho.marginal([0]) - np.eye(2) / 2))))
        theta = theta_from_state(rho.mat)
        dmap = map_from_theta(theta, evolve_theta(theta, u_coeffs(v_omega(2.0))))
        rng = _rng(100 + seed)
        for _ in range(50):
            r_in = reduced_steer_s(theta, sample_x(rng))
            out = dmap.A @ vec(state_from_bloch(r_in))
            worst_pos = min(worst_pos, float(np.linalg.eigvalsh(out.reshape(2, 2))[0]))
    ok = worst_se <= 1e-6 and worst_r <= 1e-10 and worst_pos >= -1e-9
    return ok, f"max C_SE {worst_se:.1e}, rho_R error {worst_r:.1e}, min domain eigenvalue {worst_pos:.2e}"


def check_reported_eigenvalues() -> tuple[bool, str]:
    lam = [2.3838, 0.2288, -0.5704, -0.0422]
    neg = negativity_from_eigenvalues(lam)
    ok = abs(sum(lam) - 2) < 1e-3 and abs(neg - 1.2252) < 1e-4
    return ok, f"sum {sum(lam):.4f}, B_neg {neg:.4f}"


def check_states_psd(n=10) -> tuple[bool, str]:
    rng = _rng(12)
    ok = all(is_psd(slocc_canonicalize(random_density_matrix(8, rng))) for _ in range(n))
    return ok, "canonicalized random states PSD" if ok else "non-PSD output"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "keystone steer-then-evolve equivalence": check_keystone,
    "closed-form V(omega) Bloch map": check_closed_form,
    "Theta round trip": check_theta_round_trip,
    "reduced steering path equivalence": check_steering_paths,
    "evolve_theta vs evolve_full": check_cross_module_evolution,
    "u-coefficient isometry": check_u_isometry,
    "identity map reshuffle": check_identity_reshuffle,
    "tomography vs full-matrix oracle": check_oracle_map,
    "probe-set invariance": check_probe_invariance,
    "short Markov chain => CP, no DPI violation": check_markov_chain_cp,
    "strong subadditivity": check_strong_subadditivity,
    "concurrence / PPT agreement": check_concurrence_ppt,
    "generated pairwise-entangled states": check_generated_states,
    "reported B eigenvalues": check_reported_eigenvalues,
    "canonicalized states PSD": check_states_psd,
}


def run_verification_suite(checks: dict | None = None) -> list[CheckResult]:
    results = []
    for name, fn in (checks or CHECKS).items():
        t0 = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - t0))
    return results
