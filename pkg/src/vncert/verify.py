"""Self-contained verification suite behind ``vncert verify``.

Each check recomputes one of the package's analytic claims from scratch
(closed-form bounds, saturating inputs, the polar-factor identity, the
error-mean inequality, Monte Carlo validation of the Haar averages,
structural zeros in the simulated protocols) and reports PASS/FAIL.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import discrim, haar, protocol
from .haar import RngStream
from .qcore import trace_norm


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail}"


def _check(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail)


def _random_density(d: int, gen: np.random.Generator) -> np.ndarray:
    g = gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _random_effect(d: int, gen: np.random.Generator) -> np.ndarray:
    g = gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))
    p = g @ g.conj().T
    return p / (np.linalg.norm(p, 2) * (1.0 + gen.random()))


def check_polar_identity(d: int) -> CheckResult:
    resid = discrim.wj_square_residual(d)
    return _check(f"polar-identity d={d}", resid <= 1e-10,
                  f"relative residual {resid:.3e} (tol 1e-10)")


def check_bound_saturation_both_unknown(d: int) -> CheckResult:
    j = haar.choi_difference(d)
    lower, upper = discrim.diamond_bounds(j)
    rho = discrim.projector(discrim.antisymmetric_state(d))
    achieved = discrim.achieved_distance(j, rho)
    target = 2.0 / d
    ok = (abs(upper - target) <= 1e-10 and abs(achieved - target) <= 1e-10
          and lower <= upper + 1e-10)
    return _check(
        f"bound-saturation-both-unknown d={d}", ok,
        f"upper {upper:.12f}, achieved {achieved:.12f}, target {target:.12f}")


def check_bound_tightness_one_fixed(d: int) -> CheckResult:
    j = discrim.choi_fixed_vs_random(d)
    lower, upper = discrim.diamond_bounds(j)
    target = 2.0 - 2.0 / d
    ok = abs(lower - target) <= 1e-10 and abs(upper - target) <= 1e-10
    return _check(
        f"bound-tightness-one-fixed d={d}", ok,
        f"lower {lower:.12f}, upper {upper:.12f}, target {target:.12f}")


def check_structural_zero(mode: str, d: int, seed: int, trials: int) -> CheckResult:
    config = protocol.ScenarioConfig(mode=mode, scheme="asymmetric", d=d,
                                     trials=trials, seed=seed)
    result = protocol.simulate(config)
    p1 = result.empirical["p1"].value
    return _check(f"structural-zero {mode} d={d}", p1 == 0.0,
                  f"empirical p1 = {p1} over {trials} H0 trials")


def check_mc_haar_averages(seed: int, samples: int) -> list[CheckResult]:
    d = 2
    results = []
    def unitary_uu(gen):
        u = haar.sample_haar_unitary(d, gen)
        return haar.choi_unitary_channel(np.kron(u, u))

    def measurement_uu(gen):
        u = haar.sample_haar_unitary(d, gen)
        return haar.choi_vn_measurement(np.kron(u, u))

    def measurement_uv(gen):
        u, v = haar.sample_haar_unitaries(d, 2, gen)
        return haar.choi_vn_measurement(np.kron(u, v))

    cases = [
        ("unitary-uu", unitary_uu, haar.avg_choi_unitary_uu(d).matrix),
        ("measurement-uu", measurement_uu, haar.avg_choi_meas_uu(d).matrix),
        ("measurement-uv", measurement_uv, haar.avg_choi_meas_uv(d).matrix),
    ]
    for idx, (kind, sampler, exact) in enumerate(cases):
        mean = haar.mc_average_choi(sampler, samples, RngStream(seed, idx))
        dist = float(np.linalg.norm(mean - exact))
        results.append(_check(
            f"mc-average {kind} d={d}", dist <= 0.05,
            f"Frobenius distance {dist:.4f} over {samples} samples (tol 0.05)"))
    return results


def check_error_mean_inequality(d: int, seed: int, instances: int) -> CheckResult:
    gen = RngStream(seed, 100 + d).generator()
    worst = np.inf
    for _ in range(instances):
        rho0 = _random_density(d, gen)
        rho1 = _random_density(d, gen)
        omega = _random_effect(d, gen)
        worst = min(worst, discrim.error_mean_inequality(rho0, rho1, omega))
    return _check(f"error-mean-inequality d={d}", worst >= -1e-12,
                  f"worst margin {worst:.3e} over {instances} random tests")


def check_error_mean_equality(d: int) -> CheckResult:
    rho0, rho1 = discrim.states_both_unknown(d)
    m_both = discrim.error_mean_inequality(rho0, rho1, discrim.omega_both_unknown(d))
    u = np.eye(d, dtype=complex)
    rho0f, rho1f = discrim.states_one_fixed(u)
    m_fixed = discrim.error_mean_inequality(rho0f, rho1f, discrim.omega_one_fixed(u))
    ok = abs(m_both) <= 1e-10 and abs(m_fixed) <= 1e-10
    return _check(f"error-mean-equality d={d}", ok,
                  f"margins {m_both:.3e} (both-unknown), {m_fixed:.3e} (one-fixed)")


def check_difference_consistency(d: int) -> CheckResult:
    lhs = haar.choi_difference(d).matrix
    rhs = haar.avg_choi_meas_uu(d).matrix - haar.avg_choi_meas_uv(d).matrix
    err = float(np.max(np.abs(lhs - rhs)))
    trace_err = abs(np.trace(lhs))
    ok = err <= 1e-12 and trace_err <= 1e-12
    return _check(f"choi-difference-consistency d={d}", ok,
                  f"entrywise error {err:.3e}, |trace| {trace_err:.3e}")


def check_output_states(d: int) -> CheckResult:
    """The averaged channel applied to the antisymmetric input must give
    the closed-form output pair with trace distance 2/d."""
    rho0, rho1 = discrim.states_both_unknown(d)
    dist = trace_norm(rho0 - rho1)
    ok = abs(dist - 2.0 / d) <= 1e-10
    return _check(f"output-state-distance d={d}", ok,
                  f"trace norm {dist:.12f}, target {2.0 / d:.12f}")


def run_checks(d_max: int, seed: int = 0, mc_samples: int = 20000,
               inequality_instances: int = 1000,
               structural_trials: int = 20000) -> list[CheckResult]:
    """Full verification sweep for d = 2..d_max."""
    if d_max < 2:
        raise ValueError("d_max must be >= 2")
    results: list[CheckResult] = []
    for d in range(2, d_max + 1):
        results.append(check_polar_identity(d))
        results.append(check_difference_consistency(d))
        results.append(check_bound_saturation_both_unknown(d))
        results.append(check_bound_tightness_one_fixed(d))
        results.append(check_output_states(d))
        results.append(check_error_mean_equality(d))
        if d <= 4:
            results.append(check_error_mean_inequality(d, seed, inequality_instances))
        if d <= 5:
            results.append(check_structural_zero("both-unknown", d, seed,
                                                 structural_trials))
            results.append(check_structural_zero("one-fixed", d, seed,
                                                 structural_trials))
    results.extend(check_mc_haar_averages(seed, mc_samples))
    return results
