"""Discrimination mathematics for von Neumann measurements.

Diamond-norm bounds from the Choi matrix, the Holevo-Helstrom success
probability, the optimal input states and binary effects for both game
variants, type I/II error evaluation, and the closed-form answer table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qcore
from .haar import choi_difference, dephased_swap
from .qcore import (
    ChoiMatrix,
    apply_from_choi,
    as_operator,
    assert_unitary,
    hermitian_eig,
    operator_norm,
    partial_trace,
    projector,
    swap_operator,
    trace_norm,
)

MODE_BOTH_UNKNOWN = "both-unknown"
MODE_ONE_FIXED = "one-fixed"
MODES = (MODE_BOTH_UNKNOWN, MODE_ONE_FIXED)

# Probabilities this close to the [0, 1] boundary are clamped onto it;
# larger violations signal a broken invariant upstream and raise.
CLAMP_TOL = 1e-12


def _clamp_probability(p: float, tol: float = CLAMP_TOL) -> float:
    if -tol <= p < 0.0:
        return 0.0
    if 1.0 < p <= 1.0 + tol:
        return 1.0
    if p < 0.0 or p > 1.0:
        raise ValueError(f"probability {p} outside [0, 1] beyond tolerance")
    return p


def diamond_bounds(j: ChoiMatrix) -> tuple[float, float]:
    """Lower and upper bounds on the diamond norm of a Hermitian-Choi map.

    lower = ||J||_1 / d_in, upper = || Tr_out |J| ||.  A single
    eigendecomposition serves both sides.
    """
    w, v = hermitian_eig(j.matrix)
    lower = float(np.sum(np.abs(w))) / j.dim_in
    abs_j = (v * np.abs(w)) @ v.conj().T
    reduced = partial_trace(abs_j, [j.dim_out, j.dim_in], keep=[1])
    upper = operator_norm(reduced)
    return lower, upper


def helstrom_success(diamond_value: float) -> float:
    """Optimal equal-prior success probability 1/2 + diamond/4."""
    if not 0.0 <= diamond_value <= 2.0 + CLAMP_TOL:
        raise ValueError(f"diamond norm value {diamond_value} outside [0, 2]")
    return 0.5 + min(diamond_value, 2.0) / 4.0


def antisymmetric_state(d: int, i: int = 0, j: int = 1) -> np.ndarray:
    """Unit vector (|ij> - |ji>)/sqrt(2) on two d-dimensional factors.

    Satisfies S|a> = -|a>, and its projector rho obeys rho^T = rho and
    Tr(S rho^T) = -1, which is what saturates the both-unknown bound.
    """
    if d < 2:
        raise ValueError("dimension must be >= 2")
    if not (0 <= i < d and 0 <= j < d) or i == j:
        raise ValueError(f"need distinct indices in [0, {d}), got ({i}, {j})")
    a = np.zeros(d * d, dtype=complex)
    a[i * d + j] = 1.0 / np.sqrt(2.0)
    a[j * d + i] = -1.0 / np.sqrt(2.0)
    return a


def max_entangled_input(d: int) -> np.ndarray:
    """Maximally entangled state (1/d)|I>><<I| on two d-dimensional factors."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    v = qcore.vec(np.eye(d)) / np.sqrt(d)
    return projector(v)


def omega_both_unknown(d: int) -> np.ndarray:
    """Accepting effect for the both-unknown game: projector I - T.

    Projects onto the span of |ij> with i != j (rank d² - d); accepting
    means the two observed labels can still be consistent with equal
    boxes.
    """
    if d < 2:
        raise ValueError("dimension must be >= 2")
    return np.eye(d * d, dtype=complex) - dephased_swap(d)


def omega_one_fixed(u) -> np.ndarray:
    """Accepting effect for the one-fixed game, built from the known basis.

    Block-diagonal sum_i |i><i| ⊗ (|u_i><u_i|)^T, rank d with rank-1
    blocks; the transpose makes the ancilla-side comparison match the
    conjugated collapse of the maximally entangled input.
    """
    u = assert_unitary(u)
    d = u.shape[0]
    omega = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        block = projector(u[:, i]).T
        omega[i * d:(i + 1) * d, i * d:(i + 1) * d] = block
    return omega


def type_errors(rho0, rho1, omega) -> tuple[float, float]:
    """(p_I, p_II) = (1 - Tr(Ω rho0), Tr(Ω rho1)) for the binary test
    {Ω, I - Ω} accepting the null hypothesis on Ω."""
    rho0 = as_operator(rho0)
    rho1 = as_operator(rho1)
    omega = as_operator(omega)
    if not (rho0.shape == rho1.shape == omega.shape):
        raise ValueError(
            f"dimension mismatch: {rho0.shape}, {rho1.shape}, {omega.shape}")
    p1 = _clamp_probability(1.0 - float(np.trace(omega @ rho0).real))
    p2 = _clamp_probability(float(np.trace(omega @ rho1).real))
    return p1, p2


def achieved_distance(j: ChoiMatrix, rho) -> float:
    """Output trace distance realized by feeding ``rho`` into the
    difference channel: || Tr_in[J (I ⊗ rho^T)] ||_1.

    Never exceeds the diamond upper bound; equals it for a saturating
    input.
    """
    return trace_norm(apply_from_choi(j, rho))


def choi_fixed_vs_random(d: int) -> ChoiMatrix:
    """Choi difference between the identity-basis measurement and the
    Haar-averaged measurement on a single d-dimensional system: T − I/d."""
    if d < 2:
        raise ValueError("dimension must be >= 2")
    m = dephased_swap(d).copy()
    # dephased_swap(d) lives on d² = single-system Choi space here: the
    # identity-basis measurement has Choi sum_i |i><i| ⊗ |i><i| = T.
    m -= np.eye(d * d, dtype=complex) / d
    return ChoiMatrix(m, d, d)


def wj_square_residual(d: int) -> float:
    """Residual of the polar-factor identity for the averaged difference.

    With W = (2T − I) ⊗ S and J the averaged-measurement Choi
    difference, (WJ)² must equal J²; returns the relative Frobenius
    residual.  Also checks that W is unitary and Hermitian.
    """
    if d < 2:
        raise ValueError("dimension must be >= 2")
    s = swap_operator(d)
    t = dephased_swap(d)
    w = np.kron(2 * t - np.eye(d * d), s)
    herm_err = np.max(np.abs(w - w.conj().T))
    unit_err = np.max(np.abs(w @ w - np.eye(d ** 4)))
    if herm_err > 1e-12 or unit_err > 1e-12:
        raise AssertionError(
            f"conjugating operator not Hermitian-unitary: {herm_err}, {unit_err}")
    j = choi_difference(d).matrix
    wj = w @ j
    resid = np.linalg.norm(wj @ wj - j @ j)
    return float(resid / (1.0 + np.linalg.norm(j @ j)))


def helstrom_error(rho0, rho1) -> float:
    """Equal-prior minimal error 1/2 − ||rho0 − rho1||_1 / 4."""
    rho0 = as_operator(rho0)
    rho1 = as_operator(rho1)
    if rho0.shape != rho1.shape:
        raise ValueError(f"dimension mismatch: {rho0.shape} vs {rho1.shape}")
    return 0.5 - trace_norm(rho0 - rho1) / 4.0


def error_mean_inequality(rho0, rho1, omega) -> float:
    """Margin (p_I + p_II)/2 − p_e for the supplied test.

    p_e is the equal-prior minimal (Helstrom) error for the state pair;
    the margin is nonnegative for every valid binary test and zero
    exactly when the test is optimal.
    """
    p1, p2 = type_errors(rho0, rho1, omega)
    return 0.5 * (p1 + p2) - helstrom_error(rho0, rho1)


def states_both_unknown(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Averaged output-state pair for the antisymmetric input: the
    equal-boxes output (I − T)/(d(d−1)) and the independent-boxes output
    I/d², both on the d²-dimensional label pair space."""
    if d < 2:
        raise ValueError("dimension must be >= 2")
    t = dephased_swap(d)
    rho0 = (np.eye(d * d, dtype=complex) - t) / (d * (d - 1))
    rho1 = np.eye(d * d, dtype=complex) / (d * d)
    return rho0, rho1


def states_one_fixed(u) -> tuple[np.ndarray, np.ndarray]:
    """Output-state pair for the maximally entangled input in the
    one-fixed game: (1/d) sum_i |i><i| ⊗ (|u_i><u_i|)^T against the
    fully mixed I/d²."""
    u = assert_unitary(u)
    d = u.shape[0]
    rho0 = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        rho0[i * d:(i + 1) * d, i * d:(i + 1) * d] = projector(u[:, i]).T / d
    rho1 = np.eye(d * d, dtype=complex) / (d * d)
    return rho0, rho1


@dataclass(frozen=True)
class AnalyticRow:
    """Closed-form answers for one game variant at dimension d."""

    mode: str
    d: int
    p_succ: float
    p_err: float
    p1: float
    p2: float
    ancilla_needed: bool
    diamond: float

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "d": self.d,
            "p_succ": self.p_succ,
            "p_err": self.p_err,
            "p1": self.p1,
            "p2": self.p2,
            "ancilla_needed": self.ancilla_needed,
            "diamond": self.diamond,
        }


def analytic_table(mode: str, d: int) -> AnalyticRow:
    """Closed-form success/error probabilities for either game variant.

    both-unknown: p_succ = 1/2 + 1/(2d), p_II = 1 − 1/d, no ancilla.
    one-fixed:    p_succ = 1 − 1/(2d),   p_II = 1/d, ancilla needed.
    p_I = 0 in both cases.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    if d < 2:
        raise ValueError("dimension must be >= 2")
    if mode == MODE_BOTH_UNKNOWN:
        diamond = 2.0 / d
        p2 = 1.0 - 1.0 / d
        ancilla = False
    else:
        diamond = 2.0 - 2.0 / d
        p2 = 1.0 / d
        ancilla = True
    p_succ = helstrom_success(diamond)
    return AnalyticRow(mode=mode, d=d, p_succ=p_succ, p_err=1.0 - p_succ,
                       p1=0.0, p2=p2, ancilla_needed=ancilla, diamond=diamond)
