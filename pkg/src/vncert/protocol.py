"""Monte Carlo simulation of the black-box discrimination games.

Trials are simulated at the outcome level: hidden unitaries are sampled,
measurement labels are drawn from the exact Born probabilities, and the
classical decision rules are applied to the labels.  The accepting
effects of both games are diagonal in the natural outcome bases, so the
rules reproduce Tr(Ω ρ) exactly:

* both-unknown: accept "same boxes" iff the two labels differ (the
  antisymmetric input makes equal labels impossible for equal boxes);
* one-fixed: accept iff the conjugated ancilla probe clicks on the
  known basis vector matching the observed label.

Trials are grouped into fixed-size batches with one random stream per
batch, so results are bit-identical for a given seed regardless of how
many workers process the batches.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .discrim import MODES, AnalyticRow, analytic_table
from .haar import RngStream, _as_generator, sample_haar_unitaries
from .qcore import assert_unitary

SCHEME_SYMMETRIC = "symmetric"
SCHEME_ASYMMETRIC = "asymmetric"
SCHEMES = (SCHEME_SYMMETRIC, SCHEME_ASYMMETRIC)

H0 = "H0"
H1 = "H1"

BATCH_SIZE = 8192


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulation setup: game variant, scheme, dimension, budget."""

    mode: str
    scheme: str
    d: int
    trials: int
    seed: int
    fixed_u: Optional[np.ndarray] = None

    def validate(self) -> "ScenarioConfig":
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.fixed_u is not None:
            u = assert_unitary(self.fixed_u)
            if u.shape[0] != self.d:
                raise ValueError(
                    f"fixed_u dimension {u.shape[0]} does not match d={self.d}")
        return self

    def box_unitary(self) -> np.ndarray:
        return np.eye(self.d, dtype=complex) if self.fixed_u is None \
            else np.asarray(self.fixed_u, dtype=complex)


@dataclass(frozen=True)
class TrialOutcome:
    hypothesis: str
    labels: tuple[int, ...]
    decision: str  # "accept-H0" | "accept-H1"


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    n: int

    def as_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "n": self.n}


@dataclass(frozen=True)
class SimResult:
    """Empirical estimates paired with the matching closed-form values."""

    config: ScenarioConfig
    empirical: dict[str, Estimate]
    analytic: AnalyticRow
    n_trials: int

    def as_dict(self) -> dict:
        return {
            "mode": self.config.mode,
            "scheme": self.config.scheme,
            "d": self.config.d,
            "trials": self.config.trials,
            "seed": self.config.seed,
            "n_trials": self.n_trials,
            "empirical": {k: v.as_dict() for k, v in self.empirical.items()},
            "analytic": self.analytic.as_dict(),
        }


def _binomial_estimate(successes: int, n: int) -> Estimate:
    p = successes / n
    return Estimate(value=p, stderr=float(np.sqrt(p * (1.0 - p) / n)), n=n)


def sample_outcome(probs, rng) -> int:
    """Draw an index from a probability vector.

    Negative entries no smaller than -1e-12 are clipped; the mass must
    equal 1 within 1e-9 and is renormalized afterwards.  Cells with
    exactly zero probability can never be selected, which is what makes
    structural zeros in the protocols exact rather than statistical.
    """
    gen = _as_generator(rng)
    p = np.asarray(probs, dtype=float)
    if np.min(p) < -1e-12:
        raise ValueError(f"negative probability {np.min(p)} beyond tolerance")
    p = np.clip(p, 0.0, None)
    total = p.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probability mass {total} deviates from 1 beyond 1e-9")
    cum = np.cumsum(p)
    # u in (0, total]: a zero-width cell k has cum[k] == cum[k-1] < u or
    # >= u together with its predecessor, so searchsorted never lands on it.
    u = (1.0 - gen.random()) * cum[-1]
    return int(np.searchsorted(cum, u, side="left"))


def _sample_rows(probs: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    """Row-wise categorical sampling with the same zero-cell guarantee as
    :func:`sample_outcome`.  probs has shape (n, k), rows near-normalized."""
    cum = np.cumsum(probs, axis=1)
    u = (1.0 - gen.random(probs.shape[0]))[:, None] * cum[:, -1:]
    return (cum < u).sum(axis=1)


def _pair_amplitudes(b1: np.ndarray, b2: np.ndarray, pair: tuple[int, int]) -> np.ndarray:
    """Joint label amplitudes <u_i ⊗ w_j | a> for the antisymmetric input
    on rows ``pair``.  b1, b2 are stacks of box unitaries, shape (n, d, d).

    When b1 is b2 the diagonal cancels exactly in floating point, so the
    i = j outcome has probability exactly zero under equal boxes.
    """
    r0, r1 = pair
    c1 = b1.conj()
    c2 = b2.conj()
    amp = (c1[:, r0, :, None] * c2[:, r1, None, :]
           - c1[:, r1, :, None] * c2[:, r0, None, :]) / np.sqrt(2.0)
    return amp


def run_trial_both_unknown(d: int, hypothesis: str, rng,
                           pair: tuple[int, int] = (0, 1)) -> TrialOutcome:
    """One round of the both-unknown game.

    Samples the hidden basis (two independent ones under H1), feeds the
    antisymmetric two-register state through both boxes, draws the joint
    label (i, j) from the Born distribution, and accepts H0 iff i != j.
    """
    if d < 2:
        raise ValueError("dimension must be >= 2")
    gen = _as_generator(rng)
    u = sample_haar_unitaries(d, 1, gen)
    w = u if hypothesis == H0 else sample_haar_unitaries(d, 1, gen)
    amp = _pair_amplitudes(u, w, pair)[0]
    probs = np.abs(amp) ** 2
    idx = sample_outcome(probs.reshape(-1), gen)
    i, j = divmod(idx, d)
    decision = "accept-H0" if i != j else "accept-H1"
    return TrialOutcome(hypothesis=hypothesis, labels=(i, j), decision=decision)


def run_trial_one_fixed(d: int, fixed_u, hypothesis: str, rng) -> TrialOutcome:
    """One round of the one-fixed game.

    The box measures the first register of the maximally entangled
    probe, collapsing the ancilla onto the conjugated basis vector of
    the observed label; the ancilla is then tested against the matching
    conjugated column of the known basis.  Accept H0 iff that test
    clicks.
    """
    if d < 2:
        raise ValueError("dimension must be >= 2")
    gen = _as_generator(rng)
    u = assert_unitary(fixed_u) if fixed_u is not None else np.eye(d, dtype=complex)
    if hypothesis == H0:
        box = u
    else:
        box = sample_haar_unitaries(d, 1, gen)[0]
    col_mass = np.sum(np.abs(box) ** 2, axis=0)
    label = sample_outcome(col_mass / col_mass.sum(), gen)
    overlap = np.vdot(box[:, label], u[:, label])
    q = float(np.abs(overlap) ** 2 / col_mass[label])
    if abs(q - 1.0) <= 1e-12:
        q = 1.0
    click = bool(gen.random() < q)
    decision = "accept-H0" if click else "accept-H1"
    return TrialOutcome(hypothesis=hypothesis, labels=(label,), decision=decision)


def _batch_accept_both_unknown(d: int, hypothesis: str, n: int,
                               gen: np.random.Generator,
                               pair: tuple[int, int]) -> int:
    """Number of accept-H0 decisions among n trials of the both-unknown game."""
    u = sample_haar_unitaries(d, n, gen)
    w = u if hypothesis == H0 else sample_haar_unitaries(d, n, gen)
    probs = np.abs(_pair_amplitudes(u, w, pair)) ** 2
    idx = _sample_rows(probs.reshape(n, -1), gen)
    i, j = np.divmod(idx, d)
    return int(np.count_nonzero(i != j))


def _batch_accept_one_fixed(d: int, u: np.ndarray, hypothesis: str, n: int,
                            gen: np.random.Generator) -> int:
    """Number of accept-H0 (click) decisions among n one-fixed trials."""
    if hypothesis == H0:
        boxes = np.broadcast_to(u, (n, d, d))
    else:
        boxes = sample_haar_unitaries(d, n, gen)
    col_mass = np.sum(np.abs(boxes) ** 2, axis=1)
    labels = _sample_rows(col_mass / col_mass.sum(axis=1, keepdims=True), gen)
    overlaps = np.einsum("ki,nki->ni", u.conj(), boxes)
    rows = np.arange(n)
    q = np.abs(overlaps[rows, labels]) ** 2 / col_mass[rows, labels]
    q = np.where(np.abs(q - 1.0) <= 1e-12, 1.0, q)
    return int(np.count_nonzero(gen.random(n) < q))


@dataclass
class _BatchCounts:
    """Order-independent per-batch tallies (plain integer sums)."""

    n_h0: int = 0
    n_h1: int = 0
    accept_h0: int = 0  # accept-H0 decisions among H0 trials
    accept_h1: int = 0  # accept-H0 decisions among H1 trials

    def __iadd__(self, other: "_BatchCounts") -> "_BatchCounts":
        self.n_h0 += other.n_h0
        self.n_h1 += other.n_h1
        self.accept_h0 += other.accept_h0
        self.accept_h1 += other.accept_h1
        return self


def _run_batch(config: ScenarioConfig, stream: int, n: int) -> _BatchCounts:
    gen = RngStream(config.seed, stream).generator()
    u = config.box_unitary()
    counts = _BatchCounts()
    if config.scheme == SCHEME_SYMMETRIC:
        n_h1 = int(np.count_nonzero(gen.random(n) < 0.5))
        n_h0 = n - n_h1
        split = ((H0, n_h0), (H1, n_h1))
    else:
        # Asymmetric batches are single-hypothesis; even streams run H0,
        # odd streams run H1 (see simulate()).
        split = (((H0 if stream % 2 == 0 else H1), n),)
    for hyp, m in split:
        if m == 0:
            continue
        if config.mode == "both-unknown":
            acc = _batch_accept_both_unknown(config.d, hyp, m, gen, (0, 1))
        else:
            acc = _batch_accept_one_fixed(config.d, u, hyp, m, gen)
        if hyp == H0:
            counts.n_h0 += m
            counts.accept_h0 += acc
        else:
            counts.n_h1 += m
            counts.accept_h1 += acc
    return counts


def simulate(config: ScenarioConfig, threads: int = 1) -> SimResult:
    """Estimate the game's operating probabilities by simulation.

    Symmetric scheme: the hypothesis is drawn uniformly per trial and
    the estimate is the empirical success probability.  Asymmetric
    scheme: ``trials`` rounds are run under each hypothesis separately,
    estimating p1 (false positive) and p2 (false negative).

    Results depend only on (config, seed), never on ``threads``.
    """
    config.validate()
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")

    if config.scheme == SCHEME_SYMMETRIC:
        plan = [(b, min(BATCH_SIZE, config.trials - b * BATCH_SIZE))
                for b in range((config.trials + BATCH_SIZE - 1) // BATCH_SIZE)]
    else:
        plan = []
        nb = (config.trials + BATCH_SIZE - 1) // BATCH_SIZE
        for b in range(nb):
            n = min(BATCH_SIZE, config.trials - b * BATCH_SIZE)
            plan.append((2 * b, n))      # H0 stream
            plan.append((2 * b + 1, n))  # H1 stream

    def work(item):
        stream, n = item
        return _run_batch(config, stream, n)

    total = _BatchCounts()
    if threads == 1:
        for item in plan:
            total += work(item)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for counts in pool.map(work, plan):
                total += counts

    analytic = analytic_table(config.mode, config.d)
    if config.scheme == SCHEME_SYMMETRIC:
        n = total.n_h0 + total.n_h1
        successes = total.accept_h0 + (total.n_h1 - total.accept_h1)
        empirical = {"p_succ": _binomial_estimate(successes, n)}
        n_trials = n
    else:
        empirical = {
            "p1": _binomial_estimate(total.n_h0 - total.accept_h0, total.n_h0),
            "p2": _binomial_estimate(total.accept_h1, total.n_h1),
        }
        n_trials = total.n_h0 + total.n_h1
    return SimResult(config=config, empirical=empirical, analytic=analytic,
                     n_trials=n_trials)
