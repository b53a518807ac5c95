import numpy as np
import pytest

from conftest import random_unitary
from vncert.haar import RngStream
from vncert.protocol import (
    H0,
    H1,
    ScenarioConfig,
    run_trial_both_unknown,
    run_trial_one_fixed,
    sample_outcome,
    simulate,
)
from vncert.qcore import vn_outcome_probs

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def four_sigma(p, n):
    return 4 * np.sqrt(p * (1 - p) / n)


class TestSampleOutcome:
    def test_deterministic(self, rng):
        probs = np.zeros(5)
        probs[0] = 1.0
        assert all(sample_outcome(probs, rng) == 0 for _ in range(50))

    def test_uniform_frequencies(self):
        d, n = 4, 100000
        gen = RngStream(3).generator()
        counts = np.bincount([sample_outcome(np.full(d, 1 / d), gen)
                              for _ in range(n)], minlength=d)
        for c in counts:
            assert abs(c / n - 1 / d) <= four_sigma(1 / d, n)

    def test_hadamard_probs(self):
        probs = vn_outcome_probs(HADAMARD, np.diag([1.0, 0.0]))
        n = 20000
        gen = RngStream(4).generator()
        freq = np.mean([sample_outcome(probs, gen) for _ in range(n)])
        assert abs(freq - 0.5) <= four_sigma(0.5, n)

    def test_zero_cells_never_selected(self):
        probs = np.array([0.0, 0.5, 0.0, 0.5, 0.0])
        gen = RngStream(5).generator()
        draws = {sample_outcome(probs, gen) for _ in range(2000)}
        assert draws <= {1, 3}

    def test_rejects_bad_mass(self, rng):
        with pytest.raises(ValueError):
            sample_outcome([0.5, 0.4], rng)

    def test_rejects_large_negative(self, rng):
        with pytest.raises(ValueError):
            sample_outcome([-0.01, 1.01], rng)

    def test_clips_tiny_negative(self, rng):
        assert sample_outcome([1.0, -1e-13], rng) == 0


class TestBothUnknownTrial:
    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_h0_labels_always_differ(self, d):
        gen = RngStream(10).generator()
        for _ in range(500):
            out = run_trial_both_unknown(d, H0, gen)
            i, j = out.labels
            assert i != j
            assert out.decision == "accept-H0"

    @pytest.mark.parametrize("d", [2, 3])
    def test_h1_accept_frequency(self, d):
        n = 20000
        gen = RngStream(11).generator()
        accepts = sum(run_trial_both_unknown(d, H1, gen).decision == "accept-H0"
                      for _ in range(n))
        p = 1 - 1 / d
        assert abs(accepts / n - p) <= four_sigma(p, n)

    def test_pair_choice_is_statistically_irrelevant(self):
        d, n = 3, 20000
        rates = []
        for stream, pair in [(12, (0, 1)), (13, (1, 2))]:
            gen = RngStream(stream).generator()
            accepts = sum(
                run_trial_both_unknown(d, H1, gen, pair=pair).decision
                == "accept-H0" for _ in range(n))
            rates.append(accepts / n)
        p = 1 - 1 / d
        band = 2 * four_sigma(p, n)
        assert abs(rates[0] - rates[1]) <= band

    def test_rejects_small_dimension(self, rng):
        with pytest.raises(ValueError):
            run_trial_both_unknown(1, H0, rng)


class TestOneFixedTrial:
    @pytest.mark.parametrize("d", [2, 4])
    def test_h0_always_clicks(self, d, rng):
        u = random_unitary(d, rng)
        gen = RngStream(14).generator()
        for _ in range(500):
            out = run_trial_one_fixed(d, u, H0, gen)
            assert out.decision == "accept-H0"

    @pytest.mark.parametrize("d", [2, 4])
    def test_h1_click_frequency(self, d):
        n = 20000
        gen = RngStream(15).generator()
        clicks = sum(run_trial_one_fixed(d, None, H1, gen).decision
                     == "accept-H0" for _ in range(n))
        assert abs(clicks / n - 1 / d) <= four_sigma(1 / d, n)

    def test_default_basis_is_identity(self):
        gen = RngStream(16).generator()
        out = run_trial_one_fixed(3, None, H0, gen)
        assert out.decision == "accept-H0"
        assert 0 <= out.labels[0] < 3


class TestConfigValidation:
    def test_bad_mode(self):
        with pytest.raises(ValueError, match="mode"):
            ScenarioConfig("nope", "symmetric", 2, 10, 0).validate()

    def test_bad_scheme(self):
        with pytest.raises(ValueError, match="scheme"):
            ScenarioConfig("both-unknown", "nope", 2, 10, 0).validate()

    def test_bad_dim(self):
        with pytest.raises(ValueError, match="d must"):
            ScenarioConfig("both-unknown", "symmetric", 1, 10, 0).validate()

    def test_bad_trials(self):
        with pytest.raises(ValueError, match="trials"):
            ScenarioConfig("both-unknown", "symmetric", 2, 0, 0).validate()

    def test_fixed_u_dimension(self, rng):
        u = random_unitary(3, rng)
        with pytest.raises(ValueError, match="fixed_u"):
            ScenarioConfig("one-fixed", "symmetric", 2, 10, 0,
                           fixed_u=u).validate()

    def test_bad_threads(self):
        cfg = ScenarioConfig("both-unknown", "symmetric", 2, 10, 0)
        with pytest.raises(ValueError, match="threads"):
            simulate(cfg, threads=0)


class TestSimulate:
    def test_reproducible(self):
        cfg = ScenarioConfig("both-unknown", "symmetric", 2, 30000, 42)
        assert simulate(cfg).as_dict() == simulate(cfg).as_dict()

    def test_worker_count_invariant(self):
        for scheme in ("symmetric", "asymmetric"):
            cfg = ScenarioConfig("one-fixed", scheme, 3, 30000, 43)
            a = simulate(cfg, threads=1).as_dict()
            b = simulate(cfg, threads=3).as_dict()
            assert a == b

    @pytest.mark.parametrize("mode", ["both-unknown", "one-fixed"])
    def test_structural_zero_false_positives(self, mode):
        cfg = ScenarioConfig(mode, "asymmetric", 3, 30000, 44)
        result = simulate(cfg)
        assert result.empirical["p1"].value == 0.0
        assert result.empirical["p1"].stderr == 0.0

    @pytest.mark.parametrize("mode", ["both-unknown", "one-fixed"])
    def test_symmetric_within_band(self, mode):
        n = 50000
        cfg = ScenarioConfig(mode, "symmetric", 2, n, 45)
        result = simulate(cfg)
        est = result.empirical["p_succ"]
        assert abs(est.value - result.analytic.p_succ) <= 4 * est.stderr

    @pytest.mark.parametrize("mode", ["both-unknown", "one-fixed"])
    def test_asymmetric_within_band(self, mode):
        n = 50000
        cfg = ScenarioConfig(mode, "asymmetric", 3, n, 46)
        result = simulate(cfg)
        est = result.empirical["p2"]
        assert abs(est.value - result.analytic.p2) <= 4 * est.stderr

    @pytest.mark.parametrize("mode", ["both-unknown", "one-fixed"])
    def test_scheme_consistency(self, mode):
        # the rules are Helstrom-optimal, so the symmetric success rate
        # must match 1 - (p1 + p2)/2 from the asymmetric run
        n = 50000
        sym = simulate(ScenarioConfig(mode, "symmetric", 3, n, 47))
        asym = simulate(ScenarioConfig(mode, "asymmetric", 3, n, 48))
        p_succ = sym.empirical["p_succ"]
        p1, p2 = asym.empirical["p1"], asym.empirical["p2"]
        combined_se = np.sqrt(p_succ.stderr ** 2
                              + (p1.stderr ** 2 + p2.stderr ** 2) / 4)
        assert abs(p_succ.value - (1 - (p1.value + p2.value) / 2)) \
            <= 4 * combined_se

    def test_dimension_monotonicity(self):
        n = 50000
        both = [simulate(ScenarioConfig("both-unknown", "symmetric", d, n,
                                        49)).empirical["p_succ"].value
                for d in (2, 5)]
        fixed = [simulate(ScenarioConfig("one-fixed", "symmetric", d, n,
                                         50)).empirical["p_succ"].value
                 for d in (2, 5)]
        assert both[0] > both[1] > 0.5
        assert 1.0 > fixed[1] > fixed[0]

    def test_custom_fixed_basis(self, rng):
        u = random_unitary(3, rng)
        cfg = ScenarioConfig("one-fixed", "asymmetric", 3, 20000, 51, fixed_u=u)
        result = simulate(cfg)
        assert result.empirical["p1"].value == 0.0
        est = result.empirical["p2"]
        assert abs(est.value - 1 / 3) <= 4 * est.stderr

    def test_result_payload_fields(self):
        cfg = ScenarioConfig("both-unknown", "asymmetric", 2, 1000, 52)
        payload = simulate(cfg).as_dict()
        assert payload["mode"] == "both-unknown"
        assert payload["n_trials"] == 2000  # both hypotheses simulated
        assert set(payload["empirical"]) == {"p1", "p2"}
        assert payload["analytic"]["p2"] == 0.5
