"""
Spike Forecaster - Hyperparameter Optimisation Tests
"""

import numpy as np
import optuna
import pytest

from app.exceptions import InsufficientHistoryError, StudyFailedError, ValidationError
from app.schemas import LabelConfig, MetricsReport, ModelVariant, Objective, PreprocessConfig, SyntheticConfig, TrialState
from hyperopt import (
    ObjectiveResult,
    ParamSpec,
    Scale,
    SearchSpace,
    TuningStream,
    UnsupervisedObjective,
    make_sampler,
    run_study,
    score_report,
    unsupervised_space,
)
from sources.synthetic import generate_synthetic_ticks
from storage.trials import TrialStore

MODEL1_PARAMS = {
    "a_plus": 0.004,
    "a_minus": 0.003,
    "tau_plus": 40,
    "tau_minus": 42,
    "beta": 0.9,
    "v_thresh": 1.0,
    "d_thresh": 4,
    "n_hidden": 16,
}


def _constant(params, cursor):
    return ObjectiveResult(score=0.5, srd=0.0)


def _peak_at(name, target):
    def objective(params, cursor):
        return ObjectiveResult(score=1.0 - (params[name] - target) ** 2)
    return objective


def _check_constraints(p, variant):
    assert max(p["a_plus"] - 0.001, 1e-5) - 1e-12 <= p["a_minus"] <= p["a_plus"] + 1e-12
    assert 1e-4 - 1e-12 <= p["a_plus"] <= 1e-2 + 1e-12
    assert p["tau_plus"] - 5 <= p["tau_minus"] <= p["tau_plus"] + 5
    assert p["tau_minus"] >= 1
    assert 0.5 - 1e-9 <= p["beta"] <= 0.99 + 1e-9
    assert abs(p["beta"] * 100 - round(p["beta"] * 100)) < 1e-6
    assert 0.8 - 1e-9 <= p["v_thresh"] <= 2.5 + 1e-9
    assert abs(p["v_thresh"] * 10 - round(p["v_thresh"] * 10)) < 1e-6
    assert 4 <= p["d_thresh"] <= 16
    assert p["n_hidden"] in (16, 32, 64, 128)
    if variant is ModelVariant.MODEL2:
        assert max(p["b_plus"] - 0.001, 1e-5) - 1e-12 <= p["b_minus"] <= p["b_plus"] + 1e-12
        assert p["theta_plus"] - 5 <= p["theta_minus"] <= p["theta_plus"] + 5
        assert 1 <= p["n_input"] <= 10


@pytest.fixture
def stream(small_days):
    return TuningStream(
        days=small_days,
        variant=ModelVariant.MODEL1,
        preprocess=PreprocessConfig(timesteps=10),
        labels=LabelConfig(),
        seed=3,
        batch_size=150,
    )


# =============================================================================
# Search space
# =============================================================================

def test_model1_space_omits_inhibitory_params():
    names = unsupervised_space(ModelVariant.MODEL1).names
    assert "b_plus" not in names and "theta_minus" not in names and "n_input" not in names
    assert names.index("a_minus") > names.index("a_plus")


def test_model3_has_no_space():
    with pytest.raises(ValidationError):
        unsupervised_space(ModelVariant.MODEL3)


@pytest.mark.parametrize("variant", [ModelVariant.MODEL1, ModelVariant.MODEL2])
def test_uniform_draws_satisfy_constraints(variant):
    space = unsupervised_space(variant)
    study = optuna.create_study(sampler=make_sampler("random", seed=1))
    for _ in range(2000):
        params = space.suggest(study.ask())
        _check_constraints(params, variant)
        assert space.contains(params)


def test_tpe_draws_satisfy_constraints():
    space = unsupervised_space(ModelVariant.MODEL2)
    result = run_study(
        ModelVariant.MODEL2,
        Objective.PSA,
        space,
        _peak_at("v_thresh", 1.2),
        n_trials=60,
        seed=4,
    )
    for trial in result.trials:
        _check_constraints(trial.params, ModelVariant.MODEL2)


def test_dependent_spec_must_follow_parent():
    with pytest.raises(ValidationError):
        SearchSpace([
            ParamSpec("child", Scale.LINEAR, parent="root", dependent_range=lambda v: (0.0, v)),
            ParamSpec("root", Scale.LINEAR, 0.0, 1.0),
        ])


def test_unsatisfiable_range_fails_trials(tmp_path):
    space = SearchSpace([
        ParamSpec("x", Scale.LINEAR, 0.0, 1.0),
        ParamSpec("y", Scale.LINEAR, parent="x", dependent_range=lambda x: (x + 1.0, x)),
    ])
    store = TrialStore(tmp_path / "study.ndjson")
    with pytest.raises(StudyFailedError):
        run_study(ModelVariant.MODEL1, Objective.SA, space, _constant, n_trials=3, store=store)
    records = store.load()
    assert len(records) == 3
    assert all(r.state is TrialState.FAILED and r.flag.startswith("unsatisfiable") for r in records)


# =============================================================================
# Study runner
# =============================================================================

def test_single_trial_study():
    space = unsupervised_space(ModelVariant.MODEL1)
    result = run_study(ModelVariant.MODEL1, Objective.SA, space, _constant, n_trials=1)
    assert len(result.trials) == 1
    assert result.best == result.trials[0]


def test_study_is_reproducible():
    space = unsupervised_space(ModelVariant.MODEL1)
    objective = _peak_at("beta", 0.7)
    a = run_study(ModelVariant.MODEL1, Objective.SA, space, objective, n_trials=20, seed=9)
    b = run_study(ModelVariant.MODEL1, Objective.SA, space, objective, n_trials=20, seed=9)
    assert [t.params for t in a.trials] == [t.params for t in b.trials]
    assert [t.score for t in a.trials] == [t.score for t in b.trials]


def test_best_curve_is_monotone():
    space = unsupervised_space(ModelVariant.MODEL1)
    result = run_study(ModelVariant.MODEL1, Objective.SA, space, _peak_at("v_thresh", 2.0), n_trials=25, seed=2)
    curve = result.best_curve()
    assert all(b >= a for a, b in zip(curve, curve[1:]))
    assert curve[-1] == result.best.score
    assert result.best.score == max(t.score for t in result.trials)


def test_study_persists_and_resumes(tmp_path):
    space = unsupervised_space(ModelVariant.MODEL1)
    store = TrialStore(tmp_path / "study.ndjson")
    objective = _peak_at("v_thresh", 1.5)
    first = run_study(ModelVariant.MODEL1, Objective.PSA, space, objective, n_trials=5, seed=1, store=store)
    assert [r.trial_id for r in store.load()] == [0, 1, 2, 3, 4]

    resumed = run_study(ModelVariant.MODEL1, Objective.PSA, space, objective, n_trials=8, seed=1, store=store, resume=True)
    assert [t.trial_id for t in resumed.trials] == list(range(8))
    assert [t.batch_index for t in resumed.trials] == list(range(8))
    assert [t.params for t in resumed.trials[:5]] == [t.params for t in first.trials]
    assert len(store.load()) == 8


def test_tpe_concentrates_near_good_region():
    space = unsupervised_space(ModelVariant.MODEL1)
    result = run_study(ModelVariant.MODEL1, Objective.SA, space, _peak_at("v_thresh", 0.8), n_trials=70, seed=5)
    late = [t.params["v_thresh"] for t in result.trials[50:]]
    uniform_median = (0.8 + 2.5) / 2
    assert abs(np.median(late) - 0.8) < abs(uniform_median - 0.8)


@pytest.mark.slow
def test_tpe_beats_random_search():
    space = SearchSpace([
        ParamSpec("x", Scale.LINEAR, 0.0, 3.0),
        ParamSpec("noise_a", Scale.LINEAR, 0.0, 1.0),
        ParamSpec("noise_b", Scale.INT, 1, 20),
    ])
    objective = _peak_at("x", 1.5)
    wins = 0
    for seed in range(20):
        tpe = run_study(ModelVariant.MODEL1, Objective.SA, space, objective, n_trials=100, seed=seed)
        rnd = run_study(ModelVariant.MODEL1, Objective.SA, space, objective, n_trials=100, seed=seed, sampler="random")
        wins += tpe.best.score > rnd.best.score
    assert wins >= 12


# =============================================================================
# Objective
# =============================================================================

def test_score_report_silent_model():
    report = MetricsReport(spike_accuracy=None, spiking_rate=0.0, real_spiking_rate=0.4, srd=-1.0)
    result = score_report(report, Objective.SA)
    assert result.score == 0.0
    assert result.flag == "silent"


def test_score_report_psa_without_penalty():
    report = MetricsReport(spike_accuracy=0.6, spiking_rate=0.4, real_spiking_rate=0.4, psa=0.6, srd=0.0)
    assert score_report(report, Objective.PSA).score == 0.6


def test_batches_wrap_around(stream):
    spikes, truth = stream.rows(1)
    assert len(truth) == spikes.n_timestamps
    n_batches = spikes.n_timestamps // 150
    train, evaluation = stream.batches(1, n_batches - 1)
    assert train.start == (n_batches - 1) * 150
    assert evaluation.start == 0


def test_batches_need_two(small_days):
    stream = TuningStream(
        days=small_days[:1],
        variant=ModelVariant.MODEL1,
        preprocess=PreprocessConfig(timesteps=10),
        labels=LabelConfig(),
        seed=0,
        batch_size=10_000,
    )
    with pytest.raises(InsufficientHistoryError):
        stream.batches(1, 0)


def test_objective_is_deterministic(stream):
    objective = UnsupervisedObjective(stream=stream, metric=Objective.PSA)
    a = objective(MODEL1_PARAMS, 2)
    b = objective(MODEL1_PARAMS, 2)
    assert a.score == b.score
    assert a.srd == b.srd


def test_suppressed_model_scores_zero(stream):
    params = {**MODEL1_PARAMS, "v_thresh": 2.5, "d_thresh": 16, "a_plus": 1e-4, "a_minus": 1e-4}
    result = UnsupervisedObjective(stream=stream, metric=Objective.SA)(params, 0)
    assert result.score == 0.0
    assert result.flag == "silent"


def test_study_on_encoded_stream(stream):
    space = unsupervised_space(ModelVariant.MODEL1)
    objective = UnsupervisedObjective(stream=stream, metric=Objective.SA)
    result = run_study(ModelVariant.MODEL1, Objective.SA, space, objective, n_trials=2, seed=0)
    assert len(result.trials) == 2
    assert all(t.state is TrialState.COMPLETE for t in result.trials)
    assert all(0.0 <= t.score <= 1.0 for t in result.trials)


@pytest.mark.slow
def test_tuned_regimes_on_synthetic_month():
    days = generate_synthetic_ticks(SyntheticConfig(
        n_days=4,
        ticks_per_day=20_000,
        spike_rate=0.005,
        momentum_persistence=0.8,
        seed=21,
    ))
    stream = TuningStream(
        days=days,
        variant=ModelVariant.MODEL1,
        preprocess=PreprocessConfig(),
        labels=LabelConfig(),
        seed=0,
        batch_size=1000,
    )
    space = unsupervised_space(ModelVariant.MODEL1)

    tuned = {}
    for metric in (Objective.SA, Objective.PSA):
        objective = UnsupervisedObjective(stream=stream, metric=metric)
        study = run_study(ModelVariant.MODEL1, metric, space, objective, n_trials=60, seed=0)
        tuned[metric] = objective(study.best.params, study.best.batch_index).metrics

    sa, psa = tuned[Objective.SA], tuned[Objective.PSA]
    assert sa.srd < 0
    assert sa.spiking_rate < 0.2
    assert abs(psa.srd) <= 0.15
    # a coin-flip predictor's accuracy is the batch's real spike rate
    for report in (sa, psa):
        assert report.spike_accuracy >= report.real_spiking_rate + 0.02
