import math
import random

import numpy as np
import pytest

from acuity.analytics import (
    ErrorTableRow,
    SigmoidModel,
    aggregate_by_pixels,
    aggregate_by_resolution,
    camera_resolution,
    fit_gradient,
    fit_loss,
    fit_sigmoid,
    manual_model,
    model_to_csv,
    predict_error,
    required_resolution,
    table_to_csv,
)
from acuity.errors import (
    DegenerateDataWarning,
    DegenerateModel,
    DomainError,
    InsufficientData,
)
from acuity.session import TrialRecord

from oracles import sigmoid_inverse_reference, sigmoid_reference

PAPER_MODEL = manual_model(-0.95, 6.5)


def record(resolution=5, correct=True, object_pixels=10, selection=None, true_label=3):
    if selection is None:
        selection = true_label if correct else (true_label + 1) % 10
    return TrialRecord(
        trial_id=f"t{random.random()}",
        session_id="s",
        ts_utc="2026-01-01T00:00:00+00:00",
        dataset_index=0,
        true_label=true_label,
        resolution=resolution,
        object_pixels=object_pixels,
        selection=selection,
        elapsed_ms=100,
        correct=correct,
    )


class TestAggregation:
    def test_by_resolution_counts(self):
        records = [record(5, False), record(5, True), record(9, True)]
        rows = aggregate_by_resolution(records)
        assert rows == [
            ErrorTableRow(key=5, trials=2, errors=1, error_rate=0.5),
            ErrorTableRow(key=9, trials=1, errors=0, error_rate=0.0),
        ]

    def test_empty_log(self):
        assert aggregate_by_resolution([]) == []
        assert aggregate_by_pixels([]) == []

    def test_by_pixels_single(self):
        rows = aggregate_by_pixels([record(correct=False, object_pixels=14)])
        assert rows == [ErrorTableRow(key=14, trials=1, errors=1, error_rate=1.0)]

    def test_binning_lower_edge(self):
        records = [record(object_pixels=p) for p in (0, 3, 9, 10, 19, 25)]
        rows = aggregate_by_pixels(records, bin_width=10)
        assert [r.key for r in rows] == [0, 10, 20]
        assert [r.trials for r in rows] == [3, 2, 1]

    def test_binning_conserves_totals(self):
        rng = random.Random(0)
        records = [
            record(object_pixels=rng.randrange(200), correct=rng.random() < 0.5)
            for _ in range(500)
        ]
        exact = aggregate_by_pixels(records)
        binned = aggregate_by_pixels(records, bin_width=10)
        assert sum(r.trials for r in exact) == sum(r.trials for r in binned) == 500
        assert sum(r.errors for r in exact) == sum(r.errors for r in binned)

    def test_conservation_against_input(self):
        rng = random.Random(1)
        records = [
            record(resolution=rng.randint(1, 28), correct=rng.random() < 0.6)
            for _ in range(300)
        ]
        rows = aggregate_by_resolution(records)
        assert sum(r.trials for r in rows) == 300
        assert sum(r.errors for r in rows) == sum(1 for r in records if not r.correct)

    def test_synthetic_rates_within_three_sigma(self):
        # correctness drawn from the reference curve; every aggregate rate
        # must land within 3 binomial standard deviations of it
        rng = random.Random(123)
        records = []
        for _ in range(10_000):
            res = rng.randint(1, 28)
            f = sigmoid_reference(-0.95, 6.5, res)
            records.append(record(resolution=res, correct=rng.random() >= f))
        for row in aggregate_by_resolution(records):
            f = sigmoid_reference(-0.95, 6.5, row.key)
            sigma = math.sqrt(f * (1 - f) / row.trials)
            assert abs(row.error_rate - f) <= 3 * sigma + 1e-12

    def test_bad_bin_width(self):
        with pytest.raises(ValueError):
            aggregate_by_pixels([], bin_width=0)


class TestPredict:
    def test_flat_degenerate_sigmoid(self):
        assert predict_error(123.0, manual_model(0.0, 0.0)) == 0.5

    def test_paper_constants_at_zero(self):
        assert predict_error(0.0, PAPER_MODEL) == pytest.approx(0.998498817743263, abs=1e-12)

    def test_midpoint_identity(self):
        x = -PAPER_MODEL.center / PAPER_MODEL.alpha
        assert predict_error(x, PAPER_MODEL) == pytest.approx(0.5, abs=1e-12)

    def test_tail_value_no_overflow(self):
        assert predict_error(28.0, PAPER_MODEL) == pytest.approx(1.8650089184245155e-9, rel=1e-9)
        assert predict_error(1e6, PAPER_MODEL) == 0.0
        assert predict_error(-1e6, PAPER_MODEL) == 1.0

    def test_strictly_decreasing_for_negative_alpha(self):
        xs = np.linspace(0, 28, 2000)
        ys = predict_error(xs, PAPER_MODEL)
        assert np.all(np.diff(ys) < 0)

    def test_limits(self):
        assert predict_error(1e4, PAPER_MODEL) < 1e-300 or predict_error(1e4, PAPER_MODEL) == 0.0
        assert predict_error(-1e4, PAPER_MODEL) == 1.0

    def test_matches_reference_on_grid(self):
        for x in np.linspace(-5, 40, 91):
            assert predict_error(float(x), PAPER_MODEL) == pytest.approx(
                sigmoid_reference(-0.95, 6.5, float(x)), rel=1e-12
            )


class TestRequiredResolution:
    def test_half_error_midpoint(self):
        got = required_resolution(0.5, PAPER_MODEL)
        assert got.width == pytest.approx(6.842105263157895, abs=1e-12)
        assert got.width_px == 7

    def test_one_percent(self):
        got = required_resolution(0.01, PAPER_MODEL)
        assert got.width == pytest.approx(11.679073526457465, abs=1e-9)
        assert got.width_px == 12

    def test_roundtrip_identity(self):
        rng = random.Random(2024)
        for _ in range(1000):
            y = rng.uniform(0.001, 0.999)
            x = required_resolution(y, PAPER_MODEL).width
            assert predict_error(x, PAPER_MODEL) == pytest.approx(y, abs=1e-9)

    def test_matches_algebraic_reference(self):
        for y in (0.01, 0.1, 0.5, 0.9, 0.99):
            got = required_resolution(y, PAPER_MODEL).width
            assert got == pytest.approx(sigmoid_inverse_reference(-0.95, 6.5, y), rel=1e-12)

    @pytest.mark.parametrize("y", [0.0, 1.0, -0.5, 1.5])
    def test_domain_error(self, y):
        with pytest.raises(DomainError):
            required_resolution(y, PAPER_MODEL)

    def test_degenerate_model(self):
        with pytest.raises(DegenerateModel):
            required_resolution(0.5, manual_model(0.0, 1.0))


class TestCameraResolution:
    def test_unit_case(self):
        assert camera_resolution(1.0, 1.0, 1.0) == 1.0

    def test_examples(self):
        assert camera_resolution(100.0, 1.0, 2.0) == 200.0
        assert camera_resolution(32.0, 0.5, 3.0) == 192.0

    @pytest.mark.parametrize("bad", [(0, 1, 1), (1, 0, 1), (1, 1, 0), (-2, 1, 1)])
    def test_nonpositive_inputs(self, bad):
        with pytest.raises(DomainError):
            camera_resolution(*bad)


def synth_table(alpha=-0.95, center=6.5, trials=1000, keys=range(1, 29), rng=None):
    rows = []
    for key in keys:
        f = sigmoid_reference(alpha, center, key)
        if rng is None:
            errors = f * trials  # noise-free pseudo-counts
            rate = f
        else:
            errors = sum(1 for _ in range(trials) if rng.random() < f)
            rate = errors / trials
        rows.append(ErrorTableRow(key=key, trials=trials, errors=errors, error_rate=rate))
    return rows


class TestFitSigmoid:
    def test_noise_free_recovery(self):
        model = fit_sigmoid(synth_table())
        assert model.alpha == pytest.approx(-0.95, abs=1e-6)
        assert model.center == pytest.approx(6.5, abs=1e-6)
        assert model.residual < 1e-12
        assert model.n_points == 28

    def test_noise_free_recovery_binomial(self):
        model = fit_sigmoid(synth_table(), loss="binomial")
        assert model.alpha == pytest.approx(-0.95, abs=1e-6)
        assert model.center == pytest.approx(6.5, abs=1e-6)

    def test_deterministic(self):
        table = synth_table(rng=random.Random(5))
        assert fit_sigmoid(table) == fit_sigmoid(table)

    def test_flat_table_warns_and_falls_back(self):
        rows = [ErrorTableRow(k, 10, 5, 0.5) for k in range(1, 11)]
        with pytest.warns(DegenerateDataWarning):
            model = fit_sigmoid(rows)
        assert model.alpha == 0.0
        assert model.center == 0.0

    def test_insufficient_rows(self):
        with pytest.raises(InsufficientData):
            fit_sigmoid([ErrorTableRow(3, 10, 5, 0.5)])
        with pytest.raises(InsufficientData):
            fit_sigmoid([])

    def test_zero_trial_rows_ignored(self):
        rows = synth_table()[:5] + [ErrorTableRow(20, 0, 0, 0.0)]
        model = fit_sigmoid(rows)
        assert model.n_points == 5

    def test_binomial_noise_recovery_median(self):
        deltas_a, deltas_c = [], []
        for seed in range(15):
            table = synth_table(rng=random.Random(seed))
            model = fit_sigmoid(table)
            deltas_a.append(model.alpha + 0.95)
            deltas_c.append(model.center - 6.5)
        assert abs(float(np.median(deltas_a))) < 0.05
        assert abs(float(np.median(deltas_c))) < 0.3

    def test_objective_not_above_logit_start(self):
        table = synth_table(rng=random.Random(9))
        x = np.array([row.key for row in table], dtype=float)
        z = np.log(np.clip([row.error_rate for row in table], 0.01, 0.99))
        z = z - np.log1p(-np.clip([row.error_rate for row in table], 0.01, 0.99))
        a0, c0 = np.polyfit(x, z, 1)
        model = fit_sigmoid(table)
        assert fit_loss(table, model.alpha, model.center) <= fit_loss(table, a0, c0) + 1e-12

    def test_unknown_loss(self):
        with pytest.raises(ValueError):
            fit_sigmoid(synth_table(), loss="huber")


class TestGradient:
    @pytest.mark.parametrize("loss", ["wls", "binomial"])
    def test_matches_central_differences(self, loss):
        table = synth_table(rng=random.Random(3))
        rng = random.Random(17)
        h = 1e-6
        for _ in range(20):
            a = rng.uniform(-2.0, -0.2)
            c = rng.uniform(1.0, 10.0)
            analytic = fit_gradient(table, a, c, loss=loss)
            fd = np.array(
                [
                    (fit_loss(table, a + h, c, loss) - fit_loss(table, a - h, c, loss)) / (2 * h),
                    (fit_loss(table, a, c + h, loss) - fit_loss(table, a, c - h, loss)) / (2 * h),
                ]
            )
            rel = np.linalg.norm(analytic - fd) / max(np.linalg.norm(analytic), np.linalg.norm(fd))
            assert rel <= 1e-6


class TestCsv:
    def test_table_csv_format(self):
        rows = [ErrorTableRow(5, 2, 1, 0.5), ErrorTableRow(9, 1, 0, 0.0)]
        assert table_to_csv(rows) == (
            "key,trials,errors,error_rate\n5,2,1,0.500000\n9,1,0,0.000000\n"
        )

    def test_empty_table_csv(self):
        assert table_to_csv([]) == "key,trials,errors,error_rate\n"

    def test_model_line(self):
        line = model_to_csv(SigmoidModel(-0.95, 6.5, 0.125, 28, "wls"))
        assert line == "-0.95,6.5,0.125,28,wls\n"
