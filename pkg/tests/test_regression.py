"""Frame construction, OLS diagnostics, stepwise selection, prediction."""

import math

import numpy as np
import pytest

import effortlab as el


def _record(**overrides):
    base = dict(project_id=1, team_exp=2, manager_exp=3, year_end=86,
                length=10, effort=3000.0, transactions=150, entities=100,
                points_non_adjust=250.0, envergure=25, points_adjust=230.0,
                language=1)
    base.update(overrides)
    return el.ProjectRecord(**base)


def test_encode_language():
    assert el.encode_language(1) == (1, 0)
    assert el.encode_language(2) == (0, 1)
    assert el.encode_language(3) == (0, 0)


def test_encode_language_rejects_unknown():
    with pytest.raises(el.DomainError):
        el.encode_language(4)


def test_frame_column_order(full_frame):
    assert full_frame.columns == (
        "intercept", "ln_size", "lang_1", "lang_2",
        "team_exp", "manager_exp", "envergure",
    )


def test_frame_content(complete_records, full_frame):
    rec = complete_records[0]
    row = full_frame.matrix[0]
    assert row[0] == 1.0
    assert row[1] == pytest.approx(math.log(rec.points_non_adjust))
    assert tuple(row[2:4]) == el.encode_language(rec.language)
    assert row[4] == rec.team_exp
    assert full_frame.response[0] == pytest.approx(math.log(rec.effort))
    assert full_frame.project_ids[0] == rec.project_id


def test_feature_subset_drops_columns(complete_records):
    frame = el.build_frame(
        complete_records, el.FeatureSet(language=False, envergure=False))
    assert frame.columns == ("intercept", "ln_size", "team_exp",
                             "manager_exp")


def test_candidate_frame_columns(complete_records):
    frame = el.build_candidate_frame(complete_records)
    assert frame.columns == (
        "intercept", "ln_size", "ln_transactions", "ln_entities",
        "lang_1", "lang_2", "team_exp", "manager_exp", "envergure",
    )


def test_nonpositive_effort_is_transform_error():
    records = [_record(), _record(project_id=2, effort=-5.0)]
    with pytest.raises(el.TransformError) as info:
        el.build_frame(records)
    assert info.value.project_id == 2


def test_feature_set_from_names():
    features = el.FeatureSet.from_names(["size", "envergure"])
    assert features.labels() == ("size", "envergure")
    with pytest.raises(el.DomainError):
        el.FeatureSet.from_names(["sizes"])


def test_fit_matches_numpy_reference(complete_records, full_frame):
    fit = el.fit_ols(full_frame)
    X, y = full_frame.matrix, full_frame.response
    beta = np.linalg.solve(X.T @ X, X.T @ y)
    assert fit.coefficients == pytest.approx(beta, abs=1e-10)

    resid = y - X @ beta
    df = len(y) - X.shape[1]
    sigma2 = float(resid @ resid) / df
    se = np.sqrt(sigma2 * np.diag(np.linalg.inv(X.T @ X)))
    assert fit.standard_errors == pytest.approx(se, abs=1e-10)
    assert fit.t_values == pytest.approx(beta / se, abs=1e-10)
    assert fit.df_residual == df
    assert fit.n == 77


def test_fit_r_squared_is_log_scale(full_frame):
    fit = el.fit_ols(full_frame)
    y = full_frame.response
    sse = fit.residual_sum_of_squares
    sst = float(np.sum((y - y.mean()) ** 2))
    assert fit.r_squared == pytest.approx(1 - sse / sst)
    assert 0.7 < fit.r_squared < 0.9


def test_model_f_test(full_frame):
    fit = el.fit_ols(full_frame)
    y = full_frame.response
    sst = float(np.sum((y - y.mean()) ** 2))
    p = len(full_frame.columns)
    expected = ((sst - fit.residual_sum_of_squares) / (p - 1)) \
        / fit.residual_variance
    assert fit.f_statistic == pytest.approx(expected)
    assert fit.f_p_value < 1e-6


def test_vif_matches_auxiliary_regressions(full_frame):
    fit = el.fit_ols(full_frame)
    X = full_frame.matrix
    for j, name in enumerate(full_frame.columns):
        if name == "intercept":
            assert name not in fit.vif
            continue
        others = [k for k in range(X.shape[1]) if k != j]
        beta = np.linalg.lstsq(X[:, others], X[:, j], rcond=None)[0]
        resid = X[:, j] - X[:, others] @ beta
        sst = float(np.sum((X[:, j] - X[:, j].mean()) ** 2))
        expected = 1.0 / (1.0 - (1.0 - float(resid @ resid) / sst))
        assert fit.vif[name] == pytest.approx(expected, rel=1e-9)


def test_single_predictor_vif_is_one(complete_records):
    frame = el.build_frame(
        complete_records,
        el.FeatureSet(language=False, team_exp=False, manager_exp=False,
                      envergure=False))
    fit = el.fit_ols(frame)
    assert fit.vif == {"ln_size": pytest.approx(1.0)}


def test_fit_requires_leading_intercept(full_frame):
    shuffled = el.ModelFrame(
        columns=full_frame.columns[1:] + ("intercept",),
        matrix=np.column_stack([full_frame.matrix[:, 1:],
                                full_frame.matrix[:, 0]]),
        response=full_frame.response,
        project_ids=full_frame.project_ids,
    )
    with pytest.raises(el.DomainError):
        el.fit_ols(shuffled)


def test_collinear_frame_names_column(complete_records, full_frame):
    doubled = el.ModelFrame(
        columns=full_frame.columns + ("ln_size_copy",),
        matrix=np.column_stack([full_frame.matrix,
                                full_frame.matrix[:, 1]]),
        response=full_frame.response,
        project_ids=full_frame.project_ids,
    )
    with pytest.raises(el.CollinearityError) as info:
        el.fit_ols(doubled)
    assert info.value.column == 7
    assert "ln_size_copy" in str(info.value)


def test_r_squared_invariant_under_predictor_rescaling(full_frame):
    fit = el.fit_ols(full_frame)
    scaled = el.ModelFrame(
        columns=full_frame.columns,
        matrix=full_frame.matrix * np.array([1, 100, 1, 1, 0.01, 1, 3.5]),
        response=full_frame.response,
        project_ids=full_frame.project_ids,
    )
    refit = el.fit_ols(scaled)
    assert refit.r_squared == pytest.approx(fit.r_squared, abs=1e-12)
    assert refit.f_statistic == pytest.approx(fit.f_statistic, rel=1e-9)


def test_stepwise_selects_expected_terms(complete_records):
    trace = el.stepwise_select(el.build_candidate_frame(complete_records))
    assert set(trace.selected) == {"ln_size", "language", "envergure"}
    assert trace.alpha == 0.05


def test_stepwise_trace_records_decisions(complete_records):
    trace = el.stepwise_select(el.build_candidate_frame(complete_records))
    assert all(step.action in ("add", "remove") for step in trace.steps)
    added = [s.predictor for s in trace.steps if s.action == "add"]
    removed = [s.predictor for s in trace.steps if s.action == "remove"]
    for name in trace.selected:
        assert added.count(name) == removed.count(name) + 1
    for step in trace.steps:
        if step.action == "add":
            assert step.p_value < trace.alpha
        else:
            assert step.p_value > trace.alpha


def test_stepwise_step_count_bounded(complete_records):
    frame = el.build_candidate_frame(complete_records)
    trace = el.stepwise_select(frame)
    n_terms = 7  # three sizes, language pair, three ordinal attributes
    assert len(trace.steps) <= 2 * n_terms


def test_stepwise_final_fit_uses_selected_terms(complete_records):
    trace = el.stepwise_select(el.build_candidate_frame(complete_records))
    expected = {"intercept"}
    for term in trace.selected:
        expected.update(("lang_1", "lang_2") if term == "language"
                        else (term,))
    assert set(trace.fit.columns) == expected


def test_stepwise_alpha_validation(complete_records):
    frame = el.build_candidate_frame(complete_records)
    with pytest.raises(el.DomainError):
        el.stepwise_select(frame, alpha=0.0)


def test_stepwise_strict_alpha_selects_nothing_or_less(complete_records):
    frame = el.build_candidate_frame(complete_records)
    loose = el.stepwise_select(frame, alpha=0.05)
    strict = el.stepwise_select(frame, alpha=1e-12)
    assert set(strict.selected) <= set(loose.selected)


def test_predict_effort_known_coefficients():
    # exp(1.46 + 0.88 ln 298 - 0.0471*2 + 0.0623*2 + 0.0204*30) ~ 1231.3
    fit = el.RegressionFit(
        columns=("intercept", "ln_size", "lang_1", "lang_2", "team_exp",
                 "manager_exp", "envergure"),
        coefficients=np.array([1.46, 0.88, 1.41, 1.38, -0.0471, 0.0623,
                               0.0204]),
        standard_errors=np.zeros(7), t_values=np.zeros(7),
        p_values=np.zeros(7), residual_sum_of_squares=0.0,
        residual_variance=0.0, r_squared=1.0, f_statistic=0.0,
        f_p_value=1.0, vif={}, n=77, df_residual=70,
    )
    record = _record(points_non_adjust=298.0, team_exp=2, manager_exp=2,
                     envergure=30, language=3)
    assert el.predict_effort(fit, record) == pytest.approx(1231.3, abs=0.5)


def test_predict_effort_smearing_toggle(complete_records, full_frame):
    fit = el.fit_ols(full_frame)
    record = complete_records[0]
    plain = el.predict_effort(fit, record)
    corrected = el.predict_effort(fit, record, smearing=True)
    assert fit.smearing_factor > 1.0
    assert corrected == pytest.approx(plain * fit.smearing_factor)


def test_smearing_factor_is_mean_exp_residual(full_frame):
    fit = el.fit_ols(full_frame)
    resid = full_frame.response - full_frame.matrix @ fit.coefficients
    assert fit.smearing_factor == pytest.approx(float(np.mean(np.exp(resid))))
