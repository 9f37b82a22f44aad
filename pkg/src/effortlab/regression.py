"""Log-linear effort regression.

Builds design matrices from complete project records, fits OLS with the
usual inference table (standard errors, t statistics, p values, model F,
VIF), runs bidirectional stepwise selection, and turns a fitted model
back into raw-effort predictions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .dataset import ProjectRecord
from .errors import CollinearityError, DomainError, TransformError
from .numerics import f_upper_tail_p, solve_least_squares, t_two_sided_p

FEATURE_NAMES = ("size", "language", "team_exp", "manager_exp", "envergure")

DEFAULT_ALPHA = 0.05


@dataclass(frozen=True, slots=True)
class FeatureSet:
    """Which predictors enter the model. Size is the ln of PointsNonAdjust."""

    size: bool = True
    language: bool = True
    team_exp: bool = True
    manager_exp: bool = True
    envergure: bool = True

    def labels(self) -> tuple[str, ...]:
        return tuple(n for n in FEATURE_NAMES if getattr(self, n))

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "FeatureSet":
        wanted = list(names)
        for n in wanted:
            if n not in FEATURE_NAMES:
                raise DomainError(
                    f"unknown feature {n!r}; choose from {FEATURE_NAMES}"
                )
        return cls(**{n: n in wanted for n in FEATURE_NAMES})


@dataclass(frozen=True, eq=False)
class ModelFrame:
    """Design matrix plus ln(effort) response for a set of records."""

    columns: tuple[str, ...]
    matrix: np.ndarray
    response: np.ndarray
    project_ids: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.project_ids)

    def predictor_columns(self) -> tuple[str, ...]:
        return tuple(c for c in self.columns if c != "intercept")


@dataclass(frozen=True, eq=False)
class RegressionFit:
    columns: tuple[str, ...]
    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_values: np.ndarray
    p_values: np.ndarray
    residual_sum_of_squares: float
    residual_variance: float
    r_squared: float
    f_statistic: float
    f_p_value: float
    vif: dict[str, float]
    n: int
    df_residual: int
    smearing_factor: float = 1.0

    def coefficient(self, column: str) -> float:
        return float(self.coefficients[self.columns.index(column)])

    def p_value(self, column: str) -> float:
        return float(self.p_values[self.columns.index(column)])


@dataclass(frozen=True, slots=True)
class StepwiseStep:
    action: str
    predictor: str
    p_value: float


@dataclass(frozen=True, eq=False)
class StepwiseTrace:
    steps: tuple[StepwiseStep, ...]
    selected: tuple[str, ...]
    fit: RegressionFit
    alpha: float = DEFAULT_ALPHA


def encode_language(code: int) -> tuple[int, int]:
    """Two dummies for the three language categories; 4GL is the baseline."""
    if code == 1:
        return 1, 0
    if code == 2:
        return 0, 1
    if code == 3:
        return 0, 0
    raise DomainError(f"language code must be 1, 2 or 3, got {code}")


def _ln(value: float, what: str, project_id: int) -> float:
    if value <= 0:
        raise TransformError(
            f"cannot take ln of {what} = {value}", project_id=project_id
        )
    return math.log(value)


def _column_value(name: str, record: ProjectRecord) -> float:
    if name == "intercept":
        return 1.0
    if name == "ln_size":
        return _ln(record.points_non_adjust, "size", record.project_id)
    if name == "ln_transactions":
        return _ln(record.transactions, "transactions", record.project_id)
    if name == "ln_entities":
        return _ln(record.entities, "entities", record.project_id)
    if name == "lang_1":
        return float(encode_language(record.language)[0])
    if name == "lang_2":
        return float(encode_language(record.language)[1])
    if name == "team_exp":
        return float(record.team_exp)
    if name == "manager_exp":
        return float(record.manager_exp)
    if name == "envergure":
        return float(record.envergure)
    raise DomainError(f"unknown design column {name!r}")


def _frame_from_columns(records: Sequence[ProjectRecord],
                        columns: tuple[str, ...]) -> ModelFrame:
    if not records:
        raise DomainError("need at least one record")
    rows = []
    response = []
    for rec in records:
        rows.append([_column_value(c, rec) for c in columns])
        response.append(_ln(rec.effort, "effort", rec.project_id))
    return ModelFrame(
        columns=columns,
        matrix=np.array(rows, dtype=float),
        response=np.array(response, dtype=float),
        project_ids=tuple(r.project_id for r in records),
    )


def build_frame(records: Sequence[ProjectRecord],
                features: FeatureSet = FeatureSet()) -> ModelFrame:
    """Design matrix in the fixed order intercept, ln_size, lang_1,
    lang_2, team_exp, manager_exp, envergure, restricted to the enabled
    features."""
    columns: list[str] = ["intercept"]
    if features.size:
        columns.append("ln_size")
    if features.language:
        columns.extend(["lang_1", "lang_2"])
    if features.team_exp:
        columns.append("team_exp")
    if features.manager_exp:
        columns.append("manager_exp")
    if features.envergure:
        columns.append("envergure")
    return _frame_from_columns(records, tuple(columns))


def build_candidate_frame(records: Sequence[ProjectRecord]) -> ModelFrame:
    """Frame holding every stepwise candidate: three size measures, the
    language pair and the three ordinal attributes."""
    return _frame_from_columns(records, (
        "intercept",
        "ln_size",
        "ln_transactions",
        "ln_entities",
        "lang_1",
        "lang_2",
        "team_exp",
        "manager_exp",
        "envergure",
    ))


def _subset(frame: ModelFrame, keep: Sequence[int]) -> ModelFrame:
    idx = list(keep)
    return ModelFrame(
        columns=tuple(frame.columns[i] for i in idx),
        matrix=frame.matrix[:, idx],
        response=frame.response,
        project_ids=frame.project_ids,
    )


def vif(frame: ModelFrame) -> dict[str, float]:
    """Variance inflation factor of each non-intercept column, from the
    R-squared of regressing that column on all the others."""
    out: dict[str, float] = {}
    for j, name in enumerate(frame.columns):
        if name == "intercept":
            continue
        others = [k for k in range(len(frame.columns)) if k != j]
        target = frame.matrix[:, j]
        sst = float(np.sum((target - target.mean()) ** 2))
        if sst == 0.0:
            raise DomainError(f"column {name!r} is constant")
        sol = solve_least_squares(frame.matrix[:, others], target)
        r2 = 1.0 - sol.residual_sum_of_squares / sst
        out[name] = 1.0 / max(1.0 - r2, 1e-12)
    return out


def fit_ols(frame: ModelFrame) -> RegressionFit:
    """OLS on the log scale with the full inference table attached."""
    if frame.columns[0] != "intercept":
        raise DomainError("frame must start with an intercept column")
    n, p = frame.matrix.shape
    if n <= p:
        raise DomainError(f"need more rows than columns, got {n}x{p}")
    try:
        sol = solve_least_squares(frame.matrix, frame.response)
    except CollinearityError as exc:
        name = frame.columns[exc.column]
        raise CollinearityError(
            f"column {name!r} is linearly dependent on the others",
            column=exc.column,
        ) from None
    df_resid = n - p
    resid_var = sol.residual_sum_of_squares / df_resid
    se = np.sqrt(resid_var * np.diag(sol.unscaled_covariance))
    t = sol.coefficients / se
    pvals = np.array([t_two_sided_p(float(tj), df_resid) for tj in t])

    y = frame.response
    sst = float(np.sum((y - y.mean()) ** 2))
    if sst == 0.0:
        raise DomainError("response is constant")
    r2 = 1.0 - sol.residual_sum_of_squares / sst
    if p > 1:
        f_stat = ((sst - sol.residual_sum_of_squares) / (p - 1)) / resid_var
        f_p = f_upper_tail_p(f_stat, p - 1, df_resid)
    else:
        f_stat = float("nan")
        f_p = float("nan")

    resid = y - frame.matrix @ sol.coefficients
    return RegressionFit(
        columns=frame.columns,
        coefficients=sol.coefficients,
        standard_errors=se,
        t_values=t,
        p_values=pvals,
        residual_sum_of_squares=sol.residual_sum_of_squares,
        residual_variance=resid_var,
        r_squared=r2,
        f_statistic=f_stat,
        f_p_value=f_p,
        vif=vif(frame),
        n=n,
        df_residual=df_resid,
        smearing_factor=float(np.mean(np.exp(resid))),
    )


def _terms_of(frame: ModelFrame) -> list[tuple[str, tuple[int, ...]]]:
    """Group design columns into selectable terms; the language dummies
    move together as one term."""
    terms: list[tuple[str, tuple[int, ...]]] = []
    lang: list[int] = []
    for j, name in enumerate(frame.columns):
        if name == "intercept":
            continue
        if name in ("lang_1", "lang_2"):
            lang.append(j)
        else:
            terms.append((name, (j,)))
    if lang:
        terms.append(("language", tuple(lang)))
    terms.sort(key=lambda t: t[1][0])
    return terms


def _partial_f_p(frame: ModelFrame, base: list[int],
                 extra: Sequence[int]) -> float:
    """P value for adding `extra` columns to the model over `base`."""
    full_idx = sorted(base + list(extra))
    rss_r = solve_least_squares(
        frame.matrix[:, sorted(base)], frame.response
    ).residual_sum_of_squares
    rss_f = solve_least_squares(
        frame.matrix[:, full_idx], frame.response
    ).residual_sum_of_squares
    df_f = frame.n - len(full_idx)
    df_extra = len(extra)
    if df_f < 1:
        raise DomainError("not enough residual degrees of freedom")
    if rss_f <= 0:
        return 0.0
    f_stat = ((rss_r - rss_f) / df_extra) / (rss_f / df_f)
    return f_upper_tail_p(max(f_stat, 0.0), df_extra, df_f)


def stepwise_select(frame: ModelFrame,
                    alpha: float = DEFAULT_ALPHA) -> StepwiseTrace:
    """Bidirectional stepwise selection over the frame's terms.

    Starts from the intercept-only model. Each round first tries the
    best entry (smallest partial-F p value below alpha, ties broken by
    column order), then retests everything already in the model and
    removes the worst term whose p value rose above alpha. Stops when a
    full round changes nothing.
    """
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must be in (0, 1), got {alpha}")
    intercept = frame.columns.index("intercept")
    terms = _terms_of(frame)
    if not terms:
        raise DomainError("frame has no candidate terms")
    included: list[str] = []
    steps: list[StepwiseStep] = []
    by_name = dict(terms)

    def current_base() -> list[int]:
        cols = [intercept]
        for name in included:
            cols.extend(by_name[name])
        return cols

    for _ in range(2 * len(terms)):
        changed = False
        base = current_base()
        best: tuple[float, int, str] | None = None
        for order, (name, cols) in enumerate(terms):
            if name in included:
                continue
            p = _partial_f_p(frame, base, cols)
            if p < alpha and (best is None or (p, order) < best[:2]):
                best = (p, order, name)
        if best is not None:
            included.append(best[2])
            steps.append(StepwiseStep("add", best[2], best[0]))
            changed = True

        base = current_base()
        worst: tuple[float, str] | None = None
        for name in included:
            rest = [c for c in base if c not in by_name[name]]
            p = _partial_f_p(frame, rest, by_name[name])
            if p > alpha and (worst is None or p > worst[0]):
                worst = (p, name)
        if worst is not None:
            included.remove(worst[1])
            steps.append(StepwiseStep("remove", worst[1], worst[0]))
            changed = True

        if not changed:
            break

    final = _subset(frame, current_base())
    ordered = tuple(n for n, _ in terms if n in included)
    return StepwiseTrace(
        steps=tuple(steps),
        selected=ordered,
        fit=fit_ols(final),
        alpha=alpha,
    )


def feature_row(columns: Sequence[str],
                record: ProjectRecord) -> np.ndarray:
    """One design row for a record, in the given column order."""
    return np.array([_column_value(c, record) for c in columns])


def predict_effort(fit: RegressionFit, record: ProjectRecord,
                   smearing: bool = False) -> float:
    """Raw effort prediction: exp of the linear predictor.

    Back-transforming the log-scale mean is biased low; pass
    smearing=True to multiply by the smearing factor estimated at fit
    time. The default applies no correction.
    """
    value = math.exp(float(feature_row(fit.columns, record)
                           @ fit.coefficients))
    if smearing:
        value *= fit.smearing_factor
    return value
