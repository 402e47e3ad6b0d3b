"""Negative-binomial GLMs for test-method and test-class counts.

Log-link NB2 fits via iteratively reweighted least squares, alternated
with profile maximum-likelihood estimation of the dispersion theta
(golden-section search over ln theta), until the deviance moves less
than 1e-8 or 50 outer iterations pass.  Predictors are ln(x+1); the +1
guard is deliberate because activity counts can be zero.

The type-II ANOVA refits each single-predictor drop with theta held at
the full-model estimate, which is what makes dAIC = dDeviance - 2 hold
exactly for one-degree drops.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import special, stats

from .errors import ArgError, ConvergenceError, SingularError

PREDICTORS = ("corrective", "perfective", "adaptive", "developers", "loc", "age")
OUTCOMES = ("test_methods", "test_classes")

_MAX_OUTER = 50
_DEVIANCE_TOL = 1e-8
_IRLS_TOL = 1e-10
_LN_THETA_RANGE = (-7.0, 16.0)


@dataclass(frozen=True)
class ProjectFeatures:
    project: str
    corrective: int
    perfective: int
    adaptive: int
    developers: int
    loc: int
    age: int
    test_methods: int
    test_classes: int


@dataclass
class GlmFit:
    outcome: str
    names: List[str]
    coefficients: np.ndarray
    std_errors: np.ndarray
    p_values: np.ndarray
    theta: float
    deviance: float
    aic: float
    log_likelihood: float
    n_observations: int
    iterations: int
    mu: np.ndarray = field(repr=False, default=None)

    def stars(self, i: int) -> str:
        p = self.p_values[i]
        if p < 0.01:
            return "***"
        if p < 0.05:
            return "**"
        if p < 0.1:
            return "*"
        return ""

    def coefficient_rows(self) -> List[str]:
        rows = []
        for i, name in enumerate(self.names):
            rows.append(
                f"{name:<18} {self.coefficients[i]:+.3f} ({self.std_errors[i]:.3f}) {self.stars(i)}"
            )
        return rows


def log1p_design(rows: Sequence[ProjectFeatures]) -> Tuple[np.ndarray, List[str]]:
    """Intercept plus ln(x+1) of each predictor."""
    X = np.column_stack(
        [np.ones(len(rows))]
        + [np.log1p([getattr(r, p) for r in rows]) for p in PREDICTORS]
    )
    names = ["Constant"] + [f"log({p})" for p in PREDICTORS]
    return X, names


def _nb_loglik(y: np.ndarray, mu: np.ndarray, theta: float) -> float:
    mu = np.clip(mu, 1e-12, None)
    return float(
        np.sum(
            special.gammaln(y + theta)
            - special.gammaln(theta)
            - special.gammaln(y + 1.0)
            + theta * np.log(theta / (theta + mu))
            + special.xlogy(y, mu / (theta + mu))
        )
    )


def _nb_deviance(y: np.ndarray, mu: np.ndarray, theta: float) -> float:
    mu = np.clip(mu, 1e-12, None)
    term = special.xlogy(y, y / mu) - (y + theta) * np.log((y + theta) / (mu + theta))
    return float(2.0 * term.sum())


def _irls(X: np.ndarray, y: np.ndarray, theta: float, beta: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """IRLS to convergence for fixed theta; returns (beta, mu, XtWX)."""
    eta = X @ beta
    mu = np.exp(np.clip(eta, -30, 30))
    xtwx = None
    for _ in range(200):
        w = mu * theta / (theta + mu)
        z = eta + (y - mu) / np.clip(mu, 1e-12, None)
        xtw = X.T * w
        xtwx = xtw @ X
        try:
            new_beta = np.linalg.solve(xtwx, xtw @ z)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"IRLS normal equations singular: {exc}") from exc
        if not np.all(np.isfinite(new_beta)):
            raise ConvergenceError("IRLS produced non-finite coefficients")
        delta = np.max(np.abs(new_beta - beta))
        beta = new_beta
        eta = X @ beta
        mu = np.exp(np.clip(eta, -30, 30))
        if delta < _IRLS_TOL:
            break
    return beta, mu, xtwx


def _golden_theta(y: np.ndarray, mu: np.ndarray, center: Optional[float] = None) -> float:
    if center is None:
        lo, hi = _LN_THETA_RANGE
    else:
        lo = max(_LN_THETA_RANGE[0], math.log(center) - 2.0)
        hi = min(_LN_THETA_RANGE[1], math.log(center) + 2.0)
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc = _nb_loglik(y, mu, math.exp(c))
    fd = _nb_loglik(y, mu, math.exp(d))
    for _ in range(200):
        if b - a < 1e-10:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = _nb_loglik(y, mu, math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = _nb_loglik(y, mu, math.exp(d))
    return math.exp((a + b) / 2.0)


def _check_design(X: np.ndarray, names: List[str]) -> None:
    rank = np.linalg.matrix_rank(X)
    if rank < X.shape[1]:
        # name the columns that add no rank
        bad = []
        kept: List[int] = []
        for j in range(X.shape[1]):
            trial = X[:, kept + [j]]
            if np.linalg.matrix_rank(trial) == len(kept):
                bad.append(names[j])
            else:
                kept.append(j)
        raise SingularError(f"design matrix is singular; collinear: {bad}", columns=bad)


def fit_nb_design(
    X: np.ndarray,
    y: np.ndarray,
    names: List[str],
    outcome: str = "outcome",
    theta: Optional[float] = None,
) -> GlmFit:
    """Fit an NB GLM on an explicit design matrix.

    ``theta=None`` estimates dispersion by profile likelihood; passing a
    value holds it fixed (used by the ANOVA drops).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or len(X) != len(y):
        raise ArgError("X must be 2-D and aligned with y")
    if np.any(y < 0) or np.any(y != np.floor(y)):
        raise ArgError("outcome must hold non-negative integers")
    _check_design(X, names)
    n, p = X.shape

    beta = np.zeros(p)
    beta[0] = math.log(y.mean() + 1e-9) if names[0] == "Constant" else 0.0
    cur_theta = 1.0 if theta is None else theta
    beta, mu, xtwx = _irls(X, y, cur_theta, beta)
    prev_dev = _nb_deviance(y, mu, cur_theta)
    prev_ll = -np.inf
    trace = [prev_dev]
    iterations = 0
    converged = theta is not None
    for iterations in range(1, _MAX_OUTER + 1):
        if theta is None:
            cur_theta = _golden_theta(y, mu, center=None if iterations == 1 else cur_theta)
        beta, mu, xtwx = _irls(X, y, cur_theta, beta)
        ll = _nb_loglik(y, mu, cur_theta)
        # non-decreasing up to arithmetic noise, which scales with the
        # lgamma magnitudes at large theta
        noise = 1e-10 * max(1.0, abs(ll), abs(cur_theta) * 1e-2)
        if ll + noise < prev_ll:
            raise ConvergenceError(
                f"log-likelihood decreased at outer iteration {iterations}", trace=trace
            )
        dev = _nb_deviance(y, mu, cur_theta)
        trace.append(dev)
        # flat dispersion profiles can leave the deviance jittering below
        # the likelihood's resolution; a likelihood plateau is convergence
        if abs(dev - prev_dev) < _DEVIANCE_TOL or abs(ll - prev_ll) <= noise:
            converged = True
            prev_ll = ll
            break
        prev_ll = ll
        prev_dev = dev
    if not converged:
        raise ConvergenceError(
            f"no convergence after {_MAX_OUTER} outer iterations", trace=trace
        )

    cov = np.linalg.inv(xtwx)
    se = np.sqrt(np.diag(cov))
    z = beta / se
    p_values = 2.0 * stats.norm.sf(np.abs(z))
    ll = _nb_loglik(y, mu, cur_theta)
    aic = -2.0 * ll + 2.0 * (p + 1)  # theta counts as a parameter
    return GlmFit(
        outcome=outcome,
        names=list(names),
        coefficients=beta,
        std_errors=se,
        p_values=p_values,
        theta=float(cur_theta),
        deviance=_nb_deviance(y, mu, cur_theta),
        aic=float(aic),
        log_likelihood=float(ll),
        n_observations=n,
        iterations=iterations,
        mu=mu,
    )


def fit_nb_glm(rows: Sequence[ProjectFeatures], outcome: str) -> GlmFit:
    """The test-count model: outcome ~ the six log-transformed predictors."""
    if outcome not in OUTCOMES:
        raise ArgError(f"outcome must be one of {OUTCOMES}")
    if len(rows) < 10:
        raise ArgError("need at least 10 projects to fit")
    X, names = log1p_design(rows)
    y = np.array([getattr(r, outcome) for r in rows], dtype=np.float64)
    return fit_nb_design(X, y, names, outcome=outcome)


@dataclass
class AnovaRow:
    dropped: str
    df: int
    deviance: float
    aic: float
    f_value: Optional[float]
    p_value: Optional[float]
    failed: bool = False


@dataclass
class AnovaTable:
    outcome: str
    rows: List[AnovaRow]

    def to_csv(self) -> str:
        lines = ["dropped,df,deviance,aic,f_value,p_value"]
        for r in self.rows:
            f = "" if r.f_value is None else f"{r.f_value:.4f}"
            p = "" if r.p_value is None else f"{r.p_value:.6g}"
            lines.append(f"{r.dropped},{r.df},{r.deviance:.4f},{r.aic:.4f},{f},{p}")
        return "\n".join(lines) + "\n"


def anova_type2(rows: Sequence[ProjectFeatures], outcome: str) -> AnovaTable:
    """Single-predictor drops against the full model, theta held fixed."""
    full = fit_nb_glm(rows, outcome)
    X, names = log1p_design(rows)
    y = np.array([getattr(r, outcome) for r in rows], dtype=np.float64)
    n, p = X.shape
    resid_df = n - p
    scale = full.deviance / resid_df
    table = [AnovaRow("none", 0, full.deviance, full.aic, None, None)]
    for j, name in enumerate(names):
        if name == "Constant":
            continue
        keep = [k for k in range(p) if k != j]
        try:
            reduced = fit_nb_design(
                X[:, keep], y, [names[k] for k in keep], outcome, theta=full.theta
            )
            d_dev = reduced.deviance - full.deviance
            # with theta fixed, -2*dLL equals dDeviance, so dAIC = dDev - 2
            aic = full.aic + d_dev - 2.0
            f_value = d_dev / 1.0 / scale
            p_value = float(stats.f.sf(f_value, 1, resid_df))
            table.append(AnovaRow(name, 1, reduced.deviance, aic, f_value, p_value))
        except (ConvergenceError, SingularError):
            table.append(
                AnovaRow(name, 1, float("nan"), float("nan"), None, None, failed=True)
            )
    return AnovaTable(outcome=outcome, rows=table)


def read_project_features(path) -> List[ProjectFeatures]:
    out = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(
                ProjectFeatures(
                    project=row["project"],
                    **{k: int(row[k]) for k in (*PREDICTORS, *OUTCOMES)},
                )
            )
    return out


def format_fits(fits: Sequence[GlmFit]) -> str:
    """Aligned coefficient table, one outcome per column."""
    names = fits[0].names
    ordered = [n for n in names if n != "Constant"] + ["Constant"]
    head = f"{'Predictor':<18}" + "".join(f"{f.outcome:>24}" for f in fits)
    lines = [head]
    for name in ordered:
        cells = []
        for f in fits:
            i = f.names.index(name)
            cells.append(f"{f.coefficients[i]:+.3f} ({f.std_errors[i]:.3f}){f.stars(i):<3}")
        lines.append(f"{name:<18}" + "".join(f"{c:>24}" for c in cells))
    lines.append(f"{'Observations':<18}" + "".join(f"{f.n_observations:>24}" for f in fits))
    lines.append(f"{'Theta':<18}" + "".join(f"{f.theta:>24.3f}" for f in fits))
    lines.append(f"{'AIC':<18}" + "".join(f"{f.aic:>24.3f}" for f in fits))
    return "\n".join(lines)
