"""Random-intercept linear mixed model fit by maximum likelihood.

Model for observation j in group g:

    y_gj = x_gj' beta + u_g + e_gj,   u_g ~ N(0, sigma_u^2),  e_gj ~ N(0, sigma^2)

The variance ratio psi = sigma_u^2 / sigma^2 is the only free parameter in
the profiled likelihood: given psi, beta has the closed-form GLS solution
and sigma^2 follows from the weighted residual sum of squares. The profile
is evaluated from per-group sufficient statistics (group sizes, group sums
of X and y), making one evaluation linear in the number of observations.
psi is then minimized by a bracketed scalar search with lower bound 0, so
boundary solutions (no group variance) are representable exactly.

ML rather than REML is used throughout because AIC comparisons require the
full likelihood; standard errors come from the inverse GLS information
matrix, and p-value stars use the normal approximation.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.linalg import qr
from scipy.optimize import minimize_scalar
from scipy.stats import norm

INTERCEPT = "intercept"

DISPLAY_NAMES = {
    "intercept": "Intercept",
    "country_count": "Country Count",
    "publication_count": "Publication Count",
    "year": "Year",
}

STAR_LEVELS = ((0.001, "***"), (0.01, "**"), (0.05, "*"))


@dataclass(frozen=True)
class LmmSpec:
    """Column layout of the regression: response, fixed effects, grouping."""

    response: str = "log_fwci"
    fixed_effects: tuple[str, ...] = (INTERCEPT, "country_count",
                                      "publication_count", "year")
    group: str = "combo_id"


@dataclass
class LmmFit:
    """Fitted coefficients, variance components, and per-group intercepts."""

    names: tuple[str, ...]
    beta: np.ndarray
    se: np.ndarray
    sigma_u2: float
    sigma2: float
    loglik: float
    aic: float
    n: int
    n_groups: int
    psi: float
    group_effects: dict = field(default_factory=dict, repr=False)
    spec: LmmSpec | None = field(default=None, repr=False)

    def coef(self, name: str) -> float:
        return float(self.beta[self.names.index(name)])

    def stderr(self, name: str) -> float:
        return float(self.se[self.names.index(name)])


def _group_codes(groups: Sequence) -> tuple[np.ndarray, list]:
    labels = sorted(set(groups))
    index = {g: i for i, g in enumerate(labels)}
    codes = np.fromiter((index[g] for g in groups), dtype=np.int64, count=len(groups))
    return codes, labels


def _canonical_order(y: np.ndarray, X: np.ndarray, codes: np.ndarray) -> np.ndarray:
    # Sort rows by (group, covariates, response) so any permutation of the
    # input yields bit-identical accumulations.
    keys = [y] + [X[:, j] for j in range(X.shape[1] - 1, -1, -1)] + [codes]
    return np.lexsort(keys)


class _Profile:
    """Profiled deviance machinery over per-group sufficient statistics."""

    def __init__(self, y: np.ndarray, X: np.ndarray, codes: np.ndarray, n_groups: int):
        self.n, self.p = X.shape
        self.XtX = X.T @ X
        self.Xty = X.T @ y
        self.yty = float(y @ y)
        self.sizes = np.bincount(codes, minlength=n_groups).astype(float)
        self.t = np.bincount(codes, weights=y, minlength=n_groups)
        self.S = np.zeros((n_groups, self.p))
        np.add.at(self.S, codes, X)

    def solve(self, psi: float) -> tuple[float, np.ndarray, float, np.ndarray]:
        """(deviance, beta, sigma2, information) at a given variance ratio."""
        c = psi / (1.0 + psi * self.sizes)
        A = self.XtX - (self.S * c[:, None]).T @ self.S
        r = self.Xty - self.S.T @ (c * self.t)
        beta = np.linalg.solve(A, r)
        q = self.yty - float(c @ (self.t ** 2)) - float(beta @ r)
        if q <= 0:
            return math.inf, beta, 0.0, A
        sigma2 = q / self.n
        deviance = (self.n * math.log(2.0 * math.pi * sigma2)
                    + float(np.sum(np.log1p(psi * self.sizes)))
                    + self.n)
        return deviance, beta, sigma2, A

    def deviance(self, psi: float) -> float:
        return self.solve(psi)[0]


def profile_deviance(y, X, groups, psi: float) -> float:
    """Minus twice the profiled log-likelihood at a given variance ratio."""
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    codes, labels = _group_codes(groups)
    order = _canonical_order(y, X, codes)
    prof = _Profile(y[order], X[order], codes[order], len(labels))
    return prof.deviance(psi)


def _check_rank(X: np.ndarray, names: Sequence[str]) -> None:
    _, R, piv = qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = max(X.shape) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
    rank = int(np.sum(diag > tol))
    if rank < X.shape[1]:
        bad = sorted(names[j] for j in piv[rank:])
        raise ValueError(f"rank-deficient design: collinear columns {', '.join(bad)}")


def fit_random_intercept(y, X, groups, names: Sequence[str] | None = None,
                         spec: LmmSpec | None = None) -> LmmFit:
    """Maximum-likelihood fit of the random-intercept model.

    `groups` assigns each row to its random-effect group. The search over
    psi = sigma_u^2/sigma^2 runs a coarse log-spaced scan followed by a
    bounded Brent refinement to 1e-8 relative tolerance, and the boundary
    psi = 0 is always considered, so data without group structure yield the
    ordinary least-squares solution exactly.
    """
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or y.shape[0] != X.shape[0] or len(groups) != X.shape[0]:
        raise ValueError("y, X, and groups must align on rows")
    n, p = X.shape
    if n < max(5, p + 2):
        raise ValueError(
            f"too few observations: n={n}, need at least {max(5, p + 2)} "
            f"for {p} fixed effects plus 2 variance parameters")
    names = tuple(names) if names is not None else tuple(f"x{j}" for j in range(p))
    _check_rank(X, names)

    codes, labels = _group_codes(groups)
    order = _canonical_order(y, X, codes)
    y, X, codes = y[order], X[order], codes[order]
    prof = _Profile(y, X, codes, len(labels))

    if np.all(prof.sizes <= 1):
        warnings.warn("all groups have size 1: the group and residual variances "
                      "are jointly unidentifiable; reporting sigma_u2 = 0")
        psi_hat = 0.0
    else:
        grid = np.concatenate(([0.0], np.logspace(-10, 6, 129)))
        devs = np.array([prof.deviance(g) for g in grid])
        i = int(np.argmin(devs))
        lo = grid[max(i - 1, 0)]
        hi = grid[i + 1] if i + 1 < len(grid) else grid[i] * 10.0
        res = minimize_scalar(prof.deviance, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-8 * max(1.0, grid[i])})
        psi_hat = float(res.x)
        if prof.deviance(0.0) <= prof.deviance(psi_hat):
            psi_hat = 0.0

    deviance, beta, sigma2, A = prof.solve(psi_hat)
    loglik = -0.5 * deviance
    k = p + 2
    aic = 2.0 * k - 2.0 * loglik
    cov_beta = sigma2 * np.linalg.inv(A)
    se = np.sqrt(np.diag(cov_beta))

    c = psi_hat / (1.0 + psi_hat * prof.sizes)
    u = c * (prof.t - prof.S @ beta)
    group_effects = {g: float(u[i]) for i, g in enumerate(labels)}

    return LmmFit(names=names, beta=beta, se=se,
                  sigma_u2=psi_hat * sigma2, sigma2=sigma2,
                  loglik=loglik, aic=aic, n=n, n_groups=len(labels),
                  psi=psi_hat, group_effects=group_effects, spec=spec)


def _design_row(ob, spec: LmmSpec) -> list[float]:
    row = []
    for name in spec.fixed_effects:
        if name == INTERCEPT:
            row.append(1.0)
            continue
        try:
            row.append(float(getattr(ob, name)))
        except AttributeError:
            raise ValueError(f"observation has no column {name!r}") from None
    return row


def fit(observations: Sequence, spec: LmmSpec | None = None) -> LmmFit:
    """Fit the default regression over combination observations.

    The response and fixed effects are read off each observation by
    attribute name; the random-effect group is the country combination, so
    the same combination in different years shares one group.
    """
    spec = spec or LmmSpec()
    y = [float(getattr(ob, spec.response)) for ob in observations]
    X = [_design_row(ob, spec) for ob in observations]
    groups = [getattr(ob, spec.group) for ob in observations]
    return fit_random_intercept(y, X, groups, names=spec.fixed_effects, spec=spec)


def predict(fit_: LmmFit, ob) -> float:
    """Fixed-effects prediction, plus the group intercept when the group is known.

    The group intercept is the shrinkage estimator
    sigma_u^2 / (sigma_u^2 + sigma^2 / n_g) times the group residual mean.
    """
    spec = fit_.spec or LmmSpec()
    x = np.array(_design_row(ob, spec))
    value = float(x @ fit_.beta)
    group = getattr(ob, spec.group, None)
    if group is not None and group in fit_.group_effects:
        value += fit_.group_effects[group]
    return value


def p_value(estimate: float, se: float) -> float:
    """Two-sided normal-approximation p-value."""
    if se <= 0:
        return math.nan
    return 2.0 * float(norm.sf(abs(estimate) / se))


def stars(p: float) -> str:
    for threshold, marker in STAR_LEVELS:
        if p < threshold:
            return marker
    return ""


def _fmt(value: float) -> str:
    return f"{value:.4g}"


def format_cell(estimate: float, se: float) -> str:
    """`estimate<stars> (se)` as used in the regression table."""
    return f"{_fmt(estimate)}{stars(p_value(estimate, se))} ({_fmt(se)})"


def report(fits: Mapping[str, LmmFit]) -> str:
    """Aligned plain-text regression table, one column per fitted model."""
    if not fits:
        raise ValueError("no fits to report")
    labels = list(fits)
    terms = list(dict.fromkeys(name for f in fits.values() for name in f.names))
    rows: list[tuple[str, list[str]]] = []
    for term in terms:
        cells = []
        for f in fits.values():
            if term in f.names:
                cells.append(format_cell(f.coef(term), f.stderr(term)))
            else:
                cells.append("")
        rows.append((DISPLAY_NAMES.get(term, term), cells))
    rows.append(("Random Effect", [_fmt(f.sigma_u2) for f in fits.values()]))
    rows.append(("Residual", [_fmt(f.sigma2) for f in fits.values()]))
    rows.append(("AIC", [f"{f.aic:.1f}" for f in fits.values()]))
    rows.append(("N", [str(f.n) for f in fits.values()]))

    name_w = max(len(r[0]) for r in rows)
    col_w = [max(len(label), max(len(r[1][j]) for r in rows))
             for j, label in enumerate(labels)]
    lines = [" " * name_w + "  " +
             "  ".join(label.rjust(col_w[j]) for j, label in enumerate(labels))]
    for name, cells in rows:
        lines.append(name.ljust(name_w) + "  " +
                     "  ".join(cells[j].rjust(col_w[j]) for j in range(len(labels))))
    lines.append("")
    lines.append("* p<0.05, ** p<0.01, *** p<0.001 (normal approximation)")
    return "\n".join(lines) + "\n"


def report_csv(fits: Mapping[str, LmmFit]) -> str:
    """Long-format CSV: model,term,estimate,se,p,stars plus summary rows."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["model", "term", "estimate", "se", "p", "stars"])
    for label, f in fits.items():
        for j, term in enumerate(f.names):
            p = p_value(float(f.beta[j]), float(f.se[j]))
            writer.writerow([label, DISPLAY_NAMES.get(term, term),
                             repr(float(f.beta[j])), repr(float(f.se[j])),
                             repr(p), stars(p)])
        writer.writerow([label, "Random Effect", repr(f.sigma_u2), "", "", ""])
        writer.writerow([label, "Residual", repr(f.sigma2), "", "", ""])
        writer.writerow([label, "AIC", repr(f.aic), "", "", ""])
        writer.writerow([label, "N", f.n, "", "", ""])
    return out.getvalue()
