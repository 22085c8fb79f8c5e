"""Linear classifiers, an exact linear-separability checker, and nested CV.

Everything here is deterministic given (data, parameters, seed): fold
assignment uses seeded shuffling, solvers are deterministic, and inner
parameter sweeps see training rows only.
"""

from __future__ import annotations

from dataclasses import dataclass

import cvxopt
import cvxopt.solvers
import numpy as np
import scipy.linalg
from scipy.optimize import linprog, nnls

from .errors import (
    BadRank,
    DimensionMismatch,
    NotConverged,
    SingularScatter,
    TooFewSamples,
)

__all__ = [
    "LinearClassifier",
    "LabeledDataset",
    "CvReport",
    "PldaModel",
    "OneVsRestModel",
    "SeparabilityResult",
    "fit_fisher_lda",
    "fit_penalized_lda",
    "fit_linear_svm",
    "fit_one_vs_rest",
    "check_linear_separability",
    "cross_validate",
    "project_2d",
    "DEFAULT_SVM_GRID",
    "DEFAULT_PLDA_GRID",
]

DEFAULT_SVM_GRID = tuple(10.0**k for k in range(-3, 4))
DEFAULT_PLDA_GRID = (0.0, 1e-2, 1e-1, 1.0, 10.0)


@dataclass(frozen=True)
class LinearClassifier:
    """Separating hyperplane: predicts ``classes[1]`` where ``w @ x > b``."""

    weights: np.ndarray
    bias: float
    classes: tuple = (-1, 1)

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or not np.all(np.isfinite(w)):
            raise ValueError("weights must be a finite 1-D vector")
        if not np.any(w != 0.0):
            raise ValueError("weights must not be all zero")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", float(self.bias))

    def decision(self, x) -> np.ndarray:
        return np.atleast_2d(np.asarray(x, dtype=np.float64)) @ self.weights - self.bias

    def predict(self, x) -> np.ndarray:
        d = self.decision(x)
        return np.where(d > 0, self.classes[1], self.classes[0])


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix (rows = samples) with one class id per row."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        x = np.ascontiguousarray(self.features, dtype=np.float64)
        y = np.asarray(self.labels)
        if x.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        if y.ndim != 1 or y.size != x.shape[0]:
            raise ValueError("labels must align with feature rows")
        if not np.all(np.isfinite(x)):
            raise ValueError("features must be finite")
        if np.unique(y).size < 2:
            raise ValueError("need at least two distinct labels")
        x.setflags(write=False)
        object.__setattr__(self, "features", x)
        object.__setattr__(self, "labels", y)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def class_labels(self) -> np.ndarray:
        return np.unique(self.labels)

    def subset(self, idx) -> "LabeledDataset":
        return LabeledDataset(self.features[idx], self.labels[idx])


@dataclass
class CvReport:
    """Cross-validation outcome: per-fold errors and chosen parameters."""

    per_fold_errors: list[float]
    per_fold_train_errors: list[float]
    chosen_params: list[dict]
    mean_train_error: float
    mean_test_error: float
    cohen_kappa: float

    def __post_init__(self):
        for e in list(self.per_fold_errors) + list(self.per_fold_train_errors):
            if not 0.0 <= e <= 1.0:
                raise ValueError("fold errors must lie in [0, 1]")
        if len(self.per_fold_errors) != len(self.chosen_params):
            raise ValueError("fold count mismatch")

    def to_text(self) -> str:
        lines = [f"{'fold':>4}  {'train_error':>11}  {'test_error':>10}  params"]
        for i, (tr, te, p) in enumerate(
            zip(self.per_fold_train_errors, self.per_fold_errors, self.chosen_params)
        ):
            pstr = ", ".join(f"{k}={v!r}" for k, v in sorted(p.items())) or "-"
            lines.append(f"{i:>4}  {tr:>11.4f}  {te:>10.4f}  {pstr}")
        lines.append(
            f"mean  {self.mean_train_error:>11.4f}  {self.mean_test_error:>10.4f}  "
            f"kappa={self.cohen_kappa:.4f}"
        )
        return "\n".join(lines)

    def to_csv_rows(self) -> list[list]:
        rows = [["fold", "train_error", "test_error", "params"]]
        for i, (tr, te, p) in enumerate(
            zip(self.per_fold_train_errors, self.per_fold_errors, self.chosen_params)
        ):
            pstr = ";".join(f"{k}={v!r}" for k, v in sorted(p.items()))
            rows.append([i, repr(tr), repr(te), pstr])
        rows.append(["mean", repr(self.mean_train_error), repr(self.mean_test_error), ""])
        return rows


def _scatter_matrices(x: np.ndarray, y: np.ndarray):
    """Within-class, between-class, and total scatter (unnormalized)."""
    mean_all = x.mean(axis=0)
    d = x.shape[1]
    s_w = np.zeros((d, d))
    s_b = np.zeros((d, d))
    for c in np.unique(y):
        rows = x[y == c]
        mu = rows.mean(axis=0)
        centered = rows - mu
        s_w += centered.T @ centered
        diff = (mu - mean_all)[:, None]
        s_b += rows.shape[0] * (diff @ diff.T)
    centered_all = x - mean_all
    s_t = centered_all.T @ centered_all
    return s_w, s_b, s_t


def _ridge_scaled(s_w: np.ndarray, amount: float) -> np.ndarray:
    d = s_w.shape[0]
    scale = np.trace(s_w) / d
    if scale <= 0.0:
        scale = 1.0
    return s_w + amount * scale * np.eye(d)


def fit_fisher_lda(data: LabeledDataset, shrinkage: float = 1e-3) -> LinearClassifier:
    """Fisher discriminant: maximize projected class-mean separation against
    within-class variance.

    The within-class scatter is regularized by ``shrinkage * trace / D`` on
    the diagonal, which keeps the solve well posed when the feature dimension
    exceeds the sample count. The threshold is the midpoint of the projected
    class means.

    Raises
    ------
    SingularScatter
        If the (regularized) scatter is not invertible.
    ValueError
        For non-binary labels or coinciding class means.
    """
    if shrinkage < 0:
        raise ValueError("shrinkage must be nonnegative")
    classes = data.class_labels
    if classes.size != 2:
        raise ValueError("fisher LDA requires exactly two classes")
    x, y = data.features, data.labels
    m1 = x[y == classes[0]].mean(axis=0)
    m2 = x[y == classes[1]].mean(axis=0)
    if np.allclose(m1, m2, rtol=0.0, atol=1e-12):
        raise ValueError("class means coincide; discriminant direction undefined")
    s_w, _, _ = _scatter_matrices(x, y)
    s_reg = _ridge_scaled(s_w, shrinkage) if shrinkage > 0 else s_w
    eigvals = np.linalg.eigvalsh(s_reg)
    if eigvals[-1] <= 0 or eigvals[0] <= 1e-12 * eigvals[-1]:
        raise SingularScatter(
            "within-class scatter is singular; increase shrinkage or sample count"
        )
    w = np.linalg.solve(s_reg, m2 - m1)
    b = float(w @ (m1 + m2) / 2.0)
    return LinearClassifier(w, b, classes=(classes[0], classes[1]))


@dataclass(frozen=True)
class PldaModel:
    """Penalized discriminant embedding with nearest-centroid classification.

    Directions are the top generalized eigenvectors of the class-separation
    scatter blended with a total-scatter (data fitting) term, against the
    regularized within-class scatter; ``alpha`` sets the blend.
    """

    components: np.ndarray
    centroids: np.ndarray
    classes: np.ndarray
    alpha: float

    def project(self, x) -> np.ndarray:
        return np.atleast_2d(np.asarray(x, dtype=np.float64)) @ self.components

    def predict(self, x) -> np.ndarray:
        z = self.project(x)
        dist = np.linalg.norm(z[:, None, :] - self.centroids[None, :, :], axis=2)
        return self.classes[np.argmin(dist, axis=1)]


def _plda_eigendirections(data: LabeledDataset, alpha: float, ridge: float):
    s_w, s_b, s_t = _scatter_matrices(data.features, data.labels)
    a = s_b + alpha * s_t
    b = _ridge_scaled(s_w, ridge if ridge > 0 else 1e-12)
    eigvals, eigvecs = scipy.linalg.eigh(a, b)
    order = np.argsort(eigvals)[::-1]
    eigvals, eigvecs = eigvals[order], eigvecs[:, order]
    top = float(eigvals[0]) if eigvals.size else 0.0
    nontrivial = int(np.sum(eigvals > 1e-9 * max(top, 1e-300))) if top > 0 else 0
    # deterministic sign convention: largest-magnitude entry positive
    for j in range(eigvecs.shape[1]):
        k = np.argmax(np.abs(eigvecs[:, j]))
        if eigvecs[k, j] < 0:
            eigvecs[:, j] = -eigvecs[:, j]
    return eigvals, eigvecs, nontrivial


def fit_penalized_lda(
    data: LabeledDataset, alpha: float, k: int, ridge: float = 1e-3
) -> PldaModel:
    """Fit the penalized discriminant embedding.

    Raises
    ------
    BadRank
        If ``k`` exceeds the number of nontrivial eigendirections.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if not 1 <= k <= data.n_features:
        raise ValueError("k must satisfy 1 <= k <= feature dimension")
    _, eigvecs, nontrivial = _plda_eigendirections(data, alpha, ridge)
    if k > nontrivial:
        raise BadRank(f"requested {k} directions, only {nontrivial} nontrivial")
    return _plda_from_directions(data, eigvecs[:, :k], alpha)


def _plda_from_directions(data: LabeledDataset, comps: np.ndarray, alpha: float) -> PldaModel:
    classes = data.class_labels
    z = data.features @ comps
    centroids = np.stack([z[data.labels == c].mean(axis=0) for c in classes])
    comps = comps.copy()
    comps.setflags(write=False)
    return PldaModel(comps, centroids, classes, float(alpha))


def _optimal_intercept(x: np.ndarray, y: np.ndarray, w: np.ndarray) -> float:
    """Exact minimizer of the hinge sum over the intercept for fixed weights.

    The hinge sum is piecewise linear and convex in the intercept with
    breakpoints where a point sits exactly on its margin; the minimum is
    attained on an interval of breakpoints and we return its midpoint.
    """
    scores = x @ w
    candidates = np.unique(y - scores)
    totals = np.array(
        [np.clip(1.0 - y * (scores + b), 0.0, None).sum() for b in candidates]
    )
    best = totals.min()
    at_best = np.flatnonzero(totals <= best + 1e-12 * (1.0 + best))
    return float(0.5 * (candidates[at_best[0]] + candidates[at_best[-1]]))


def _svm_dual_qp(x: np.ndarray, y: np.ndarray, c: float, reltol: float) -> np.ndarray:
    """Box-constrained dual of the soft-margin problem via interior point."""
    n = x.shape[0]
    gram = (x @ x.T) * np.outer(y, y)
    # hair of diagonal jitter so the factorization never meets an exactly
    # singular matrix; the certificate below is computed jitter-free
    jitter = 1e-12 * max(float(np.mean(np.diag(gram))), 1e-30)
    p_mat = cvxopt.matrix(gram + jitter * np.eye(n))
    q_vec = cvxopt.matrix(-np.ones(n))
    g_mat = cvxopt.matrix(np.vstack([-np.eye(n), np.eye(n)]))
    h_vec = cvxopt.matrix(np.concatenate([np.zeros(n), np.full(n, c)]))
    a_mat = cvxopt.matrix(y.reshape(1, -1))
    b_vec = cvxopt.matrix(np.zeros(1))
    options = {
        "show_progress": False,
        "abstol": 1e-12,
        "reltol": reltol,
        "feastol": 1e-12,
        "maxiters": 300,
    }
    sol = cvxopt.solvers.qp(p_mat, q_vec, g_mat, h_vec, a_mat, b_vec, options=options)
    return np.clip(np.asarray(sol["x"]).ravel(), 0.0, c)


def _margin_snap(x: np.ndarray, y: np.ndarray, w: np.ndarray, b: float, window: float = 1e-4):
    """Minimal-norm correction putting near-margin points exactly on margin.

    An interior-point dual answer leaves those margins off by a whisker, which
    the hinge term amplifies by C; the exact snap removes that error at
    negligible cost to the regularizer term.
    """
    margins = y * (x @ w + b)
    on = np.abs(margins - 1.0) < window
    if not on.any():
        return None
    a_mat = np.column_stack([y[on, None] * x[on], y[on]])
    delta, *_ = np.linalg.lstsq(a_mat, 1.0 - margins[on], rcond=None)
    return w + delta[:-1], b + delta[-1]


def fit_linear_svm(data: LabeledDataset, c: float, max_refits: int = 3) -> LinearClassifier:
    """Soft-margin linear support vector machine.

    The dual quadratic program is solved by interior point, the hyperplane is
    polished by snapping free support vectors onto their margins, and the fit
    is accepted only once the duality gap between the returned hyperplane's
    primal objective (with exactly re-optimized intercept) and the dual value
    drops below 1e-6 of the objective, so the result is a certified optimum.

    Raises
    ------
    NotConverged
        If the gap target cannot be certified.
    """
    if c <= 0:
        raise ValueError("C must be positive")
    classes = data.class_labels
    if classes.size != 2:
        raise ValueError("linear SVM requires exactly two classes")
    x = data.features
    y = np.where(data.labels == classes[1], 1.0, -1.0)
    reltol = 1e-10
    for _ in range(max_refits):
        alpha = _svm_dual_qp(x, y, c, reltol)
        w0 = (alpha * y) @ x
        dual = float(alpha.sum()) - 0.5 * float(alpha @ (y * (x @ w0)))
        best = None
        w, intercept = w0, _optimal_intercept(x, y, w0) if np.any(w0) else 0.0
        for _snap_round in range(4):
            if not np.any(w):
                break
            hinge = float(np.clip(1.0 - y * (x @ w + intercept), 0.0, None).sum())
            primal = 0.5 * float(w @ w) + c * hinge
            if best is None or primal < best[0]:
                best = (primal, w, intercept)
            if primal - dual <= 1e-7 * max(primal, 1e-12):
                break
            snapped = _margin_snap(x, y, w, intercept)
            if snapped is None:
                break
            w = snapped[0]
            intercept = _optimal_intercept(x, y, w)
        if best is not None:
            primal, w, intercept = best
            if primal - dual <= 1e-6 * max(primal, 1e-12):
                return LinearClassifier(w, -intercept, classes=(classes[0], classes[1]))
        reltol *= 1e-2
    raise NotConverged("duality gap target not reached")


@dataclass(frozen=True)
class OneVsRestModel:
    """Multi-class reduction: one binary classifier per class, argmax decision."""

    classifiers: tuple
    classes: np.ndarray

    def predict(self, x) -> np.ndarray:
        scores = np.column_stack([clf.decision(x) for clf in self.classifiers])
        return self.classes[np.argmax(scores, axis=1)]


def fit_one_vs_rest(data: LabeledDataset, fit_binary, **kwargs) -> OneVsRestModel:
    """Fit ``fit_binary`` once per class against the rest (labels -1/+1)."""
    classes = data.class_labels
    clfs = []
    for c in classes:
        y_bin = np.where(data.labels == c, 1, -1)
        clfs.append(fit_binary(LabeledDataset(data.features, y_bin), **kwargs))
    return OneVsRestModel(tuple(clfs), classes)


@dataclass
class SeparabilityResult:
    """Outcome of the exact separability decision.

    Separable: ``witness`` strictly separates the sets with margin > 0.
    Inseparable: ``alpha`` and ``beta`` are convex weights whose combinations
    of the two point sets coincide (hull-intersection certificate).
    """

    separable: bool
    witness: LinearClassifier | None = None
    alpha: np.ndarray | None = None
    beta: np.ndarray | None = None
    margin: float = 0.0
    residual: float = float("nan")


def check_linear_separability(a, b) -> SeparabilityResult:
    """Decide whether two finite point sets are strictly linearly separable.

    Separability of finite sets is equivalent to their convex hulls being
    disjoint, so the decision is a hull-intersection feasibility LP; if the
    hulls are disjoint, a maximum-margin LP (sup-norm bounded weights)
    produces the separating witness.

    Raises
    ------
    DimensionMismatch
        If the two sets live in different feature dimensions.
    """
    p = np.atleast_2d(np.asarray(a, dtype=np.float64))
    q = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if p.size == 0 or q.size == 0:
        raise ValueError("point sets must be nonempty")
    if p.shape[1] != q.shape[1]:
        raise DimensionMismatch(f"dimensions {p.shape[1]} and {q.shape[1]} differ")
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
        raise ValueError("points must be finite")
    n_p, n_q, d = p.shape[0], q.shape[0], p.shape[1]

    # hull intersection: alpha, beta >= 0, each summing to 1, equal combinations
    a_eq = np.zeros((d + 2, n_p + n_q))
    a_eq[:d, :n_p] = p.T
    a_eq[:d, n_p:] = -q.T
    a_eq[d, :n_p] = 1.0
    a_eq[d + 1, n_p:] = 1.0
    b_eq = np.concatenate([np.zeros(d), [1.0, 1.0]])
    feas = linprog(
        c=np.zeros(n_p + n_q), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs"
    )

    if feas.status == 0:
        alpha, beta, residual = _polish_certificate(p, q, feas.x)
        return SeparabilityResult(False, alpha=alpha, beta=beta, residual=residual)

    # disjoint hulls: find the max-margin witness under a sup-norm weight box
    n_rows = n_p + n_q
    a_ub = np.zeros((n_rows, d + 2))
    a_ub[:n_p, :d] = p
    a_ub[:n_p, d] = -1.0
    a_ub[n_p:, :d] = -q
    a_ub[n_p:, d] = 1.0
    a_ub[:, d + 1] = 1.0
    bounds = [(-1.0, 1.0)] * d + [(None, None), (0.0, None)]
    wit = linprog(
        c=np.concatenate([np.zeros(d + 1), [-1.0]]),
        A_ub=a_ub,
        b_ub=np.zeros(n_rows),
        bounds=bounds,
        method="highs",
    )
    if wit.status != 0 or wit.x[d + 1] <= 0.0:
        raise NotConverged("witness LP disagreed with the feasibility decision")
    w, bias, margin = wit.x[:d], wit.x[d], wit.x[d + 1]
    return SeparabilityResult(
        True, witness=LinearClassifier(w, float(bias)), margin=float(margin)
    )


def _polish_certificate(p: np.ndarray, q: np.ndarray, z0: np.ndarray):
    """Refine LP-feasible convex weights with a nonnegative least-squares solve."""
    n_p, d = p.shape
    n_q = q.shape[0]
    scale = max(1.0, float(np.max(np.abs(p))), float(np.max(np.abs(q))))
    m = np.zeros((d + 2, n_p + n_q))
    m[:d, :n_p] = p.T / scale
    m[:d, n_p:] = -q.T / scale
    m[d, :n_p] = 1.0
    m[d + 1, n_p:] = 1.0
    rhs = np.concatenate([np.zeros(d), [1.0, 1.0]])
    z, _ = nnls(m, rhs, maxiter=10 * (n_p + n_q) * max(d, 10))
    candidates = [z, z0]
    best = None
    for cand in candidates:
        alpha, beta = cand[:n_p], cand[n_p:]
        sa, sb = alpha.sum(), beta.sum()
        if sa <= 0 or sb <= 0:
            continue
        alpha, beta = alpha / sa, beta / sb
        residual = float(np.linalg.norm(p.T @ alpha - q.T @ beta))
        if best is None or residual < best[2]:
            best = (alpha, beta, residual)
    return best


def _stratified_folds(labels: np.ndarray, folds: int, rng: np.random.Generator):
    """Seeded stratified fold assignment; returns an int fold id per sample."""
    assignment = np.empty(labels.size, dtype=np.int64)
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        idx = idx[rng.permutation(idx.size)]
        assignment[idx] = np.arange(idx.size) % folds
    return assignment


def _error_rate(predicted: np.ndarray, truth: np.ndarray) -> float:
    return float(np.mean(np.asarray(predicted) != np.asarray(truth)))


def _cohen_kappa(predicted: np.ndarray, truth: np.ndarray) -> float:
    labels = np.unique(np.concatenate([np.asarray(predicted), np.asarray(truth)]))
    p_o = float(np.mean(predicted == truth))
    p_e = 0.0
    for c in labels:
        p_e += np.mean(predicted == c) * np.mean(truth == c)
    if abs(1.0 - p_e) < 1e-15:
        return 0.0
    return float((p_o - p_e) / (1.0 - p_e))


def _fit_lda_any(data: LabeledDataset, shrinkage: float = 1e-3):
    if data.class_labels.size == 2:
        return fit_fisher_lda(data, shrinkage)
    return fit_one_vs_rest(data, fit_fisher_lda, shrinkage=shrinkage)


def _fit_svm_any(data: LabeledDataset, c: float):
    if data.class_labels.size == 2:
        return fit_linear_svm(data, c)
    return fit_one_vs_rest(data, fit_linear_svm, c=c)


def _fit_plda_clamped(data: LabeledDataset, alpha: float, k: int = 2, ridge: float = 1e-3):
    _, eigvecs, nontrivial = _plda_eigendirections(data, alpha, ridge)
    if nontrivial < 1:
        raise BadRank("no nontrivial discriminant directions")
    k_use = min(k, nontrivial, data.n_features)
    return _plda_from_directions(data, eigvecs[:, :k_use], alpha)


def _fit_with_selection(train: LabeledDataset, method: str, param_grid, seed_material):
    """Fit on a training split, sweeping parameters by inner 5-fold validation.

    Pure function of the training rows and the seed material, so test rows
    can never influence the fitted model or the chosen parameter.
    """
    if method == "lda":
        return _fit_lda_any(train), {}

    if method == "svm":
        grid = sorted(param_grid.get("C", DEFAULT_SVM_GRID)) if param_grid else sorted(DEFAULT_SVM_GRID)
        fit = _fit_svm_any
        name = "C"
    elif method == "plda":
        grid = sorted(param_grid.get("alpha", DEFAULT_PLDA_GRID)) if param_grid else sorted(DEFAULT_PLDA_GRID)
        fit = _fit_plda_clamped
        name = "alpha"
    else:
        raise ValueError(f"unknown method {method!r}")

    if len(grid) == 1:
        return fit(train, grid[0]), {name: grid[0]}

    rng = np.random.default_rng(np.random.SeedSequence(seed_material))
    counts = np.array([np.sum(train.labels == c) for c in train.class_labels])
    inner_folds = int(min(5, counts.min()))
    if inner_folds < 2:
        # not enough rows per class to validate; smallest parameter wins
        return fit(train, grid[0]), {name: grid[0]}
    assignment = _stratified_folds(train.labels, inner_folds, rng)

    best_value, best_error = None, np.inf
    for value in grid:
        errors = []
        for j in range(inner_folds):
            fit_rows = assignment != j
            val_rows = assignment == j
            model = fit(train.subset(fit_rows), value)
            errors.append(
                _error_rate(model.predict(train.features[val_rows]), train.labels[val_rows])
            )
        mean_err = float(np.mean(errors))
        if mean_err < best_error - 1e-12:
            best_error, best_value = mean_err, value
    return fit(train, best_value), {name: best_value}


def cross_validate(
    data: LabeledDataset,
    method: str,
    folds: int = 5,
    param_grid: dict | None = None,
    seed: int = 0,
) -> CvReport:
    """Stratified k-fold (or leave-one-out) evaluation of one classifier.

    SVM and PLDA sweep their parameter on a nested 5-fold split of each
    training portion; Fisher LDA has no parameter and skips the sweep.
    Deterministic given the seed.

    Raises
    ------
    TooFewSamples
        If stratified folding is impossible for some class.
    """
    n = data.n_samples
    loo = folds == n
    if folds < 2:
        raise ValueError("folds must be at least 2")
    if not loo:
        counts = [np.sum(data.labels == c) for c in data.class_labels]
        if min(counts) < folds:
            raise TooFewSamples(
                f"smallest class has {min(counts)} samples for {folds} folds"
            )
    rng = np.random.default_rng(np.random.SeedSequence([seed, n]))
    if loo:
        assignment = np.arange(n)
    else:
        assignment = _stratified_folds(data.labels, folds, rng)

    fold_test_errors, fold_train_errors, chosen = [], [], []
    pooled_pred, pooled_truth = [], []
    for j in range(folds):
        train_rows = assignment != j
        test_rows = assignment == j
        train = data.subset(train_rows)
        model, params = _fit_with_selection(train, method, param_grid, [seed, 1 + j])
        train_pred = model.predict(train.features)
        test_pred = model.predict(data.features[test_rows])
        fold_train_errors.append(_error_rate(train_pred, train.labels))
        fold_test_errors.append(_error_rate(test_pred, data.labels[test_rows]))
        chosen.append(params)
        pooled_pred.append(test_pred)
        pooled_truth.append(data.labels[test_rows])

    pooled_pred = np.concatenate(pooled_pred)
    pooled_truth = np.concatenate(pooled_truth)
    return CvReport(
        per_fold_errors=fold_test_errors,
        per_fold_train_errors=fold_train_errors,
        chosen_params=chosen,
        mean_train_error=float(np.mean(fold_train_errors)),
        mean_test_error=float(np.mean(fold_test_errors)),
        cohen_kappa=_cohen_kappa(pooled_pred, pooled_truth),
    )


def project_2d(
    data: LabeledDataset, train_idx, alpha: float = 0.1, ridge: float = 1e-3
) -> np.ndarray:
    """Two-dimensional discriminant embedding fit on training rows only;
    every row (train and test alike) is projected."""
    train_idx = np.asarray(train_idx, dtype=np.int64)
    if train_idx.size == 0:
        raise ValueError("train_idx must be nonempty")
    if train_idx.min() < 0 or train_idx.max() >= data.n_samples:
        raise ValueError("train_idx out of range")
    model = _fit_plda_clamped(data.subset(train_idx), alpha=alpha, k=2, ridge=ridge)
    z = model.project(data.features)
    if z.shape[1] < 2:
        z = np.column_stack([z, np.zeros(z.shape[0])])
    return z
