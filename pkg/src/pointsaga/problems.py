"""Concrete component families, synthetic generators with planted solutions,
and ingestion of sparse classification data.

Generators rescale their data so the shared (mu, L) pair is tight for every
component; ingested data keeps its scale and gets a conservative L instead.
All generators are deterministic functions of their spec (same seed, same
problem to the last bit).
"""

from dataclasses import dataclass, replace

import numpy as np

from .analysis import reference_solution
from .errors import EmptyFile, InconsistentDimension, InvalidSpec, ParseError
from .model import ComponentFunction, assemble_problem
from .prox import (
    prox_generic,
    prox_logistic_ridge,
    prox_rank_one_quadratic,
    sigmoid,
    ProxResult,
)


class QuadraticComponent(ComponentFunction):
    """f(x) = (x - c)' A (x - c) / 2 with A = Q diag(eig) Q'.

    The prox solves (I + gamma A) x = z + gamma A c through the
    eigendecomposition, so it works in any float dtype (including
    longdouble) and costs one cached d-by-d matvec per call.
    """

    analytic = True

    def __init__(self, Q, eig, c):
        self.Q = np.asarray(Q)
        self.eig = np.asarray(eig)
        self.c = np.asarray(c)
        self.A = (self.Q * self.eig) @ self.Q.T
        self._Ac = self.A @ self.c
        self._cache_gamma = None
        self._cache_M = None

    def value(self, x):
        d = x - self.c
        return 0.5 * (d @ (self.A @ d))

    def gradient(self, x):
        return self.A @ x - self._Ac

    def quadratic_terms(self):
        """(H, r) with grad f(x) = H x - r."""
        return self.A, self._Ac

    def _resolvent(self, gamma):
        if self._cache_gamma != gamma:
            self._cache_M = (self.Q * (1.0 / (1.0 + gamma * self.eig))) @ self.Q.T
            self._cache_gamma = gamma
        return self._cache_M

    def prox(self, gamma, z):
        M = self._resolvent(gamma)
        x = M @ (z + gamma * self._Ac)
        defect = x + gamma * (self.A @ x - self._Ac) - z
        return ProxResult(x, np.sqrt(defect @ defect))


class RankOneRidgeComponent(ComponentFunction):
    """f(x) = (a'x - y)^2 / 2 + mu_reg ||x||^2 / 2; O(d) closed-form prox."""

    analytic = True

    def __init__(self, a, y, mu_reg):
        self.a = np.asarray(a)
        self.y = y
        self.mu_reg = mu_reg

    def value(self, x):
        r = self.a @ x - self.y
        return 0.5 * r * r + 0.5 * self.mu_reg * (x @ x)

    def gradient(self, x):
        return self.a * (self.a @ x - self.y) + self.mu_reg * x

    def quadratic_terms(self):
        d = self.a.shape[0]
        H = np.outer(self.a, self.a) + self.mu_reg * np.eye(d, dtype=self.a.dtype)
        return H, self.y * self.a

    def prox(self, gamma, z):
        return prox_rank_one_quadratic(self.a, self.y, self.mu_reg, gamma, z)


class LogisticRidgeComponent(ComponentFunction):
    """f(x) = log(1 + exp(-y a'x)) + mu_reg ||x||^2 / 2, y in {-1, +1}."""

    analytic = False

    def __init__(self, a, y, mu_reg, tol=1e-12):
        self.a = np.asarray(a, dtype=float)
        self.y = float(y)
        self.mu_reg = mu_reg
        self.tol = tol

    def value(self, x):
        margin = -self.y * (self.a @ x)
        return np.logaddexp(0.0, margin) + 0.5 * self.mu_reg * (x @ x)

    def gradient(self, x):
        s = sigmoid(-self.y * float(self.a @ x))
        return -self.y * s * self.a + self.mu_reg * x

    def prox(self, gamma, z):
        return prox_logistic_ridge(self.a, self.y, self.mu_reg, gamma, z, self.tol)


class GenericComponent(ComponentFunction):
    """Component from bare value/gradient callables; prox by inner descent."""

    analytic = False

    def __init__(self, value_fn, grad_fn, mu, L, tol=1e-10):
        self._value = value_fn
        self._grad = grad_fn
        self.mu = mu
        self.L = L
        self.tol = tol

    def value(self, x):
        return self._value(x)

    def gradient(self, x):
        return self._grad(x)

    def prox(self, gamma, z):
        return prox_generic(self, gamma, z, self.tol, self.mu, self.L)


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for a synthetic problem family."""

    family: str
    n: int
    dim: int
    mu: float
    L: float
    seed: int = 0

    def __post_init__(self):
        if self.family not in ("quadratic", "ridge_regression", "logistic_ridge"):
            raise InvalidSpec(f"unknown family {self.family!r}")
        if self.n < 1 or self.dim < 1:
            raise InvalidSpec(f"need n >= 1 and dim >= 1, got n={self.n}, dim={self.dim}")
        if not (0 < self.mu <= self.L):
            raise InvalidSpec(f"need 0 < mu <= L, got mu={self.mu}, L={self.L}")


@dataclass(frozen=True, eq=False)
class Dataset:
    """Dense feature rows plus labels (+-1 for classification)."""

    rows: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows)
        if rows.ndim != 2:
            raise InconsistentDimension("rows must form a dense n-by-d matrix")
        if rows.shape[0] != np.asarray(self.labels).shape[0]:
            raise InconsistentDimension("rows and labels disagree in length")
        if not np.all(np.isfinite(rows)):
            raise InconsistentDimension("rows contain non-finite entries")


def _attach_solution(problem, x_star):
    return replace(problem, known_solution=x_star)


def gen_quadratic(spec, dtype=np.float64):
    """Random-rotation quadratics: f_i(x) = (x - c_i)' A_i (x - c_i) / 2.

    Each spectrum contains both mu and L (so the shared constants are tight),
    with interior eigenvalues uniform in [mu, L]. The minimizer is planted by
    solving sum_i A_i x = sum_i A_i c_i directly. dim = 1 therefore needs
    mu = L. Draws happen in float64 and are cast to dtype afterwards, so one
    seed describes the same problem at every precision.
    """
    if spec.family != "quadratic":
        raise InvalidSpec(f"expected family 'quadratic', got {spec.family!r}")
    if spec.dim == 1 and spec.mu != spec.L:
        raise InvalidSpec("dim=1 cannot contain both spectrum endpoints unless mu == L")
    rng = np.random.default_rng(spec.seed)
    comps = []
    for _ in range(spec.n):
        G = rng.normal(size=(spec.dim, spec.dim))
        Q, R = np.linalg.qr(G)
        Q = Q * np.sign(np.diag(R))
        if spec.dim == 1:
            eig = np.array([spec.mu])
        else:
            eig = np.concatenate(
                [[spec.mu, spec.L], rng.uniform(spec.mu, spec.L, size=spec.dim - 2)]
            )
        c = rng.normal(size=spec.dim)
        comps.append(
            QuadraticComponent(Q.astype(dtype), eig.astype(dtype), c.astype(dtype))
        )
    problem = assemble_problem(comps, spec.mu, spec.L, spec.dim)
    x_star, _ = reference_solution(problem)
    return _attach_solution(problem, x_star)


def gen_ridge_regression(spec, dtype=np.float64):
    """Per-sample ridge regression with rows rescaled so ||a_i||^2 = L - mu.

    Each Hessian a_i a_i' + mu I then has spectrum {mu, ..., mu, L}: the
    shared constants are exact per component. Needs mu < L strictly.
    """
    if spec.family != "ridge_regression":
        raise InvalidSpec(f"expected family 'ridge_regression', got {spec.family!r}")
    if not spec.mu < spec.L:
        raise InvalidSpec("ridge family needs mu < L to leave room for the data term")
    rng = np.random.default_rng(spec.seed)
    rows = rng.normal(size=(spec.n, spec.dim))
    norms = np.sqrt((rows * rows).sum(axis=1))
    rows = rows * (np.sqrt(spec.L - spec.mu) / norms)[:, None]
    ys = rng.normal(size=spec.n)
    comps = [
        RankOneRidgeComponent(rows[i].astype(dtype), dtype(ys[i]), spec.mu)
        for i in range(spec.n)
    ]
    problem = assemble_problem(comps, spec.mu, spec.L, spec.dim)
    x_star, _ = reference_solution(problem)
    return _attach_solution(problem, x_star)


def gen_logistic_ridge(spec):
    """Ridge-regularized logistic losses with ||a_i||^2 = 4 (L - mu).

    The logistic curvature never exceeds ||a||^2 / 4, so every component is
    exactly L-smooth as a bound and mu-strongly convex from the ridge. The
    minimizer comes from the deterministic reference solve at tol 1e-12.
    """
    if spec.family != "logistic_ridge":
        raise InvalidSpec(f"expected family 'logistic_ridge', got {spec.family!r}")
    if not spec.mu < spec.L:
        raise InvalidSpec("logistic family needs mu < L to leave room for the loss")
    rng = np.random.default_rng(spec.seed)
    rows = rng.normal(size=(spec.n, spec.dim))
    norms = np.sqrt((rows * rows).sum(axis=1))
    rows = rows * (2.0 * np.sqrt(spec.L - spec.mu) / norms)[:, None]
    labels = 2.0 * rng.integers(0, 2, size=spec.n) - 1.0
    comps = [
        LogisticRidgeComponent(rows[i], labels[i], spec.mu) for i in range(spec.n)
    ]
    problem = assemble_problem(comps, spec.mu, spec.L, spec.dim)
    x_star, _ = reference_solution(problem, tol=1e-12)
    return _attach_solution(problem, x_star)


def load_libsvm(path, mu):
    """Read sparse "label idx:val ..." lines into a logistic-ridge problem.

    Indices are 1-based and must increase strictly within each line; '#'
    starts a comment; labels must be +-1. Rows keep their scale, so the
    smoothness constant is the conservative mu + max_i ||a_i||^2 / 4.
    """
    if not mu > 0:
        raise InvalidSpec(f"mu must be > 0, got {mu}")
    sparse_rows = []
    labels = []
    max_idx = 0
    with open(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            try:
                label = float(tokens[0])
            except ValueError:
                raise ParseError(line_no, f"bad label token {tokens[0]!r}") from None
            if label not in (-1.0, 1.0):
                raise ParseError(line_no, f"label must be +-1, got {tokens[0]!r}")
            idxs = []
            vals = []
            prev = 0
            for tok in tokens[1:]:
                try:
                    idx_str, val_str = tok.split(":", 1)
                    idx = int(idx_str)
                    val = float(val_str)
                except ValueError:
                    raise ParseError(line_no, f"bad feature token {tok!r}") from None
                if idx < 1:
                    raise ParseError(line_no, f"index must be >= 1, got {idx}")
                if idx <= prev:
                    raise ParseError(
                        line_no, f"indices must increase strictly, got {idx} after {prev}"
                    )
                if not np.isfinite(val):
                    raise ParseError(line_no, f"non-finite value {val_str!r}")
                idxs.append(idx)
                vals.append(val)
                prev = idx
            max_idx = max(max_idx, prev)
            sparse_rows.append((idxs, vals))
            labels.append(label)
    if not sparse_rows:
        raise EmptyFile(f"{path}: no data lines")
    if max_idx == 0:
        raise EmptyFile(f"{path}: rows carry no features")

    rows = np.zeros((len(sparse_rows), max_idx))
    for i, (idxs, vals) in enumerate(sparse_rows):
        rows[i, np.asarray(idxs, dtype=int) - 1] = vals
    labels = np.asarray(labels)
    dataset = Dataset(rows, labels)

    L = mu + 0.25 * float((rows * rows).sum(axis=1).max())
    comps = [
        LogisticRidgeComponent(rows[i], labels[i], mu) for i in range(rows.shape[0])
    ]
    problem = assemble_problem(comps, mu, L, max_idx)
    return dataset, problem
