"""Finite-sum problem container and the oracle contract for its components.

A problem is ``min_x sum_i f_i(x)`` over R^d where every component is
mu-strongly convex with an L-Lipschitz gradient, sharing one (mu, L) pair.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyComponentList,
    InvalidConstants,
    InvalidKnownSolution,
)

#: Absolute tolerance on ||sum_i grad f_i(x*)|| / n for declared minimizers.
TOL_STAR = 1e-8


class ComponentFunction(ABC):
    """Oracle bundle for one component f_i.

    Implementations must behave as pure functions of their inputs: problems
    are shared freely between threads after assembly. ``prox`` returns a
    :class:`~pointsaga.prox.ProxResult` whose ``point`` minimizes
    ``f(x) + ||x - z||^2 / (2 gamma)``.
    """

    #: True when the prox is a closed form, False for iterative solves.
    analytic = False

    @abstractmethod
    def value(self, x):
        """Objective value f(x)."""

    @abstractmethod
    def gradient(self, x):
        """Gradient of f at x, same shape as x."""

    @abstractmethod
    def prox(self, gamma, z):
        """Proximity operator of gamma * f at z."""


@dataclass(frozen=True, eq=False)
class FiniteSumProblem:
    """n components plus the shared constants of the analysis.

    Attributes
    ----------
    components : tuple of ComponentFunction
    mu : float
        Strong-convexity modulus shared by every component, > 0.
    L : float
        Smoothness constant shared by every component, >= mu.
    dim : int
        Ambient dimension d.
    known_solution : ndarray or None
        Minimizer of the sum, when available. Validated for stationarity.
    """

    components: tuple
    mu: float
    L: float
    dim: int
    known_solution: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if len(self.components) == 0:
            raise EmptyComponentList("need at least one component")
        if not (0 < self.mu <= self.L):
            raise InvalidConstants(f"need 0 < mu <= L, got mu={self.mu}, L={self.L}")
        if self.dim < 1:
            raise InvalidConstants(f"dim must be >= 1, got {self.dim}")
        if self.known_solution is not None:
            xs = np.asarray(self.known_solution)
            if xs.shape != (self.dim,):
                raise DimensionMismatch(
                    f"known_solution has shape {xs.shape}, expected ({self.dim},)"
                )
            g = full_gradient(self, xs)
            norm = float(np.sqrt(np.dot(g, g)))
            if norm > self.n * TOL_STAR:
                raise InvalidKnownSolution(
                    f"||sum grad f_i(x*)|| = {norm:.3e} exceeds n*{TOL_STAR:g}"
                )

    @property
    def n(self):
        return len(self.components)

    def check_point(self, x):
        x = np.asarray(x)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"point has shape {x.shape}, expected ({self.dim},)")
        return x


def assemble_problem(components, mu, L, dim):
    """Validate and pack components into a FiniteSumProblem.

    The known solution is left unset; generators attach it separately.
    """
    return FiniteSumProblem(tuple(components), float(mu), float(L), int(dim))


def full_gradient(problem, x):
    """Gradient of the full objective, sum_i grad f_i(x)."""
    x = problem.check_point(x)
    total = np.zeros_like(x)
    for comp in problem.components:
        total = total + comp.gradient(x)
    return total
