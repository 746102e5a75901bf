"""Antenna-position optimizers: greedy grid placement, gradient refinement,
their two-stage combination, exhaustive grid search, and the half-wavelength
baseline.

The first antenna is pinned at the origin; the remaining ones live on
P = [-d_max, -d_min] u [d_min, d_max] subject to pairwise spacing limits.
All optimizers are deterministic: grid scans run in ascending position order
and keep the first maximizer.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import (
    FEASIBILITY_TOL,
    TWO_PI,
    ArrayGeometry,
    CouplingMatrix,
    DirectionCosine,
    SingularCouplingError,
    _as_u,
    _directivity_raw,
    _solve_gram,
    coupling_matrix,
    pairwise_feasible,
    sinc_coupling,
    sinc_spacing_derivative,
    steering_vector,
)

_ES_CHUNK = 4096
DEFAULT_ES_BUDGET = 50_000_000


class InvalidGridError(ValueError):
    """Grid parameters violate 0 < d_g < d_min < d_max."""


class GridExhaustedError(Exception):
    """No feasible grid point remained for some antenna; the run has no output."""


class BudgetExceededError(Exception):
    """Exhaustive enumeration would exceed the configured evaluation budget."""


class InfeasibleStartError(Exception):
    """Gradient descent was handed an infeasible initial geometry."""


class Termination(enum.Enum):
    MAX_ITERS = "MaxIters"
    STEP_FLOOR = "StepFloor"
    GRID_EXHAUSTED = "GridExhausted"


@dataclass(frozen=True)
class TraceStep:
    """One optimizer step: iteration counter, objective, accepted step size."""

    iteration: int
    directivity: float
    step_size: float | None = None


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Uniform candidate grid over [-d_max, -d_min] u [d_min, d_max].

    Both signs carry the same points mirrored, each side starting at the
    inner endpoint d_min and stepping by d_g up to d_max.
    """

    d_min: float
    d_max: float
    d_g: float
    points: np.ndarray

    @property
    def m(self) -> int:
        return int(self.points.size)


def build_grid(d_min: float, d_max: float, d_g: float) -> GridSpec:
    """Enumerate the mirrored candidate grid; inner endpoints always included."""
    if not (0.0 < d_g < d_min < d_max):
        raise InvalidGridError(
            f"need 0 < d_g < d_min < d_max, got d_g={d_g}, d_min={d_min}, d_max={d_max}"
        )
    count = int(math.floor((d_max - d_min) / d_g + 1e-9)) + 1
    side = d_min + d_g * np.arange(count)
    # The outermost point may overshoot d_max by an ulp when the span divides
    # the step exactly; clamp so |p| <= d_max holds as stated.
    side = np.minimum(side, d_max)
    points = np.concatenate([-side[::-1], side])
    points.flags.writeable = False
    return GridSpec(d_min=d_min, d_max=d_max, d_g=d_g, points=points)


@dataclass(frozen=True)
class OptimizerConfig:
    """Problem size, target direction, grid, and gradient-stage knobs."""

    n_antennas: int
    u: DirectionCosine
    grid: GridSpec
    max_iters: int = 5
    alpha0: float = 1.0
    epsilon: float = 1e-3
    rng_seed: int = 0  # reserved for random-restart extensions; unused here

    def __post_init__(self) -> None:
        if isinstance(self.u, (int, float)):
            object.__setattr__(self, "u", DirectionCosine(float(self.u)))
        if self.n_antennas < 2:
            raise ValueError(f"need at least two antennas, got {self.n_antennas}")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if not (0.0 < self.epsilon < self.alpha0):
            raise ValueError(
                f"need 0 < epsilon < alpha0, got epsilon={self.epsilon}, alpha0={self.alpha0}"
            )


@dataclass(frozen=True, eq=False)
class OptResult:
    """Optimized geometry with its objective, step trace, and stop reason."""

    geometry: ArrayGeometry
    directivity: float
    trace: tuple[TraceStep, ...]
    termination: Termination


def ulah_positions(n_antennas: int, d_min: float = 0.1, d_max: float = 4.0) -> ArrayGeometry:
    """Half-wavelength uniform array [0, 0.5, ...]; its coupling matrix is I."""
    if n_antennas < 1:
        raise ValueError(f"need at least one antenna, got {n_antennas}")
    return ArrayGeometry(0.5 * np.arange(n_antennas), d_min=d_min, d_max=d_max)


def _batch_directivity(rows: np.ndarray, u: float) -> np.ndarray:
    """Directivity of many candidate geometries (rows) toward u.

    Batched Cholesky plus forward substitution; falls back to the robust
    one-geometry path if any candidate in the batch fails to factor, scoring
    truly singular candidates -inf so scans skip them.
    """
    x = np.asarray(rows, dtype=float)
    gram = sinc_coupling(2.0 * np.abs(x[:, :, None] - x[:, None, :]))
    a = np.exp(-1j * TWO_PI * u * x)
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError:
        out = np.empty(x.shape[0])
        for i, row in enumerate(x):
            try:
                out[i] = _directivity_raw(row, u)
            except SingularCouplingError:
                out[i] = -np.inf
        return out
    n = x.shape[1]
    y = np.empty(a.shape, dtype=complex)
    for i in range(n):
        acc = a[:, i].copy()
        if i:
            acc -= np.einsum("bk,bk->b", chol[:, i, :i], y[:, :i])
        y[:, i] = acc / chol[:, i, i]
    return np.sum(np.abs(y) ** 2, axis=1)


def greedy_search(cfg: OptimizerConfig) -> OptResult:
    """Place antennas one at a time on the best feasible grid point.

    Step n fixes the first n positions and scans every grid point satisfying
    the pairwise limits against them, keeping the first maximizer of the
    (n+1)-element directivity in ascending grid order.  The trace records the
    best sub-array directivity per step (non-decreasing, since each added
    effective pattern contributes a non-negative term).
    """
    u = _as_u(cfg.u)
    grid = cfg.grid
    placed = np.zeros(1)
    trace: list[TraceStep] = []
    for step in range(1, cfg.n_antennas):
        gaps = np.abs(grid.points[:, None] - placed[None, :])
        feasible = np.all(
            (gaps >= grid.d_min - FEASIBILITY_TOL) & (gaps <= grid.d_max + FEASIBILITY_TOL),
            axis=1,
        )
        candidates = grid.points[feasible]
        if candidates.size == 0:
            raise GridExhaustedError(
                f"no feasible grid point for antenna {step + 1} of {cfg.n_antennas}"
            )
        rows = np.hstack(
            [np.tile(placed, (candidates.size, 1)), candidates[:, None]]
        )
        values = _batch_directivity(rows, u)
        best = int(np.argmax(values))
        if not np.isfinite(values[best]):
            raise GridExhaustedError(
                f"all feasible candidates singular at antenna {step + 1}"
            )
        placed = np.append(placed, candidates[best])
        trace.append(TraceStep(iteration=step, directivity=float(values[best])))
    geometry = ArrayGeometry(placed, d_min=grid.d_min, d_max=grid.d_max)
    return OptResult(
        geometry=geometry,
        directivity=trace[-1].directivity,
        trace=tuple(trace),
        termination=Termination.MAX_ITERS,
    )


def directivity_gradient(
    u, geom: ArrayGeometry, coupling: CouplingMatrix | None = None
) -> np.ndarray:
    """Partial derivatives of the directivity w.r.t. each position.

    Entry 0 is pinned to zero (translation gauge).  With adot = R^-1 a, entry
    n is 2 Re(conj(adot_n) da_n/dx_n) minus the quadratic form of adot with
    the one-row/column derivative of the coupling matrix, whose off-diagonal
    entries are d/dx_n sinc(2 (x_n - x_m)).
    """
    if coupling is None:
        coupling = coupling_matrix(geom)
    uu = _as_u(u)
    x = geom.positions
    a = steering_vector(uu, geom)
    adot = _solve_gram(coupling.chol, a)
    da = -1j * TWO_PI * uu * a
    term_steer = 2.0 * np.real(np.conj(adot) * da)
    deriv = sinc_spacing_derivative(x[:, None] - x[None, :])
    np.fill_diagonal(deriv, 0.0)
    term_coupling = 2.0 * np.real(np.conj(adot) * (deriv @ adot))
    grad = term_steer - term_coupling
    grad[0] = 0.0
    return grad


def gradient_descent(u, initial: ArrayGeometry, cfg: OptimizerConfig) -> OptResult:
    """Backtracking gradient ascent from a feasible start.

    Each outer iteration resets the step size to alpha0, proposes
    x + alpha * grad (first coordinate frozen), and accepts only candidates
    that are feasible and strictly improve the objective; otherwise alpha is
    halved until it drops below epsilon, which ends the run at the current
    iterate.
    """
    if not initial.is_feasible():
        raise InfeasibleStartError("initial geometry violates the spacing limits")
    uu = _as_u(u)
    d_min, d_max = initial.d_min, initial.d_max
    x = initial.positions.copy()
    current = _directivity_raw(x, uu)
    trace = [TraceStep(iteration=0, directivity=current)]
    for t in range(cfg.max_iters):
        geom = ArrayGeometry(x, d_min=d_min, d_max=d_max)
        grad = directivity_gradient(uu, geom)
        alpha = cfg.alpha0
        while True:
            candidate = x + alpha * grad
            if pairwise_feasible(candidate, d_min, d_max):
                try:
                    value = _directivity_raw(candidate, uu)
                except SingularCouplingError:
                    value = -np.inf
                if value > current:
                    x, current = candidate, value
                    trace.append(
                        TraceStep(iteration=t + 1, directivity=current, step_size=alpha)
                    )
                    break
            alpha *= 0.5
            if alpha < cfg.epsilon:
                return OptResult(
                    geometry=ArrayGeometry(x, d_min=d_min, d_max=d_max),
                    directivity=current,
                    trace=tuple(trace),
                    termination=Termination.STEP_FLOOR,
                )
    return OptResult(
        geometry=ArrayGeometry(x, d_min=d_min, d_max=d_max),
        directivity=current,
        trace=tuple(trace),
        termination=Termination.MAX_ITERS,
    )


def gs_gd(cfg: OptimizerConfig) -> OptResult:
    """Greedy grid placement followed by gradient refinement of its output."""
    coarse = greedy_search(cfg)
    refined = gradient_descent(cfg.u, coarse.geometry, cfg)
    offset = coarse.trace[-1].iteration
    trace = coarse.trace + tuple(
        TraceStep(
            iteration=offset + step.iteration,
            directivity=step.directivity,
            step_size=step.step_size,
        )
        for step in refined.trace
        if step.iteration > 0
    )
    return OptResult(
        geometry=refined.geometry,
        directivity=refined.directivity,
        trace=trace,
        termination=refined.termination,
    )


def exhaustive_search(cfg: OptimizerConfig, max_configs: int = DEFAULT_ES_BUDGET) -> OptResult:
    """Global grid optimum over all sorted feasible N-1 point combinations.

    The combination count C(M, N-1) is estimated up front and the run refused
    when it exceeds max_configs.  Ties go to the lexicographically smallest
    tuple (enumeration order plus strict improvement).
    """
    grid = cfg.grid
    k = cfg.n_antennas - 1
    estimate = math.comb(grid.m, k)
    if estimate > max_configs:
        raise BudgetExceededError(
            f"{estimate} grid combinations exceed the budget of {max_configs}"
        )
    u = _as_u(cfg.u)
    best_value = -np.inf
    best_row: np.ndarray | None = None

    def consume(block: list[tuple[int, ...]]) -> None:
        nonlocal best_value, best_row
        chosen = grid.points[np.asarray(block)]
        rows = np.hstack([np.zeros((chosen.shape[0], 1)), chosen])
        gaps = np.abs(rows[:, :, None] - rows[:, None, :])
        off = ~np.eye(cfg.n_antennas, dtype=bool)
        ok = np.all(
            ((gaps >= grid.d_min - FEASIBILITY_TOL) & (gaps <= grid.d_max + FEASIBILITY_TOL))[
                :, off
            ],
            axis=1,
        )
        if not np.any(ok):
            return
        rows = rows[ok]
        values = _batch_directivity(rows, u)
        local = int(np.argmax(values))
        if values[local] > best_value:
            best_value = float(values[local])
            best_row = rows[local]

    block: list[tuple[int, ...]] = []
    for combo in itertools.combinations(range(grid.m), k):
        block.append(combo)
        if len(block) == _ES_CHUNK:
            consume(block)
            block = []
    if block:
        consume(block)
    if best_row is None:
        raise GridExhaustedError("no feasible grid combination exists")
    geometry = ArrayGeometry(best_row, d_min=grid.d_min, d_max=grid.d_max)
    return OptResult(
        geometry=geometry,
        directivity=best_value,
        trace=(TraceStep(iteration=0, directivity=best_value),),
        termination=Termination.MAX_ITERS,
    )
