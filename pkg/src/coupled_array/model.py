"""Far-field physics of a mutually coupled linear array of isotropic elements.

All lengths are expressed in wavelengths (the physical wavelength enters only
at I/O boundaries) and directions as the direction cosine u = cos(theta) of
the wave direction against the array axis.  The radiated-power Gram matrix of
the element patterns has entries sinc(2 * spacing) and its triangular factor
turns the steering vector into an orthonormal "effective" steering vector
whose squared norm is the directivity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .quadrature import gauss_legendre

TWO_PI = 2.0 * math.pi

# Spacing comparisons allow this much absolute slack so that grid points that
# are exact multiples of the step in real arithmetic do not fail Eq.-style
# closed-interval checks by one ulp.
FEASIBILITY_TOL = 1e-9

_SINC_SERIES_CUTOFF = 1e-6
# Plain Cholesky of the Gram matrix is trusted only while its smallest pivot
# squared stays above this; below it the pivot is dominated by cancellation
# noise and the factor is recomputed from pattern samples.
_HEALTHY_PIVOT_SQ = 1e-10
_MAX_JITTER = 1e-8
_DEGENERATE_DIAG_RATIO = 1e-14


class SingularCouplingError(Exception):
    """Coupling matrix could not be factorized even with diagonal loading.

    Signals numerically coincident antennas; optimizers treat the offending
    candidate as infeasible.
    """


class DegenerateBasisError(Exception):
    """A Gram-Schmidt normalization denominator vanished (coincident antennas)."""


@dataclass(frozen=True)
class DirectionCosine:
    """Direction cosine u = cos(theta) in [-1, 1]; u=0 broadside, u=+/-1 endfire."""

    u: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.u) or not -1.0 <= self.u <= 1.0:
            raise ValueError(f"direction cosine must lie in [-1, 1], got {self.u}")

    @classmethod
    def from_theta_deg(cls, theta_deg: float) -> "DirectionCosine":
        if not 0.0 <= theta_deg <= 180.0:
            raise ValueError(f"theta must lie in [0, 180] degrees, got {theta_deg}")
        # sin(90 - theta) == cos(theta) but is exact at both 0 and 90 degrees.
        return cls(math.sin(math.radians(90.0 - theta_deg)))

    @property
    def theta_deg(self) -> float:
        return math.degrees(math.acos(self.u))


def _as_u(u) -> float:
    return float(u.u) if isinstance(u, DirectionCosine) else float(u)


@dataclass(frozen=True, eq=False)
class ArrayGeometry:
    """Antenna position vector plus the spacing/aperture limits it must obey.

    Positions are wavelengths.  Optimizer-produced geometries keep the first
    antenna at the origin (translation gauge); the constructor does not force
    that so gauge and permutation invariances stay directly testable.
    Feasibility against the pairwise limits is a query, not a construction
    constraint, so optimizers can probe infeasible candidates.
    """

    positions: np.ndarray
    d_min: float = 0.1
    d_max: float = 4.0

    def __post_init__(self) -> None:
        arr = np.array(self.positions, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("positions must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(arr)):
            raise ValueError("positions must be finite")
        if not (0.0 < self.d_min < self.d_max):
            raise ValueError(
                f"need 0 < d_min < d_max, got d_min={self.d_min}, d_max={self.d_max}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "positions", arr)

    @property
    def n(self) -> int:
        return int(self.positions.size)

    def is_feasible(self) -> bool:
        """True iff every pairwise spacing lies in [d_min, d_max]."""
        return pairwise_feasible(self.positions, self.d_min, self.d_max)


def pairwise_feasible(positions: np.ndarray, d_min: float, d_max: float) -> bool:
    x = np.asarray(positions, dtype=float)
    if x.size < 2:
        return True
    gaps = np.abs(x[:, None] - x[None, :])
    off = gaps[~np.eye(x.size, dtype=bool)]
    return bool(
        np.all(off >= d_min - FEASIBILITY_TOL) and np.all(off <= d_max + FEASIBILITY_TOL)
    )


@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    """Radiated-power Gram matrix R and its lower-triangular factor L.

    L @ L.T reproduces entries + jitter_applied * I; jitter_applied is the
    diagonal loading actually used (0 for the standard paths).
    """

    entries: np.ndarray
    chol: np.ndarray
    jitter_applied: float

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])


@dataclass(frozen=True, eq=False)
class ExcitationVector:
    """Normalized complex excitation weights; norm is their 2-norm (== 1)."""

    weights: np.ndarray
    norm: float


@dataclass(frozen=True, eq=False)
class EffectiveSteering:
    """Orthonormalized steering vector; its squared norm equals the directivity."""

    values: np.ndarray
    squared_norm: float


def sinc_coupling(t):
    """sin(pi t) / (pi t) with the exact value 1 at t = 0.

    Below |t| = 1e-6 the even Taylor series 1 - (pi t)^2/6 + (pi t)^4/120 is
    used instead of the ratio.  Accepts scalars or arrays.
    """
    arr = np.asarray(t, dtype=float)
    pt = np.pi * arr
    small = np.abs(arr) < _SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, pt)
    pt2 = pt * pt
    out = np.where(small, 1.0 - pt2 / 6.0 + pt2 * pt2 / 120.0, np.sin(safe) / safe)
    return float(out) if np.isscalar(t) or arr.ndim == 0 else out


def sinc_spacing_derivative(s):
    """d/ds of sinc(2 s): [cos(2 pi s) - sinc(2 s)] / s, odd, 0 at s = 0.

    Below |s| = 1e-6 the series -(4 pi^2/3) s + (8 pi^4/15) s^3 avoids the
    cancellation between cosine and sinc.
    """
    arr = np.asarray(s, dtype=float)
    small = np.abs(arr) < _SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, arr)
    direct = (np.cos(TWO_PI * safe) - sinc_coupling(2.0 * safe)) / safe
    series = (-4.0 * np.pi**2 / 3.0) * arr + (8.0 * np.pi**4 / 15.0) * arr**3
    out = np.where(small, series, direct)
    return float(out) if np.isscalar(s) or arr.ndim == 0 else out


def steering_vector(u, geom: ArrayGeometry) -> np.ndarray:
    """Unit-modulus phase vector exp(-j 2 pi x_n u) of the array."""
    return _steering_raw(geom.positions, _as_u(u))


def _steering_raw(x: np.ndarray, u: float) -> np.ndarray:
    return np.exp(-1j * TWO_PI * np.asarray(x, dtype=float) * u)


def _coupling_entries(x: np.ndarray) -> np.ndarray:
    # abs() of the pairwise gaps makes symmetry and the unit diagonal bit-exact.
    gaps = np.abs(x[None, :] - x[:, None])
    return sinc_coupling(2.0 * gaps)


def _sample_factor(x: np.ndarray) -> np.ndarray | None:
    """Triangular factor of the Gram matrix via QR of weighted pattern samples.

    Factoring the Gauss-Legendre sample matrix instead of the assembled Gram
    matrix works on the square root of the condition number, which keeps the
    tiny trailing pivots of near-superdirective arrays accurate where a plain
    Cholesky of the entries loses them to cancellation.  Returns None when
    the columns are numerically dependent (coincident antennas).
    """
    span = float(np.max(x) - np.min(x)) if x.size > 1 else 0.0
    q = max(256, 8 * int(math.ceil(span)) + 64)
    nodes, weights = gauss_legendre(q)
    samples = np.exp(-1j * TWO_PI * np.outer(nodes, x))
    samples *= np.sqrt(weights / 2.0)[:, None]
    r_upper = np.linalg.qr(samples, mode="r")
    diag = np.diagonal(r_upper)
    mags = np.abs(diag)
    if np.min(mags) <= _DEGENERATE_DIAG_RATIO * np.max(mags):
        return None
    # Rotate rows so the diagonal is real positive; the factor of a real Gram
    # matrix is real, any imaginary residue is quadrature/rounding noise.
    r_upper = r_upper * np.conj(diag / mags)[:, None]
    return np.tril(r_upper.conj().T.real)


def _factor(x: np.ndarray, entries: np.ndarray) -> tuple[np.ndarray, float]:
    try:
        chol = np.linalg.cholesky(entries)
        if float(np.min(np.diagonal(chol))) ** 2 >= _HEALTHY_PIVOT_SQ:
            return chol, 0.0
    except np.linalg.LinAlgError:
        pass
    chol = _sample_factor(x)
    if chol is not None:
        return chol, 0.0
    n = entries.shape[0]
    jitter = n * 2.0**-52 * max(1.0, float(np.trace(entries)) / n)
    while jitter <= _MAX_JITTER:
        try:
            chol = np.linalg.cholesky(entries + jitter * np.eye(n))
            return chol, jitter
        except np.linalg.LinAlgError:
            jitter *= 10.0
    raise SingularCouplingError(
        f"coupling matrix not factorizable at diagonal loading up to {_MAX_JITTER}"
    )


def coupling_matrix(geom: ArrayGeometry) -> CouplingMatrix:
    """Assemble R(x) with sinc(2 * spacing) entries and factor it eagerly."""
    x = geom.positions
    entries = _coupling_entries(x)
    chol, jitter = _factor(x, entries)
    entries.flags.writeable = False
    chol.flags.writeable = False
    return CouplingMatrix(entries=entries, chol=chol, jitter_applied=jitter)


def _solve_gram(chol: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """R^-1 rhs through the two triangular solves; no explicit inverse."""
    half = solve_triangular(chol, rhs, lower=True)
    return solve_triangular(chol.T, half, lower=False)


def directivity(u, geom: ArrayGeometry, coupling: CouplingMatrix | None = None) -> float:
    """Maximum directivity a^H R^-1 a toward u, via the triangular factor."""
    if coupling is None:
        coupling = coupling_matrix(geom)
    a = steering_vector(u, geom)
    z = _solve_gram(coupling.chol, a)
    return float(np.real(np.vdot(a, z)))


def _directivity_raw(x: np.ndarray, u: float) -> float:
    entries = _coupling_entries(np.asarray(x, dtype=float))
    chol, _ = _factor(np.asarray(x, dtype=float), entries)
    a = _steering_raw(x, u)
    z = _solve_gram(chol, a)
    return float(np.real(np.vdot(a, z)))


def optimal_excitation(
    u, geom: ArrayGeometry, coupling: CouplingMatrix | None = None
) -> ExcitationVector:
    """Directivity-maximizing weights R^-1 a normalized to unit 2-norm."""
    if coupling is None:
        coupling = coupling_matrix(geom)
    a = steering_vector(u, geom)
    z = _solve_gram(coupling.chol, a)
    weights = z / np.linalg.norm(z)
    weights.flags.writeable = False
    return ExcitationVector(weights=weights, norm=float(np.linalg.norm(weights)))


def effective_steering(
    u, geom: ArrayGeometry, coupling: CouplingMatrix | None = None
) -> EffectiveSteering:
    """Orthonormalized steering vector L^-1 a by forward substitution."""
    if coupling is None:
        coupling = coupling_matrix(geom)
    a = steering_vector(u, geom)
    values = solve_triangular(coupling.chol, a, lower=True)
    values.flags.writeable = False
    return EffectiveSteering(
        values=values, squared_norm=float(np.sum(np.abs(values) ** 2))
    )


def gram_schmidt_patterns(
    u_nodes: np.ndarray, u_weights: np.ndarray, geom: ArrayGeometry
) -> np.ndarray:
    """Orthonormalized pattern functions sampled on a quadrature grid.

    Row n holds the n-th effective pattern on the caller's [-1, 1] grid, built
    by recursive modified Gram-Schmidt under the inner product
    (1/2) * integral of f * conj(g) du evaluated with the supplied weights.
    This is an independent route to the same functions the triangular factor
    produces; rows are orthonormal under the grid inner product.
    """
    nodes = np.asarray(u_nodes, dtype=float)
    weights = np.asarray(u_weights, dtype=float)
    if nodes.shape != weights.shape or nodes.ndim != 1:
        raise ValueError("quadrature nodes and weights must be matching 1-D arrays")
    x = geom.positions
    raw = np.exp(-1j * TWO_PI * np.outer(x, nodes))
    rows = np.empty_like(raw)
    for n in range(x.size):
        residual = raw[n].copy()
        for m in range(n):
            coeff = 0.5 * np.sum(weights * residual * np.conj(rows[m]))
            residual -= coeff * rows[m]
        norm_sq = 0.5 * float(np.sum(weights * np.abs(residual) ** 2))
        if norm_sq < 1e-14:
            raise DegenerateBasisError(
                f"pattern {n} is numerically dependent on its predecessors"
            )
        rows[n] = residual / math.sqrt(norm_sq)
    rows.flags.writeable = False
    return rows


def average_directivity(geom: ArrayGeometry, n_nodes: int = 256) -> float:
    """(1/2) * integral of G_u du over [-1, 1]; equals N for any geometry."""
    nodes, weights = gauss_legendre(n_nodes)
    coupling = coupling_matrix(geom)
    values = np.array([directivity(float(u), geom, coupling) for u in nodes])
    return float(0.5 * np.sum(weights * values))
