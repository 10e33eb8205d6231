"""Weighted least-squares trigonometric decomposition of fringe curves.

Curves are fit on the basis {1, cos k phi, sin k phi : k = 1..n}; the
visibility is the amplitude of the frequency-n component divided by the
constant term, which reduces to (max-min)/(max+min) for an offset plus a
single harmonic.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError
from .detection import CoincidenceCurve

__all__ = ["TrigFit", "fit_trig", "fringe_minima", "poisson_weights"]

C0_FLOOR = 1e-12


@dataclass(frozen=True)
class TrigFit:
    """Result of a degree-n trigonometric least-squares fit."""

    n: int
    c0: float
    a: np.ndarray
    b: np.ndarray
    visibility: float
    sigma_visibility: float
    residual_rms: float

    def __post_init__(self):
        for name in ("a", "b"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def amplitudes(self) -> np.ndarray:
        """Harmonic amplitudes sqrt(a_k^2 + b_k^2), k = 1..n."""
        return np.hypot(self.a, self.b)

    def predict(self, phases: np.ndarray) -> np.ndarray:
        phases = np.asarray(phases, dtype=float)
        out = np.full(phases.shape, self.c0)
        for k in range(1, self.n + 1):
            out += self.a[k - 1] * np.cos(k * phases) + self.b[k - 1] * np.sin(k * phases)
        return out


def _design(phases: np.ndarray, n: int) -> np.ndarray:
    X = np.ones((phases.size, 2 * n + 1))
    for k in range(1, n + 1):
        X[:, 2 * k - 1] = np.cos(k * phases)
        X[:, 2 * k] = np.sin(k * phases)
    return X


def poisson_weights(counts: np.ndarray, pulses: int, floor: float = 1.0) -> np.ndarray:
    """Inverse-variance weights for rates estimated from counted events.

    var(rate) ~ max(count, floor) / pulses^2, so w = pulses^2 / max(count, floor).
    """
    counts = np.asarray(counts, dtype=float)
    return pulses**2 / np.maximum(counts, floor)


def fit_trig(
    phases: np.ndarray,
    rates: np.ndarray,
    weights: np.ndarray | None = None,
    n: int = 1,
) -> TrigFit:
    """Weighted least squares over frequencies 0..n.

    Requires at least 2n+1 samples and strictly positive weights; the
    uncertainty of the visibility comes from first-order propagation of
    the weighted-least-squares covariance (weights read as exact inverse
    variances).
    """
    phases = np.asarray(phases, dtype=float)
    rates = np.asarray(rates, dtype=float)
    if n < 1:
        raise ValueError("n must be >= 1")
    if phases.shape != rates.shape or phases.ndim != 1:
        raise ValueError("phases and rates must be equal-length vectors")
    if phases.size < 2 * n + 1:
        raise ValueError(f"need at least {2 * n + 1} samples for degree {n}")
    if weights is None:
        weights = np.ones_like(rates)
    else:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != rates.shape:
            raise ValueError("weights must match rates in length")
        if np.any(weights <= 0):
            raise ValueError("weights must be strictly positive")

    X = _design(phases, n)
    sw = np.sqrt(weights)
    coef, _, rank, _ = np.linalg.lstsq(X * sw[:, None], rates * sw, rcond=None)
    if rank < 2 * n + 1:
        raise ConditioningError(
            f"design matrix rank {rank} < {2 * n + 1}: degenerate phase grid"
        )
    gram = (X * weights[:, None]).T @ X
    cov = np.linalg.inv(gram)

    c0 = float(coef[0])
    a = coef[1::2].copy()
    b = coef[2::2].copy()
    resid = rates - X @ coef
    residual_rms = float(np.sqrt(np.mean(resid**2)))

    if abs(c0) < C0_FLOOR:
        raise ConditioningError(
            f"constant term {c0:.3e} below {C0_FLOOR:g}; visibility undefined"
        )
    a_n, b_n = float(coef[2 * n - 1]), float(coef[2 * n])
    s = math.hypot(a_n, b_n)
    visibility = s / c0
    grad = np.zeros(2 * n + 1)
    grad[0] = -s / c0**2
    if s > 0:
        grad[2 * n - 1] = a_n / (s * c0)
        grad[2 * n] = b_n / (s * c0)
    else:
        # at s = 0 the amplitude is not differentiable; bound with the
        # marginal deviations of the two coefficients
        grad[2 * n - 1] = 1.0 / c0
        grad[2 * n] = 1.0 / c0
    sigma_visibility = float(np.sqrt(grad @ cov @ grad))
    return TrigFit(n, c0, a, b, visibility, sigma_visibility, residual_rms)


def _golden_min(f, a: float, b: float, tol: float = 1e-10) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def fringe_minima(
    curve: CoincidenceCurve,
    n: int | None = None,
    *,
    dense_points: int = 4096,
) -> list[tuple[float, float]]:
    """Strict local minima of the fitted trigonometric polynomial.

    The curve is fit with frequencies 0..n (default: the pattern's total
    photon number), evaluated on a dense grid over [0, 2 pi), and each
    cyclic local minimum is refined by golden-section search.  A constant
    curve has no strict minima and yields an empty list.
    """
    if curve.phases.size < 3:
        raise ValueError("need at least 3 samples")
    if n is None:
        n = curve.pattern[0] + curve.pattern[1]
    n = max(1, n)
    fit = fit_trig(curve.phases, curve.rates, None, n)
    grid = np.linspace(0.0, 2.0 * math.pi, dense_points, endpoint=False)
    vals = fit.predict(grid)
    spread = float(vals.max() - vals.min())
    if spread <= 1e-14 * max(1.0, abs(fit.c0)):
        return []
    step = 2.0 * math.pi / dense_points
    out = []
    for i in range(dense_points):
        left = vals[i - 1]
        right = vals[(i + 1) % dense_points]
        if vals[i] < left and vals[i] < right:
            phi = _golden_min(lambda x: float(fit.predict(np.array([x]))[0]),
                              grid[i] - step, grid[i] + step)
            phi %= 2.0 * math.pi
            out.append((phi, float(fit.predict(np.array([phi]))[0])))
    out.sort(key=lambda t: t[0])
    return out
