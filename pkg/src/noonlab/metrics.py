"""NOON fidelity of fixed-photon-number output components and the
pair-amplitude-ratio optimization.

Fidelity sweeps use a subspace shortcut: photon number is conserved by
the beamsplitter, so the normalized N-photon output component follows
from the N-photon slice of the input product state and the single
(N+1)-dimensional beamsplitter block.  Tests cross-check this against
projecting the full two-mode state.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DegenerateSubspaceError
from .fock import (
    COHERENT_PHASE_OFFSET,
    SourceSpec,
    TwoModeState,
    coherent_amplitudes,
    squeezed_vacuum_amplitudes,
)
from .optics import BeamsplitterSpec, bs_block

__all__ = [
    "FidelityResult",
    "GammaOptimum",
    "NPhotonComponent",
    "fidelity_sweep",
    "n_photon_component",
    "noon_fidelity",
    "optimal_gamma",
    "project_n",
]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class NPhotonComponent:
    """Normalized amplitudes u_k over |k, N-k> plus the subspace weight."""

    n: int
    u: np.ndarray
    weight: float

    def __post_init__(self):
        u = np.ascontiguousarray(self.u, dtype=complex)
        u.setflags(write=False)
        object.__setattr__(self, "u", u)


@dataclass(frozen=True)
class FidelityResult:
    n: int
    gamma: float
    weight: float
    fidelity_fixed: float
    fidelity_phase_opt: float


@dataclass(frozen=True)
class GammaOptimum:
    gamma_star: float
    fidelity_star: float
    iterations: int


def project_n(state: TwoModeState, n: int) -> NPhotonComponent:
    """Normalized N-photon component of a two-mode state.

    u_k is proportional to amps[k, n-k]; weight is the probability of the
    n-photon event in the (unnormalized, truncated) state.
    """
    if n < 0 or n > state.cutoff:
        raise ValueError("n must satisfy 0 <= n <= cutoff")
    k = np.arange(n + 1)
    seg = state.amps[k, n - k]
    return _component_from_slice(n, seg)


def _component_from_slice(n: int, seg: np.ndarray) -> NPhotonComponent:
    if not np.any(np.abs(seg) >= 1e-300):
        raise DegenerateSubspaceError(
            f"the {n}-photon subspace carries no amplitude"
        )
    weight = float(np.sum(np.abs(seg) ** 2))
    return NPhotonComponent(n, seg / math.sqrt(weight), weight)


def n_photon_component(
    source: SourceSpec,
    n: int,
    bs: BeamsplitterSpec | None = None,
) -> NPhotonComponent:
    """N-photon component of the post-beamsplitter state, subspace shortcut.

    Equals project_n(apply_bs(build_input(source)), n) to rounding, at
    O(n^2) cost independent of the cutoff.
    """
    if n < 0 or n > source.cutoff:
        raise ValueError("n must satisfy 0 <= n <= cutoff")
    c = coherent_amplitudes(
        source.alpha_mag, source.phi_cs + COHERENT_PHASE_OFFSET, n, tol=math.inf
    ).amps
    s = squeezed_vacuum_amplitudes(source.r, n, tol=math.inf).amps
    w = c * s[::-1]
    comp = _component_from_slice(n, w)
    block = bs_block(n, bs).matrix
    u = block @ comp.u
    return NPhotonComponent(n, u, comp.weight)


def noon_fidelity(comp: NPhotonComponent, gamma: float = math.nan) -> FidelityResult:
    """Overlap of a normalized component with the (|N,0>+|0,N>)/sqrt(2) state.

    fidelity_fixed keeps the NOON relative phase fixed at zero;
    fidelity_phase_opt maximizes over it, which removes the dependence on
    beamsplitter-convention phases.
    """
    u0 = comp.u[0]
    uN = comp.u[comp.n]
    fixed = abs(u0 + uN) ** 2 / 2.0
    phase_opt = (abs(u0) + abs(uN)) ** 2 / 2.0
    return FidelityResult(comp.n, gamma, comp.weight, fixed, phase_opt)


def _phase_opt_fidelity(source: SourceSpec, n: int, bs) -> float:
    comp = n_photon_component(source, n, bs)
    return (abs(comp.u[0]) + abs(comp.u[n])) ** 2 / 2.0


def optimal_gamma(
    n: int,
    r: float = 0.1,
    phi_cs: float = math.pi,
    cutoff: int | None = None,
    *,
    convention: str = "tanh",
    bs: BeamsplitterSpec | None = None,
    grid_points: int = 64,
    gamma_tol: float = 1e-6,
    max_iterations: int = 200,
) -> GammaOptimum:
    """Pair-amplitude ratio maximizing the phase-optimal NOON fidelity.

    Deterministic: a log-spaced coarse grid over [0.05, 2n] brackets the
    basin, then golden-section refinement narrows gamma to ``gamma_tol``.
    """
    if n < 2:
        raise ValueError("optimal_gamma requires n >= 2")
    cutoff = cutoff if cutoff is not None else n
    if cutoff < n:
        raise ValueError("cutoff must be >= n")

    def objective(g: float) -> float:
        spec = SourceSpec(r=r, gamma=g, phi_cs=phi_cs, cutoff=cutoff, convention=convention)
        return _phase_opt_fidelity(spec, n, bs)

    lo, hi = 0.05, 2.0 * n
    grid = np.geomspace(lo, hi, grid_points)
    values = [objective(g) for g in grid]
    best = int(np.argmax(values))
    a = grid[max(0, best - 1)]
    b = grid[min(grid_points - 1, best + 1)]
    iterations = grid_points

    # golden-section maximization on [a, b]
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = objective(c), objective(d)
    iterations += 2
    while b - a > gamma_tol:
        if iterations >= max_iterations:
            raise ConvergenceError(
                f"golden-section search did not reach |dgamma| < {gamma_tol:g} "
                f"within {max_iterations} evaluations; bracket [{a:.6g}, {b:.6g}], "
                f"values ({fc:.6g}, {fd:.6g})"
            )
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = objective(d)
        iterations += 1
    g_star = 0.5 * (a + b)
    return GammaOptimum(g_star, objective(g_star), iterations)


def fidelity_sweep(
    n_values,
    r: float = 0.1,
    phi_cs: float = math.pi,
    mode: str = "optimal",
    gamma: float | None = None,
    cutoff: int | None = None,
    *,
    convention: str = "tanh",
    bs: BeamsplitterSpec | None = None,
) -> list[FidelityResult]:
    """FidelityResult per n, with gamma re-optimized per n or held fixed."""
    if mode not in ("optimal", "fixed"):
        raise ValueError("mode must be 'optimal' or 'fixed'")
    if mode == "fixed" and gamma is None:
        raise ValueError("fixed mode requires gamma")
    results = []
    for n in n_values:
        if mode == "optimal":
            opt = optimal_gamma(
                n, r=r, phi_cs=phi_cs, cutoff=cutoff, convention=convention, bs=bs
            )
            g = opt.gamma_star
        else:
            g = gamma
        cut = cutoff if cutoff is not None else max(n, 0)
        spec = SourceSpec(r=r, gamma=g, phi_cs=phi_cs, cutoff=max(cut, n), convention=convention)
        comp = n_photon_component(spec, n, bs)
        results.append(noon_fidelity(comp, gamma=g))
    return results
