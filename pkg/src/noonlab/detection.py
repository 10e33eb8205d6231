"""Lossy multiplexed click detectors and coincidence curves vs MZ phase.

The overall transmission eta is folded into the detector POVM (loss
commutes with photon-number measurement after the final beamsplitter, so
the state stays pure through the interferometer).  Click probabilities
come from the per-photon occupancy recursion in the kernel backend.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.stats import binom

from . import _kernels
from .errors import PatternError
from .fock import SourceSpec, build_input
from .metrics import n_photon_component
from .optics import BeamsplitterSpec, apply_bs, apply_phase, bs_block

__all__ = [
    "ClickDistribution",
    "ClickSamples",
    "CoincidenceCurve",
    "DetectorSpec",
    "click_joint",
    "coincidence_scan",
    "default_phase_grid",
    "loss_transform",
    "multiplex_povm",
    "noon_projected_curve",
    "sample_clicks",
]

MAX_MODULES = 64


@dataclass(frozen=True)
class DetectorSpec:
    """Array of ``modules`` binary click counters with overall transmission eta."""

    modules: int = 4
    eta: float = 1.0

    def __post_init__(self):
        if not 1 <= self.modules <= MAX_MODULES:
            raise ValueError(f"modules must lie in 1..{MAX_MODULES}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError("eta must lie in [0, 1]")


@dataclass(frozen=True)
class ClickDistribution:
    """Joint click probabilities p[k1, k2], k_i = 0..modules_i."""

    p: np.ndarray

    def __post_init__(self):
        p = np.ascontiguousarray(self.p, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class CoincidenceCurve:
    """Per-pulse probability of one click pattern over a phase grid."""

    phases: np.ndarray
    rates: np.ndarray
    pattern: tuple[int, int]

    def __post_init__(self):
        phases = np.ascontiguousarray(self.phases, dtype=float)
        rates = np.ascontiguousarray(self.rates, dtype=float)
        if phases.shape != rates.shape:
            raise ValueError("phases and rates must have equal length")
        phases.setflags(write=False)
        rates.setflags(write=False)
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "pattern", (int(self.pattern[0]), int(self.pattern[1])))


@dataclass(frozen=True)
class ClickSamples:
    """Multinomial per-pulse click draws on a phase grid.

    counts[i, k1, k2] is the number of pulses at phase i that produced
    the (k1, k2) click pattern.
    """

    phases: np.ndarray
    counts: np.ndarray
    pulses: int
    seed: int

    def counts_for(self, pattern: tuple[int, int]) -> np.ndarray:
        return self.counts[:, pattern[0], pattern[1]]


def default_phase_grid(points: int = 120) -> np.ndarray:
    """Uniform grid of MZ phases over [0, 2 pi)."""
    if points < 1:
        raise ValueError("points must be >= 1")
    return np.linspace(0.0, 2.0 * math.pi, points, endpoint=False)


def loss_transform(dist: np.ndarray, eta: float) -> np.ndarray:
    """Binomial loss channel on a photon-number distribution.

    P'(m) = sum_{n >= m} P(n) C(n, m) eta^m (1-eta)^{n-m}.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    p = np.asarray(dist, dtype=float)
    if p.ndim != 1:
        raise ValueError("dist must be one-dimensional")
    n = np.arange(p.size)
    L = binom.pmf(n[:, None], n[None, :], eta)
    return L @ p


@lru_cache(maxsize=256)
def _cached_povm(modules: int, eta: float, n_max: int) -> np.ndarray:
    m = _kernels.povm_matrix(modules, eta, n_max)
    m.setflags(write=False)
    return m


def multiplex_povm(spec: DetectorSpec, n_max: int) -> np.ndarray:
    """P[k, n] = probability of k clicks given n photons, k = 0..modules.

    Loss is included: each photon survives with probability eta and then
    lands in one of the modules uniformly.  Columns sum to one.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    return _cached_povm(spec.modules, spec.eta, n_max)


def click_joint(
    p_joint: np.ndarray,
    spec1: DetectorSpec,
    spec2: DetectorSpec,
) -> ClickDistribution:
    """Joint click distribution of two independent detector arrays."""
    p = np.asarray(p_joint, dtype=float)
    if p.ndim != 2:
        raise ValueError("p_joint must be a matrix over photon numbers")
    m1 = multiplex_povm(spec1, p.shape[0] - 1)
    m2 = multiplex_povm(spec2, p.shape[1] - 1)
    return ClickDistribution(m1 @ p @ m2.T)


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        raw = os.environ.get("NOONLAB_THREADS", "1")
        try:
            threads = int(raw)
        except ValueError:
            threads = 1
    if threads == 0:
        threads = os.cpu_count() or 1
    return max(1, threads)


def _validate_pattern(pattern, det1, det2):
    n1, n2 = int(pattern[0]), int(pattern[1])
    if not (0 <= n1 <= det1.modules and 0 <= n2 <= det2.modules):
        raise PatternError(
            f"pattern ({n1}, {n2}) exceeds module counts ({det1.modules}, {det2.modules})"
        )
    return n1, n2


def coincidence_scan(
    source: SourceSpec,
    bs: BeamsplitterSpec,
    det1: DetectorSpec,
    det2: DetectorSpec,
    pattern: tuple[int, int],
    phases: np.ndarray | None = None,
    *,
    threads: int | None = None,
) -> CoincidenceCurve:
    """Pattern probability after the full MZ, per point of the phase grid."""
    n1, n2 = _validate_pattern(pattern, det1, det2)
    phases = default_phase_grid() if phases is None else np.asarray(phases, dtype=float)
    state0 = apply_bs(build_input(source), bs)
    row1 = multiplex_povm(det1, source.cutoff)[n1]
    row2 = multiplex_povm(det2, source.cutoff)[n2]

    def rate_at(phi: float) -> float:
        out = apply_bs(apply_phase(state0, phi, mode="second"), bs)
        return float(row1 @ (np.abs(out.amps) ** 2) @ row2)

    workers = _resolve_threads(threads)
    if workers > 1 and phases.size > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rates = list(pool.map(rate_at, phases))
    else:
        rates = [rate_at(p) for p in phases]
    return CoincidenceCurve(phases, np.array(rates), (n1, n2))


def click_scan(
    source: SourceSpec,
    bs: BeamsplitterSpec,
    det1: DetectorSpec,
    det2: DetectorSpec,
    phases: np.ndarray,
    *,
    threads: int | None = None,
) -> list[ClickDistribution]:
    """Full click distribution at each phase (used by the sampler)."""
    state0 = apply_bs(build_input(source), bs)

    def dist_at(phi: float) -> ClickDistribution:
        out = apply_bs(apply_phase(state0, phi, mode="second"), bs)
        return click_joint(np.abs(out.amps) ** 2, det1, det2)

    workers = _resolve_threads(threads)
    if workers > 1 and len(phases) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(dist_at, phases))
    return [dist_at(p) for p in phases]


def sample_clicks(
    source: SourceSpec,
    bs: BeamsplitterSpec,
    det1: DetectorSpec,
    det2: DetectorSpec,
    phases: np.ndarray,
    pulses: int,
    seed: int,
    *,
    threads: int | None = None,
) -> ClickSamples:
    """Draw multinomial click counts, ``pulses`` per phase point.

    Each phase uses its own generator spawned deterministically from
    (seed, phase index), so runs are reproducible and phase-parallel.
    """
    if pulses < 1:
        raise ValueError("pulses must be >= 1")
    phases = np.asarray(phases, dtype=float)
    dists = click_scan(source, bs, det1, det2, phases, threads=threads)
    shape = dists[0].p.shape
    counts = np.zeros((phases.size,) + shape, dtype=np.int64)
    streams = np.random.SeedSequence(seed).spawn(phases.size)
    for i, (dist, stream) in enumerate(zip(dists, streams)):
        rng = np.random.default_rng(stream)
        flat = dist.p.ravel()
        # residual cell absorbs truncation mass so probabilities sum to 1
        pvals = np.append(flat, max(0.0, 1.0 - flat.sum()))
        pvals /= pvals.sum()
        draw = rng.multinomial(pulses, pvals)[:-1]
        counts[i] = draw.reshape(shape)
    return ClickSamples(phases, counts, pulses, seed)


def noon_projected_curve(
    source: SourceSpec,
    bs: BeamsplitterSpec,
    n: int,
    pattern: tuple[int, int],
    phases: np.ndarray | None = None,
) -> CoincidenceCurve:
    """Ideal pattern curve of the renormalized n-photon output component.

    The n-photon component after the first beamsplitter is normalized,
    evolved through phase and second beamsplitter, and read out with
    perfect photon-number resolution; pattern must sum to n.
    """
    n1, n2 = int(pattern[0]), int(pattern[1])
    if n1 + n2 != n or n1 < 0 or n2 < 0:
        raise PatternError(f"pattern ({n1}, {n2}) must sum to {n}")
    phases = default_phase_grid() if phases is None else np.asarray(phases, dtype=float)
    comp = n_photon_component(source, n, bs)
    block = bs_block(n, bs).matrix
    ks = np.arange(n + 1)
    rates = np.empty(phases.size)
    for i, phi in enumerate(phases):
        v = comp.u * np.exp(1j * (n - ks) * phi)
        rates[i] = abs(block[n1] @ v) ** 2
    return CoincidenceCurve(phases, rates, (n1, n2))
