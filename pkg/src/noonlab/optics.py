"""Beamsplitter and phase-shifter unitaries in the photon-number basis.

Both act block-diagonally in total photon number, so a two-mode state is
transformed one anti-diagonal at a time.  Blocks are cached per
(total photon number, transmissivity) and reused across phase sweeps.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import TruncationError
from .fock import SourceSpec, TwoModeState, build_input

__all__ = [
    "BeamsplitterSpec",
    "FockBSBlock",
    "apply_bs",
    "apply_phase",
    "bs_block",
    "joint_number_distribution",
    "mz_pipeline",
]


@dataclass(frozen=True)
class BeamsplitterSpec:
    """Lossless beamsplitter, symmetric-real convention.

    Mode map: a -> sqrt(T) c + sqrt(1-T) d,  b -> sqrt(1-T) c - sqrt(T) d.
    The 2x2 mode matrix is orthogonal and involutive, so a balanced
    Mach-Zehnder at zero phase routes each input port back to itself.
    """

    transmissivity: float = 0.5
    convention: str = "symmetric-real"

    def __post_init__(self):
        if not 0.0 <= self.transmissivity <= 1.0:
            raise ValueError("transmissivity must lie in [0, 1]")
        if self.convention != "symmetric-real":
            raise ValueError("only the symmetric-real convention is implemented")

    @property
    def mode_matrix(self) -> np.ndarray:
        t = math.sqrt(self.transmissivity)
        r = math.sqrt(1.0 - self.transmissivity)
        return np.array([[t, r], [r, -t]])


@dataclass(frozen=True)
class FockBSBlock:
    """Unitary block on the fixed-total-photon-number subspace."""

    n_total: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@lru_cache(maxsize=4096)
def _cached_block(n_total: int, transmissivity: float) -> np.ndarray:
    m = _kernels.bs_block(n_total, transmissivity)
    m.setflags(write=False)
    return m


def bs_block(n_total: int, spec: BeamsplitterSpec | None = None) -> FockBSBlock:
    """Fock-basis block mapping |n, N-n> to |k, N-k| on the N-photon subspace."""
    if n_total < 0:
        raise ValueError("n_total must be >= 0")
    spec = spec or BeamsplitterSpec()
    return FockBSBlock(n_total, _cached_block(n_total, spec.transmissivity))


def apply_bs(
    state: TwoModeState,
    spec: BeamsplitterSpec | None = None,
    *,
    leak_tol: float = 1e-12,
) -> TwoModeState:
    """Apply the beamsplitter to every total-photon-number subspace.

    Photon number is conserved, so each anti-diagonal transforms within
    itself.  Anti-diagonals with total N > cutoff are only partially
    stored on the square grid; the unitary block may move some of their
    (tiny, for a sane cutoff) amplitude onto states outside the grid.
    When that leaked probability exceeds ``leak_tol`` relative to the
    state norm a TruncationError is raised rather than silently clipping.
    """
    spec = spec or BeamsplitterSpec()
    cut = state.cutoff
    src = state.amps
    out = np.zeros_like(src)
    leak = 0.0
    idx_all = np.arange(cut + 1)
    for total in range(2 * cut + 1):
        lo = max(0, total - cut)
        hi = min(cut, total)
        idx = idx_all[lo : hi + 1]
        seg = src[idx, total - idx]
        if not np.any(seg):
            continue
        block = _cached_block(total, spec.transmissivity)
        if total <= cut:
            out[idx, total - idx] = block @ seg
        else:
            vec = np.zeros(total + 1, dtype=complex)
            vec[lo : hi + 1] = seg
            res = block @ vec
            out[idx, total - idx] = res[lo : hi + 1]
            leak += float(np.sum(np.abs(res[:lo]) ** 2))
            leak += float(np.sum(np.abs(res[hi + 1 :]) ** 2))
    norm_sq = state.norm_sq
    if norm_sq > 0 and leak > leak_tol * norm_sq:
        raise TruncationError(
            f"beamsplitter moved {leak:.3e} of probability (relative {leak / norm_sq:.3e}) "
            f"beyond the cutoff grid; increase the cutoff"
        )
    return TwoModeState(out, cut)


def apply_phase(state: TwoModeState, phi: float, mode: str = "second") -> TwoModeState:
    """Multiply amplitudes by e^{i n phi}, n the photon number in ``mode``."""
    if mode not in ("first", "second"):
        raise ValueError("mode must be 'first' or 'second'")
    phases = np.exp(1j * phi * np.arange(state.cutoff + 1))
    if mode == "first":
        amps = state.amps * phases[:, None]
    else:
        amps = state.amps * phases[None, :]
    return TwoModeState(amps, state.cutoff)


def mz_pipeline(
    source: SourceSpec,
    bs: BeamsplitterSpec,
    phi: float,
    *,
    leak_tol: float = 1e-12,
) -> TwoModeState:
    """Mach-Zehnder: beamsplitter, phase phi on the second arm, beamsplitter."""
    state = build_input(source)
    state = apply_bs(state, bs, leak_tol=leak_tol)
    state = apply_phase(state, phi, mode="second")
    return apply_bs(state, bs, leak_tol=leak_tol)


def joint_number_distribution(state: TwoModeState) -> np.ndarray:
    """P[n_c, n_d] = |amps|^2; sums to the squared norm of the state."""
    return np.abs(state.amps) ** 2
