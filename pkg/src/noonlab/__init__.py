"""noonlab: two-mode Fock-space simulation of NOON-state generation by
interfering coherent light with squeezed vacuum on a beamsplitter, plus
detector modeling and fringe analysis.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .analysis import TrigFit, fit_trig, fringe_minima, poisson_weights
from .detection import (
    ClickDistribution,
    ClickSamples,
    CoincidenceCurve,
    DetectorSpec,
    click_joint,
    coincidence_scan,
    default_phase_grid,
    loss_transform,
    multiplex_povm,
    noon_projected_curve,
    sample_clicks,
)
from .errors import (
    ConditioningError,
    ConvergenceError,
    DegenerateSubspaceError,
    NoonLabError,
    PatternError,
    TruncationError,
    TruncationWarning,
)
from .fock import (
    COHERENT_PHASE_OFFSET,
    ModeAmplitudes,
    SourceSpec,
    TruncationReport,
    TwoModeState,
    build_input,
    coherent_amplitudes,
    default_cutoff,
    product_state,
    squeezed_vacuum_amplitudes,
    truncation_report,
)
from .metrics import (
    FidelityResult,
    GammaOptimum,
    NPhotonComponent,
    fidelity_sweep,
    n_photon_component,
    noon_fidelity,
    optimal_gamma,
    project_n,
)
from .optics import (
    BeamsplitterSpec,
    FockBSBlock,
    apply_bs,
    apply_phase,
    bs_block,
    joint_number_distribution,
    mz_pipeline,
)

__all__ = [
    "KERNEL_BACKEND",
    "__version__",
    # errors
    "NoonLabError",
    "TruncationError",
    "TruncationWarning",
    "DegenerateSubspaceError",
    "ConvergenceError",
    "ConditioningError",
    "PatternError",
    # fock
    "COHERENT_PHASE_OFFSET",
    "ModeAmplitudes",
    "TwoModeState",
    "SourceSpec",
    "TruncationReport",
    "coherent_amplitudes",
    "squeezed_vacuum_amplitudes",
    "product_state",
    "build_input",
    "truncation_report",
    "default_cutoff",
    # optics
    "BeamsplitterSpec",
    "FockBSBlock",
    "bs_block",
    "apply_bs",
    "apply_phase",
    "mz_pipeline",
    "joint_number_distribution",
    # metrics
    "NPhotonComponent",
    "FidelityResult",
    "GammaOptimum",
    "project_n",
    "n_photon_component",
    "noon_fidelity",
    "optimal_gamma",
    "fidelity_sweep",
    # detection
    "DetectorSpec",
    "ClickDistribution",
    "ClickSamples",
    "CoincidenceCurve",
    "loss_transform",
    "multiplex_povm",
    "click_joint",
    "coincidence_scan",
    "sample_clicks",
    "noon_projected_curve",
    "default_phase_grid",
    # analysis
    "TrigFit",
    "fit_trig",
    "fringe_minima",
    "poisson_weights",
]
