"""High-frequency eigenmode envelopes of discretized Schrodinger operators.

Discretizing −ψ'' + V(x)ψ = λψ with central differences on a periodic grid
produces, next to the physical low modes, a band of lattice modes near the
stencil ceiling 4/h². Their samples alternate in sign; demodulating the (−1)ⁿ
carrier reveals envelopes that solve a continuum eigenproblem with the
potential sign flipped — so a repulsive bump binds the top modes into
localized envelopes. This package builds the operators, solves them with its
own dense symmetric eigensolver (compiled kernel with a pure-Python fallback),
demodulates and classifies the top modes, and checks them against two
independent references: a refined-grid envelope solve and a WKB amplitude law.
"""

from ._kernels import available_backends, backend_name
from ._version import VERSION as __version__
from .config import (
    ExperimentConfig,
    GridConfig,
    OutputConfig,
    PotentialConfig,
    apply_overrides,
    from_dict,
    from_file,
    to_dict,
    to_json,
)
from .eigen import (
    CertifyReport,
    EigenPair,
    SpectrumSlice,
    certify,
    eigen_full,
    top_k,
)
from .envelope import BoundState, CompareReport, EnvelopePrediction, compare, predict
from .errors import (
    CholeskyError,
    ConfigError,
    ConvergenceError,
    GridError,
    NyqmodesError,
    PotentialError,
    SelectionError,
    SolverError,
)
from .gridpot import (
    Grid,
    Potential,
    SechFamily,
    Tabulated,
    make_grid,
    phase_integral,
    sample_potential,
)
from .modes import (
    ModeAnalysis,
    count_localized,
    count_sign_changes,
    demodulate,
    nyquist_ceiling,
    tail_mass,
)
from .operators import DiscreteOperator, Scheme, apply_operator, assemble, dump_csv, to_dense
from .wkb import WkbMode, WkbReport, band_limits, wkb_compare, wkb_evaluate

__all__ = [
    "__version__",
    "available_backends",
    "backend_name",
    # configuration
    "ExperimentConfig",
    "GridConfig",
    "PotentialConfig",
    "OutputConfig",
    "from_dict",
    "from_file",
    "to_dict",
    "to_json",
    "apply_overrides",
    # grid and potentials
    "Grid",
    "make_grid",
    "SechFamily",
    "Tabulated",
    "Potential",
    "sample_potential",
    "phase_integral",
    # operators
    "Scheme",
    "DiscreteOperator",
    "assemble",
    "apply_operator",
    "to_dense",
    "dump_csv",
    # eigensolver
    "EigenPair",
    "SpectrumSlice",
    "CertifyReport",
    "eigen_full",
    "top_k",
    "certify",
    # demodulation
    "ModeAnalysis",
    "demodulate",
    "tail_mass",
    "count_localized",
    "count_sign_changes",
    "nyquist_ceiling",
    # envelope reference
    "BoundState",
    "EnvelopePrediction",
    "CompareReport",
    "predict",
    "compare",
    # semiclassical control
    "WkbMode",
    "WkbReport",
    "wkb_evaluate",
    "wkb_compare",
    "band_limits",
    # errors
    "NyqmodesError",
    "GridError",
    "PotentialError",
    "ConfigError",
    "SolverError",
    "CholeskyError",
    "ConvergenceError",
    "SelectionError",
]
