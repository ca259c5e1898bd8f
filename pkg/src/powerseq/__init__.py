"""Convergence of operator power sequences on Hilbert space.

The package splits into a construction layer and an analysis layer:

- :mod:`powerseq.opcore` — operator expressions (finite matrices, weighted
  shifts, diagonals, multiplication by a circle measure, direct sums,
  similarity conjugates) with a JSON wire format.
- :mod:`powerseq.shiftlab` — weight rules for unilateral shifts: exact power
  norms, the inflation construction with spectral radius one, two-isometry
  and Berger-moment weights, co-adjoint fixed-vector candidates.
- :mod:`powerseq.circlemeasure` — measures on the unit circle, Fourier
  coefficients, coefficient-decay (Rajchman) verdicts, and weak-convergence
  verdicts for unitaries modeled by their scalar spectral measures.
- :mod:`powerseq.powerdyn` — the classifier for power sequences, projection
  diagnostics, kernel comparisons, identity-part splitting, numerical radius.
- :mod:`powerseq.semispectral` — spectral measures of normal matrices and the
  weak/strong/uniform stability trichotomy, with partial-sum certificates.
- :mod:`powerseq.suites` / :mod:`powerseq.cli` — named property-verification
  suites and the ``powerseq`` command-line front end.
"""

from . import circlemeasure, opcore, powerdyn, semispectral, shiftlab, suites
from .circlemeasure import CircleMeasure, UnitaryComponent, UnitaryModel, unitary_power_verdict
from .errors import (
    ConstraintError,
    DimensionMismatchError,
    PowerseqError,
    PrecisionError,
    SplitUndefinedError,
    StructureError,
)
from .opcore import (
    Conjugate,
    Diagonal,
    DiagonalEntries,
    DirectSum,
    FiniteMatrix,
    MeasureMultiplication,
    OperatorExpr,
    WeightedShift,
    operator_from_json,
    operator_to_json,
)
from .powerdyn import (
    ConvergenceReport,
    Tolerances,
    classify_power_sequence,
    identity_part_split,
    kernels,
    numerical_radius,
    projection_diagnostics,
    similarity_orthogonalize,
)
from .semispectral import (
    spectral_measure_of_normal,
    stability_verdict,
    strong_convergence_criterion,
)
from .shiftlab import (
    InflationParams,
    InflationRule,
    TwoIsometryRule,
    berger_two_atom,
    coadjoint_unit_eigenvector,
)
from .suites import DEFAULT_SEED, run_suite

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # modules
    "opcore", "shiftlab", "circlemeasure", "powerdyn", "semispectral", "suites",
    # errors
    "PowerseqError", "DimensionMismatchError", "PrecisionError",
    "ConstraintError", "StructureError", "SplitUndefinedError",
    # operators
    "OperatorExpr", "FiniteMatrix", "WeightedShift", "Diagonal", "DiagonalEntries",
    "MeasureMultiplication", "DirectSum", "Conjugate",
    "operator_to_json", "operator_from_json",
    # shifts
    "InflationParams", "InflationRule", "TwoIsometryRule", "berger_two_atom",
    "coadjoint_unit_eigenvector",
    # measures and unitaries
    "CircleMeasure", "UnitaryComponent", "UnitaryModel", "unitary_power_verdict",
    # dynamics
    "Tolerances", "ConvergenceReport", "classify_power_sequence", "kernels",
    "projection_diagnostics", "identity_part_split", "similarity_orthogonalize",
    "numerical_radius",
    # spectral
    "spectral_measure_of_normal", "stability_verdict", "strong_convergence_criterion",
    # suites
    "DEFAULT_SEED", "run_suite",
]
