"""Harmonic-regression analysis of per-token surprisal contours.

Fits time-scaled sine/cosine predictors aligned to nested discourse units
(EDUs, sentences, paragraphs, whole documents), selects frequencies with an
L1 penalty, refits by OLS, and tests the survivors: order-wise ANOVA,
cross-validated MSE comparisons with paired t-tests and Holm correction,
boundary surprisal statistics, a permutation null, and a DFT diagnostic.
"""

__version__ = "0.1.0"

from .analysis import (
    BoundaryCell,
    boundary_report,
    boundary_stats,
    permute_surprisal,
    spectrum,
)
from .contours import (
    ALL_STRUCTURES,
    DocumentContour,
    NESTED_STRUCTURES,
    Structure,
    TokenRecord,
    UnitSpan,
    boundary_positions,
    contour_line,
    parse_contour_line,
    unit_length_of,
    validate_document,
)
from .features import (
    BASELINE_COLUMNS,
    FeatureMatrix,
    OrderSpec,
    assemble_matrix,
    baseline_features,
    harmonic_features,
    orders_from_training,
    surprisal_target,
)
from .fitting import (
    FitResult,
    SelectedFit,
    lasso_fit,
    mse,
    ols_fit,
    predict,
    select_and_refit,
)
from .pipeline import PipelineConfig, PipelineReport, load_contours, run_pipeline
from .stats import (
    AnovaResult,
    CvReport,
    ModelSpec,
    PairedTestResult,
    amplitude,
    anova_order_test,
    cross_validate,
    holm_correction,
    paired_t_one_sided,
    standard_model_specs,
)
from .synthetic import SyntheticSpec, generate_synthetic

__all__ = [name for name in dir() if not name.startswith("_")]
