"""Cumulative distribution transform toolkit for 1-D densities."""

from . import cdt, classify, datagen, density, errors, features, plotting
from .cdt import (
    CdtSignal,
    MonotoneMap,
    ReferenceDensity,
    compose_oracle,
    forward,
    inverse,
    scale_oracle,
    translate_oracle,
    transport_distance,
    transport_norm,
)
from .classify import (
    CvReport,
    LabeledDataset,
    LinearClassifier,
    check_linear_separability,
    cross_validate,
    fit_fisher_lda,
    fit_linear_svm,
    fit_penalized_lda,
    project_2d,
)
from .datagen import (
    ConfoundFamily,
    GenerativeSpec,
    sample_class,
    texture_simulation,
    verify_family_closure,
)
from .density import Cdf, DiscreteDensity, cdf, evaluate, from_samples, quantile

__version__ = "0.1.0"

__all__ = [
    "cdt",
    "classify",
    "datagen",
    "density",
    "errors",
    "features",
    "plotting",
    "CdtSignal",
    "MonotoneMap",
    "ReferenceDensity",
    "forward",
    "inverse",
    "translate_oracle",
    "scale_oracle",
    "compose_oracle",
    "transport_norm",
    "transport_distance",
    "CvReport",
    "LabeledDataset",
    "LinearClassifier",
    "check_linear_separability",
    "cross_validate",
    "fit_fisher_lda",
    "fit_linear_svm",
    "fit_penalized_lda",
    "project_2d",
    "ConfoundFamily",
    "GenerativeSpec",
    "sample_class",
    "texture_simulation",
    "verify_family_closure",
    "Cdf",
    "DiscreteDensity",
    "cdf",
    "evaluate",
    "from_samples",
    "quantile",
    "__version__",
]
