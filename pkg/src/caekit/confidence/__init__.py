"""Confidence measures for ML predictions feeding a safety case."""

from .attribution import (
    COMPLETENESS_TOLERANCE,
    LinearModel,
    abc_confidence,
    linear_attributions,
    replacement_probabilities,
)
from .conformal import (
    ConformalResult,
    IcpContext,
    LabeledPoint,
    Measure,
    conformal_cp,
    conformal_point,
    conformal_prediction_set,
    icp_calibrate,
    icp_p_value,
    icp_predict,
    nn_blind,
    nn_ratio,
)
from .learned import (
    BUDGET_STEP,
    PROBABILITY_TOLERANCE,
    adjusted_probabilities,
    alternate_instances,
    budget_update,
    confidence_weighted_loss,
    detection_confidence,
    threshold_for_target_rer,
)

__all__ = [
    "LabeledPoint",
    "Measure",
    "nn_blind",
    "nn_ratio",
    "conformal_cp",
    "conformal_prediction_set",
    "ConformalResult",
    "conformal_point",
    "IcpContext",
    "icp_calibrate",
    "icp_p_value",
    "icp_predict",
    "COMPLETENESS_TOLERANCE",
    "LinearModel",
    "linear_attributions",
    "replacement_probabilities",
    "abc_confidence",
    "PROBABILITY_TOLERANCE",
    "BUDGET_STEP",
    "adjusted_probabilities",
    "confidence_weighted_loss",
    "alternate_instances",
    "budget_update",
    "detection_confidence",
    "threshold_for_target_rer",
]
