from .engine import (
    Fn,
    GnnClassifier,
    GnnError,
    Layer,
    State,
    apply_layer,
    concat_classifiers,
    identity_layer,
    render_state,
    run_classifier,
    run_layers,
    trace,
)
from .models import (
    check_psi,
    count_p2_neighbours,
    gadlin_classifier,
    lin_classifier,
    phi1_classifier,
    phi2_classifier,
    psi_classifier,
)

__all__ = [
    "Fn",
    "GnnClassifier",
    "GnnError",
    "Layer",
    "State",
    "apply_layer",
    "check_psi",
    "concat_classifiers",
    "count_p2_neighbours",
    "gadlin_classifier",
    "identity_layer",
    "lin_classifier",
    "phi1_classifier",
    "phi2_classifier",
    "psi_classifier",
    "render_state",
    "run_classifier",
    "run_layers",
    "trace",
]
