"""Python access to the tracelab core."""

import json

from ._trace_lab import (
    ConfigError,
    ModelError,
    NumericError,
    OperatorModel,
    Profile,
    beta_profile,
    dixmier_profile,
    gallery_names,
    lidskii_sums,
    make_t0,
    operator,
    periodic_mean,
    remainder_d,
    remainder_mu,
    run_criterion,
    truncated_profile,
    x_function,
    zeta_profile,
)
from ._trace_lab import _verdict


def verdict(model, cls="dixmier", thresholds=""):
    """Verdict as a dict with the same keys as the CLI JSON."""
    if isinstance(model, str):
        model = operator(model)
    return json.loads(_verdict(model, cls, thresholds))
