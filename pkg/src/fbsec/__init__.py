"""Finite-blocklength physical-layer-security metrics over fading wiretap channels."""

from .fbcore import (
    ChannelPoint,
    RatePoint,
    achievable_secrecy_rate,
    capacity,
    converse_secrecy_rate,
    db_to_linear,
    decoding_error_prob,
    dispersion,
    max_coding_rate,
    q_func,
    q_inv,
    secrecy_capacity,
)
from .fading import (
    FadingScenario,
    FixedSnr,
    GammaSnr,
    PointMassScenario,
    TwoLinkScenario,
    sample_channel,
    sample_channels,
)
from .mc import (
    InsufficientConditioningError,
    McBudget,
    MetricEstimate,
    NonFiniteSampleError,
    estimate_conditional,
    estimate_mean,
    estimate_probability,
)
from .metrics import (
    CsiModel,
    EffectiveThroughput,
    ReliableThroughput,
    SecurityConstraints,
    TransmissionPlan,
    average_error_prob,
    effective_throughput,
    outage_probability,
    reliable_throughput,
    secrecy_outage_probability,
    secrecy_throughput,
)
from .optimize import (
    ArgmaxResult,
    InfeasibleVerdict,
    SweepSpec,
    argmax_feasible,
    optimal_rate_bisect,
    sweep,
)

__version__ = "0.1.0"
