"""Python bindings for the looprod C++ core."""

from ._looprod import (
    DistributionSpec,
    LooprodError,
    Moments,
    SeriesEstimate,
    default_grid,
    geometric_mean_loo,
    geometric_mean_prefix,
    ks_distance,
    limit_cdf,
    linearized_statistic,
    loo_log_series,
    loo_log_statistic,
    max_relative_deviation,
    normal_cdf,
    normal_quantile,
    remainder_magnitude,
    run_asclt,
    run_clt,
    rw_log_statistic,
    standardized_sum,
)

__all__ = [
    "DistributionSpec",
    "LooprodError",
    "Moments",
    "SeriesEstimate",
    "default_grid",
    "geometric_mean_loo",
    "geometric_mean_prefix",
    "ks_distance",
    "limit_cdf",
    "linearized_statistic",
    "loo_log_series",
    "loo_log_statistic",
    "max_relative_deviation",
    "normal_cdf",
    "normal_quantile",
    "remainder_magnitude",
    "run_asclt",
    "run_clt",
    "rw_log_statistic",
    "standardized_sum",
]
