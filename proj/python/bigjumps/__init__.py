"""Cut-off heavy-tailed sums: samplers, the condensation constant and rare-event estimators."""

from ._core import (
    KrhoResult,
    SchemeSpec,
    __version__,
    ball_point_count,
    estimate_naive,
    exact_dp,
    g_eval,
    g_inverse,
    generate_graph,
    h_eval,
    h_lattice,
    krho,
    mean_mu_n,
    ratio_sweep,
    sample_sums,
    theorem1_rhs,
    tk_window_prob,
)

__all__ = [
    "KrhoResult",
    "SchemeSpec",
    "__version__",
    "ball_point_count",
    "estimate_naive",
    "exact_dp",
    "g_eval",
    "g_inverse",
    "generate_graph",
    "h_eval",
    "h_lattice",
    "krho",
    "mean_mu_n",
    "ratio_sweep",
    "sample_sums",
    "theorem1_rhs",
    "tk_window_prob",
]
