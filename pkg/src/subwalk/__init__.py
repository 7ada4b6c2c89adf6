"""Subordinated random walks on Z^d.

Discrete subordination turns the simple random walk into a heavy-tailed
walk through a Bernstein function psi: the transition operator becomes
I - psi(I - P).  This package computes the subordination coefficients,
renewal sequences, Green functions with certified error bounds,
capacities and equilibrium measures of finite lattice sets, massiveness
criteria (Wiener test, thorn series, fat-thorn rule, hyperplane
dichotomy), and Monte Carlo hitting estimates that corroborate them.
"""

__version__ = "0.1.0"

from .bernstein import (BernsteinSpec, LogPower, PowerAlpha,
                        SubordinationCoefficients, TabulatedLevy,
                        coefficient_tail_check, coefficients, eval_psi,
                        log_power, power_alpha, tabulated_levy, tau_pmf)
from .capacity import (CapacityResult, PointSet, ball_capacity_scan,
                       ball_points, capacity_variational, cylinder_capacity_scan,
                       cylinder_points, dilate, equilibrium, green_matrix,
                       halo_check, hitting_from_equilibrium, point_set,
                       scaling_check)
from .errors import BudgetError, DomainError, SolverError, SubwalkError
from .green import (GreenEvaluator, GreenProfile, GreenValue,
                    asymptotic_constant, build_evaluator, build_evaluators,
                    fourier_oracle, riesz_constant, riesz_ratio_report)
from .massiveness import (AxisSet, BallSet, ConeSet, CylinderSet, ExplicitSet,
                          FatThornWitness, HyperplaneResult, HyperplaneSet,
                          LinOverLogThorn, LinearThorn, PowerThorn, TableThorn,
                          ThornSeriesResult, ThornSet, WienerReport,
                          chi_profile, fat_thorn_rule, hyperplane_return_sum,
                          shell, thorn_series_terms, wiener_test)
from .montecarlo import (EscapeRadius, HittingEstimate, Horizon,
                         IncrementSampler, SimConfig, TrendReport,
                         hitting_probability, massiveness_trend,
                         sample_increment, simulate_step, standoff_point,
                         wilson_interval)
from .renewal import (MonotonicityCheck, RenewalSequence,
                      asymptotic_diagnostic, check_decreasing,
                      check_log_convexity, extend_asymptotically,
                      generating_identity_residual, renewal_sequence)
from .walk_kernel import (CltError, CltFit, LatticePoint, SubordinatedPmf,
                          TransitionTable, clt_error, fit_clt_constant,
                          gaussian_q, load_table, pmf_table, save_table,
                          step_kernel, subordinated_pmf)

__all__ = [
    "__version__",
    # bernstein
    "BernsteinSpec", "PowerAlpha", "LogPower", "TabulatedLevy",
    "power_alpha", "log_power", "tabulated_levy", "SubordinationCoefficients",
    "coefficients", "coefficient_tail_check", "eval_psi", "tau_pmf",
    # renewal
    "RenewalSequence", "MonotonicityCheck", "renewal_sequence",
    "check_decreasing", "check_log_convexity", "asymptotic_diagnostic",
    "extend_asymptotically", "generating_identity_residual",
    # walk_kernel
    "LatticePoint", "TransitionTable", "pmf_table", "save_table",
    "load_table", "step_kernel", "gaussian_q", "clt_error", "CltError",
    "CltFit", "fit_clt_constant", "subordinated_pmf", "SubordinatedPmf",
    # green
    "GreenEvaluator", "GreenValue", "GreenProfile", "build_evaluator",
    "build_evaluators", "asymptotic_constant", "riesz_constant",
    "riesz_ratio_report", "fourier_oracle",
    # capacity
    "PointSet", "point_set", "ball_points", "cylinder_points",
    "CapacityResult", "green_matrix", "equilibrium", "capacity_variational",
    "hitting_from_equilibrium", "halo_check", "ball_capacity_scan",
    "cylinder_capacity_scan", "scaling_check", "dilate",
    # massiveness
    "AxisSet", "HyperplaneSet", "BallSet", "CylinderSet", "ConeSet",
    "ThornSet", "ExplicitSet", "LinearThorn", "PowerThorn", "LinOverLogThorn",
    "TableThorn", "shell", "WienerReport", "wiener_test",
    "ThornSeriesResult", "thorn_series_terms", "FatThornWitness",
    "fat_thorn_rule", "HyperplaneResult", "hyperplane_return_sum",
    "chi_profile",
    # montecarlo
    "SimConfig", "Horizon", "EscapeRadius", "HittingEstimate",
    "IncrementSampler", "sample_increment", "simulate_step",
    "hitting_probability", "massiveness_trend", "TrendReport",
    "standoff_point", "wilson_interval",
    # errors
    "SubwalkError", "DomainError", "BudgetError", "SolverError",
]
