"""Selmer ratios and rank-0 proportion certificates for sextic twists of E_{a,b}."""

from .arith import TwistClass, factorize, height, is_cube_in_Qp, is_sixth_power_in_Qp, is_square_in_Qp
from .congruence import CongruenceSet, LocalCondition, density, enumerate_set, explicit_T_prop510, sigma_set, t_prime_set
from .correlation import AnalysisReport, CorrelationCertificate, analyze, correlation_bound, parity_report
from .curve import CurveEab, hypothesis_case
from .errors import (
    DomainError,
    HypothesisNoneError,
    InvalidCurveError,
    NotComputableError,
    NotInSigmaError,
    RatioNotOneError,
    ScenarioError,
    SelmerTwistError,
)
from .prym import C3Scenario, PrymFamily, prym_local_ratio, prym_sigma, scenario_analysis
from .selmer import INF, IsogenyId, SelmerRatio, global_ratio, local_ratio

__version__ = "0.1.0"
