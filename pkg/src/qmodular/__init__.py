"""Modular objects attached to integral binary quadratic forms of positive non-square discriminant."""

from .qforms import Params, QForm, FormSet, Geodesic, enumerate_forms, geodesic, ball_forms
from .series import (TruncationPolicy, SeriesValue, DEFAULT_POLICY, eval_f, eval_psi, eval_phi,
                     eval_rho, eval_lambda_pair, eval_Omega, eval_omega, eval_Lambda)
from .maass import eval_Psi, c_infinity, eichler_hol, eichler_nonhol, split_residual
from .theta import eval_theta_kernel
from .verify import VerificationReport, suite_run, jump_measure, SUITES

__version__ = "0.1.0"

__all__ = [
    "Params", "QForm", "FormSet", "Geodesic", "enumerate_forms", "geodesic", "ball_forms",
    "TruncationPolicy", "SeriesValue", "DEFAULT_POLICY", "eval_f", "eval_psi", "eval_phi",
    "eval_rho", "eval_lambda_pair", "eval_Omega", "eval_omega", "eval_Lambda",
    "eval_Psi", "c_infinity", "eichler_hol", "eichler_nonhol", "split_residual",
    "eval_theta_kernel", "VerificationReport", "suite_run", "jump_measure", "SUITES",
]
