"""Exact certification and numerical exploration of algebraic zero-mean-curvature
hypersurfaces in pseudo-Euclidean space.

The package splits into an exact rational kernel and floating-point numerics:

  metric    diagonal pseudo-metrics, the invariants gamma and lambda, and the
            admissible exponents of the three solution classes;
  symalg    canonical light-cone expressions, derivatives, contractions, and
            the mean-curvature numerator, all in exact arithmetic;
  surfaces  the solution families as level sets: symbolic certification,
            closed-form sampling, curvature residuals, causal character;
  slices    constant-time slice geometry (profiles, kappa range, convexity);
  ong       the orthogonal-motion gauge ODE and trajectory families;
  hydro     exact similarity solutions of the axially symmetric hydrodynamic
            equation;
  cli       the ``zmc`` command with JSON reports and CSV exporters.
"""

from .metric import (
    ClassTag,
    DiagonalMetric,
    admissible_exponents,
    class_c_metric,
    gamma,
    lambda_decompose,
    partner_metric_for_class_B,
)
from .symalg import (
    FieldExpr,
    box,
    chi_ansatz,
    contract_grad,
    grad_square,
    mc_numerator,
    partial,
    quadratic_form,
    verify_box_identity,
    verify_cubic_identity,
    verify_gradsq_identity,
)
from .surfaces import (
    SingularLineError,
    SolutionFamily,
    SurfacePoint,
    causal_character,
    family_a,
    family_b,
    family_c,
    field,
    mc_residual,
    reflection_symmetric,
    sample_cloud,
    sample_point,
    symmetry_check,
    verify_zmc,
)
from .slices import SliceParams, convexity_check, f, f_prime, kappa_max, slice_point, slice_profile
from .ong import Trajectory, g_rhs, gauge_labels, integrate, integrate_family, orthogonality_residual
from .hydro import (
    SimilarityFamily,
    TRExpr,
    p_solution,
    pde_residual,
    pde_residual_numeric,
    reduced_ode_residual,
    residual_report,
)

__version__ = "0.1.0"
