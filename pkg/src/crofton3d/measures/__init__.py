from .constant_width import ConstantWidthBounds, constant_width_bounds, lower_bound_positivity_root
from .exterior import (
    alpha_integrand,
    area_squared_integrand,
    ball_alpha_integral,
    ball_area_squared_integral,
    ball_herglotz_integral,
    ball_slice_l2_integral,
    beta_integrand,
    exterior_integral,
    region_integrand,
)
from .lines_planes import (
    crofton_baselines,
    line_measure,
    pair_constant_quadrature,
    plane_measure,
    sample_lines,
    sample_planes,
    sphere_constant_pair,
    sphere_constant_triple,
    triple_constant_quadrature,
)
from .report import VerifierReport
from .theorems import (
    herglotz_rhs,
    lemma1_consistency,
    thm1_rhs,
    verify_herglotz,
    verify_planar_crofton,
    verify_thm1,
    verify_thm2,
    verify_thm3,
    verify_thm4,
)
