"""Exact certification of K-stability for polarised blow-ups of the projective plane."""
from .picard import DivisorClass, SurfaceModel, enumerate_exceptional, intersect, is_ample, is_nef, nef_threshold
from .alpha import AlphaBound, dp1_alpha_bound, dp1_alpha_lower
from .stability import Verdict, check_criterion, check_log_criterion, max_certified_beta
from .region import PolarisationFamily, certified_region, dp1_family, region_report
from .dfcalc import IntersectionTable, df_evaluate, df_log_evaluate, normal_cone_point_table

__version__ = "0.1.0"
