from .instance import (
    DEFAULT_MAX_POINTS, MassInstance, UnbalancedInstanceError, annulus_instance, arc_instance,
    concat_instances, polar_family_instance, polar_horocycle, random_instance, region_instance,
    trivial_instance)
from .kantorovich import (
    KantorovichSolverError, Potential, distance_matrix, solve_kantorovich, transport_cost_lp)
from .rays import (
    DiscreteRay, MassBalanceReport, RayFitError, StrainGraph, default_strain_tol, disintegration_coverage,
    distance_to_trace, extract_rays, horocycle_params_array, mass_balance, strain_pairs)
from .jacobian import (
    JacobianReport, family_jacobian, jacobian_affine_check, ray_family_check, sign_constancy_check)
