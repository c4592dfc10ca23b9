from .hypdisc import (
    DiscPoint, Mobius, OutsideDiscError, TangentVec, area_density, area_density_array, as_complex,
    as_point, disc_area, geodesic_point, geodesic_point_array, hyp_dist, hyp_dist_array, hyp_norm,
    mobius_apply, mobius_compose, mobius_from, mobius_inverse, mobius_push)
from .horocycle import (
    DegeneratePairError, Horocycle, NonUnitTangentError, chord_length, chord_length_array,
    euclid_center, horo_arc, horo_between, horo_dilate, horo_dilate_array, horo_eval,
    horo_from_tangent, horo_point, horo_point_array, horo_point_mirror, horo_point_mirror_array,
    horo_polar, horo_polar_coords, horo_velocity)
from .finsler import (
    FinslerEval, MinimalityReport, check_deta, check_minimality, curve_length_phi, dist_phi,
    dist_phi_array, eta, phi, phi_array, signed_geodesic_curvature)
