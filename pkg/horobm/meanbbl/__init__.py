from .pmean import (
    INF, MIN_THEOREM_P, PMeanParam, conclusion_exponent, holder_gap, needle_exponent, p_mean,
    p_mean_array)
from .density import (
    DEFAULT_STEP, Density1D, ZeroMassError, check_dominance, directed_sum_1d, dominance_gap,
    intervals_contain, intervals_length, minkowski_sum_1d, normalize_intervals, quantile_map)
from .dirbbl import (
    DirBBLReport, change_of_variables_integral, negative_control_pair, random_dominated_pair,
    random_piecewise_linear, sup_convolution_1d, verify_dirbbl)
from .needle import AffineNeedle, NeedleBMReport, needle_bm
from .supconv import sup_convolution
