"""Young flattenings and border-rank bounds for monomials."""
from .brank import BrankReport, certify, lower_bound_full, lower_bound_partial, thm13_condition2, upper_bound, waring_rank
from .combinatorics import Partition, Tableau, enumerate_ssyt, hook_dim, optimal_shape, tableau
from .linalg import ExactMatrix, rank, rank_exact, rank_modular, weight_blocks
from .poly import Polynomial, parse_polynomial
from .schur import LoweringMonomial, flattening_matrix, partial_flattening_blocks
from .straighten import FormalSum, straighten

__version__ = "0.1.0"
