"""Self-validated enclosure of generalized Hermitian eigenpairs in a real
interval, via contour-integral complex moments with Rayleigh-Ritz and
block-Hankel reductions."""

from .backend import BACKEND
from .errors import (ClusterNotSeparated, ConfigError, DimensionMismatch,
                     DivByZeroInterval, EigencloseError, GapNotCertified,
                     NodeSolveFailed, NotVerified, OnContour,
                     PositiveDefiniteRequired, SingularApprox)
from .interval import (CInterval, IMatrix, RInterval, c_div, c_mul,
                       enclose_pi, enclose_sincos, fro_norm_sup, imat_mul,
                       magnitude_sup, r_add, r_div, r_mul, r_sub,
                       two_norm_sup)
from .linalg import (Bisection, LinearEnclosure, Perturbation,
                     SmallEigEnclosure, UserGap, approx_solve, inertia_count,
                     krawczyk_solve, lambda_min_lower_bound,
                     nearest_outside_gap, verify_eigenpairs_small)
from .moments import (Contour, MomentSet, ProblemSpec, assemble_S,
                      assemble_reduced_moments, compute_c1, compute_c2,
                      contour_from_interval, d_factor_oracle,
                      enclose_in_parts, hankel_from_moments, rr_pencil,
                      select_N, solve_at_nodes, truncation_bound_S,
                      truncation_bound_moment)
from .problems import (gen_pentadiag, gen_probe, gen_tridiag,
                       load_matrix_market, write_matrix_market)
from .verify import (RunReport, VerifiedEigenpair, map_eigenvectors,
                     verify_hankel, verify_rr)

__version__ = "0.1.0"
