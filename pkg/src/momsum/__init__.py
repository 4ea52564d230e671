"""momsum: moment-derivative calculus and generalized Borel-Laplace summation.

Building blocks: moment sequences and their growth diagnostics, truncated
formal series with moment derivatives and formal Borel transforms, Gevrey
summability kernels, directional (multi)summation pipelines, growth-level
fitting, and formal solvers for a singularly perturbed moment differential
equation and its Borel-plane Cauchy problem.
"""

from .errors import (AccuracyError, ConfigError, DegenerateInputError,
                     DomainError, ShapeError, SingularDirectionError)
from .growth import GrowthFit, check_asymptotic_remainder, fit_growth
from .kernels import (GevreyKernel, cauchy_kernel_identity,
                      contour_moment_derivative, eval_kernel,
                      make_gevrey_kernel)
from .sequences import (MomentSequence, associated_function,
                        associated_function_any, check_equivalence,
                        check_strongly_regular, combine, estimate_omega,
                        make_sequence, rho_factor)
from .series import (AnalyticGerm, BivariateSeries, TruncatedSeries,
                     add_series, bivariate, bivariate_zero, formal_borel,
                     formal_borel_inverse, germ, germ_algebra, invert_germ,
                     invert_series, moment_antiderivative, moment_derivative,
                     mul_bivariate, mul_series, multiply_by_germ,
                     scale_series, series, series_equal)
from .solver import (CauchyProblem, FormalSolution,
                     SingularlyPerturbedProblem, borel_in_epsilon,
                     extract_traces, fixed_point_solution, solve_cauchy,
                     solve_main, verify_residual)
from .serialize import (bivariate_from_dict, bivariate_to_dict, dumps_json,
                        germ_from_dict, germ_to_dict, sequence_from_dict,
                        sequence_to_dict, series_from_dict, series_to_dict,
                        solution_to_dict, sum_result_to_csv,
                        sum_result_to_dict, write_atomic)
from .summation import (ContinuationStrategy, Direction, GrowthRecord,
                        Multidirection, RayContinuation, SumResult, borel_sum,
                        continue_borel, growth_classify, laplace_along,
                        multisum, split_multisum_check)

__version__ = "0.1.0"
