from .core import JacobiCoords, SquareMatrix, jacobi_to_matrix, matrix_to_jacobi
from .involutions import check_g, dprime, hat_g, prime
from .dilog import DilogEngine, get_engine, rogers_l
from .identities import IdentityReport, merge_reports, verify_chain, verify_sum_constant
from .suites import SuiteFactory
from .combiner import ReportCombiner

__version__ = "0.1.0"
