"""
Constants for the Superalgebra Invariant Engine

Contains all valid values for CLI flags and report fields: algebra names,
module kinds, output formats, deformation terms, statuses and exit codes.
"""

from enum import Enum
from typing import Dict, List


class Command(Enum):
    """Available subcommands"""

    VERIFY_LEMMA4 = "verify-lemma4"
    VERIFY_STAR3 = "verify-star3"
    INVARIANTS = "invariants"
    CONJECTURE6 = "conjecture6"
    RADIAL = "radial"
    MEMBERSHIP = "membership"
    ZOO = "zoo"
    SELFTEST = "selftest"


class AlgebraName(Enum):
    """Algebras the zoo can build"""

    PO = "po"
    H = "h"
    SH = "sh"
    VECT = "vect"
    SVECT = "svect"
    SVECT_TILDE = "svect-tilde"
    GL = "gl"
    Q = "q"
    SQ = "sq"
    PSQ = "psq"
    PQ = "pq"
    SPO_DERIVED = "spo-derived"
    SPO_INTEGRAL = "spo-integral"


class ModuleKind(Enum):
    """Modules whose symmetric algebra is searched for invariants"""

    ADJOINT = "adjoint"
    COADJOINT = "coadjoint"


class OutputFormat(Enum):
    """Report renderers; JSON is the normative one"""

    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class DeformTerm(Enum):
    """Deformation term t of the volume (1 + t)·vvol"""

    TOP = "top"
    PAIR = "pair"


class ZooAction(Enum):
    EXPORT = "export"
    IMPORT = "import"


class ReportStatus(Enum):
    """Overall report status"""

    OK = "ok"
    MISMATCH = "mismatch"
    ABORTED = "aborted"
    REPORT_ONLY = "report-only"
    INVALID = "invalid"


class ExitCode(Enum):
    OK = 0
    MISMATCH = 1
    INVALID_INPUT = 2
    ABORTED = 3


class Verdict(Enum):
    """Outcome of testing a conjectural statement"""

    CONSISTENT = "conjecture-consistent"
    VIOLATING = "conjecture-violating"


VALID_COMMANDS: List[str] = [command.value for command in Command]
VALID_ALGEBRAS: List[str] = [algebra.value for algebra in AlgebraName]
VALID_MODULES: List[str] = [module.value for module in ModuleKind]
VALID_OUTPUTS: List[str] = [output.value for output in OutputFormat]
VALID_DEFORM_TERMS: List[str] = [term.value for term in DeformTerm]
VALID_ZOO_ACTIONS: List[str] = [action.value for action in ZooAction]
VALID_WEIGHT_FILTERS: List[str] = ["on", "off"]

STATUS_EXIT_CODES: Dict[str, int] = {
    ReportStatus.OK.value: ExitCode.OK.value,
    ReportStatus.REPORT_ONLY.value: ExitCode.OK.value,
    ReportStatus.MISMATCH.value: ExitCode.MISMATCH.value,
    ReportStatus.INVALID.value: ExitCode.INVALID_INPUT.value,
    ReportStatus.ABORTED.value: ExitCode.ABORTED.value,
}

# Algebras whose parameter is the matrix size (gl: Fock n; q family: N)
MATRIX_ALGEBRAS: List[str] = [
    AlgebraName.GL.value,
    AlgebraName.Q.value,
    AlgebraName.SQ.value,
    AlgebraName.PSQ.value,
    AlgebraName.PQ.value,
]

VECTOR_FIELD_ALGEBRAS: List[str] = [
    AlgebraName.VECT.value,
    AlgebraName.SVECT.value,
    AlgebraName.SVECT_TILDE.value,
]

DEFAULT_M = 2
DEFAULT_N = 1
DEFAULT_K = 4
DEFAULT_DEGREE = 4
DEFAULT_SEED = 0
DEFAULT_THREADS = 1
DEFAULT_CACHE_DIR = ".slc_cache"
MAX_M = 8
MAX_SOLVER_M = 6
