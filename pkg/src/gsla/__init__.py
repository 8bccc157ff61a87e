"""gsla: exact-arithmetic computations with group-graded Lie algebras,
loop algebras g(Q,P,a), and graded modules M(Q,P,V)."""

from .errors import GslaError
from .fields import Cyclotomic, PrimeField, Rationals, cyclotomic_polynomial, rational_reconstruct
from .groups import FinAbGroup, Subgroup, characters, subgroup_generate
from .idempotent import CommAlgebra, idempotents_commutative
from .lie import GradedLieAlgebra
from .linalg import Matrix, Subspace
from .gradedmod import GradedModule, loop_module, reconstruct_module, weyl_decompose
from .loopalg import LoopAlgebra, loop_algebra, loop_ideal_decomposition, recognize

__version__ = "0.1.0"

__all__ = [
    "GslaError",
    "Rationals", "Cyclotomic", "PrimeField",
    "cyclotomic_polynomial", "rational_reconstruct",
    "FinAbGroup", "Subgroup", "characters", "subgroup_generate",
    "CommAlgebra", "idempotents_commutative",
    "Matrix", "Subspace",
    "GradedLieAlgebra", "GradedModule",
    "LoopAlgebra", "loop_algebra", "loop_ideal_decomposition", "recognize",
    "loop_module", "reconstruct_module", "weyl_decompose",
    "__version__",
]
