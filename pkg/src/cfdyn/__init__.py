"""Diamond complex continued fractions, their natural extension, and exact region checks."""
from .arith import (DIH4, S, T, T_INV, U, U_INV, DihedralElement, GaussianInt, MoebiusMap,
                    RationalComplex, format_complex, moebius_apply, parse_complex)
from .cf import (DIAMOND, HURWITZ, ChoiceFunction, Expansion, check_identity_residual,
                 choice_diamond, choice_hurwitz, convergents, evaluate_cf, expand, f_empty)
from .compare import EqualityOptions, Verdict, region_contains, region_equal
from .diamond import PHI, W, classify_cell, f_diamond, verify_partition_lemma
from .natext import (A, D, V, Z, F_diamond, build_psi, orbit_until_V, psi, trap_experiment,
                     verify_bijectivity, verify_psi)
from .regions import Circline, HalfSpace, Region

__version__ = "0.1.0"
