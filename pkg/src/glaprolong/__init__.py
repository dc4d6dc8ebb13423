"""Exact Tanaka prolongations of pseudo H-type algebras built from Cayley algebras."""

from .algebra import AlgebraTable, cayley_double, complexify, named_cayley
from .catalog import build, crosscheck_table, load
from .gla import GradedLieAlgebra, StructureReport, Verdict, killing_form, structure_report
from .htype import (
    PseudoHTypeAlgebra,
    build_first_class,
    build_second_class,
    build_third_class,
    check_clifford,
    check_j2_condition,
    rescale,
)
from .models import (
    MatricialModel,
    build_model_first_class,
    build_model_second_class,
    build_model_third_class,
    psi_map,
    psi_maps,
)
from .prolong import ProlongationResult, assemble, conformal_prolongation, full_prolongation

__version__ = "0.1.0"
