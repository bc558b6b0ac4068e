"""Quantum double D(G): exact finite-group engine and a D(SU(2)) numerical engine."""

from . import _backend as backend
from .catalog import builtin_group, load_group_file, resolve_group
from .double import (DoubleAlgebraElement, DoubleIrrep, FusionDisagreement, TensorState,
                     all_irreps, antipode, braid, braid_inverse, comultiply, counit,
                     find_irrep, fusion_multiplicities, fusion_table, multiply, point_mass,
                     r_element, star, unit, verify_hopf)
from .dsu2 import (GenericIrrepLabel, dsu2_cgc, lambda_map, nu_density, orthogonality_gram,
                   theta_from_r3)
from .finite_group import FiniteGroup, GroupError, conjugacy_classes, double_cosets
from .su2 import su2_cgc, wigner_D, wigner_d

__version__ = "0.1.0"
