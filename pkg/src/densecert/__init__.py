"""Computational certificates for density of S-unit groups in local unit groups."""

from .density import DensityReport, SigmaSet, e_plus, g_invariant, is_dense, witness_primes
from .fingroup import FiniteGroup, abelian_invariants, closure, min_generators, quotient
from .hondatate import WeilClass, is_geom_simple, isogclass, weil_class
from .localunits import LocalUnitQuotient, count_mu_p, reduce_elt, residue_units, unit_quotient
from .quadfield import (Ideal, QuadElt, QuadField, cornacchia, make_field, principal_generator,
                        splitting_type, unit_group)
from .quaternion import closure_check, local_units, make_bpinf, norm_elements
from .stabilizer import (TorusFiber, approxtorus_search, find_topgen, is_topological_generator,
                         modular1_certificate, torus_fiber, unitary_index)

__version__ = "0.1.0"
