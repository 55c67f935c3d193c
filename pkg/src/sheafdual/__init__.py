"""Finite lattices with operators, their sheaf duals, and many-valued forcing."""
from .enumeration import generate_corpus, join_irreducibles, posets
from .errors import *  # noqa: F401,F403
from .ideals import (congruence_generated, congruence_lattice, enumerate_ideals,
                     gratzer_schmidt_check, ideal_generated, quotient)
from .lattice import (BLO, FiniteLattice, Homomorphism, NoWitnessUpTo, NotEpi, boolean_lattice,
                      build_blo, build_lattice, chain, enumerate_homomorphisms, is_epi_upto,
                      nr, product, zd)
from .priestley import duality_unit, spectrum
from .sheaf import build_sheaf, eta, regular_ideal_open_iso, stone_specialize

__version__ = "0.1.0"
