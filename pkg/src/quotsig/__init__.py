"""Exact signatures of invariant residue pairings on real quotient singularities."""

from quotsig.exactlin import InertiaTriple, RationalMatrix, inertia
from quotsig.group import AbelianGroup, MatrixAction
from quotsig.poly import OneForm, Poly, differential, parse_poly
from quotsig.quantum import quantum_report
from quotsig.residue import g_signature, omega_module, radial_index_report, residue_pairing

__version__ = "0.1.0"
