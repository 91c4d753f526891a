"""Disc functionals, glued-disc certificates and envelope bounds for extremal functions."""
from .boundary import Arc, AtomicMeasure, BlaschkeData, BoundaryGrid, RationalOuter
from .discs import Ball, Box, ClosedPolyDisc, FactoredComponent, FactoredDisc, LiftedDisc, SetGeometry, Shell, lift
from .functionals import I_of, J_of, nu_of, nu_of_lifted
from .envelope import EnvelopeResult, best_envelope, envelope_ball, envelope_glued, envelope_rational
from .hull import HullVerdict, hull_test
from .oracle import closed_form, pde_green, poly_lower

__version__ = "0.1.0"
