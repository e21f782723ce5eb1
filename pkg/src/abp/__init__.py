"""Proper holomorphic annulus-to-disk maps and Cantor-circle combinatorics.

Library surface, one module per concern:

- ``numerics``: contours, winding numbers, polynomial and scalar root finding
- ``divisors``: weighted point sets in tagged domains
- ``disk``: finite Blaschke products and the conformal barycenter
- ``annulus``: existence, construction and verification of proper maps A_r -> D
- ``harmonic``: harmonic measures on circle domains and the divisor criterion
- ``model``: global coordinates on the space of annulus-disk maps
- ``schemes``: exact mapping-scheme combinatorics
- ``mcmullen``: escape-time dynamics for z^m + c z^(-ell)
"""

from .annulus import (AnnulusProperMap, ExistenceReport, VerificationReport,
                      build, evaluate, evaluate_raw, existence_check, fiber,
                      radial_correct, verify)
from .disk import (BlaschkeProduct, FIXED_POINT_CENTERED, NO_CENTERING,
                   ZERO_CENTERED, conformal_barycenter, eval_blaschke,
                   make_centered)
from .divisors import (Ambient, Annulus, CircleDomainAmbient, Disk, Divisor,
                       Plane, PuncturedPlane)
from .errors import (AbpError, BadBracket, ClassViolation, DegenerateInput,
                     EmptyRange, ExistenceViolation, IncompleteFiber,
                     NoConvergence, NotCantorCircle, NotHyperbolicEvidence,
                     NumericsError, OutOfDomain, ParityViolation,
                     PoleProximity, Stuck, TruncationOverflow, Unfixable,
                     ValidationError, ZeroOnContour)
from .harmonic import (AbelReport, Circle, CircleDomain, HarmonicMeasure,
                       abel_adjust, abel_condition, harmonic_measure_annulus,
                       solve_harmonic_measure)
from .mcmullen import (ClassificationReport, ClassifyParams, GrotzschDiagnostic,
                       McMullenMap, OrbitSummary, RasterImage,
                       classify_cantor_circle, escape_steps, grotzsch_check,
                       iterate, render_julia, twist_map)
from .model import (ModelCoordinates, NormalizedDivisor, balanced_locus_classifier,
                    from_model_coordinates, mobius_band_point, phi_r, psi_r,
                    sym_e, to_model_coordinates)
from .numerics import (Contour, DEFAULT_TOL, Tolerance, find_root_monotone,
                       polynomial_roots, winding_number)
from .schemes import (AutBound, Characteristic, MappingScheme, MarkingCounts,
                      PartitionVector, TYPE_I, TYPE_II, TYPE_III, aut_bound,
                      covering_degree, enumerate_admissible, is_admissible,
                      is_rho_homeomorphism, marking_counts, p2_fiber_bound,
                      rot_group_order_divisors, scheme_tau,
                      torus_cover_criterion)

__version__ = "0.1.0"
