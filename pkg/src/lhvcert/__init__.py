"""Certificates for qubit measurement incompatibility and local models.

The package decides, with independently re-checked certificates, two
questions about the noisy qubit measurement family M = eta * projector +
(1 - eta) * identity/2:

* joint measurability of a finite set of such measurements (embedded
  interior-point SDP, `jointmeas`);
* existence of a local hidden variable model for the statistics they
  produce on a shared entangled state (convex splits off a known-local
  Werner component, `lhv`; exact local-polytope membership, `bell`).

Together these locate the window where measurements are provably
incompatible yet provably unable to violate any Bell inequality.
"""

from .linalg import (LinalgError, check_hermitian, herm_eigenvalues,
                     partial_trace, partial_transpose, tensor)
from .quantum import (DensityMatrix, Povm, QuantumError, X_DIR, Y_DIR, Z_DIR,
                      bloch_operator, bloch_vector, born_probability,
                      check_equivalence, noisy_povm, projector, rho_theta_eta,
                      schmidt_ket, schmidt_state, werner)
from .sdp import (SdpError, SdpProblem, SdpSolution, dump_problem, solve,
                  verify_solution)
from .lp import HullMembership, LpError, solve_lp
from .jointmeas import (DIRECTIONS_12, IncompatibilityReport,
                        JointMeasurabilityError, JointObservable,
                        busch_pair_criterion, eta_threshold,
                        fibonacci_directions, jm_check)
from .lhv import (DecompositionError, DecompositionWitness, LhvCurvePoint,
                  MU_LHV, analytic_decomposition, analytic_eta_bound,
                  combined_threshold, condition9, condition9_boundary,
                  lhv_curve, ppt_check, sdp_eta_max)
from .bell import (Behavior, BellError, LocalityReport, build_behavior,
                   chsh_behavior, chsh_settings, chsh_value,
                   deterministic_behaviors, is_local)

__version__ = "1.0.0"

__all__ = [name for name in dir() if not name.startswith("_")]
