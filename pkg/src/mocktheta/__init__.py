"""mocktheta: exact q-series arithmetic and high-precision verification tools
for Ramanujan's third-order mock theta function f(q), its exact coefficient
formulas, and the partial theta function that continues it past the unit
circle.

The library has three layers:

* exact formal series (`series`, `arith`): rational-coefficient truncated
  Puiseux series, Dedekind sums, Kronecker symbols, Kloosterman-type sums;
* high-precision kernels and evaluators (`kernels`, `coefficients`,
  `boundary`): closed-form half-order Bessel kernels, the Laurent kernel and
  its contour transform, exact-formula coefficients, and the two-sided
  function F(z) with reference evaluators on both sides of the unit circle;
* completions and radial tooling (`completion`, `wrt`): the harmonic
  completion of f, generic Eichler integrals, modularity defect checks, and
  radial limits of the Poincare-sphere partial thetas.

Every analytic value is cross-checked against an independent oracle in the
test suite; the `mocktheta` CLI exposes the same checks as `verify` suites.
"""

from .arith import (Phase, dedekind_sum, dedekind_sum_reciprocity,
                    kloosterman_A, kronecker, omega, sawtooth)
from .boundary import (EvalReport, F_eval, QuadratureParams, compare, f_of_q,
                       f_ref, phi_dk, phi_dk_series, psi_ref)
from .coefficients import (CoefficientEstimate, adaptive_truncation, alpha,
                           alpha_exact, alpha_tilde, alpha_tilde_expected)
from .completion import (R3, UnaryThetaSpec, eichler_integral, g3_spec, h3hat,
                         modularity_check, wrt_theta_spec)
from .config import Config, __version__
from .kernels import (B_k, KernelParams, a_k, b_m, bessel_I_half,
                      bessel_J_half, erfc, inc_gamma_half)
from .series import (FracPowSeries, SeriesIdentityReport, false_theta_F,
                     mock_theta_f, mock_theta_f2, mock_theta_f2_outer,
                     mock_theta_f_outer, partial_theta, partial_theta_psi,
                     qpochhammer, verify_identity, wrt_A, wrt_chi60,
                     zwegers_phi, zwegers_phi_star)
from .wrt import (RadialEstimate, radial_limit, radial_profile,
                  wrt_A_evaluator, zwegers_identities)
