"""Single source of truth for every numeric tolerance in the package.

Production code and the test suite import the same constants, so tightening a
bound here tightens both sides at once.
"""
from __future__ import annotations

# numerics
CHOLESKY_JITTER_BASE = 1e-6       # first nonzero rung of the jitter ladder
CHOLESKY_JITTER_MAX = 1e-2        # last rung; beyond this the matrix is broken
CHOLESKY_RECONSTRUCT_RTOL = 1e-12
PSD_NEGATIVE_BAND = 1e-10         # eigenvalues above -band*|M| are clamped to 0
SQRTM_RECONSTRUCT_RTOL = 1e-10
EXPM_INPUT_NORM_LIMIT = 1e8
EXPM_INVERSE_RTOL = 1e-10
VAN_LOAN_QUADRATURE_RTOL = 1e-8
LYAPUNOV_RESIDUAL_RTOL = 1e-10
CONTRACTIVE_MARGIN = 1e-12        # spectral radius must stay below 1 - margin
EIG_RESIDUAL_RTOL = 1e-10
EIG_CONDITION_LIMIT = 1e8         # beyond this the Jordan fallback engages

# certificate
LMI_FEASIBILITY_RTOL = 1e-8       # lambda_max(MJ+J'M+2rhoM) <= rtol*|M|
H_CONTRACTION_RTOL = 1e-8         # HB+B'H - 2*kappa*H >= -rtol*|H|
EIGENVALUE_CLUSTER_RTOL = 1e-6    # eigenvalues closer than this share a block
EPSILON_POLICY_DEFAULT = 0.5      # epsilon = policy * lambda_hat in Jordan mode

# kernel engines
KERNEL_SERIES_THRESHOLD = 1e-4    # gamma*eta below this switches to series path
KERNEL_SERIES_DEGREE = 6          # series orders kept past each entry's leading power
KERNEL_SERIES_CROSSCHECK = 1e-3   # gamma*eta where series and exact must agree
KERNEL_SERIES_CROSSCHECK_RTOL = 1e-9
MEAN_QUADRATURE_WARN = 1e-8       # Richardson gap that only triggers a warning
MEAN_QUADRATURE_FAIL = 1e-5       # Richardson gap that raises
MEAN_QUADRATURE_PANELS = 256
MEAN_QUADRATURE_MIN_PANELS = 64
MEAN_QUADRATURE_NODES = 6

# sampler / diagnostics
NEWTON_GRAD_TOL = 1e-10           # gradient norm at the reported minimizer
NEWTON_MAX_ITER = 200
W2_EIGENVALUE_RIDGE = 1e-9        # stabilizes the Bures cross term
STATIONARY_SPECTRAL_MARGIN = 1e-12

# acceptance criteria
ACCEPT_EXAMPLE_ATOL = 5e-3        # printed-example reproduction band
ACCEPT_KERNEL_MEAN_RTOL = 1e-6
ACCEPT_KERNEL_COV_RTOL = 1e-8
ACCEPT_ITO_SPOT_RTOL = 1e-6
ACCEPT_LOGISTIC_RTOL = 1e-6
ACCEPT_FD_RTOL = 1e-5
ACCEPT_SLOPE_BAND = 0.5
ACCEPT_W2_CONTRACTION_FACTOR = 0.1
ACCEPT_POSTERIOR_SIGMAS = 3.0
ACCEPT_TRACE_AT_1E4 = 0.1

TABLE = {name: value for name, value in sorted(globals().items())
         if name.isupper() and isinstance(value, (int, float))}
