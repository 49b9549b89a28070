"""Default numerical tolerances, shared across the package.

All computations are sums and products of O(10^3) unit-scale terms in double
precision, so equality-type residuals sit far below 1e-10 while eigenvalue
clipping needs the slightly looser 1e-9.  Functions take these as default
arguments; the CLI can override them per run.
"""

TOL_EQ = 1e-10     # entrywise operator equality / commutator residuals
TOL_HERM = 1e-10   # hermiticity defect
TOL_PSD = 1e-9     # most-negative eigenvalue allowed for "positive"
TOL_TRACE = 1e-10  # trace normalization defect
TOL_SUPP = 1e-12   # pmf support membership threshold
TOL_FEAS = 1e-7    # feasibility residual for the joint-state solver
TOL_DFT = 1e-9     # spectral-support violations in Fourier tables

SVD_CUTOFF = 1e-8  # relative singular-value cutoff for rank/nullspace calls
MAX_ITER_FEAS = 5000  # alternating-projection iteration cap

#: Names accepted by the CLI's --tol KEY=VAL overrides.
TOLERANCE_KEYS = (
    "tol_eq",
    "tol_herm",
    "tol_psd",
    "tol_trace",
    "tol_supp",
    "tol_feas",
    "tol_dft",
)


def defaults() -> dict:
    """Return the default tolerance set as a plain dict."""
    return {
        "tol_eq": TOL_EQ,
        "tol_herm": TOL_HERM,
        "tol_psd": TOL_PSD,
        "tol_trace": TOL_TRACE,
        "tol_supp": TOL_SUPP,
        "tol_feas": TOL_FEAS,
        "tol_dft": TOL_DFT,
    }
