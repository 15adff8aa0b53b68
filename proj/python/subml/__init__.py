"""Early-exit detection with shifted decision boundaries."""

from ._core import (
    ConfigError,
    Infeasible,
    NoConvergence,
    SubmlError,
    SweepAborted,
    __version__,
    ber_sweep,
    complexity_sweep,
    constellation,
    erfc,
    pairwise_error_prob,
    qfunc,
    run_cli,
    ser_bpsk,
    ser_mqam,
    ser_pam4,
    ser_qam16,
    ser_qam16_exact,
    solve_beta,
    union_bound_mimo,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
