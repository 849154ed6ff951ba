import numpy as np
from scipy import special

from emiclean.evaluation.schemas import WelchResult


def welch_t_test(a, b) -> WelchResult:
    """Two-sided Welch t-test of mean(a) == mean(b).

    The p-value is the Student-t tail via the regularized incomplete beta
    function: p = I_{dof / (dof + t^2)}(dof / 2, 1 / 2).

    Raises ValueError if either sample has fewer than 2 values.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    n_a, n_b = a.size, b.size
    if n_a < 2 or n_b < 2:
        raise ValueError(f"Welch t-test needs at least 2 samples per side, got {n_a} and {n_b}")

    diff = a.mean() - b.mean()
    var_a = a.var(ddof=1) / n_a
    var_b = b.var(ddof=1) / n_b
    se2 = var_a + var_b

    if se2 == 0.0:
        dof = float(n_a + n_b - 2)
        if diff == 0.0:
            return WelchResult(t=0.0, dof=dof, p_value=1.0)
        return WelchResult(t=float(np.copysign(np.inf, diff)), dof=dof, p_value=0.0)

    t = diff / np.sqrt(se2)
    dof = se2**2 / (var_a**2 / (n_a - 1) + var_b**2 / (n_b - 1))
    p = special.betainc(dof / 2.0, 0.5, dof / (dof + t**2))
    return WelchResult(t=float(t), dof=float(dof), p_value=float(np.clip(p, 0.0, 1.0)))
