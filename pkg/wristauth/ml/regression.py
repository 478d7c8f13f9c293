"""
Ridge and lasso least squares for feature selection
"""

from typing import Optional

import numpy as np
from scipy import linalg

from ..core.exceptions import ConvergenceError, DomainError, SingularityError
from ..core.logger import get_logger

logger = get_logger(__name__)

KKT_TOLERANCE = 1e-8
MAX_SWEEPS = 10000


def _design(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise DomainError(f"design matrix must be a non-empty 2-d array, got shape {X.shape}")
    if y.shape[0] != X.shape[0]:
        raise DomainError(f"{X.shape[0]} rows in X but {y.shape[0]} targets")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise DomainError("X and y must be finite")
    return X, y


def ridge_fit(X, y, lam: float) -> np.ndarray:
    """
    Solve min ||X b - y||^2 + lam ||b||^2 through the normal equations

    Args:
        X: (N, d) design matrix
        y: (N,) or (N, k) targets
        lam: Non-negative penalty

    Returns:
        (d,) or (d, k) coefficients
    """
    X, y = _design(X, y)
    if lam < 0:
        raise DomainError(f"ridge penalty must be non-negative, got {lam}")
    d = X.shape[1]
    if lam == 0 and np.linalg.matrix_rank(X) < d:
        raise SingularityError("X is rank deficient; least squares without a penalty has no unique solution")

    gram = X.T @ X + lam * np.eye(d)
    try:
        return linalg.solve(gram, X.T @ y, assume_a='pos')
    except linalg.LinAlgError as e:
        raise SingularityError(f"normal equations are singular: {e}")


def soft_threshold(z: float, t: float) -> float:
    return float(np.sign(z) * max(abs(z) - t, 0.0))


def kkt_violation(X: np.ndarray, y: np.ndarray, beta: np.ndarray, lam: float) -> float:
    """
    Largest violation of the lasso optimality conditions

    With g = 2 X^T (X b - y): g_j = -lam sign(b_j) where b_j != 0, and
    |g_j| <= lam where b_j = 0.
    """
    g = 2.0 * X.T @ (X @ beta - y)
    active = beta != 0
    violation = np.where(active, np.abs(g + lam * np.sign(beta)), np.maximum(np.abs(g) - lam, 0.0))
    return float(np.max(violation)) if violation.size else 0.0


def lasso_fit(X, y, lam: float, tol: float = KKT_TOLERANCE, max_sweeps: int = MAX_SWEEPS,
              beta0: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Coordinate descent for min ||X b - y||^2 + lam ||b||_1

    Each coordinate update is b_j = S(rho_j, lam / 2) / ||X_j||^2 with
    rho_j = X_j^T (r + X_j b_j) and S the soft threshold. Sweeps stop once
    the KKT conditions hold to `tol`.

    Raises:
        ConvergenceError: tolerance not reached after max_sweeps; the last
            iterate is attached as `coefficients`
    """
    X, y = _design(X, y)
    if y.ndim != 1:
        raise DomainError("lasso targets must be one-dimensional")
    if lam < 0:
        raise DomainError(f"lasso penalty must be non-negative, got {lam}")

    d = X.shape[1]
    beta = np.zeros(d) if beta0 is None else np.array(beta0, dtype=np.float64)
    norms = np.sum(X ** 2, axis=0)
    residual = y - X @ beta
    half = lam / 2.0

    violation = kkt_violation(X, y, beta, lam)
    for sweep in range(1, max_sweeps + 1):
        for j in range(d):
            if norms[j] == 0.0:
                beta[j] = 0.0
                continue
            column = X[:, j]
            rho = float(column @ residual) + norms[j] * beta[j]
            updated = soft_threshold(rho, half) / norms[j]
            if updated != beta[j]:
                residual += column * (beta[j] - updated)
                beta[j] = updated
        violation = kkt_violation(X, y, beta, lam)
        if violation <= tol:
            logger.debug(f"Lasso converged in {sweep} sweeps, {int(np.count_nonzero(beta))} non-zero")
            return beta
    raise ConvergenceError("lasso did not converge", max_sweeps, violation, coefficients=beta)


def lambda_max(X, y) -> float:
    """Smallest penalty at which the lasso solution is exactly zero"""
    X, y = _design(X, y)
    return float(2.0 * np.max(np.abs(X.T @ y)))
