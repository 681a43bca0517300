"""Faber polynomials and Grunsky coefficients of a conformal map.

``F_m(z) = sum_n q_{mn} z^n`` and ``F_m(Psi(w)) = w^m + sum_n c_{mn} w^{-n}``.
Both tables come from the recursion

    F_{m+1}(z) = z F_m(z) - m a_m - sum_{n=0}^{m} a_n F_{m-n}(z),

applied once to polynomials in ``z`` (giving ``Q``) and once to Laurent
series in ``w`` after substituting ``z = Psi(w)`` (giving ``C``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conformal import ConformalMap
from .exceptions import RecursionInconsistencyError

__all__ = [
    "FaberTable",
    "faber_coefficients",
    "grunsky_matrix",
    "faber_table",
    "eval_faber",
    "faber_values",
]

DEFAULT_TRUNCATION = 100
_CANCELLATION_TOL = 1e-12


@dataclass(frozen=True)
class FaberTable:
    """Faber data truncated at order ``order``.

    ``Q`` has shape ``(order + 1, order + 1)``: row ``m`` holds the
    coefficients of ``F_m`` by ascending power, so column 0 is the constant
    term.  ``C`` has shape ``(order, order)`` with ``C[m-1, n-1] = c_{mn}``.
    """

    order: int
    gamma: float
    Q: np.ndarray
    C: np.ndarray

    @property
    def Q1(self):
        """The unit lower-triangular block ``(q_{mn})_{m,n>=1}``."""
        return self.Q[1:, 1:]


def faber_coefficients(m: ConformalMap, order: int) -> np.ndarray:
    """Coefficient matrix of ``F_0 .. F_order``, constant column included."""
    if order < 1:
        raise ValueError("order must be >= 1")
    a = m.padded_coeffs(order + 1)
    Q = np.zeros((order + 1, order + 1), complex)
    Q[0, 0] = 1.0
    for k in range(order):
        row = np.zeros(order + 1, complex)
        row[1:k + 2] = Q[k, :k + 1]
        row[0] -= k * a[k]
        row -= a[: k + 1] @ Q[k::-1]
        Q[k + 1] = row
    return Q


def grunsky_matrix(m: ConformalMap, order: int) -> np.ndarray:
    """Grunsky coefficients ``c_{mn}``, ``1 <= m, n <= order``.

    The Faber recursion is run on Laurent series in ``w``.  Each step loses
    one trailing negative power to truncation, so the series are carried down
    to ``w^{-(2 order + K + 2)}``.

    Raises
    ------
    RecursionInconsistencyError
        If a coefficient of ``w^j`` with ``0 <= j <= m``, ``j != m``, fails to
        cancel in ``F_m(Psi(w))``.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    K = m.order
    top = order + 1
    depth = 2 * order + K + 2
    size = top + depth + 1  # index i <-> power top - i
    a = m.padded_coeffs(order + 1)

    psi = np.zeros(size, complex)
    psi[top - 1] = 1.0
    psi[top: top + K + 1] += m.coeffs

    series = np.zeros((order + 1, size), complex)
    series[0, top] = 1.0
    C = np.zeros((order, order), complex)
    for k in range(order):
        prod = np.convolve(psi, series[k])[top: top + size]
        scale = max(1.0, np.abs(prod).max())
        new = prod
        new[top] -= k * a[k]
        new -= a[: k + 1] @ series[k::-1]
        mm = k + 1
        spurious = new[: top + 1].copy()
        spurious[top - mm] -= 1.0
        err = np.abs(spurious).max()
        if err > _CANCELLATION_TOL * scale:
            raise RecursionInconsistencyError(
                f"positive powers failed to cancel in F_{mm}(Psi(w)): residual {err:.3e}"
            )
        new[: top + 1] = 0.0
        new[top - mm] = 1.0
        series[mm] = new
        C[k] = new[top + 1: top + 1 + order]
    return C


def faber_table(m: ConformalMap, order: int = DEFAULT_TRUNCATION) -> FaberTable:
    return FaberTable(order, m.gamma, faber_coefficients(m, order), grunsky_matrix(m, order))


def eval_faber(Q: np.ndarray, m: int, z):
    """Horner evaluation of ``F_m(z)`` from the coefficient table."""
    if not 0 <= m < Q.shape[0]:
        raise ValueError(f"order {m} outside the table (max {Q.shape[0] - 1})")
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in Q[m, m::-1]:
        acc = acc * z + c
    return acc[()] if acc.ndim == 0 else acc


def faber_values(m: ConformalMap, order: int, z) -> np.ndarray:
    """``F_0(z) .. F_order(z)`` stacked along a new leading axis.

    Runs the three-term-style recursion pointwise, which avoids the large
    cancellations of the monomial form at high order.
    """
    z = np.asarray(z, dtype=complex)
    a = m.padded_coeffs(order + 1)
    F = np.empty((order + 1,) + z.shape, complex)
    F[0] = 1.0
    for k in range(order):
        F[k + 1] = z * F[k] - k * a[k] - np.tensordot(a[: k + 1], F[k::-1], axes=1)
    return F
