"""Interface parameter ``p`` on the inclusion boundary.

The design variable is the weighted product ``h p`` on ``|w| = gamma``,
expanded as ``sum_n p_n w^n``.  Reality of ``h p`` forces
``p_{-n} = conj(p_n) gamma^{2n}``, so only ``p_0`` (real) and ``p_1, p_2,
...`` are stored.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .conformal import ConformalMap, parse_complex, scale_factor
from .exceptions import ConfigurationError, NonRealInterfaceError

__all__ = [
    "InterfaceFunction",
    "InterfaceMatrices",
    "build_interface_matrices",
    "eval_p",
    "min_p",
    "load_interface",
    "save_interface",
]


@dataclass(frozen=True, eq=False)
class InterfaceFunction:
    gamma: float
    p_coeffs: np.ndarray

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.p_coeffs, dtype=complex)).copy()
        if p.ndim != 1 or p.size < 1:
            raise ConfigurationError("p_coeffs must be a non-empty 1-d sequence p_0..p_{N-1}")
        if not np.all(np.isfinite(p)):
            raise ConfigurationError("p_coeffs must be finite")
        if p[0].imag != 0:
            raise ConfigurationError(f"p_0 must be real, got {p[0]}")
        if not self.gamma > 0:
            raise ConfigurationError("gamma must be positive")
        p.setflags(write=False)
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "p_coeffs", p)

    def __eq__(self, other):
        if not isinstance(other, InterfaceFunction):
            return NotImplemented
        return self.gamma == other.gamma and np.array_equal(self.p_coeffs, other.p_coeffs)

    def __hash__(self):
        return hash((self.gamma, self.p_coeffs.tobytes()))

    @classmethod
    def constant(cls, gamma, p0):
        return cls(gamma, [p0])

    def coefficient(self, n):
        """``p_n`` for any integer ``n``."""
        k = abs(int(n))
        if k >= self.p_coeffs.size:
            return 0j
        if n >= 0:
            return self.p_coeffs[k]
        return np.conj(self.p_coeffs[k]) * self.gamma ** (2 * k)

    def coefficients(self, indices):
        """Vectorised :meth:`coefficient`."""
        idx = np.asarray(indices)
        k = np.abs(idx)
        out = np.zeros(idx.shape, complex)
        ok = k < self.p_coeffs.size
        vals = self.p_coeffs[np.where(ok, k, 0)]
        neg = idx < 0
        vals = np.where(neg, np.conj(vals) * self.gamma ** (2.0 * k), vals)
        out[ok] = vals[ok]
        return out

    def weighted_values(self, w):
        """``h p`` on the circle as the two-sided Laurent sum (complex, for checking)."""
        w = np.asarray(w, dtype=complex)
        n = np.arange(-(self.p_coeffs.size - 1), self.p_coeffs.size)
        c = self.coefficients(n)
        return np.tensordot(c, w[None, ...] ** n.reshape((-1,) + (1,) * w.ndim), axes=1)

    def to_dict(self):
        return {"p": [[float(c.real), float(c.imag)] for c in self.p_coeffs]}

    @classmethod
    def from_dict(cls, data, gamma):
        try:
            p = [parse_complex(c) for c in data["p"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"malformed interface description: {exc}") from exc
        return cls(gamma, p)


@dataclass(frozen=True)
class InterfaceMatrices:
    """Hankel ``P_plus[m, n] = p_{m+n} gamma^{m+n}`` and Hermitian Toeplitz
    ``P_minus[m, n] = p_{m-n} gamma^{m-n}`` (indices from 1).

    ``p`` keeps ``p_0 .. p_order`` for the zero-mode equation of the full
    model.
    """

    P_plus: np.ndarray
    P_minus: np.ndarray
    p: np.ndarray | None = None


def build_interface_matrices(ifn: InterfaceFunction, order: int) -> InterfaceMatrices:
    if order < 1:
        raise ValueError("order must be >= 1")
    n = np.arange(1, order + 1)
    s = n[:, None] + n[None, :]
    d = n[:, None] - n[None, :]
    g = ifn.gamma
    P_plus = ifn.coefficients(s) * g ** s.astype(float)
    P_minus = ifn.coefficients(d) * g ** d.astype(float)
    return InterfaceMatrices(P_plus, P_minus, ifn.coefficients(np.arange(order + 1)))


def eval_p(ifn: InterfaceFunction, m: ConformalMap, theta, rtol=1e-12):
    """Physical interface parameter ``p(theta) = (h p)(theta) / h(rho_0, theta)``.

    Raises
    ------
    NonRealInterfaceError
        If the Laurent sum has an imaginary part above ``rtol`` relative to
        its magnitude.
    """
    theta = np.asarray(theta, dtype=float)
    w = m.gamma * np.exp(1j * theta)
    hp = ifn.weighted_values(w)
    scale = max(np.abs(hp).max(), np.finfo(float).tiny)
    if np.abs(hp.imag).max() > rtol * scale:
        raise NonRealInterfaceError("interface Laurent sum is not real on |w| = gamma")
    out = hp.real / scale_factor(m, m.rho0, theta)
    return out[()] if out.ndim == 0 else out


def min_p(ifn: InterfaceFunction, m: ConformalMap, n_samples=512):
    """Smallest physical ``p(theta)`` over equispaced samples.

    Designs are not constrained to ``p > 0``; this is reported as a
    diagnostic only.
    """
    theta = 2 * np.pi * np.arange(n_samples) / n_samples
    return float(np.min(eval_p(ifn, m, theta)))


def load_interface(path, gamma) -> InterfaceFunction:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ConfigurationError(f"interface file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"interface file {path} is not valid JSON: {exc}") from exc
    return InterfaceFunction.from_dict(data, gamma)


def save_interface(ifn: InterfaceFunction, path):
    Path(path).write_text(json.dumps(ifn.to_dict(), indent=2) + "\n")
