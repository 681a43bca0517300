"""Exterior conformal maps ``Psi(w) = w + a_0 + a_1/w + ... + a_K/w^K``.

The map sends ``{|w| > gamma}`` onto the exterior of the inclusion.  Points
are addressed either by ``z`` (physical plane) or by ``w = exp(rho + i theta)``
(modified polar coordinates).  Every function accepts scalars or arrays.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import ConfigurationError, DegenerateMapError

__all__ = [
    "ConformalMap",
    "BoundaryPoint",
    "eval_psi",
    "eval_psi_prime",
    "scale_factor",
    "boundary_point",
    "boundary_polyline",
    "classify_point",
    "INTERIOR",
    "EXTERIOR",
    "BOUNDARY_BAND",
    "load_shape",
    "save_shape",
]

INTERIOR = "interior"
EXTERIOR = "exterior"
BOUNDARY_BAND = "boundary-band"

_INJECTIVITY_SAMPLES = 1024


@dataclass(frozen=True, eq=False)
class ConformalMap:
    """Finite Laurent map with conformal radius ``gamma``.

    Parameters
    ----------
    gamma : float
        Conformal radius, strictly positive.
    coeffs : array_like of complex
        ``a_0, a_1, ..., a_K``.
    eps : float
        Relative width of the band inside ``|w| = gamma`` where evaluation is
        still allowed (the map is assumed to extend analytically there).
    check : bool
        Run the numerical injectivity check on construction.
    """

    gamma: float
    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(1, complex))
    eps: float = 0.05
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if coeffs.ndim != 1 or coeffs.size < 1:
            raise ConfigurationError("coeffs must be a non-empty 1-d sequence a_0..a_K")
        if not np.all(np.isfinite(coeffs)):
            raise ConfigurationError("coeffs must be finite")
        gamma = float(self.gamma)
        if not (np.isfinite(gamma) and gamma > 0):
            raise ConfigurationError(f"gamma must be positive, got {self.gamma!r}")
        if not 0 <= self.eps <= 0.05:
            raise ConfigurationError("eps must lie in [0, 0.05]")
        coeffs.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "coeffs", coeffs)
        if self.check:
            _check_injective(self)

    def __eq__(self, other):
        if not isinstance(other, ConformalMap):
            return NotImplemented
        return (
            self.gamma == other.gamma
            and self.eps == other.eps
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.gamma, self.eps, self.coeffs.tobytes()))

    @classmethod
    def disk(cls, gamma=1.0):
        return cls(gamma, [0.0])

    @property
    def order(self):
        """Index ``K`` of the last Laurent coefficient."""
        return self.coeffs.size - 1

    @property
    def rho0(self):
        return float(np.log(self.gamma))

    @property
    def is_disk(self):
        return not np.any(self.coeffs[1:])

    def coefficient(self, k):
        """``a_k``, zero beyond the stored range."""
        return self.coeffs[k] if 0 <= k < self.coeffs.size else 0j

    def padded_coeffs(self, n):
        """``a_0 .. a_{n-1}`` padded with zeros."""
        out = np.zeros(max(n, self.coeffs.size), complex)
        out[: self.coeffs.size] = self.coeffs
        return out[:n]

    def to_dict(self):
        return {
            "gamma": self.gamma,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data, **kwargs):
        try:
            gamma = float(data["gamma"])
            coeffs = [parse_complex(c) for c in data["coeffs"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"malformed shape description: {exc}") from exc
        return cls(gamma, coeffs, **kwargs)


def parse_complex(c):
    # a real number or an [re, im] pair
    if isinstance(c, (int, float)):
        return complex(float(c))
    re, im = c
    return complex(float(re), float(im))


@dataclass(frozen=True)
class BoundaryPoint:
    theta: float
    rho: float
    z: complex
    h: float


def _as_w(m, w):
    w = np.asarray(w, dtype=complex)
    if np.any(w == 0):
        raise ValueError("w = 0 is not in the domain of the map")
    if np.any(np.abs(w) < m.gamma * (1 - m.eps) * (1 - 1e-12)):
        raise ValueError(
            f"|w| below gamma*(1-eps) = {m.gamma * (1 - m.eps):.6g}; the map is not defined there"
        )
    return w


def _laurent(coeffs, winv):
    # Horner in 1/w: sum_k coeffs[k] * winv**k
    acc = np.zeros_like(winv)
    for c in coeffs[::-1]:
        acc = acc * winv + c
    return acc


def eval_psi(m: ConformalMap, w):
    """``Psi(w) = w + sum_k a_k w^{-k}``."""
    w = _as_w(m, w)
    out = w + _laurent(m.coeffs, 1.0 / w)
    return out[()] if out.ndim == 0 else out


def eval_psi_prime(m: ConformalMap, w):
    """Termwise derivative ``1 - sum_k k a_k w^{-k-1}``."""
    w = _as_w(m, w)
    k = np.arange(m.coeffs.size)
    dcoeffs = -(k * m.coeffs)
    winv = 1.0 / w
    out = 1.0 + _laurent(dcoeffs, winv) * winv
    return out[()] if out.ndim == 0 else out


def scale_factor(m: ConformalMap, rho, theta):
    """``h(rho, theta) = e^rho |Psi'(e^{rho + i theta})|``.

    Raises
    ------
    DegenerateMapError
        If ``h`` drops below ``1e-12`` anywhere.
    """
    rho = np.asarray(rho, dtype=float)
    theta = np.asarray(theta, dtype=float)
    w = np.exp(rho + 1j * theta)
    h = np.exp(rho) * np.abs(eval_psi_prime(m, w))
    if np.any(h < 1e-12):
        raise DegenerateMapError("scale factor vanishes: the map has a critical point on the circle")
    return h[()] if np.ndim(h) == 0 else h


def boundary_point(m: ConformalMap, theta, rho=None):
    rho = m.rho0 if rho is None else float(rho)
    theta = float(np.mod(theta, 2 * np.pi))
    w = np.exp(rho + 1j * theta)
    return BoundaryPoint(theta, rho, complex(eval_psi(m, w)), float(scale_factor(m, rho, theta)))


def boundary_polyline(m: ConformalMap, n_points=2048):
    """Samples ``Psi(gamma e^{i theta_j})`` at ``n_points`` equispaced angles."""
    theta = 2 * np.pi * np.arange(n_points) / n_points
    return eval_psi(m, m.gamma * np.exp(1j * theta))


def _segments_cross(p):
    # Proper crossings between non-adjacent edges of the closed polyline p.
    a = p
    b = np.roll(p, -1)
    n = p.size

    def cross(u, v):
        return u.real * v.imag - u.imag * v.real

    d = b - a
    for i in range(n):
        j = np.arange(i + 2, n)
        if i == 0:
            j = j[:-1]
        if j.size == 0:
            continue
        d1 = cross(d[i], a[j] - a[i])
        d2 = cross(d[i], b[j] - a[i])
        d3 = cross(d[j], a[i] - a[j])
        d4 = cross(d[j], b[i] - a[j])
        if np.any((d1 * d2 < 0) & (d3 * d4 < 0)):
            return True
    return False


def _check_injective(m: ConformalMap):
    theta = 2 * np.pi * np.arange(_INJECTIVITY_SAMPLES) / _INJECTIVITY_SAMPLES
    w = m.gamma * np.exp(1j * theta)
    h = m.gamma * np.abs(eval_psi_prime(m, w))
    z = eval_psi(m, w)
    spacing = np.abs(np.diff(np.append(z, z[0])))
    if h.min() < 1e-12 or spacing.min() < 1e-12 * max(1.0, np.abs(z).max()):
        raise ConfigurationError("map is degenerate on |w| = gamma (vanishing derivative)")
    diam = np.abs(z[:, None] - z[None, :])
    idx = np.arange(z.size)
    sep = np.abs(idx[:, None] - idx[None, :])
    sep = np.minimum(sep, z.size - sep)
    far = diam[sep > 1]
    if far.min() < 1e-9 * diam.max():
        raise ConfigurationError("map is not injective on |w| = gamma (boundary samples coincide)")
    if _segments_cross(z):
        raise ConfigurationError("map is not injective on |w| = gamma (boundary curve self-intersects)")


def _point_segment_distance(z, a, b):
    d = b - a
    t = ((z[:, None] - a[None, :]) * np.conj(d)[None, :]).real / np.abs(d) ** 2
    t = np.clip(t, 0.0, 1.0)
    return np.abs(z[:, None] - (a[None, :] + t * d[None, :])).min(axis=1)


def classify_point(m: ConformalMap, z, n_points=2048, band=1e-9, chunk=4096):
    """Classify points as interior, exterior or boundary-band.

    Uses the winding number of the boundary polyline around each point.
    Points closer to the polyline than ``band * diameter`` are flagged as
    boundary-band.  Returns a string for scalar input, an object array
    otherwise.
    """
    scalar = np.ndim(z) == 0
    zs = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    poly = boundary_polyline(m, n_points)
    nxt = np.roll(poly, -1)
    diameter = np.abs(poly[:, None] - poly[None, ::16]).max()
    out = np.empty(zs.size, dtype=object)
    for start in range(0, zs.size, chunk):
        zc = zs[start:start + chunk]
        rel0 = poly[None, :] - zc[:, None]
        rel1 = nxt[None, :] - zc[:, None]
        with np.errstate(invalid="ignore", divide="ignore"):
            turns = np.angle(rel1 / rel0).sum(axis=1) / (2 * np.pi)
        dist = _point_segment_distance(zc, poly, nxt)
        res = np.where(np.rint(turns) >= 1, INTERIOR, EXTERIOR).astype(object)
        res[~np.isfinite(turns) | (dist <= band * diameter)] = BOUNDARY_BAND
        out[start:start + chunk] = res
    if scalar:
        return out[0]
    return out.reshape(np.shape(z))


def load_shape(path, **kwargs) -> ConformalMap:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ConfigurationError(f"shape file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"shape file {path} is not valid JSON: {exc}") from exc
    return ConformalMap.from_dict(data, **kwargs)


def save_shape(m: ConformalMap, path):
    Path(path).write_text(json.dumps(m.to_dict(), indent=2) + "\n")
