"""Potential evaluation, boundary verification and grid/contour export.

Inside the inclusion ``u = c + Re sum_m sum_n beta_mn F_n(z)``, where the
constant ``c`` is zero except under the full model; outside
``u = H(z) + Re sum_m sum_n s_mn w^{-n}`` with ``z = Psi(w)``.  On the
circle ``|w| = gamma`` both series are rewritten as Laurent series in ``w``,
which is how the interface conditions are checked.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from skimage.measure import find_contours

from .conformal import (
    BOUNDARY_BAND,
    EXTERIOR,
    INTERIOR,
    ConformalMap,
    boundary_polyline,
    classify_point,
    eval_psi,
    eval_psi_prime,
    scale_factor,
)
from .exceptions import InversionError
from .faber import faber_values
from .interface import InterfaceFunction
from .tensors import MaterialParams, SolutionCoefficients, TensorSet

__all__ = [
    "FieldGrid",
    "ResidualReport",
    "invert_psi",
    "eval_exterior",
    "eval_interior",
    "eval_field",
    "boundary_residual",
    "multipole_coefficients",
    "sample_grid",
    "contour_paths",
    "grid_to_csv",
    "grid_to_json",
    "contours_to_svg",
]

DEFAULT_LEVELS = 21


@dataclass(frozen=True)
class FieldGrid:
    """Potential sampled on a rectangle; ``values`` and ``mask`` are ``(ny, nx)``."""

    bounds: tuple
    resolution: tuple
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    mask: np.ndarray


@dataclass(frozen=True)
class ResidualReport:
    max_flux_residual: float
    max_jump_residual: float
    n_collocation: int

    def within(self, tol):
        return self.max_flux_residual <= tol and self.max_jump_residual <= tol

    def to_dict(self):
        return {
            "max_flux_residual": self.max_flux_residual,
            "max_jump_residual": self.max_jump_residual,
            "n_collocation": self.n_collocation,
        }


# ---------------------------------------------------------------- inversion

def _seed_table(m: ConformalMap, n_seeds=2048):
    n_theta = n_seeds // 8
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    radii = m.gamma * np.geomspace(1.0, 4.0, 8)
    w = (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()
    return w, eval_psi(m, w)


def invert_psi(m: ConformalMap, z, tol=1e-12, max_iter=60, n_seeds=2048):
    """Solve ``Psi(w) = z`` with ``|w| > gamma`` by Newton's method.

    Seeds come from the nearest precomputed annulus sample, or from
    ``z - a_0`` for points far outside the annulus.

    Raises
    ------
    InversionError
        If some point does not converge to ``tol * max(1, |z|)``.
    """
    z = np.asarray(z, dtype=complex)
    zs = np.atleast_1d(z).ravel()
    w_tab, z_tab = _seed_table(m, n_seeds)
    reach = np.abs(z_tab).max()
    w = zs - m.coeffs[0]
    near = np.abs(zs) <= 1.5 * reach
    if np.any(near):
        idx = np.abs(zs[near, None] - z_tab[None, :]).argmin(axis=1)
        w[near] = w_tab[idx]
    # Psi is defined a little inside the circle, so boundary points still converge
    floor = m.gamma * (1 - 1e-3)
    scale = np.maximum(1.0, np.abs(zs))
    done = np.zeros(zs.size, bool)
    for _ in range(max_iter):
        act = ~done
        if not act.any():
            break
        wa = w[act]
        f = eval_psi(m, wa) - zs[act]
        conv = np.abs(f) <= tol * scale[act]
        step = f / eval_psi_prime(m, wa)
        wn = wa - np.where(conv, 0, step)
        r = np.abs(wn)
        inside = r < floor
        wn[inside] = wn[inside] / r[inside] * floor
        w[act] = wn
        done[np.flatnonzero(act)[conv]] = True
    resid = np.abs(eval_psi(m, w) - zs)
    bad = resid > tol * scale * 10
    if np.any(bad):
        raise InversionError(
            f"Psi inversion failed at {int(bad.sum())} point(s); worst residual {resid.max():.3e}"
        )
    return w.reshape(z.shape)[()] if z.ndim == 0 else w.reshape(z.shape)


# ---------------------------------------------------------------- evaluation

def _incident(sol: SolutionCoefficients, m: ConformalMap, z):
    rows = np.flatnonzero(sol.alpha)
    if rows.size == 0:
        return np.zeros(np.shape(z))
    top = rows.max() + 1
    F = faber_values(m, top, z)
    H = np.tensordot(sol.alpha[:top], F[1:top + 1], axes=1)
    return H.real


def _horner_inverse(coeffs, winv):
    # sum_{n>=1} coeffs[n-1] winv^n
    acc = np.zeros_like(winv)
    for c in coeffs[::-1]:
        acc = (acc + c) * winv
    return acc


def eval_exterior(sol: SolutionCoefficients, m: ConformalMap, z=None, w=None, return_tail=False):
    """Exterior potential at ``z`` (inverted internally) or directly at ``w``.

    With ``return_tail`` also returns a bound on the last retained series term,
    ``|sum_m s_mN| |w|^{-N}``.
    """
    if w is None:
        if z is None:
            raise ValueError("give z or w")
        w = invert_psi(m, z)
    w = np.asarray(w, dtype=complex)
    z = eval_psi(m, w)
    S = sol.s.sum(axis=0)
    u = _incident(sol, m, z) + _horner_inverse(S, 1.0 / w).real
    if return_tail:
        tail = np.abs(S[-1]) * np.abs(w) ** (-float(S.size))
        return u, tail
    return u


def eval_interior(sol: SolutionCoefficients, m: ConformalMap, z):
    """Interior potential ``Re sum_n (sum_m beta_mn) F_n(z)`` plus the interior constant."""
    z = np.asarray(z, dtype=complex)
    B = sol.beta.sum(axis=0)
    F = faber_values(m, B.size, z)
    return np.tensordot(B, F[1:], axes=1).real + float(np.sum(sol.const))


def eval_field(sol: SolutionCoefficients, m: ConformalMap, z, n_points=2048, band=1e-9):
    """Potential at arbitrary points; boundary-band points get NaN.

    Returns ``(values, labels)``.
    """
    z = np.asarray(z, dtype=complex)
    labels = classify_point(m, z, n_points=n_points, band=band)
    labels = np.asarray(labels, dtype=object).reshape(z.shape)
    u = np.full(z.shape, np.nan)
    ins = labels == INTERIOR
    out = labels == EXTERIOR
    if np.any(ins):
        u[ins] = eval_interior(sol, m, z[ins])
    if np.any(out):
        u[out] = eval_exterior(sol, m, z=z[out])
    return u, labels


# ---------------------------------------------------------------- verification

def _boundary_series(sol: SolutionCoefficients):
    """Laurent coefficients of u on both sides of |w| = gamma.

    Returns ``(ext_pos, ext_neg, int_pos, int_neg)`` where ``*_pos[n-1]``
    multiplies ``w^n`` and ``*_neg[n-1]`` multiplies ``w^{-n}``.
    """
    rows = np.flatnonzero(sol.alpha)
    N = sol.order
    ext_pos = sol.alpha.copy()
    ext_neg = (sol.alpha[rows][:, None] * sol.C[rows]).sum(axis=0) + sol.s.sum(axis=0)
    int_pos = sol.beta.sum(axis=0)
    int_neg = (sol.beta[rows] @ sol.C).sum(axis=0) if rows.size else np.zeros(N, complex)
    return ext_pos, ext_neg, int_pos, int_neg


def _series_on_circle(pos, neg, w):
    n = np.arange(1, pos.size + 1)
    Wp = w[:, None] ** n[None, :]
    Wn = w[:, None] ** (-n[None, :].astype(float))
    val = Wp @ pos + Wn @ neg
    drho = Wp @ (n * pos) - Wn @ (n * neg)
    return val, drho


def boundary_residual(
    sol: SolutionCoefficients,
    m: ConformalMap,
    ifn: InterfaceFunction,
    mat: MaterialParams,
    n_collocation: int = 256,
    mode: str = "analytic",
    fd_step: float = 1e-6,
) -> ResidualReport:
    """Pointwise check of flux continuity and the imperfect-interface condition.

    At equispaced ``theta_j`` the one-sided ``rho``-derivatives of the two
    series are formed (termwise by default, by one-sided differences at
    ``rho_0 +- fd_step`` with ``mode="fd"``).  Residuals are expressed as
    normal-flux quantities (divided by ``h``) and normalised by the largest
    boundary flux scale ``max(sigma_m |grad u+|, sigma_c |grad u-|)``.
    """
    theta = 2 * np.pi * np.arange(n_collocation) / n_collocation
    g = m.gamma
    w = g * np.exp(1j * theta)
    h = scale_factor(m, m.rho0, theta)
    ep, en, ip, in_ = _boundary_series(sol)
    c0 = float(np.sum(sol.const))
    if mode == "analytic":
        ue, de = _series_on_circle(ep, en, w)
        ui, di = _series_on_circle(ip, in_, w)
        u_out, u_in = ue.real, ui.real + c0
        du_out, du_in = de.real, di.real
        dth_out, dth_in = (1j * de).real, (1j * di).real
    elif mode == "fd":
        def vals(pos, neg, r):
            return _series_on_circle(pos, neg, r * np.exp(1j * theta))[0].real

        ed = np.exp(fd_step)
        u_out, u_in = vals(ep, en, g), vals(ip, in_, g) + c0
        du_out = (-3 * u_out + 4 * vals(ep, en, g * ed) - vals(ep, en, g * ed ** 2)) / (2 * fd_step)
        du_in = (3 * u_in - 4 * vals(ip, in_, g / ed) + vals(ip, in_, g / ed ** 2)) / (2 * fd_step)
        dth_out = np.gradient(np.append(u_out, u_out[:1]), 2 * np.pi / n_collocation)[:-1]
        dth_in = np.gradient(np.append(u_in, u_in[:1]), 2 * np.pi / n_collocation)[:-1]
    else:
        raise ValueError(f"unknown mode {mode!r}")

    hp = ifn.weighted_values(w).real
    flux = (mat.sigma_m * du_out - mat.sigma_c * du_in) / h
    jump = (hp * (u_out - u_in) - mat.sigma_m * du_out) / h
    grad_out = np.hypot(du_out, dth_out) / h
    grad_in = np.hypot(du_in, dth_in) / h
    scale = max(mat.sigma_m * grad_out.max(), mat.sigma_c * grad_in.max(), np.finfo(float).tiny)
    return ResidualReport(
        float(np.abs(flux).max() / scale),
        float(np.abs(jump).max() / scale),
        int(n_collocation),
    )


def multipole_coefficients(ts: TensorSet, alpha, n_max=None):
    """Coefficients of ``z^{-n}`` in ``u - H``, ``n = 1 .. n_max``.

    ``alpha`` are the monomial coefficients of ``H = Re sum alpha_m z^m``.
    Coefficient ``n`` equals ``-sum_m (alpha_m N1_mn + conj(alpha_m) N2_mn) / (4 pi n)``.
    """
    k = ts.report if n_max is None else n_max
    if k > ts.report:
        raise ValueError(f"only {ts.report} orders available")
    a = np.zeros(ts.report, complex)
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    if alpha.size > ts.report:
        raise ValueError("alpha has more orders than the reported tensors")
    a[: alpha.size] = alpha
    n = np.arange(1, k + 1)
    tot = a @ ts.N1[:, :k] + np.conj(a) @ ts.N2[:, :k]
    return -tot / (4 * np.pi * n)


# ---------------------------------------------------------------- grids and export

def sample_grid(sol: SolutionCoefficients, m: ConformalMap, bounds, resolution, n_points=2048) -> FieldGrid:
    """Sample ``u`` on ``bounds = (x0, x1, y0, y1)`` with ``resolution = (nx, ny)``."""
    x0, x1, y0, y1 = map(float, bounds)
    nx, ny = map(int, resolution)
    if nx < 2 or ny < 2:
        raise ValueError("resolution must be at least 2x2")
    if not (x1 > x0 and y1 > y0):
        raise ValueError("bounds must satisfy x0 < x1 and y0 < y1")
    x = np.linspace(x0, x1, nx)
    y = np.linspace(y0, y1, ny)
    Z = x[None, :] + 1j * y[:, None]
    u, labels = eval_field(sol, m, Z, n_points=n_points)
    return FieldGrid((x0, x1, y0, y1), (nx, ny), x, y, u, labels)


def contour_paths(grid: FieldGrid, levels=DEFAULT_LEVELS):
    """Marching-squares level sets as ``[(level, [xy_array, ...]), ...]``.

    ``levels`` is either a count of evenly spaced interior levels or an
    explicit sequence.
    """
    finite = np.isfinite(grid.values)
    if not finite.any():
        return []
    if np.isscalar(levels):
        lo, hi = grid.values[finite].min(), grid.values[finite].max()
        if hi <= lo:
            return []
        levels = np.linspace(lo, hi, int(levels) + 2)[1:-1]
    img = np.where(finite, grid.values, 0.0)
    dx = (grid.x[-1] - grid.x[0]) / (grid.x.size - 1)
    dy = (grid.y[-1] - grid.y[0]) / (grid.y.size - 1)
    out = []
    for lev in levels:
        paths = []
        for c in find_contours(img, float(lev), mask=finite):
            xs = grid.x[0] + c[:, 1] * dx
            ys = grid.y[0] + c[:, 0] * dy
            paths.append(np.column_stack([xs, ys]))
        out.append((float(lev), paths))
    return out


def grid_to_csv(grid: FieldGrid, path=None):
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["x", "y", "u", "region"])
    for j, yv in enumerate(grid.y):
        for i, xv in enumerate(grid.x):
            u = grid.values[j, i]
            wr.writerow([f"{xv:.12g}", f"{yv:.12g}", "" if not np.isfinite(u) else f"{u:.15g}", grid.mask[j, i]])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def grid_to_json(grid: FieldGrid, path=None):
    data = {
        "bounds": list(grid.bounds),
        "resolution": list(grid.resolution),
        "x": [float(v) for v in grid.x],
        "y": [float(v) for v in grid.y],
        "u": [[None if not np.isfinite(v) else float(v) for v in row] for row in grid.values],
        "region": [[str(v) for v in row] for row in grid.mask],
    }
    text = json.dumps(data) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def contours_to_svg(grid: FieldGrid, contours, path=None, boundary=None, stroke=0.01):
    """Write level sets as SVG polylines; y is flipped so the plot reads upright."""
    x0, x1, y0, y1 = grid.bounds
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.6g} {-y1:.6g} {x1 - x0:.6g} {y1 - y0:.6g}">',
    ]
    nlev = max(len(contours), 1)
    for k, (lev, paths) in enumerate(contours):
        hue = int(240 * (1 - k / max(nlev - 1, 1)))
        parts.append(f'<g data-level="{lev:.10g}" stroke="hsl({hue},80%,45%)" fill="none" stroke-width="{stroke:g}">')
        for p in paths:
            pts = " ".join(f"{px:.6f},{-py:.6f}" for px, py in p)
            parts.append(f'<polyline points="{pts}"/>')
        parts.append("</g>")
    if boundary is not None:
        pts = " ".join(f"{b.real:.6f},{-b.imag:.6f}" for b in boundary)
        parts.append(f'<polygon points="{pts}" fill="none" stroke="black" stroke-width="{2 * stroke:g}"/>')
    parts.append("</svg>")
    text = "\n".join(parts) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
