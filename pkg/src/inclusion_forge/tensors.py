"""Matrix formulas for the Faber-polynomial and generalized polarization tensors.

All semi-infinite matrices are truncated to ``order x order`` with indices
starting at 1.  Diagonal weights ``gamma^{t n}`` are applied by broadcasting
rather than by forming diagonal matrices.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.linalg as sla

from .conformal import ConformalMap
from .exceptions import ConfigurationError, NearSingularError
from .faber import DEFAULT_TRUNCATION, FaberTable, faber_table
from .interface import InterfaceFunction, InterfaceMatrices, build_interface_matrices

__all__ = [
    "MaterialParams",
    "Geometry",
    "SystemMatrices",
    "TensorSet",
    "SolutionCoefficients",
    "MODELS",
    "prepare_geometry",
    "assemble_system",
    "compute_fpt",
    "compute_gpt",
    "compute_tensors",
    "disk_gpt_closed_form",
    "solve_coefficients",
    "flux_residual",
    "interface_residual",
    "polarization_matrix",
    "monomial_to_faber_alpha",
    "tensor_report",
    "write_tensor_report",
]

COND_LIMIT = 1e12
DEFAULT_REPORT = 4
MODELS = ("reduced", "full")


@dataclass(frozen=True)
class MaterialParams:
    sigma_c: float
    sigma_m: float = 1.0

    def __post_init__(self):
        sc, sm = float(self.sigma_c), float(self.sigma_m)
        if not (np.isfinite(sc) and np.isfinite(sm)):
            raise ConfigurationError("conductivities must be finite")
        if sm <= 0:
            raise ConfigurationError("sigma_m must be positive")
        if sc < 0:
            raise ConfigurationError("sigma_c must be non-negative")
        if sc == sm:
            raise ConfigurationError("sigma_c must differ from sigma_m")
        object.__setattr__(self, "sigma_c", sc)
        object.__setattr__(self, "sigma_m", sm)
        if not abs(self.lam) > 0.5:
            raise ConfigurationError("|lambda| must exceed 1/2")

    @property
    def lam(self):
        return (self.sigma_c + self.sigma_m) / (2 * (self.sigma_c - self.sigma_m))

    @property
    def tau(self):
        return self.sigma_c * self.sigma_m / (self.sigma_c - self.sigma_m)

    @property
    def contrast(self):
        return self.sigma_c - self.sigma_m

    @property
    def product(self):
        return self.sigma_c * self.sigma_m


@dataclass(frozen=True)
class Geometry:
    """Interface-independent pieces of the system, reusable across ``p``.

    ``R`` is the resolvent ``(I - gamma^{-2N} conj(C) gamma^{-2N} C)^{-1}`` and
    ``RC`` is ``R gamma^{-2N} conj(C)``.
    """

    gamma: float
    n: np.ndarray
    C: np.ndarray
    R: np.ndarray
    RC: np.ndarray
    cond_resolvent: float
    beta_lu: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def order(self):
        return self.n.size

    def pow(self, t):
        """Diagonal entries ``gamma^{t n}``."""
        return self.gamma ** (t * self.n.astype(float))


@dataclass(frozen=True)
class SystemMatrices:
    """Truncated system.

    ``model="reduced"`` keeps only the orders ``n >= 1`` of the interior
    expansion.  ``model="full"`` adds a real interior constant per incident
    order and the zero-mode equation of the jump condition it requires;
    it needs the interface coefficients ``p``.
    """

    A1: np.ndarray
    A2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    geometry: Geometry | None = field(default=None, repr=False, compare=False)
    model: str = "reduced"
    p: np.ndarray | None = field(default=None, repr=False, compare=False)
    sigma: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def order(self):
        return self.A1.shape[0]

    @cached_property
    def reduced(self) -> "_Reduced":
        return _reduce(self)

    @property
    def cond_B2(self):
        return self.reduced.cond_B2

    @property
    def cond_schur(self):
        return self.reduced.cond_schur


@dataclass(frozen=True)
class TensorSet:
    """Leading ``report x report`` blocks of the FPTs and GPTs."""

    F1: np.ndarray
    F2: np.ndarray
    N1: np.ndarray
    N2: np.ndarray
    cond_B2: float = float("nan")
    cond_schur: float = float("nan")

    @property
    def report(self):
        return self.F1.shape[0]


@dataclass(frozen=True)
class SolutionCoefficients:
    """Series coefficients of the potential for incident field ``Re sum alpha_m F_m(z)``.

    ``alpha`` is the diagonal of the incident matrix (Faber basis), ``s`` the
    geometric multipole coefficients and ``beta`` the interior Faber
    coefficients; row ``m`` belongs to ``alpha_m``.
    """

    alpha: np.ndarray
    s: np.ndarray
    beta: np.ndarray
    C: np.ndarray = field(repr=False)
    gamma: float = 1.0
    const: np.ndarray | None = None

    def __post_init__(self):
        if self.const is None:
            object.__setattr__(self, "const", np.zeros(self.s.shape[0]))

    @property
    def order(self):
        return self.s.shape[1]


# ---------------------------------------------------------------- helpers

def _lu_checked(M, which):
    """LU factorisation with a 1-norm condition estimate."""
    with warnings.catch_warnings():
        # singular factors are reported through the condition estimate below
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(M, check_finite=True)
    anorm = np.abs(M).sum(axis=0).max()
    if np.iscomplexobj(lu):
        rcond, info = sla.lapack.zgecon(lu, anorm, norm="1")
    else:
        rcond, info = sla.lapack.dgecon(lu, anorm, norm="1")
    cond = np.inf if rcond == 0 else 1.0 / rcond
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise NearSingularError(which, cond, COND_LIMIT)
    return (lu, piv), cond


def _right_solve(Y, lu_T):
    """``Y M^{-1}`` given the factorisation of ``M^T``."""
    return sla.lu_solve(lu_T, Y.T).T


def _scale(d_left, M, d_right):
    return d_left[:, None] * M * d_right[None, :]


# ---------------------------------------------------------------- assembly

def prepare_geometry(faber: FaberTable) -> Geometry:
    """Precompute the resolvent; raises ``NearSingularError`` past cond 1e12."""
    N = faber.order
    n = np.arange(1, N + 1)
    g = faber.gamma
    gm2 = g ** (-2.0 * n)
    C = faber.C
    GCb = gm2[:, None] * np.conj(C)  # gamma^{-2N} conj(C)
    M = np.eye(N) - _scale(np.ones(N), GCb, gm2) @ C
    lu, cond = _lu_checked(M, "I - gamma^-2N conj(C) gamma^-2N C")
    R = sla.lu_solve(lu, np.eye(N, dtype=complex))
    return Geometry(g, n, C, R, R @ GCb, cond, _beta_factor(C, gm2))


def _beta_factor(C, gm2):
    # LU of (I - C gamma^-2N conj(C) gamma^-2N)^T for the flux relation
    M = np.eye(C.shape[0]) - (C * gm2[None, :]) @ (np.conj(C) * gm2[None, :])
    lu, _ = _lu_checked(M.T, "I - C gamma^-2N conj(C) gamma^-2N")
    return lu


def assemble_system(
    m: ConformalMap | None,
    faber: FaberTable,
    mats: InterfaceMatrices,
    mat: MaterialParams,
    geometry: Geometry | None = None,
    model: str = "reduced",
) -> SystemMatrices:
    """Build ``A_1, A_2, B_1, B_2`` for the truncated problem.

    ``m`` is accepted for interface symmetry with the other operations and
    only used to cross-check the conformal radius.
    """
    if model not in MODELS:
        raise ConfigurationError(f"model must be one of {MODELS}, got {model!r}")
    if model == "full" and mats.p is None:
        raise ConfigurationError("the full model needs the interface coefficients")
    geo = geometry if geometry is not None else prepare_geometry(faber)
    N = geo.order
    if mats.P_plus.shape != (N, N):
        raise ConfigurationError(
            f"interface matrices are {mats.P_plus.shape}, expected ({N}, {N})"
        )
    if m is not None and not np.isclose(m.gamma, geo.gamma):
        raise ConfigurationError("map and Faber table disagree on gamma")
    d, sp = mat.contrast, mat.product
    nf = geo.n.astype(float)
    g1, gm1 = geo.pow(1), geo.pow(-1)
    C, R, RC = geo.C, geo.R, geo.RC
    Pp, Pm = mats.P_plus, mats.P_minus
    Ppc, Pmc = np.conj(Pp), np.conj(Pm)

    Pp_in = _scale(gm1, Pp, g1)    # gamma^-N P+ gamma^N
    Pm_in = _scale(gm1, Pm, g1)
    T = d * np.eye(N) + 2 * mat.sigma_m * R

    A1 = d * _scale(g1, Ppc, g1) + d * (C @ Pm_in) + sp * C * nf[None, :]
    A2 = d * _scale(g1, Pmc, g1) + d * (C @ Pp_in)
    A2[np.diag_indices(N)] -= sp * geo.pow(2) * nf
    B1 = T @ Pp_in + 2 * mat.sigma_m * RC @ _scale(gm1, Pmc, g1)
    B2 = T @ Pm_in + 2 * mat.sigma_m * RC @ _scale(gm1, Ppc, g1)
    B2[np.diag_indices(N)] += sp * nf
    p = None if mats.p is None else np.asarray(mats.p)[: N + 1]
    return SystemMatrices(
        A1, A2, B1, B2, geometry=geo, model=model, p=p,
        sigma=(mat.sigma_c, mat.sigma_m),
    )


@dataclass(frozen=True)
class _Reduced:
    """``X_1 = (A_1 - A_2 conj(B_2)^{-1} conj(B_1)) S^{-1}`` and the matching ``X_2``.

    For the full model ``X1, X2`` stay ``None`` and ``bordered`` solves for
    the rows that are asked for.
    """

    X1: np.ndarray
    X2: np.ndarray
    cond_B2: float
    cond_schur: float
    bordered: "_Bordered | None" = None


def _reduce(sys: SystemMatrices) -> _Reduced:
    if sys.model == "full":
        return _reduce_full(sys)
    B2b = np.conj(sys.B2)
    B1b = np.conj(sys.B1)
    lu_b2, cond_b2 = _lu_checked(B2b, "conj(B2)")
    Y = sla.lu_solve(lu_b2, B1b)  # conj(B2)^{-1} conj(B1)
    S = sys.B2 - sys.B1 @ Y
    lu_sT, cond_s = _lu_checked(S.T, "Schur complement B2 - B1 conj(B2)^-1 conj(B1)")
    X1 = _right_solve(sys.A1 - sys.A2 @ Y, lu_sT)
    X2 = _right_solve(np.conj(sys.A2) - np.conj(sys.A1) @ Y, lu_sT)
    return _Reduced(X1, X2, cond_b2, cond_s)


class _Bordered:
    """Real-linear solver for the full model.

    Unknowns per incident order are ``(Re s, Im s, c)`` with ``c`` the
    interior constant.  Equations are the ``2N`` real parts of the interface
    relation, with the constant's contribution ``-2 sc c conj(p_n) gamma^{2n}``,
    and the zero mode of the jump condition
    ``Re sum_l p_l v_l - p_0 c = 0`` where ``v = conj(a) gamma^{2N} + b`` and
    ``a``, ``b`` are the positive and negative Laurent coefficients of
    ``u+ - u-`` on the circle.
    """

    def __init__(self, sys: SystemMatrices):
        if sys.p is None or sys.sigma is None or sys.geometry is None:
            raise ConfigurationError("the full model needs p, the conductivities and the geometry")
        self.sys = sys
        geo = sys.geometry
        N = geo.order
        self.N = N
        self.mat = MaterialParams(*sys.sigma)
        self.p0 = float(np.real(sys.p[0]))
        self.pl = np.zeros(N, complex)
        k = min(N, sys.p.size - 1)
        self.pl[:k] = sys.p[1: k + 1]
        self.ptil = np.conj(self.pl) * geo.pow(2)
        basis = np.eye(2 * N + 1)
        s = basis[:, :N] + 1j * basis[:, N:2 * N]
        c = basis[:, 2 * N]
        cols = self._apply(np.zeros(2 * N + 1, complex), s, c, homogeneous=True)
        self.lu, self.cond = _lu_checked(cols.T, "bordered interface system (full model)")

    def _apply(self, alpha, s, c, rows=None, homogeneous=False):
        sys, geo, mat = self.sys, self.sys.geometry, self.mat
        nrow = s.shape[0]
        idx = np.zeros(nrow, int) if rows is None else rows
        a_col = alpha[:, None]
        E = np.conj(s) @ np.conj(sys.B1) + s @ sys.B2
        E -= 2 * mat.sigma_c * c[:, None] * self.ptil[None, :]
        if not homogeneous:
            E += a_col * sys.A1[idx] + np.conj(a_col) * np.conj(sys.A2[idx])
        beta = _beta_from_s(idx, alpha, s, geo, mat)
        pos = -beta
        pos[np.arange(nrow), idx] += alpha
        neg = alpha[:, None] * geo.C[idx] + s - beta @ geo.C
        v = np.conj(pos) * geo.pow(2)[None, :] + neg
        K = (v @ self.pl).real - self.p0 * c
        return np.concatenate([E.real, E.imag, K[:, None]], axis=1)

    def solve(self, alpha, rows):
        """Rows of ``s``, ``beta`` and ``c`` for incident coefficients ``alpha`` at ``rows``."""
        N = self.N
        nrow = rows.size
        rhs = -self._apply(alpha, np.zeros((nrow, N), complex), np.zeros(nrow), rows=rows)
        x = sla.lu_solve(self.lu, rhs.T).T
        s = x[:, :N] + 1j * x[:, N:2 * N]
        c = x[:, 2 * N]
        beta = _beta_from_s(rows, alpha, s, self.sys.geometry, self.mat)
        return s, beta, c


def _full_rows(bord: _Bordered, k):
    """Leading ``k`` rows of ``X_1, X_2`` from solves with ``alpha = 1`` and ``alpha = i``."""
    rows = np.arange(k)
    s1, _, _ = bord.solve(np.ones(k, complex), rows)
    si, _, _ = bord.solve(np.full(k, 1j), rows)
    # s = -alpha X1 - conj(alpha) X2
    return -(s1 - 1j * si) / 2, -(s1 + 1j * si) / 2


def _reduce_full(sys: SystemMatrices) -> _Reduced:
    """Full-model reduction; the rows of ``X`` are formed on demand."""
    bord = _Bordered(sys)
    _, cond_b2 = _lu_checked(np.conj(sys.B2), "conj(B2)")
    return _Reduced(None, None, cond_b2, bord.cond, bord)


def compute_fpt(sys: SystemMatrices, report: int = DEFAULT_REPORT, full=False):
    """FPT matrices ``F^(1), F^(2)``.

    Returns the leading ``report x report`` blocks, or the full truncated
    matrices when ``full`` is true, together with the condition estimates
    as ``(F1, F2, cond_B2, cond_schur)``.
    """
    red = sys.reduced
    if not full:
        _check_report(report, sys.order)
    nf = np.arange(1, sys.order + 1, dtype=float)
    if red.bordered is not None:
        X1, X2 = _full_rows(red.bordered, sys.order if full else report)
    else:
        X1, X2 = red.X1, red.X2
    F1 = 4 * np.pi * X1 * nf[None, :]
    F2 = 4 * np.pi * X2 * nf[None, :]
    if not full:
        F1, F2 = F1[:report, :report], F2[:report, :report]
    return F1, F2, red.cond_B2, red.cond_schur


def _check_report(report, order):
    if not 1 <= report <= order:
        raise ValueError(f"report order {report} must lie in [1, {order}]")


def compute_gpt(fpt, faber: FaberTable, report: int | None = None):
    """GPTs ``N^(1) = Q^{-1} F^(1) Q^{-T}`` and ``N^(2) = conj(Q)^{-1} F^(2) Q^{-T}``.

    Only the leading block of ``Q`` enters, since ``Q`` is lower triangular;
    working on the full truncated ``Q`` would be badly conditioned for
    non-circular shapes.
    """
    F1, F2 = fpt[0], fpt[1]
    k = F1.shape[0] if report is None else report
    _check_report(k, min(F1.shape[0], faber.order))
    Q = faber.Q1[:k, :k]

    def sandwich(left, F):
        X = sla.solve_triangular(left, F[:k, :k], lower=True, unit_diagonal=True)
        return sla.solve_triangular(Q, X.T, lower=True, unit_diagonal=True).T

    return sandwich(Q, F1), sandwich(np.conj(Q), F2)


def compute_tensors(
    m: ConformalMap,
    ifn: InterfaceFunction,
    mat: MaterialParams,
    order: int = DEFAULT_TRUNCATION,
    report: int = DEFAULT_REPORT,
    faber: FaberTable | None = None,
    geometry: Geometry | None = None,
    model: str = "reduced",
) -> TensorSet:
    """End-to-end FPT/GPT computation for one configuration."""
    if faber is None:
        faber = faber_table(m, order)
    sys = assemble_system(
        m, faber, build_interface_matrices(ifn, faber.order), mat, geometry, model=model
    )
    F1, F2, c_b2, c_s = compute_fpt(sys, report)
    N1, N2 = compute_gpt((F1, F2), faber)
    return TensorSet(F1, F2, N1, N2, c_b2, c_s)


def disk_gpt_closed_form(mat: MaterialParams, gamma: float, p0: float, report: int = DEFAULT_REPORT):
    """GPTs of a disk of radius ``gamma`` with constant weighted interface ``p0``.

    ``N^(1) = 0`` and ``N^(2)`` is diagonal with

        N^(2)_nn = 4 pi n gamma^{2n} ((sc - sm) p0 - sc sm n) / ((sc + sm) p0 + sc sm n),

    obtained by separation of variables in each Fourier mode.
    """
    n = np.arange(1, report + 1, dtype=float)
    num = mat.contrast * p0 - mat.product * n
    den = (mat.sigma_c + mat.sigma_m) * p0 + mat.product * n
    if np.any(np.abs(den) <= 1e-14 * (np.abs(num) + np.abs(mat.product * n))):
        raise ZeroDivisionError("closed form has a pole at this interface value")
    N2 = np.diag(4 * np.pi * n * gamma ** (2 * n) * num / den).astype(complex)
    return np.zeros((report, report), complex), N2


# ---------------------------------------------------------------- solution coefficients

def _solve_real_linear(B2, B1, rhs):
    """Solve ``x B2 + conj(x) conj(B1) = rhs`` for each row ``x`` of the unknown."""
    N = B2.shape[0]
    # x = u + iv ;  x B2 + conj(x) conj(B1) = u (B2 + conj B1) + i v (B2 - conj B1)
    P = B2 + np.conj(B1)
    M = B2 - np.conj(B1)
    big = np.block([[P.real, P.imag], [-M.imag, M.real]])
    lu, _ = _lu_checked(big.T, "real form of the interface system")
    rhs2 = np.concatenate([rhs.real, rhs.imag], axis=1)
    sol = _right_solve(rhs2, lu)
    return sol[:, :N] + 1j * sol[:, N:]


def solve_coefficients(
    sys: SystemMatrices,
    faber: FaberTable,
    mat: MaterialParams,
    alpha,
) -> SolutionCoefficients:
    """Solve for ``s`` from the interface relation and ``beta`` from the flux relation.

    ``alpha`` holds ``alpha_1, alpha_2, ...`` in the Faber basis; trailing
    orders default to zero.
    """
    geo = sys.geometry if sys.geometry is not None else prepare_geometry(faber)
    N = sys.order
    a = np.zeros(N, complex)
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    if alpha.size > N:
        raise ValueError("more incident orders than the truncation")
    a[: alpha.size] = alpha
    rows = np.flatnonzero(a)
    s = np.zeros((N, N), complex)
    beta = np.zeros((N, N), complex)
    if rows.size == 0:
        return SolutionCoefficients(a, s, beta, geo.C, geo.gamma)

    # Both inversions guarded exactly as in the tensor path.
    red = sys.reduced
    if sys.model == "full":
        const = np.zeros(N)
        s[rows], beta[rows], const[rows] = red.bordered.solve(a[rows], rows)
        return SolutionCoefficients(a, s, beta, geo.C, geo.gamma, const)
    ar = a[rows][:, None]
    rhs = -(ar * sys.A1[rows] + np.conj(ar) * np.conj(sys.A2[rows]))
    s[rows] = _solve_real_linear(sys.B2, sys.B1, rhs)
    beta[rows] = _beta_from_s(rows, a[rows], s[rows], geo, mat)
    return SolutionCoefficients(a, s, beta, geo.C, geo.gamma)


def _beta_from_s(rows, alpha_rows, s_rows, geo: Geometry, mat: MaterialParams):
    """Interior coefficients from the flux-continuity relation.

    With ``G = conj(alpha) gamma^{2N} - alpha C - s`` the relation reads
    ``sc (conj(beta) gamma^{2N} - beta C) = sm G``.  Eliminating
    ``conj(beta)`` gives

        beta (I - C gamma^{-2N} conj(C) gamma^{-2N})
            = (sm / sc) (conj(G) + G gamma^{-2N} conj(C)) gamma^{-2N}.
    """
    if mat.sigma_c == 0:
        raise ConfigurationError("interior coefficients are undefined for sigma_c = 0")
    C = geo.C
    g2, gm2 = geo.pow(2), geo.pow(-2)
    k = np.arange(rows.size)
    G = -alpha_rows[:, None] * C[rows] - s_rows
    G[k, rows] += np.conj(alpha_rows) * g2[rows]
    rhs = (np.conj(G) + (G * gm2[None, :]) @ np.conj(C)) * gm2[None, :]
    lu = geo.beta_lu if geo.beta_lu is not None else _beta_factor(C, gm2)
    return (mat.sigma_m / mat.sigma_c) * _right_solve(rhs, lu)


def flux_residual(sol: SolutionCoefficients, mat: MaterialParams):
    """Max-abs residual of the coefficient form of flux continuity.

    Checks ``sm (alpha C + s) - sc beta C + (sc conj(beta) - sm conj(alpha)) gamma^{2N} = 0``
    on the rows carrying an incident order.
    """
    rows = np.flatnonzero(sol.alpha)
    if rows.size == 0:
        return 0.0
    N = sol.order
    g2 = sol.gamma ** (2.0 * np.arange(1, N + 1))
    a = sol.alpha[rows]
    k = np.arange(rows.size)
    aC = a[:, None] * sol.C[rows]
    E = mat.sigma_m * (aC + sol.s[rows]) - mat.sigma_c * sol.beta[rows] @ sol.C
    E += mat.sigma_c * np.conj(sol.beta[rows]) * g2[None, :]
    E[k, rows] -= mat.sigma_m * np.conj(a) * g2[rows]
    return float(np.abs(E).max())


def interface_residual(sys: SystemMatrices, sol: SolutionCoefficients):
    """Max-abs residual of ``alpha A1 + conj(alpha) conj(A2) + conj(s) conj(B1) + s B2 = 0``.

    Under the full model the interior-constant term and the zero-mode
    equation are included.
    """
    rows = np.flatnonzero(sol.alpha)
    if rows.size == 0:
        return 0.0
    if sys.model == "full":
        E = sys.reduced.bordered._apply(sol.alpha[rows], sol.s[rows], sol.const[rows], rows=rows)
        return float(np.abs(E).max())
    a = sol.alpha[rows][:, None]
    s = sol.s[rows]
    E = a * sys.A1[rows] + np.conj(a) * np.conj(sys.A2[rows]) + np.conj(s) @ np.conj(sys.B1) + s @ sys.B2
    return float(np.abs(E).max())


def monomial_to_faber_alpha(faber: FaberTable, alpha_monomial):
    """Convert ``H = Re sum alpha_k z^k`` into Faber-basis coefficients.

    ``alpha_mono = Q^T alpha_faber`` up to an additive constant in ``H``.
    """
    a = np.atleast_1d(np.asarray(alpha_monomial, dtype=complex))
    Q = faber.Q1[: a.size, : a.size]
    return sla.solve_triangular(Q.T, a, lower=False, unit_diagonal=True)


def polarization_matrix(ts: TensorSet):
    """Real 2x2 polarization tensor from the first-order FPTs."""
    f1, f2 = ts.F1[0, 0], ts.F2[0, 0]
    return 0.5 * np.array(
        [[(f1 + f2).real, (f1 + f2).imag], [(f1 - f2).imag, (f2 - f1).real]]
    )


def _cplx(M):
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(M)]


def tensor_report(ts: TensorSet) -> dict:
    return {
        "N1": _cplx(ts.N1),
        "N2": _cplx(ts.N2),
        "F1": _cplx(ts.F1),
        "F2": _cplx(ts.F2),
        "cond_B2": float(ts.cond_B2),
        "cond_schur": float(ts.cond_schur),
    }


def write_tensor_report(ts: TensorSet, path):
    Path(path).write_text(json.dumps(tensor_report(ts), indent=2) + "\n")
