"""Newton design of interface coefficients that make leading tensors vanish.

The unknown is the real vector ``x`` collecting the active coefficients of
``h p``: ``p_0`` contributes one entry, every other active ``p_k`` one entry
when ``real_only`` and two (real, imaginary) otherwise.  The residual is
built from the first rows of the FPTs, ``F^(j)_{1n} / (4 pi n)`` for
``n <= n_orders``, and driven to zero by the damped update

    x <- x - lr * pinv(J) f(x)

with a central-difference Jacobian.
"""
from __future__ import annotations

import json
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .conformal import ConformalMap, load_shape
from .exceptions import ConfigurationError, InclusionForgeError, NumericalError
from .faber import DEFAULT_TRUNCATION, faber_table
from .interface import InterfaceFunction, build_interface_matrices
from .tensors import (
    MODELS,
    MaterialParams,
    TensorSet,
    assemble_system,
    compute_fpt,
    compute_tensors,
    prepare_geometry,
    tensor_report,
)

__all__ = [
    "UnderdeterminedWarning",
    "DesignProblem",
    "SeedReport",
    "DesignResult",
    "residual",
    "jacobian",
    "newton_solve",
    "load_design",
    "design_result_to_dict",
    "write_design_result",
]

THREADS_ENV = "INCLUSION_FORGE_THREADS"
_DISTINCT = 1e-6
_DIVERGENCE = 1e6
_MAX_HALVINGS = 30
_STALL_WINDOW = 25


class UnderdeterminedWarning(UserWarning):
    """Fewer real unknowns than independent residual components."""


@dataclass
class DesignProblem:
    """Inputs of one design run.

    Parameters
    ----------
    map : ConformalMap
        Fixed inclusion shape.
    mat : MaterialParams
        Core and matrix conductivities.
    active_indices : sequence of int
        Coefficients ``p_k`` of ``h p`` that may vary.
    n_orders : int
        Number of FPT orders to vanish (first row, columns ``1..n_orders``).
    real_only : bool
        Restrict ``p_k`` to real values.
    paper_mode : bool
        Use the magnitudes ``|F_{1n}| / (4 pi n)`` as residual instead of
        real and imaginary parts.
    model : {"reduced", "full"}
        System used by the tensor pipeline, see :func:`~.tensors.assemble_system`.
    """

    map: ConformalMap
    mat: MaterialParams
    active_indices: tuple = (0,)
    n_orders: int = 1
    real_only: bool = True
    alpha_lr: float = 0.5
    fd_step: float = 1e-6
    max_iter: int = 200
    tol_step: float = 1e-15
    n_seeds: int = 8
    tol_residual: float = 1e-10
    paper_mode: bool = False
    trunc: int = DEFAULT_TRUNCATION
    seed: int = 0
    model: str = "reduced"
    backtrack: bool = True

    def __post_init__(self):
        idx = sorted({int(k) for k in self.active_indices})
        if not idx or idx[0] < 0:
            raise ConfigurationError("active_indices must be a non-empty set of non-negative integers")
        self.active_indices = tuple(idx)
        if not 1 <= int(self.n_orders) <= self.trunc:
            raise ConfigurationError(f"n_orders must lie in [1, {self.trunc}]")
        if idx[-1] > self.trunc:
            raise ConfigurationError("active index beyond the truncation order")
        if self.model not in MODELS:
            raise ConfigurationError(f"model must be one of {MODELS}")
        if not self.alpha_lr > 0 or not self.fd_step > 0 or self.n_seeds < 1 or self.max_iter < 1:
            raise ConfigurationError("solver knobs must be positive")
        self.n_orders = int(self.n_orders)
        if self.n_dof < self.n_equations:
            warnings.warn(
                f"design is underdetermined: {self.n_dof} real unknowns for "
                f"{self.n_equations} independent residual components",
                UnderdeterminedWarning,
                stacklevel=2,
            )

    # ---- parametrisation
    @property
    def n_dof(self):
        return sum(1 if (k == 0 or self.real_only) else 2 for k in self.active_indices)

    @property
    def n_equations(self):
        """Independent real residual components.

        For a real map with real coefficients the FPTs are real, so the
        imaginary parts vanish identically and only ``2 n_orders`` remain.
        """
        if self.map.is_disk and self.active_indices == (0,):
            # radial symmetry: only F2_11 is not identically zero
            return 1
        if self.paper_mode:
            return 2 * self.n_orders
        real_map = not np.any(np.asarray(self.map.coeffs).imag)
        if self.real_only and real_map:
            return 2 * self.n_orders
        return 4 * self.n_orders

    def to_interface(self, x) -> InterfaceFunction:
        x = np.asarray(x, dtype=float)
        if x.size != self.n_dof:
            raise ValueError(f"expected {self.n_dof} parameters, got {x.size}")
        p = np.zeros(self.active_indices[-1] + 1, complex)
        i = 0
        for k in self.active_indices:
            if k == 0 or self.real_only:
                p[k] = x[i]
                i += 1
            else:
                p[k] = complex(x[i], x[i + 1])
                i += 2
        return InterfaceFunction(self.map.gamma, p)

    def from_interface(self, ifn: InterfaceFunction) -> np.ndarray:
        out = []
        for k in self.active_indices:
            c = ifn.coefficient(k)
            if k == 0 or self.real_only:
                out.append(c.real)
            else:
                out.extend([c.real, c.imag])
        return np.array(out)

    # ---- cached geometry, shared by every evaluation
    @cached_property
    def faber(self):
        return faber_table(self.map, self.trunc)

    @cached_property
    def geometry(self):
        return prepare_geometry(self.faber)

    def draw_seeds(self):
        """Seeds of magnitude below 2: uniform reals, or uniform modulus and phase."""
        rng = np.random.default_rng(self.seed)
        seeds = []
        for _ in range(self.n_seeds):
            x = []
            for k in self.active_indices:
                if k == 0 or self.real_only:
                    x.append(rng.uniform(-2.0, 2.0))
                else:
                    r, t = rng.uniform(0.0, 2.0), rng.uniform(0.0, 2 * np.pi)
                    x.extend([r * np.cos(t), r * np.sin(t)])
            seeds.append(np.array(x))
        return seeds


@dataclass
class SeedReport:
    start: np.ndarray
    x: np.ndarray
    status: str  # converged | stalled | max_iter | diverged | failed
    iterations: int
    residual_history: list
    message: str = ""

    @property
    def final_residual(self):
        return self.residual_history[-1] if self.residual_history else float("inf")


@dataclass
class DesignResult:
    p_coeffs: InterfaceFunction
    residual_history: list
    iterations: int
    final_gpt_block: TensorSet | None
    converged: bool
    solutions: list = field(default_factory=list)
    seeds: list = field(default_factory=list)

    @property
    def final_residual(self):
        return self.residual_history[-1] if self.residual_history else float("inf")


def residual(problem: DesignProblem, p_coeffs) -> np.ndarray:
    """Residual vector at ``p_coeffs`` (an ``InterfaceFunction`` or parameter vector).

    Smooth mode stacks ``Re, Im`` of ``F^(1)_{1n}/(4 pi n)`` followed by
    those of ``F^(2)_{1n}/(4 pi n)``; with ``paper_mode`` the magnitudes are stacked instead.
    """
    ifn = p_coeffs if isinstance(p_coeffs, InterfaceFunction) else problem.to_interface(p_coeffs)
    K = problem.n_orders
    try:
        mats = build_interface_matrices(ifn, problem.trunc)
        sys = assemble_system(
            problem.map, problem.faber, mats, problem.mat, problem.geometry, model=problem.model
        )
        F1, F2, _, _ = compute_fpt(sys, report=K)
    except InclusionForgeError as exc:
        exc.args = (f"{exc} (at p = {ifn.p_coeffs.tolist()})",) + exc.args[1:]
        raise
    n = 4 * np.pi * np.arange(1, K + 1)
    f1, f2 = F1[0] / n, F2[0] / n
    if problem.paper_mode:
        return np.concatenate([np.abs(f1), np.abs(f2)])
    return np.concatenate([f1.real, f1.imag, f2.real, f2.imag])


def _steps(problem, x):
    return problem.fd_step * np.maximum(np.abs(x), 1.0)


def jacobian(problem: DesignProblem, x, stencil=2, f=residual) -> np.ndarray:
    """Finite-difference Jacobian with relative step ``fd_step`` per unknown.

    ``stencil=2`` is the central difference; ``stencil=4`` the fourth-order
    five-point formula, used to check the former.
    """
    x = np.asarray(x, dtype=float)
    h = _steps(problem, x)
    cols = []
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = h[j]
        if stencil == 2:
            cols.append((f(problem, x + e) - f(problem, x - e)) / (2 * h[j]))
        elif stencil == 4:
            cols.append(
                (-f(problem, x + 2 * e) + 8 * f(problem, x + e) - 8 * f(problem, x - e) + f(problem, x - 2 * e))
                / (12 * h[j])
            )
        else:
            raise ValueError("stencil must be 2 or 4")
    return np.column_stack(cols)


def _newton_from(problem: DesignProblem, x0) -> SeedReport:
    x = np.array(x0, dtype=float)
    try:
        f = residual(problem, x)
    except (NumericalError, ConfigurationError) as exc:
        return SeedReport(np.array(x0), x, "failed", 0, [], str(exc))
    norm0 = np.linalg.norm(f)
    history = [float(norm0)]
    for it in range(1, problem.max_iter + 1):
        try:
            J = jacobian(problem, x)
        except (NumericalError, ConfigurationError) as exc:
            return SeedReport(np.array(x0), x, "failed", it, history, str(exc))
        dx = np.linalg.pinv(J, rcond=1e-12) @ f
        lr = problem.alpha_lr
        for _ in range(_MAX_HALVINGS):
            trial = x - lr * dx
            try:
                f_new = residual(problem, trial)
                ok = np.all(np.isfinite(f_new))
            except (NumericalError, ConfigurationError):
                ok = False
            if ok and (not problem.backtrack or np.linalg.norm(f_new) <= history[-1]):
                break
            lr /= 2
        else:
            status = "converged" if history[-1] <= problem.tol_residual else "failed"
            return SeedReport(np.array(x0), x, status, it, history, "line search stalled")
        rel = np.linalg.norm(trial - x) / max(np.linalg.norm(x), np.finfo(float).tiny)
        x, f = trial, f_new
        history.append(float(np.linalg.norm(f)))
        if norm0 > 0 and history[-1] > _DIVERGENCE * norm0:
            return SeedReport(np.array(x0), x, "diverged", it, history,
                              f"residual grew by more than {_DIVERGENCE:g}x")
        if (
            it > _STALL_WINDOW
            and history[-1] > problem.tol_residual
            and history[-1] > 0.5 * history[-1 - _STALL_WINDOW]
        ):
            return SeedReport(np.array(x0), x, "stalled", it, history,
                              f"residual did not halve in {_STALL_WINDOW} iterations")
        if rel < problem.tol_step:
            status = "converged" if history[-1] <= problem.tol_residual else "stalled"
            return SeedReport(np.array(x0), x, status, it, history)
    status = "converged" if history[-1] <= problem.tol_residual else "max_iter"
    return SeedReport(np.array(x0), x, status, it, history)


def _thread_count():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        raise ConfigurationError(f"{THREADS_ENV} must be an integer") from None


def newton_solve(problem: DesignProblem, seeds=None) -> DesignResult:
    """Multi-start damped Newton iteration.

    Seeds run independently (concurrently when ``INCLUSION_FORGE_THREADS``
    exceeds 1); the result is the seed with the smallest final residual, and
    ``solutions`` lists all distinct converged points.
    """
    starts = problem.draw_seeds() if seeds is None else [np.asarray(s, float) for s in seeds]
    problem.geometry  # build shared data before any worker starts
    workers = min(_thread_count(), len(starts))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda s: _newton_from(problem, s), starts))
    else:
        reports = [_newton_from(problem, s) for s in starts]

    usable = [r for r in reports if r.residual_history]
    if not usable:
        return DesignResult(problem.to_interface(starts[0]), [], 0, None, False, [], reports)
    best = min(usable, key=lambda r: r.final_residual)
    distinct = []
    for r in sorted((r for r in reports if r.status == "converged"), key=lambda r: r.final_residual):
        if all(np.linalg.norm(r.x - d) > _DISTINCT for d in distinct):
            distinct.append(r.x)
    ifn = problem.to_interface(best.x)
    try:
        gpt = compute_tensors(
            problem.map, ifn, problem.mat, problem.trunc, report=max(2, problem.n_orders),
            faber=problem.faber, geometry=problem.geometry, model=problem.model,
        )
    except NumericalError:
        gpt = None
    return DesignResult(
        ifn,
        best.residual_history,
        best.iterations,
        gpt,
        best.status == "converged",
        [problem.to_interface(x) for x in distinct],
        reports,
    )


# ---------------------------------------------------------------- file formats

_KNOBS = ("alpha_lr", "fd_step", "max_iter", "tol_step", "n_seeds", "tol_residual", "seed", "backtrack")


def load_design(path, **overrides) -> DesignProblem:
    """Read a design spec.

    Keys: ``shape`` (path relative to the spec, or an inline map),
    ``sigma_c``, ``sigma_m``, ``active``, ``n_orders`` and optionally
    ``real_only``, ``paper_mode``, ``trunc``, ``model`` and ``solver`` (a dict
    of Newton knobs).  ``overrides`` replace any of these after parsing.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ConfigurationError(f"design file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"design file {path} is not valid JSON: {exc}") from exc
    try:
        shape = data["shape"]
        if isinstance(shape, str):
            m = load_shape(path.parent / shape)
        else:
            m = ConformalMap.from_dict(shape)
        kwargs = dict(
            map=m,
            mat=MaterialParams(data["sigma_c"], data.get("sigma_m", 1.0)),
            active_indices=tuple(data["active"]),
            n_orders=int(data.get("n_orders", 1)),
            real_only=bool(data.get("real_only", True)),
            paper_mode=bool(data.get("paper_mode", False)),
            trunc=int(data.get("trunc", DEFAULT_TRUNCATION)),
            model=data.get("model", "reduced"),
        )
        solver = data.get("solver", {})
        unknown = set(solver) - set(_KNOBS)
        if unknown:
            raise ConfigurationError(f"unknown solver knobs: {sorted(unknown)}")
        kwargs.update(solver)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"malformed design file {path}: {exc!r}") from exc
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    return DesignProblem(**kwargs)


def design_result_to_dict(result: DesignResult, problem: DesignProblem | None = None) -> dict:
    out = {
        "converged": bool(result.converged),
        "iterations": int(result.iterations),
        "p": result.p_coeffs.to_dict()["p"],
        "gamma": result.p_coeffs.gamma,
        "residual_history": [float(v) for v in result.residual_history],
        "final_gpt": None if result.final_gpt_block is None else tensor_report(result.final_gpt_block),
        "solutions": [s.to_dict()["p"] for s in result.solutions],
        "seeds": [
            {
                "start": [float(v) for v in r.start],
                "status": r.status,
                "iterations": int(r.iterations),
                "final_residual": float(r.final_residual),
            }
            for r in result.seeds
        ],
    }
    if problem is not None:
        out["active"] = list(problem.active_indices)
        out["n_orders"] = problem.n_orders
        out["model"] = problem.model
    return out


def write_design_result(result: DesignResult, path, problem: DesignProblem | None = None):
    Path(path).write_text(json.dumps(design_result_to_dict(result, problem), indent=2) + "\n")
