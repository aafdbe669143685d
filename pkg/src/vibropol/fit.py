"""Least-squares fitting of stack parameters against measured spectra.

Free parameters address pieces of a LayerStack through dotted paths:

    layers[1].thickness
    materials.pvac.eps_b
    materials.pvac.oscillators[0].f       (also .k0, .gamma)
    materials.gold.damping_multiplier     (also .omega_p, .f0, .gamma0)
    materials.window.eps                  (constant media, real part)

Each path has box bounds; internally every parameter is scaled to [0, 1]
by its bound width so the optimizer sees O(1) variables.  The model is
evaluated exactly on the wavenumbers of the target data.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

import numpy as np
import scipy.optimize

from .errors import DomainError, FitError
from .materials import ConstantMedium, DrudeLorentzMetal, LorentzMedium
from .tmm import LayerStack, stack_response

__all__ = [
    "FreeParameter",
    "FitProblem",
    "FitResult",
    "apply_params",
    "residual_vector",
    "loss_value",
    "loss_gradient",
    "model_values",
    "solve",
]

_LAYER_RE = re.compile(r"^layers\[(\d+)\]\.thickness$")
_MAT_FIELD_RE = re.compile(r"^materials\.([A-Za-z_]\w*)\.([A-Za-z_]\w*)$")
_OSC_RE = re.compile(r"^materials\.([A-Za-z_]\w*)\.oscillators\[(\d+)\]\.(f|k0|gamma)$")

_METAL_FIELDS = ("omega_p", "f0", "gamma0", "damping_multiplier")


def _set_material(stack, name, build):
    if name not in stack.materials:
        raise DomainError(f"unknown material {name!r} in parameter path")
    mats = dict(stack.materials)
    mats[name] = build(mats[name])
    return replace(stack, materials=mats)


def apply_params(stack, updates):
    """New LayerStack with the path -> value updates applied."""
    for path, value in updates.items():
        value = float(value)
        m = _LAYER_RE.match(path)
        if m:
            i = int(m.group(1))
            if i >= len(stack.layers):
                raise DomainError(f"layer index out of range in {path!r}")
            layers = list(stack.layers)
            layers[i] = replace(layers[i], thickness=value)
            stack = replace(stack, layers=tuple(layers))
            continue
        m = _OSC_RE.match(path)
        if m:
            name, j, fld = m.group(1), int(m.group(2)), m.group(3)

            def build(mat, j=j, fld=fld, path=path):
                if not isinstance(mat, LorentzMedium) or j >= len(mat.oscillators):
                    raise DomainError(f"{path!r} does not address a Lorentz oscillator")
                osc = list(mat.oscillators)
                osc[j] = replace(osc[j], **{fld: value})
                return replace(mat, oscillators=tuple(osc))

            stack = _set_material(stack, name, build)
            continue
        m = _MAT_FIELD_RE.match(path)
        if m:
            name, fld = m.group(1), m.group(2)

            def build(mat, fld=fld, path=path):
                if isinstance(mat, LorentzMedium) and fld == "eps_b":
                    return replace(mat, eps_b=value)
                if isinstance(mat, ConstantMedium) and fld == "eps":
                    return ConstantMedium(complex(value, mat.eps.imag))
                if isinstance(mat, DrudeLorentzMetal) and fld in _METAL_FIELDS:
                    return replace(mat, **{fld: value})
                raise DomainError(f"{path!r} does not address a fittable field")

            stack = _set_material(stack, name, build)
            continue
        raise DomainError(f"unrecognized parameter path {path!r}")
    return stack


@dataclass(frozen=True)
class FreeParameter:
    """A fittable path with box bounds."""

    path: str
    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise DomainError("parameter bounds must be finite")
        if not self.lower < self.upper:
            raise DomainError(f"bounds for {self.path!r} must satisfy lower < upper")


@dataclass
class FitProblem:
    """Target data plus the stack template and its free parameters."""

    stack: LayerStack
    free: tuple[FreeParameter, ...]
    k: np.ndarray
    target: np.ndarray
    channel: str = "T"
    angle: float = 0.0
    polarization: str = "s"
    weights: np.ndarray | None = None

    def __post_init__(self):
        self.free = tuple(self.free)
        self.k = np.asarray(self.k, dtype=float)
        self.target = np.asarray(self.target, dtype=float)
        if self.k.ndim != 1 or self.k.shape != self.target.shape:
            raise DomainError("k and target must be 1-D arrays of equal length")
        if np.any(self.k <= 0) or np.any(np.diff(self.k) <= 0):
            raise DomainError("target wavenumbers must be positive and increasing")
        if self.channel not in ("T", "R", "A"):
            raise DomainError("fit channel must be T, R or A")
        # apply with the template's own values to validate every path early
        apply_params(self.stack, {p.path: _read_path(self.stack, p.path) for p in self.free})
        if self.weights is not None:
            self.weights = np.asarray(self.weights, dtype=float)
            if self.weights.shape != self.k.shape:
                raise DomainError("weights must match the target grid")

    def params_dict(self, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (len(self.free),):
            raise DomainError("expected one value per free parameter")
        return {p.path: float(v) for p, v in zip(self.free, values)}


def _read_path(stack, path):
    """Current value behind a parameter path (used for seeding and path
    validation)."""
    m = _LAYER_RE.match(path)
    if m:
        i = int(m.group(1))
        if i >= len(stack.layers):
            raise DomainError(f"layer index out of range in {path!r}")
        return stack.layers[i].thickness
    m = _OSC_RE.match(path)
    if m:
        name, j, fld = m.group(1), int(m.group(2)), m.group(3)
        mat = stack.materials.get(name)
        if not isinstance(mat, LorentzMedium) or j >= len(mat.oscillators):
            raise DomainError(f"{path!r} does not address a Lorentz oscillator")
        return getattr(mat.oscillators[j], fld)
    m = _MAT_FIELD_RE.match(path)
    if m:
        name, fld = m.group(1), m.group(2)
        mat = stack.materials.get(name)
        if mat is None:
            raise DomainError(f"unknown material in {path!r}")
        if isinstance(mat, ConstantMedium) and fld == "eps":
            return mat.eps.real
        if isinstance(mat, (LorentzMedium, DrudeLorentzMetal)) and hasattr(mat, fld):
            return getattr(mat, fld)
    raise DomainError(f"unrecognized parameter path {path!r}")


def model_values(problem, values):
    """Model channel evaluated on the target grid for the given parameter
    values (physical units, ordered like problem.free)."""
    stack = apply_params(problem.stack, problem.params_dict(values))
    T, R, A = stack_response(stack, problem.k, problem.angle, problem.polarization)
    return {"T": T, "R": R, "A": A}[problem.channel]


def residual_vector(problem, values):
    """Weighted (model - target) on the target grid."""
    res = model_values(problem, values) - problem.target
    if problem.weights is not None:
        res = res * problem.weights
    return res


def loss_value(problem, values):
    """Sum of squared weighted residuals."""
    r = residual_vector(problem, values)
    return float(r @ r)


def loss_gradient(problem, values, rel_step=1e-6):
    """d(loss)/d(values) from forward-difference residual Jacobians,
    grad = 2 J^T r."""
    values = np.asarray(values, dtype=float)
    r0 = residual_vector(problem, values)
    grad = np.empty_like(values)
    for i, p in enumerate(problem.free):
        h = rel_step * (p.upper - p.lower)
        stepped = values.copy()
        stepped[i] += h
        grad[i] = 2.0 * (residual_vector(problem, stepped) - r0) @ r0 / h
    return grad


@dataclass
class FitResult:
    params: dict
    loss: float
    initial_loss: float
    success: bool
    n_evaluations: int
    residuals: np.ndarray
    start_losses: list
    start_params: list
    best_start: int


def solve(problem, n_starts=1, seed=0, max_nfev=2000):
    """Multi-start bounded least squares over the free parameters.

    Start 0 uses the template's own parameter values (clipped into the
    bounds); further starts are uniform draws from numpy's
    default_rng(seed).  The lowest final loss wins, ties broken by start
    index.  Hitting the iteration cap flags the result non-converged
    instead of raising.
    """
    if n_starts < 1:
        raise DomainError("n_starts must be >= 1")

    if not problem.free:
        residuals = residual_vector(problem, np.empty(0))
        loss = float(residuals @ residuals)
        return FitResult(
            params={}, loss=loss, initial_loss=loss, success=True,
            n_evaluations=1, residuals=residuals, start_losses=[loss],
            start_params=[{}], best_start=0,
        )

    lower = np.array([p.lower for p in problem.free])
    upper = np.array([p.upper for p in problem.free])
    width = upper - lower

    def to_physical(x):
        return lower + x * width

    def fun(x):
        return residual_vector(problem, to_physical(x))

    template = np.array([_read_path(problem.stack, p.path) for p in problem.free])
    x0_template = np.clip((template - lower) / width, 0.0, 1.0)
    initial_residuals = fun(x0_template)
    initial_loss = float(initial_residuals @ initial_residuals)
    if not np.isfinite(initial_loss):
        raise FitError("loss is non-finite at the template point")

    rng = np.random.default_rng(seed)
    starts = [x0_template]
    for _ in range(n_starts - 1):
        starts.append(rng.uniform(0.0, 1.0, size=len(problem.free)))

    best = None
    start_losses = []
    start_params = []
    total_nfev = 0
    for idx, x0 in enumerate(starts):
        res = scipy.optimize.least_squares(
            fun, x0, bounds=(np.zeros_like(x0), np.ones_like(x0)),
            method="trf", ftol=1e-8, max_nfev=max_nfev,
        )
        loss = float(2.0 * res.cost)
        start_losses.append(loss)
        start_params.append(problem.params_dict(to_physical(res.x)))
        total_nfev += int(res.nfev)
        if best is None or loss < best[0]:
            best = (loss, idx, res)
    loss, idx, res = best
    return FitResult(
        params=problem.params_dict(to_physical(res.x)),
        loss=loss,
        initial_loss=initial_loss,
        success=bool(res.status > 0),
        n_evaluations=total_nfev,
        residuals=res.fun.copy(),
        start_losses=start_losses,
        start_params=start_params,
        best_start=idx,
    )
