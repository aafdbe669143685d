"""Intra-cavity field reconstruction.

The tangential pair (U, V) used by the transfer matrices is marched
through the stack: U is E_y for s polarization and H_y for p, with the
incident wave normalized to unit electric-field amplitude.  Within each
layer the pair splits into forward/backward waves

    u+ = (U + V/q)/2,   u- = (U - V/q)/2,

so U(s) = u+ e^{i kz s} + u- e^{-i kz s} at depth s, and the intensity
|E(z)|^2 / |E_inc|^2 follows directly (for p polarization from
E_x = V and E_z = -kx U / (k0 eps)).  z = 0 is the front face of the
first layer and grows toward the substrate.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .tmm import SpectralGrid, _admittance, _check_angle, _kz, _K_TO_RAD_NM, _thread_count

__all__ = ["FieldProfile", "FieldMap", "field_profile", "field_map"]


@dataclass
class FieldProfile:
    """|E|^2 and normalized Poynting flux along z at a single wavenumber."""

    z: np.ndarray
    intensity: np.ndarray
    poynting: np.ndarray
    k: float
    angle: float
    polarization: str
    boundaries: tuple[float, ...]


@dataclass
class FieldMap:
    """|E(z, k)|^2 over a wavenumber grid, shape (nk, nz)."""

    k: np.ndarray
    z: np.ndarray
    intensity: np.ndarray
    angle: float
    polarization: str
    boundaries: tuple[float, ...]


def _march(stack, k, angle, polarization):
    """Per-layer forward/backward amplitudes for one scalar wavenumber.

    Returns (regions, q_amb, kx/k0, amp); each region is a dict with its
    z extent, kz, q, eps and the (u+, u-) pair at its entry face."""
    k0 = _K_TO_RAD_NM * k
    kx = k0 * stack.n_ambient * math.sin(math.radians(angle))
    amp = 1.0 if polarization == "s" else stack.n_ambient

    def props(eps):
        kz = complex(_kz(np.asarray(eps), k0, kx))
        q = complex(_admittance(eps, kz, k0, polarization))
        return kz, q

    eps_amb = complex(stack.n_ambient**2)
    kz_amb, q_amb = props(eps_amb)

    layers = []
    for layer in stack.layers:
        eps = complex(stack.epsilon_of(layer.material, np.asarray([k]))[0])
        kz, q = props(eps)
        layers.append((layer.thickness, eps, kz, q))
    eps_sub = complex(stack.epsilon_of(stack.substrate, np.asarray([k]))[0])
    kz_sub, q_sub = props(eps_sub)

    # reflection coefficient from the full matrix product
    m = np.eye(2, dtype=complex)
    for d, eps, kz, q in layers:
        delta = kz * d
        mj = np.array(
            [
                [np.cos(delta), -1j * np.sin(delta) / q],
                [-1j * q * np.sin(delta), np.cos(delta)],
            ]
        )
        m = m @ mj
    denom = q_amb * m[0, 0] + q_amb * q_sub * m[0, 1] + m[1, 0] + q_sub * m[1, 1]
    r = (q_amb * m[0, 0] + q_amb * q_sub * m[0, 1] - m[1, 0] - q_sub * m[1, 1]) / denom

    regions = []
    # ambient: entry face at z = 0 looking backward; store amplitudes of
    # e^{i kz z} and e^{-i kz z} with z measured from the front face
    regions.append(
        {"z0": -math.inf, "z1": 0.0, "eps": eps_amb, "kz": kz_amb, "q": q_amb,
         "up": amp + 0j, "um": amp * r}
    )
    U = amp * (1.0 + r)
    V = amp * q_amb * (1.0 - r)
    z0 = 0.0
    for d, eps, kz, q in layers:
        up = 0.5 * (U + V / q)
        um = 0.5 * (U - V / q)
        regions.append({"z0": z0, "z1": z0 + d, "eps": eps, "kz": kz, "q": q, "up": up, "um": um})
        phase_p = np.exp(1j * kz * d)
        phase_m = np.exp(-1j * kz * d)
        U = up * phase_p + um * phase_m
        V = q * (up * phase_p - um * phase_m)
        z0 += d
    regions.append(
        {"z0": z0, "z1": math.inf, "eps": eps_sub, "kz": kz_sub, "q": q_sub,
         "up": U + 0j, "um": 0.0 + 0j}
    )
    return regions, q_amb, kx / k0, amp


def _evaluate(regions, q_amb, sin_amb, amp, z, polarization):
    z = np.asarray(z, dtype=float)
    intensity = np.empty_like(z)
    poynting = np.empty_like(z)
    for reg in regions:
        mask = (z >= reg["z0"]) & (z < reg["z1"])
        if not np.any(mask):
            continue
        s = z[mask] - (reg["z0"] if math.isfinite(reg["z0"]) else 0.0)
        phase_p = np.exp(1j * reg["kz"] * s)
        phase_m = np.exp(-1j * reg["kz"] * s)
        U = reg["up"] * phase_p + reg["um"] * phase_m
        V = reg["q"] * (reg["up"] * phase_p - reg["um"] * phase_m)
        if polarization == "s":
            intensity[mask] = np.abs(U) ** 2 / amp**2
        else:
            # E_x = V, E_z = -(kx/k0) U / eps, already per unit E_inc
            ez = sin_amb * U / reg["eps"]
            intensity[mask] = np.abs(V) ** 2 + np.abs(ez) ** 2
        poynting[mask] = np.real(U * np.conj(V)) / (np.real(q_amb) * amp**2)
    return intensity, poynting


def field_profile(stack, k, z, angle=0.0, polarization="s"):
    """Field intensity profile at one wavenumber (cm^-1) on a z grid (nm).

    Unpolarized input averages the s and p intensities and fluxes."""
    _check_angle(angle)
    if not (np.isscalar(k) or np.asarray(k).ndim == 0):
        raise DomainError("field_profile takes a scalar wavenumber")
    k = float(k)
    if not (math.isfinite(k) and k > 0.0):
        raise DomainError("wavenumber must be positive")
    z = np.asarray(z, dtype=float)
    bounds = _boundaries(stack)
    if polarization == "unpolarized":
        pols = ("s", "p")
    elif polarization in ("s", "p"):
        pols = (polarization,)
    else:
        raise DomainError("polarization must be 's', 'p' or 'unpolarized'")
    acc_i = np.zeros_like(z)
    acc_s = np.zeros_like(z)
    for pol in pols:
        regions, q_amb, sin_amb, amp = _march(stack, k, angle, pol)
        inten, poyn = _evaluate(regions, q_amb, sin_amb, amp, z, pol)
        acc_i += inten
        acc_s += poyn
    n = len(pols)
    return FieldProfile(
        z=z, intensity=acc_i / n, poynting=acc_s / n, k=k,
        angle=angle, polarization=polarization, boundaries=bounds,
    )


def _boundaries(stack):
    edges = [0.0]
    for layer in stack.layers:
        edges.append(edges[-1] + layer.thickness)
    return tuple(edges)


def default_z_grid(stack, z_step=10.0, margin_ambient=200.0, margin_substrate=200.0):
    """z samples spanning the stack plus margins into the ambient and the
    substrate (all nm)."""
    if z_step <= 0 or margin_ambient < 0 or margin_substrate < 0:
        raise DomainError("z_step must be > 0 and margins >= 0")
    total = stack.total_thickness()
    return np.arange(-margin_ambient, total + margin_substrate + 0.5 * z_step, z_step)


def field_map(stack, grid, z=None, angle=0.0, polarization="s"):
    """|E(z, k)|^2 over a wavenumber grid; rows follow the grid order.

    Worker threads are capped by VIBROPOL_THREADS (default 1)."""
    k = grid.points if isinstance(grid, SpectralGrid) else np.asarray(grid, dtype=float)
    z = default_z_grid(stack) if z is None else np.asarray(z, dtype=float)

    def row(ki):
        return field_profile(stack, ki, z, angle, polarization).intensity

    workers = min(_thread_count(), max(1, k.size))
    if workers == 1:
        rows = [row(ki) for ki in k]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, k))
    return FieldMap(
        k=k, z=z, intensity=np.vstack(rows), angle=angle,
        polarization=polarization, boundaries=_boundaries(stack),
    )
