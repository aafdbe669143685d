"""Transfer-matrix optics for planar multilayer stacks.

Each layer contributes a 2x2 characteristic matrix relating the tangential
field pair (U, V) on its two faces,

    M = [[cos(delta), -i sin(delta)/q], [-i q sin(delta), cos(delta)]],

with delta = kz d and the polarization admittance q = kz/k0 (s) or
q = kz/(k0 eps) (p).  det(M) = 1 for every layer.  The out-of-plane
wavevector kz = sqrt(k0^2 eps - kx^2) is taken on the branch
Im(kz) >= 0 (decay into the layer), with Re(kz) >= 0 when Im(kz) = 0,
and the in-plane kx = k0 n_ambient sin(angle) is conserved across the
stack.  Conventions follow exp(-i omega t).
"""

from __future__ import annotations

import math
import os
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .errors import DomainError
from .materials import ConstantMedium, evaluate_epsilon

__all__ = [
    "Layer",
    "LayerStack",
    "SpectralGrid",
    "Spectrum",
    "layer_matrix",
    "stack_response",
    "spectrum_scan",
    "angle_scan",
    "divergence_nodes",
]

POLARIZATIONS = ("s", "p", "unpolarized")

# cm^-1 -> rad/nm
_K_TO_RAD_NM = 2.0e-7 * math.pi


def _thread_count():
    raw = os.environ.get("VIBROPOL_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class Layer:
    """One finite layer: a material name (resolved against the stack's
    materials map) and a thickness in nm."""

    material: str
    thickness: float

    def __post_init__(self):
        if not isinstance(self.material, str) or not self.material:
            raise DomainError("layer material must be a non-empty name")
        if not (math.isfinite(self.thickness) and self.thickness > 0.0):
            raise DomainError("layer thickness must be finite and positive (nm)")


@dataclass(frozen=True)
class LayerStack:
    """Ambient / finite layers / semi-infinite substrate.

    materials maps names to dielectric models; layers and the substrate
    refer to them by name so a single material edit propagates to every
    layer that uses it.  substrate_mode selects how the rear side is
    closed: "coherent" leaves the substrate semi-infinite, while
    "incoherent_to_air" multiplies the coherent transmittance by the
    single-pass substrate-to-air Fresnel factor (thick transparent
    substrate with its back face out of coherence range).
    """

    materials: Mapping[str, object]
    layers: tuple[Layer, ...]
    substrate: str
    n_ambient: float = 1.0
    substrate_mode: str = "coherent"

    def __post_init__(self):
        object.__setattr__(self, "materials", MappingProxyType(dict(self.materials)))
        object.__setattr__(self, "layers", tuple(self.layers))
        if not (math.isfinite(self.n_ambient) and self.n_ambient >= 1.0):
            raise DomainError("ambient index must be real and >= 1")
        if self.substrate_mode not in ("coherent", "incoherent_to_air"):
            raise DomainError("substrate_mode must be 'coherent' or 'incoherent_to_air'")
        missing = [ly.material for ly in self.layers if ly.material not in self.materials]
        if self.substrate not in self.materials:
            missing.append(self.substrate)
        if missing:
            raise DomainError(f"unknown material name(s): {sorted(set(missing))}")

    def epsilon_of(self, name, k):
        return evaluate_epsilon(self.materials[name], k)

    def total_thickness(self):
        return sum(ly.thickness for ly in self.layers)

    def reversed(self):
        """Stack traversed from the substrate side.  Only meaningful when
        the substrate is lossless; the new ambient takes its index."""
        sub = self.materials[self.substrate]
        if not isinstance(sub, ConstantMedium) or sub.eps.imag != 0.0:
            raise DomainError("can only reverse onto a lossless constant substrate")
        mats = dict(self.materials)
        mats.setdefault("_reversed_exit", ConstantMedium(self.n_ambient**2))
        return LayerStack(
            materials=mats,
            layers=tuple(reversed(self.layers)),
            substrate="_reversed_exit",
            n_ambient=math.sqrt(sub.eps.real),
            substrate_mode="coherent",
        )


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform wavenumber grid, inclusive of k_min; k_max is included when
    it falls on the lattice.  k_min == k_max yields a single-point grid."""

    k_min: float
    k_max: float
    step: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.k_min <= self.k_max) or not math.isfinite(self.k_max):
            raise DomainError("grid requires 0 < k_min <= k_max")
        if not (self.step > 0.0 and math.isfinite(self.step)):
            raise DomainError("grid step must be positive")

    @property
    def points(self):
        n = int(math.floor((self.k_max - self.k_min) / self.step + 1e-9)) + 1
        return self.k_min + self.step * np.arange(n)


@dataclass
class Spectrum:
    """T/R/A on a wavenumber grid at one (angle, polarization)."""

    k: np.ndarray
    T: np.ndarray
    R: np.ndarray
    A: np.ndarray
    angle: float = 0.0
    polarization: str = "s"

    def channel(self, name):
        try:
            return {"T": self.T, "R": self.R, "A": self.A}[name]
        except KeyError:
            raise DomainError(f"unknown channel {name!r}, expected T, R or A") from None


def _kz(eps, k0_rad, kx_rad):
    kz = np.sqrt(k0_rad**2 * eps - kx_rad**2 + 0j)
    kz = np.where(kz.imag < 0.0, -kz, kz)
    kz = np.where((kz.imag == 0.0) & (kz.real < 0.0), -kz, kz)
    return kz


def _admittance(eps, kz, k0_rad, polarization):
    if polarization == "s":
        return kz / k0_rad
    return kz / (k0_rad * eps)


def _check_angle(angle):
    if not (math.isfinite(angle) and abs(angle) < 90.0):
        raise DomainError("incidence angle must satisfy |angle| < 90 degrees")


def layer_matrix(model, thickness, k, kx=0.0, polarization="s", n_ambient=1.0):
    """Characteristic matrix of a single layer, shape (nk, 2, 2).

    k and kx are both in cm^-1 (kx = k n_ambient sin(angle) for a wave
    launched from the ambient); thickness in nm.  kx at or beyond the
    ambient light line (|kx| >= k n_ambient) has no propagating source
    wave and is rejected; evanescent kz inside the layer itself is fine.
    """
    if polarization not in ("s", "p"):
        raise DomainError("layer_matrix polarization must be 's' or 'p'")
    if not (math.isfinite(thickness) and thickness >= 0.0):
        raise DomainError("thickness must be finite and >= 0")
    k = np.atleast_1d(np.asarray(k, dtype=float))
    eps = evaluate_epsilon(model, k)
    k0_rad = _K_TO_RAD_NM * k
    kx_arr = np.asarray(kx, dtype=float)
    if not np.all(np.isfinite(kx_arr)):
        raise DomainError("in-plane wavevector must be finite")
    if np.any(np.abs(kx_arr) >= k * n_ambient):
        raise DomainError("|kx| >= k n_ambient: no propagating ambient wave")
    kx_rad = _K_TO_RAD_NM * kx_arr
    kz = _kz(eps, k0_rad, kx_rad)
    q = _admittance(eps, kz, k0_rad, polarization)
    delta = kz * thickness
    m = np.empty(k.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = np.cos(delta)
    m[..., 0, 1] = -1j * np.sin(delta) / q
    m[..., 1, 0] = -1j * q * np.sin(delta)
    m[..., 1, 1] = np.cos(delta)
    return m


def _single_pol_response(stack, k, angle, polarization):
    k = np.atleast_1d(np.asarray(k, dtype=float))
    k0_rad = _K_TO_RAD_NM * k
    kx_cm1 = k * stack.n_ambient * math.sin(math.radians(angle))
    kx_rad = _K_TO_RAD_NM * kx_cm1

    eps_amb = np.full_like(k, stack.n_ambient**2, dtype=complex)
    q_amb = _admittance(eps_amb, _kz(eps_amb, k0_rad, kx_rad), k0_rad, polarization)

    eps_sub = stack.epsilon_of(stack.substrate, k)
    q_sub = _admittance(eps_sub, _kz(eps_sub, k0_rad, kx_rad), k0_rad, polarization)

    m = np.zeros(k.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = 1.0
    m[..., 1, 1] = 1.0
    for layer in stack.layers:
        mj = layer_matrix(
            stack.materials[layer.material], layer.thickness, k, kx_cm1,
            polarization, n_ambient=stack.n_ambient,
        )
        m = m @ mj

    denom = q_amb * m[..., 0, 0] + q_amb * q_sub * m[..., 0, 1] + m[..., 1, 0] + q_sub * m[..., 1, 1]
    r = (q_amb * m[..., 0, 0] + q_amb * q_sub * m[..., 0, 1] - m[..., 1, 0] - q_sub * m[..., 1, 1]) / denom
    t = 2.0 * q_amb / denom

    R = np.abs(r) ** 2
    T = np.real(q_sub) / np.real(q_amb) * np.abs(t) ** 2

    if stack.substrate_mode == "incoherent_to_air":
        eps_air = np.ones_like(k, dtype=complex)
        q_air = _admittance(eps_air, _kz(eps_air, k0_rad, kx_rad), k0_rad, polarization)
        t_exit = 2.0 * q_sub / (q_sub + q_air)
        # evanescent substrate wave (total internal reflection inside the
        # stack): nothing reaches the rear face, T stays 0
        re_sub = np.real(q_sub)
        factor = np.zeros_like(T)
        open_channel = re_sub > 0.0
        factor[open_channel] = (
            np.real(q_air)[open_channel] / re_sub[open_channel]
            * np.abs(t_exit[open_channel]) ** 2
        )
        T = T * factor

    return T, R


def stack_response(stack, k, angle=0.0, polarization="s"):
    """(T, R, A) of the stack at one incidence angle.

    k: wavenumbers in cm^-1 (scalar or array).  Unpolarized input averages
    the s and p intensities.  A is defined as 1 - T - R.
    """
    _check_angle(angle)
    if polarization not in POLARIZATIONS:
        raise DomainError(f"polarization must be one of {POLARIZATIONS}")
    if polarization == "unpolarized":
        Ts, Rs = _single_pol_response(stack, k, angle, "s")
        Tp, Rp = _single_pol_response(stack, k, angle, "p")
        T, R = 0.5 * (Ts + Tp), 0.5 * (Rs + Rp)
    else:
        T, R = _single_pol_response(stack, k, angle, polarization)
    return T, R, 1.0 - T - R


def spectrum_scan(stack, grid, angle=0.0, polarization="s"):
    """Spectrum over a SpectralGrid at a fixed angle."""
    k = grid.points if isinstance(grid, SpectralGrid) else np.asarray(grid, dtype=float)
    T, R, A = stack_response(stack, k, angle, polarization)
    return Spectrum(k=k, T=T, R=R, A=A, angle=angle, polarization=polarization)


def divergence_nodes(angle, sigma, n_nodes=11):
    """Angular quadrature for a Gaussian beam-divergence average: n_nodes
    uniformly spaced points across angle +- 3 sigma, Gaussian-weighted,
    truncated to |angle| < 90 and renormalized."""
    if sigma < 0.0 or not math.isfinite(sigma):
        raise DomainError("divergence sigma must be >= 0 degrees")
    if n_nodes < 1 or n_nodes % 2 == 0:
        raise DomainError("divergence quadrature needs an odd node count >= 1")
    if sigma == 0.0:
        return np.array([angle]), np.array([1.0])
    offsets = np.linspace(-3.0 * sigma, 3.0 * sigma, n_nodes)
    thetas = angle + offsets
    weights = np.exp(-0.5 * (offsets / sigma) ** 2)
    keep = np.abs(thetas) < 90.0
    if not np.any(keep):
        raise DomainError("divergence cone lies entirely beyond grazing")
    thetas, weights = thetas[keep], weights[keep]
    return thetas, weights / weights.sum()


def _averaged_spectrum(stack, k, angle, polarization, divergence, n_nodes):
    thetas, weights = divergence_nodes(angle, divergence, n_nodes)
    T = np.zeros_like(k)
    R = np.zeros_like(k)
    for theta, w in zip(thetas, weights):
        Ti, Ri, _ = stack_response(stack, k, theta, polarization)
        T += w * Ti
        R += w * Ri
    return Spectrum(k=k, T=T, R=R, A=1.0 - T - R, angle=angle, polarization=polarization)


def angle_scan(stack, grid, angles, polarization="s", divergence=0.0, n_nodes=11):
    """Spectra over a list of angles, optionally averaged over a Gaussian
    angular spread of half-width `divergence` degrees (one sigma).

    Worker threads are capped by the VIBROPOL_THREADS environment
    variable (default 1); results are ordered like `angles` either way.
    """
    k = grid.points if isinstance(grid, SpectralGrid) else np.asarray(grid, dtype=float)
    angles = [float(a) for a in angles]
    for a in angles:
        _check_angle(a)

    def run(angle):
        if divergence > 0.0:
            return _averaged_spectrum(stack, k, angle, polarization, divergence, n_nodes)
        T, R, A = stack_response(stack, k, angle, polarization)
        return Spectrum(k=k, T=T, R=R, A=A, angle=angle, polarization=polarization)

    workers = min(_thread_count(), max(1, len(angles)))
    if workers == 1:
        return [run(a) for a in angles]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, angles))
