"""Coupled-mode models and order-of-magnitude estimators for vibrational
strong coupling.

Frequencies are wavenumbers in cm^-1 unless a name says otherwise; energy
linewidths cross to meV through the fixed eV <-> cm^-1 conversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import constants as const
from .constants import cm1_to_mev, cm1_to_joule, cm1_to_rad_s
from .errors import DomainError, UltrastrongError

__all__ = [
    "VibrationalMode",
    "CavityMode",
    "CoupledModeResult",
    "AnticrossingCurve",
    "vacuum_field",
    "zero_point_amplitude",
    "single_coupling",
    "collective_splitting",
    "effective_concentration",
    "bond_density",
    "thermal_occupation",
    "quality_factor",
    "dephasing_time",
    "is_strong_coupling",
    "fp_mode_estimate",
    "coupled_frequencies",
    "anticrossing_dispersion",
    "estimate_report",
]


def _require_positive(value, name):
    if not (math.isfinite(value) and value > 0.0):
        raise DomainError(f"{name} must be finite and positive")
    return value


@dataclass(frozen=True)
class VibrationalMode:
    """A molecular vibration: center, transition dipole and linewidth."""

    omega_cm1: float
    dipole_debye: float = 0.0
    damping_fwhm_mev: float = 0.0
    reduced_mass_amu: float | None = None

    def __post_init__(self):
        _require_positive(self.omega_cm1, "vibration frequency")
        if self.dipole_debye < 0.0 or self.damping_fwhm_mev < 0.0:
            raise DomainError("dipole and damping must be >= 0")
        if self.reduced_mass_amu is not None:
            _require_positive(self.reduced_mass_amu, "reduced mass")

    @property
    def omega_mev(self):
        return cm1_to_mev(self.omega_cm1)


@dataclass(frozen=True)
class CavityMode:
    """One Fabry-Perot resonance; the default mode volume is the cube of
    the intra-cavity wavelength, (lambda/n)^3."""

    omega_cm1: float
    kappa_fwhm_mev: float = 0.0
    background_index: float = 1.41
    mode_volume_m3: float | None = None

    def __post_init__(self):
        _require_positive(self.omega_cm1, "cavity frequency")
        _require_positive(self.background_index, "background index")
        if self.kappa_fwhm_mev < 0.0:
            raise DomainError("cavity linewidth must be >= 0")
        if self.mode_volume_m3 is not None:
            _require_positive(self.mode_volume_m3, "mode volume")

    @property
    def omega_mev(self):
        return cm1_to_mev(self.omega_cm1)

    @property
    def volume_m3(self):
        if self.mode_volume_m3 is not None:
            return self.mode_volume_m3
        lam_m = 1e-2 / self.omega_cm1 / self.background_index
        return lam_m**3


def vacuum_field(omega_cm1, volume_m3):
    """RMS vacuum field sqrt(hbar omega / 2 eps0 V) in V/m."""
    _require_positive(omega_cm1, "frequency")
    _require_positive(volume_m3, "mode volume")
    return math.sqrt(cm1_to_joule(omega_cm1) / (2.0 * const.EPS0_F_M * volume_m3))


def zero_point_amplitude(reduced_mass_amu, omega_cm1):
    """Zero-point displacement sqrt(hbar / 2 mu omega) in m."""
    _require_positive(reduced_mass_amu, "reduced mass")
    _require_positive(omega_cm1, "frequency")
    mu = reduced_mass_amu * const.AMU_KG
    return math.sqrt(const.HBAR_J_S / (2.0 * mu * cm1_to_rad_s(omega_cm1)))


def single_coupling(dipole_debye, omega_cm1, volume_m3):
    """Single-molecule coupling energy d * E_vac, returned in eV.

    A zero dipole is allowed and gives exactly 0."""
    if dipole_debye < 0.0 or not math.isfinite(dipole_debye):
        raise DomainError("transition dipole must be >= 0")
    e_vac = vacuum_field(omega_cm1, volume_m3)
    return dipole_debye * const.DEBYE_C_M * e_vac / const.E_CHARGE_C


def collective_splitting(single_ev, n_molecules):
    """Collective Rabi splitting single * sqrt(N), same unit as input."""
    if n_molecules < 0:
        raise DomainError("molecule number must be >= 0")
    return single_ev * math.sqrt(n_molecules)


def effective_concentration(observed_splitting_ev, single_ev, volume_m3):
    """Concentration (cm^-3) that reproduces an observed splitting:
    N_eff = (Omega_R / Omega)^2 coupled dipoles in the mode volume."""
    _require_positive(observed_splitting_ev, "observed splitting")
    _require_positive(single_ev, "single-molecule coupling")
    _require_positive(volume_m3, "mode volume")
    n_eff = (observed_splitting_ev / single_ev) ** 2
    return n_eff / (volume_m3 * 1e6)


def bond_density(mass_density_g_cm3, monomer_mass_g_mol, bonds_per_monomer=1.0):
    """Oscillator number density in cm^-3 from bulk density and the molar
    mass of the repeat unit."""
    _require_positive(mass_density_g_cm3, "mass density")
    _require_positive(monomer_mass_g_mol, "monomer mass")
    if bonds_per_monomer <= 0:
        raise DomainError("bonds per monomer must be > 0")
    return mass_density_g_cm3 * const.AVOGADRO / monomer_mass_g_mol * bonds_per_monomer


def thermal_occupation(omega_cm1, temperature_k):
    """Boltzmann factor exp(-hbar omega / kB T); 0 at T = 0."""
    _require_positive(omega_cm1, "frequency")
    if temperature_k < 0.0 or not math.isfinite(temperature_k):
        raise DomainError("temperature must be >= 0 K")
    if temperature_k == 0.0:
        return 0.0
    return math.exp(-cm1_to_joule(omega_cm1) / (const.KB_J_K * temperature_k))


def quality_factor(omega, fwhm):
    """Q = omega / FWHM for any shared unit."""
    _require_positive(omega, "frequency")
    _require_positive(fwhm, "linewidth")
    return omega / fwhm


def dephasing_time(fwhm_mev):
    """Lifetime hbar / FWHM in ps, linewidth in meV."""
    _require_positive(fwhm_mev, "linewidth")
    return const.HBAR_MEV_PS / fwhm_mev


def is_strong_coupling(splitting_mev, vibration_fwhm_mev, cavity_fwhm_mev):
    """True when the splitting exceeds the mean of the two linewidths."""
    if splitting_mev < 0 or vibration_fwhm_mev < 0 or cavity_fwhm_mev < 0:
        raise DomainError("linewidths and splitting must be >= 0")
    return splitting_mev > 0.5 * (vibration_fwhm_mev + cavity_fwhm_mev)


def fp_mode_estimate(n_eff, thickness_nm, order=1, angle=0.0, n_ambient=1.0):
    """Fabry-Perot resonance estimate in cm^-1:

        k = order * 1e7 / (2 n d[nm] cos(theta_int)),

    with the internal angle from Snell's law out of the ambient."""
    _require_positive(n_eff, "effective index")
    _require_positive(thickness_nm, "thickness")
    if order < 1 or int(order) != order:
        raise DomainError("mode order must be a positive integer")
    if not (math.isfinite(angle) and abs(angle) < 90.0):
        raise DomainError("angle must satisfy |angle| < 90 degrees")
    sin_int = n_ambient * math.sin(math.radians(angle)) / n_eff
    if abs(sin_int) >= 1.0:
        raise DomainError("angle is beyond total internal reflection for this index")
    cos_int = math.sqrt(1.0 - sin_int**2)
    return order * 1e7 / (2.0 * n_eff * thickness_nm * cos_int)


@dataclass(frozen=True)
class CoupledModeResult:
    """Polariton frequencies and branch composition."""

    omega_upper: float
    omega_lower: float
    splitting_cm1: float
    splitting_mev: float
    # per branch: fraction of photon and vibration character, summing to 1
    weights: dict

    @property
    def branches(self):
        return self.omega_lower, self.omega_upper


def _rwa_weights(delta, splitting):
    d = math.hypot(delta, splitting)
    if d == 0.0:
        up_photon = 0.5
    else:
        up_photon = 0.5 * (1.0 + delta / d)
    return {
        "upper": {"photon": up_photon, "vibration": 1.0 - up_photon},
        "lower": {"photon": 1.0 - up_photon, "vibration": up_photon},
    }


def coupled_frequencies(omega_c, omega_v, splitting, model="rwa"):
    """Polariton branches of one cavity mode and one vibration.

    model="rwa" diagonalizes the 2x2 coupled-mode Hamiltonian:
        omega_pm = (omega_c + omega_v)/2 +- sqrt(delta^2 + Omega_R^2)/2.
    model="full" keeps the anti-resonant terms; the branches are the
    positive roots of (w^2 - omega_c^2)(w^2 - omega_v^2) =
    Omega_R^2 omega_c omega_v.  Mixing weights always come from the
    2x2 eigenvectors.
    """
    _require_positive(omega_c, "cavity frequency")
    _require_positive(omega_v, "vibration frequency")
    if splitting < 0.0 or not math.isfinite(splitting):
        raise DomainError("splitting must be >= 0")
    delta = omega_c - omega_v
    if model == "rwa":
        half = 0.5 * math.hypot(delta, splitting)
        mean = 0.5 * (omega_c + omega_v)
        upper, lower = mean + half, mean - half
    elif model == "full":
        if splitting**2 >= omega_c * omega_v:
            raise UltrastrongError(
                "splitting^2 >= omega_c * omega_v: lower branch frequency "
                "would be imaginary in the full two-oscillator model"
            )
        s = omega_c**2 + omega_v**2
        disc = math.sqrt((omega_c**2 - omega_v**2) ** 2 + 4.0 * splitting**2 * omega_c * omega_v)
        upper = math.sqrt(0.5 * (s + disc))
        lower = math.sqrt(0.5 * (s - disc))
    else:
        raise DomainError("model must be 'rwa' or 'full'")
    split = upper - lower
    return CoupledModeResult(
        omega_upper=upper,
        omega_lower=lower,
        splitting_cm1=split,
        splitting_mev=cm1_to_mev(split),
        weights=_rwa_weights(delta, splitting),
    )


@dataclass
class AnticrossingCurve:
    """Model polariton dispersion versus incidence angle."""

    angles: np.ndarray
    omega_cavity: np.ndarray
    upper: np.ndarray
    lower: np.ndarray
    omega_vibration: float


def anticrossing_dispersion(
    omega_v, splitting, n_eff, thickness_nm, angles, order=1, n_ambient=1.0, model="rwa"
):
    """Polariton branches versus angle for a Fabry-Perot cavity mode
    crossing one vibration."""
    angles = np.asarray(angles, dtype=float)
    omega_c = np.array(
        [fp_mode_estimate(n_eff, thickness_nm, order, a, n_ambient) for a in angles]
    )
    upper = np.empty_like(omega_c)
    lower = np.empty_like(omega_c)
    for i, wc in enumerate(omega_c):
        res = coupled_frequencies(wc, omega_v, splitting, model=model)
        upper[i], lower[i] = res.omega_upper, res.omega_lower
    return AnticrossingCurve(
        angles=angles, omega_cavity=omega_c, upper=upper, lower=lower, omega_vibration=omega_v
    )


def estimate_report(
    vibration,
    cavity,
    temperature_k=300.0,
    density=None,
    observed_splitting_mev=None,
    polariton_fwhm_mev=None,
):
    """Order-of-magnitude scalar summary for one vibration/cavity pair.

    density, when given, is a dict with mass_density_g_cm3,
    monomer_mass_g_mol and optional bonds_per_monomer.  The report is a
    plain JSON-ready dict; blocks that lack inputs are simply absent.
    """
    volume = cavity.volume_m3
    report = {
        "vibration_cm1": vibration.omega_cm1,
        "vibration_mev": vibration.omega_mev,
        "cavity_cm1": cavity.omega_cm1,
        "cavity_mev": cavity.omega_mev,
        "mode_volume_m3": volume,
        "vacuum_field_v_per_m": vacuum_field(cavity.omega_cm1, volume),
        "thermal_occupation": thermal_occupation(vibration.omega_cm1, temperature_k),
        "temperature_k": temperature_k,
    }
    single_ev = single_coupling(vibration.dipole_debye, cavity.omega_cm1, volume)
    report["single_coupling_ev"] = single_ev
    report["single_coupling_uev"] = single_ev * 1e6
    if vibration.reduced_mass_amu is not None:
        report["zero_point_amplitude_m"] = zero_point_amplitude(
            vibration.reduced_mass_amu, vibration.omega_cm1
        )
    if vibration.damping_fwhm_mev > 0.0:
        report["vibration_quality_factor"] = quality_factor(
            vibration.omega_mev, vibration.damping_fwhm_mev
        )
        report["vibration_lifetime_ps"] = dephasing_time(vibration.damping_fwhm_mev)
    if cavity.kappa_fwhm_mev > 0.0:
        report["cavity_quality_factor"] = quality_factor(
            cavity.omega_mev, cavity.kappa_fwhm_mev
        )
        report["cavity_lifetime_ps"] = dephasing_time(cavity.kappa_fwhm_mev)
    if density is not None:
        rho = bond_density(
            density["mass_density_g_cm3"],
            density["monomer_mass_g_mol"],
            density.get("bonds_per_monomer", 1.0),
        )
        report["bond_density_cm3"] = rho
        if single_ev > 0.0:
            n_total = rho * volume * 1e6
            report["collective_splitting_upper_bound_mev"] = (
                collective_splitting(single_ev, n_total) * 1e3
            )
    if observed_splitting_mev is not None:
        report["observed_splitting_mev"] = observed_splitting_mev
        if single_ev > 0.0:
            rho_c = effective_concentration(observed_splitting_mev * 1e-3, single_ev, volume)
            report["effective_concentration_cm3"] = rho_c
            if "bond_density_cm3" in report:
                report["coupled_fraction"] = rho_c / report["bond_density_cm3"]
        if vibration.damping_fwhm_mev > 0.0 and cavity.kappa_fwhm_mev > 0.0:
            report["strong_coupling"] = is_strong_coupling(
                observed_splitting_mev, vibration.damping_fwhm_mev, cavity.kappa_fwhm_mev
            )
    if polariton_fwhm_mev:
        report["polariton_lifetimes_ps"] = {
            branch: dephasing_time(width) for branch, width in sorted(polariton_fwhm_mev.items())
        }
    return report
