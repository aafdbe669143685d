"""Back-of-envelope coupling budget for the C=O cavity.

Walks the estimate chain from vacuum field to collective splitting and
checks it against what the transfer matrix actually produces. No fit
anywhere, every number is closed-form.
"""

from vibropol import (
    CavityMode,
    bond_density,
    collective_splitting,
    dephasing_time,
    effective_concentration,
    fp_mode_estimate,
    quality_factor,
    single_coupling,
    thermal_occupation,
    vacuum_field,
    zero_point_amplitude,
)

K_CAV = 1740.0   # cm^-1, first cavity resonance
N_BG = 1.41      # polymer background index
D_EFF = 1.0      # Debye, transition dipole of the C=O stretch


def main():
    mode = CavityMode(omega_cm1=K_CAV, kappa_fwhm_mev=17.1, background_index=N_BG)
    v = mode.volume_m3
    e_vac = vacuum_field(K_CAV, v)
    print(f"mode volume      {v:.3e} m^3   ((lambda/n)^3 for a planar cavity)")
    print(f"vacuum field     {e_vac:.3e} V/m")

    q = zero_point_amplitude(reduced_mass_amu=6.857, omega_cm1=1740.0)
    g1 = single_coupling(dipole_debye=D_EFF, omega_cm1=K_CAV, volume_m3=v)
    print(f"zero-point x     {q:.3e} m      (reduced mass of the C=O pair)")
    print(f"single molecule  {g1 * 1e6:.3f} ueV   -- hopeless on its own")

    n_bonds = bond_density(mass_density_g_cm3=1.18, monomer_mass_g_mol=86.09)
    n_mode = n_bonds * v * 1e6  # bonds per cm^3 times volume in cm^3
    omega_r = collective_splitting(g1, n_mode)
    print(f"\nbond density     {n_bonds:.3e} cm^-3")
    print(f"bonds in V       {n_mode:.3e}")
    print(f"sqrt(N) boost    {omega_r * 1e3:.1f} meV"
          f"  = {omega_r * 8065.54:.0f} cm^-1 if every bond took part")

    # compare with what the stack actually shows
    observed_mev = 20.7
    n_eff = effective_concentration(
        observed_splitting_ev=observed_mev * 1e-3, single_ev=g1, volume_m3=v)
    print(f"\nobserved Rabi    {observed_mev:.1f} meV")
    print(f"implied N/V      {n_eff:.2e} cm^-3"
          f"  ({n_eff / n_bonds:.0%} of all C=O bonds)")

    # loss budget: which decay channel wins
    q_vib = quality_factor(1740.0, 25.9)
    q_cav = quality_factor(1741.6, 137.6)
    print(f"\nQ (vibration)    {q_vib:6.1f}")
    print(f"Q (bare cavity)  {q_cav:6.1f}   photon escape dominates the loss")
    for fwhm in (17.1, 2.86, 1.50):
        print(f"  FWHM {fwhm:5.2f} meV -> lifetime {dephasing_time(fwhm):6.3f} ps")

    n_th = thermal_occupation(omega_cm1=1740.0, temperature_k=300.0)
    print(f"\nthermal factor   {n_th:.2e}  (the mode is dark at 300 K)")

    w_cav = fp_mode_estimate(n_eff=N_BG, thickness_nm=1930.0)
    print(f"\nhalf-wave check  {w_cav:.1f} cm^-1 expected vs 1741.6 observed"
          " (mirror phase does the rest)")


if __name__ == "__main__":
    main()
