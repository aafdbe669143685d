"""Where the light lives: intra-cavity intensity profiles.

Maps |E|^2 inside the uncoupled cavity at its first and second resonances
(one antinode vs two), then shows what coupling does to the field at the
band center: the polymer absorbs the antinode away.
"""

import numpy as np

from vibropol import (
    ConstantMedium,
    Layer,
    LayerStack,
    LorentzMedium,
    LorentzOscillator,
    default_z_grid,
    field_profile,
    gold,
    spectrum_scan,
    SpectralGrid,
    find_peaks,
)


def build(with_band):
    oscillators = (
        (LorentzOscillator(f=5.0e4, k0=1739.0, gamma=13.0),) if with_band else ()
    )
    return LayerStack(
        materials={
            "pvac": LorentzMedium(eps_b=1.41**2, oscillators=oscillators),
            "gold": gold(),
            "germanium": ConstantMedium(eps=16.0),
        },
        layers=(Layer("gold", 10.0), Layer("pvac", 1930.0), Layer("gold", 10.0)),
        substrate="germanium",
        substrate_mode="incoherent_to_air",
    )


def sketch(z, intensity, width=60):
    """Crude terminal plot, one row per sample of a coarsened profile."""
    idx = np.linspace(0, z.size - 1, 33).astype(int)
    top = intensity.max()
    for i in idx:
        n = int(round(width * intensity[i] / top))
        print(f"  z={z[i]:7.1f} nm |{'#' * n}")


def main():
    bare = build(with_band=False)
    z = default_z_grid(bare, z_step=2.0)

    # locate the first two cavity resonances from the transmission spectrum
    spectrum = spectrum_scan(bare, SpectralGrid(1500.0, 3700.0, 0.5))
    peaks = find_peaks(spectrum.k, spectrum.T)
    k1, k2 = peaks[0].center, peaks[1].center
    print(f"cavity resonances: {k1:.1f} and {k2:.1f} cm^-1")

    for order, k_res in ((1, k1), (2, k2)):
        prof = field_profile(bare, k_res, z).intensity
        inside = (z > 10.0) & (z < 1940.0)
        i_max = np.argmax(np.where(inside, prof, 0.0))
        print(f"\nmode {order} at {k_res:.1f} cm^-1:"
              f" peak |E|^2 = {prof[i_max]:.3f} at z = {z[i_max]:.0f} nm")
        sketch(z, prof)

    coupled = build(with_band=True)
    prof_on = field_profile(coupled, 1739.0, z).intensity
    prof_off = field_profile(bare, 1739.0, z).intensity
    mid = np.argmin(np.abs(z - 970.0))
    print("\nat the C=O band center (1739 cm^-1):")
    print(f"  mid-cavity |E|^2 without the band: {prof_off[mid]:.3f}")
    print(f"  mid-cavity |E|^2 with the band:    {prof_on[mid]:.3f}")
    print("  the vibration eats the antinode; the polaritons live off-band")


if __name__ == "__main__":
    main()
