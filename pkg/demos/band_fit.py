"""Two ways to pull numbers out of a measured spectrum.

First the quick one: fit a single Lorentzian band to the bare-film
absorption and read off strength, center and width. Then the heavy one:
treat the whole layer stack as the model and let bounded least squares
recover film thickness and oscillator parameters from a transmission
curve it has never seen.
"""

import numpy as np

from vibropol import (
    ConstantMedium,
    FitProblem,
    FreeParameter,
    Layer,
    LayerStack,
    LorentzMedium,
    LorentzOscillator,
    fit_lorentzian_band,
    model_values,
    solve,
    stack_response,
)

RNG = np.random.default_rng(5)


def film(f=5.0e4, k0=1739.0, gamma=13.0, thickness=1930.0):
    """Bare polymer film on germanium, no mirrors."""
    return LayerStack(
        materials={
            "pvac": LorentzMedium(
                eps_b=1.41**2,
                oscillators=(LorentzOscillator(f=f, k0=k0, gamma=gamma),),
            ),
            "germanium": ConstantMedium(eps=16.0),
        },
        layers=(Layer("pvac", thickness),),
        substrate="germanium",
        substrate_mode="incoherent_to_air",
    )


def main():
    k = np.arange(1600.0, 1900.0, 0.5)

    # --- part 1: line-shape fit of the film absorption ---------------------
    truth = film()
    _, _, absorption = stack_response(truth, k)
    noisy = absorption + RNG.normal(0.0, 2e-4, k.size)

    band = fit_lorentzian_band(k, noisy)
    print("single-band fit of the film absorption (0.02% noise):")
    print(f"  center    {band.k0:9.2f} cm^-1   (true 1739.00)")
    print(f"  width     {band.gamma:9.2f} cm^-1   (true 13, plus interference broadening)")
    print(f"  strength  {band.f:9.0f}")
    print(f"  rms       {band.residual_rms:.2e} after {band.n_evaluations} evaluations")

    # --- part 2: full-stack inversion --------------------------------------
    # pretend we measured transmission of a film whose parameters we lost
    secret = film(f=5.6e4, k0=1744.0, gamma=15.0, thickness=1880.0)
    target, _, _ = stack_response(secret, k)

    template = film()  # nominal recipe as the starting point
    problem = FitProblem(
        stack=template,
        free=(
            FreeParameter("layers[0].thickness", 1500.0, 2400.0),
            FreeParameter("materials.pvac.oscillators[0].f", 1.0e4, 1.0e5),
            FreeParameter("materials.pvac.oscillators[0].k0", 1650.0, 1850.0),
            FreeParameter("materials.pvac.oscillators[0].gamma", 5.0, 60.0),
        ),
        k=k,
        target=target,
        channel="T",
    )

    result = solve(problem, n_starts=3, seed=0)
    print("\nfull-stack inversion from transmission only:")
    names = dict(zip(
        (p.path for p in problem.free),
        ("thickness (nm)", "f", "k0 (cm^-1)", "gamma (cm^-1)"),
    ))
    hidden = {
        "layers[0].thickness": 1880.0,
        "materials.pvac.oscillators[0].f": 5.6e4,
        "materials.pvac.oscillators[0].k0": 1744.0,
        "materials.pvac.oscillators[0].gamma": 15.0,
    }
    for path, value in result.params.items():
        print(f"  {names[path]:15s} {value:10.2f}   (hidden {hidden[path]:.2f})")
    print(f"  loss {result.loss:.2e} after {result.n_evaluations} model evaluations,"
          f" best start {result.best_start} of {len(result.start_losses)}")

    fitted = model_values(problem, [result.params[p.path] for p in problem.free])
    print(f"  worst pointwise T error {np.abs(fitted - target).max():.2e}")


if __name__ == "__main__":
    main()
