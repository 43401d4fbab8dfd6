// Prepares the W state with the fitted Gaussian pulses, once without and
// once with decoherence, and prints the fidelity at a few instants.

#include <cstdio>

#include <dressedw/dressedw.hpp>

int main()
{
    using namespace dressedw;

    Scenario s; // g = 30/T, gaussian-fit pulses, 2000 steps
    const PureTrajectory closed = simulate_pure(s, {11});
    for (const auto &o : closed.observables) {
        std::printf("t/T = %.1f  F = %.4f  P3 = %.2e\n", o.t, o.fidelity, o.populations[2]);
    }

    s.noise = {0.005 * s.g, 0.005 * s.g, 0.0005 * s.g};
    const MixedTrajectory open = simulate_mixed(s);
    std::printf("with kappa/g = gamma/g = 5e-3, gammaphi/g = 5e-4: F(T) = %.4f\n", open.final_fidelity());
    return 0;
}
