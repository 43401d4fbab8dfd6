#ifndef DRESSEDW_STATE_SPACE_HPP
#define DRESSEDW_STATE_SPACE_HPP

#include <array>
#include <cmath>
#include <concepts>
#include <string>

#include "types.hpp"

namespace dressedw {

// Collective basis of four Lambda-type qubits and one cavity mode, truncated
// to the one-excitation sector plus the all-ground state G:
//
//   psi1 = |0001>|0>  psi2 = |000e>|0>  psi3 = |0000>|1>
//   psi4 = |e000>|0>  psi5 = |0e00>|0>  psi6 = |00e0>|0>
//   psi7 = |1000>|0>  psi8 = |0100>|0>  psi9 = |0010>|0>
//   G    = |0000>|0>
//
// The space is closed under the coherent Hamiltonian and all jump operators.

enum class BasisLabel : int {
    psi1 = 1, psi2, psi3, psi4, psi5, psi6, psi7, psi8, psi9, ground
};

inline constexpr std::array<BasisLabel, kDim> kAllLabels = {
    BasisLabel::psi1, BasisLabel::psi2, BasisLabel::psi3, BasisLabel::psi4,
    BasisLabel::psi5, BasisLabel::psi6, BasisLabel::psi7, BasisLabel::psi8,
    BasisLabel::psi9, BasisLabel::ground};

constexpr int index_of(BasisLabel label) { return static_cast<int>(label) - 1; }

inline std::string label_name(BasisLabel label)
{
    if (label == BasisLabel::ground) {
        return "G";
    }
    return "psi" + std::to_string(static_cast<int>(label));
}

enum class Level { zero, one, excited };

struct BasisState {
    std::array<Level, 4> qubit;
    int photons;
};

/// Qubit levels and photon number of each basis vector.
constexpr BasisState basis_state(BasisLabel label)
{
    using L = Level;
    switch (label) {
    case BasisLabel::psi1: return {{L::zero, L::zero, L::zero, L::one}, 0};
    case BasisLabel::psi2: return {{L::zero, L::zero, L::zero, L::excited}, 0};
    case BasisLabel::psi3: return {{L::zero, L::zero, L::zero, L::zero}, 1};
    case BasisLabel::psi4: return {{L::excited, L::zero, L::zero, L::zero}, 0};
    case BasisLabel::psi5: return {{L::zero, L::excited, L::zero, L::zero}, 0};
    case BasisLabel::psi6: return {{L::zero, L::zero, L::excited, L::zero}, 0};
    case BasisLabel::psi7: return {{L::one, L::zero, L::zero, L::zero}, 0};
    case BasisLabel::psi8: return {{L::zero, L::one, L::zero, L::zero}, 0};
    case BasisLabel::psi9: return {{L::zero, L::zero, L::one, L::zero}, 0};
    case BasisLabel::ground: return {{L::zero, L::zero, L::zero, L::zero}, 0};
    }
    return {{L::zero, L::zero, L::zero, L::zero}, 0};
}

inline Ket basis_ket(BasisLabel label)
{
    Ket v = Ket::Zero();
    v(index_of(label)) = 1.0;
    return v;
}

/// Cavity couplings: g for qubits 1-3, sqrt(3) g for qubit 4. Units of 1/T.
class CouplingConfig {
public:
    explicit CouplingConfig(double g, double duration = 1.0)
        : g_(g), duration_(duration)
    {
        require(std::isfinite(g) && g > 0.0, "coupling g must be positive");
        require(std::isfinite(duration) && duration > 0.0, "duration T must be positive");
    }

    double g() const { return g_; }
    double duration() const { return duration_; }

    /// Coupling of qubit k (1-based).
    double coupling(int k) const { return k == 4 ? std::sqrt(3.0) * g_ : g_; }

private:
    double g_;
    double duration_;
};

/// Per-qubit Rabi frequencies Omega_1..Omega_4 at one instant.
using DriveAmplitudes = std::array<double, 4>;

inline Operator cavity_hamiltonian(const CouplingConfig &cfg)
{
    Operator h = Operator::Zero();
    const int c = index_of(BasisLabel::psi3);
    // |e>_k<0| a moves the photon of psi3 into qubit k
    h(index_of(BasisLabel::psi4), c) = cfg.coupling(1);
    h(index_of(BasisLabel::psi5), c) = cfg.coupling(2);
    h(index_of(BasisLabel::psi6), c) = cfg.coupling(3);
    h(index_of(BasisLabel::psi2), c) = cfg.coupling(4);
    return h + h.adjoint().eval();
}

inline Operator drive_hamiltonian(const DriveAmplitudes &omega)
{
    for (double w : omega) {
        require(std::isfinite(w), "drive amplitude must be finite");
    }
    Operator h = Operator::Zero();
    h(index_of(BasisLabel::psi4), index_of(BasisLabel::psi7)) = omega[0];
    h(index_of(BasisLabel::psi5), index_of(BasisLabel::psi8)) = omega[1];
    h(index_of(BasisLabel::psi6), index_of(BasisLabel::psi9)) = omega[2];
    h(index_of(BasisLabel::psi2), index_of(BasisLabel::psi1)) = omega[3];
    return h + h.adjoint().eval();
}

inline Operator full_hamiltonian(const CouplingConfig &cfg, const DriveAmplitudes &omega)
{
    return cavity_hamiltonian(cfg) + drive_hamiltonian(omega);
}

/// Anything that supplies the four drive waveforms over [0, duration()].
template <class S>
concept WaveformSource = requires(const S &s, double t) {
    { s.duration() } -> std::convertible_to<double>;
    { s.omegas(t) } -> std::convertible_to<DriveAmplitudes>;
};

template <WaveformSource Schedule>
Operator full_hamiltonian(const CouplingConfig &cfg, const Schedule &pulses, double t)
{
    const double tol = 1e-12 * pulses.duration();
    require(t >= -tol && t <= pulses.duration() + tol, "time outside the pulse window");
    return full_hamiltonian(cfg, pulses.omegas(t));
}

inline Operator excitation_operator()
{
    Operator n = Operator::Zero();
    for (BasisLabel l : kAllLabels) {
        const BasisState s = basis_state(l);
        int count = s.photons;
        for (Level q : s.qubit) {
            count += (q == Level::zero) ? 0 : 1;
        }
        n(index_of(l), index_of(l)) = static_cast<double>(count);
    }
    return n;
}

/// (psi4 + psi5 + psi6)/sqrt(3): symmetric single excitation on qubits 1-3.
inline Ket symmetric_excited()
{
    return (basis_ket(BasisLabel::psi4) + basis_ket(BasisLabel::psi5) +
            basis_ket(BasisLabel::psi6)) / std::sqrt(3.0);
}

/// Target state (psi7 + psi8 + psi9)/sqrt(3).
inline Ket w_state()
{
    return (basis_ket(BasisLabel::psi7) + basis_ket(BasisLabel::psi8) +
            basis_ket(BasisLabel::psi9)) / std::sqrt(3.0);
}

/// Zero-energy eigenstate of the cavity coupling; carries no photon.
inline Ket dark_state()
{
    return (-basis_ket(BasisLabel::psi2) + symmetric_excited()) / std::sqrt(2.0);
}

/// Bright eigenstates of the cavity coupling with energies +sqrt(6) g and -sqrt(6) g.
inline Ket bright_state_upper()
{
    return (basis_ket(BasisLabel::psi2) + std::sqrt(2.0) * basis_ket(BasisLabel::psi3) +
            symmetric_excited()) / 2.0;
}

inline Ket bright_state_lower()
{
    return (basis_ket(BasisLabel::psi2) - std::sqrt(2.0) * basis_ket(BasisLabel::psi3) +
            symmetric_excited()) / 2.0;
}

/// Three-level model valid for Omega << g:
///   H_eff = omega_a |W><phi0| - omega_b |psi1><phi0| + h.c.
inline Operator effective_hamiltonian(double omega_a, double omega_b)
{
    const Ket d = dark_state();
    const Ket w = w_state();
    const Ket p1 = basis_ket(BasisLabel::psi1);
    Operator h = omega_a * (w * d.adjoint()) - omega_b * (p1 * d.adjoint());
    return h + h.adjoint().eval();
}

/// Instantaneous eigenstates of H_eff for mixing angle theta, where
/// omega_a = Omega cos(theta) and omega_b = Omega sin(theta).
struct EffectiveEigenframe {
    Ket zero;  ///< eigenvalue 0: cos(theta) psi1 + sin(theta) W
    Ket upper; ///< eigenvalue +Omega
    Ket lower; ///< eigenvalue -Omega
};

inline EffectiveEigenframe effective_eigenframe(double theta)
{
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Ket p1 = basis_ket(BasisLabel::psi1);
    const Ket w = w_state();
    const Ket d = dark_state();
    const double r = 1.0 / std::sqrt(2.0);
    return {
        c * p1 + s * w,
        r * (s * p1 - d - c * w),
        r * (s * p1 + d - c * w),
    };
}

} // namespace dressedw

#endif // DRESSEDW_STATE_SPACE_HPP
