#ifndef DRESSEDW_PULSES_HPP
#define DRESSEDW_PULSES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "state_space.hpp"

namespace dressedw {

/// Shape of the mixing-angle and dressing-angle schedules.
struct ScheduleParams {
    double duration = 1.0;  ///< T
    double amplitude = 0.5; ///< A, peak of mu(t); must lie in (0, pi/2)

    void validate() const
    {
        require(std::isfinite(duration) && duration > 0.0, "schedule duration must be positive");
        require(amplitude > 0.0 && amplitude < kPi / 2.0, "schedule amplitude A must lie in (0, pi/2)");
    }
};

struct ScheduleAngles {
    double theta;
    double theta_dot;
    double mu;
    double mu_dot;
};

/// Width of the band next to t = 0 and t = T where the 0/0 ratios in the
/// correction gains are replaced by their limit.
inline double endpoint_guard(const ScheduleParams &p) { return 1e-6 * p.duration; }

inline ScheduleAngles schedule_angles(double t, const ScheduleParams &p)
{
    p.validate();
    const double T = p.duration;
    require(t >= 0.0 && t <= T, "schedule time outside [0, T]");
    const double x = kPi * t / T;
    const double s = std::sin(x);
    ScheduleAngles a{};
    a.theta = x / 2.0 - std::sin(2.0 * x) / 3.0 + std::sin(4.0 * x) / 24.0;
    a.theta_dot = (4.0 * kPi / (3.0 * T)) * s * s * s * s;
    // (A/2)(1 - cos 2x) written as A sin^2 x to keep precision near the endpoints
    a.mu = p.amplitude * s * s;
    a.mu_dot = (kPi * p.amplitude / T) * std::sin(2.0 * x);
    return a;
}

/// Correction gains for xi = eta = 0. The original amplitude Omega cancels
/// from the modified controls, so the Omega-independent sum Omega + g_z is
/// returned together with g_x.
struct CorrectionGains {
    double gx;
    double omega_plus_gz;
    bool at_endpoint; ///< value is the analytic limit inside the guard band

    double gz(double omega) const { return omega_plus_gz - omega; }
};

inline CorrectionGains correction_gains(double t, const ScheduleParams &p)
{
    const ScheduleAngles a = schedule_angles(t, p);
    const double eps = endpoint_guard(p);
    if (t < eps || t > p.duration - eps) {
        return {0.0, 0.0, true};
    }
    return {a.mu_dot, -a.theta_dot / std::tan(a.mu), false};
}

/// Gains for a general Euler-angle dressing (xi != 0). Returns (g_x, g_z).
inline std::array<double, 2> correction_gains_general(double omega, double theta_dot, double mu,
                                                      double mu_dot, double xi, double xi_dot)
{
    const double cx = std::cos(xi);
    const double gx = mu_dot / cx - theta_dot * std::tan(xi);
    const double gz = -omega + xi_dot + (mu_dot * std::sin(xi) - theta_dot) / (std::tan(mu) * cx);
    return {gx, gz};
}

/// Modified mixing angle and amplitude at one instant.
struct DressedControls {
    double theta_tilde;
    double omega_tilde; ///< >= 0

    double omega_a() const { return omega_tilde * std::cos(theta_tilde); }
    double omega_b() const { return omega_tilde * std::sin(theta_tilde); }
};

// With the gains above Omega + g_z < 0 on (0, T). The corrected Hamiltonian
// is then -H_eff(omega_tilde, theta_tilde); flipping the sign of psi1 and of
// psi7..psi9 maps it to +H_eff without touching the cavity coupling or any
// population, so the non-negative representation is returned.
inline DressedControls modified_controls(double t, const ScheduleParams &p)
{
    const ScheduleAngles a = schedule_angles(t, p);
    const double eps = endpoint_guard(p);
    if (t < eps) {
        return {kPi / 2.0, 0.0};
    }
    if (t > p.duration - eps) {
        return {0.0, 0.0};
    }
    const double tan_mu = std::tan(a.mu);
    const double amp = std::hypot(a.theta_dot / tan_mu, a.mu_dot);
    const double shift = std::atan2(a.mu_dot * tan_mu, a.theta_dot);
    return {a.theta + shift, amp};
}

/// Population of the intermediate dark state of the cavity, sin^2(mu) cos^2(xi) with xi = 0.
inline double intermediate_population_bound(double t, const ScheduleParams &p)
{
    const double s = std::sin(schedule_angles(t, p).mu);
    return s * s;
}

/// One Gaussian term zeta * exp(-((t - tau)/chi)^2); amplitude in 1/T,
/// center and width as fractions of T.
struct GaussianComponent {
    double amplitude;
    double center;
    double width;

    double operator()(double t, double T) const
    {
        const double z = (t - center * T) / (width * T);
        return (amplitude / T) * std::exp(-z * z);
    }
};

using GaussianPulse = std::array<GaussianComponent, 2>;

inline double evaluate(const GaussianPulse &pulse, double t, double T)
{
    return pulse[0](t, T) + pulse[1](t, T);
}

/// Published two-Gaussian fits, under their printed channel labels.
inline constexpr GaussianPulse kFitChannelA = {{{6.226, 0.597, 0.2214}, {1.332, 0.2395, 0.1971}}};
inline constexpr GaussianPulse kFitChannelB = {{{6.226, 0.4033, 0.2214}, {1.332, 0.7605, 0.1971}}};

inline constexpr double kStirapOffset = 0.15; ///< t0 / T
inline constexpr double kStirapWidth = 0.2;   ///< tc / T

enum class PulseFlavor { dressed_exact, gaussian_fit, stirap };

/// Which published waveform drives which qubit.
///  - matched: qubits 1-3 (the W branch) get the waveform that peaks first,
///    i.e. the fit component that tracks the exact dressed omega_a, and the
///    counterintuitive STIRAP order with sqrt(2) per-qubit scaling.
///  - printed: the assignment exactly as the formulas are labelled.
enum class ChannelMap { matched, printed };

inline std::string_view to_string(PulseFlavor f)
{
    switch (f) {
    case PulseFlavor::dressed_exact: return "dressed";
    case PulseFlavor::gaussian_fit: return "gaussian";
    case PulseFlavor::stirap: return "stirap";
    }
    return "?";
}

inline PulseFlavor parse_flavor(std::string_view s)
{
    if (s == "dressed" || s == "dressed-exact" || s == "exact") {
        return PulseFlavor::dressed_exact;
    }
    if (s == "gaussian" || s == "gaussian-fit") {
        return PulseFlavor::gaussian_fit;
    }
    if (s == "stirap") {
        return PulseFlavor::stirap;
    }
    throw ValidationError("unknown pulse flavor '" + std::string(s) + "'");
}

inline std::string_view to_string(ChannelMap m) { return m == ChannelMap::matched ? "matched" : "printed"; }

inline ChannelMap parse_channel_map(std::string_view s)
{
    if (s == "matched") {
        return ChannelMap::matched;
    }
    if (s == "printed") {
        return ChannelMap::printed;
    }
    throw ValidationError("unknown channel map '" + std::string(s) + "'");
}

struct PulseSample {
    double t;
    DriveAmplitudes omega;
};

/// Per-qubit drive waveforms. Shapes are laid out on shape_duration(); the
/// evolution window duration() may be shorter or longer (cutoff variations).
class PulseSchedule {
public:
    static PulseSchedule dressed(const ScheduleParams &p = {})
    {
        p.validate();
        PulseSchedule s(PulseFlavor::dressed_exact, p);
        return s;
    }

    static PulseSchedule gaussian(const ScheduleParams &p = {}, ChannelMap map = ChannelMap::matched)
    {
        p.validate();
        PulseSchedule s(PulseFlavor::gaussian_fit, p);
        s.map_ = map;
        return s;
    }

    static PulseSchedule stirap(double omega0, double duration = 1.0, ChannelMap map = ChannelMap::matched,
                                double t0 = kStirapOffset, double tc = kStirapWidth)
    {
        require(std::isfinite(omega0) && omega0 > 0.0, "STIRAP amplitude must be positive");
        require(tc > 0.0, "STIRAP width must be positive");
        PulseSchedule s(PulseFlavor::stirap, ScheduleParams{duration, 0.5});
        s.map_ = map;
        s.stirap_amp_ = omega0;
        s.stirap_t0_ = t0;
        s.stirap_tc_ = tc;
        return s;
    }

    /// Same shapes, all amplitudes multiplied by factor.
    PulseSchedule scaled(double factor) const
    {
        require(std::isfinite(factor) && factor >= 0.0, "amplitude scale must be non-negative");
        PulseSchedule s = *this;
        s.scale_ *= factor;
        return s;
    }

    /// Same shapes, evolution stopped at window (waveforms continue past the
    /// nominal duration where the shape allows).
    PulseSchedule with_window(double window) const
    {
        require(std::isfinite(window) && window > 0.0, "evolution window must be positive");
        PulseSchedule s = *this;
        s.window_ = window;
        return s;
    }

    /// Shapes re-laid on a new total duration; amplitudes keep their 1/T scaling.
    PulseSchedule rescaled(double duration) const
    {
        require(std::isfinite(duration) && duration > 0.0, "duration must be positive");
        PulseSchedule s = *this;
        s.params_.duration = duration;
        s.window_ = duration;
        s.stirap_amp_ = stirap_amp_ * params_.duration / duration;
        return s;
    }

    PulseFlavor flavor() const { return flavor_; }
    ChannelMap channel_map() const { return map_; }
    const ScheduleParams &params() const { return params_; }
    double duration() const { return window_; }
    double shape_duration() const { return params_.duration; }
    double amplitude_scale() const { return scale_; }
    double stirap_amplitude() const { return stirap_amp_; }

    /// Waveform of the W branch (qubits 1-3) and of qubit 4 at time t.
    double omega_w_branch(double t) const { return scale_ * base(t).first; }
    double omega_qubit4(double t) const { return scale_ * base(t).second; }

    /// Rabi frequency of qubit k (1-based).
    double omega(int k, double t) const
    {
        require(k >= 1 && k <= 4, "qubit index must be 1..4");
        return k == 4 ? omega_qubit4(t) : omega_w_branch(t);
    }

    DriveAmplitudes omegas(double t) const
    {
        const auto [w, q4] = base(t);
        return {scale_ * w, scale_ * w, scale_ * w, scale_ * q4};
    }

    /// max over k and t in [0, duration()] of Omega_k(t), on a dense grid.
    double peak_amplitude(int samples = 20001) const
    {
        double peak = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double t = window_ * i / (samples - 1);
            const auto w = omegas(t);
            peak = std::max({peak, w[0], w[3]});
        }
        return peak;
    }

    std::vector<PulseSample> sample(int n_steps) const
    {
        require(n_steps >= 1, "sample count must be positive");
        std::vector<PulseSample> out;
        out.reserve(static_cast<std::size_t>(n_steps) + 1);
        for (int i = 0; i <= n_steps; ++i) {
            const double t = window_ * i / n_steps;
            out.push_back({t, omegas(t)});
        }
        return out;
    }

private:
    PulseSchedule(PulseFlavor f, const ScheduleParams &p)
        : flavor_(f), params_(p), window_(p.duration)
    {
    }

    // (W-branch, qubit-4) waveforms before amplitude scaling.
    std::pair<double, double> base(double t) const
    {
        const double T = params_.duration;
        const double r2 = std::sqrt(2.0);
        switch (flavor_) {
        case PulseFlavor::dressed_exact: {
            if (t <= 0.0 || t >= T) {
                return {0.0, 0.0};
            }
            const DressedControls c = modified_controls(t, params_);
            return {r2 * c.omega_a(), r2 * c.omega_b()};
        }
        case PulseFlavor::gaussian_fit: {
            const double a = evaluate(kFitChannelA, t, T);
            const double b = evaluate(kFitChannelB, t, T);
            return map_ == ChannelMap::matched ? std::pair{r2 * b, r2 * a} : std::pair{r2 * a, r2 * b};
        }
        case PulseFlavor::stirap: {
            const double tc = stirap_tc_ * T;
            const double t0 = stirap_t0_ * T;
            const double late = std::exp(-std::pow((t - t0 - T / 2.0) / tc, 2));
            const double early = std::exp(-std::pow((t + t0 - T / 2.0) / tc, 2));
            if (map_ == ChannelMap::matched) {
                return {r2 * stirap_amp_ * early, r2 * stirap_amp_ * late};
            }
            return {stirap_amp_ * late, stirap_amp_ * early};
        }
        }
        return {0.0, 0.0};
    }

    PulseFlavor flavor_;
    ScheduleParams params_;
    ChannelMap map_ = ChannelMap::matched;
    double window_;
    double scale_ = 1.0;
    double stirap_amp_ = 0.0;
    double stirap_t0_ = kStirapOffset;
    double stirap_tc_ = kStirapWidth;
};

static_assert(WaveformSource<PulseSchedule>);

} // namespace dressedw

#endif // DRESSEDW_PULSES_HPP
