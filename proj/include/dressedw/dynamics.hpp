#ifndef DRESSEDW_DYNAMICS_HPP
#define DRESSEDW_DYNAMICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>

#include "state_space.hpp"

namespace dressedw {

/// Decoherence rates in units of 1/T, shared by all four qubits.
struct NoiseModel {
    double kappa = 0.0;     ///< cavity decay
    double gamma = 0.0;     ///< spontaneous emission e->1 and e->0, each
    double gamma_phi = 0.0; ///< dephasing e-1 and e-0, each

    void validate() const
    {
        require(kappa >= 0.0 && gamma >= 0.0 && gamma_phi >= 0.0, "decoherence rates must be non-negative");
        require(std::isfinite(kappa) && std::isfinite(gamma) && std::isfinite(gamma_phi),
                "decoherence rates must be finite");
    }

    bool is_closed() const { return kappa == 0.0 && gamma == 0.0 && gamma_phi == 0.0; }
};

inline constexpr int kNumJumpOperators = 17;

namespace detail {

constexpr std::array<BasisLabel, 4> kExcited = {BasisLabel::psi4, BasisLabel::psi5, BasisLabel::psi6,
                                                BasisLabel::psi2};
constexpr std::array<BasisLabel, 4> kLowerOne = {BasisLabel::psi7, BasisLabel::psi8, BasisLabel::psi9,
                                                 BasisLabel::psi1};

// |e><e|_k - |x><x|_k evaluated on every basis vector
inline Operator level_difference(int qubit, Level other)
{
    Operator d = Operator::Zero();
    for (BasisLabel l : kAllLabels) {
        const Level q = basis_state(l).qubit[static_cast<std::size_t>(qubit)];
        const double v = q == Level::excited ? 1.0 : (q == other ? -1.0 : 0.0);
        d(index_of(l), index_of(l)) = v;
    }
    return d;
}

} // namespace detail

/// L1-L4: e->1 emission, L5-L8: e->0 emission, L9-L12: e/1 dephasing,
/// L13-L16: e/0 dephasing, L17: cavity decay. Qubit order 1, 2, 3, 4.
inline std::vector<Operator> lindblad_operators(const NoiseModel &noise)
{
    noise.validate();
    std::vector<Operator> ops;
    ops.reserve(kNumJumpOperators);
    const double sg = std::sqrt(noise.gamma);
    for (int k = 0; k < 4; ++k) {
        Operator l = Operator::Zero();
        l(index_of(detail::kLowerOne[k]), index_of(detail::kExcited[k])) = sg;
        ops.push_back(l);
    }
    for (int k = 0; k < 4; ++k) {
        Operator l = Operator::Zero();
        l(index_of(BasisLabel::ground), index_of(detail::kExcited[k])) = sg;
        ops.push_back(l);
    }
    const double sp = std::sqrt(noise.gamma_phi / 2.0);
    for (Level other : {Level::one, Level::zero}) {
        for (int k = 0; k < 4; ++k) {
            ops.push_back(sp * detail::level_difference(k, other));
        }
    }
    Operator a = Operator::Zero();
    a(index_of(BasisLabel::ground), index_of(BasisLabel::psi3)) = std::sqrt(noise.kappa);
    ops.push_back(a);
    return ops;
}

/// Sum over jump operators of L rho L^dag - (L^dag L rho + rho L^dag L)/2,
/// with each L stored by its nonzero entries.
class Dissipator {
public:
    Dissipator() = default;

    explicit Dissipator(const std::vector<Operator> &ops)
    {
        decay_ = Operator::Zero();
        for (const Operator &l : ops) {
            std::vector<Entry> nz;
            for (int i = 0; i < kDim; ++i) {
                for (int j = 0; j < kDim; ++j) {
                    if (l(i, j) != cplx(0.0)) {
                        nz.push_back({i, j, l(i, j)});
                    }
                }
            }
            if (!nz.empty()) {
                jumps_.push_back(std::move(nz));
                decay_ += l.adjoint() * l;
            }
        }
    }

    bool empty() const { return jumps_.empty(); }

    /// Adds D(rho) to out.
    void apply(const DensityMatrix &rho, DensityMatrix &out) const
    {
        if (jumps_.empty()) {
            return;
        }
        for (const auto &nz : jumps_) {
            for (const Entry &p : nz) {
                for (const Entry &q : nz) {
                    out(p.row, q.row) += p.value * rho(p.col, q.col) * std::conj(q.value);
                }
            }
        }
        out.noalias() -= 0.5 * (decay_ * rho);
        out.noalias() -= 0.5 * (rho * decay_);
    }

private:
    struct Entry {
        int row;
        int col;
        cplx value;
    };
    std::vector<std::vector<Entry>> jumps_;
    Operator decay_ = Operator::Zero();
};

struct TimeGrid {
    int n_steps = 2000;
    double t_end = 1.0;

    void validate() const
    {
        require(n_steps >= 100, "time grid needs at least 100 steps");
        require(std::isfinite(t_end) && t_end > 0.0, "time grid end must be positive");
    }

    double step() const { return t_end / n_steps; }
    double time(int i) const { return t_end * i / n_steps; }
};

using Populations = std::array<double, kDim>;

inline double fidelity(const Ket &psi) { return std::norm(w_state().dot(psi)); }

inline double fidelity(const DensityMatrix &rho)
{
    const Ket w = w_state();
    return std::abs((w.adjoint() * rho * w)(0, 0));
}

inline Populations populations(const Ket &psi)
{
    Populations p{};
    for (int i = 0; i < kDim; ++i) {
        p[static_cast<std::size_t>(i)] = std::norm(psi(i));
    }
    return p;
}

inline Populations populations(const DensityMatrix &rho)
{
    Populations p{};
    for (int i = 0; i < kDim; ++i) {
        p[static_cast<std::size_t>(i)] = rho(i, i).real();
    }
    return p;
}

struct Observables {
    double t = 0.0;
    double fidelity = 0.0;
    Populations populations{};
};

struct Diagnostics {
    double norm_drift = 0.0;  ///< |<psi|psi> - 1| at the final time (pure states)
    double trace_drift = 0.0; ///< max |tr rho - 1| over all steps (mixed states)
    double min_eigenvalue = 1.0;
    bool converged = true;
    std::string message;
};

inline constexpr double kNormDriftLimit = 1e-6;
inline constexpr double kTraceDriftLimit = 1e-8;
inline constexpr double kPositivityLimit = -1e-6;

template <class State>
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    std::vector<Observables> observables;
    Diagnostics diagnostics;

    const State &final_state() const { return states.back(); }
    double final_fidelity() const { return observables.back().fidelity; }
};

using PureTrajectory = Trajectory<Ket>;
using MixedTrajectory = Trajectory<DensityMatrix>;

struct PropagationOptions {
    int max_frames = 500; ///< stored snapshots, including t = 0 and the final time
};

template <class Fn>
concept HamiltonianFn = requires(const Fn &f, double t) {
    { f(t) } -> std::convertible_to<Operator>;
};

namespace detail {

inline int frame_stride(int n_steps, int max_frames)
{
    const int frames = std::max(2, max_frames);
    return std::max(1, (n_steps + frames - 2) / (frames - 1));
}

template <class State>
void record(Trajectory<State> &traj, double t, const State &s)
{
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.observables.push_back({t, fidelity(s), populations(s)});
}

} // namespace detail

/// Fixed-step RK4 for i dpsi/dt = H(t) psi. No renormalization.
template <HamiltonianFn H>
PureTrajectory propagate_schrodinger(const H &hamiltonian, const Ket &psi0, const TimeGrid &grid,
                                     const PropagationOptions &opt = {})
{
    grid.validate();
    require(std::abs(psi0.norm() - 1.0) < 1e-9, "initial state must be normalized");
    const double h = grid.step();
    const int stride = detail::frame_stride(grid.n_steps, opt.max_frames);

    PureTrajectory traj;
    Ket psi = psi0;
    detail::record(traj, 0.0, psi);
    Operator h_start = hamiltonian(0.0);
    for (int i = 0; i < grid.n_steps; ++i) {
        const double t = grid.time(i);
        const Operator h_mid = hamiltonian(t + 0.5 * h);
        const Operator h_end = hamiltonian(grid.time(i + 1));
        const Ket k1 = -kI * (h_start * psi);
        const Ket k2 = -kI * (h_mid * (psi + 0.5 * h * k1));
        const Ket k3 = -kI * (h_mid * (psi + 0.5 * h * k2));
        const Ket k4 = -kI * (h_end * (psi + h * k3));
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        h_start = h_end;
        if ((i + 1) % stride == 0 || i + 1 == grid.n_steps) {
            detail::record(traj, grid.time(i + 1), psi);
        }
    }
    Diagnostics &d = traj.diagnostics;
    d.norm_drift = std::abs(psi.squaredNorm() - 1.0);
    if (d.norm_drift > kNormDriftLimit) {
        d.converged = false;
        d.message = "norm drift " + std::to_string(d.norm_drift) + " exceeds limit";
    }
    return traj;
}

/// drho/dt = i[rho, H] + sum_l (L rho L^dag - {L^dag L, rho}/2)
inline DensityMatrix lindblad_rhs(const Operator &h, const Dissipator &diss, const DensityMatrix &rho)
{
    DensityMatrix out = kI * (rho * h - h * rho);
    diss.apply(rho, out);
    return out;
}

inline double min_eigenvalue(const DensityMatrix &rho)
{
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

/// Fixed-step RK4 on the density matrix, Hermitian-symmetrized once per step.
template <HamiltonianFn H>
MixedTrajectory propagate_lindblad(const H &hamiltonian, const Dissipator &diss, const DensityMatrix &rho0,
                                   const TimeGrid &grid, const PropagationOptions &opt = {})
{
    grid.validate();
    require((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() < 1e-10, "initial density matrix must be Hermitian");
    require(std::abs(rho0.trace() - cplx(1.0)) < 1e-8, "initial density matrix must have unit trace");
    const double h = grid.step();
    const int stride = detail::frame_stride(grid.n_steps, opt.max_frames);

    MixedTrajectory traj;
    Diagnostics &d = traj.diagnostics;
    DensityMatrix rho = rho0;
    detail::record(traj, 0.0, rho);
    d.min_eigenvalue = min_eigenvalue(rho);
    Operator h_start = hamiltonian(0.0);
    for (int i = 0; i < grid.n_steps; ++i) {
        const double t = grid.time(i);
        const Operator h_mid = hamiltonian(t + 0.5 * h);
        const Operator h_end = hamiltonian(grid.time(i + 1));
        const DensityMatrix k1 = lindblad_rhs(h_start, diss, rho);
        const DensityMatrix k2 = lindblad_rhs(h_mid, diss, rho + 0.5 * h * k1);
        const DensityMatrix k3 = lindblad_rhs(h_mid, diss, rho + 0.5 * h * k2);
        const DensityMatrix k4 = lindblad_rhs(h_end, diss, rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint()).eval();
        h_start = h_end;
        d.trace_drift = std::max(d.trace_drift, std::abs(rho.trace().real() - 1.0));
        if ((i + 1) % stride == 0 || i + 1 == grid.n_steps) {
            detail::record(traj, grid.time(i + 1), rho);
            d.min_eigenvalue = std::min(d.min_eigenvalue, min_eigenvalue(rho));
        }
    }
    if (d.trace_drift > kTraceDriftLimit) {
        d.converged = false;
        d.message = "trace drift " + std::to_string(d.trace_drift) + " exceeds limit";
    } else if (d.min_eigenvalue < kPositivityLimit) {
        d.converged = false;
        d.message = "density matrix lost positivity (min eigenvalue " + std::to_string(d.min_eigenvalue) + ")";
    }
    return traj;
}

template <HamiltonianFn H>
MixedTrajectory propagate_lindblad(const H &hamiltonian, const std::vector<Operator> &lindblads,
                                   const DensityMatrix &rho0, const TimeGrid &grid,
                                   const PropagationOptions &opt = {})
{
    return propagate_lindblad(hamiltonian, Dissipator(lindblads), rho0, grid, opt);
}

/// Population time series P1..P9, PG of every stored frame.
template <class State>
std::vector<Populations> populations(const Trajectory<State> &traj)
{
    std::vector<Populations> out;
    out.reserve(traj.observables.size());
    for (const Observables &o : traj.observables) {
        out.push_back(o.populations);
    }
    return out;
}

inline DensityMatrix pure_density(const Ket &psi) { return psi * psi.adjoint(); }

} // namespace dressedw

#endif // DRESSEDW_DYNAMICS_HPP
