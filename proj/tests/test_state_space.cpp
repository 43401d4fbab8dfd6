#include <catch_amalgamated.hpp>

#include <optional>
#include <utility>
#include <vector>

#include <dressedw/state_space.hpp>

#include "oracles.hpp"

using namespace dressedw;
using Catch::Approx;

namespace {

bool same(const BasisState &a, const BasisState &b) { return a.qubit == b.qubit && a.photons == b.photons; }

std::optional<int> find_index(const BasisState &s)
{
    for (BasisLabel l : kAllLabels) {
        if (same(basis_state(l), s)) {
            return index_of(l);
        }
    }
    return std::nullopt;
}

// Brute-force action of sum_k c_k (|e><0|_k a + h.c.) on an occupation state.
std::vector<std::pair<BasisState, double>> cavity_action(const BasisState &s, double g)
{
    std::vector<std::pair<BasisState, double>> out;
    for (int k = 0; k < 4; ++k) {
        const double c = k == 3 ? std::sqrt(3.0) * g : g;
        BasisState t = s;
        if (s.photons >= 1 && s.qubit[k] == Level::zero) {
            t.qubit[k] = Level::excited;
            t.photons = s.photons - 1;
            out.push_back({t, c * std::sqrt(double(s.photons))});
        } else if (s.qubit[k] == Level::excited) {
            t.qubit[k] = Level::zero;
            t.photons = s.photons + 1;
            out.push_back({t, c * std::sqrt(double(s.photons + 1))});
        }
    }
    return out;
}

// Brute-force action of sum_k Omega_k (|e><1|_k + h.c.).
std::vector<std::pair<BasisState, double>> drive_action(const BasisState &s, const DriveAmplitudes &w)
{
    std::vector<std::pair<BasisState, double>> out;
    for (int k = 0; k < 4; ++k) {
        BasisState t = s;
        if (s.qubit[k] == Level::one) {
            t.qubit[k] = Level::excited;
            out.push_back({t, w[k]});
        } else if (s.qubit[k] == Level::excited) {
            t.qubit[k] = Level::one;
            out.push_back({t, w[k]});
        }
    }
    return out;
}

template <class Action>
Operator brute_force(const Action &act)
{
    Operator m = Operator::Zero();
    for (BasisLabel l : kAllLabels) {
        for (const auto &[t, amp] : act(basis_state(l))) {
            const auto i = find_index(t);
            // closure: every image stays inside the truncated basis
            REQUIRE(i.has_value());
            m(*i, index_of(l)) += amp;
        }
    }
    return m;
}

} // namespace

TEST_CASE("basis labels map to indices 0..9 with G last", "[state_space]")
{
    CHECK(index_of(BasisLabel::psi1) == 0);
    CHECK(index_of(BasisLabel::psi9) == 8);
    CHECK(index_of(BasisLabel::ground) == 9);
    CHECK(label_name(BasisLabel::ground) == "G");
    CHECK(label_name(BasisLabel::psi7) == "psi7");
}

TEST_CASE("cavity Hamiltonian matches brute-force operator action", "[state_space]")
{
    for (double g : {1.0, 30.0, 7.5}) {
        const Operator oracle = brute_force([&](const BasisState &s) { return cavity_action(s, g); });
        CHECK((cavity_hamiltonian(CouplingConfig(g)) - oracle).norm() < 1e-12);
    }
}

TEST_CASE("drive Hamiltonian matches brute-force operator action", "[state_space]")
{
    const DriveAmplitudes w = {0.3, -1.7, 2.2, 4.1};
    const Operator oracle = brute_force([&](const BasisState &s) { return drive_action(s, w); });
    CHECK((drive_hamiltonian(w) - oracle).norm() < 1e-12);
}

TEST_CASE("excitation number is conserved", "[state_space]")
{
    const Operator n = excitation_operator();
    const Operator h = full_hamiltonian(CouplingConfig(30.0), {1.0, 2.0, 3.0, 4.0});
    CHECK((n * h - h * n).norm() < 1e-12);
    for (BasisLabel l : kAllLabels) {
        CHECK(n(index_of(l), index_of(l)).real() == (l == BasisLabel::ground ? 0.0 : 1.0));
    }
}

TEST_CASE("cavity spectrum is 0 (x8) and +-sqrt(6) g", "[state_space]")
{
    const double g = 2.0;
    const Operator hc = cavity_hamiltonian(CouplingConfig(g));
    Eigen::SelfAdjointEigenSolver<Operator> es(hc);
    const auto ev = es.eigenvalues();
    CHECK(ev(0) == Approx(-std::sqrt(6.0) * g));
    CHECK(ev(9) == Approx(std::sqrt(6.0) * g));
    for (int i = 1; i < 9; ++i) {
        CHECK(std::abs(ev(i)) < 1e-12);
    }
    CHECK((hc * dark_state()).norm() < 1e-12);
    CHECK(std::abs(dark_state()(index_of(BasisLabel::psi3))) == 0.0);
    CHECK((hc * bright_state_upper() - std::sqrt(6.0) * g * bright_state_upper()).norm() < 1e-12);
    CHECK((hc * bright_state_lower() + std::sqrt(6.0) * g * bright_state_lower()).norm() < 1e-12);
}

TEST_CASE("named states are normalized and orthogonal where expected", "[state_space]")
{
    CHECK(w_state().norm() == Approx(1.0));
    CHECK(dark_state().norm() == Approx(1.0));
    CHECK(std::abs(w_state().dot(dark_state())) < 1e-15);
    CHECK(std::abs(bright_state_upper().dot(bright_state_lower())) < 1e-15);
    CHECK(std::abs(bright_state_upper().dot(dark_state())) < 1e-15);
}

TEST_CASE("effective eigenframe diagonalizes H_eff with eigenvalues 0, +Omega, -Omega", "[state_space]")
{
    const double omega = 3.0;
    for (double theta : {0.0, 0.3, 0.7854, 1.2, 1.5707963}) {
        const Operator h = effective_hamiltonian(omega * std::cos(theta), omega * std::sin(theta));
        const EffectiveEigenframe e = effective_eigenframe(theta);
        CHECK((h * e.zero).norm() < 1e-12);
        CHECK((h * e.upper - omega * e.upper).norm() < 1e-12);
        CHECK((h * e.lower + omega * e.lower).norm() < 1e-12);
        CHECK(std::abs(e.upper.dot(e.lower)) < 1e-14);
        CHECK(std::abs(e.zero.dot(e.upper)) < 1e-14);
    }
}

TEST_CASE("drive on the dark state gives the effective couplings", "[state_space]")
{
    // qubits 1-3 at Omega, qubit 4 at Omega4: H_m phi0 = (Omega W - Omega4 psi1)/sqrt2
    const double w = 1.3, w4 = 0.4;
    const Ket img = drive_hamiltonian({w, w, w, w4}) * dark_state();
    const Ket want = (w * w_state() - w4 * basis_ket(BasisLabel::psi1)) / std::sqrt(2.0);
    CHECK((img - want).norm() < 1e-14);
}

TEST_CASE("coupling configuration validates its inputs", "[state_space]")
{
    CHECK_THROWS_AS(CouplingConfig(0.0), ValidationError);
    CHECK_THROWS_AS(CouplingConfig(-1.0), ValidationError);
    CHECK_THROWS_AS(CouplingConfig(1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(CouplingConfig(std::nan("")), ValidationError);
    CHECK(CouplingConfig(30.0).coupling(4) == Approx(30.0 * std::sqrt(3.0)));
    CHECK_THROWS_AS(drive_hamiltonian({1.0, std::nan(""), 0.0, 0.0}), ValidationError);
}
