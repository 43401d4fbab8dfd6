#include <catch_amalgamated.hpp>

#include <dressedw/frames.hpp>

#include "oracles.hpp"

using namespace dressedw;
using Catch::Approx;

TEST_CASE("spin-1 matrices satisfy the angular momentum algebra", "[frames]")
{
    const SpinOneMatrices m = spin_one();
    CHECK((m.x * m.y - m.y * m.x - kI * m.z).norm() < 1e-15);
    CHECK((m.y * m.z - m.z * m.y - kI * m.x).norm() < 1e-15);
    CHECK((m.z * m.x - m.x * m.z - kI * m.y).norm() < 1e-15);
    CHECK((m.x * m.x + m.y * m.y + m.z * m.z - 2.0 * Mat3::Identity()).norm() < 1e-15);
    for (const Mat3 *s : {&m.x, &m.y, &m.z}) {
        CHECK((*s - s->adjoint()).norm() == 0.0);
        Eigen::SelfAdjointEigenSolver<Mat3> es(*s);
        CHECK(es.eigenvalues()(0) == Approx(-1.0));
        CHECK(es.eigenvalues()(1) == Approx(0.0).margin(1e-15));
        CHECK(es.eigenvalues()(2) == Approx(1.0));
    }
}

TEST_CASE("closed-form spin rotation equals the exponential series", "[frames]")
{
    const SpinOneMatrices m = spin_one();
    for (double phi : {0.0, 0.37, 1.2, -2.9, 6.0}) {
        for (const Mat3 *s : {&m.x, &m.y, &m.z}) {
            const Mat3 series = oracle::taylor_exp(Mat3(kI * phi * *s));
            CHECK((spin_rotation(*s, phi) - series).norm() < 1e-12);
            // same as a unitary step exp(-i H t) with H = -s, t = phi
            CHECK((spin_rotation(*s, phi) - oracle::unitary_step(Mat3(-*s), phi)).norm() < 1e-12);
        }
    }
    const Mat3 r = euler_rotation(0.3, -0.8, 1.9);
    CHECK((r * r.adjoint() - Mat3::Identity()).norm() < 1e-14);
}

TEST_CASE("adiabatic frame derivative matches finite differences", "[frames]")
{
    const double theta_dot = 2.3;
    for (double theta : {0.1, 0.8, 1.4}) {
        const Frame fd = oracle::derivative([&](double t) { return adiabatic_frame(theta + theta_dot * t); }, 0.0);
        CHECK((adiabatic_frame_derivative(theta, theta_dot) - fd).norm() < 1e-8);
    }
}

TEST_CASE("adiabatic picture of H_eff is Omega Mz + thetadot My", "[frames]")
{
    const ScheduleParams p;
    const double omega = 4.0;
    for (double t : {0.15, 0.5, 0.72}) {
        auto u_of = [&](double s) { return adiabatic_frame(schedule_angles(s, p).theta); };
        const Frame u = u_of(t);
        const Frame du = oracle::derivative(u_of, t);
        const ScheduleAngles a = schedule_angles(t, p);
        const Operator h = effective_hamiltonian(omega * std::cos(a.theta), omega * std::sin(a.theta));
        const Mat3 h_ad = u.adjoint() * h * u - kI * u.adjoint() * du;
        CHECK((h_ad - adiabatic_hamiltonian(omega, a.theta_dot)).norm() < 1e-7);
        CHECK((u.adjoint() * u - Mat3::Identity()).norm() < 1e-14);
    }
}

TEST_CASE("dressing transform is the identity at both ends", "[frames]")
{
    for (double amp : {0.2, 0.5}) {
        const ScheduleParams p{1.0, amp};
        CHECK((dressing_transform(0.0, p) - Mat3::Identity()).norm() < 1e-10);
        CHECK((dressing_transform(1.0, p) - Mat3::Identity()).norm() < 1e-10);
    }
}

TEST_CASE("dressing transform derivative matches finite differences", "[frames]")
{
    const ScheduleParams p;
    for (double t : {0.2, 0.5, 0.9}) {
        const Mat3 fd = oracle::derivative([&](double s) { return dressing_transform(s, p); }, t);
        CHECK((dressing_transform_derivative(t, p) - fd).norm() < 1e-7);
    }
}

TEST_CASE("designed gains cancel the dressed-frame couplings", "[frames]")
{
    for (double amp : {0.2, 0.35, 0.5, 1.0}) {
        const CancellationReport r = verify_cancellation(ScheduleParams{1.0, amp});
        CHECK(r.pass);
        CHECK(r.worst_residual < 1e-6);
        CHECK(r.plus_minus_max < 1e-12);
        CHECK(r.grid_points == 100);
    }
}

TEST_CASE("dropping either gain breaks the cancellation", "[frames]")
{
    CHECK_FALSE(verify_cancellation(ScheduleParams{}, 100, {true, false}).pass);
    CHECK_FALSE(verify_cancellation(ScheduleParams{}, 100, {false, true}).pass);
    CHECK_THROWS_AS(verify_cancellation(ScheduleParams{}, 50), ValidationError);
}

TEST_CASE("dressed-frame Hamiltonian does not depend on the bare amplitude", "[frames]")
{
    const ScheduleParams p;
    for (double t : {0.3, 0.6}) {
        const CorrectionGains g = correction_gains(t, p);
        const Mat3 ref = dressed_picture_hamiltonian(t, p, 1.0, g.gx, g.gz(1.0));
        for (double omega : {5.0, 40.0, 300.0}) {
            CHECK((dressed_picture_hamiltonian(t, p, omega, g.gx, g.gz(omega)) - ref).norm() < 1e-9);
        }
    }
}

TEST_CASE("general-xi gains cancel couplings in the Euler-angle frame", "[frames]")
{
    const double omega = 3.0;
    auto angles = [](double t) {
        const double mu = 0.5 * std::pow(std::sin(kPi * t), 2);
        const double xi = 0.3 * std::sin(kPi * t);
        return std::pair{mu, xi};
    };
    const SpinOneMatrices m = spin_one();
    for (double t : {0.2, 0.45, 0.8}) {
        const ScheduleAngles a = schedule_angles(t, ScheduleParams{});
        const auto [mu, xi] = angles(t);
        const double mu_dot = oracle::central_difference([&](double s) { return angles(s).first; }, t);
        const double xi_dot = oracle::central_difference([&](double s) { return angles(s).second; }, t);
        const auto [gx, gz] = correction_gains_general(omega, a.theta_dot, mu, mu_dot, xi, xi_dot);
        auto v_of = [&](double s) {
            const auto [m1, x1] = angles(s);
            return euler_rotation(0.0, m1, x1);
        };
        const Mat3 v = v_of(t);
        const Mat3 vdot = oracle::derivative(v_of, t);
        const Mat3 h = adiabatic_hamiltonian(omega + gz, a.theta_dot) + gx * m.x;
        const Mat3 hp = v * h * v.adjoint() + kI * vdot * v.adjoint();
        CHECK(std::abs(hp(0, 1)) < 1e-7);
        CHECK(std::abs(hp(0, 2)) < 1e-7);
    }
}
