// Independent reference computations used by the tests. Nothing here calls
// the library's propagators or frame code.

#ifndef DRESSEDW_TESTS_ORACLES_HPP
#define DRESSEDW_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <dressedw/types.hpp>

namespace oracle {

using dressedw::cplx;
using dressedw::kI;

/// exp(-i H dt) for Hermitian H via eigendecomposition.
template <class M>
M unitary_step(const M &h, double dt)
{
    Eigen::SelfAdjointEigenSolver<M> es(h);
    const auto &v = es.eigenvectors();
    M d = M::Zero(h.rows(), h.cols());
    for (int i = 0; i < h.rows(); ++i) {
        d(i, i) = std::exp(-kI * es.eigenvalues()(i) * dt);
    }
    return v * d * v.adjoint();
}

/// Truncated power series of exp(a).
template <class M>
M taylor_exp(const M &a, int terms = 60)
{
    M sum = M::Identity(a.rows(), a.cols());
    M term = M::Identity(a.rows(), a.cols());
    for (int k = 1; k < terms; ++k) {
        term = (term * a / static_cast<double>(k)).eval();
        sum += term;
    }
    return sum;
}

/// Piecewise-constant propagation with exp(-i H(t_mid) h), refined by one
/// Richardson step so the result is fourth order in h.
template <class Vec, class HFn>
Vec piecewise_exponential(const HFn &h_of_t, const Vec &psi0, double t_end, int n)
{
    auto run = [&](int m) {
        Vec psi = psi0;
        const double h = t_end / m;
        for (int i = 0; i < m; ++i) {
            psi = unitary_step(h_of_t((i + 0.5) * h), h) * psi;
        }
        return psi;
    };
    return ((4.0 * run(2 * n) - run(n)) / 3.0).eval();
}

using Dense = Eigen::MatrixXcd;

/// Liouvillian acting on column-stacked density matrices:
/// vec(A X B) = (B^T kron A) vec(X).
inline Dense kron(const Dense &a, const Dense &b)
{
    Dense k(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return k;
}

inline Dense liouvillian(const Dense &h, const std::vector<Dense> &ls)
{
    const int n = static_cast<int>(h.rows());
    const Dense id = Dense::Identity(n, n);
    Dense l = -kI * (kron(id, h) - kron(h.transpose(), id));
    for (const Dense &op : ls) {
        const Dense ld = op.adjoint() * op;
        l += kron(op.conjugate(), op) - 0.5 * kron(id, ld) - 0.5 * kron(ld.transpose(), id);
    }
    return l;
}

inline Eigen::VectorXcd vec(const Dense &rho)
{
    return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

inline Dense unvec(const Eigen::VectorXcd &v, int n)
{
    return Eigen::Map<const Dense>(v.data(), n, n);
}

/// rho(t) = exp(L t) rho0 for a time-independent generator.
inline Dense evolve_exact(const Dense &h, const std::vector<Dense> &ls, const Dense &rho0, double t)
{
    const Dense l = liouvillian(h, ls);
    const Dense prop = (l * t).exp();
    return unvec(prop * vec(rho0), static_cast<int>(rho0.rows()));
}

/// Central difference of a matrix-valued function.
template <class F>
auto derivative(const F &f, double t, double h = 1e-6)
{
    return ((f(t + h) - f(t - h)) / (2.0 * h)).eval();
}

inline double central_difference(const std::function<double(double)> &f, double t, double h = 1e-6)
{
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

} // namespace oracle

#endif // DRESSEDW_TESTS_ORACLES_HPP
