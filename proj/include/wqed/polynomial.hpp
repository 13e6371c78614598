// polynomial.hpp - characteristic polynomials, adjugates and polynomial roots.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "wqed/errors.hpp"
#include "wqed/model.hpp"

namespace wqed::poly {

/// Coefficients in ascending order: p(z) = c[0] + c[1] z + ... + c[n] z^n.
using Coeffs = std::vector<cplx>;

inline cplx evaluate(const Coeffs& c, cplx z) {
    cplx acc{0.0};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

inline Coeffs derivative(const Coeffs& c) {
    Coeffs d;
    for (std::size_t m = 1; m < c.size(); ++m) d.push_back(c[m] * static_cast<double>(m));
    return d;
}

/// Faddeev-LeVerrier expansion of det(z I - A) and adj(z I - A).
struct Characteristic {
    Coeffs det;                          // monic, degree n
    std::vector<Eigen::MatrixXcd> adj;   // adj(zI - A) = sum_m adj[m] z^m, m = 0..n-1
};

inline Characteristic characteristic(const Eigen::MatrixXcd& a) {
    const auto n = static_cast<int>(a.rows());
    // M_1 = I, c_{n-1} = -tr A;  M_k = A M_{k-1} + c_{n-k+1} I,  c_{n-k} = -tr(A M_k) / k.
    Characteristic out;
    out.det.assign(static_cast<std::size_t>(n) + 1, cplx{0.0});
    out.adj.assign(static_cast<std::size_t>(n), Eigen::MatrixXcd::Zero(n, n));
    out.det[static_cast<std::size_t>(n)] = 1.0;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
    for (int k = 1; k <= n; ++k) {
        if (k > 1) m = a * m + out.det[static_cast<std::size_t>(n - k + 1)] * Eigen::MatrixXcd::Identity(n, n);
        out.adj[static_cast<std::size_t>(n - k)] = m;
        out.det[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
    }
    return out;
}

inline Eigen::MatrixXcd evaluate(const std::vector<Eigen::MatrixXcd>& c, cplx z) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(c.front().rows(), c.front().cols());
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

/// Roots of a monic polynomial: companion-matrix eigenvalues, then Newton polish.
inline std::vector<cplx> roots(const Coeffs& c) {
    const auto n = static_cast<int>(c.size()) - 1;
    if (n < 1) return {};
    if (std::abs(c.back() - cplx{1.0}) > 1e-14) throw InvalidParameter("roots: polynomial must be monic");
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[static_cast<std::size_t>(i)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
    if (solver.info() != Eigen::Success) throw NumericalFailure("companion eigenvalue solver failed");

    const Coeffs d = derivative(c);
    std::vector<cplx> z(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        cplx x = solver.eigenvalues()(i);
        for (int it = 0; it < 4; ++it) {
            const cplx dp = evaluate(d, x);
            if (std::abs(dp) == 0.0) break;
            const cplx step = evaluate(c, x) / dp;
            x -= step;
            if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
        }
        z[static_cast<std::size_t>(i)] = x;
    }
    // Deterministic order: by real part, then imaginary part.
    std::sort(z.begin(), z.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return z;
}

}  // namespace wqed::poly
