// single_photon.hpp - one-photon scattering eigenstates of the qubit chain.
//
// Amplitudes are obtained by composing 2x2 transfer matrices across the
// delta-coupled qubits. Each qubit matrix is kept in the unnormalised form
//
//     Q'_j = [[1 - 2 i b, -i b], [i b, 1]],   b = (Gamma/2) / (k - w0 + i Gamma'/2 + i Gamma/2),
//
// whose determinant is (1 - i b)^2; the scalar factor 1/(1 - i b) is applied
// only where it appears in closed form. This keeps the composition finite at
// perfect single-qubit reflection (k = w0 with Gamma' = 0).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "wqed/errors.hpp"
#include "wqed/model.hpp"

namespace wqed {

/// How the inter-qubit propagation phases depend on the photon wavevector.
///  - Exact:  e^{i k l_j}, the full retarded model.
///  - Frozen: e^{i k0 l_j}, the Markovian replacement k -> k0 in every
///            phase that involves qubit positions.
enum class PhaseModel { Exact, Frozen };

inline const char* to_string(PhaseModel m) { return m == PhaseModel::Exact ? "exact" : "frozen"; }

/// Plane-wave amplitudes of a region: field = right e^{ikx} + left e^{-ikx}, times 1/sqrt(2 pi).
struct RegionAmplitudes {
    cplx right;
    cplx left;
};

struct SinglePhotonSolution {
    double k{};
    Direction incoming{Direction::Right};
    cplx t;                                // transmitted amplitude (t_N for right incidence)
    cplx r;                                // reflected amplitude (r_1 for right incidence)
    std::vector<cplx> e;                   // qubit excitation amplitudes e_i, i = 1..N
    std::vector<RegionAmplitudes> regions; // N + 1 regions, left to right

    /// Amplitude of the outgoing mode beyond the chain on the `side` edge:
    /// right-movers for x > l_N, left-movers for x < l_1.
    cplx outgoing(Direction side) const {
        return side == Direction::Right ? regions.back().right : regions.front().left;
    }
};

namespace detail {

using Mat2 = std::array<cplx, 4>;  // row major

inline Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline std::array<cplx, 2> apply(const Mat2& m, const std::array<cplx, 2>& v) {
    return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

inline Mat2 adjugate(const Mat2& m) { return {m[3], -m[1], -m[2], m[0]}; }

/// Unnormalised qubit transfer matrix acting on plane-wave amplitudes, with the
/// position phase `phase` = e^{i kappa l_j}.
/// `one_minus_2ib` is passed separately because forming it from b cancels near resonance.
inline Mat2 qubit_matrix(cplx b, cplx one_minus_2ib, cplx phase) {
    const cplx ib = kI * b;
    const cplx p2 = phase * phase;
    // P^{-1} Q' P with P = diag(phase, 1/phase)
    return {one_minus_2ib, -ib / p2, ib * p2, cplx{1.0}};
}

}  // namespace detail

/// Phase wavevector used for position factors under the given model.
inline double phase_wavevector(const QubitChain& chain, double k, PhaseModel model) {
    return model == PhaseModel::Exact ? k : chain.k0();
}

/// Full single-photon scattering solution at real wavevector k.
inline SinglePhotonSolution amplitudes(const QubitChain& chain, double k,
                                       PhaseModel model = PhaseModel::Exact,
                                       Direction incoming = Direction::Right) {
    if (!std::isfinite(k)) throw InvalidParameter("wavevector must be finite");
    const int n = chain.size();
    const auto nn = static_cast<std::size_t>(n);
    const double kappa = phase_wavevector(chain, k, model);
    const cplx detuning{k - chain.omega0(), 0.5 * chain.gamma_prime()};
    const cplx pole = detuning + 0.5 * kI * chain.gamma();
    if (std::abs(pole) == 0.0) throw NumericalFailure("wavevector sits on a qubit pole");
    const cplx b = 0.5 * chain.gamma() / pole;
    const cplx one_minus_ib = detuning / pole;
    const cplx one_minus_2ib = (detuning - 0.5 * kI * chain.gamma()) / pole;

    std::vector<cplx> phase(nn);
    std::vector<detail::Mat2> q(nn);
    detail::Mat2 total{cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{1.0}};
    for (std::size_t j = 0; j < nn; ++j) {
        phase[j] = std::exp(kI * kappa * chain.positions()[j]);
        q[j] = detail::qubit_matrix(b, one_minus_2ib, phase[j]);
        total = detail::mul(q[j], total);
    }
    const cplx m22 = total[3];
    if (std::abs(m22) == 0.0) throw NumericalFailure("transfer matrix pole on the real axis");

    SinglePhotonSolution sol;
    sol.k = k;
    sol.incoming = incoming;
    sol.regions.resize(nn + 1);

    // Products of (1 - i b) over a run of qubits; all qubits are identical.
    auto power = [&](int m) { return std::pow(one_minus_ib, m); };

    if (incoming == Direction::Right) {
        // v_m = prod_{j<=m}(1-ib) adj(Q'_{m+1}) ... adj(Q'_N) (1, 0)^T / M'_22
        std::array<cplx, 2> w{cplx{1.0}, cplx{0.0}};
        sol.regions[nn] = {power(n) / m22, cplx{0.0}};
        for (int m = n - 1; m >= 0; --m) {
            w = detail::apply(detail::adjugate(q[static_cast<std::size_t>(m)]), w);
            const cplx s = power(m) / m22;
            sol.regions[static_cast<std::size_t>(m)] = {w[0] * s, w[1] * s};
        }
        sol.regions[0].right = 1.0;  // exact by construction
        sol.t = sol.regions[nn].right;
        sol.r = sol.regions[0].left;
    } else {
        // v_m = prod_{j>m}(1-ib) Q'_m ... Q'_1 (0, 1)^T / M'_22
        std::array<cplx, 2> w{cplx{0.0}, cplx{1.0}};
        sol.regions[0] = {cplx{0.0}, power(n) / m22};
        for (int m = 1; m <= n; ++m) {
            w = detail::apply(q[static_cast<std::size_t>(m - 1)], w);
            const cplx s = power(n - m) / m22;
            sol.regions[static_cast<std::size_t>(m)] = {w[0] * s, w[1] * s};
        }
        sol.regions[nn].left = 1.0;
        sol.t = sol.regions[0].left;
        sol.r = sol.regions[nn].right;
    }

    // e_j = V (R_- + L_+) / (k - w0 + i Gamma'/2 + i Gamma/2), field values taken at l_j.
    const double norm = 1.0 / std::sqrt(2.0 * kPi);
    sol.e.resize(nn);
    for (std::size_t j = 0; j < nn; ++j) {
        const cplx right_in = sol.regions[j].right * phase[j];
        const cplx left_in = sol.regions[j + 1].left / phase[j];
        sol.e[j] = chain.coupling() * (right_in + left_in) / pole * norm;
    }
    return sol;
}

/// Mode function phi_component^incoming(k, x). At x = l_i exactly the
/// right-limit region is used.
inline cplx field_at(const QubitChain& chain, double k, Direction incoming, Direction component,
                     double x, PhaseModel model = PhaseModel::Exact) {
    const auto sol = amplitudes(chain, k, model, incoming);
    const auto& pos = chain.positions();
    const auto region = static_cast<std::size_t>(std::upper_bound(pos.begin(), pos.end(), x) - pos.begin());
    const auto& amp = sol.regions[region];
    const double norm = 1.0 / std::sqrt(2.0 * kPi);
    return component == Direction::Right ? amp.right * std::exp(kI * k * x) * norm
                                         : amp.left * std::exp(-kI * k * x) * norm;
}

struct SpectrumPoint {
    double k;
    double transmission;
    double reflection;
};

inline double transmission(const QubitChain& chain, double k, PhaseModel model = PhaseModel::Exact) {
    return std::norm(amplitudes(chain, k, model).t);
}

inline std::vector<SpectrumPoint> transmission_spectrum(const QubitChain& chain,
                                                        const std::vector<double>& k_grid,
                                                        PhaseModel model = PhaseModel::Exact) {
    std::vector<SpectrumPoint> out;
    out.reserve(k_grid.size());
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (i > 0 && !(k_grid[i] > k_grid[i - 1])) {
            throw InvalidParameter("frequency grid must be strictly increasing");
        }
        const auto sol = amplitudes(chain, k_grid[i], model);
        out.push_back({k_grid[i], std::norm(sol.t), std::norm(sol.r)});
    }
    return out;
}

/// Which side of the resonance to search: red (k < w0) or blue (k > w0).
enum class Side { Red, Blue };

inline const char* to_string(Side s) { return s == Side::Red ? "red" : "blue"; }

struct FrequencySearch {
    double step{1.0 / 200.0};   // scan step, units of Gamma
    double window{50.0};        // maximal |k - w0| examined
    double tolerance{1e-9};     // on |T - T_target|
};

/// Frequency closest to w0 on the requested side with |t(k)|^2 = target.
inline double solve_frequency_for_T(const QubitChain& chain, double target, Side side = Side::Red,
                                    PhaseModel model = PhaseModel::Exact,
                                    const FrequencySearch& opt = {}) {
    if (!(target > 0.0 && target < 1.0)) throw InvalidParameter("target transmission must lie in (0, 1)");
    const double dir = side == Side::Red ? -1.0 : 1.0;
    auto f = [&](double k) { return transmission(chain, k, model) - target; };

    const int steps = static_cast<int>(std::ceil(opt.window / opt.step));
    double k_prev = chain.omega0();
    double f_prev = f(k_prev);
    if (f_prev == 0.0) return k_prev;
    const bool rising = f_prev < 0.0;
    double extremum = f_prev + target;
    for (int i = 1; i <= steps; ++i) {
        const double k_cur = chain.omega0() + dir * opt.step * i;
        const double f_cur = f(k_cur);
        const double t_cur = f_cur + target;
        extremum = rising ? std::max(extremum, t_cur) : std::min(extremum, t_cur);
        if (f_cur == 0.0) return k_cur;
        if ((f_prev < 0.0) != (f_cur < 0.0)) {
            double lo = k_prev, hi = k_cur, f_lo = f_prev;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double f_mid = f(mid);
                if (std::abs(f_mid) < opt.tolerance || mid == lo || mid == hi) return mid;
                if ((f_mid < 0.0) == (f_lo < 0.0)) {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            throw NumericalFailure("bisection for target transmission did not converge");
        }
        k_prev = k_cur;
        f_prev = f_cur;
    }
    throw UnreachableTarget("transmission " + std::to_string(target) + " not reached on the " +
                                to_string(side) + " side within the scan window (extremum " +
                                std::to_string(extremum) + ")",
                            extremum);
}

}  // namespace wqed
