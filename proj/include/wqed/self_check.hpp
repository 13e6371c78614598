// self_check.hpp - quick invariant suite behind `wqed check`.

#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "wqed/correlation.hpp"
#include "wqed/model.hpp"
#include "wqed/single_photon.hpp"
#include "wqed/two_photon_markov.hpp"

namespace wqed {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

namespace detail {

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

inline CheckResult run_check(const std::string& name, const std::function<CheckResult()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return {name, false, std::string("threw: ") + e.what()};
    }
}

}  // namespace detail

inline std::vector<CheckResult> self_check() {
    std::vector<CheckResult> out;
    const double w0 = 100.0;

    out.push_back(detail::run_check("positions antisymmetric", [&] {
        double worst = 0.0;
        for (int n = 1; n <= 5; ++n) {
            const auto c = validate(SystemParams{n, w0, 1.0, 0.0, 0.5});
            const auto& p = c.positions();
            for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, std::abs(p[i] + p[p.size() - 1 - i]));
        }
        return CheckResult{"positions antisymmetric", worst == 0.0, "max |l_i + l_{N+1-i}| = " + detail::sci(worst)};
    }));

    out.push_back(detail::run_check("flux conservation", [&] {
        double worst = 0.0;
        for (int n = 1; n <= 3; ++n) {
            for (double a : {0.25, 0.5}) {
                const auto c = validate(SystemParams{n, w0, 1.0, 0.0, a});
                for (int i = 0; i <= 1000; ++i) {
                    for (auto m : {PhaseModel::Exact, PhaseModel::Frozen}) {
                        const auto s = amplitudes(c, w0 - 5.0 + 0.01 * i, m);
                        worst = std::max(worst, std::abs(std::norm(s.t) + std::norm(s.r) - 1.0));
                    }
                }
            }
        }
        return CheckResult{"flux conservation", worst < 1e-10, "max ||t|^2+|r|^2-1| = " + detail::sci(worst)};
    }));

    out.push_back(detail::run_check("partial fractions reproduce amplitudes", [&] {
        double worst = 0.0;
        for (int n = 1; n <= 4; ++n) {
            const auto c = validate(SystemParams{n, w0, 1.0, 0.0, 0.3});
            const auto ps = markov_poles(c, 2.0 * w0);
            for (int i = 0; i < 100; ++i) {
                const double k = w0 - 4.0 + 0.08 * i + 0.0037;
                const auto s = amplitudes(c, k, PhaseModel::Frozen);
                // absolute: both amplitudes are bounded by 1 and t has zeros
                worst = std::max(worst, std::abs(ps.t(k) - s.t));
                worst = std::max(worst, std::abs(ps.r(k) - s.r));
            }
        }
        return CheckResult{"partial fractions reproduce amplitudes", worst < 1e-10, "max abs err " + detail::sci(worst)};
    }));

    out.push_back(detail::run_check("Green matrix centro-symmetry", [&] {
        double worst = 0.0;
        for (int n = 2; n <= 4; ++n) {
            const auto c = validate(SystemParams{n, w0, 1.0, 0.0, 0.25});
            const auto g = green_matrix(c, 2.0 * w0 - 0.7);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(g(i, j) - g(n - 1 - i, n - 1 - j)) / std::abs(g(i, j)));
            }
        }
        return CheckResult{"Green matrix centro-symmetry", worst < 1e-12, "max rel err " + detail::sci(worst)};
    }));

    out.push_back(detail::run_check("N=1 reflected pairs vanish", [&] {
        const auto c = validate(SystemParams{1, w0, 1.0, 0.0, 0.5});
        double worst = 0.0;
        for (double d : {-2.0, -0.5, -0.1, 0.3, 1.7}) {
            const double x = c.positions().front() - 1.0;
            const auto psi = interacting_wavefunction(c, w0 + d, w0 + d, Channel::Reflection, x, x);
            const double scale = std::abs(psi.free_part);
            worst = std::max(worst, std::abs(psi.value) / scale);
        }
        return CheckResult{"N=1 reflected pairs vanish", worst < 1e-10, "max |psi(x,x)| / |free| = " + detail::sci(worst)};
    }));

    out.push_back(detail::run_check("g2 tends to 1", [&] {
        const auto c = validate(SystemParams{1, w0, 1.0, 0.0, 0.5});
        const double k = solve_frequency_for_T(c, 0.5, Side::Red, PhaseModel::Frozen);
        double worst = 0.0;
        for (auto ch : {Channel::Transmission, Channel::Reflection}) {
            worst = std::max(worst, std::abs(g2_curve(c, k, ch, {30.0}).g2[0] - 1.0));
        }
        return CheckResult{"g2 tends to 1", worst < 0.05, "max |g2(30) - 1| = " + detail::sci(worst)};
    }));

    out.push_back(detail::run_check("spectrum symmetric at A = 1/2", [&] {
        double worst = 0.0;
        for (int n = 1; n <= 3; ++n) {
            const auto c = validate(SystemParams{n, w0, 1.0, 0.0, 0.5});
            for (int i = 1; i <= 200; ++i) {
                const double d = 0.01 * i;
                worst = std::max(worst, std::abs(transmission(c, w0 + d, PhaseModel::Frozen) -
                                                 transmission(c, w0 - d, PhaseModel::Frozen)));
            }
        }
        return CheckResult{"spectrum symmetric at A = 1/2", worst < 1e-10, "max |T(w0+d)-T(w0-d)| = " + detail::sci(worst)};
    }));

    out.push_back(detail::run_check("g2 independent of detector position", [&] {
        const auto c = validate(SystemParams{3, w0, 1.0, 0.0, 0.25});
        const double k = solve_frequency_for_T(c, 0.5, Side::Red, PhaseModel::Frozen);
        CorrelationOptions near, far;
        far.detector_offset = 7.3;
        double worst = 0.0;
        for (auto ch : {Channel::Transmission, Channel::Reflection}) {
            const auto a = g2_curve(c, k, ch, {0.0, 0.7, 3.1}, near);
            const auto b = g2_curve(c, k, ch, {0.0, 0.7, 3.1}, far);
            for (std::size_t i = 0; i < a.g2.size(); ++i) worst = std::max(worst, std::abs(a.g2[i] - b.g2[i]));
        }
        return CheckResult{"g2 independent of detector position", worst < 1e-10, "max change " + detail::sci(worst)};
    }));

    out.push_back(detail::run_check("Bose symmetry", [&] {
        const auto c = validate(SystemParams{2, w0, 1.0, 0.0, 0.25});
        const double x = c.positions().back() + 1.0;
        const auto a = interacting_wavefunction(c, w0 - 0.4, w0 + 0.1, Channel::Transmission, x, x + 1.3);
        const auto b = interacting_wavefunction(c, w0 - 0.4, w0 + 0.1, Channel::Transmission, x + 1.3, x);
        const auto s = interacting_wavefunction(c, w0 + 0.1, w0 - 0.4, Channel::Transmission, x, x + 1.3);
        const double err = std::max(std::abs(a.value - b.value), std::abs(a.value - s.value)) / std::abs(a.value);
        return CheckResult{"Bose symmetry", err < 1e-10, "rel err " + detail::sci(err)};
    }));

    return out;
}

}  // namespace wqed
