// correlation.hpp - second-order correlation g2(t) of the transmitted or
// reflected light for a weak coherent drive, and the frequency scans built on it.
//
//     g2(t) = |psi2(x, x + t)|^2 / (|phi1(x)|^2 |phi1(x + t)|^2),   k1 = k2 = k.
//
// The Markov method uses frozen phases throughout (Green functions, single-
// photon amplitudes and normalisation), the full method uses the retarded
// phases throughout, so each is a self-consistent model.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wqed/errors.hpp"
#include "wqed/model.hpp"
#include "wqed/parallel.hpp"
#include "wqed/single_photon.hpp"
#include "wqed/two_photon.hpp"
#include "wqed/two_photon_markov.hpp"
#include "wqed/two_photon_numeric.hpp"

namespace wqed {

inline PhaseModel phase_model_for(Method m) { return m == Method::Markov ? PhaseModel::Frozen : PhaseModel::Exact; }

struct CorrelationOptions {
    Method method{Method::Markov};
    QuadratureSpec quadrature{};     // full method only; its phase model is overridden
    int threads{1};
    double detector_offset{1.0};     // distance of the first detector from the chain, 1/Gamma
};

struct CorrelationCurve {
    Channel channel{Channel::Transmission};
    Method method{Method::Markov};
    SystemParams params;
    double k{};
    double transmission{};           // single-photon T at k under the method's phase model
    std::vector<double> t;
    std::vector<double> g2;
};

namespace detail {

inline double detector_position(const QubitChain& chain, Channel c, double offset) {
    return c == Channel::Transmission ? chain.positions().back() + offset : chain.positions().front() - offset;
}

inline void check_options(const CorrelationOptions& o) {
    if (!(o.detector_offset > 0.0) || !std::isfinite(o.detector_offset)) {
        throw InvalidParameter("detector offset must be positive");
    }
    if (o.threads < 1) throw InvalidParameter("threads must be positive");
}

inline GreenFunctionSet build_green(const QubitChain& chain, double k, const CorrelationOptions& o, double tau_max,
                                    int threads) {
    if (o.method == Method::Markov) return MarkovGreen(chain).green_set(2.0 * k);
    QuadratureSpec spec = o.quadrature;
    spec.phase_model = PhaseModel::Exact;
    spec.threads = threads;
    return FullGreen(chain, 2.0 * k, spec, tau_max).green_set();
}

/// g2 at separation t from a prepared Green-function set.
inline double g2_from(const QubitChain& chain, const GreenFunctionSet& g, const SinglePhotonSolution& s, Channel c,
                      double x, double t) {
    // A single qubit cannot re-emit two photons at once: the reflected pair amplitude vanishes identically.
    if (chain.size() == 1 && c == Channel::Reflection && t == 0.0) return 0.0;
    const double x2 = c == Channel::Transmission ? x + t : x - t;
    const auto psi = assemble_wavefunction(chain, g, s.k, s.k, c, x, x2);
    const double one = std::norm(c == Channel::Transmission ? s.t : s.r) / (2.0 * kPi);
    const double two = std::norm(psi.value);
    if (one == 0.0) {
        // Dark channel: only the bound (correlated) part survives.
        return two > 0.0 ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
    }
    return two / (one * one);
}

}  // namespace detail

inline CorrelationCurve g2_curve(const QubitChain& chain, double k, Channel channel, const std::vector<double>& t_grid,
                                 const CorrelationOptions& opt = {}) {
    detail::check_options(opt);
    for (double t : t_grid) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameter("time grid must be finite and non-negative");
    }
    const double tau_max = t_grid.empty() ? 0.0 : *std::max_element(t_grid.begin(), t_grid.end());
    const auto g = detail::build_green(chain, k, opt, tau_max, opt.threads);
    const auto s = amplitudes(chain, k, g.phase_model);
    const double x = detail::detector_position(chain, channel, opt.detector_offset);

    CorrelationCurve curve;
    curve.channel = channel;
    curve.method = opt.method;
    curve.params = chain.params();
    curve.k = k;
    curve.transmission = std::norm(s.t);
    curve.t = t_grid;
    curve.g2.assign(t_grid.size(), 0.0);
    parallel_for(t_grid.size(), opt.threads,
                 [&](std::size_t i) { curve.g2[i] = detail::g2_from(chain, g, s, channel, x, t_grid[i]); });
    return curve;
}

inline double g2_zero(const QubitChain& chain, double k, Channel channel, const CorrelationOptions& opt = {}) {
    detail::check_options(opt);
    if (chain.size() == 1 && channel == Channel::Reflection) return 0.0;
    const auto g = detail::build_green(chain, k, opt, 0.0, opt.threads);
    const auto s = amplitudes(chain, k, g.phase_model);
    return detail::g2_from(chain, g, s, channel, detail::detector_position(chain, channel, opt.detector_offset), 0.0);
}

struct ScanRow {
    double omega;
    double transmission;
    double g2_trans;   // NaN when the channel was not requested
    double g2_refl;
};

struct ScanSegment {
    double omega_lo, omega_hi;
    bool increasing;   // T increases with omega on this piece
};

struct ScanResult {
    enum class Axis { Transmission, Frequency };
    Axis axis{Axis::Frequency};
    Side side{Side::Red};
    Method method{Method::Markov};
    std::vector<ScanRow> rows;
    std::vector<ScanSegment> segments;   // monotone pieces of T over the scanned range (T axis only)
    std::vector<std::string> warnings;
};

struct ChannelSet {
    bool transmission{true};
    bool reflection{true};
};

namespace detail {

inline std::vector<ScanRow> scan_rows(const QubitChain& chain, const std::vector<double>& omegas, ChannelSet ch,
                                      const CorrelationOptions& opt) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::optional<MarkovGreen> markov;
    if (opt.method == Method::Markov) markov.emplace(chain);
    const PhaseModel model = phase_model_for(opt.method);
    std::vector<ScanRow> rows(omegas.size());
    parallel_for(omegas.size(), opt.threads, [&](std::size_t i) {
        const double k = omegas[i];
        const auto s = amplitudes(chain, k, model);
        const auto g = markov ? markov->green_set(2.0 * k) : build_green(chain, k, opt, 0.0, 1);
        ScanRow row{k, std::norm(s.t), nan, nan};
        auto one = [&](Channel c) {
            return g2_from(chain, g, s, c, detector_position(chain, c, opt.detector_offset), 0.0);
        };
        if (ch.transmission) row.g2_trans = one(Channel::Transmission);
        if (ch.reflection) row.g2_refl = chain.size() == 1 ? 0.0 : one(Channel::Reflection);
        rows[i] = row;
    });
    return rows;
}

}  // namespace detail

/// g2(0) against single-photon transmission. The frequency range is fixed by
/// scanning from near w0 (T = t_lo) outward on `side` until T = t_hi; each
/// requested T is then mapped to the frequency closest to w0 inside that range.
inline ScanResult scan_vs_T(const QubitChain& chain, ChannelSet channels, const std::vector<double>& t_values,
                            const CorrelationOptions& opt = {}, Side side = Side::Red, double t_lo = 0.001,
                            double t_hi = 0.999) {
    detail::check_options(opt);
    if (!(t_lo >= 0.001 && t_hi <= 0.999 && t_lo < t_hi)) throw InvalidParameter("T range must lie in [0.001, 0.999]");
    for (double t : t_values) {
        if (!(t >= t_lo && t <= t_hi)) throw InvalidParameter("requested T outside the scanned range");
    }
    const PhaseModel model = phase_model_for(opt.method);
    const double k_start = solve_frequency_for_T(chain, t_lo, side, model);
    const double k_end = solve_frequency_for_T(chain, t_hi, side, model);

    ScanResult out;
    out.axis = ScanResult::Axis::Transmission;
    out.side = side;
    out.method = opt.method;

    // Monotone pieces of T between the two ends, on the solver's scan step.
    const FrequencySearch search{};
    const double lo = std::min(k_start, k_end), hi = std::max(k_start, k_end);
    const int steps = std::max(2, static_cast<int>(std::ceil((hi - lo) / search.step)));
    double seg_lo = lo, prev_k = lo, prev_t = transmission(chain, lo, model);
    int dir = 0;
    for (int i = 1; i <= steps; ++i) {
        const double k = lo + (hi - lo) * i / steps;
        const double t = transmission(chain, k, model);
        const int d = t > prev_t ? 1 : (t < prev_t ? -1 : dir);
        if (dir != 0 && d != dir) {
            out.segments.push_back({seg_lo, prev_k, dir > 0});
            seg_lo = prev_k;
        }
        dir = d;
        prev_k = k;
        prev_t = t;
    }
    out.segments.push_back({seg_lo, hi, dir > 0});
    if (out.segments.size() > 1) {
        out.warnings.push_back("T is not monotone over the scanned range; split into " +
                               std::to_string(out.segments.size()) + " monotone segments, rows use the frequency closest to w0");
    }

    std::vector<double> omegas;
    for (double t : t_values) omegas.push_back(solve_frequency_for_T(chain, t, side, model));
    out.rows = detail::scan_rows(chain, omegas, channels, opt);
    return out;
}

/// g2(0) and T on a frequency grid.
inline ScanResult scan_vs_frequency(const QubitChain& chain, ChannelSet channels, const std::vector<double>& omegas,
                                    const CorrelationOptions& opt = {}) {
    detail::check_options(opt);
    for (double w : omegas) {
        if (!std::isfinite(w)) throw InvalidParameter("frequency grid must be finite");
    }
    ScanResult out;
    out.axis = ScanResult::Axis::Frequency;
    out.method = opt.method;
    out.rows = detail::scan_rows(chain, omegas, channels, opt);
    return out;
}

}  // namespace wqed
