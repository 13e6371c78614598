// two_photon_numeric.hpp - two-photon Green functions by direct quadrature
// over the single-photon continuum, keeping the k dependence of every
// propagation phase (no Markov freezing unless asked for).
//
//     G_ij(E)       = int dk1 dk2  S_ij(k1) S_ij(k2) / (E + i eps - k1 - k2)
//     G_i(x1, x2;E) = int dk1 dk2  F_i(k1) F_i(k2) e^{i k1 x1 + i k2 x2} / (E + i eps - k1 - k2)
//
// with S_ij = sum_a e_i^a conj(e_j^a) and F_i = sum_a phi_R^a conj(e_i^a).
//
// Default (lossless chains): the inner integral is done in closed form. S is
// (i/2pi)(g+ - g-) with g+ the resolvent of the coupled-qubit equations, so
// the inner integral is g+_ij(E - k1); F_i e^{ikx} is analytic in the upper
// half plane for x beyond the chain, so the inner integral is a single
// residue. What remains is one real-line integral, done adaptively.
//
// Fallback (any chain): nested quadrature at finite eps, the inner integral
// regularised by subtracting a Lorentzian copy of its pole, then linear
// extrapolation eps -> 0 from two eps values.
//
// The real line is covered by a core window |k - w0| <= W plus the two tails
// mapped onto s = W / |k - w0|. Oscillatory integrands have their tails cut
// at |k - w0| = tail_cutoff; smooth ones are integrated to infinity.

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wqed/errors.hpp"
#include "wqed/model.hpp"
#include "wqed/parallel.hpp"
#include "wqed/quadrature.hpp"
#include "wqed/single_photon.hpp"
#include "wqed/two_photon.hpp"

namespace wqed {

struct QuadratureSpec {
    enum class Inner { Analytic, FiniteEpsilon };

    Inner inner{Inner::Analytic};            // FiniteEpsilon is forced when Gamma' > 0
    std::vector<double> epsilons{0.02, 0.01};
    double k_window{40.0};
    bool tails{true};
    double tail_cutoff{2000.0};
    double abs_tol{1e-12};
    double rel_tol{1e-9};
    int max_intervals{40000};
    PhaseModel phase_model{PhaseModel::Exact};
    int threads{1};
};

inline void validate(const QuadratureSpec& s) {
    if (!(s.k_window >= 1.0) || !std::isfinite(s.k_window)) throw InvalidParameter("k_window must be >= 1");
    if (s.tails && !(s.tail_cutoff > s.k_window)) throw InvalidParameter("tail_cutoff must exceed k_window");
    if (!(s.abs_tol > 0.0) || !(s.rel_tol > 0.0)) throw InvalidParameter("quadrature tolerances must be positive");
    if (s.max_intervals < 1) throw InvalidParameter("max_intervals must be positive");
    if (s.threads < 1) throw InvalidParameter("threads must be positive");
    if (s.inner == QuadratureSpec::Inner::FiniteEpsilon) {
        if (s.epsilons.size() < 2) throw InvalidParameter("eps extrapolation needs at least two eps values");
        for (double e : s.epsilons) {
            if (!(e > 0.0)) throw InvalidParameter("eps values must be positive");
        }
    }
}

template <class T>
struct Estimate {
    T value;
    double error{0.0};
    bool converged{true};
};

namespace detail {

/// S_ij(k) and F_i(k) from the transfer-matrix solution.
struct SpectralSample {
    Eigen::MatrixXcd s;
    Eigen::VectorXcd f;
};

inline SpectralSample spectral_sample(const QubitChain& chain, double k, PhaseModel model) {
    const int n = chain.size();
    const auto right = amplitudes(chain, k, model, Direction::Right);
    const auto left = amplitudes(chain, k, model, Direction::Left);
    Eigen::VectorXcd er(n), el(n);
    for (int i = 0; i < n; ++i) {
        er(i) = right.e[static_cast<std::size_t>(i)];
        el(i) = left.e[static_cast<std::size_t>(i)];
    }
    SpectralSample out;
    out.s = er * er.adjoint() + el * el.adjoint();
    const double norm = 1.0 / std::sqrt(2.0 * kPi);
    out.f = (right.regions.back().right * er.conjugate() + left.regions.back().right * el.conjugate()) * norm;
    return out;
}

/// Retarded resolvent of the coupled-qubit equations at complex-free real z.
inline Eigen::MatrixXcd resolvent(const QubitChain& chain, double z, PhaseModel model) {
    const int n = chain.size();
    const double kappa = phase_wavevector(chain, z, model);
    const auto& pos = chain.positions();
    Eigen::MatrixXcd a(n, n);
    for (int j = 0; j < n; ++j) {
        for (int m = 0; m < n; ++m) {
            const double d = std::abs(pos[static_cast<std::size_t>(j)] - pos[static_cast<std::size_t>(m)]);
            a(j, m) = 0.5 * kI * chain.gamma() * std::exp(kI * kappa * d);
        }
        a(j, j) += cplx{z - chain.omega0(), 0.5 * chain.gamma_prime()};
    }
    return a.partialPivLu().inverse();
}

/// Quadrature rule in absolute wavevector.
struct LineRule {
    std::vector<double> k;
    std::vector<double> w;
};

template <class T>
struct LineResult {
    T value;
    double error{0.0};
    bool converged{true};
    LineRule rule;
};

/// Integral of f over the real k line (core window plus mapped tails).
template <class F>
auto integrate_line(F&& f, const QubitChain& chain, const QuadratureSpec& spec, std::vector<double> breaks,
                    bool oscillatory, bool keep_rule = false) {
    using T = std::decay_t<decltype(f(0.0))>;
    const double w0 = chain.omega0();
    const double width = spec.k_window;
    quad::Options opt{spec.abs_tol, spec.rel_tol, spec.max_intervals};

    LineResult<T> out;
    auto core = quad::integrate(f, w0 - width, w0 + width, opt, std::move(breaks));
    out.value = core.value;
    out.error = core.error;
    out.converged = core.converged;
    auto append = [&](const std::vector<quad::Interval>& part, auto map) {
        if (!keep_rule) return;
        const auto nodes = quad::kronrod_nodes(part);
        for (std::size_t m = 0; m < nodes.x.size(); ++m) {
            const auto [k, jac] = map(nodes.x[m]);
            out.rule.k.push_back(k);
            out.rule.w.push_back(nodes.w[m] * jac);
        }
    };
    append(core.partition, [](double k) { return std::pair<double, double>{k, 1.0}; });

    if (spec.tails) {
        const double s_min = oscillatory ? width / spec.tail_cutoff : 0.0;
        quad::Options tail_opt = opt;
        tail_opt.abs_tol = std::max(spec.abs_tol, spec.rel_tol * quad::detail::norm_of(core.value));
        for (double sign : {1.0, -1.0}) {
            auto g = [&](double s) { return T(f(w0 + sign * width / s) * (width / (s * s))); };
            auto tail = quad::integrate(g, s_min, 1.0, tail_opt);
            out.value = out.value + tail.value;
            out.error += tail.error;
            out.converged = out.converged && tail.converged;
            append(tail.partition, [&](double s) {
                return std::pair<double, double>{w0 + sign * width / s, width / (s * s)};
            });
        }
    }
    return out;
}

inline Eigen::VectorXcd flatten(const Eigen::MatrixXcd& m) {
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

inline Eigen::MatrixXcd unflatten(const Eigen::VectorXcd& v, int n) {
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), n, n);
}

/// Reference pole term R_i(k) = (V / 2 pi) p_i(k) / (k - zeta) sharing the
/// large-k behaviour of F_i, with zeta = w0 - i (Gamma + Gamma') / 2.
struct Reference {
    double v2pi;
    cplx zeta;
    std::vector<double> pos;
    double k0;
    PhaseModel model;

    cplx phase(std::size_t i, double k) const {
        return std::exp(-kI * (model == PhaseModel::Exact ? k : k0) * pos[i]);
    }
    cplx operator()(std::size_t i, double k) const { return v2pi * phase(i, k) / (k - zeta); }

    /// int dk1 dk2 R_i(k1) R_i(k2) e^{i k1 x1 + i k2 x2} / (energy - k1 - k2), energy in the upper half plane.
    cplx double_integral(std::size_t i, cplx energy, double x1, double x2) const {
        const double shift = model == PhaseModel::Exact ? pos[i] : 0.0;
        const cplx ph = model == PhaseModel::Exact ? cplx{1.0} : std::exp(-2.0 * kI * k0 * pos[i]);
        const double tau = x2 - x1;
        return v2pi * v2pi * ph * (-4.0 * kPi * kPi) * std::exp(kI * energy * (x2 - shift)) *
               std::exp(-kI * zeta * tau) / (energy - 2.0 * zeta);
    }
};

inline Reference make_reference(const QubitChain& chain, PhaseModel model) {
    return {chain.coupling() / (2.0 * kPi), cplx{chain.omega0(), -0.5 * (chain.gamma() + chain.gamma_prime())},
            chain.positions(), chain.k0(), model};
}

/// Inner integral  int dk B(k) / (a + i eps - k)  over the real line, with a
/// Lorentzian of half-width h subtracted at k = a and added back analytically.
template <class B>
auto inner_integral(B&& b, double a, double eps, const QubitChain& chain, const QuadratureSpec& spec,
                    bool oscillatory) {
    using T = std::decay_t<decltype(b(0.0))>;
    constexpr double h = 1.0;
    const T ba = b(a);
    auto integrand = [&](double k) {
        const double x = k - a;
        return T((b(k) - ba * (h * h / (x * x + h * h))) / cplx{-x, eps});
    };
    std::vector<double> breaks{a};
    auto res = integrate_line(integrand, chain, spec, breaks, oscillatory);
    res.value = res.value + ba * (-kI * kPi * h / (h + eps));
    return res;
}

}  // namespace detail

/// G_ij(E) by quadrature.
inline Estimate<Eigen::MatrixXcd> green_matrix_quad(const QubitChain& chain, double energy,
                                                     const QuadratureSpec& spec = {}) {
    validate(spec);
    const int n = chain.size();
    const PhaseModel model = spec.phase_model;
    const bool analytic = spec.inner == QuadratureSpec::Inner::Analytic && chain.gamma_prime() == 0.0;
    const std::vector<double> breaks{chain.omega0(), energy - chain.omega0()};
    // Retarded phases e^{ik|l_j - l_m|} keep oscillating in the tails.
    const bool oscillatory = model == PhaseModel::Exact;

    if (analytic) {
        auto integrand = [&](double k) {
            const auto s = detail::spectral_sample(chain, k, model).s;
            return detail::flatten(s.cwiseProduct(detail::resolvent(chain, energy - k, model)));
        };
        auto res = detail::integrate_line(integrand, chain, spec, breaks, oscillatory);
        return {detail::unflatten(res.value, n), res.error, res.converged};
    }

    std::vector<Eigen::MatrixXcd> values;
    double quad_error = 0.0;
    bool converged = true;
    for (double eps : spec.epsilons) {
        auto inner_b = [&](double k) { return detail::flatten(detail::spectral_sample(chain, k, model).s); };
        auto outer = [&](double k1) {
            auto in = detail::inner_integral(inner_b, energy - k1, eps, chain, spec, oscillatory);
            quad_error = std::max(quad_error, in.error);
            converged = converged && in.converged;
            return Eigen::VectorXcd(inner_b(k1).cwiseProduct(in.value));
        };
        auto res = detail::integrate_line(outer, chain, spec, breaks, oscillatory);
        quad_error += res.error;
        converged = converged && res.converged;
        values.push_back(detail::unflatten(res.value, n));
    }
    // Linear extrapolation in eps through the two smallest values.
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return spec.epsilons[x] < spec.epsilons[y]; });
    const double e1 = spec.epsilons[order[0]], e2 = spec.epsilons[order[1]];
    const Eigen::MatrixXcd& v1 = values[order[0]];
    const Eigen::MatrixXcd& v2 = values[order[1]];
    const Eigen::MatrixXcd extrapolated = (e2 * v1 - e1 * v2) / (e2 - e1);
    return {extrapolated, (v1 - v2).cwiseAbs().maxCoeff() + quad_error, converged};
}

/// Quadrature Green functions at one energy. In analytic mode the source
/// integrand is tabulated once on a partition adapted to tau in [0, tau_max];
/// later evaluations at any tau in that range are weighted sums.
class FullGreen {
public:
    FullGreen(const QubitChain& chain, double energy, const QuadratureSpec& spec = {}, double tau_max = 10.0)
        : chain_(chain), energy_(energy), spec_(spec), tau_max_(tau_max), ref_(detail::make_reference(chain, spec.phase_model)) {
        validate(spec_);
        if (!(tau_max_ >= 0.0) || !std::isfinite(tau_max_)) throw InvalidParameter("tau_max must be finite and >= 0");
        analytic_ = spec_.inner == QuadratureSpec::Inner::Analytic && chain_.gamma_prime() == 0.0;
        auto m = green_matrix_quad(chain_, energy_, spec_);
        matrix_ = m.value;
        error_ = m.error;
        converged_ = m.converged;
        if (analytic_) tabulate();
    }

    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    double error() const { return error_; }
    bool converged() const { return converged_; }
    bool analytic() const { return analytic_; }

    /// G_i^{RR}(x, x + tau) with a quadrature error estimate.
    Estimate<Eigen::VectorXcd> source_rr(double x, double tau) const {
        if (!(tau >= 0.0)) throw InvalidParameter("tau must be non-negative; use exchange symmetry");
        if (!(x > chain_.positions().back())) throw InvalidParameter("detector must lie beyond the last qubit");
        if (!analytic_) return source_nested(x, tau);

        const int n = chain_.size();
        Eigen::VectorXcd q = Eigen::VectorXcd::Zero(n);
        double error = table_error_;
        if (tau <= tau_max_) {
            // Ascending node order keeps the sum independent of thread count.
            for (std::size_t m = 0; m < rule_.k.size(); ++m) {
                q += (rule_.w[m] * std::exp(-kI * (rule_.k[m] - chain_.omega0()) * tau)) * table_[m];
            }
        } else {
            auto p = [&](double k) { return Eigen::VectorXcd(integrand(k) * std::exp(-kI * (k - chain_.omega0()) * tau)); };
            auto res = detail::integrate_line(p, chain_, spec_, breaks(), true);
            q = res.value;
            error = res.error;
        }
        q *= std::exp(-kI * chain_.omega0() * tau);
        Eigen::VectorXcd out(n);
        for (int i = 0; i < n; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            // -2 pi i e^{iE x2} Q  +  exact reference double integral
            out(i) = -2.0 * kPi * kI * std::exp(kI * energy_ * (x + tau)) * q(i) +
                     ref_.double_integral(ii, energy_, x, x + tau);
        }
        const double scale = 2.0 * kPi;
        return {out, error * scale, true};
    }

    GreenFunctionSet green_set() const {
        GreenFunctionSet g;
        g.energy = energy_;
        g.method = Method::Full;
        g.phase_model = spec_.phase_model;
        g.matrix = matrix_;
        g.error = error_;
        auto self = std::make_shared<const FullGreen>(*this);
        g.source_rr = [self](double x, double tau) { return self->source_rr(x, tau).value; };
        return g;
    }

private:
    std::vector<double> breaks() const { return {chain_.omega0(), energy_ - chain_.omega0()}; }

    /// F_i(k) F_i(E - k) - R_i(k) R_i(E - k).
    Eigen::VectorXcd integrand(double k) const {
        const auto a = detail::spectral_sample(chain_, k, spec_.phase_model);
        const auto b = detail::spectral_sample(chain_, energy_ - k, spec_.phase_model);
        Eigen::VectorXcd out(chain_.size());
        for (int i = 0; i < chain_.size(); ++i) {
            const auto ii = static_cast<std::size_t>(i);
            out(i) = a.f(i) * b.f(i) - ref_(ii, k) * ref_(ii, energy_ - k);
        }
        return out;
    }

    void tabulate() {
        const int n = chain_.size();
        const double w0 = chain_.omega0();
        // Adapt the partition to the slowest and the fastest oscillation that will be requested.
        auto probe = [&](double k) {
            const Eigen::VectorXcd p = integrand(k);
            Eigen::VectorXcd both(2 * n);
            both << p, p * std::exp(-kI * (k - w0) * tau_max_);
            return both;
        };
        auto res = detail::integrate_line(probe, chain_, spec_, breaks(), true, true);
        rule_ = res.rule;
        table_error_ = res.error;
        converged_ = converged_ && res.converged;
        table_.assign(rule_.k.size(), Eigen::VectorXcd());
        parallel_for(rule_.k.size(), spec_.threads, [&](std::size_t m) { table_[m] = integrand(rule_.k[m]); });
    }

    /// Finite-eps nested quadrature with extrapolation, using
    /// F F - R R = (F - R) F + R (F - R).
    Estimate<Eigen::VectorXcd> source_nested(double x, double tau) const {
        const int n = chain_.size();
        const double x2 = x + tau;
        const auto model = spec_.phase_model;
        std::vector<Eigen::VectorXcd> values;
        double quad_error = 0.0;
        bool converged = true;
        for (double eps : spec_.epsilons) {
            Eigen::VectorXcd total(n);
            for (int i = 0; i < n; ++i) {
                const auto ii = static_cast<std::size_t>(i);
                auto f_at = [&](double k) { return detail::spectral_sample(chain_, k, model).f(i); };
                auto d_at = [&](double k) { return f_at(k) - ref_(ii, k); };
                auto inner_f = [&](double k) { return cplx(f_at(k) * std::exp(kI * k * x2)); };
                auto inner_d = [&](double k) { return cplx(d_at(k) * std::exp(kI * k * x2)); };
                auto outer = [&](double k1) {
                    const double a = energy_ - k1;
                    const cplx ph = std::exp(kI * k1 * x);
                    auto in_f = detail::inner_integral(inner_f, a, eps, chain_, spec_, true);
                    auto in_d = detail::inner_integral(inner_d, a, eps, chain_, spec_, true);
                    quad_error = std::max(quad_error, in_f.error + in_d.error);
                    converged = converged && in_f.converged && in_d.converged;
                    return cplx(ph * (d_at(k1) * in_f.value + ref_(ii, k1) * in_d.value));
                };
                auto res = detail::integrate_line(outer, chain_, spec_, breaks(), true);
                quad_error += res.error;
                converged = converged && res.converged;
                total(i) = res.value + ref_.double_integral(ii, cplx{energy_, eps}, x, x2);
            }
            values.push_back(total);
        }
        std::vector<std::size_t> order(values.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return spec_.epsilons[a] < spec_.epsilons[b]; });
        const double e1 = spec_.epsilons[order[0]], e2 = spec_.epsilons[order[1]];
        const Eigen::VectorXcd extrapolated = (e2 * values[order[0]] - e1 * values[order[1]]) / (e2 - e1);
        return {extrapolated, (values[order[0]] - values[order[1]]).cwiseAbs().maxCoeff() + quad_error, converged};
    }

    QubitChain chain_;
    double energy_;
    QuadratureSpec spec_;
    double tau_max_;
    detail::Reference ref_;
    bool analytic_{true};
    Eigen::MatrixXcd matrix_;
    double error_{0.0};
    bool converged_{true};
    detail::LineRule rule_;
    std::vector<Eigen::VectorXcd> table_;
    double table_error_{0.0};
};

inline Estimate<Eigen::VectorXcd> green_source_quad(const QubitChain& chain, double energy, Channel channel,
                                                    double x1, double tau, const QuadratureSpec& spec = {}) {
    detail::check_detector(chain, channel, x1);
    FullGreen g(chain, energy, spec, tau);
    if (channel == Channel::Transmission) return g.source_rr(x1, tau);
    auto r = g.source_rr(-x1, tau);
    r.value = r.value.reverse().eval();
    return r;
}

}  // namespace wqed
