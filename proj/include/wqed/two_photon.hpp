// two_photon.hpp - pieces shared by the two Green-function engines: the
// Green-function bundle for one two-photon energy and the assembly of the
// interacting two-photon amplitude
//
//     psi(x1, x2) = 1/2 [phi(k1,x1) phi(k2,x2) + phi(k2,x1) phi(k1,x2)]
//                   - sum_ij G_i(x1,x2) (G^-1)_ij e_j(k1) e_j(k2).

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "wqed/errors.hpp"
#include "wqed/model.hpp"
#include "wqed/single_photon.hpp"

namespace wqed {

enum class Method { Markov, Full };

inline const char* to_string(Method m) { return m == Method::Markov ? "markov" : "full"; }

/// Green functions at one total energy E.
struct GreenFunctionSet {
    double energy{};
    Method method{Method::Markov};
    PhaseModel phase_model{PhaseModel::Frozen};  // single-photon model the set is consistent with
    Eigen::MatrixXcd matrix;                     // G_ij(E)
    double error{0.0};                           // quadrature error estimate (0 for residue sums)

    /// G_i^{RR}(x, x + tau) for a detector at x beyond the last qubit.
    std::function<Eigen::VectorXcd(double x, double tau)> source_rr;

    /// Source vector for a channel. `x` is the detector coordinate nearer the
    /// chain (x > l_N for transmission, x < l_1 for reflection); the second
    /// photon sits a distance tau further out.
    Eigen::VectorXcd source(Channel channel, double x, double tau) const {
        if (!(tau >= 0.0)) throw InvalidParameter("tau must be non-negative; use exchange symmetry");
        if (channel == Channel::Transmission) return source_rr(x, tau);
        // G_i^{LL}(y1, y2) = G_{N+1-i}^{RR}(-y1, -y2)
        return source_rr(-x, tau).reverse();
    }
};

struct TwoPhotonAmplitude {
    cplx value;
    cplx free_part;
    cplx correction;
};

namespace detail {

inline void check_detector(const QubitChain& chain, Channel channel, double x) {
    const auto& pos = chain.positions();
    if (channel == Channel::Transmission ? !(x > pos.back()) : !(x < pos.front())) {
        throw InvalidParameter(std::string("detector coordinate must lie beyond the chain on the ") +
                               (channel == Channel::Transmission ? "transmission" : "reflection") + " side");
    }
}

/// Outgoing mode value phi(k, x) on the detection side for right incidence.
inline cplx outgoing_field(const SinglePhotonSolution& s, Channel channel, double x) {
    const double norm = 1.0 / std::sqrt(2.0 * kPi);
    return channel == Channel::Transmission ? s.t * std::exp(kI * s.k * x) * norm
                                            : s.r * std::exp(-kI * s.k * x) * norm;
}

}  // namespace detail

/// Two-photon amplitude for two right-incident photons k1, k2 with k1 + k2 = g.energy.
inline TwoPhotonAmplitude assemble_wavefunction(const QubitChain& chain, const GreenFunctionSet& g,
                                                double k1, double k2, Channel channel, double x1,
                                                double x2) {
    if (std::abs(k1 + k2 - g.energy) > 1e-9 * (1.0 + std::abs(g.energy))) {
        throw InvalidParameter("k1 + k2 must equal the Green-function energy");
    }
    detail::check_detector(chain, channel, x1);
    detail::check_detector(chain, channel, x2);
    const auto s1 = amplitudes(chain, k1, g.phase_model);
    const auto s2 = amplitudes(chain, k2, g.phase_model);

    TwoPhotonAmplitude out;
    out.free_part = 0.5 * (detail::outgoing_field(s1, channel, x1) * detail::outgoing_field(s2, channel, x2) +
                           detail::outgoing_field(s2, channel, x1) * detail::outgoing_field(s1, channel, x2));

    const int n = chain.size();
    Eigen::VectorXcd overlap(n);
    for (int j = 0; j < n; ++j) {
        overlap(j) = s1.e[static_cast<std::size_t>(j)] * s2.e[static_cast<std::size_t>(j)];
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(g.matrix);
    if (!(lu.rcond() > 1e-14)) throw NumericalFailure("Green-function matrix is singular at this energy");
    const Eigen::VectorXcd coeff = lu.solve(overlap);

    const double near = channel == Channel::Transmission ? std::min(x1, x2) : std::max(x1, x2);
    const double tau = std::abs(x2 - x1);
    out.correction = g.source(channel, near, tau).cwiseProduct(coeff).sum();
    out.value = out.free_part - out.correction;
    return out;
}

}  // namespace wqed
