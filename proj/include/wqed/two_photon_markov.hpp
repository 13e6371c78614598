// two_photon_markov.hpp - two-photon Green functions with the inter-qubit
// phases frozen at k0, evaluated by residue sums.
//
// With frozen phases the qubit amplitudes are rational in k:
//
//     e^a(k) = (k - H)^-1 b^a,   H = (w0 - i Gamma'/2) I - i (Gamma/2) M,   M_jm = e^{i pi A |j-m|},
//
// so every spectral integrand is a sum of simple poles. The poles are the
// eigenvalues of H, found as roots of det(k - H) written in the detuning
// u = k - w0 (coefficients of order Gamma, well conditioned).

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wqed/errors.hpp"
#include "wqed/model.hpp"
#include "wqed/pole_expansion.hpp"
#include "wqed/polynomial.hpp"
#include "wqed/single_photon.hpp"
#include "wqed/two_photon.hpp"

namespace wqed {

struct MarkovPoleSet {
    double energy{};
    std::vector<cplx> poles;                        // N eigenvalues of H, sorted by real part
    std::vector<Eigen::MatrixXcd> residue_matrices; // (k - H)^-1 = sum_p K_p / (k - pole_p)
    PoleExpansion t;                                // transmission amplitude t_N(k)
    PoleExpansion r;                                // reflection amplitude r_1(k)
    std::vector<PoleExpansion> e;                   // e_i^R(k)
};

namespace detail {

inline constexpr double kMinPoleSeparation = 1e-8;
inline constexpr double kResidueCutoff = 1e-12;

/// (e^{-i p tau} - e^{-i (E - q) tau}) / (E - p - q) for Im p < 0 < Im q.
/// Both exponentials decay; near E = p + q the series of the divided difference is used.
inline cplx pair_wave(cplx p, cplx q, double energy, double tau) {
    const cplx d = energy - p - q;
    const cplx z = -kI * d * tau;
    const cplx lead = std::exp(-kI * p * tau);
    if (std::abs(z) < 1e-4) return lead * (kI * tau) * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
    return (lead - std::exp(-kI * (energy - q) * tau)) / d;
}

/// H - w0 I.
inline Eigen::MatrixXcd markov_hamiltonian_shifted(const QubitChain& chain) {
    const int n = chain.size();
    Eigen::MatrixXcd h(n, n);
    for (int j = 0; j < n; ++j) {
        for (int m = 0; m < n; ++m) {
            h(j, m) = -0.5 * kI * chain.gamma() * std::exp(kI * kPi * chain.spacing_phase() * static_cast<double>(std::abs(j - m)));
        }
        h(j, j) -= 0.5 * kI * chain.gamma_prime();
    }
    return h;
}

struct MarkovSpectral {
    std::vector<cplx> poles;
    std::vector<Eigen::MatrixXcd> residues;
    std::vector<std::vector<PoleExpansion>> e;  // [direction][qubit]
    std::vector<PoleExpansion> out_right;       // right-mover amplitude beyond l_N, per incidence
    std::vector<PoleExpansion> out_left;        // left-mover amplitude before l_1, per incidence
};

inline MarkovSpectral markov_spectral(const QubitChain& chain) {
    const int n = chain.size();
    const auto nn = static_cast<std::size_t>(n);
    const Eigen::MatrixXcd h = markov_hamiltonian_shifted(chain);
    const auto ch = poly::characteristic(h);
    const auto u = poly::roots(ch.det);
    const auto dp = poly::derivative(ch.det);

    for (std::size_t p = 0; p < u.size(); ++p) {
        for (std::size_t q = p + 1; q < u.size(); ++q) {
            if (std::abs(u[p] - u[q]) < kMinPoleSeparation) {
                throw NumericalFailure("near-degenerate single-photon poles; residue sums need simple poles");
            }
        }
    }

    MarkovSpectral s;
    for (std::size_t p = 0; p < nn; ++p) {
        s.poles.push_back(chain.omega0() + u[p]);
        s.residues.push_back(poly::evaluate(ch.adj, u[p]) / poly::evaluate(dp, u[p]));
    }

    const double v = chain.coupling();
    const double root2pi = std::sqrt(2.0 * kPi);
    std::vector<cplx> w(nn);  // e^{i k0 l_j}
    for (std::size_t j = 0; j < nn; ++j) w[j] = std::exp(kI * chain.k0() * chain.positions()[j]);

    s.e.assign(2, std::vector<PoleExpansion>(nn));
    for (int a = 0; a < 2; ++a) {
        Eigen::VectorXcd b(n);
        for (int j = 0; j < n; ++j) {
            const cplx ph = w[static_cast<std::size_t>(j)];
            b(j) = v * (a == 0 ? ph : std::conj(ph)) / root2pi;
        }
        for (std::size_t p = 0; p < nn; ++p) {
            const Eigen::VectorXcd kb = s.residues[p] * b;
            for (int i = 0; i < n; ++i) {
                s.e[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] +=
                    PoleExpansion(0.0, {{s.poles[p], kb(i)}});
            }
        }
        for (auto& ei : s.e[static_cast<std::size_t>(a)]) ei = ei.pruned(kResidueCutoff);
    }

    // Plane-wave amplitudes outside the chain:
    //   right-movers, x > l_N:  delta_{aR} - i V sqrt(2 pi) sum_j e^{-i k0 l_j} e_j^a
    //   left-movers,  x < l_1:  delta_{aL} - i V sqrt(2 pi) sum_j e^{+i k0 l_j} e_j^a
    for (int a = 0; a < 2; ++a) {
        PoleExpansion right(a == 0 ? 1.0 : 0.0), left(a == 1 ? 1.0 : 0.0);
        for (std::size_t j = 0; j < nn; ++j) {
            const auto& ej = s.e[static_cast<std::size_t>(a)][j];
            right += ej * (-kI * v * root2pi * std::conj(w[j]));
            left += ej * (-kI * v * root2pi * w[j]);
        }
        s.out_right.push_back(right.pruned(kResidueCutoff));
        s.out_left.push_back(left.pruned(kResidueCutoff));
    }

    // Undamped poles must decouple from the waveguide.
    for (const auto& dir : s.e) {
        for (const auto& ei : dir) {
            for (const auto& t : ei.terms()) {
                if (!(t.pole.imag() < -1e-12)) {
                    throw NumericalFailure("undamped single-photon pole couples to the waveguide");
                }
            }
        }
    }
    return s;
}

}  // namespace detail

/// Poles of the frozen-phase single-photon amplitudes with their residues.
inline MarkovPoleSet markov_poles(const QubitChain& chain, double energy) {
    auto s = detail::markov_spectral(chain);
    MarkovPoleSet out;
    out.energy = energy;
    out.poles = std::move(s.poles);
    out.residue_matrices = std::move(s.residues);
    out.t = s.out_right[0];
    out.r = s.out_left[0];
    out.e = s.e[0];
    return out;
}

/// Residue-sum evaluation of G_ij(E) and G_i^{RR}(x1, x2). Construction does
/// the pole analysis once; evaluations at any E are cheap and thread-safe.
class MarkovGreen {
public:
    explicit MarkovGreen(const QubitChain& chain) : chain_(chain) {
        auto s = detail::markov_spectral(chain_);
        const auto n = static_cast<std::size_t>(chain_.size());

        // S_ij(k) = sum_a e_i^a(k) conj(e_j^a(k)); keep its lower-half-plane part.
        s_lower_.assign(n * n, {});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                PoleExpansion sij;
                for (std::size_t a = 0; a < 2; ++a) sij += s.e[a][i] * s.e[a][j].conj_continuation();
                for (const auto& t : sij.terms()) {
                    if (t.pole.imag() < 0.0) s_lower_[i * n + j].push_back(t);
                }
            }
        }

        // F_i(k) = sum_a phi_R^a(k) conj(e_i^a(k)), outgoing right-mover coefficient over sqrt(2 pi).
        const double root2pi = std::sqrt(2.0 * kPi);
        for (std::size_t i = 0; i < n; ++i) {
            PoleExpansion fi;
            for (std::size_t a = 0; a < 2; ++a) {
                fi += s.out_right[a] * (1.0 / root2pi) * s.e[a][i].conj_continuation();
            }
            f_.push_back(fi);
        }
    }

    const QubitChain& chain() const { return chain_; }

    Eigen::MatrixXcd matrix(double energy) const {
        const auto n = static_cast<std::size_t>(chain_.size());
        const cplx c = -4.0 * kPi * kPi;  // (-2 pi i)^2
        Eigen::MatrixXcd g(chain_.size(), chain_.size());
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                cplx acc{0.0};
                const auto& terms = s_lower_[i * n + j];
                for (const auto& p : terms) {
                    for (const auto& q : terms) acc += p.residue * q.residue / (energy - p.pole - q.pole);
                }
                g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c * acc;
            }
        }
        return g;
    }

    /// G_i^{RR}(x, x + tau), x beyond the last qubit.
    Eigen::VectorXcd source_rr(double energy, double x, double tau) const {
        if (!(tau >= 0.0)) throw InvalidParameter("tau must be non-negative; use exchange symmetry");
        const auto n = static_cast<std::size_t>(chain_.size());
        const double x2 = x + tau;
        const cplx lead = std::exp(kI * energy * x2);
        Eigen::VectorXcd out(chain_.size());
        for (std::size_t i = 0; i < n; ++i) {
            const auto& f = f_[i];
            cplx paired{0.0}, upper{0.0};
            // F(E - z) = c + sum_w r_w / (E - z - w). Lower-lower and upper-upper
            // denominators never vanish for real E; each lower/upper pair is
            // combined into one divided difference, finite when p + q -> E.
            for (const auto& p : f.terms()) {
                const bool lower = p.pole.imag() < 0.0;
                const cplx wave = lower ? std::exp(-kI * p.pole * tau) : -std::exp(-kI * (energy - p.pole) * tau);
                cplx same = f.constant();
                for (const auto& w : f.terms()) {
                    if ((w.pole.imag() < 0.0) == lower) same += w.residue / (energy - p.pole - w.pole);
                }
                paired += p.residue * same * wave;
                if (!lower) continue;
                for (const auto& q : f.terms()) {
                    if (q.pole.imag() < 0.0) continue;
                    paired += p.residue * q.residue * detail::pair_wave(p.pole, q.pole, energy, tau);
                }
            }
            for (const auto& t : f.terms()) {
                if (t.pole.imag() < 0.0) continue;
                for (const auto& u : f.terms()) {
                    if (u.pole.imag() < 0.0) continue;
                    upper += t.residue * u.residue * std::exp(kI * (t.pole * x2 + u.pole * x)) /
                             (energy - t.pole - u.pole);
                }
            }
            out(static_cast<Eigen::Index>(i)) = -4.0 * kPi * kPi * (lead * paired + upper);
        }
        return out;
    }

    GreenFunctionSet green_set(double energy) const {
        GreenFunctionSet g;
        g.energy = energy;
        g.method = Method::Markov;
        g.phase_model = PhaseModel::Frozen;
        g.matrix = matrix(energy);
        g.source_rr = [self = *this, energy](double x, double tau) { return self.source_rr(energy, x, tau); };
        return g;
    }

private:
    QubitChain chain_;
    std::vector<std::vector<PoleTerm>> s_lower_;  // row-major N x N
    std::vector<PoleExpansion> f_;
};

inline Eigen::MatrixXcd green_matrix(const QubitChain& chain, double energy) {
    return MarkovGreen(chain).matrix(energy);
}

inline Eigen::VectorXcd green_source(const QubitChain& chain, double energy, Channel channel, double x1,
                                     double tau) {
    detail::check_detector(chain, channel, x1);
    return MarkovGreen(chain).green_set(energy).source(channel, x1, tau);
}

inline TwoPhotonAmplitude interacting_wavefunction(const QubitChain& chain, double k1, double k2,
                                                   Channel channel, double x1, double x2) {
    const auto g = MarkovGreen(chain).green_set(k1 + k2);
    return assemble_wavefunction(chain, g, k1, k2, channel, x1, x2);
}

}  // namespace wqed
