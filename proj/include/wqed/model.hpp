// model.hpp - physical parameters of N identical qubits side-coupled to a waveguide.
//
// Units: hbar = c = 1 and the waveguide decay rate Gamma is the unit of
// frequency. Times are in 1/Gamma, lengths in c/Gamma.

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "wqed/errors.hpp"

namespace wqed {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Raw, user-facing parameter set. Frequencies may be given in any unit as long
/// as they share it with `gamma`; validation rescales everything to Gamma = 1.
struct SystemParams {
    int n_qubits{1};
    double omega0{100.0};        // qubit transition frequency
    double gamma{1.0};           // decay rate into the waveguide
    double gamma_prime{0.0};     // decay rate into all other channels
    double spacing_phase{0.5};   // A, with k0 L = A pi

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Which output port of the chain a detector watches.
enum class Channel { Transmission, Reflection };

/// Propagation direction of a waveguide mode.
enum class Direction { Right, Left };

inline const char* to_string(Channel c) { return c == Channel::Transmission ? "trans" : "refl"; }

/// Validated chain of qubits. Immutable once constructed; cheap to copy.
class QubitChain {
public:
    const SystemParams& params() const noexcept { return params_; }
    int size() const noexcept { return params_.n_qubits; }
    double omega0() const noexcept { return params_.omega0; }
    double gamma() const noexcept { return params_.gamma; }
    double gamma_prime() const noexcept { return params_.gamma_prime; }
    double spacing_phase() const noexcept { return params_.spacing_phase; }

    /// Resonant wavevector k0 = omega0 / c.
    double k0() const noexcept { return params_.omega0; }
    /// Qubit-qubit distance L = A pi / k0.
    double spacing() const noexcept { return spacing_; }
    /// Positions l_1 < ... < l_N, with l_{N-i+1} = -l_i.
    const std::vector<double>& positions() const noexcept { return positions_; }
    /// Coupling constant V with Gamma = 2 V^2 / c.
    double coupling() const noexcept { return std::sqrt(params_.gamma / 2.0); }

    /// Purcell factor Gamma / Gamma'; +infinity for a lossless chain.
    double purcell_factor() const noexcept {
        return params_.gamma_prime == 0.0 ? std::numeric_limits<double>::infinity()
                                          : params_.gamma / params_.gamma_prime;
    }

    /// Non-fatal remarks, e.g. a spacing outside the range the Markov treatment covers.
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    friend bool operator==(const QubitChain& a, const QubitChain& b) {
        return a.params_ == b.params_ && a.positions_ == b.positions_;
    }

private:
    friend QubitChain validate(const SystemParams& raw);

    SystemParams params_;
    double spacing_{0.0};
    std::vector<double> positions_;
    std::vector<std::string> warnings_;
};

inline QubitChain validate(const SystemParams& raw) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(raw.omega0) || !finite(raw.gamma) || !finite(raw.gamma_prime) ||
        !finite(raw.spacing_phase)) {
        throw InvalidParameter("system parameters must be finite");
    }
    if (raw.n_qubits < 1) throw InvalidParameter("n_qubits must be at least 1");
    if (raw.gamma <= 0.0) throw InvalidParameter("gamma must be positive");
    if (raw.gamma_prime < 0.0) throw InvalidParameter("gamma_prime must be non-negative");
    if (raw.omega0 <= 0.0) throw InvalidParameter("omega0 must be positive");
    if (raw.spacing_phase < 0.0) throw InvalidParameter("spacing phase A must be non-negative");

    QubitChain chain;
    SystemParams& p = chain.params_;
    p = raw;
    p.omega0 = raw.omega0 / raw.gamma;
    p.gamma_prime = raw.gamma_prime / raw.gamma;
    p.gamma = 1.0;

    if (p.spacing_phase > 0.5) {
        chain.warnings_.push_back("spacing phase A > 1/2 lies outside the validated Markov regime");
    }
    if (p.omega0 < 10.0) {
        chain.warnings_.push_back("omega0 < 10 Gamma: rotating-wave treatment is questionable");
    }

    const int n = p.n_qubits;
    chain.spacing_ = p.spacing_phase * kPi / p.omega0;
    chain.positions_.resize(static_cast<std::size_t>(n));
    const double centre = 0.5 * static_cast<double>(n + 1);
    for (int i = 1; i <= n; ++i) {
        chain.positions_[static_cast<std::size_t>(i - 1)] =
            (static_cast<double>(i) - centre) * chain.spacing_;
    }
    return chain;
}

/// Re-validation is the identity on an already validated chain.
inline QubitChain validate(const QubitChain& chain) { return validate(chain.params()); }

}  // namespace wqed
