// Closed forms for two and three qubits, used as golden references for the
// general-N engines. Test-only.

#pragma once

#include <complex>
#include <vector>

#include "wqed/model.hpp"

namespace wqed::closed_form {

template <class R>
struct Amplitudes {
    std::complex<R> t, r;
    std::vector<std::complex<R>> e;
};

template <class R>
inline constexpr R pi_v = static_cast<R>(3.141592653589793238462643383279502884L);

/// Two qubits at -L/2, +L/2. `phase_k` is the wavevector used in e^{ikL}
/// (k itself for the retarded model, k0 for the frozen one).
template <class R = long double>
inline Amplitudes<R> two_qubits(R k, R w0, R gamma, R spacing, R phase_k) {
    using C = std::complex<R>;
    const C i{0, 1};
    const R g = gamma;
    const R two = 2, one = 1;
    const C e1 = std::exp(i * phase_k * spacing);  // e^{ikL}
    const C e2 = e1 * e1;
    const C d = (i * g + two * k - two * w0);
    const C den = d * d + g * g * e2;
    const R sq_pi = std::sqrt(pi_v<R>);
    Amplitudes<R> a;
    a.t = R(4) * (k - w0) * (k - w0) / den;
    a.r = g * (g - e2 * (g + two * i * k - two * i * w0) - two * i * k + two * i * w0) /
          (g * g * e2 * e1 + e1 * d * d);
    const C half = std::exp(R(0.5) * i * phase_k * spacing);  // e^{ikL/2}
    a.e.push_back(-i * std::sqrt(g) / half * (g * (-one + e2) + two * i * k - two * i * w0) / (sq_pi * den));
    a.e.push_back(two * std::sqrt(g) * half * (k - w0) / (sq_pi * den));
    return a;
}

/// Three qubits at -L, 0, +L.
template <class R = long double>
inline Amplitudes<R> three_qubits(R k, R w0, R gamma, R spacing, R phase_k) {
    using C = std::complex<R>;
    const C i{0, 1};
    const R g = gamma, two = 2;
    const C e1 = std::exp(i * phase_k * spacing);
    const C e2 = e1 * e1, e4 = e2 * e2, e6 = e4 * e2;
    const C ep = two * k - two * w0 + i * g;
    const C em = two * k - two * w0 - i * g;
    const R dk = k - w0;
    const R sq_pi = std::sqrt(pi_v<R>);
    Amplitudes<R> a;
    a.t = R(8) * dk * dk * dk / (ep * ep * ep + two * g * g * ep * e2 + g * g * em * e4);
    a.r = g * (ep * ep + two * e2 * (g * g + two * dk * dk) + em * em * e4) /
          (two * i * g * g * ep * e4 + i * g * g * em * e6 + i * ep * ep * ep * e2);
    a.e.push_back(std::sqrt(g) / e1 * (i * ep * ep + two * g * e2 * (i * g + k - w0) + g * em * e4) /
                  (sq_pi * (i * ep * ep * ep + two * i * g * g * ep * e2 + i * g * g * em * e4)));
    a.e.push_back(two * std::sqrt(g) * dk / (sq_pi * (ep * ep + i * g * em * e2)));
    a.e.push_back(R(4) * std::sqrt(g) * e1 * dk * dk /
                  (sq_pi * (ep * ep * ep + two * g * g * ep * e2 + g * g * em * e4)));
    return a;
}

/// Two-qubit Green functions in the Markov limit, k0 L = A pi, Gamma = `g`.
template <class R = long double>
struct TwoQubitGreen {
    using C = std::complex<R>;
    R w0, g, a;

    C eta(R energy) const { return energy - R(2) * w0 + C{0, 1} * g; }

    C g11(R energy) const {
        const C i{0, 1};
        const C p2 = std::exp(R(2) * i * pi_v<R> * a);
        const C h = eta(energy);
        return (p2 * g * g + R(2) * h * h) / (R(2) * (p2 * g * g * h + h * h * h));
    }

    C g12(R en) const {
        const C i{0, 1};
        const C p2 = std::exp(R(2) * i * pi_v<R> * a);
        return -p2 * g * g /
               (R(2) * eta(en) *
                ((R(-1) + p2) * g * g - R(4) * i * g * w0 + en * en + R(2) * i * en * (g + R(2) * i * w0) +
                 R(4) * w0 * w0));
    }

    C source1(R en, R x1, R t) const {
        const C i{0, 1};
        const C p = std::exp(i * pi_v<R> * a);
        const C p2 = p * p;
        const C bp = p + R(1), bm = p - R(1);
        const C gam = (p + R(1)) * g + R(2) * i * w0;
        const C h = eta(en);
        const C bracket = bp * (-i * bm * g + en - R(2) * w0) * (R(2) * en - R(2) * w0 + i * gam) +
                          bm * std::exp(p * g * t) * (-i * bm * g + R(2) * en - R(4) * w0) * (en + i * gam);
        return -(g * bracket * std::exp(i * en * (t + x1) - R(0.5) * gam * t)) /
               (R(8) * (p2 * g * g * h + h * h * h));
    }

    C source2(R en, R x1, R t) const {
        const C i{0, 1};
        const C p = std::exp(i * pi_v<R> * a);
        const C p2 = p * p;
        const C bp = p + R(1), bm = p - R(1);
        const C gam = (p + R(1)) * g + R(2) * i * w0;
        const C h = eta(en);
        const C bracket =
            bp * (-i * bm * g + en - R(2) * w0) * ((R(-2) + p) * bp * g + R(2) * i * en - R(4) * i * w0) +
            bm * std::exp(p * g * t) * (-(p + p2 - R(2)) * g - R(2) * i * en + R(4) * i * w0) * (en + i * gam);
        return i * (g * bracket * std::exp(-R(0.5) * gam * t - i * pi_v<R> * a + i * en * (t + x1))) /
               (R(8) * (p2 * g * g * h + h * h * h));
    }
};

}  // namespace wqed::closed_form
