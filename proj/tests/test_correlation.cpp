#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "wqed/correlation.hpp"

using namespace wqed;

namespace {

QubitChain chain(int n, double a) { return validate(SystemParams{n, 100.0, 1.0, 0.0, a}); }

double half_t(const QubitChain& c) { return solve_frequency_for_T(c, 0.5, Side::Red, PhaseModel::Frozen); }

std::vector<double> grid(double t_max, double dt) {
    std::vector<double> t;
    for (int i = 0; i * dt <= t_max + 1e-12; ++i) t.push_back(i * dt);
    return t;
}

}  // namespace

TEST(G2, SingleQubitReflectionStartsAtZero) {
    const auto c = chain(1, 0.5);
    for (double k : {98.0, 99.5, 100.0, 100.7}) {
        EXPECT_EQ(g2_zero(c, k, Channel::Reflection), 0.0);
        EXPECT_EQ(g2_curve(c, k, Channel::Reflection, {0.0, 1.0}).g2[0], 0.0);
    }
}

TEST(G2, SingleQubitTransmissionHalf) {
    // Lorentzian at Delta = -1/2: bunching to 4.
    const auto c = chain(1, 0.5);
    EXPECT_NEAR(g2_zero(c, 99.5, Channel::Transmission), 4.0, 1e-10);
}

TEST(G2, TendsToOne) {
    const auto c = chain(1, 0.5);
    const double k = half_t(c);
    for (auto ch : {Channel::Transmission, Channel::Reflection}) {
        EXPECT_LT(std::abs(g2_curve(c, k, ch, {30.0}).g2[0] - 1.0), 0.05);
    }
    // N = 3 at A = 1/4 has a subradiant pole with decay rate 0.03
    for (int n = 2; n <= 3; ++n) {
        const auto cn = chain(n, 0.25);
        const double kn = half_t(cn);
        for (auto ch : {Channel::Transmission, Channel::Reflection}) {
            EXPECT_LT(std::abs(g2_curve(cn, kn, ch, {400.0}).g2[0] - 1.0), 1e-3);
        }
    }
}

TEST(G2, NonNegativeAndDetectorIndependent) {
    const auto c = chain(3, 0.5);
    const double k = half_t(c);
    CorrelationOptions far;
    far.detector_offset = 12.5;
    const auto t = grid(10.0, 0.1);
    for (auto ch : {Channel::Transmission, Channel::Reflection}) {
        const auto a = g2_curve(c, k, ch, t);
        const auto b = g2_curve(c, k, ch, t, far);
        for (std::size_t i = 0; i < t.size(); ++i) {
            EXPECT_GE(a.g2[i], 0.0);
            EXPECT_LT(std::abs(a.g2[i] - b.g2[i]), 1e-10 * std::max(1.0, a.g2[i]));
        }
    }
}

TEST(G2, CurveMetadata) {
    const auto c = chain(2, 0.25);
    const auto curve = g2_curve(c, 99.7, Channel::Reflection, {0.0, 0.5});
    EXPECT_EQ(curve.channel, Channel::Reflection);
    EXPECT_EQ(curve.method, Method::Markov);
    EXPECT_EQ(curve.params, c.params());
    EXPECT_EQ(curve.k, 99.7);
    EXPECT_DOUBLE_EQ(curve.transmission, transmission(c, 99.7, PhaseModel::Frozen));
    const auto again = g2_curve(c, 99.7, Channel::Reflection, {0.0, 0.5});
    EXPECT_EQ(curve.g2, again.g2);
}

TEST(G2, QuantumBeatsInReflection) {
    const auto c = chain(3, 0.5);
    const auto curve = g2_curve(c, half_t(c), Channel::Reflection, grid(10.0, 0.01));
    int crossings = 0;
    for (std::size_t i = 1; i < curve.g2.size(); ++i) crossings += (curve.g2[i - 1] - 1.0) * (curve.g2[i] - 1.0) < 0.0;
    EXPECT_GE(crossings, 3);
}

TEST(G2, BunchingThenLongAntibunching) {
    const auto c = chain(3, 0.25);
    const auto curve = g2_curve(c, half_t(c), Channel::Transmission, grid(40.0, 0.05));
    EXPECT_GT(curve.g2[0], 1.0);
    double longest = 0.0, start = -1.0;
    for (std::size_t i = 0; i < curve.g2.size(); ++i) {
        if (curve.g2[i] < 1.0) {
            if (start < 0.0) start = curve.t[i];
            longest = std::max(longest, curve.t[i] - start);
        } else {
            start = -1.0;
        }
    }
    EXPECT_GE(longest, 10.0);
}

TEST(G2, BothChannelsBunchedReflectionStronger) {
    const auto c = chain(3, 0.25);
    const double k = half_t(c);
    const double tr = g2_zero(c, k, Channel::Transmission), re = g2_zero(c, k, Channel::Reflection);
    EXPECT_GT(tr, 1.0);
    EXPECT_GT(re, tr);
}

TEST(G2, ZeroMatchesCurve) {
    const auto c = chain(2, 0.25);
    for (auto ch : {Channel::Transmission, Channel::Reflection}) {
        EXPECT_EQ(g2_zero(c, 99.3, ch), g2_curve(c, 99.3, ch, {0.0}).g2[0]);
    }
}

TEST(G2, RejectsBadInput) {
    const auto c = chain(2, 0.25);
    EXPECT_THROW(g2_curve(c, 99.3, Channel::Transmission, {-1.0}), InvalidParameter);
    CorrelationOptions bad;
    bad.detector_offset = 0.0;
    EXPECT_THROW(g2_zero(c, 99.3, Channel::Transmission, bad), InvalidParameter);
}

TEST(G2, DarkTransmissionIsInfinite) {
    EXPECT_TRUE(std::isinf(g2_zero(chain(2, 0.25), 100.0, Channel::Transmission)));
}

TEST(ScanT, EndpointsAndSegments) {
    const auto c = chain(1, 0.5);
    const auto r = scan_vs_T(c, {true, true}, {0.001, 0.25, 0.5, 0.75, 0.999});
    ASSERT_EQ(r.rows.size(), 5u);
    EXPECT_NEAR(r.rows.front().transmission, 0.001, 1e-9);
    EXPECT_NEAR(r.rows.back().transmission, 0.999, 1e-9);
    ASSERT_EQ(r.segments.size(), 1u);
    EXPECT_FALSE(r.segments[0].increasing);  // red side: T falls towards w0
    EXPECT_TRUE(r.warnings.empty());
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        EXPECT_LT(r.rows[i].g2_trans, r.rows[i - 1].g2_trans);
        EXPECT_EQ(r.rows[i].g2_refl, 0.0);
    }
}

TEST(ScanT, StronglyBunchedReflection) {
    const auto c = chain(3, 0.25);
    std::vector<double> ts;
    for (int i = 0; i <= 20; ++i) ts.push_back(0.001 + 0.998 * i / 20.0);
    const auto r = scan_vs_T(c, {false, true}, ts);
    for (const auto& row : r.rows) {
        EXPECT_GT(row.g2_refl, 1.0);
        EXPECT_TRUE(std::isnan(row.g2_trans));
    }
    // non-monotone T on the red side is reported, not hidden
    EXPECT_GT(r.segments.size(), 1u);
    EXPECT_FALSE(r.warnings.empty());
}

TEST(ScanT, RejectsOutOfRange) {
    EXPECT_THROW(scan_vs_T(chain(1, 0.5), {true, false}, {0.9995}), InvalidParameter);
}

TEST(ScanOmega, SymmetryAtHalfPhase) {
    const auto c = chain(3, 0.5);
    std::vector<double> w;
    for (int j = 1; j <= 40; ++j) {
        const double d = 2.0 * j / 41.0;
        w.push_back(100.0 - d);
        w.push_back(100.0 + d);
    }
    const auto r = scan_vs_frequency(c, {true, true}, w);
    for (std::size_t i = 0; i < r.rows.size(); i += 2) {
        EXPECT_NEAR(r.rows[i].g2_trans / r.rows[i + 1].g2_trans, 1.0, 1e-9);
        EXPECT_NEAR(r.rows[i].g2_refl / r.rows[i + 1].g2_refl, 1.0, 1e-9);
    }
}

TEST(ScanOmega, QuarterPhaseAsymmetric) {
    const auto c = chain(2, 0.25);
    const auto r = scan_vs_frequency(c, {true, false}, {99.3, 100.7});
    EXPECT_GT(std::abs(r.rows[0].g2_trans / r.rows[1].g2_trans - 1.0), 0.1);
}

TEST(ScanOmega, ThreadCountDoesNotChangeResults) {
    const auto c = chain(3, 0.25);
    std::vector<double> w;
    for (int i = 0; i < 37; ++i) w.push_back(98.0 + 0.1 * i + 0.003);
    CorrelationOptions one, many;
    many.threads = 5;
    const auto a = scan_vs_frequency(c, {true, true}, w, one);
    const auto b = scan_vs_frequency(c, {true, true}, w, many);
    for (std::size_t i = 0; i < w.size(); ++i) {
        EXPECT_EQ(a.rows[i].g2_trans, b.rows[i].g2_trans);
        EXPECT_EQ(a.rows[i].g2_refl, b.rows[i].g2_refl);
    }
}
