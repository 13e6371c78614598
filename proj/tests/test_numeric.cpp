#include <cmath>

#include <gtest/gtest.h>

#include "wqed/correlation.hpp"
#include "wqed/two_photon_markov.hpp"
#include "wqed/two_photon_numeric.hpp"

using namespace wqed;

namespace {

QubitChain chain(int n, double a, double w0 = 100.0, double gp = 0.0) {
    return validate(SystemParams{n, w0, 1.0, gp, a});
}

QuadratureSpec frozen() {
    QuadratureSpec s;
    s.phase_model = PhaseModel::Frozen;
    return s;
}

// Nested finite-eps quadrature is slow; these runs use a narrower line.
QuadratureSpec nested(PhaseModel model) {
    QuadratureSpec s;
    s.inner = QuadratureSpec::Inner::FiniteEpsilon;
    s.phase_model = model;
    s.k_window = 15.0;
    s.tail_cutoff = 150.0;
    s.abs_tol = 1e-9;
    s.rel_tol = 1e-6;
    return s;
}

double rel(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

}  // namespace

TEST(QuadSpec, Validation) {
    QuadratureSpec s;
    EXPECT_NO_THROW(validate(s));
    s.k_window = 0.5;
    EXPECT_THROW(validate(s), InvalidParameter);
    s = {};
    s.tail_cutoff = 10.0;
    EXPECT_THROW(validate(s), InvalidParameter);
    s = {};
    s.inner = QuadratureSpec::Inner::FiniteEpsilon;
    s.epsilons = {0.01};
    EXPECT_THROW(validate(s), InvalidParameter);
    s.epsilons = {0.01, -0.02};
    EXPECT_THROW(validate(s), InvalidParameter);
}

TEST(FrozenQuadrature, MatchesResidueEngineMatrix) {
    for (int n = 1; n <= 3; ++n) {
        for (double a : {0.25, 0.5}) {
            const auto c = chain(n, a);
            for (double e : {198.9, 199.3, 200.4}) {
                const auto q = green_matrix_quad(c, e, frozen());
                EXPECT_LT(rel(q.value, green_matrix(c, e)), 1e-6) << "N=" << n << " A=" << a << " E=" << e;
                EXPECT_TRUE(q.converged);
            }
        }
    }
}

TEST(FrozenQuadrature, MatchesResidueEngineSource) {
    for (int n = 2; n <= 3; ++n) {
        for (double a : {0.25, 0.5}) {
            const auto c = chain(n, a);
            const double e = 199.3, x = c.positions().back() + 1.0;
            const FullGreen g(c, e, frozen(), 10.0);
            for (double tau : {0.0, 0.7, 3.0, 9.5, 14.0}) {
                const auto q = g.source_rr(x, tau).value;
                const auto m = green_source(c, e, Channel::Transmission, x, tau);
                EXPECT_LT((q - m).cwiseAbs().maxCoeff(), 1e-6 * m.cwiseAbs().maxCoeff()) << "tau=" << tau;
            }
        }
    }
}

TEST(FrozenQuadrature, WavefunctionMatchesMarkov) {
    // N=3, A=1/2 at the T = 1/2 frequency, tau up to 10.
    const auto c = chain(3, 0.5);
    const double k = solve_frequency_for_T(c, 0.5, Side::Red, PhaseModel::Frozen);
    const auto quad_set = FullGreen(c, 2.0 * k, frozen(), 10.0).green_set();
    const auto markov_set = MarkovGreen(c).green_set(2.0 * k);
    for (auto ch : {Channel::Transmission, Channel::Reflection}) {
        const double x = ch == Channel::Transmission ? c.positions().back() + 1.0 : c.positions().front() - 1.0;
        for (double tau = 0.0; tau <= 10.0; tau += 0.5) {
            const double y = ch == Channel::Transmission ? x + tau : x - tau;
            const auto q = assemble_wavefunction(c, quad_set, k, k, ch, x, y).value;
            const auto m = assemble_wavefunction(c, markov_set, k, k, ch, x, y).value;
            EXPECT_LT(std::abs(q - m), 1e-4 * std::abs(m)) << "tau=" << tau;
        }
    }
}

TEST(ExactQuadrature, SmallSpacingApproachesMarkov) {
    // The Markov replacement is exact as L -> 0; here A = 0.01.
    const auto c = chain(2, 0.01);
    EXPECT_LT(rel(green_matrix_quad(c, 199.4).value, green_matrix(c, 199.4)), 1e-3);
}

TEST(ExactQuadrature, TwoQubitsQuarterPhaseWithinOnePercent) {
    const auto c = chain(2, 0.25);
    for (double e : {199.0, 199.4, 200.3}) EXPECT_LT(rel(green_matrix_quad(c, e).value, green_matrix(c, e)), 0.01);
}

TEST(ExactQuadrature, RetardationGapShrinksWithOmega0) {
    // e^{2ikL} varies across the line shape by about Gamma L; at fixed A that is 1/w0.
    double prev = 1.0;
    for (double w0 : {100.0, 1000.0}) {
        const auto c = chain(3, 0.5, w0);
        const double e = 2.0 * w0 - 1.3;
        const double gap = rel(green_matrix_quad(c, e).value, green_matrix(c, e));
        EXPECT_LT(gap, prev / 5.0);
        prev = gap;
    }
}

TEST(ExactQuadrature, StableUnderWindowDoubling) {
    const auto c = chain(2, 0.25);
    QuadratureSpec wide;
    wide.k_window = 80.0;
    const double e = 199.4;
    const auto a = green_matrix_quad(c, e);
    const auto b = green_matrix_quad(c, e, wide);
    EXPECT_LT((a.value - b.value).cwiseAbs().maxCoeff(), 1e-7 * a.value.cwiseAbs().maxCoeff());
    const double x = c.positions().back() + 1.0;
    const auto sa = FullGreen(c, e, {}, 2.0).source_rr(x, 1.5);
    const auto sb = FullGreen(c, e, wide, 2.0).source_rr(x, 1.5);
    EXPECT_LT((sa.value - sb.value).cwiseAbs().maxCoeff(), 1e-6 * sa.value.cwiseAbs().maxCoeff());
}

TEST(ExactQuadrature, SourceTauBeyondTableIntegratesDirectly) {
    const auto c = chain(2, 0.25);
    const double x = c.positions().back() + 1.0;
    const FullGreen short_table(c, 199.4, {}, 1.0), long_table(c, 199.4, {}, 4.0);
    const auto a = short_table.source_rr(x, 3.0).value, b = long_table.source_rr(x, 3.0).value;
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-7 * b.cwiseAbs().maxCoeff());
}

TEST(ExactQuadrature, SourceParityAndErrors) {
    const auto c = chain(2, 0.25);
    const double x = c.positions().back() + 1.0;
    const auto rr = green_source_quad(c, 199.4, Channel::Transmission, x, 0.8);
    const auto ll = green_source_quad(c, 199.4, Channel::Reflection, -x, 0.8);
    EXPECT_EQ(ll.value(0), rr.value(1));
    EXPECT_EQ(ll.value(1), rr.value(0));
    EXPECT_THROW(green_source_quad(c, 199.4, Channel::Transmission, x, -0.1), InvalidParameter);
    EXPECT_THROW(green_source_quad(c, 199.4, Channel::Transmission, 0.0, 0.1), InvalidParameter);
}

TEST(ExactQuadrature, TauZeroCloseToMarkov) {
    for (double a : {0.25, 0.5}) {
        const auto c = chain(3, a);
        const double k = solve_frequency_for_T(c, 0.5, Side::Red, PhaseModel::Frozen);
        const double x = c.positions().back() + 1.0;
        const auto q = FullGreen(c, 2.0 * k, {}, 0.0).source_rr(x, 0.0).value;
        const auto m = green_source(c, 2.0 * k, Channel::Transmission, x, 0.0);
        EXPECT_LT((q - m).cwiseAbs().maxCoeff(), 0.02 * m.cwiseAbs().maxCoeff()) << "A=" << a;
    }
}

TEST(ExactQuadrature, MatrixSymmetric) {
    // Swapping the photon labels in the integrand maps G_ij to G_ji.
    const auto c = chain(3, 0.25);
    const auto g = green_matrix_quad(c, 199.4).value;
    EXPECT_LT((g - g.transpose()).cwiseAbs().maxCoeff(), 1e-9 * g.cwiseAbs().maxCoeff());
}

TEST(NestedQuadrature, MatrixExtrapolatesWithinErrorBar) {
    for (auto model : {PhaseModel::Frozen, PhaseModel::Exact}) {
        const auto c = chain(2, 0.25);
        const auto spec = nested(model);
        const auto n = green_matrix_quad(c, 199.4, spec);
        QuadratureSpec ref = spec;
        ref.inner = QuadratureSpec::Inner::Analytic;
        const auto a = green_matrix_quad(c, 199.4, ref);
        EXPECT_LT((n.value - a.value).cwiseAbs().maxCoeff(), n.error);
        EXPECT_LT(n.error, 0.1 * a.value.cwiseAbs().maxCoeff());
    }
}

TEST(NestedQuadrature, SourceExtrapolatesWithinErrorBar) {
    const auto c = chain(1, 0.5);
    const auto spec = nested(PhaseModel::Frozen);
    QuadratureSpec ref = spec;
    ref.inner = QuadratureSpec::Inner::Analytic;
    const double x = 1.0;
    const FullGreen n(c, 199.2, spec, 0.5), a(c, 199.2, ref, 0.5);
    EXPECT_FALSE(n.analytic());
    const auto sn = n.source_rr(x, 0.5), sa = a.source_rr(x, 0.5);
    EXPECT_LT((sn.value - sa.value).cwiseAbs().maxCoeff(), sn.error);
}

TEST(NestedQuadrature, ForcedWithLoss) {
    const auto c = chain(1, 0.5, 100.0, 0.1);
    QuadratureSpec s = nested(PhaseModel::Frozen);
    s.inner = QuadratureSpec::Inner::Analytic;
    const FullGreen g(c, 199.4, s, 0.0);
    EXPECT_FALSE(g.analytic());
    EXPECT_TRUE(std::isfinite(g.matrix().norm()));
}
