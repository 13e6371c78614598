// pole_expansion.hpp - rational functions kept as partial fractions,
//
//     f(z) = c + sum_m r_m / (z - z_m),
//
// with simple poles only. Closed under sums, products with disjoint poles
// and the conjugate continuation z -> conj(f(conj z)).

#pragma once

#include <cmath>
#include <vector>

#include "wqed/errors.hpp"
#include "wqed/model.hpp"

namespace wqed {

struct PoleTerm {
    cplx pole;
    cplx residue;
};

class PoleExpansion {
public:
    PoleExpansion() = default;
    explicit PoleExpansion(cplx constant, std::vector<PoleTerm> terms = {})
        : constant_(constant), terms_(std::move(terms)) {}

    cplx constant() const { return constant_; }
    const std::vector<PoleTerm>& terms() const { return terms_; }

    cplx operator()(cplx z) const {
        cplx acc = constant_;
        for (const auto& t : terms_) acc += t.residue / (z - t.pole);
        return acc;
    }

    /// g(z) = conj(f(conj z)): poles and residues conjugated.
    PoleExpansion conj_continuation() const {
        PoleExpansion out(std::conj(constant_));
        for (const auto& t : terms_) out.terms_.push_back({std::conj(t.pole), std::conj(t.residue)});
        return out;
    }

    PoleExpansion& operator*=(cplx s) {
        constant_ *= s;
        for (auto& t : terms_) t.residue *= s;
        return *this;
    }

    /// Sum; coincident poles (to rounding) are merged.
    PoleExpansion& operator+=(const PoleExpansion& o) {
        constant_ += o.constant_;
        for (const auto& t : o.terms_) {
            bool merged = false;
            for (auto& mine : terms_) {
                if (same_pole(mine.pole, t.pole)) {
                    mine.residue += t.residue;
                    merged = true;
                    break;
                }
            }
            if (!merged) terms_.push_back(t);
        }
        return *this;
    }

    /// Product of two expansions whose pole sets are disjoint.
    friend PoleExpansion operator*(const PoleExpansion& f, const PoleExpansion& g) {
        PoleExpansion out(f.constant_ * g.constant_);
        for (const auto& t : f.terms_) {
            for (const auto& u : g.terms_) {
                if (same_pole(t.pole, u.pole)) throw NumericalFailure("product of expansions with a shared pole");
            }
            out.terms_.push_back({t.pole, t.residue * g(t.pole)});
        }
        for (const auto& u : g.terms_) out.terms_.push_back({u.pole, u.residue * f(u.pole)});
        return out;
    }

    friend PoleExpansion operator+(PoleExpansion f, const PoleExpansion& g) { return f += g; }
    friend PoleExpansion operator*(PoleExpansion f, cplx s) { return f *= s; }

    /// Drops terms whose residue is below `tol` times the largest residue.
    PoleExpansion pruned(double tol) const {
        double biggest = 0.0;
        for (const auto& t : terms_) biggest = std::max(biggest, std::abs(t.residue));
        PoleExpansion out(constant_);
        for (const auto& t : terms_) {
            if (std::abs(t.residue) > tol * biggest) out.terms_.push_back(t);
        }
        return out;
    }

    static bool same_pole(cplx a, cplx b) { return std::abs(a - b) <= 1e-13 * (1.0 + std::abs(a)); }

private:
    cplx constant_{0.0};
    std::vector<PoleTerm> terms_;
};

}  // namespace wqed
