// quadrature.hpp - globally adaptive 7/15-point Gauss-Kronrod integration.
//
// Works for any value type with +, -, scalar * and a norm (std::complex<double>
// and Eigen vectors are supported). The final partition can be kept and its
// Kronrod nodes reused to integrate a family of related integrands, which is
// how the time sweeps of the correlation functions are evaluated.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "wqed/errors.hpp"

namespace wqed::quad {

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the nodes kXgk[1], kXgk[3], kXgk[5], kXgk[7].
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double norm_of(double v) { return std::abs(v); }
inline double norm_of(const std::complex<double>& v) { return std::abs(v); }
template <class Derived>
double norm_of(const Eigen::MatrixBase<Derived>& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

template <class T>
T zero_like(const T& v) {
    if constexpr (std::is_arithmetic_v<T>) {
        return T{0};
    } else if constexpr (std::is_same_v<T, std::complex<double>>) {
        return T{0.0, 0.0};
    } else {
        return T::Zero(v.rows(), v.cols());
    }
}

}  // namespace detail

struct Options {
    double abs_tol{1e-10};
    double rel_tol{1e-8};
    int max_intervals{20000};
};

struct Interval {
    double a, b;
};

template <class T>
struct Result {
    T value;
    double error{0.0};
    int evaluations{0};
    bool converged{false};
    std::vector<Interval> partition;  // final intervals in ascending order
};

/// 15-point Kronrod estimate and |K15 - G7| on [a, b].
template <class F>
auto kronrod15(F& f, double a, double b) {
    using T = std::decay_t<decltype(f(a))>;
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const T fc = f(centre);
    T gauss = fc * detail::kWg[3];
    T kron = fc * detail::kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * detail::kXgk[static_cast<std::size_t>(j)];
        const T f1 = f(centre - dx);
        const T f2 = f(centre + dx);
        kron = kron + (f1 + f2) * detail::kWgk[static_cast<std::size_t>(j)];
        if (j % 2 == 1) gauss = gauss + (f1 + f2) * detail::kWg[static_cast<std::size_t>(j / 2)];
    }
    struct Out {
        T value;
        double error;
    };
    return Out{kron * half, detail::norm_of(T(kron - gauss)) * std::abs(half)};
}

/// Adaptive integration over [a, b] split at the given interior breakpoints.
template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {}, std::vector<double> breaks = {}) {
    using T = std::decay_t<decltype(f(a))>;
    struct Node {
        double a, b;
        T value;
        double error;
    };
    auto worse = [](const Node& x, const Node& y) { return x.error < y.error; };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> heap(worse);

    std::vector<double> edges{a};
    std::sort(breaks.begin(), breaks.end());
    for (double x : breaks) {
        if (x > edges.back() && x < b) edges.push_back(x);
    }
    edges.push_back(b);

    Result<T> res;
    bool have_total = false;
    T total{};
    double err_total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto k = kronrod15(f, edges[i], edges[i + 1]);
        res.evaluations += 15;
        total = have_total ? T(total + k.value) : k.value;
        have_total = true;
        err_total += k.error;
        heap.push(Node{edges[i], edges[i + 1], k.value, k.error});
    }

    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * detail::norm_of(total)); };
    while (err_total > target() && static_cast<int>(heap.size()) < opt.max_intervals) {
        Node worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;  // interval can no longer be split in double precision
        }
        auto left = kronrod15(f, worst.a, mid);
        auto right = kronrod15(f, mid, worst.b);
        res.evaluations += 30;
        total = total - worst.value + left.value + right.value;
        err_total += left.error + right.error - worst.error;
        heap.push(Node{worst.a, mid, left.value, left.error});
        heap.push(Node{mid, worst.b, right.value, right.error});
    }

    // Re-sum in interval order so the result does not depend on the heap history.
    std::vector<Node> nodes;
    nodes.reserve(heap.size());
    while (!heap.empty()) {
        nodes.push_back(heap.top());
        heap.pop();
    }
    std::sort(nodes.begin(), nodes.end(), [](const Node& x, const Node& y) { return x.a < y.a; });
    res.value = detail::zero_like(total);
    res.error = 0.0;
    for (const auto& n : nodes) {
        res.value = res.value + n.value;
        res.error += n.error;
        res.partition.push_back({n.a, n.b});
    }
    res.converged = res.error <= target();
    return res;
}

/// Kronrod nodes and weights of a partition, ascending in x.
struct NodeSet {
    std::vector<double> x;
    std::vector<double> w;
};

inline NodeSet kronrod_nodes(const std::vector<Interval>& partition) {
    NodeSet set;
    set.x.reserve(partition.size() * 15);
    set.w.reserve(partition.size() * 15);
    for (const auto& iv : partition) {
        const double centre = 0.5 * (iv.a + iv.b);
        const double half = 0.5 * (iv.b - iv.a);
        for (int j = 0; j < 7; ++j) {
            set.x.push_back(centre - half * detail::kXgk[static_cast<std::size_t>(j)]);
            set.w.push_back(half * detail::kWgk[static_cast<std::size_t>(j)]);
        }
        set.x.push_back(centre);
        set.w.push_back(half * detail::kWgk[7]);
        for (int j = 6; j >= 0; --j) {
            set.x.push_back(centre + half * detail::kXgk[static_cast<std::size_t>(j)]);
            set.w.push_back(half * detail::kWgk[static_cast<std::size_t>(j)]);
        }
    }
    return set;
}

}  // namespace wqed::quad
