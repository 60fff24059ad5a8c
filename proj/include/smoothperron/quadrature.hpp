#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature, Gauss-Legendre rules and golden-section search.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <vector>

namespace smoothperron::quad {

namespace detail {

// QUADPACK qk15 abscissae and weights.
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
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

}  // namespace detail

template <class V>
struct PanelResult {
    V value{};
    double error = 0.0;
};

template <class V, class F>
PanelResult<V> gauss_kronrod15(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    V fc = f(center);
    V kronrod = fc * detail::kWgk[7];
    V gauss = fc * detail::kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * detail::kXgk[j];
        V f1 = f(center - dx);
        V f2 = f(center + dx);
        kronrod += (f1 + f2) * detail::kWgk[j];
        if (j % 2 == 1) gauss += (f1 + f2) * detail::kWg[j / 2];
    }
    return {kronrod * half, detail::magnitude((kronrod - gauss) * half)};
}

template <class V>
struct IntegralResult {
    V value{};
    double error = 0.0;
    std::size_t panels = 0;
    bool converged = true;
};

struct AdaptiveOptions {
    double abs_tol = 1e-9;
    std::size_t max_panels = 200000;
    // initial panels are no longer than this (0 = no cap)
    double max_initial_length = 0.0;
};

/// Globally adaptive GK15 over [a,b]; `pins` are points that always become panel boundaries
/// (e.g. where the integrand is only finitely smooth). The worst panel is bisected until the
/// total error estimate is below abs_tol.
template <class V, class F>
IntegralResult<V> integrate(F&& f, double a, double b, std::vector<double> pins = {},
                            const AdaptiveOptions& opt = {}) {
    IntegralResult<V> out;
    if (!(b > a)) return out;
    std::vector<double> edges{a};
    std::sort(pins.begin(), pins.end());
    for (double p : pins)
        if (p > a && p < b) edges.push_back(p);
    edges.push_back(b);
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    struct Panel {
        double a, b;
        PanelResult<V> r;
        bool operator<(const Panel& o) const { return r.error < o.r.error; }
    };
    std::priority_queue<Panel> heap;
    V total{};
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double lo = edges[i], hi = edges[i + 1];
        std::size_t pieces = 1;
        if (opt.max_initial_length > 0.0)
            pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / opt.max_initial_length)));
        for (std::size_t k = 0; k < pieces; ++k) {
            double pa = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(pieces);
            double pb = (k + 1 == pieces) ? hi : lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(pieces);
            Panel p{pa, pb, gauss_kronrod15<V>(f, pa, pb)};
            total += p.r.value;
            err += p.r.error;
            heap.push(p);
        }
    }
    while (err > opt.abs_tol && heap.size() < opt.max_panels) {
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        Panel left{worst.a, mid, gauss_kronrod15<V>(f, worst.a, mid)};
        Panel right{mid, worst.b, gauss_kronrod15<V>(f, mid, worst.b)};
        total += left.r.value + right.r.value - worst.r.value;
        err += left.r.error + right.r.error - worst.r.error;
        heap.push(left);
        heap.push(right);
    }
    // recompute the sums from the final panels to avoid drift from the incremental updates
    total = V{};
    err = 0.0;
    out.panels = heap.size();
    while (!heap.empty()) {
        total += heap.top().r.value;
        err += heap.top().r.error;
        heap.pop();
    }
    out.value = total;
    out.error = err;
    out.converged = err <= opt.abs_tol;
    return out;
}

/// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration and cached.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussLegendreRule make_gauss_legendre(std::size_t n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                double p2 = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 - (static_cast<double>(k) - 1.0) * p0) /
                            static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            double p2 = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 - (static_cast<double>(k) - 1.0) * p0) /
                        static_cast<double>(k);
            p0 = p1;
            p1 = p2;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

inline const GaussLegendreRule& gauss_legendre(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, GaussLegendreRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

template <class V, class F>
V fixed_gauss_legendre(F&& f, double a, double b, const GaussLegendreRule& rule) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    V acc{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += f(c + h * rule.nodes[i]) * rule.weights[i];
    return acc * h;
}

/// Golden-section search for a maximum of a unimodal f on [a,b]; returns the argmax.
template <class F>
double golden_section_max(F&& f, double a, double b, double tol = 1e-12, int max_iter = 200) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? c : d;
}

}  // namespace smoothperron::quad
