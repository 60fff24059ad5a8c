#pragma once

// Compactly supported piecewise-polynomial test kernels p_m(t; delta) obtained by smoothing a box
// with an m-fold convolution of a narrow box, with their exact Fourier transforms.

#include "smoothperron/polynomial.hpp"
#include "smoothperron/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace smoothperron {

struct KernelConstants {
    std::vector<double> c_k;  // C_k = sup_u |u^k phi_hat(u)|, k = 0..k_max
    double c_max = 0.0;
};

class PiecewiseKernel;

namespace detail {

// Cumulative integrals of phi_hat and u*phi_hat on a uniform grid of [0, u_max].
struct FourierTable {
    double step = 0.25;
    double u_max = 1024.0;
    std::vector<double> moment0;
    std::vector<double> moment1;
};

struct KernelCache {
    std::once_flag table_once;
    FourierTable table;
    std::once_flag constants_once;
    KernelConstants constants;
};

}  // namespace detail

/// Even, compactly supported piecewise polynomial equal to 1 on a plateau around 0.
/// Piece j lives on [u_j, u_{j+1}) and is stored exactly in the local variable w = t - u_j.
class PiecewiseKernel {
public:
    PiecewiseKernel(int m, Rational delta, Rational box_halfwidth, Rational bump_halfwidth, PiecewisePoly global)
        : m_(m),
          delta_(std::move(delta)),
          box_halfwidth_(std::move(box_halfwidth)),
          bump_halfwidth_(std::move(bump_halfwidth)),
          breaks_(std::move(global.breaks)),
          cache_(std::make_shared<detail::KernelCache>()) {
        for (std::size_t j = 0; j < global.polys.size(); ++j) {
            local_.push_back(global.polys[j].shifted(breaks_[j]));
            local_d_.push_back(local_.back().to_double_coeffs());
        }
        for (const auto& b : breaks_) breaks_d_.push_back(to_double(b));
        support_ = to_double(breaks_.back());
        eta_ = std::abs(breaks_d_.front());
        for (double b : breaks_d_) eta_ = std::min(eta_, std::abs(b));
    }

    int m() const { return m_; }
    const Rational& delta() const { return delta_; }
    const Rational& box_halfwidth() const { return box_halfwidth_; }
    const Rational& bump_halfwidth() const { return bump_halfwidth_; }
    /// All piece boundaries u_0 = -U < ... < u_r = U.
    const std::vector<Rational>& breakpoints() const { return breaks_; }
    const std::vector<double>& breakpoints_d() const { return breaks_d_; }
    std::size_t piece_count() const { return local_.size(); }
    const RationalPoly& local_piece(std::size_t j) const { return local_.at(j); }
    const std::vector<double>& local_piece_d(std::size_t j) const { return local_d_.at(j); }
    /// Piece j expressed in the global variable t.
    RationalPoly global_piece(std::size_t j) const { return local_.at(j).shifted(-breaks_.at(j)); }
    double support_halfwidth() const { return support_; }
    /// eta = min_j |u_j|
    double eta() const { return eta_; }

    /// Index j with u_j <= t < u_{j+1}, or nothing outside [-U, U).
    std::optional<std::size_t> piece_index(double t) const {
        if (!(t >= breaks_d_.front()) || !(t < breaks_d_.back())) return std::nullopt;
        auto it = std::upper_bound(breaks_d_.begin(), breaks_d_.end(), t);
        return static_cast<std::size_t>(it - breaks_d_.begin()) - 1;
    }

    detail::KernelCache& cache() const { return *cache_; }

private:
    int m_;
    Rational delta_;
    Rational box_halfwidth_;
    Rational bump_halfwidth_;
    std::vector<Rational> breaks_;
    std::vector<double> breaks_d_;
    std::vector<RationalPoly> local_;
    std::vector<std::vector<double>> local_d_;
    double support_ = 0.0;
    double eta_ = 0.0;
    std::shared_ptr<detail::KernelCache> cache_;
};

/// 1_{[-H,H]} convolved with m normalized boxes of half-width bump/m each.
/// Equal to 1 on |t| <= H - bump and supported in [-(H + bump), H + bump].
inline PiecewiseKernel build_box_smoothed(const Rational& box_halfwidth, int m, const Rational& bump_halfwidth,
                                          const Rational& delta_label) {
    if (m < 1) throw std::invalid_argument("smoothing order m must be >= 1");
    if (bump_halfwidth <= 0) throw std::invalid_argument("bump half-width must be positive");
    if (box_halfwidth <= bump_halfwidth) throw std::invalid_argument("box half-width must exceed bump half-width");
    PiecewisePoly f = PiecewisePoly::box(box_halfwidth, Rational(1));
    const Rational h = bump_halfwidth / m;
    for (int i = 0; i < m; ++i) f = convolve_with_normalized_box(f, h);
    return PiecewiseKernel(m, delta_label, box_halfwidth, bump_halfwidth, std::move(f));
}

/// p_m(t; delta): plateau |t| <= 1, support |t| <= 1 + delta.
inline PiecewiseKernel build_pm(int m, const Rational& delta) {
    if (m < 1) throw std::invalid_argument("build_pm: m must be >= 1");
    if (delta <= 0) throw std::invalid_argument("build_pm: delta must be > 0");
    return build_box_smoothed(1 + delta / 2, m, delta / 2, delta);
}

inline PiecewiseKernel build_pm(int m, double delta) {
    if (!(delta > 0)) throw std::invalid_argument("build_pm: delta must be > 0");
    return build_pm(m, rational_from_double(delta));
}

inline double eval(const PiecewiseKernel& k, double t) {
    auto j = k.piece_index(t);
    if (!j) return 0.0;
    return horner(k.local_piece_d(*j), t - k.breakpoints_d()[*j]);
}

/// Holomorphic extension of the piece selected by Re(z).
inline std::complex<double> holo_piece_eval(const PiecewiseKernel& k, std::complex<double> z) {
    auto j = k.piece_index(z.real());
    if (!j) throw std::domain_error("holo_piece_eval: Re(z) outside [-U, U)");
    return horner(k.local_piece_d(*j), z - std::complex<double>(k.breakpoints_d()[*j], 0.0));
}

namespace detail {

inline double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

}  // namespace detail

/// phi_hat(u) = sin(2 pi H u)/(pi u) * (sin(2 pi (b/m) u) / (2 pi (b/m) u))^m.
/// For p_m(.;delta) this is sin(pi(2+delta)u)/(pi u) * (m sin(pi delta u/m)/(pi delta u))^m.
inline double fourier(const PiecewiseKernel& k, double u) {
    const double au = std::abs(u);
    const double H = to_double(k.box_halfwidth());
    const double w = to_double(k.bump_halfwidth()) / k.m();
    const double box = 2.0 * H * detail::sinc(2.0 * std::numbers::pi * H * au);
    const double bump = std::pow(detail::sinc(2.0 * std::numbers::pi * w * au), k.m());
    return box * bump;
}

/// Upper envelope of |phi_hat(u)|.
inline double fourier_envelope(const PiecewiseKernel& k, double u) {
    const double au = std::abs(u);
    const double H = to_double(k.box_halfwidth());
    if (au == 0.0) return 2.0 * H;
    const double w = to_double(k.bump_halfwidth()) / k.m();
    const double tail = 1.0 / (std::numbers::pi * au) * std::pow(std::min(1.0, 1.0 / (2.0 * std::numbers::pi * w * au)), k.m());
    return std::min(2.0 * H, tail);
}

inline constexpr double kConstantsGridMax = 50.0;
inline constexpr double kConstantsGridStep = 1e-3;

/// C_k = sup |u^k phi_hat(u)| for 0 <= k <= k_max: grid scan + golden-section refinement on
/// |u| <= 50, analytic envelope beyond.
inline KernelConstants compute_constants(const PiecewiseKernel& k, int k_max) {
    if (k_max < 0) throw std::invalid_argument("constants: k_max must be >= 0");
    if (k_max > k.m() + 1) throw std::invalid_argument("constants: k_max > m+1, the supremum may be infinite");
    const auto n = static_cast<std::size_t>(std::llround(kConstantsGridMax / kConstantsGridStep));
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i) grid[i] = std::abs(fourier(k, static_cast<double>(i) * kConstantsGridStep));

    KernelConstants out;
    for (int p = 0; p <= k_max; ++p) {
        auto g = [&](double u) { return std::pow(std::abs(u), p) * std::abs(fourier(k, u)); };
        auto gi = [&](std::size_t i) {
            return std::pow(static_cast<double>(i) * kConstantsGridStep, p) * grid[i];
        };
        double best = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            double v = gi(i);
            bool left_ok = i == 0 || v >= gi(i - 1);
            bool right_ok = i == n || v >= gi(i + 1);
            if (!(left_ok && right_ok)) continue;
            double refined = v;
            if (i > 0 && i < n) {
                double lo = static_cast<double>(i - 1) * kConstantsGridStep;
                double hi = static_cast<double>(i + 1) * kConstantsGridStep;
                refined = std::max(v, g(quad::golden_section_max(g, lo, hi)));
            }
            best = std::max(best, refined);
        }
        const double tail = std::pow(kConstantsGridMax, p) * fourier_envelope(k, kConstantsGridMax);
        out.c_k.push_back(std::max(best, tail));
    }
    out.c_max = *std::max_element(out.c_k.begin(), out.c_k.end());
    return out;
}

/// Cached constants with k_max = m + 1.
inline const KernelConstants& constants(const PiecewiseKernel& k) {
    auto& c = k.cache();
    std::call_once(c.constants_once, [&] { c.constants = compute_constants(k, k.m() + 1); });
    return c.constants;
}

inline KernelConstants constants(const PiecewiseKernel& k, int k_max) {
    if (k_max == k.m() + 1) return constants(k);
    return compute_constants(k, k_max);
}

namespace detail {

inline const FourierTable& fourier_table(const PiecewiseKernel& k) {
    auto& c = k.cache();
    std::call_once(c.table_once, [&] {
        FourierTable& t = c.table;
        const auto cells = static_cast<std::size_t>(t.u_max / t.step);
        t.moment0.assign(cells + 1, 0.0);
        t.moment1.assign(cells + 1, 0.0);
        quad::AdaptiveOptions opt;
        opt.abs_tol = 1e-16;
        opt.max_panels = 64;
        for (std::size_t i = 0; i < cells; ++i) {
            double a = static_cast<double>(i) * t.step, b = a + t.step;
            auto r0 = quad::integrate<double>([&](double u) { return fourier(k, u); }, a, b, {}, opt);
            auto r1 = quad::integrate<double>([&](double u) { return u * fourier(k, u); }, a, b, {}, opt);
            t.moment0[i + 1] = t.moment0[i] + r0.value;
            t.moment1[i + 1] = t.moment1[i] + r1.value;
        }
    });
    return c.table;
}

// int_0^b u^moment phi_hat(u) du for b >= 0
inline double cumulative_from_zero(const PiecewiseKernel& k, double b, int moment) {
    const FourierTable& t = fourier_table(k);
    const auto& tab = moment == 0 ? t.moment0 : t.moment1;
    auto f = [&](double u) { return (moment == 0 ? 1.0 : u) * fourier(k, u); };
    quad::AdaptiveOptions opt;
    opt.abs_tol = 1e-14;
    double start;
    double base;
    if (b >= t.u_max) {
        start = t.u_max;
        base = tab.back();
        opt.max_initial_length = t.step;
        opt.abs_tol = 1e-13;
    } else {
        auto cell = static_cast<std::size_t>(b / t.step);
        start = static_cast<double>(cell) * t.step;
        base = tab[cell];
    }
    if (b == start) return base;
    return base + quad::integrate<double>(f, start, b, {}, opt).value;
}

}  // namespace detail

/// int_a^b phi_hat(u) du (table lookup at panel breakpoints plus one adaptive panel per end).
inline double fourier_cumulative(const PiecewiseKernel& k, double a, double b) {
    if (a > b) throw std::invalid_argument("fourier_cumulative: a > b");
    auto cum = [&](double v) { return v >= 0 ? detail::cumulative_from_zero(k, v, 0) : -detail::cumulative_from_zero(k, -v, 0); };
    return cum(b) - cum(a);
}

/// int_a^b u phi_hat(u) du
inline double fourier_moment_cumulative(const PiecewiseKernel& k, double a, double b) {
    if (a > b) throw std::invalid_argument("fourier_moment_cumulative: a > b");
    auto cum = [&](double v) { return detail::cumulative_from_zero(k, std::abs(v), 1); };
    return cum(b) - cum(a);
}

struct FourierTotal {
    double value = 0.0;       // int over [-u_max, u_max]
    double tail_bound = 0.0;  // bound on the neglected |u| > u_max part
};

/// int_R phi_hat, which equals phi(0) = 1.
inline FourierTotal fourier_total(const PiecewiseKernel& k) {
    const auto& t = detail::fourier_table(k);
    FourierTotal out;
    out.value = 2.0 * t.moment0.back();
    const double w = to_double(k.bump_halfwidth()) / k.m();
    const int m = k.m();
    out.tail_bound = 2.0 / std::numbers::pi * std::pow(1.0 / (2.0 * std::numbers::pi * w), m) /
                     (m * std::pow(t.u_max, m));
    return out;
}

}  // namespace smoothperron
