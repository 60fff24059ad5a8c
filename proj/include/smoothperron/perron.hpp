#pragma once

// Smoothed truncated Perron formula: main contour integral, correction integral, explicit
// error budget and a verification report against the directly computed partial sum.

#include "smoothperron/kernels.hpp"
#include "smoothperron/quadrature.hpp"
#include "smoothperron/series.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace smoothperron {

enum class PerronForm {
    corollary,  // correction over u in [0,T] with sgn(x-n), O(1/T) budget
    refined,    // corollary plus the (kappa/T) u*phi_hat term, O(log(eT)/T^2) budget
    theorem,    // exact identity with the kernel phi(t/T); nothing is dropped
};

inline std::string to_string(PerronForm f) {
    switch (f) {
        case PerronForm::corollary: return "corollary";
        case PerronForm::refined: return "refined";
        case PerronForm::theorem: return "theorem";
    }
    return "?";
}

inline PerronForm parse_perron_form(const std::string& s) {
    if (s == "corollary") return PerronForm::corollary;
    if (s == "refined") return PerronForm::refined;
    if (s == "theorem") return PerronForm::theorem;
    throw std::invalid_argument("unknown Perron form '" + s + "' (corollary|refined|theorem)");
}

struct PerronConfig {
    PiecewiseKernel kernel;
    double kappa = 1.5;
    double T = 1.0;
    double x = 10.5;
    double quad_tol = 1e-9;
    double series_tol = 1e-10;
    std::uint64_t cahen_nmax = 1'000'000;
    PerronForm form = PerronForm::corollary;
    // theorem form: jumps of A(u) at n <= jump_cap are integrated exactly, the rest is bounded
    std::uint64_t jump_cap = 2'000'000;
};

inline void validate(const SeriesDescriptor& d, const PerronConfig& c) {
    if (!(c.kappa > d.sigma_0()))
        throw std::invalid_argument("perron: kappa must exceed sigma_0 = " + std::to_string(d.sigma_0()));
    if (!(c.T >= 1.0)) throw std::invalid_argument("perron: T must be >= 1");
    if (!(c.x >= 1.0)) throw std::invalid_argument("perron: x must be >= 1");
    if (!(c.quad_tol > 0) || !(c.series_tol > 0)) throw std::invalid_argument("perron: tolerances must be positive");
}

struct MainIntegral {
    cplx value;
    double quad_error = 0.0;    // Gauss-Kronrod estimate, already divided by 2 pi
    double series_error = 0.0;  // bound from the eval_F tolerance
    std::size_t panels = 0;
    bool converged = true;
};

/// (1/2 pi i) int_{kappa - i inf}^{kappa + i inf} F(s) phi((s-kappa)/(2 pi i T)) x^s/s ds.
/// The integrand vanishes for |t| >= 2 pi T U, so the segment is exact.
inline MainIntegral main_integral(const SeriesDescriptor& d, const PerronConfig& c) {
    validate(d, c);
    const double L = 2.0 * std::numbers::pi * c.T * c.kernel.support_halfwidth();
    const double lx = std::log(c.x);
    const double xk = std::exp(c.kappa * lx);
    // (1/2pi) * x^kappa * int dt/|s| * tol_F <= series_tol
    const double f_tol = std::max(1e-15, c.series_tol * std::numbers::pi / (xk * std::asinh(L / c.kappa)));
    std::vector<double> pins;
    for (double u : c.kernel.breakpoints_d()) pins.push_back(2.0 * std::numbers::pi * c.T * u);
    auto integrand = [&](double t) -> cplx {
        const double phi = eval(c.kernel, t / (2.0 * std::numbers::pi * c.T));
        if (phi == 0.0) return 0.0;
        const cplx s(c.kappa, t);
        return eval_F(d, s, f_tol) * phi * std::exp(s * lx) / s;
    };
    quad::AdaptiveOptions opt;
    opt.abs_tol = 2.0 * std::numbers::pi * c.quad_tol;
    opt.max_initial_length = std::min(1.0, 2.0 * std::numbers::pi / (lx + 1.0));
    auto r = quad::integrate<cplx>(integrand, -L, L, pins, opt);
    MainIntegral out;
    out.value = r.value / (2.0 * std::numbers::pi);
    out.quad_error = r.error / (2.0 * std::numbers::pi);
    out.series_error = f_tol * xk * std::asinh(L / c.kappa) / std::numbers::pi;
    out.panels = r.panels;
    out.converged = r.converged;
    return out;
}

struct Correction {
    cplx value;
    cplx refined_term;  // (kappa/T) sum a_n int u phi_hat, refined form only
    double quad_error = 0.0;
    double tail_bound = 0.0;  // theorem form: bound on the jumps beyond jump_cap
    std::uint64_t terms = 0;
};

namespace detail {

inline constexpr double kCumulativeTol = 1e-12;

inline std::uint64_t floor_u64(double v) { return v <= 0 ? 0 : static_cast<std::uint64_t>(std::floor(v)); }

}  // namespace detail

/// int_0^T (sum_{x e^{-u/T} < n <= x e^{u/T}} a_n sgn(x-n)) phi_hat(u) du, by exchanging
/// sum and integral: each n contributes a_n sgn(x-n) int_{T|log(n/x)|}^T phi_hat.
inline Correction correction_integral(const SeriesDescriptor& d, const PerronConfig& c) {
    validate(d, c);
    Correction out;
    const std::uint64_t lo = detail::floor_u64(c.x / std::numbers::e);
    const std::uint64_t hi = detail::floor_u64(c.x * std::numbers::e);
    std::vector<cplx> a;
    d.block(lo, hi, a);
    detail::Accumulator acc, ref;
    for (std::uint64_t n = lo + 1; n <= hi; ++n) {
        const cplx an = a[n - lo - 1];
        if (an == cplx(0.0)) continue;
        const double nd = static_cast<double>(n);
        const double w = std::abs(std::log(nd / c.x));
        if (w >= 1.0) continue;
        const double sgn = nd < c.x ? 1.0 : (nd > c.x ? -1.0 : 0.0);
        ++out.terms;
        if (sgn != 0.0) acc.add(an * sgn * fourier_cumulative(c.kernel, c.T * w, c.T));
        if (c.form == PerronForm::refined) ref.add(an * fourier_moment_cumulative(c.kernel, c.T * w, c.T));
        out.quad_error += std::abs(an) * detail::kCumulativeTol * (c.form == PerronForm::refined ? 2.0 : 1.0);
    }
    out.value = acc.value();
    out.refined_term = ref.value() * (c.kappa / c.T);
    return out;
}

/// Exact second term of the identity for psi = phi(./T):
/// int_R (A(0) - e^{-kappa u} A(u)) T phi_hat(T u) du
///   = A(0) - sum_n A_n int_{log(n/x)}^{log((n+1)/x)} e^{-kappa u} T phi_hat(T u) du.
inline Correction theorem_correction(const SeriesDescriptor& d, const PerronConfig& c) {
    validate(d, c);
    const std::uint64_t N = std::max<std::uint64_t>(c.jump_cap, detail::floor_u64(c.x * std::numbers::e) + 1);
    const PiecewiseKernel& k = c.kernel;
    const double width = 2.0 * to_double(k.box_halfwidth());
    const auto& gl = quad::gauss_legendre(8);
    // v = T u
    auto g = [&](double v) { return std::exp(-c.kappa * v / c.T) * fourier(k, v); };
    quad::AdaptiveOptions opt;
    opt.abs_tol = 1e-15;
    opt.max_initial_length = 0.25;

    Correction out;
    detail::Accumulator sum;
    detail::Accumulator A;
    std::vector<cplx> buf;
    const double lx = std::log(c.x);
    for (std::uint64_t lo = 0; lo < N; lo += detail::kBlock) {
        const std::uint64_t hi = std::min(N, lo + detail::kBlock);
        d.block(lo, hi, buf);
        for (std::uint64_t n = lo + 1; n <= hi; ++n) {
            A.add(buf[n - lo - 1]);
            const cplx An = A.value();
            if (An == cplx(0.0)) continue;
            const double nd = static_cast<double>(n);
            const double va = c.T * (std::log(nd) - lx);
            const double vb = c.T * (std::log1p(1.0 / nd) + std::log(nd) - lx);
            double I;
            if ((vb - va) * std::numbers::pi * width < 0.5) {
                I = quad::fixed_gauss_legendre<double>(g, va, vb, gl);
            } else {
                auto r = quad::integrate<double>(g, va, vb, {}, opt);
                I = r.value;
                out.quad_error += std::abs(An) * r.error;
            }
            sum.add(An * I);
            ++out.terms;
        }
    }
    const cplx A0 = partial_sum(d, c.x);
    out.value = A0 - sum.value();

    // tail: |A(u)| <= 2 B(sigma) x^sigma e^{sigma u}, |T phi_hat(T u)| <= C_{m+1} T^{-m} u^{-m-1}
    const double s0 = d.sigma_0();
    const double sigma = s0 + 0.5 * (c.kappa - s0);
    const double Lu = std::log((static_cast<double>(N) + 1.0) / c.x);
    if (d.kind == CoefficientKind::zero) {
        out.tail_bound = 0.0;
    } else {
        const auto B = cahen_bound(d, sigma, std::min<std::uint64_t>(c.cahen_nmax, N));
        const double Bv = B.certified_upper.value_or(B.value);
        const int m = k.m();
        const double Cm1 = constants(k).c_k.at(static_cast<std::size_t>(m + 1));
        out.tail_bound = 2.0 * Bv * std::pow(c.x, sigma) * std::exp(-(c.kappa - sigma) * Lu) * Cm1 /
                         (m * std::pow(c.T, m) * std::pow(Lu, m));
    }
    return out;
}

struct BudgetResult {
    double value = 0.0;
    double C = 0.0;  // C(phi)
    CahenBound B;
};

/// O*-term of the chosen form: 4 C (1+kappa)^2 e^{2 kappa} B(kappa) x^kappa / T, or for the
/// refined form 4 C (1+kappa^2) e^{2 kappa} B x^kappa log(eT) / T^2. Zero for the exact identity.
inline BudgetResult error_budget(const SeriesDescriptor& d, const PerronConfig& c) {
    validate(d, c);
    BudgetResult out;
    out.C = constants(c.kernel).c_max;
    out.B = cahen_bound(d, c.kappa, c.cahen_nmax);
    const double common = 4.0 * out.C * std::exp(2.0 * c.kappa) * out.B.value * std::pow(c.x, c.kappa);
    switch (c.form) {
        case PerronForm::corollary: out.value = common * (1.0 + c.kappa) * (1.0 + c.kappa) / c.T; break;
        case PerronForm::refined:
            out.value = common * (1.0 + c.kappa * c.kappa) * std::log(std::numbers::e * c.T) / (c.T * c.T);
            break;
        case PerronForm::theorem: out.value = 0.0; break;
    }
    return out;
}

struct PerronReport {
    std::string series;
    PerronForm form = PerronForm::corollary;
    double kappa = 0, T = 0, x = 0;
    cplx direct;
    cplx main_integral;
    cplx correction;
    cplx refined_term;  // included in `correction` for the refined form
    double error_budget = 0.0;
    double C = 0.0;
    double B = 0.0;
    bool B_certified = false;
    double residual = 0.0;
    double quad_error_estimate = 0.0;
    double series_error_bound = 0.0;
    double tail_bound = 0.0;
    double tolerance = 0.0;  // allowance on top of the budget
    std::size_t panels = 0;
    bool quad_converged = true;
    bool passed = false;
};

inline PerronReport verify(const SeriesDescriptor& d, const PerronConfig& c) {
    validate(d, c);
    PerronReport r;
    r.series = d.name;
    r.form = c.form;
    r.kappa = c.kappa;
    r.T = c.T;
    r.x = c.x;
    r.direct = partial_sum(d, c.x);
    const auto mi = main_integral(d, c);
    r.main_integral = mi.value;
    r.panels = mi.panels;
    r.quad_converged = mi.converged;
    Correction corr = c.form == PerronForm::theorem ? theorem_correction(d, c) : correction_integral(d, c);
    r.refined_term = corr.refined_term;
    r.correction = corr.value + corr.refined_term;
    r.tail_bound = corr.tail_bound;
    const auto budget = error_budget(d, c);
    r.error_budget = budget.value;
    r.C = budget.C;
    r.B = budget.B.value;
    r.B_certified = budget.B.certified;
    r.quad_error_estimate = mi.quad_error + corr.quad_error;
    r.series_error_bound = mi.series_error;
    r.residual = std::abs(r.direct - r.main_integral - r.correction);
    r.tolerance = r.quad_error_estimate + r.series_error_bound + r.tail_bound + 10.0 * (c.quad_tol + c.series_tol);
    r.passed = r.residual <= r.error_budget + r.tolerance;
    return r;
}

struct RemarkBound {
    double xi_max = 0.0;
    double xi_argmax = 0.0;
    double max_term = 0.0;  // 2 C(phi) max_xi (|sum_{1<=n/x<=1+xi} a_n| + |sum_{1<=x/n<=1+xi} a_n|)
    double o_term = 0.0;    // explicit stand-in for O_kappa(x^kappa / T)
    double total = 0.0;
};

/// Simplified remainder for kernels of order m = n_order + 1 (reporting only).
inline RemarkBound remark_bound(const SeriesDescriptor& d, const PerronConfig& c, int n_order) {
    validate(d, c);
    if (n_order < 1) throw std::invalid_argument("remark_bound: n_order must be >= 1");
    if (c.kernel.m() != n_order + 1)
        throw std::invalid_argument("remark_bound: kernel order m must equal n_order + 1");
    RemarkBound out;
    const double Cphi = constants(c.kernel).c_max;
    out.xi_max = std::numbers::e * std::pow(c.T, 1.0 / n_order - 1.0);
    const double up = c.x * (1.0 + out.xi_max), down = c.x / (1.0 + out.xi_max);

    // events: the xi at which each n enters one of the two sums
    struct Event {
        double xi;
        cplx a;
        int side;
    };
    std::vector<Event> ev;
    const std::uint64_t lo = down <= 1.0 ? 0 : static_cast<std::uint64_t>(std::ceil(down)) - 1;
    const std::uint64_t hi = detail::floor_u64(up);
    std::vector<cplx> a;
    if (hi > lo) d.block(lo, hi, a);
    for (std::uint64_t n = lo + 1; n <= hi; ++n) {
        const cplx an = a[n - lo - 1];
        const double nd = static_cast<double>(n);
        if (an == cplx(0.0)) continue;
        if (nd >= c.x && nd <= up) ev.push_back({nd / c.x - 1.0, an, 0});
        if (nd <= c.x && nd >= down) ev.push_back({c.x / nd - 1.0, an, 1});
    }
    std::sort(ev.begin(), ev.end(), [](const Event& p, const Event& q) { return p.xi < q.xi; });
    cplx s_up = 0.0, s_down = 0.0;
    double best = 0.0;
    for (std::size_t i = 0; i < ev.size();) {
        const double xi = ev[i].xi;
        for (; i < ev.size() && ev[i].xi == xi; ++i) (ev[i].side == 0 ? s_up : s_down) += ev[i].a;
        const double v = std::abs(s_up) + std::abs(s_down);
        if (v > best) {
            best = v;
            out.xi_argmax = xi;
        }
    }
    out.max_term = 2.0 * Cphi * best;
    // tail int_{T^{1/n}}^T E(u/T) phi_hat: |E| <= 4 B x^kappa (1 + e^kappa),
    // int_{T^{1/n}}^inf |phi_hat| <= C_{m+1} / (m T^{m/n})
    if (d.kind != CoefficientKind::zero) {
        const auto B = cahen_bound(d, c.kappa, c.cahen_nmax);
        const int m = c.kernel.m();
        const double Cm1 = constants(c.kernel).c_k.at(static_cast<std::size_t>(m + 1));
        const double xk = std::pow(c.x, c.kappa);
        const double ex1 = 4.0 * B.value * xk * (1.0 + std::exp(c.kappa)) * Cm1 /
                           (m * std::pow(c.T, static_cast<double>(m) / n_order));
        const double cor = 4.0 * Cphi * (1.0 + c.kappa) * (1.0 + c.kappa) * std::exp(2.0 * c.kappa) * B.value * xk / c.T;
        out.o_term = ex1 + cor;
    }
    out.total = out.max_term + out.o_term;
    return out;
}

}  // namespace smoothperron
