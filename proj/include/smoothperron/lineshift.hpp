#pragma once

// Moving the line of integration from kappa to kappa' < kappa: residues of the piecewise
// holomorphic extension of the kernel and the horizontal-side error bound.

#include "smoothperron/kernels.hpp"
#include "smoothperron/perron.hpp"
#include "smoothperron/quadrature.hpp"
#include "smoothperron/series.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace smoothperron {

class HypothesisViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct ShiftConfig {
    PiecewiseKernel kernel;
    SeriesDescriptor series;
    double kappa = 1.5;
    double kappa_prime = 0.6;
    double T = 5.0;
    double V = -1.0;  // < 0: (kappa - kappa') / (2 pi)
    double quad_tol = 1e-9;
    double series_tol = 1e-10;

    double v_extent() const { return V < 0 ? (kappa - kappa_prime) / (2.0 * std::numbers::pi) : V; }
};

inline void validate(const ShiftConfig& c) {
    if (!(c.kappa_prime < c.kappa)) throw std::invalid_argument("lineshift: kappa' must be < kappa");
    if (!(c.T >= 1.0)) throw std::invalid_argument("lineshift: T must be >= 1");
    if (!(c.kappa - c.kappa_prime <= 2.0 * std::numbers::pi * c.v_extent() * (1.0 + 1e-15)))
        throw std::invalid_argument("lineshift: need kappa - kappa' <= 2 pi V");
    if (!(c.kappa > 0.0)) throw std::invalid_argument("lineshift: kappa must be positive");
    if (!c.series.has_evaluator(cplx(c.kappa_prime)))
        throw std::invalid_argument("lineshift: series " + c.series.name + " has no evaluator on Re(s) = " +
                                    std::to_string(c.kappa_prime));
}

struct MBound {
    double grid_max = 0.0;
    double value = 0.0;  // certified: grid maximum plus a Lipschitz slack
    std::size_t piece = 0;
};

/// M >= |phi~_j'(z)| for all pieces j and z in [-U,U] x [0,V]. |p'| is subharmonic, so its
/// maximum sits on the rectangle boundary; a boundary grid plus the step times a coefficient-norm
/// bound on |p''| closes the gap between grid nodes.
inline MBound compute_M(const PiecewiseKernel& k, double V, std::size_t per_side = 4000) {
    if (!(V >= 0)) throw std::invalid_argument("compute_M: V must be >= 0");
    const double U = k.support_halfwidth();
    MBound out;
    for (std::size_t j = 0; j < k.piece_count(); ++j) {
        const auto d1 = k.local_piece(j).derivative();
        if (d1.is_zero()) continue;
        const auto c1 = d1.to_double_coeffs();
        const auto c2 = d1.derivative().to_double_coeffs();
        const double uj = k.breakpoints_d()[j];
        auto p1 = [&](cplx z) { return std::abs(horner(c1, z - cplx(uj, 0.0))); };
        // |w| <= R on the rectangle, w = z - u_j
        const double R = std::hypot(std::max(std::abs(-U - uj), std::abs(U - uj)), V);
        double d2max = 0.0;
        for (std::size_t i = 0; i < c2.size(); ++i) d2max += std::abs(c2[i]) * std::pow(R, static_cast<double>(i));

        double best = 0.0, step = 0.0;
        auto scan = [&](cplx a, cplx b) {
            const double len = std::abs(b - a);
            if (len == 0.0) {
                best = std::max(best, p1(a));
                return;
            }
            step = std::max(step, len / static_cast<double>(per_side));
            for (std::size_t i = 0; i <= per_side; ++i)
                best = std::max(best, p1(a + (b - a) * (static_cast<double>(i) / static_cast<double>(per_side))));
        };
        scan({-U, 0.0}, {U, 0.0});
        if (V > 0) {
            scan({-U, V}, {U, V});
            scan({-U, 0.0}, {-U, V});
            scan({U, 0.0}, {U, V});
        }
        const double certified = best + 0.5 * step * d2max;
        if (certified > out.value) {
            out.value = certified;
            out.grid_max = best;
            out.piece = j;
        }
    }
    return out;
}

inline MBound compute_M(const ShiftConfig& c) { return compute_M(c.kernel, c.v_extent()); }

struct ResidueTerm {
    cplx pole;
    cplx contribution;
};

/// Residues of phi~((s-kappa)/(2 pi i T)) F(s) x^s / s at the poles inside the strip
/// kappa' < Re s < kappa, |Im s| < 2 pi U T.
inline std::vector<ResidueTerm> residue_terms(const ShiftConfig& c, double x) {
    validate(c);
    const double U = c.kernel.support_halfwidth();
    const double scale = 2.0 * std::numbers::pi * c.T;
    std::vector<Pole> poles = c.series.poles;
    bool zero_is_pole_of_F = false;
    for (const auto& p : poles)
        if (std::abs(p.location) < 1e-14) zero_is_pole_of_F = true;
    const bool zero_inside = c.kappa_prime < 0.0 && 0.0 < c.kappa;
    if (zero_inside && zero_is_pole_of_F)
        throw HypothesisViolation("lineshift: F has a pole at s = 0, giving a double pole of F(s)/s (unsupported)");
    if (zero_inside) poles.push_back({0.0, 0.0});  // residue of 1/s, handled below

    std::vector<ResidueTerm> out;
    for (const auto& p : poles) {
        const cplx a = p.location;
        std::ostringstream where;
        where << "pole at " << a.real() << (a.imag() < 0 ? " - " : " + ") << std::abs(a.imag()) << "i";
        if (a.real() == c.kappa || a.real() == c.kappa_prime)
            throw HypothesisViolation("lineshift: " + where.str() + " lies on a vertical side (Re(a) = kappa or kappa')");
        for (double uj : c.kernel.breakpoints_d())
            if (a.imag() == scale * uj)
                throw HypothesisViolation("lineshift: " + where.str() + " lies on a horizontal side (Im(a) = 2 pi u_j T)");
        if (!(a.real() > c.kappa_prime && a.real() < c.kappa)) continue;
        if (!(std::abs(a.imag()) < scale * U)) continue;
        const cplx z = (a - c.kappa) / (cplx(0.0, 1.0) * scale);
        const cplx phi = holo_piece_eval(c.kernel, z);
        cplx contrib;
        if (std::abs(a) < 1e-14) contrib = eval_F(c.series, 0.0, c.series_tol) * phi;
        else contrib = p.residue * phi * std::exp(a * std::log(x)) / a;
        out.push_back({a, contrib});
    }
    std::sort(out.begin(), out.end(), [](const ResidueTerm& l, const ResidueTerm& r) {
        return l.pole.imag() != r.pole.imag() ? l.pole.imag() < r.pole.imag() : l.pole.real() < r.pole.real();
    });
    return out;
}

struct ShiftReport {
    std::string series;
    double x = 0, kappa = 0, kappa_prime = 0, T = 0, V = 0;
    cplx lhs_integral;
    cplx rhs_integral;
    std::vector<ResidueTerm> residues;
    cplx residue_sum;
    double M = 0.0;
    double eta = 0.0;
    double side_integral_sum = 0.0;       // sum_j int_{kappa'}^{kappa} |F(sigma + 2 pi i u_j T)| d sigma
    double horizontal_error_bound = 0.0;  // M (kappa-kappa') x^kappa / (4 pi^3 eta T^2) * side sum
    double per_side_bound_sum = 0.0;      // same with 4 pi^2 in the denominator
    double defect = 0.0;
    double quad_error_estimate = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

namespace detail {

inline quad::IntegralResult<cplx> vertical_line(const ShiftConfig& c, double x, double sigma, bool extended) {
    const PiecewiseKernel& k = c.kernel;
    const double scale = 2.0 * std::numbers::pi * c.T;
    const double L = scale * k.support_halfwidth();
    const double lx = std::log(x);
    const double xk = std::exp(sigma * lx);
    const double f_tol = std::max(1e-15, c.series_tol * std::numbers::pi / (xk * std::asinh(L / std::max(std::abs(sigma), 1e-3))));
    const double v = (c.kappa - sigma) / scale;
    std::vector<double> pins;
    for (double u : k.breakpoints_d()) pins.push_back(scale * u);
    auto f = [&](double t) -> cplx {
        const cplx s(sigma, t);
        cplx phi;
        if (extended) {
            if (!(t / scale >= -k.support_halfwidth() && t / scale < k.support_halfwidth())) return 0.0;
            phi = holo_piece_eval(k, cplx(t / scale, v));
        } else {
            phi = eval(k, t / scale);
            if (phi == cplx(0.0)) return 0.0;
        }
        return eval_F(c.series, s, f_tol) * phi * std::exp(s * lx) / s;
    };
    quad::AdaptiveOptions opt;
    opt.abs_tol = 2.0 * std::numbers::pi * c.quad_tol;
    opt.max_initial_length = std::min(1.0, 2.0 * std::numbers::pi / (lx + 1.0));
    auto r = quad::integrate<cplx>(f, -L, L, pins, opt);
    r.value /= 2.0 * std::numbers::pi;
    r.error /= 2.0 * std::numbers::pi;
    return r;
}

}  // namespace detail

inline ShiftReport shift_verify(const ShiftConfig& c, double x) {
    validate(c);
    if (!(x >= 1.0)) throw std::invalid_argument("lineshift: x must be >= 1");
    ShiftReport r;
    r.series = c.series.name;
    r.x = x;
    r.kappa = c.kappa;
    r.kappa_prime = c.kappa_prime;
    r.T = c.T;
    r.V = c.v_extent();
    r.residues = residue_terms(c, x);
    for (const auto& t : r.residues) r.residue_sum += t.contribution;

    const auto lhs = detail::vertical_line(c, x, c.kappa, false);
    const auto rhs = detail::vertical_line(c, x, c.kappa_prime, true);
    r.lhs_integral = lhs.value;
    r.rhs_integral = rhs.value;
    r.quad_error_estimate = lhs.error + rhs.error;

    r.M = compute_M(c).value;
    r.eta = c.kernel.eta();
    const auto& gl = quad::gauss_legendre(32);
    const double scale = 2.0 * std::numbers::pi * c.T;
    for (double uj : c.kernel.breakpoints_d()) {
        auto g = [&](double sigma) { return std::abs(eval_F(c.series, cplx(sigma, scale * uj), c.series_tol)); };
        r.side_integral_sum += quad::fixed_gauss_legendre<double>(g, c.kappa_prime, c.kappa, gl);
    }
    const double common = r.M * (c.kappa - c.kappa_prime) * std::pow(x, c.kappa) / (r.eta * c.T * c.T);
    r.horizontal_error_bound = common / (4.0 * std::pow(std::numbers::pi, 3)) * r.side_integral_sum;
    r.per_side_bound_sum = common / (4.0 * std::pow(std::numbers::pi, 2)) * r.side_integral_sum;
    r.defect = std::abs(r.lhs_integral - r.rhs_integral - r.residue_sum);
    r.tolerance = r.quad_error_estimate + 10.0 * c.quad_tol;
    r.passed = r.defect <= r.horizontal_error_bound + r.tolerance;
    return r;
}

}  // namespace smoothperron
