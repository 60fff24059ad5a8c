#pragma once

// Dirichlet eta and Riemann zeta by Borwein's alternating-series acceleration.
//
// eta(s) ~ sum_{k<n} (-1)^k w_k (k+1)^{-s},  w_k = (d_n - d_k)/d_n,
// d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!),
// with |error| <= 3 (1 + 2|t|) e^{pi|t|/2} / (3+sqrt 8)^n.

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace smoothperron::zeta {

using cplx = std::complex<double>;

inline constexpr std::size_t kMaxTerms = 6000;  // d_n stays finite in long double

namespace detail {

inline const std::vector<double>& borwein_weights(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::shared_ptr<const std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return *it->second;
    // tau_i proportional to (n+i-1)! 4^i / ((n-i)! (2i)!)
    std::vector<long double> tau(n + 1);
    tau[0] = 1.0L;
    for (std::size_t i = 1; i <= n; ++i) {
        const long double ni = static_cast<long double>(n);
        const long double ii = static_cast<long double>(i);
        tau[i] = tau[i - 1] * 4.0L * (ni + ii - 1.0L) * (ni - ii + 1.0L) / ((2.0L * ii) * (2.0L * ii - 1.0L));
    }
    std::vector<long double> suffix(n + 2, 0.0L);
    for (std::size_t i = n + 1; i-- > 0;) suffix[i] = suffix[i + 1] + tau[i];
    auto w = std::make_shared<std::vector<double>>(n);
    for (std::size_t k = 0; k < n; ++k) (*w)[k] = static_cast<double>(suffix[k + 1] / suffix[0]);
    return *cache.emplace(n, std::move(w)).first->second;
}

inline const std::vector<double>& log_table(std::size_t n) {
    static std::mutex mu;
    static std::shared_ptr<const std::vector<double>> table = std::make_shared<std::vector<double>>();
    std::lock_guard<std::mutex> lock(mu);
    if (table->size() < n + 1) {
        auto t = std::make_shared<std::vector<double>>(std::max<std::size_t>(n + 1, 2 * table->size()));
        for (std::size_t k = 0; k < t->size(); ++k) (*t)[k] = std::log(static_cast<double>(k + 1));
        table = std::move(t);
    }
    return *table;
}

}  // namespace detail

/// Number of Borwein terms that certify |error| <= tol at height |t|.
inline std::size_t borwein_terms(double abs_t, double tol) {
    const double bound_num = std::log(3.0 * (1.0 + 2.0 * abs_t)) + std::numbers::pi * abs_t / 2.0 - std::log(tol);
    const double n = std::ceil(bound_num / std::log(3.0 + std::sqrt(8.0)));
    if (!(n < static_cast<double>(kMaxTerms)))
        throw std::domain_error("eta: height |t| too large for the alternating-series evaluator");
    return std::max<std::size_t>(8, static_cast<std::size_t>(n));
}

inline double borwein_error_bound(double abs_t, std::size_t n) {
    return 3.0 * (1.0 + 2.0 * abs_t) * std::exp(std::numbers::pi * abs_t / 2.0 -
                                                  static_cast<double>(n) * std::log(3.0 + std::sqrt(8.0)));
}

struct EtaValue {
    cplx value;
    cplx derivative;  // only filled when requested
};

/// eta(s) (and optionally eta'(s)) with absolute error <= tol; valid for Re(s) > -1.
inline EtaValue eta_eval(cplx s, double tol, bool with_derivative = false) {
    if (!(s.real() > -1.0)) throw std::domain_error("eta: evaluator restricted to Re(s) > -1");
    // derivative error by Cauchy's estimate on a circle of radius 1/2
    const double radius = 0.5;
    const double height = std::abs(s.imag()) + (with_derivative ? radius : 0.0);
    const double target = with_derivative ? tol * radius : tol;
    const std::size_t n = borwein_terms(height, target);
    const auto& w = detail::borwein_weights(n);
    const auto& lg = detail::log_table(n);
    const double sigma = s.real(), t = s.imag();
    double re = 0.0, im = 0.0, dre = 0.0, dim = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double l = lg[k];
        const double mag = (k % 2 == 0 ? w[k] : -w[k]) * std::exp(-sigma * l);
        const double c = std::cos(t * l), sn = std::sin(t * l);
        re += mag * c;
        im -= mag * sn;
        if (with_derivative) {
            dre -= mag * l * c;
            dim += mag * l * sn;
        }
    }
    return {cplx(re, im), cplx(dre, dim)};
}

inline cplx eta(cplx s, double tol = 1e-12) { return eta_eval(s, tol).value; }

namespace detail {

inline cplx zeta_regular(cplx s, double tol) {
    const cplx factor = 1.0 - std::pow(cplx(2.0), 1.0 - s);
    return eta_eval(s, tol * std::abs(factor)).value / factor;
}

}  // namespace detail

/// zeta(s) = eta(s) / (1 - 2^{1-s}) for Re(s) > -1, s != 1.
inline cplx zeta(cplx s, double tol = 1e-12) {
    if (std::abs(s - 1.0) < 1e-13) throw std::domain_error("zeta: pole at s = 1");
    const cplx factor = 1.0 - std::pow(cplx(2.0), 1.0 - s);
    if (std::abs(factor) > 1e-3) return eta_eval(s, tol * std::abs(factor)).value / factor;
    // removable points 1 + 2 pi i k / log 2 (k != 0) or close to s = 1: mean over a small circle
    const double r = std::abs(s - 1.0) < 0.2 ? 0.5 * std::abs(s - 1.0) : 0.05;
    cplx acc = 0.0;
    const int points = 16;
    for (int i = 0; i < points; ++i) {
        const double th = 2.0 * std::numbers::pi * (i + 0.5) / points;
        acc += detail::zeta_regular(s + r * cplx(std::cos(th), std::sin(th)), tol);
    }
    if (std::abs(s - 1.0) < 0.2) {
        // subtract the pole part before averaging: zeta - 1/(s-1) is entire
        acc = 0.0;
        for (int i = 0; i < points; ++i) {
            const double th = 2.0 * std::numbers::pi * (i + 0.5) / points;
            const cplx p = s + r * cplx(std::cos(th), std::sin(th));
            acc += detail::zeta_regular(p, tol) - 1.0 / (p - 1.0);
        }
        return acc / static_cast<double>(points) + 1.0 / (s - 1.0);
    }
    return acc / static_cast<double>(points);
}

/// zeta(s) and zeta'(s), Re(s) > -1 and away from s = 1.
inline std::pair<cplx, cplx> zeta_with_derivative(cplx s, double tol = 1e-12) {
    if (std::abs(s - 1.0) < 1e-13) throw std::domain_error("zeta: pole at s = 1");
    const cplx two_pow = std::pow(cplx(2.0), 1.0 - s);
    const cplx factor = 1.0 - two_pow;
    if (std::abs(factor) < 1e-3) throw std::domain_error("zeta': too close to a zero of 1 - 2^{1-s}");
    const auto e = eta_eval(s, tol * std::abs(factor) * 0.5, true);
    const cplx z = e.value / factor;
    const cplx dz = (e.derivative - z * two_pow * std::numbers::ln2) / factor;
    return {z, dz};
}

}  // namespace smoothperron::zeta
