#pragma once

// Dirichlet series F(s) = sum a_n n^{-s}: coefficient streams, partial sums, Cahen bounds and
// evaluation at complex points.

#include "smoothperron/arith.hpp"
#include "smoothperron/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace smoothperron {

using cplx = std::complex<double>;

enum class CoefficientKind {
    general,
    nonnegative,             // a_n >= 0: partial sums at sigma increase to F(sigma)
    alternating_decreasing,  // (-1)^{n+1} times a positive decreasing sequence
    zero,
};

struct Pole {
    cplx location;
    cplx residue;
};

struct SeriesDescriptor {
    std::string name;
    // fills out[i] = a_{lo+1+i} for lo < n <= hi
    std::function<void(std::uint64_t lo, std::uint64_t hi, std::vector<cplx>& out)> block;
    double sigma_c = 1.0;
    double sigma_a = 1.0;
    std::vector<Pole> poles;
    // F(s) with absolute error <= tol, valid for Re(s) > evaluator_min_re
    std::function<cplx(cplx s, double tol)> evaluator;
    double evaluator_min_re = std::numeric_limits<double>::infinity();
    CoefficientKind kind = CoefficientKind::general;
    bool real_coefficients = true;
    // |a_n| <= coeff_bound * (log n)^coeff_log_power
    double coeff_bound = 1.0;
    int coeff_log_power = 0;

    double sigma_0() const { return std::max(0.0, sigma_c); }

    cplx coeff(std::uint64_t n) const {
        if (n == 0) return 0.0;
        std::vector<cplx> v;
        block(n - 1, n, v);
        return v[0];
    }

    bool has_evaluator(cplx s) const { return static_cast<bool>(evaluator) && s.real() > evaluator_min_re; }

    /// Upper bound for sum_{n>N} |a_n| n^{-sigma}, sigma > 1 (infinite otherwise).
    double tail_envelope(double N, double sigma) const {
        if (kind == CoefficientKind::zero) return 0.0;
        if (!(sigma > 1.0)) return std::numeric_limits<double>::infinity();
        N = std::max(N, 3.0);
        const double a = sigma - 1.0;
        const double p = std::pow(N, -a);
        if (coeff_log_power == 0) return coeff_bound * p / a;
        // int_N^inf log(u) u^{-sigma} du, log(u)/u^sigma decreasing for u >= 3 > e^{1/sigma}
        return coeff_bound * p * (std::log(N) / a + 1.0 / (a * a));
    }
};

namespace detail {

inline constexpr std::uint64_t kBlock = 1u << 16;

template <class F>
void for_each_block(const SeriesDescriptor& d, std::uint64_t n_max, F&& f) {
    std::vector<cplx> buf;
    for (std::uint64_t lo = 0; lo < n_max; lo += kBlock) {
        const std::uint64_t hi = std::min(n_max, lo + kBlock);
        d.block(lo, hi, buf);
        f(lo, buf);
    }
}

// Neumaier-compensated complex accumulator
struct Accumulator {
    double re = 0, im = 0, cre = 0, cim = 0;
    static void add1(double& s, double& c, double v) {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v)) c += (s - t) + v;
        else c += (v - t) + s;
        s = t;
    }
    void add(cplx v) {
        add1(re, cre, v.real());
        add1(im, cim, v.imag());
    }
    cplx value() const { return {re + cre, im + cim}; }
};

inline cplx zeta_checked(cplx s, double tol) { return zeta::zeta(s, tol); }

// 1/zeta(s) for Re s > 1: |zeta(s)| >= zeta(2 sigma)/zeta(sigma)
inline cplx inverse_zeta(cplx s, double tol) {
    const double sg = s.real();
    const double lower = zeta::zeta(cplx(2.0 * sg), 1e-14).real() / zeta::zeta(cplx(sg), 1e-14).real();
    return 1.0 / zeta::zeta(s, 0.5 * tol * lower * lower);
}

// -zeta'/zeta for Re s > 1
inline cplx log_derivative_zeta(cplx s, double tol) {
    const double sg = s.real();
    const double lower = zeta::zeta(cplx(2.0 * sg), 1e-14).real() / zeta::zeta(cplx(sg), 1e-14).real();
    auto [z0, dz0] = zeta::zeta_with_derivative(cplx(sg), 1e-14);
    const double dmax = std::abs(dz0.real());  // |zeta'(s)| <= -zeta'(sigma)
    const double ztol = 0.25 * tol * lower * lower / (1.0 + dmax);
    auto [z, dz] = zeta::zeta_with_derivative(s, std::min(ztol, 0.25 * tol * lower));
    return -dz / z;
}

}  // namespace detail

namespace series {

inline SeriesDescriptor ones() {
    SeriesDescriptor d;
    d.name = "ones";
    d.block = [](std::uint64_t lo, std::uint64_t hi, std::vector<cplx>& out) { out.assign(hi - lo, 1.0); };
    d.sigma_c = d.sigma_a = 1.0;
    d.poles = {{1.0, 1.0}};
    d.evaluator = detail::zeta_checked;
    d.evaluator_min_re = -1.0;
    d.kind = CoefficientKind::nonnegative;
    return d;
}

inline SeriesDescriptor eta() {
    SeriesDescriptor d;
    d.name = "eta";
    d.block = [](std::uint64_t lo, std::uint64_t hi, std::vector<cplx>& out) {
        out.resize(hi - lo);
        for (std::uint64_t n = lo + 1; n <= hi; ++n) out[n - lo - 1] = (n % 2 == 1) ? 1.0 : -1.0;
    };
    d.sigma_c = 0.0;
    d.sigma_a = 1.0;
    d.evaluator = [](cplx s, double tol) { return zeta::eta(s, tol); };
    d.evaluator_min_re = -1.0;
    d.kind = CoefficientKind::alternating_decreasing;
    return d;
}

inline SeriesDescriptor mobius() {
    SeriesDescriptor d;
    d.name = "mobius";
    d.block = [](std::uint64_t lo, std::uint64_t hi, std::vector<cplx>& out) {
        auto mu = mobius_in_interval(lo, hi);
        out.resize(mu.size());
        for (std::size_t i = 0; i < mu.size(); ++i) out[i] = static_cast<double>(mu[i]);
    };
    d.sigma_c = d.sigma_a = 1.0;
    d.evaluator = detail::inverse_zeta;
    d.evaluator_min_re = 1.0;
    return d;
}

inline SeriesDescriptor mangoldt() {
    SeriesDescriptor d;
    d.name = "mangoldt";
    d.block = [](std::uint64_t lo, std::uint64_t hi, std::vector<cplx>& out) {
        auto lam = mangoldt_in_interval(lo, hi);
        out.assign(lam.begin(), lam.end());
    };
    d.sigma_c = d.sigma_a = 1.0;
    d.poles = {{1.0, 1.0}};
    d.evaluator = detail::log_derivative_zeta;
    d.evaluator_min_re = 1.0;
    d.kind = CoefficientKind::nonnegative;
    d.coeff_log_power = 1;
    return d;
}

inline SeriesDescriptor zero() {
    SeriesDescriptor d;
    d.name = "zero";
    d.block = [](std::uint64_t lo, std::uint64_t hi, std::vector<cplx>& out) { out.assign(hi - lo, 0.0); };
    d.sigma_c = d.sigma_a = 0.0;
    d.evaluator = [](cplx, double) { return cplx(0.0); };
    d.evaluator_min_re = -std::numeric_limits<double>::infinity();
    d.kind = CoefficientKind::zero;
    d.coeff_bound = 0.0;
    return d;
}

/// b_n chi_j(n) with b the mobius or mangoldt stream; no evaluator.
inline SeriesDescriptor twisted(const std::string& base, std::shared_ptr<const CharacterTable> table,
                                std::uint64_t j) {
    SeriesDescriptor b;
    if (base == "mobius") b = mobius();
    else if (base == "mangoldt") b = mangoldt();
    else throw std::invalid_argument("twisted: base must be mobius or mangoldt, got '" + base + "'");
    if (!table) throw std::invalid_argument("twisted: missing character table");
    j %= table->order;
    SeriesDescriptor d;
    d.name = "twisted:" + base + ":" + std::to_string(table->q) + ":" + std::to_string(j);
    d.block = [inner = b.block, table, j](std::uint64_t lo, std::uint64_t hi, std::vector<cplx>& out) {
        inner(lo, hi, out);
        for (std::uint64_t n = lo + 1; n <= hi; ++n) out[n - lo - 1] *= table->chi(j, n);
    };
    d.sigma_c = d.sigma_a = 1.0;
    d.kind = (j == 0 && base == "mangoldt") ? CoefficientKind::nonnegative : CoefficientKind::general;
    d.real_coefficients = table->is_real(j);
    d.coeff_log_power = b.coeff_log_power;
    return d;
}

inline SeriesDescriptor twisted(const std::string& base, const CharacterTable& table, std::uint64_t j) {
    return twisted(base, std::make_shared<const CharacterTable>(table), j);
}

}  // namespace series

/// ones | eta | mobius | mangoldt | zero | twisted:<mobius|mangoldt>:<q>:<j>
inline SeriesDescriptor catalog(const std::string& name) {
    if (name == "ones") return series::ones();
    if (name == "eta") return series::eta();
    if (name == "mobius") return series::mobius();
    if (name == "mangoldt") return series::mangoldt();
    if (name == "zero") return series::zero();
    if (name.rfind("twisted:", 0) == 0) {
        std::vector<std::string> parts;
        std::stringstream ss(name);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() != 4) throw std::invalid_argument("catalog: expected twisted:<base>:<q>:<j>, got '" + name + "'");
        std::uint64_t q = 0, j = 0;
        try {
            q = std::stoull(parts[2]);
            j = std::stoull(parts[3]);
        } catch (const std::exception&) {
            throw std::invalid_argument("catalog: bad modulus or character index in '" + name + "'");
        }
        return series::twisted(parts[1], std::make_shared<const CharacterTable>(build_characters(q)), j);
    }
    throw std::invalid_argument("catalog: unknown series '" + name + "'");
}

/// sum_{n <= x} a_n
inline cplx partial_sum(const SeriesDescriptor& d, double x) {
    if (!(x >= 0)) throw std::invalid_argument("partial_sum: x must be >= 0");
    const auto n_max = static_cast<std::uint64_t>(std::floor(x));
    detail::Accumulator acc;
    detail::for_each_block(d, n_max, [&](std::uint64_t, const std::vector<cplx>& v) {
        for (const auto& a : v) acc.add(a);
    });
    return acc.value();
}

/// A(n) = sum_{k<=n} a_k for n = 0..n_max
inline std::vector<cplx> partial_sums_table(const SeriesDescriptor& d, std::uint64_t n_max) {
    std::vector<cplx> out(n_max + 1, 0.0);
    detail::Accumulator acc;
    detail::for_each_block(d, n_max, [&](std::uint64_t lo, const std::vector<cplx>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            acc.add(v[i]);
            out[lo + 1 + i] = acc.value();
        }
    });
    return out;
}

struct CahenBound {
    double sigma = 0.0;
    double value = 0.0;  // B(sigma)
    std::uint64_t n_max_searched = 0;
    bool certified = false;
    double running_max = 0.0;  // max_{N <= n_max} |sum_{n<=N} a_n n^{-sigma}|
    // rigorous upper bound for the full supremum, when one is available
    std::optional<double> certified_upper;
    std::string method;
};

inline cplx eval_F(const SeriesDescriptor& d, cplx s, double tol = 1e-10);

/// B(sigma) = sup_N |sum_{n<=N} a_n n^{-sigma}|.
inline CahenBound cahen_bound(const SeriesDescriptor& d, double sigma, std::uint64_t n_max = 1'000'000) {
    if (!(sigma > d.sigma_0()))
        throw std::invalid_argument("cahen_bound: sigma must exceed sigma_0 = " + std::to_string(d.sigma_0()));
    if (n_max < 1) throw std::invalid_argument("cahen_bound: n_max must be >= 1");
    CahenBound out;
    out.sigma = sigma;
    out.n_max_searched = n_max;
    if (d.kind == CoefficientKind::zero) {
        out.certified = true;
        out.certified_upper = 0.0;
        out.method = "zero stream";
        return out;
    }
    detail::Accumulator acc;
    double best = 0.0;
    detail::for_each_block(d, n_max, [&](std::uint64_t lo, const std::vector<cplx>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == cplx(0.0)) continue;
            const double n = static_cast<double>(lo + 1 + i);
            acc.add(v[i] * std::exp(-sigma * std::log(n)));
            best = std::max(best, std::abs(acc.value()));
        }
    });
    out.running_max = best;
    out.value = best;
    switch (d.kind) {
        case CoefficientKind::nonnegative: {
            // the supremum is the limit F(sigma)
            double limit = std::numeric_limits<double>::quiet_NaN();
            if (d.has_evaluator(cplx(sigma))) limit = eval_F(d, cplx(sigma), 1e-12).real();
            if (std::isfinite(limit)) {
                out.value = std::max(best, limit);
                out.method = "nonnegative coefficients: limit F(sigma)";
            } else {
                out.value = best + d.tail_envelope(static_cast<double>(n_max), sigma);
                out.method = "nonnegative coefficients: partial sum plus tail envelope";
            }
            out.certified = std::isfinite(out.value);
            if (out.certified) out.certified_upper = out.value;
            break;
        }
        case CoefficientKind::alternating_decreasing: {
            // partial sums stay between S_2 and S_1 = |a_1|
            out.value = std::abs(d.coeff(1));
            out.certified = true;
            out.certified_upper = out.value;
            out.method = "alternating decreasing terms: sup at N = 1";
            break;
        }
        default: {
            out.method = "running maximum over N <= n_max";
            const double tail = d.tail_envelope(static_cast<double>(n_max), sigma);
            if (std::isfinite(tail)) out.certified_upper = best + tail;
            break;
        }
    }
    return out;
}

namespace detail {

inline constexpr double kDirectTermCap = 2e6;

// smallest N with tail_envelope(N, sigma) <= tol, or nothing if above the cap
inline std::optional<std::uint64_t> direct_terms(const SeriesDescriptor& d, double sigma, double tol) {
    if (!(sigma > d.sigma_a) || !(sigma > 1.0)) return std::nullopt;
    if (d.tail_envelope(kDirectTermCap, sigma) > tol) return std::nullopt;
    double lo = 3.0, hi = kDirectTermCap;
    if (d.tail_envelope(lo, sigma) <= tol) return static_cast<std::uint64_t>(lo);
    while (hi - lo > 1.0) {
        const double mid = std::floor(0.5 * (lo + hi));
        if (d.tail_envelope(mid, sigma) <= tol) hi = mid;
        else lo = mid;
    }
    return static_cast<std::uint64_t>(hi);
}

}  // namespace detail

/// F(s) with |error| <= tol: direct summation when the tail envelope is cheap to beat,
/// otherwise the descriptor's evaluator.
inline cplx eval_F(const SeriesDescriptor& d, cplx s, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("eval_F: tol must be positive");
    for (const auto& p : d.poles)
        if (std::abs(s - p.location) < 1e-12)
            throw std::domain_error("eval_F: s is a pole of " + d.name);
    const auto direct = detail::direct_terms(d, s.real(), 0.5 * tol);
    const bool use_direct = direct && (!d.has_evaluator(s) || *direct <= 200'000);
    if (use_direct) {
        detail::Accumulator acc;
        detail::for_each_block(d, *direct, [&](std::uint64_t lo, const std::vector<cplx>& v) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (v[i] == cplx(0.0)) continue;
                const double n = static_cast<double>(lo + 1 + i);
                acc.add(v[i] * std::exp(-s * std::log(n)));
            }
        });
        return acc.value();
    }
    if (d.has_evaluator(s)) return d.evaluator(s, tol);
    std::ostringstream msg;
    msg << "eval_F: no method for " << d.name << " at s = " << s.real() << (s.imag() < 0 ? " - " : " + ")
        << std::abs(s.imag()) << "i (sigma_a = " << d.sigma_a << ")";
    throw std::domain_error(msg.str());
}

}  // namespace smoothperron
