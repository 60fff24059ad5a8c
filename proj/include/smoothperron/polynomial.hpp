#pragma once

// Exact rational polynomials and piecewise polynomials with compact support.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace smoothperron {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Parses "3", "-0.25", "1/3", "2.5e-1" into an exact rational.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Rational num = parse_rational(text.substr(0, slash));
        Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
        return num / den;
    }
    std::string mantissa = text;
    long exponent = 0;
    auto e = text.find_first_of("eE");
    if (e != std::string::npos) {
        mantissa = text.substr(0, e);
        exponent = std::stol(text.substr(e + 1));
    }
    bool negative = false;
    std::size_t pos = 0;
    if (pos < mantissa.size() && (mantissa[pos] == '-' || mantissa[pos] == '+')) {
        negative = mantissa[pos] == '-';
        ++pos;
    }
    boost::multiprecision::cpp_int digits = 0;
    long frac_digits = 0;
    bool seen_point = false, seen_digit = false;
    for (; pos < mantissa.size(); ++pos) {
        char c = mantissa[pos];
        if (c == '.' && !seen_point) {
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            digits = digits * 10 + (c - '0');
            seen_digit = true;
            if (seen_point) ++frac_digits;
        } else {
            throw std::invalid_argument("malformed rational literal '" + text + "'");
        }
    }
    if (!seen_digit) throw std::invalid_argument("malformed rational literal '" + text + "'");
    exponent -= frac_digits;
    Rational value(digits);
    boost::multiprecision::cpp_int scale = boost::multiprecision::pow(boost::multiprecision::cpp_int(10),
                                                                      static_cast<unsigned>(std::labs(exponent)));
    value = exponent >= 0 ? value * Rational(scale) : value / Rational(scale);
    return negative ? -value : value;
}

// Exact conversion of a finite double (a dyadic rational).
inline Rational rational_from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value cannot be converted to a rational");
    int exp = 0;
    double frac = std::frexp(v, &exp);
    // frac * 2^53 is an integer
    auto mant = static_cast<long long>(std::ldexp(frac, 53));
    Rational r(mant);
    exp -= 53;
    boost::multiprecision::cpp_int p2 = boost::multiprecision::cpp_int(1) << std::abs(exp);
    return exp >= 0 ? r * Rational(p2) : r / Rational(p2);
}

/// Polynomial with exact rational coefficients, coeffs[k] multiplies x^k.
class RationalPoly {
public:
    RationalPoly() = default;
    explicit RationalPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
    static RationalPoly constant(const Rational& c) { return RationalPoly({c}); }

    const std::vector<Rational>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    Rational coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

    Rational operator()(const Rational& x) const {
        Rational acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    RationalPoly derivative() const {
        std::vector<Rational> d;
        for (std::size_t k = 1; k < coeffs_.size(); ++k) d.push_back(coeffs_[k] * static_cast<long>(k));
        return RationalPoly(std::move(d));
    }

    // Antiderivative vanishing at 0.
    RationalPoly antiderivative() const {
        std::vector<Rational> a(coeffs_.size() + 1);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) a[k + 1] = coeffs_[k] / static_cast<long>(k + 1);
        return RationalPoly(std::move(a));
    }

    // q(x) = p(x + shift)
    RationalPoly shifted(const Rational& shift) const {
        std::vector<Rational> out(coeffs_.size());
        // Horner in polynomial arithmetic: out = (...(c_n)(x+s) + c_{n-1})...
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            std::vector<Rational> next(out.size());
            for (std::size_t k = 0; k + 1 < out.size(); ++k) {
                next[k + 1] += out[k];
                next[k] += out[k] * shift;
            }
            next[0] += *it;
            out = std::move(next);
        }
        return RationalPoly(std::move(out));
    }

    friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
        std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) + b.coeff(k);
        return RationalPoly(std::move(c));
    }
    friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
        std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) - b.coeff(k);
        return RationalPoly(std::move(c));
    }
    friend RationalPoly operator*(const Rational& s, const RationalPoly& p) {
        std::vector<Rational> c(p.coeffs_);
        for (auto& v : c) v *= s;
        return RationalPoly(std::move(c));
    }
    friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.coeffs_ == b.coeffs_; }

    std::vector<double> to_double_coeffs() const {
        std::vector<double> out;
        out.reserve(coeffs_.size());
        for (const auto& c : coeffs_) out.push_back(to_double(c));
        return out;
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }
    std::vector<Rational> coeffs_;
};

template <class T>
T horner(const std::vector<double>& coeffs, T x) {
    T acc = T(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + T(*it);
    return acc;
}

/// Compactly supported piecewise polynomial in the global variable t.
/// polys[j] is valid on [breaks[j], breaks[j+1]); the function is 0 outside [breaks.front(), breaks.back()).
struct PiecewisePoly {
    std::vector<Rational> breaks;
    std::vector<RationalPoly> polys;

    static PiecewisePoly box(const Rational& halfwidth, const Rational& height) {
        return PiecewisePoly{{-halfwidth, halfwidth}, {RationalPoly::constant(height)}};
    }

    Rational integral() const {
        Rational total = 0;
        for (std::size_t j = 0; j < polys.size(); ++j) {
            auto a = polys[j].antiderivative();
            total += a(breaks[j + 1]) - a(breaks[j]);
        }
        return total;
    }

    // Merges neighbours carrying the same polynomial and drops empty or zero boundary pieces.
    void normalize() {
        std::vector<Rational> b{breaks.front()};
        std::vector<RationalPoly> p;
        for (std::size_t j = 0; j < polys.size(); ++j) {
            if (breaks[j + 1] == breaks[j]) continue;
            if (!p.empty() && p.back() == polys[j]) {
                b.back() = breaks[j + 1];
            } else {
                p.push_back(polys[j]);
                b.push_back(breaks[j + 1]);
            }
        }
        while (!p.empty() && p.front().is_zero()) {
            p.erase(p.begin());
            b.erase(b.begin());
        }
        while (!p.empty() && p.back().is_zero()) {
            p.pop_back();
            b.pop_back();
        }
        breaks = std::move(b);
        polys = std::move(p);
    }
};

// (f * (1/(2h)) 1_{[-h,h]})(t) = (F(t+h) - F(t-h)) / (2h), F the antiderivative of f.
inline PiecewisePoly convolve_with_normalized_box(const PiecewisePoly& f, const Rational& h) {
    const std::size_t r = f.polys.size();
    // antiderivative pieces, continuous, F = 0 left of support
    std::vector<RationalPoly> anti(r);
    Rational running = 0;
    for (std::size_t j = 0; j < r; ++j) {
        auto a = f.polys[j].antiderivative();
        anti[j] = a + RationalPoly::constant(running - a(f.breaks[j]));
        running = anti[j](f.breaks[j + 1]);
    }
    const Rational total = running;
    auto piece_at = [&](const Rational& t) -> RationalPoly {
        if (t < f.breaks.front()) return RationalPoly{};
        if (t >= f.breaks.back()) return RationalPoly::constant(total);
        auto it = std::upper_bound(f.breaks.begin(), f.breaks.end(), t);
        return anti[static_cast<std::size_t>(it - f.breaks.begin()) - 1];
    };

    std::vector<Rational> nb;
    for (const auto& b : f.breaks) {
        nb.push_back(b - h);
        nb.push_back(b + h);
    }
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());

    PiecewisePoly out;
    out.breaks = nb;
    const Rational scale = Rational(1) / (2 * h);
    for (std::size_t k = 0; k + 1 < nb.size(); ++k) {
        Rational mid = (nb[k] + nb[k + 1]) / 2;
        RationalPoly plus = piece_at(mid + h).shifted(h);
        RationalPoly minus = piece_at(mid - h).shifted(-h);
        out.polys.push_back(scale * (plus - minus));
    }
    out.normalize();
    return out;
}

}  // namespace smoothperron
