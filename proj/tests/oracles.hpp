#pragma once

// Independent reference computations used by the tests. Nothing here calls into the library's
// own evaluators, so agreement is a genuine cross-check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using cplx = std::complex<double>;

// zeta(s) by Euler-Maclaurin with N = 30 and 12 Bernoulli corrections.
inline cplx zeta_em(cplx s) {
    static const double B2k[] = {1.0 / 6,         -1.0 / 30,         1.0 / 42,         -1.0 / 30,
                                 5.0 / 66,        -691.0 / 2730,     7.0 / 6,          -3617.0 / 510,
                                 43867.0 / 798,   -174611.0 / 330,   854513.0 / 138,   -236364091.0 / 2730};
    const int N = 30;
    cplx sum = 0.0;
    for (int n = 1; n < N; ++n) sum += std::exp(-s * std::log(static_cast<double>(n)));
    const double lnN = std::log(static_cast<double>(N));
    const cplx Ns = std::exp(-s * lnN);
    sum += Ns * static_cast<double>(N) / (s - 1.0) + 0.5 * Ns;
    // sum_k B_2k/(2k)! * s(s+1)...(s+2k-2) N^{-s-2k+1}
    cplx rising = s;  // s (s+1) ... (s+2k-2)
    double fact = 2.0;  // (2k)!
    double Npow = 1.0 / N;
    for (int k = 1; k <= 12; ++k) {
        sum += B2k[k - 1] / fact * rising * Ns * Npow;
        rising *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
        fact *= static_cast<double>(2 * k + 1) * static_cast<double>(2 * k + 2);
        Npow /= static_cast<double>(N) * N;
    }
    return sum;
}

inline cplx eta_em(cplx s) { return (1.0 - std::pow(cplx(2.0), 1.0 - s)) * zeta_em(s); }

inline int mobius(std::uint64_t n) {
    int mu = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    return n > 1 ? -mu : mu;
}

inline double mangoldt(std::uint64_t n) {
    if (n < 2) return 0.0;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
    }
    return std::log(static_cast<double>(n));
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::uint64_t order_mod(std::uint64_t a, std::uint64_t q) {
    a %= q;
    std::uint64_t v = a, k = 1;
    while (v != 1) {
        v = v * a % q;
        ++k;
        if (k > q) return 0;
    }
    return k;
}

inline bool primitive_root_brute(std::uint64_t a, std::uint64_t q) { return a % q != 0 && order_mod(a, q) == q - 1; }

inline std::uint64_t phi(std::uint64_t n) {
    std::uint64_t c = 0;
    for (std::uint64_t k = 1; k <= n; ++k)
        if (std::gcd(k, n) == 1) ++c;
    return c;
}

// Ramanujan sum c_n(j) = sum_{1<=k<=n, (k,n)=1} e(jk/n), via mu(n/g) phi(n)/phi(n/g).
inline double ramanujan_sum(std::uint64_t n, std::uint64_t j) {
    const std::uint64_t g = std::gcd(j % n == 0 ? n : j % n, n);
    const std::uint64_t r = n / g;
    return static_cast<double>(mobius(r)) * static_cast<double>(phi(n)) / static_cast<double>(phi(r));
}

// Composite Gauss-Legendre (20 nodes) over [a,b] split into `panels` pieces.
inline double gl20(const std::function<double(double)>& f, double a, double b, int panels) {
    static const double x[10] = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
                                 0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
                                 0.9639719272779138, 0.9931285991850949};
    static const double w[10] = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
                                 0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
                                 0.0406014298003869, 0.0176140071391521};
    double total = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h, r = 0.5 * h;
        double acc = 0.0;
        for (int i = 0; i < 10; ++i) acc += w[i] * (f(c - r * x[i]) + f(c + r * x[i]));
        total += acc * r;
    }
    return total;
}

inline double trapezoid(const std::function<double(double)>& f, double a, double b, std::size_t nodes) {
    const double h = (b - a) / static_cast<double>(nodes - 1);
    double s = 0.5 * (f(a) + f(b));
    for (std::size_t i = 1; i + 1 < nodes; ++i) s += f(a + h * static_cast<double>(i));
    return s * h;
}


// Gamma(z) by the Lanczos approximation (g = 7, 9 terms), reflection for Re z < 1/2.
inline cplx gamma(cplx z) {
    static const double c[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                               771.32342877765313,   -176.61502916214059,   12.507343278686905,
                               -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    const double pi = std::numbers::pi;
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma(1.0 - z));
    z -= 1.0;
    cplx a = c[0];
    const cplx t = z + 7.5;
    for (int i = 1; i < 9; ++i) a += c[i] / (z + static_cast<double>(i));
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

// Transform of 1_{|t|<=H} convolved with m normalized boxes of half-width w.
inline double box_smoothed_fourier(double H, int m, double w, double u) {
    auto sinc = [](double v) { return v == 0.0 ? 1.0 : std::sin(v) / v; };
    const double pi = std::numbers::pi;
    return 2.0 * H * sinc(2.0 * pi * H * u) * std::pow(sinc(2.0 * pi * w * u), m);
}

using Rational = boost::multiprecision::cpp_rational;

// CDF of the Irwin-Hall law (sum of n uniforms on [0,1]), exactly.
inline Rational irwin_hall_cdf(int n, const Rational& x) {
    if (x <= 0) return 0;
    if (x >= n) return 1;
    Rational acc = 0, fact = 1, binom = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    for (int k = 0; k <= n && Rational(k) <= x; ++k) {
        Rational p = 1;
        for (int i = 0; i < n; ++i) p *= (x - k);
        acc += (k % 2 ? -binom : binom) * p;
        binom = binom * (n - k) / (k + 1);
    }
    return acc / fact;
}

// p_m(t; delta) = P(|t - S| <= 1 + delta/2), S a sum of m uniforms on [-delta/(2m), delta/(2m)].
inline Rational pm_exact(int m, const Rational& delta, const Rational& t) {
    const Rational H = 1 + delta / 2, w = delta / (2 * m);
    // S = 2w (IH - m/2)
    auto F = [&](const Rational& s) { return irwin_hall_cdf(m, s / (2 * w) + Rational(m, 2)); };
    return F(t + H) - F(t - H);
}

}  // namespace oracle
