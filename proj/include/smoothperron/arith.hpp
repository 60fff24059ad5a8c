#pragma once

// Sieves for mu, Lambda and primes; Miller-Rabin; primitive roots; Dirichlet characters modulo a
// prime realized through a discrete-log table; coefficients of the primitive-root indicator.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <new>
#include <numeric>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace smoothperron {

class AllocationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace arith {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

/// Deterministic for all 64-bit n (first twelve prime bases).
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Distinct prime factors by trial division.
inline std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t r = n;
    for (auto p : distinct_prime_factors(n)) r = r / p * (p - 1);
    return r;
}

inline int mobius_trial(std::uint64_t n) {
    int mu = 1;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

inline double mangoldt_trial(std::uint64_t n) {
    if (n < 2) return 0.0;
    auto f = distinct_prime_factors(n);
    return f.size() == 1 ? std::log(static_cast<double>(f[0])) : 0.0;
}

}  // namespace arith

/// mu, Lambda and smallest-prime-factor tables for 1 <= n <= limit.
struct SieveTables {
    std::uint64_t limit = 0;
    std::vector<std::int8_t> mobius;                // index n
    std::vector<std::uint32_t> smallest_prime_factor;  // index n, spf[1] = 1
    std::vector<std::uint32_t> primes;

    int mu(std::uint64_t n) const { return n <= limit ? mobius[n] : arith::mobius_trial(n); }

    /// Lambda(n) = log p if n = p^k, else 0.
    double mangoldt(std::uint64_t n) const {
        if (n < 2) return 0.0;
        if (n > limit) return arith::mangoldt_trial(n);
        std::uint64_t p = smallest_prime_factor[n];
        while (n % p == 0) n /= p;
        return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
    }

    bool is_prime(std::uint64_t n) const {
        return n <= limit ? (n >= 2 && smallest_prime_factor[n] == n) : arith::is_prime(n);
    }
};

inline constexpr std::uint64_t kSieveMaxLimit = 100'000'000;
inline constexpr std::uint64_t kSieveSegmentThreshold = 10'000'000;

namespace detail {

inline void linear_sieve(SieveTables& t) {
    const std::uint64_t n = t.limit;
    t.mobius[1] = 1;
    t.smallest_prime_factor[1] = 1;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (t.smallest_prime_factor[i] == 0) {
            t.smallest_prime_factor[i] = static_cast<std::uint32_t>(i);
            t.mobius[i] = -1;
            t.primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : t.primes) {
            std::uint64_t ip = i * p;
            if (p > t.smallest_prime_factor[i] || ip > n) break;
            t.smallest_prime_factor[ip] = p;
            t.mobius[ip] = (i % p == 0) ? 0 : static_cast<std::int8_t>(-t.mobius[i]);
        }
    }
}

// Segment-by-segment Eratosthenes for large limits: spf by marking with increasing primes,
// mu from the accumulated product of marked primes.
inline void segmented_sieve(SieveTables& t) {
    const std::uint64_t n = t.limit;
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n))) + 1;
    SieveTables small;
    small.limit = root;
    small.mobius.assign(root + 1, 0);
    small.smallest_prime_factor.assign(root + 1, 0);
    linear_sieve(small);
    const std::uint64_t segment = 1 << 18;
    std::vector<std::uint64_t> residual(segment);
    t.mobius[1] = 1;
    t.smallest_prime_factor[1] = 1;
    for (std::uint64_t lo = 2; lo <= n; lo += segment) {
        const std::uint64_t hi = std::min(n, lo + segment - 1);
        for (std::uint64_t v = lo; v <= hi; ++v) {
            residual[v - lo] = v;
            t.mobius[v] = 1;
        }
        for (std::uint32_t p : small.primes) {
            const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
            if (pp > hi) break;
            std::uint64_t start = std::max<std::uint64_t>(pp, (lo + p - 1) / p * p);
            for (std::uint64_t v = start; v <= hi; v += p) {
                if (t.smallest_prime_factor[v] == 0) t.smallest_prime_factor[v] = p;
                std::uint64_t& r = residual[v - lo];
                r /= p;
                if (r % p == 0) {
                    t.mobius[v] = 0;
                    while (r % p == 0) r /= p;
                } else if (t.mobius[v] != 0) {
                    t.mobius[v] = static_cast<std::int8_t>(-t.mobius[v]);
                }
            }
        }
        for (std::uint64_t v = lo; v <= hi; ++v) {
            std::uint64_t r = residual[v - lo];
            if (r > 1) {
                // one prime factor > sqrt(v) remains
                if (t.mobius[v] != 0) t.mobius[v] = static_cast<std::int8_t>(-t.mobius[v]);
                if (t.smallest_prime_factor[v] == 0) {
                    t.smallest_prime_factor[v] = static_cast<std::uint32_t>(r);
                    if (r == v) t.primes.push_back(static_cast<std::uint32_t>(v));
                }
            }
        }
    }
}

}  // namespace detail

inline SieveTables build_sieve(std::uint64_t limit) {
    if (limit < 2) throw std::invalid_argument("build_sieve: limit must be >= 2");
    if (limit > kSieveMaxLimit) throw std::invalid_argument("build_sieve: limit exceeds 1e8");
    SieveTables t;
    t.limit = limit;
    try {
        t.mobius.assign(limit + 1, 0);
        t.smallest_prime_factor.assign(limit + 1, 0);
        t.primes.reserve(static_cast<std::size_t>(1.3 * static_cast<double>(limit) / std::log(static_cast<double>(limit))) + 16);
    } catch (const std::bad_alloc&) {
        throw AllocationError("build_sieve: cannot allocate tables for limit " + std::to_string(limit));
    }
    if (limit <= kSieveSegmentThreshold)
        detail::linear_sieve(t);
    else
        detail::segmented_sieve(t);
    return t;
}

/// Primes p with lo < p <= hi (segmented over the interval).
inline std::vector<std::uint64_t> primes_in_interval(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    if (hi <= lo || hi < 2) return out;
    const std::uint64_t start = std::max<std::uint64_t>(lo + 1, 2);
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 1;
    std::vector<std::uint32_t> small;
    {
        std::vector<bool> comp(root + 1, false);
        for (std::uint64_t i = 2; i <= root; ++i) {
            if (comp[i]) continue;
            small.push_back(static_cast<std::uint32_t>(i));
            for (std::uint64_t j = i * i; j <= root; j += i) comp[j] = true;
        }
    }
    std::vector<bool> comp(hi - start + 1, false);
    for (std::uint64_t p : small) {
        if (p * p > hi) break;
        std::uint64_t s = std::max(p * p, (start + p - 1) / p * p);
        for (std::uint64_t v = s; v <= hi; v += p) comp[v - start] = true;
    }
    for (std::uint64_t v = start; v <= hi; ++v)
        if (!comp[v - start]) out.push_back(v);
    return out;
}

/// mu(n) for lo < n <= hi, index n - lo - 1.
inline std::vector<int> mobius_in_interval(std::uint64_t lo, std::uint64_t hi) {
    std::vector<int> mu;
    if (hi <= lo) return mu;
    const std::uint64_t len = hi - lo;
    mu.assign(len, 1);
    std::vector<std::uint64_t> residual(len);
    for (std::uint64_t i = 0; i < len; ++i) residual[i] = lo + 1 + i;
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 1;
    for (std::uint64_t p : primes_in_interval(1, root)) {
        std::uint64_t s = (lo + 1 + p - 1) / p * p;
        for (std::uint64_t v = s; v <= hi; v += p) {
            auto& r = residual[v - lo - 1];
            r /= p;
            if (r % p == 0) {
                mu[v - lo - 1] = 0;
                while (r % p == 0) r /= p;
            } else {
                mu[v - lo - 1] = -mu[v - lo - 1];
            }
        }
    }
    for (std::uint64_t i = 0; i < len; ++i)
        if (residual[i] > 1 && mu[i] != 0) mu[i] = -mu[i];
    return mu;
}

/// Lambda(n) for lo < n <= hi, index n - lo - 1.
inline std::vector<double> mangoldt_in_interval(std::uint64_t lo, std::uint64_t hi) {
    std::vector<double> lam;
    if (hi <= lo) return lam;
    lam.assign(hi - lo, 0.0);
    for (std::uint64_t p : primes_in_interval(lo, hi)) lam[p - lo - 1] = std::log(static_cast<double>(p));
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 1;
    for (std::uint64_t p : primes_in_interval(1, root)) {
        const double lp = std::log(static_cast<double>(p));
        for (std::uint64_t v = p * p; v <= hi; v *= p) {
            if (v > lo) lam[v - lo - 1] = lp;
            if (v > hi / p) break;
        }
    }
    return lam;
}

/// Primitive-root test for a fixed prime q with the prime factors of q-1 cached.
class PrimitiveRootTester {
public:
    explicit PrimitiveRootTester(std::uint64_t q) : q_(q) {
        if (q < 2 || !arith::is_prime(q)) throw std::invalid_argument("q must be prime");
        for (auto p : arith::distinct_prime_factors(q - 1)) exponents_.push_back((q - 1) / p);
    }
    std::uint64_t modulus() const { return q_; }
    /// true iff a^{(q-1)/p} != 1 mod q for every prime p | q-1
    bool operator()(std::uint64_t a) const {
        a %= q_;
        if (a == 0) return false;
        if (q_ == 2) return a == 1;
        for (auto e : exponents_)
            if (arith::powmod(a, e, q_) == 1) return false;
        return true;
    }

private:
    std::uint64_t q_;
    std::vector<std::uint64_t> exponents_;
};

inline bool is_primitive_root(std::uint64_t a, std::uint64_t q) {
    if (q < 2 || !arith::is_prime(q)) throw std::invalid_argument("is_primitive_root: q must be prime");
    if (a % q == 0) throw std::invalid_argument("is_primitive_root: a must be coprime to q");
    return PrimitiveRootTester(q)(a);
}

/// Characters chi_j(a) = e(j dlog(a) / (q-1)) modulo a prime q, j = 0..q-2.
struct CharacterTable {
    std::uint64_t q = 0;
    std::uint64_t generator = 0;
    std::vector<std::uint32_t> dlog;  // dlog[a] for 1 <= a < q; dlog[0] unused
    std::uint64_t order = 0;

    /// e(r / order) for an integer r
    std::complex<double> root_of_unity(std::uint64_t r) const {
        r %= order;
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(order);
        return {std::cos(angle), std::sin(angle)};
    }

    std::complex<double> chi(std::uint64_t j, std::uint64_t n) const {
        const std::uint64_t a = n % q;
        if (a == 0) return {0.0, 0.0};
        return root_of_unity((j % order) * dlog[a]);
    }

    /// chi_j is real iff j = 0 or j = (q-1)/2
    bool is_real(std::uint64_t j) const { return j % order == 0 || 2 * (j % order) == order; }
};

inline CharacterTable build_characters(std::uint64_t q) {
    if (q < 3) throw std::invalid_argument("build_characters: q must be a prime >= 3");
    if (q >= (1ULL << 32)) throw std::invalid_argument("build_characters: q must be < 2^32");
    if (!arith::is_prime(q)) throw std::invalid_argument("build_characters: q = " + std::to_string(q) + " is not prime");
    CharacterTable t;
    t.q = q;
    t.order = q - 1;
    PrimitiveRootTester test(q);
    for (std::uint64_t g = 2; g < q; ++g) {
        if (test(g)) {
            t.generator = g;
            break;
        }
    }
    if (q == 3) t.generator = 2;
    t.dlog.assign(q, 0);
    std::uint64_t v = 1;
    for (std::uint64_t k = 0; k < q - 1; ++k) {
        t.dlog[v] = static_cast<std::uint32_t>(k);
        v = v * t.generator % q;
    }
    return t;
}

struct IndicatorCoefficients {
    std::uint64_t q = 0;
    std::vector<std::complex<double>> c;  // c_q(chi_j), j = 0..q-2
    std::uint64_t pr_count = 0;           // |U_q| = phi(q-1)
};

/// c_q(chi) = (1/phi(q)) sum_{a in U_q} conj(chi(a)), by direct summation over the primitive roots.
inline IndicatorCoefficients indicator_coeffs(const CharacterTable& t) {
    IndicatorCoefficients out;
    out.q = t.q;
    out.c.assign(t.order, {0.0, 0.0});
    // a = g^k is a primitive root iff gcd(k, q-1) = 1
    std::vector<std::uint64_t> pr_logs;
    for (std::uint64_t k = 0; k < t.order; ++k)
        if (std::gcd(k, t.order) == 1) pr_logs.push_back(k);
    out.pr_count = pr_logs.size();
    const double inv = 1.0 / static_cast<double>(t.order);
    for (std::uint64_t j = 0; j < t.order; ++j) {
        std::complex<double> acc{0.0, 0.0};
        for (auto k : pr_logs) acc += std::conj(t.root_of_unity(j * k));
        out.c[j] = acc * inv;
    }
    return out;
}

/// sum_j c_q(chi_j) chi_j(n): the primitive-root indicator of n mod q when (n,q)=1.
inline std::complex<double> reconstruct_indicator(const CharacterTable& t, const IndicatorCoefficients& c,
                                                  std::uint64_t n) {
    std::complex<double> acc{0.0, 0.0};
    for (std::uint64_t j = 0; j < t.order; ++j) acc += c.c[j] * t.chi(j, n);
    return acc;
}

}  // namespace smoothperron
