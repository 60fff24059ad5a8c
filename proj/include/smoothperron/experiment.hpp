#pragma once

// Prime primitive roots in short intervals (x, x+y] for prime moduli q in [Q, 2Q]: observed
// weighted counts against the density phi(q-1)/(q-1).

#include "smoothperron/arith.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace smoothperron {

enum class Weight {
    logp,             // log p on primes
    mobius,           // mu(p) = -1 on primes
    unweighted,       // 1 on primes
    mobius_integers,  // mu(n) on all integers of the interval
};

inline std::string to_string(Weight w) {
    switch (w) {
        case Weight::logp: return "logp";
        case Weight::mobius: return "mobius";
        case Weight::unweighted: return "unweighted";
        case Weight::mobius_integers: return "mobius_integers";
    }
    return "?";
}

inline Weight parse_weight(const std::string& s) {
    if (s == "logp") return Weight::logp;
    if (s == "mobius") return Weight::mobius;
    if (s == "unweighted") return Weight::unweighted;
    if (s == "mobius_integers") return Weight::mobius_integers;
    throw std::invalid_argument("unknown weight '" + s + "' (logp|mobius|unweighted|mobius_integers)");
}

struct ExperimentConfig {
    std::uint64_t Q = 100;
    double delta = 1.0 / 3.0;
    double theta = 0.25;
    double x = -1.0;  // < 0: Q^{3/2+theta}
    Weight weight = Weight::logp;
    double threshold = 0.1;  // rel_dev cut for the summary count
    unsigned threads = 1;

    double x_value() const { return x < 0 ? std::pow(static_cast<double>(Q), 1.5 + theta) : x; }
    double y_value() const { return std::pow(x_value(), 0.5 + delta); }
};

struct ModulusRow {
    std::uint64_t q = 0;
    double observed = 0.0;
    double predicted = 0.0;
    double rel_dev = 0.0;
};

struct ExperimentSummary {
    double x = 0, y = 0;
    std::uint64_t lo = 0, hi = 0;  // integer interval (lo, hi]
    std::size_t support_size = 0;  // primes (or integers with mu != 0) in the interval
    std::size_t moduli = 0;
    double mean_rel_dev = 0, median_rel_dev = 0, max_rel_dev = 0;
    double threshold = 0;
    std::size_t above_threshold = 0;
    double exceptional_fraction = 0;
};

struct ExperimentResult {
    std::vector<ModulusRow> rows;
    ExperimentSummary summary;
};

inline constexpr std::uint64_t kExperimentMaxQ = 10'000;
inline constexpr std::uint64_t kExperimentMaxHi = 100'000'000;

/// q with rel_dev >= threshold (rows with zero deviation never count).
inline std::vector<std::uint64_t> exceptional_set(const std::vector<ModulusRow>& rows, double threshold) {
    std::vector<std::uint64_t> out;
    for (const auto& r : rows)
        if (r.rel_dev > 0.0 && r.rel_dev >= threshold) out.push_back(r.q);
    return out;
}

namespace detail {

struct WeightedSupport {
    std::vector<std::uint64_t> n;
    std::vector<double> w;
};

inline WeightedSupport weighted_support(std::uint64_t lo, std::uint64_t hi, Weight weight) {
    WeightedSupport s;
    if (weight == Weight::mobius_integers) {
        const auto mu = mobius_in_interval(lo, hi);
        for (std::uint64_t n = lo + 1; n <= hi; ++n) {
            const int m = mu[n - lo - 1];
            if (m == 0) continue;
            s.n.push_back(n);
            s.w.push_back(m);
        }
        return s;
    }
    s.n = primes_in_interval(lo, hi);
    s.w.reserve(s.n.size());
    for (auto p : s.n) {
        switch (weight) {
            case Weight::logp: s.w.push_back(std::log(static_cast<double>(p))); break;
            case Weight::mobius: s.w.push_back(-1.0); break;
            default: s.w.push_back(1.0); break;
        }
    }
    return s;
}

inline ModulusRow modulus_row(std::uint64_t q, const WeightedSupport& s) {
    PrimitiveRootTester test(q);
    ModulusRow r;
    r.q = q;
    double total = 0.0;
    for (std::size_t i = 0; i < s.n.size(); ++i) {
        const std::uint64_t a = s.n[i] % q;
        if (a == 0) continue;
        total += s.w[i];
        if (test(a)) r.observed += s.w[i];
    }
    r.predicted = static_cast<double>(arith::euler_phi(q - 1)) / static_cast<double>(q - 1) * total;
    r.rel_dev = std::abs(r.observed - r.predicted) / std::max(std::abs(r.predicted), 1.0);
    return r;
}

}  // namespace detail

inline ExperimentResult run(const ExperimentConfig& cfg) {
    if (cfg.Q < 2) throw std::invalid_argument("experiment: Q must be >= 2");
    if (cfg.Q > kExperimentMaxQ) throw std::invalid_argument("experiment: Q must be <= 10^4");
    if (!(cfg.delta > 0 && cfg.delta <= 1.0 / 3.0 + 1e-15))
        throw std::invalid_argument("experiment: delta must lie in (0, 1/3]");
    if (!(cfg.theta > 0 && cfg.theta <= 0.25)) throw std::invalid_argument("experiment: theta must lie in (0, 1/4]");
    const double x = cfg.x_value(), y = cfg.y_value();
    const double x_min = std::pow(static_cast<double>(cfg.Q), 1.5 + cfg.theta);
    if (!(x >= x_min * (1.0 - 1e-12)))
        throw std::invalid_argument(fmt::format("experiment: x = {} is below Q^(3/2+theta) = {}", x, x_min));
    if (!(x + y <= static_cast<double>(kExperimentMaxHi)))
        throw std::invalid_argument("experiment: x + y exceeds the sieve capacity 10^8");

    ExperimentResult res;
    auto& sm = res.summary;
    sm.x = x;
    sm.y = y;
    sm.lo = static_cast<std::uint64_t>(std::floor(x));
    sm.hi = static_cast<std::uint64_t>(std::floor(x + y));
    const auto support = detail::weighted_support(sm.lo, sm.hi, cfg.weight);
    sm.support_size = support.n.size();

    std::vector<std::uint64_t> moduli;
    for (std::uint64_t q = std::max<std::uint64_t>(cfg.Q, 3); q <= 2 * cfg.Q; ++q)
        if (arith::is_prime(q)) moduli.push_back(q);
    res.rows.resize(moduli.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(moduli.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < moduli.size(); ++i) res.rows[i] = detail::modulus_row(moduli[i], support);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < moduli.size(); i += workers) res.rows[i] = detail::modulus_row(moduli[i], support);
            });
        for (auto& t : pool) t.join();
    }
    std::sort(res.rows.begin(), res.rows.end(), [](const ModulusRow& a, const ModulusRow& b) { return a.q < b.q; });

    sm.moduli = res.rows.size();
    sm.threshold = cfg.threshold;
    if (!res.rows.empty()) {
        std::vector<double> d;
        for (const auto& r : res.rows) d.push_back(r.rel_dev);
        double sum = 0.0;
        for (double v : d) sum += v;
        sm.mean_rel_dev = sum / static_cast<double>(d.size());
        sm.max_rel_dev = *std::max_element(d.begin(), d.end());
        std::sort(d.begin(), d.end());
        const std::size_t h = d.size() / 2;
        sm.median_rel_dev = d.size() % 2 ? d[h] : 0.5 * (d[h - 1] + d[h]);
        sm.above_threshold = exceptional_set(res.rows, cfg.threshold).size();
        sm.exceptional_fraction = static_cast<double>(sm.above_threshold) / static_cast<double>(sm.moduli);
    }
    return res;
}

inline void write_csv(std::ostream& os, const std::vector<ModulusRow>& rows) {
    os << "q,observed,predicted,rel_dev\n";
    for (const auto& r : rows) os << fmt::format("{},{:.17g},{:.17g},{:.17g}\n", r.q, r.observed, r.predicted, r.rel_dev);
}

enum class DecompositionStream { mangoldt, mobius, zero };

inline DecompositionStream parse_decomposition_stream(const std::string& s) {
    if (s == "mangoldt") return DecompositionStream::mangoldt;
    if (s == "mobius") return DecompositionStream::mobius;
    if (s == "zero") return DecompositionStream::zero;
    throw std::invalid_argument("unknown stream '" + s + "' (mangoldt|mobius|zero)");
}

struct DecompositionReport {
    std::uint64_t q = 0, lo = 0, hi = 0;
    double direct = 0.0;       // sum over n in (lo,hi] with n mod q a primitive root
    std::complex<double> expansion;  // sum_chi c_q(chi) sum_n chi(n) b_n
    double difference = 0.0;
    double tolerance = 0.0;  // 1e-6 * interval length
    bool passed = false;
};

/// Checks sum_{n in (lo,hi], n in U_q} b_n = sum_chi c_q(chi) sum_{n in (lo,hi]} chi(n) b_n.
inline DecompositionReport indicator_decomposition_check(std::uint64_t q, std::uint64_t lo, std::uint64_t hi,
                                                         DecompositionStream b) {
    const CharacterTable t = build_characters(q);
    const IndicatorCoefficients c = indicator_coeffs(t);
    DecompositionReport r;
    r.q = q;
    r.lo = lo;
    r.hi = std::max(lo, hi);
    std::vector<double> bn(r.hi - lo, 0.0);
    if (b == DecompositionStream::mangoldt) bn = mangoldt_in_interval(lo, r.hi);
    else if (b == DecompositionStream::mobius) {
        auto mu = mobius_in_interval(lo, r.hi);
        bn.assign(mu.begin(), mu.end());
    }
    if (bn.size() < r.hi - lo) bn.resize(r.hi - lo, 0.0);
    PrimitiveRootTester test(q);
    // group by discrete logarithm: sum_n chi_j(n) b_n = sum_k e(jk/(q-1)) S_k
    std::vector<double> S(t.order, 0.0);
    for (std::uint64_t n = lo + 1; n <= r.hi; ++n) {
        const std::uint64_t a = n % q;
        if (a == 0) continue;
        const double v = bn[n - lo - 1];
        S[t.dlog[a]] += v;
        if (test(a)) r.direct += v;
    }
    for (std::uint64_t j = 0; j < t.order; ++j) {
        std::complex<double> inner = 0.0;
        for (std::uint64_t k = 0; k < t.order; ++k)
            if (S[k] != 0.0) inner += t.root_of_unity(j * k) * S[k];
        r.expansion += c.c[j] * inner;
    }
    r.difference = std::abs(r.expansion - r.direct);
    r.tolerance = 1e-6 * static_cast<double>(std::max<std::uint64_t>(r.hi - lo, 1));
    r.passed = r.difference <= r.tolerance;
    return r;
}

}  // namespace smoothperron
