#pragma once

// Monte Carlo validation of the estimation and testing rules, plus the exact
// binomial references they are validated against.
//
// Reproducibility contract: every uniform draw is produced by a counter-based
// generator (the splitmix64 output mix applied to seed + golden-ratio stride
// times the draw index). Draw (trial i, unit j) always reads counter
// i*n + j, so results are a pure function of (seed, scenario) — independent
// of thread count and scheduling, byte for byte.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "samplan/binomial.hpp"
#include "samplan/hypothesis.hpp"
#include "samplan/interval.hpp"
#include "samplan/normal.hpp"

namespace samplan {

namespace detail {

// splitmix64 finalizer (Steele, Lea & Flood's SplittableRandom mix).
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// Uniform in [0, 1) at an absolute stream position. The +1 keeps counter 0
// off the raw seed so a zero seed does not degenerate.
inline double uniform_at(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t bits = mix64(seed + (counter + 1) * 0x9E3779B97F4A7C15ULL);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace detail

struct ValidationScenario {
    double true_conformity_rate; // f_r, in [0, 1]
    int sample_size;             // n, >= 1
    int trials;                  // Monte Carlo repetitions, >= 1
    std::uint64_t seed;
};

enum class ValidationMetric { coverage, type_i, type_ii };

struct ValidationReport {
    ValidationScenario scenario;
    ValidationMetric metric;
    double empirical_rate; // fraction of trials where the event occurred
    double standard_error; // sqrt(r (1 - r) / trials)
    double exact_rate;     // exact binomial value of the same probability
};

namespace detail {

inline void check_scenario(const ValidationScenario& sc) {
    if (!(sc.true_conformity_rate >= 0.0 && sc.true_conformity_rate <= 1.0)) {
        throw std::invalid_argument("true conformity rate must lie in [0, 1], got " +
                                    std::to_string(sc.true_conformity_rate));
    }
    if (sc.sample_size < 1) {
        throw std::invalid_argument("sample size must be >= 1, got " +
                                    std::to_string(sc.sample_size));
    }
    if (sc.trials < 1) {
        throw std::invalid_argument("trial count must be >= 1, got " +
                                    std::to_string(sc.trials));
    }
}

// Defect count of one simulated inspection.
inline int draw_defects(const ValidationScenario& sc, int trial) {
    const double p_defect = 1.0 - sc.true_conformity_rate;
    const std::uint64_t base =
        static_cast<std::uint64_t>(trial) * static_cast<std::uint64_t>(sc.sample_size);
    int d = 0;
    for (int j = 0; j < sc.sample_size; ++j) {
        if (uniform_at(sc.seed, base + static_cast<std::uint64_t>(j)) < p_defect) ++d;
    }
    return d;
}

// Runs fn(trial) over [0, trials) on `threads` workers in disjoint chunks.
template <typename Fn>
inline void for_each_trial(int trials, int threads, Fn fn) {
    if (threads < 1) threads = 1;
    if (threads > trials) threads = trials;
    if (threads == 1) {
        for (int i = 0; i < trials; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    int chunk = trials / threads;
    int extra = trials % threads;
    int begin = 0;
    for (int t = 0; t < threads; ++t) {
        int end = begin + chunk + (t < extra ? 1 : 0);
        pool.emplace_back([begin, end, &fn] {
            for (int i = begin; i < end; ++i) fn(i);
        });
        begin = end;
    }
    for (auto& th : pool) th.join();
}

// Counts trials whose defect count lands in a precomputed event set.
// event[d] says whether defect count d is in the event. Each worker owns one
// accumulator slot; the total is an integer sum, so the result cannot depend
// on the partition.
inline long long count_event_trials(const ValidationScenario& sc, const std::vector<char>& event,
                                    int threads) {
    if (threads < 1) threads = 1;
    if (threads > sc.trials) threads = sc.trials;
    std::vector<long long> partial(static_cast<std::size_t>(threads), 0);
    std::vector<std::thread> pool;
    int chunk = sc.trials / threads;
    int extra = sc.trials % threads;
    int begin = 0;
    for (int t = 0; t < threads; ++t) {
        int end = begin + chunk + (t < extra ? 1 : 0);
        auto work = [&sc, &event, begin, end, t, &partial] {
            long long c = 0;
            for (int i = begin; i < end; ++i) {
                if (event[static_cast<std::size_t>(draw_defects(sc, i))]) ++c;
            }
            partial[static_cast<std::size_t>(t)] = c;
        };
        if (threads == 1) {
            work();
        } else {
            pool.emplace_back(work);
        }
        begin = end;
    }
    for (auto& th : pool) th.join();
    long long total = 0;
    for (long long c : partial) total += c;
    return total;
}

inline ValidationReport make_report(const ValidationScenario& sc, ValidationMetric metric,
                                    long long hits, double exact) {
    double rate = static_cast<double>(hits) / static_cast<double>(sc.trials);
    double se = std::sqrt(rate * (1.0 - rate) / static_cast<double>(sc.trials));
    return ValidationReport{sc, metric, rate, se, exact};
}

} // namespace detail

// Simulated defect counts for every trial, in trial order.
inline std::vector<int> simulate_inspections(const ValidationScenario& sc, int threads = 1) {
    detail::check_scenario(sc);
    std::vector<int> counts(static_cast<std::size_t>(sc.trials));
    detail::for_each_trial(sc.trials, threads, [&sc, &counts](int i) {
        counts[static_cast<std::size_t>(i)] = detail::draw_defects(sc, i);
    });
    return counts;
}

// Exact P[f_L <= f_r] under Binomial sampling at the true rate: the
// probability that the one-sided lower bound covers the truth.
inline double exact_coverage_probability(int n, double true_rate,
                                         const ConfidenceSpec& confidence) {
    BinomialSpec b{n, 1.0 - true_rate};
    double total = 0.0;
    for (int d = 0; d <= n; ++d) {
        if (lower_bound(SampleOutcome{n, d}, confidence).lower_bound <= true_rate) {
            total += binom_pmf(b, d);
        }
    }
    return total < 1.0 ? total : 1.0;
}

// Exact P[reject] of the decision rule at a true rate: the binomial upper
// tail at the critical defect count.
inline double exact_rejection_probability(int n, double true_rate, double acr,
                                          const ConfidenceSpec& confidence,
                                          bool use_continuity = true) {
    int d_star = critical_defect_count(n, acr, confidence, use_continuity);
    if (d_star > n) return 0.0;
    return binom_cdf_upper(BinomialSpec{n, 1.0 - true_rate}, d_star);
}

// Empirical coverage of the lower confidence bound.
inline ValidationReport validate_coverage(const ValidationScenario& sc,
                                          const ConfidenceSpec& confidence, int threads = 1) {
    detail::check_scenario(sc);
    std::vector<char> covers(static_cast<std::size_t>(sc.sample_size) + 1);
    for (int d = 0; d <= sc.sample_size; ++d) {
        covers[static_cast<std::size_t>(d)] =
            lower_bound(SampleOutcome{sc.sample_size, d}, confidence).lower_bound <=
            sc.true_conformity_rate;
    }
    long long hits = detail::count_event_trials(sc, covers, threads);
    double exact = exact_coverage_probability(sc.sample_size, sc.true_conformity_rate, confidence);
    return detail::make_report(sc, ValidationMetric::coverage, hits, exact);
}

// Empirical error rate of the decision rule. At f_r == ACR this is the
// type-I error (rejection rate); below the ACR it is the type-II error
// (acceptance rate). A true rate above the ACR has no error to measure.
inline ValidationReport validate_test_errors(const ValidationScenario& sc, double acr,
                                             const ConfidenceSpec& confidence,
                                             bool use_continuity = true, int threads = 1) {
    detail::check_scenario(sc);
    detail::check_acr(acr);
    if (sc.true_conformity_rate > acr) {
        throw std::invalid_argument("true conformity rate above the ACR has no test error: "
                                    "use coverage validation instead");
    }
    bool is_type_i = sc.true_conformity_rate == acr;
    int d_star = critical_defect_count(sc.sample_size, acr, confidence, use_continuity);
    std::vector<char> event(static_cast<std::size_t>(sc.sample_size) + 1);
    for (int d = 0; d <= sc.sample_size; ++d) {
        bool rejects = d >= d_star;
        event[static_cast<std::size_t>(d)] = is_type_i ? rejects : !rejects;
    }
    long long hits = detail::count_event_trials(sc, event, threads);
    double exact_reject = exact_rejection_probability(
        sc.sample_size, sc.true_conformity_rate, acr, confidence, use_continuity);
    double exact = is_type_i ? exact_reject : 1.0 - exact_reject;
    return detail::make_report(sc, is_type_i ? ValidationMetric::type_i : ValidationMetric::type_ii,
                               hits, exact);
}

} // namespace samplan
