#pragma once

// Interval estimation of a conformity rate from an inspection sample:
// one-sided lower confidence bound with continuity correction, and the
// sample-size rule derived from a target interval width.
//
// Bound: Fleiss, Levin & Paik, "Statistical Methods for Rates and
// Proportions", 3rd ed., eq. (2.17), applied one-sided to f = 1 - d/n.
// Sizing: eq. (2.29) with the usual piecewise width coefficient k
// (k = 4w(1-w) far outside the central region, 1 inside [0.3, 0.7],
// quadratic blends between).

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "samplan/normal.hpp"

namespace samplan {

struct SampleOutcome {
    int n; // units inspected, >= 1
    int d; // non-conforming units found, 0 <= d <= n
};

namespace detail {

inline void check_outcome(const SampleOutcome& s) {
    if (s.n < 1) {
        throw std::invalid_argument("sample size n must be >= 1, got " + std::to_string(s.n));
    }
    if (s.d < 0) {
        throw std::invalid_argument("defect count d must be >= 0, got " + std::to_string(s.d));
    }
    if (s.d > s.n) {
        throw std::invalid_argument("d exceeds n (d=" + std::to_string(s.d) +
                                    ", n=" + std::to_string(s.n) + ")");
    }
}

} // namespace detail

// Observed conformity rate f = 1 - d/n.
inline double point_estimate(const SampleOutcome& s) {
    detail::check_outcome(s);
    return 1.0 - static_cast<double>(s.d) / static_cast<double>(s.n);
}

struct ConformityEstimate {
    double point;          // f
    double lower_bound;    // one-sided lower confidence limit f_L, in [0, f]
    ConfidenceSpec confidence;
};

// One-sided lower confidence limit for the conformity rate.
//
//        (2nf + z^2 - 1) - z * sqrt(z^2 - (2 + 1/n) + 4f(n + 1 - nf))
//  f_L = -------------------------------------------------------------
//                            2 (n + z^2)
//
// For d == n (f == 0) the discriminant can dip negative; the bound is 0 by
// construction there, so that case short-circuits. For every other f the
// discriminant is provably positive. A negative discriminant anywhere else
// would mean corrupted inputs, hence the domain_error.
inline ConformityEstimate lower_bound(const SampleOutcome& s, const ConfidenceSpec& confidence) {
    double f = point_estimate(s);
    if (s.d == s.n) {
        return ConformityEstimate{f, 0.0, confidence};
    }
    double n = static_cast<double>(s.n);
    double z = confidence.z;
    double z2 = z * z;
    double disc = z2 - (2.0 + 1.0 / n) + 4.0 * f * (n + 1.0 - n * f);
    if (disc < 0.0) {
        throw std::domain_error("lower_bound: negative discriminant at n=" + std::to_string(s.n) +
                                ", d=" + std::to_string(s.d));
    }
    double fl = ((2.0 * n * f + z2 - 1.0) - z * std::sqrt(disc)) / (2.0 * (n + z2));
    if (fl < 0.0) fl = 0.0;
    if (fl > f) {
        // Analytically impossible; guards against a silent formula regression.
        throw std::logic_error("lower_bound: f_L exceeded the point estimate");
    }
    return ConformityEstimate{f, fl, confidence};
}

// Width coefficient k(w, fp) for the sizing rule. With no preliminary rate
// the conservative k = 1 applies. Width is capped at 0.6: beyond that the
// rule's small-k branches produce degenerate plans, and a 0.6-wide interval
// already says almost nothing.
inline double coefficient_k(double width, std::optional<double> preliminary_rate) {
    if (!(width > 0.0 && width <= 0.6)) {
        throw std::invalid_argument("interval width must lie in (0, 0.6], got " +
                                    std::to_string(width));
    }
    if (!preliminary_rate) {
        return 1.0;
    }
    double fp = *preliminary_rate;
    if (!(fp >= 0.0 && fp <= 1.0)) {
        throw std::invalid_argument("preliminary rate must lie in [0, 1], got " +
                                    std::to_string(fp));
    }
    double w = width;
    if (fp < 0.5 * w || fp > 1.0 - 0.5 * w) return 4.0 * w * (1.0 - w);
    if (fp < 0.3) return 4.0 * (fp + 0.5 * w) * (1.0 - fp - 0.5 * w);
    if (fp <= 0.7) return 1.0;
    return 4.0 * (fp - 0.5 * w) * (1.0 - fp + 0.5 * w);
}

struct IntervalSizingSpec {
    double width;                           // target interval width w, in (0, 0.6]
    std::optional<double> preliminary_rate; // expected conformity rate, if any
    ConfidenceSpec confidence;
};

// Smallest n such that  n >= k z^2 / w^2 + 2/w - 2 z^2 + (z + 2)/k.
inline int sample_size_interval(const IntervalSizingSpec& spec) {
    double k = coefficient_k(spec.width, spec.preliminary_rate);
    double w = spec.width;
    double z = spec.confidence.z;
    double bound = k * z * z / (w * w) + 2.0 / w - 2.0 * z * z + (z + 2.0) / k;
    return static_cast<int>(std::ceil(bound));
}

} // namespace samplan
