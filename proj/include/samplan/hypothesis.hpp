#pragma once

// One-sided hypothesis test of an inspected conformity rate against an
// acceptable conformity rate (ACR), plus power and sample-size rules.
//
// Decision rule (Fleiss et al. 3rd ed., eq. (2.15), one-sided, continuity
// corrected): reject conformity of the market when
//
//   f <= ACR - z_alpha * sqrt(ACR (1 - ACR) / n) - 1/(2n)
//
// Power of that rule against a true rate f (eq. (2.21)):
//
//   Phi( [ n (ACR - f) - z_alpha sqrt(n ACR (1 - ACR)) ] / sqrt(n f (1 - f)) )
//
// Sample size for target alpha/beta at a preliminary rate fp (eq. (2.22)):
//
//   n = ceil( [ (z_alpha s0 + z_beta s1) / (ACR - fp) ]^2 ),
//
// with s0 = sqrt(ACR(1-ACR)), s1 = sqrt(fp(1-fp)). That canonical pairing
// puts z_alpha on the null variance. Some published tabulations swap the two
// variances ("printed" pairing below); both are provided because plans sized
// from the swapped form circulate widely and the difference is material.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "samplan/interval.hpp"
#include "samplan/normal.hpp"

namespace samplan {

// Product risk categories and their acceptable conformity rates.
enum class ProductRisk { low, medium, high, serious };

struct RiskClass {
    ProductRisk category;
    double acr; // acceptable conformity rate in (0, 1)
};

inline RiskClass risk_class(ProductRisk category) {
    switch (category) {
    case ProductRisk::low:     return RiskClass{category, 0.80};
    case ProductRisk::medium:  return RiskClass{category, 0.85};
    case ProductRisk::high:    return RiskClass{category, 0.95};
    case ProductRisk::serious: return RiskClass{category, 0.99};
    }
    throw std::invalid_argument("unknown product risk category");
}

namespace detail {

inline void check_acr(double acr) {
    if (!(acr > 0.0 && acr < 1.0)) {
        throw std::invalid_argument("ACR must lie strictly inside (0, 1), got " +
                                    std::to_string(acr));
    }
}

} // namespace detail

struct DecisionResult {
    bool reject;                // true: market conformity below ACR at this confidence
    double threshold;           // rejection threshold on f
    double point;               // observed f
    bool continuity_applied;    // whether the 1/(2n) correction is in the threshold
    bool continuity_comparable; // 1/(2n) >= |f - ACR| / 2: correction is material
    // A threshold <= 0 means no outcome can reject: n is too small for this
    // ACR/confidence pair. Reported, not thrown; callers surface a warning.
    bool degenerate() const { return threshold <= 0.0; }
};

inline DecisionResult decide(const SampleOutcome& s, double acr, const ConfidenceSpec& confidence,
                             bool use_continuity = true) {
    detail::check_acr(acr);
    double f = point_estimate(s);
    double n = static_cast<double>(s.n);
    double threshold = acr - confidence.z * std::sqrt(acr * (1.0 - acr) / n);
    if (use_continuity) {
        threshold -= 1.0 / (2.0 * n);
    }
    bool comparable = 1.0 / (2.0 * n) >= 0.5 * std::abs(f - acr);
    return DecisionResult{f <= threshold, threshold, f, use_continuity, comparable};
}

inline DecisionResult decide(const SampleOutcome& s, const RiskClass& risk,
                             const ConfidenceSpec& confidence, bool use_continuity = true) {
    return decide(s, risk.acr, confidence, use_continuity);
}

// Smallest defect count d such that decide({n, d}) rejects; n + 1 when no
// outcome rejects (degenerate threshold). Kept consistent with decide() by
// using the same comparison.
inline int critical_defect_count(int n, double acr, const ConfidenceSpec& confidence,
                                 bool use_continuity = true) {
    detail::check_acr(acr);
    if (n < 1) {
        throw std::invalid_argument("sample size n must be >= 1, got " + std::to_string(n));
    }
    double threshold = decide(SampleOutcome{n, 0}, acr, confidence, use_continuity).threshold;
    int d = static_cast<int>(std::ceil(n * (1.0 - threshold) - 1e-9));
    if (d < 0) d = 0;
    while (d <= n && !(1.0 - static_cast<double>(d) / n <= threshold)) ++d;
    while (d > 0 && 1.0 - static_cast<double>(d - 1) / n <= threshold) --d;
    return d;
}

// Approximate power of the decision rule against a true conformity rate f.
// Degenerate rates 0 and 1 have zero variance and are rejected.
inline double power(int n, double true_rate, double acr, const ConfidenceSpec& confidence) {
    detail::check_acr(acr);
    if (n < 1) {
        throw std::invalid_argument("sample size n must be >= 1, got " + std::to_string(n));
    }
    if (!(true_rate > 0.0 && true_rate < 1.0)) {
        throw std::domain_error("power: true rate must lie strictly inside (0, 1), got " +
                                std::to_string(true_rate));
    }
    double nn = static_cast<double>(n);
    double num = nn * (acr - true_rate) - confidence.z * std::sqrt(nn * acr * (1.0 - acr));
    double den = std::sqrt(nn * true_rate * (1.0 - true_rate));
    return phi(num / den);
}

inline double power(int n, double true_rate, const RiskClass& risk,
                    const ConfidenceSpec& confidence) {
    return power(n, true_rate, risk.acr, confidence);
}

// Thrown when a requested sample size has no finite solution (preliminary
// rate at or above the ACR: the alternative coincides with or dominates the
// null). The CLI maps this to its own exit code.
class UnboundedSampleSizeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class VariancePairing {
    canonical, // z_alpha on the null (ACR) variance  — eq. (2.22)
    printed,   // z_alpha on the alternative (fp) variance — swapped tabulations
};

struct PowerSizingSpec {
    double acr;              // acceptable conformity rate
    double alpha;            // type-I error target, in (0, 0.5)
    double beta;             // type-II error target, in (0, 0.5)
    double preliminary_rate; // anticipated true conformity rate, < acr
    VariancePairing pairing = VariancePairing::canonical;
};

// Core sizing with explicit multipliers, for callers that start from z values
// rather than error rates (printed tables usually quote 3-decimal z's).
inline int sample_size_power_z(double acr, double z_alpha, double z_beta,
                               double preliminary_rate,
                               VariancePairing pairing = VariancePairing::canonical) {
    detail::check_acr(acr);
    if (!(preliminary_rate >= 0.0 && preliminary_rate <= 1.0)) {
        throw std::invalid_argument("preliminary rate must lie in [0, 1], got " +
                                    std::to_string(preliminary_rate));
    }
    if (!(z_alpha > 0.0) || !(z_beta > 0.0)) {
        throw std::invalid_argument("z multipliers must be positive");
    }
    if (preliminary_rate >= acr) {
        throw UnboundedSampleSizeError("preliminary rate not below ACR: required sample size "
                                       "unbounded");
    }
    double s_null = std::sqrt(acr * (1.0 - acr));
    double s_alt = std::sqrt(preliminary_rate * (1.0 - preliminary_rate));
    double num = pairing == VariancePairing::canonical ? z_alpha * s_null + z_beta * s_alt
                                                       : z_alpha * s_alt + z_beta * s_null;
    double root = num / (acr - preliminary_rate);
    return static_cast<int>(std::ceil(root * root));
}

inline int sample_size_power(const PowerSizingSpec& spec) {
    if (!(spec.alpha > 0.0 && spec.alpha < 0.5)) {
        throw std::invalid_argument("alpha must lie in (0, 0.5), got " +
                                    std::to_string(spec.alpha));
    }
    if (!(spec.beta > 0.0 && spec.beta < 0.5)) {
        throw std::invalid_argument("beta must lie in (0, 0.5), got " +
                                    std::to_string(spec.beta));
    }
    return sample_size_power_z(spec.acr, phi_inv(1.0 - spec.alpha), phi_inv(1.0 - spec.beta),
                               spec.preliminary_rate, spec.pairing);
}

struct PowerPoint {
    int n;
    double power;
};

// power(n) over an inclusive range of sample sizes.
inline std::vector<PowerPoint> power_curve(int n_min, int n_max, double true_rate, double acr,
                                           const ConfidenceSpec& confidence) {
    if (n_min < 1 || n_max < n_min) {
        throw std::invalid_argument("power_curve: need 1 <= n_min <= n_max");
    }
    std::vector<PowerPoint> out;
    out.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    for (int n = n_min; n <= n_max; ++n) {
        out.push_back(PowerPoint{n, power(n, true_rate, acr, confidence)});
    }
    return out;
}

inline std::vector<PowerPoint> power_curve(int n_min, int n_max, double true_rate,
                                           const RiskClass& risk,
                                           const ConfidenceSpec& confidence) {
    return power_curve(n_min, n_max, true_rate, risk.acr, confidence);
}

} // namespace samplan
