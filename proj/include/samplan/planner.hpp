#pragma once

// Sampling-plan selection: given a risk class, confidence, target interval
// width and power target, size both candidate designs (interval estimate and
// hypothesis test) and pick the cheaper one. Also builds the two-stage
// variant (pilot for a preliminary rate, then the final plan) and the size
// comparison curve across preliminary rates.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "samplan/hypothesis.hpp"
#include "samplan/interval.hpp"
#include "samplan/normal.hpp"

namespace samplan {

enum class PlanMethod { interval_estimate, hypothesis_test };

struct SamplingPlan {
    PlanMethod method; // the selected design
    int sample_size;   // its n
    int interval_size; // candidate n for the interval design (always defined)
    std::optional<int> hypothesis_size; // candidate n for the test design, if sizable
    RiskClass risk;
    ConfidenceSpec confidence;
    double width;
    double beta;
    std::optional<double> preliminary_rate;
    std::string rationale; // one human-readable sentence on why this method
};

// Sizes both designs and keeps the smaller sample. Ties go to the interval
// estimate: it yields a bound (more informative than a binary verdict) at the
// same cost. Without a preliminary rate the hypothesis design cannot be
// sized, and a preliminary rate at or above the ACR makes it unbounded; in
// both cases the interval design wins by default.
inline SamplingPlan make_plan(const RiskClass& risk, const ConfidenceSpec& confidence,
                              double width, double beta,
                              std::optional<double> preliminary_rate = std::nullopt) {
    if (!(beta > 0.0 && beta < 0.5)) {
        throw std::invalid_argument("beta must lie in (0, 0.5), got " + std::to_string(beta));
    }
    int interval_n =
        sample_size_interval(IntervalSizingSpec{width, preliminary_rate, confidence});

    std::optional<int> hypothesis_n;
    std::string rationale;
    if (!preliminary_rate) {
        rationale = "no preliminary rate: hypothesis design cannot be sized, "
                    "interval estimate selected";
    } else if (*preliminary_rate >= risk.acr) {
        rationale = "preliminary rate " + std::to_string(*preliminary_rate) +
                    " not below ACR " + std::to_string(risk.acr) +
                    ": hypothesis design unbounded, interval estimate selected";
    } else {
        hypothesis_n = sample_size_power(
            PowerSizingSpec{risk.acr, confidence.alpha, beta, *preliminary_rate});
        if (*hypothesis_n < interval_n) {
            rationale = "hypothesis test needs n=" + std::to_string(*hypothesis_n) +
                        " vs interval estimate n=" + std::to_string(interval_n) +
                        ": hypothesis test selected";
        } else if (*hypothesis_n > interval_n) {
            rationale = "interval estimate needs n=" + std::to_string(interval_n) +
                        " vs hypothesis test n=" + std::to_string(*hypothesis_n) +
                        ": interval estimate selected";
        } else {
            rationale = "both designs need n=" + std::to_string(interval_n) +
                        ": interval estimate selected (bound is more informative)";
        }
    }

    bool pick_hypothesis = hypothesis_n && *hypothesis_n < interval_n;
    return SamplingPlan{
        pick_hypothesis ? PlanMethod::hypothesis_test : PlanMethod::interval_estimate,
        pick_hypothesis ? *hypothesis_n : interval_n,
        interval_n,
        hypothesis_n,
        risk,
        confidence,
        width,
        beta,
        preliminary_rate,
        rationale,
    };
}

struct TwoStagePlan {
    SamplingPlan pilot;    // coarse interval estimate, no preliminary rate
    double pilot_width;    // width the pilot is sized for
    double final_width;    // width the final plan will be sized for
    std::string final_rule; // how to turn the pilot outcome into the final plan
};

// Pilot-then-plan: when no preliminary rate exists, run a coarse interval
// estimate first (conservative k = 1) and feed its point estimate into
// make_plan for the final design. The pilot must be coarser than (or equal
// to) the final target, otherwise it already is the final study.
inline TwoStagePlan make_two_stage_plan(const RiskClass& risk, const ConfidenceSpec& confidence,
                                        double final_width, double beta,
                                        double pilot_width = 0.2) {
    if (!(pilot_width >= final_width)) {
        throw std::invalid_argument("pilot width must not be narrower than the final width");
    }
    SamplingPlan pilot = make_plan(risk, confidence, pilot_width, beta, std::nullopt);
    std::string rule = "inspect " + std::to_string(pilot.sample_size) +
                       " units, take f_hat = 1 - d/n as the preliminary rate, then size the "
                       "final plan with make_plan(width=" + std::to_string(final_width) +
                       ", beta=" + std::to_string(beta) + ", preliminary_rate=f_hat)";
    return TwoStagePlan{pilot, pilot_width, final_width, rule};
}

struct SizeComparisonPoint {
    double preliminary_rate;
    int interval_size;
    std::optional<int> hypothesis_size; // empty when unbounded (fp >= ACR)
};

// Candidate sizes across a grid of preliminary rates; the raw material for
// the interval-vs-test comparison plot.
inline std::vector<SizeComparisonPoint> size_comparison_curve(const RiskClass& risk,
                                                              const ConfidenceSpec& confidence,
                                                              double width, double beta,
                                                              std::span<const double> fp_grid) {
    if (!(beta > 0.0 && beta < 0.5)) {
        throw std::invalid_argument("beta must lie in (0, 0.5), got " + std::to_string(beta));
    }
    std::vector<SizeComparisonPoint> out;
    out.reserve(fp_grid.size());
    for (double fp : fp_grid) {
        SizeComparisonPoint pt;
        pt.preliminary_rate = fp;
        pt.interval_size = sample_size_interval(IntervalSizingSpec{width, fp, confidence});
        if (fp < risk.acr) {
            pt.hypothesis_size =
                sample_size_power(PowerSizingSpec{risk.acr, confidence.alpha, beta, fp});
        }
        out.push_back(pt);
    }
    return out;
}

} // namespace samplan
