#pragma once

// Command-line front end. Every subcommand prints one JSON envelope on
// stdout (schema_version, command, inputs, result, warnings — in that
// order, always) unless it is explicitly asked for raw CSV. All randomness
// is seeded and counter-based, so a command line maps to one exact byte
// stream, independent of --threads.
//
// Exit codes: 0 success, 2 argument/validation error, 3 unbounded sample
// size (preliminary rate at or above the ACR), 4 I/O failure.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "samplan/hypothesis.hpp"
#include "samplan/interval.hpp"
#include "samplan/montecarlo.hpp"
#include "samplan/normal.hpp"
#include "samplan/planner.hpp"

namespace samplan::cli {

using ordered_json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Shortest human-friendly decimal for CSV cells. %.10g keeps grid values
// like 0.65 free of binary dust without losing anything we print.
inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
}

inline std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline ProductRisk parse_risk(const std::string& name) {
    std::string s = to_lower(name);
    if (s == "low") return ProductRisk::low;
    if (s == "medium") return ProductRisk::medium;
    if (s == "high") return ProductRisk::high;
    if (s == "serious") return ProductRisk::serious;
    throw std::invalid_argument("unknown risk class '" + name +
                                "' (expected low, medium, high or serious)");
}

inline std::string risk_name(ProductRisk r) {
    switch (r) {
    case ProductRisk::low: return "low";
    case ProductRisk::medium: return "medium";
    case ProductRisk::high: return "high";
    case ProductRisk::serious: return "serious";
    }
    return "?";
}

// Resolves --risk / --acr into a numeric ACR. --acr wins over --risk (with a
// warning); at least one must be present.
struct ResolvedRisk {
    std::optional<std::string> risk; // canonical lowercase name, if --risk given
    double acr;
};

inline ResolvedRisk resolve_risk(const std::optional<std::string>& risk_flag,
                                 const std::optional<double>& acr_flag,
                                 std::vector<std::string>& warnings) {
    if (!risk_flag && !acr_flag) {
        throw std::invalid_argument("need --risk or --acr");
    }
    ResolvedRisk out{std::nullopt, 0.0};
    if (risk_flag) {
        RiskClass rc = risk_class(parse_risk(*risk_flag));
        out.risk = risk_name(rc.category);
        out.acr = rc.acr;
    }
    if (acr_flag) {
        if (out.risk) {
            warnings.push_back("--acr " + fmt_g(*acr_flag) + " overrides --risk " + *out.risk +
                               " (acr " + fmt_g(out.acr) + ")");
        }
        out.acr = *acr_flag;
    }
    return out;
}

// Inclusive uniform grid a, a+step, ..., b (tolerating float dust at b).
inline std::vector<double> uniform_grid(double a, double b, double step) {
    if (!(step > 0.0) || b < a) {
        throw std::invalid_argument("bad grid: need start <= stop and step > 0");
    }
    int count = static_cast<int>(std::floor((b - a) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(a + i * step);
    }
    return out;
}

// "--fp-grid 0.5:0.8:0.05" or "--fp-grid 0.5,0.6,0.65".
inline std::vector<double> parse_grid(const std::string& text) {
    try {
        if (text.find(':') != std::string::npos) {
            std::size_t c1 = text.find(':');
            std::size_t c2 = text.find(':', c1 + 1);
            if (c2 == std::string::npos) {
                throw std::invalid_argument("expected start:stop:step");
            }
            double a = std::stod(text.substr(0, c1));
            double b = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
            double step = std::stod(text.substr(c2 + 1));
            return uniform_grid(a, b, step);
        }
        std::vector<double> out;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t comma = text.find(',', pos);
            std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
            if (!item.empty()) out.push_back(std::stod(item));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (out.empty()) throw std::invalid_argument("empty grid");
        return out;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad grid '" + text +
                                    "' (expected start:stop:step or v1,v2,...)");
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("bad grid '" + text + "' (value out of range)");
    }
}

inline void print_envelope(std::ostream& out, const std::string& command, ordered_json inputs,
                           ordered_json result, const std::vector<std::string>& warnings) {
    ordered_json env;
    env["schema_version"] = "1";
    env["command"] = command;
    env["inputs"] = std::move(inputs);
    env["result"] = std::move(result);
    env["warnings"] = warnings;
    out << env.dump(2) << "\n";
}

inline void write_text_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    file << body;
    file.flush();
    if (!file.good()) {
        throw IoError("failed while writing '" + path.string() + "'");
    }
}

inline const char* method_name(PlanMethod m) {
    return m == PlanMethod::interval_estimate ? "interval_estimate" : "hypothesis_test";
}

inline const char* pairing_name(VariancePairing p) {
    return p == VariancePairing::canonical ? "canonical" : "printed";
}

inline const std::string kPairingNote =
    "printed pairing puts z_alpha on the preliminary-rate variance; the canonical pairing "
    "(default) puts it on the ACR variance, and the two give different sample sizes";

} // namespace detail

// Runs one command line (without argv[0]); writes stdout/stderr to the given
// streams and returns the process exit code. Kept stream-parameterized so the
// whole CLI is testable in-process.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using detail::fmt_g;

    CLI::App app{"market-surveillance sampling plans: estimate, size, decide, plan, validate"};
    app.name("samplan");
    app.require_subcommand(1);

    // ---- estimate ----------------------------------------------------
    auto* cmd_est = app.add_subcommand(
        "estimate", "point estimate and one-sided lower confidence bound for a sample");
    int est_n = 0, est_d = 0;
    double est_lc = 0.0;
    cmd_est->add_option("--n", est_n, "units inspected")->required();
    cmd_est->add_option("--d", est_d, "non-conforming units found")->required();
    cmd_est->add_option("--lc", est_lc, "one-sided confidence level, e.g. 0.80")->required();

    // ---- size --------------------------------------------------------
    auto* cmd_size = app.add_subcommand("size", "sample size for a target width or power");
    cmd_size->require_subcommand(1);

    auto* size_int = cmd_size->add_subcommand("interval", "size for a target interval width");
    double si_w = 0.0, si_lc = 0.0;
    std::optional<double> si_fp;
    size_int->add_option("--w", si_w, "target interval width, in (0, 0.6]")->required();
    size_int->add_option("--lc", si_lc, "one-sided confidence level")->required();
    size_int->add_option("--fp", si_fp, "preliminary conformity rate (optional)");

    auto* size_pow = cmd_size->add_subcommand("power", "size for target type-I/II errors");
    std::optional<std::string> sp_risk;
    std::optional<double> sp_acr, sp_alpha, sp_beta, sp_zalpha, sp_zbeta;
    double sp_fp = 0.0;
    std::string sp_pairing = "canonical";
    size_pow->add_option("--risk", sp_risk, "risk class: low, medium, high, serious");
    size_pow->add_option("--acr", sp_acr, "acceptable conformity rate (overrides --risk)");
    size_pow->add_option("--alpha", sp_alpha, "type-I error target, in (0, 0.5)");
    size_pow->add_option("--beta", sp_beta, "type-II error target, in (0, 0.5)");
    size_pow->add_option("--z-alpha", sp_zalpha, "explicit z multiplier for alpha");
    size_pow->add_option("--z-beta", sp_zbeta, "explicit z multiplier for beta");
    size_pow->add_option("--fp", sp_fp, "preliminary conformity rate, below the ACR")->required();
    size_pow->add_option("--pairing", sp_pairing, "variance pairing: canonical or printed")
        ->check(CLI::IsMember({"canonical", "printed"}));

    // ---- decide ------------------------------------------------------
    auto* cmd_dec = app.add_subcommand("decide", "test the sample against an ACR");
    int dc_n = 0, dc_d = 0;
    double dc_lc = 0.0;
    std::optional<std::string> dc_risk;
    std::optional<double> dc_acr;
    bool dc_nocc = false;
    cmd_dec->add_option("--n", dc_n, "units inspected")->required();
    cmd_dec->add_option("--d", dc_d, "non-conforming units found")->required();
    cmd_dec->add_option("--lc", dc_lc, "one-sided confidence level")->required();
    cmd_dec->add_option("--risk", dc_risk, "risk class: low, medium, high, serious");
    cmd_dec->add_option("--acr", dc_acr, "acceptable conformity rate (overrides --risk)");
    cmd_dec->add_flag("--no-continuity", dc_nocc, "drop the 1/(2n) continuity correction");

    // ---- plan --------------------------------------------------------
    auto* cmd_plan = app.add_subcommand("plan", "pick the cheaper design (interval vs test)");
    double pl_w = 0.0, pl_lc = 0.0, pl_beta = 0.1;
    std::optional<std::string> pl_risk;
    std::optional<double> pl_acr, pl_fp, pl_pilot;
    cmd_plan->add_option("--w", pl_w, "target interval width")->required();
    cmd_plan->add_option("--lc", pl_lc, "one-sided confidence level")->required();
    cmd_plan->add_option("--risk", pl_risk, "risk class: low, medium, high, serious");
    cmd_plan->add_option("--acr", pl_acr, "acceptable conformity rate (overrides --risk)");
    cmd_plan->add_option("--beta", pl_beta, "type-II error target (default 0.1)");
    cmd_plan->add_option("--fp", pl_fp, "preliminary conformity rate (optional)");
    cmd_plan->add_option("--pilot-width", pl_pilot,
                         "request a two-stage plan with a pilot sized for this width");

    // ---- curve -------------------------------------------------------
    auto* cmd_curve = app.add_subcommand("curve", "tabulate a comparison or power curve");
    int cv_fig = 0;
    double cv_lc = 0.0;
    std::optional<std::string> cv_risk;
    std::optional<double> cv_acr, cv_w, cv_beta, cv_fp, cv_wmin, cv_wmax, cv_wstep;
    std::optional<int> cv_nmin, cv_nmax;
    std::optional<std::string> cv_grid, cv_out;
    std::string cv_format = "json";
    cmd_curve->add_option("--figure", cv_fig, "1: sizes vs fp; 2: power vs n; 3: n vs width")
        ->required();
    cmd_curve->add_option("--lc", cv_lc, "one-sided confidence level")->required();
    cmd_curve->add_option("--risk", cv_risk, "risk class (figures 1 and 2)");
    cmd_curve->add_option("--acr", cv_acr, "acceptable conformity rate (overrides --risk)");
    cmd_curve->add_option("--w", cv_w, "interval width (figure 1)");
    cmd_curve->add_option("--beta", cv_beta, "type-II error target (figure 1, default 0.1)");
    cmd_curve->add_option("--fp-grid", cv_grid,
                          "preliminary-rate grid, start:stop:step or v1,v2,... (figure 1)");
    cmd_curve->add_option("--fp", cv_fp, "true/preliminary conformity rate (figures 2, 3)");
    cmd_curve->add_option("--n-min", cv_nmin, "smallest sample size (figure 2)");
    cmd_curve->add_option("--n-max", cv_nmax, "largest sample size (figure 2)");
    cmd_curve->add_option("--w-min", cv_wmin, "smallest width (figure 3)");
    cmd_curve->add_option("--w-max", cv_wmax, "largest width (figure 3)");
    cmd_curve->add_option("--w-step", cv_wstep, "width step (figure 3)");
    cmd_curve->add_option("--out", cv_out, "write the rows to this CSV file");
    cmd_curve->add_option("--format", cv_format, "stdout payload: json envelope or raw csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // ---- validate ----------------------------------------------------
    auto* cmd_val = app.add_subcommand("validate", "Monte Carlo check against exact binomial");
    std::string vl_metric;
    int vl_n = 0, vl_trials = 100000, vl_threads = 1;
    double vl_lc = 0.0;
    std::optional<double> vl_fr, vl_acr;
    std::optional<std::string> vl_risk;
    std::uint64_t vl_seed = 1;
    bool vl_nocc = false;
    cmd_val->add_option("--metric", vl_metric, "coverage, type1 or power")
        ->required()
        ->check(CLI::IsMember({"coverage", "type1", "power"}));
    cmd_val->add_option("--n", vl_n, "units inspected per trial")->required();
    cmd_val->add_option("--lc", vl_lc, "one-sided confidence level")->required();
    cmd_val->add_option("--fr", vl_fr, "true conformity rate");
    cmd_val->add_option("--risk", vl_risk, "risk class (type1/power)");
    cmd_val->add_option("--acr", vl_acr, "acceptable conformity rate (overrides --risk)");
    cmd_val->add_option("--trials", vl_trials, "Monte Carlo repetitions (default 100000)");
    cmd_val->add_option("--seed", vl_seed, "RNG seed (default 1)");
    cmd_val->add_option("--threads", vl_threads,
                        "worker threads (results are independent of this)");
    cmd_val->add_flag("--no-continuity", vl_nocc, "drop the 1/(2n) continuity correction");

    // ---- tables ------------------------------------------------------
    auto* cmd_tab = app.add_subcommand("tables", "write the reference sizing tables as CSV");
    std::string tb_out = ".";
    cmd_tab->add_option("--out", tb_out, "output directory (default .)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);

        std::vector<std::string> warnings;

        if (cmd_est->parsed()) {
            ConfidenceSpec c = confidence_spec(est_lc);
            ConformityEstimate estimate = lower_bound(SampleOutcome{est_n, est_d}, c);
            ordered_json inputs{{"n", est_n}, {"d", est_d}, {"lc", est_lc}};
            ordered_json result{{"point", estimate.point},
                                {"lower_bound", estimate.lower_bound},
                                {"confidence_level", c.level}};
            detail::print_envelope(out, "estimate", inputs, result, warnings);
            return 0;
        }

        if (size_int->parsed()) {
            ConfidenceSpec c = confidence_spec(si_lc);
            double k = coefficient_k(si_w, si_fp);
            int n = sample_size_interval(IntervalSizingSpec{si_w, si_fp, c});
            ordered_json inputs{{"w", si_w}, {"lc", si_lc}};
            inputs["fp"] = si_fp ? ordered_json(*si_fp) : ordered_json(nullptr);
            ordered_json result{{"n", n}, {"k", k}};
            detail::print_envelope(out, "size interval", inputs, result, warnings);
            return 0;
        }

        if (size_pow->parsed()) {
            detail::ResolvedRisk risk = detail::resolve_risk(sp_risk, sp_acr, warnings);
            VariancePairing pairing = sp_pairing == "printed" ? VariancePairing::printed
                                                              : VariancePairing::canonical;
            if (!sp_zalpha && !sp_alpha) {
                throw std::invalid_argument("need --alpha or --z-alpha");
            }
            if (!sp_zbeta && !sp_beta) {
                throw std::invalid_argument("need --beta or --z-beta");
            }
            if (sp_alpha && !(*sp_alpha > 0.0 && *sp_alpha < 0.5)) {
                throw std::invalid_argument("alpha must lie in (0, 0.5), got " +
                                            fmt_g(*sp_alpha));
            }
            if (sp_beta && !(*sp_beta > 0.0 && *sp_beta < 0.5)) {
                throw std::invalid_argument("beta must lie in (0, 0.5), got " + fmt_g(*sp_beta));
            }
            double z_alpha = sp_zalpha ? *sp_zalpha : phi_inv(1.0 - *sp_alpha);
            double z_beta = sp_zbeta ? *sp_zbeta : phi_inv(1.0 - *sp_beta);
            int n = sample_size_power_z(risk.acr, z_alpha, z_beta, sp_fp, pairing);
            if (pairing == VariancePairing::printed) {
                warnings.push_back(detail::kPairingNote);
            }
            ordered_json inputs;
            inputs["risk"] = risk.risk ? ordered_json(*risk.risk) : ordered_json(nullptr);
            inputs["acr"] = risk.acr;
            inputs["alpha"] = sp_alpha ? ordered_json(*sp_alpha) : ordered_json(nullptr);
            inputs["beta"] = sp_beta ? ordered_json(*sp_beta) : ordered_json(nullptr);
            inputs["z_alpha"] = z_alpha;
            inputs["z_beta"] = z_beta;
            inputs["fp"] = sp_fp;
            inputs["pairing"] = detail::pairing_name(pairing);
            ordered_json result{{"n", n}, {"pairing", detail::pairing_name(pairing)}};
            detail::print_envelope(out, "size power", inputs, result, warnings);
            return 0;
        }

        if (cmd_dec->parsed()) {
            ConfidenceSpec c = confidence_spec(dc_lc);
            detail::ResolvedRisk risk = detail::resolve_risk(dc_risk, dc_acr, warnings);
            DecisionResult decision = decide(SampleOutcome{dc_n, dc_d}, risk.acr, c, !dc_nocc);
            if (decision.degenerate()) {
                warnings.push_back("threshold <= 0: no outcome can reject at n=" +
                                   std::to_string(dc_n) +
                                   " for this ACR and confidence (degenerate test)");
            }
            if (decision.continuity_applied && decision.continuity_comparable) {
                warnings.push_back("continuity correction 1/(2n) is comparable to |f - ACR|/2; "
                                   "consider --no-continuity");
            }
            ordered_json inputs;
            inputs["n"] = dc_n;
            inputs["d"] = dc_d;
            inputs["risk"] = risk.risk ? ordered_json(*risk.risk) : ordered_json(nullptr);
            inputs["acr"] = risk.acr;
            inputs["lc"] = dc_lc;
            inputs["continuity"] = !dc_nocc;
            ordered_json result{{"reject", decision.reject},
                                {"threshold", decision.threshold},
                                {"point", decision.point},
                                {"continuity_applied", decision.continuity_applied},
                                {"continuity_comparable", decision.continuity_comparable}};
            detail::print_envelope(out, "decide", inputs, result, warnings);
            return 0;
        }

        if (cmd_plan->parsed()) {
            ConfidenceSpec c = confidence_spec(pl_lc);
            detail::ResolvedRisk risk = detail::resolve_risk(pl_risk, pl_acr, warnings);
            // Sizing only reads the ACR; the category is cosmetic here, and a
            // custom --acr keeps whatever category --risk named (or medium).
            RiskClass rc{risk.risk ? detail::parse_risk(*risk.risk) : ProductRisk::medium,
                         risk.acr};
            ordered_json inputs;
            inputs["risk"] = risk.risk ? ordered_json(*risk.risk) : ordered_json(nullptr);
            inputs["acr"] = risk.acr;
            inputs["lc"] = pl_lc;
            inputs["w"] = pl_w;
            inputs["beta"] = pl_beta;
            inputs["fp"] = pl_fp ? ordered_json(*pl_fp) : ordered_json(nullptr);
            inputs["pilot_width"] = pl_pilot ? ordered_json(*pl_pilot) : ordered_json(nullptr);

            ordered_json result;
            if (pl_pilot) {
                TwoStagePlan plan = make_two_stage_plan(rc, c, pl_w, pl_beta, *pl_pilot);
                result["mode"] = "two_stage";
                result["pilot"] = ordered_json{
                    {"method", detail::method_name(plan.pilot.method)},
                    {"sample_size", plan.pilot.sample_size},
                    {"rationale", plan.pilot.rationale}};
                result["pilot_width"] = plan.pilot_width;
                result["final_width"] = plan.final_width;
                result["final_rule"] = plan.final_rule;
            } else {
                SamplingPlan plan = make_plan(rc, c, pl_w, pl_beta, pl_fp);
                result["mode"] = "single";
                result["method"] = detail::method_name(plan.method);
                result["sample_size"] = plan.sample_size;
                result["interval_size"] = plan.interval_size;
                result["hypothesis_size"] = plan.hypothesis_size
                                                ? ordered_json(*plan.hypothesis_size)
                                                : ordered_json(nullptr);
                result["rationale"] = plan.rationale;
            }
            detail::print_envelope(out, "plan", inputs, result, warnings);
            return 0;
        }

        if (cmd_curve->parsed()) {
            ConfidenceSpec c = confidence_spec(cv_lc);
            std::vector<std::string> columns;
            // Cells are preformatted strings for CSV and typed JSON values
            // for the envelope, built side by side.
            std::vector<std::vector<std::string>> csv_rows;
            std::vector<ordered_json> json_rows;
            ordered_json inputs;
            inputs["figure"] = cv_fig;
            inputs["lc"] = cv_lc;

            if (cv_fig == 1) {
                if (!cv_w) throw std::invalid_argument("figure 1 requires --w");
                if (!cv_grid) throw std::invalid_argument("figure 1 requires --fp-grid");
                detail::ResolvedRisk risk = detail::resolve_risk(cv_risk, cv_acr, warnings);
                double beta = cv_beta ? *cv_beta : 0.1;
                RiskClass rc{cv_risk ? detail::parse_risk(*cv_risk) : ProductRisk::medium,
                             risk.acr};
                std::vector<double> grid = detail::parse_grid(*cv_grid);
                auto points = size_comparison_curve(rc, c, *cv_w, beta, grid);
                inputs["risk"] = risk.risk ? ordered_json(*risk.risk) : ordered_json(nullptr);
                inputs["acr"] = risk.acr;
                inputs["w"] = *cv_w;
                inputs["beta"] = beta;
                inputs["fp_grid"] = *cv_grid;
                columns = {"fp", "interval_n", "hypothesis_n"};
                for (const auto& pt : points) {
                    std::string hyp = pt.hypothesis_size ? std::to_string(*pt.hypothesis_size)
                                                         : std::string("unbounded");
                    csv_rows.push_back({fmt_g(pt.preliminary_rate),
                                        std::to_string(pt.interval_size), hyp});
                    ordered_json row = ordered_json::array();
                    row.push_back(pt.preliminary_rate);
                    row.push_back(pt.interval_size);
                    if (pt.hypothesis_size) {
                        row.push_back(*pt.hypothesis_size);
                    } else {
                        row.push_back("unbounded");
                    }
                    json_rows.push_back(row);
                }
            } else if (cv_fig == 2) {
                if (!cv_fp) throw std::invalid_argument("figure 2 requires --fp");
                if (!cv_nmin || !cv_nmax) {
                    throw std::invalid_argument("figure 2 requires --n-min and --n-max");
                }
                detail::ResolvedRisk risk = detail::resolve_risk(cv_risk, cv_acr, warnings);
                inputs["risk"] = risk.risk ? ordered_json(*risk.risk) : ordered_json(nullptr);
                inputs["acr"] = risk.acr;
                inputs["fp"] = *cv_fp;
                inputs["n_min"] = *cv_nmin;
                inputs["n_max"] = *cv_nmax;
                columns = {"n", "power"};
                for (const auto& pt : power_curve(*cv_nmin, *cv_nmax, *cv_fp, risk.acr, c)) {
                    csv_rows.push_back({std::to_string(pt.n), fmt_g(pt.power)});
                    json_rows.push_back(ordered_json::array({pt.n, pt.power}));
                }
            } else if (cv_fig == 3) {
                if (!cv_wmin || !cv_wmax || !cv_wstep) {
                    throw std::invalid_argument(
                        "figure 3 requires --w-min, --w-max and --w-step");
                }
                inputs["fp"] = cv_fp ? ordered_json(*cv_fp) : ordered_json(nullptr);
                inputs["w_min"] = *cv_wmin;
                inputs["w_max"] = *cv_wmax;
                inputs["w_step"] = *cv_wstep;
                columns = {"w", "n"};
                for (double w : detail::uniform_grid(*cv_wmin, *cv_wmax, *cv_wstep)) {
                    int n = sample_size_interval(IntervalSizingSpec{w, cv_fp, c});
                    csv_rows.push_back({fmt_g(w), std::to_string(n)});
                    json_rows.push_back(ordered_json::array({w, n}));
                }
            } else {
                throw std::invalid_argument("--figure must be 1, 2 or 3");
            }

            std::string csv;
            for (std::size_t i = 0; i < columns.size(); ++i) {
                csv += (i ? "," : "") + columns[i];
            }
            csv += "\n";
            for (const auto& row : csv_rows) {
                for (std::size_t i = 0; i < row.size(); ++i) {
                    csv += (i ? "," : "") + row[i];
                }
                csv += "\n";
            }

            if (cv_out) {
                detail::write_text_file(*cv_out, csv);
                ordered_json result{{"figure", cv_fig},
                                    {"columns", columns},
                                    {"file", *cv_out},
                                    {"rows_written", csv_rows.size()}};
                detail::print_envelope(out, "curve", inputs, result, warnings);
            } else if (cv_format == "csv") {
                out << csv;
            } else {
                ordered_json result{{"figure", cv_fig}, {"columns", columns}};
                result["rows"] = json_rows;
                detail::print_envelope(out, "curve", inputs, result, warnings);
            }
            return 0;
        }

        if (cmd_val->parsed()) {
            ConfidenceSpec c = confidence_spec(vl_lc);
            bool continuity = !vl_nocc;
            std::optional<detail::ResolvedRisk> risk;
            if (vl_metric != "coverage") {
                risk = detail::resolve_risk(vl_risk, vl_acr, warnings);
            }
            double fr = 0.0;
            if (vl_metric == "type1") {
                if (vl_fr && *vl_fr != risk->acr) {
                    throw std::invalid_argument(
                        "type1 is measured at the ACR; omit --fr or set it to the ACR");
                }
                fr = risk->acr;
            } else {
                if (!vl_fr) throw std::invalid_argument("--fr is required for this metric");
                fr = *vl_fr;
            }

            ValidationScenario sc{fr, vl_n, vl_trials, vl_seed};
            ordered_json result;
            if (vl_metric == "coverage") {
                ValidationReport rep = validate_coverage(sc, c, vl_threads);
                result = ordered_json{{"metric", "coverage"},
                                      {"empirical_rate", rep.empirical_rate},
                                      {"standard_error", rep.standard_error},
                                      {"exact_rate", rep.exact_rate}};
            } else if (vl_metric == "type1") {
                ValidationReport rep = validate_test_errors(sc, risk->acr, c, continuity,
                                                            vl_threads);
                result = ordered_json{{"metric", "type1"},
                                      {"empirical_rate", rep.empirical_rate},
                                      {"standard_error", rep.standard_error},
                                      {"exact_rate", rep.exact_rate}};
            } else {
                if (fr >= risk->acr) {
                    throw std::invalid_argument(
                        "power is measured below the ACR; use --metric type1 at the ACR");
                }
                ValidationReport rep = validate_test_errors(sc, risk->acr, c, continuity,
                                                            vl_threads);
                // The library reports the type-II error; power is its
                // complement, with the same binomial standard error.
                result = ordered_json{{"metric", "power"},
                                      {"empirical_rate", 1.0 - rep.empirical_rate},
                                      {"standard_error", rep.standard_error},
                                      {"exact_rate", 1.0 - rep.exact_rate}};
            }
            ordered_json inputs;
            inputs["metric"] = vl_metric;
            inputs["n"] = vl_n;
            inputs["fr"] = fr;
            inputs["risk"] = risk && risk->risk ? ordered_json(*risk->risk)
                                                : ordered_json(nullptr);
            inputs["acr"] = risk ? ordered_json(risk->acr) : ordered_json(nullptr);
            inputs["lc"] = vl_lc;
            inputs["continuity"] = continuity;
            inputs["trials"] = vl_trials;
            inputs["seed"] = vl_seed;
            // --threads deliberately not echoed: it cannot change any number
            // in the result, and the envelope is specified to be
            // byte-identical across thread counts.
            detail::print_envelope(out, "validate", inputs, result, warnings);
            return 0;
        }

        if (cmd_tab->parsed()) {
            namespace fs = std::filesystem;
            fs::path dir(tb_out);
            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec || !fs::is_directory(dir)) {
                throw IoError("cannot create output directory '" + dir.string() + "'");
            }
            ConfidenceSpec c80 = confidence_spec(0.80);
            const double acr = risk_class(ProductRisk::medium).acr;
            const double alpha = 0.2, beta = 0.1;
            const double z_alpha_printed = 1.645, z_beta_printed = 1.282;

            // Sizes vs preliminary rate at w=0.1: interval design next to the
            // hypothesis design under both pairings.
            std::string t4 = "fp,interval_n,hypothesis_n_printed,hypothesis_n_canonical,note\n";
            for (double fp : {0.5, 0.6, 0.65, 0.7, 0.75, 0.8}) {
                int ni = sample_size_interval(IntervalSizingSpec{0.1, fp, c80});
                int np = sample_size_power_z(acr, z_alpha_printed, z_beta_printed, fp,
                                             VariancePairing::printed);
                int nc = sample_size_power(
                    PowerSizingSpec{acr, alpha, beta, fp, VariancePairing::canonical});
                t4 += fmt_g(fp) + "," + std::to_string(ni) + "," + std::to_string(np) + "," +
                      std::to_string(nc) +
                      ",printed pairing z_alpha=1.645 z_beta=1.282; canonical pairing "
                      "alpha=0.2 beta=0.1\n";
            }

            // Sizes for target powers at fp=0.7 (canonical pairing), with the
            // power the rounded-up n actually achieves.
            std::string t5 = "power,n,achieved_power,note\n";
            for (double target : {0.70, 0.75, 0.80, 0.85, 0.90, 0.95}) {
                int n = sample_size_power_z(acr, phi_inv(1.0 - alpha), phi_inv(target), 0.7,
                                            VariancePairing::canonical);
                double achieved = power(n, 0.7, acr, c80);
                t5 += fmt_g(target) + "," + std::to_string(n) + "," + fmt_g(achieved) +
                      ",canonical pairing alpha=0.2 fp=0.7\n";
            }

            // Interval sizes vs width at fp=0.8.
            std::string t6 = "w,n,note\n";
            for (double w : {0.10, 0.15, 0.20}) {
                int n = sample_size_interval(IntervalSizingSpec{w, 0.8, c80});
                std::string note = w == 0.20 ? "paper prints 28" : "";
                t6 += fmt_g(w) + "," + std::to_string(n) + "," + note + "\n";
            }

            std::vector<std::string> files;
            const std::pair<const char*, const std::string*> sheets[] = {
                {"table4.csv", &t4}, {"table5.csv", &t5}, {"table6.csv", &t6}};
            for (const auto& [name, body] : sheets) {
                fs::path p = dir / name;
                detail::write_text_file(p, *body);
                files.push_back(p.string());
            }
            warnings.push_back(detail::kPairingNote);
            ordered_json inputs{{"out", tb_out}};
            ordered_json result{{"files", files}};
            detail::print_envelope(out, "tables", inputs, result, warnings);
            return 0;
        }

        err << "samplan: no subcommand selected\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            out << app.help();
            return 0;
        }
        err << "samplan: " << e.what() << "\n";
        return 2;
    } catch (const UnboundedSampleSizeError& e) {
        err << "samplan: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        err << "samplan: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "samplan: " << e.what() << "\n";
        return 2;
    }
}

} // namespace samplan::cli
