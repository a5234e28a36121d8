#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sidechan/ingest.hpp"
#include "sidechan/leakage.hpp"

namespace sidechan {

struct AnalysisRequest {
    std::vector<std::string> parameters;  // empty -> every parameter common to all diodes
    std::vector<Method> methods;          // Exact is always computed (budget needs it)
    ReportOptions options;
    std::size_t cell_budget = kDefaultCellBudget;
    std::size_t joint_max_cells_per_parameter = 128;
    double clamp_warn_fraction = 0.01;
};

struct InputFingerprint {
    std::string kind;  // "manifest" | "preset"
    std::string name;  // path or preset name
    std::uint64_t seed = 0;
};

struct ParameterReport {
    // basis -> method -> result
    std::map<Basis, std::map<Method, LeakageResult>> results;
    double max_exact_bits = 0.0;  // max over bases of the Exact leakage
};

struct KeyRateSection {
    double qber = 0.0;
    double i_ab = 0.0;
    double i_ae_budget = 0.0;
    double r_dr = 0.0;
};

struct ReportWarnings {
    std::size_t clamped_values = 0;
    double clamped_mass_fraction = 0.0;
    bool clamp_fraction_exceeded = false;
    std::vector<std::string> eq8_negative_raw;  // "parameter/basis" entries
};

struct JointSection {
    std::map<Basis, LeakageResult> per_basis;
    double max_bits = 0.0;
};

struct ReportDocument {
    int schema_version = 0;
    std::string tool_version;
    InputFingerprint input;
    std::map<std::string, ParameterReport> parameters;
    PolarizationErrors polarization_errors;
    PolarizationLeakage polarization;
    double budget_total_exact = 0.0;  // sum over parameters of max-over-basis Exact
    std::optional<JointSection> joint_independent;  // present when <= 3 parameters analyzed
    std::optional<KeyRateSection> keyrate;
    ReportWarnings warnings;
};

/// Run the full per-parameter, per-basis analysis and assemble the report.
ReportDocument analyze_ensemble(const SourceEnsemble& ensemble, const AnalysisRequest& request,
                                const InputFingerprint& input, const LoadStats* stats = nullptr);

/// Attach the key-rate section: i_ab from the QBER, i_ae from the report's
/// Exact budget.
void attach_keyrate(ReportDocument& report, double qber);

nlohmann::json report_to_json(const ReportDocument& report);
void write_report(const std::filesystem::path& path, const ReportDocument& report);

}  // namespace sidechan
