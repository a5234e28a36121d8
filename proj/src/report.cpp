#include "sidechan/report.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <utility>

#include <nlohmann/json.hpp>

#include "sidechan/version.hpp"

namespace sidechan {

using nlohmann::json;

namespace {

json result_to_json(const LeakageResult& r) {
    json diag = json::object();
    for (const auto& [key, value] : r.diagnostics) diag[key] = value;
    return json{{"method", std::string(method_name(r.method))},
                {"bits_per_pulse", r.bits_per_pulse},
                {"diagnostics", std::move(diag)}};
}

}  // namespace

ReportDocument analyze_ensemble(const SourceEnsemble& ensemble, const AnalysisRequest& request,
                                const InputFingerprint& input, const LoadStats* stats) {
    ReportDocument doc;
    doc.schema_version = kReportSchemaVersion;
    doc.tool_version = kVersion;
    doc.input = input;

    std::vector<std::string> params =
        request.parameters.empty() ? ensemble.common_parameters() : request.parameters;
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end()), params.end());
    for (const auto& p : params) {
        if (!ensemble.has_parameter(p)) {
            raise(ErrorCode::MissingParameter,
                  "parameter '" + p + "' is not recorded for all four diodes");
        }
    }

    // The Exact engine is the oracle of record and feeds the budget, so it
    // always runs even when filtered out of the request.
    std::vector<Method> methods = request.methods;
    if (methods.empty()) {
        methods = {Method::Exact, Method::Eq8Literal, Method::Guessing};
    }
    if (std::find(methods.begin(), methods.end(), Method::Exact) == methods.end()) {
        methods.insert(methods.begin(), Method::Exact);
    }

    // parameter x method jobs run concurrently; the reduction below walks
    // them in (parameter, method) order, so the report is deterministic
    // regardless of completion order
    std::vector<std::pair<std::string, Method>> jobs;
    for (const auto& param : params) {
        for (Method method : methods) jobs.emplace_back(param, method);
    }
    std::vector<std::future<BasisReport>> futures;
    futures.reserve(jobs.size());
    for (const auto& [param, method] : jobs) {
        futures.push_back(std::async(std::launch::async, [&ensemble, &request, param, method] {
            return basis_report(ensemble, param, method, request.options);
        }));
    }

    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const auto& [param, method] = jobs[j];
        BasisReport br = futures[j].get();
        ParameterReport& param_report = doc.parameters[param];
        if (method == Method::Exact) {
            param_report.max_exact_bits = br.max_bits_per_pulse;
            doc.budget_total_exact += br.max_bits_per_pulse;
        }
        for (auto& [basis, result] : br.per_basis) {
            auto neg = result.diagnostics.find("negative_raw");
            if (neg != result.diagnostics.end() && neg->second > 0.0) {
                doc.warnings.eq8_negative_raw.push_back(param + "/" +
                                                        std::string(basis_name(basis)));
            }
            param_report.results[basis].emplace(method, std::move(result));
        }
    }

    doc.polarization_errors = ensemble.polarization_errors();
    doc.polarization = polarization_leakage(doc.polarization_errors);

    if (!params.empty() && params.size() <= 3) {
        JointSection joint;
        for (Basis basis : kAllBases) {
            std::vector<BasisPair> pairs;
            pairs.reserve(params.size());
            for (const auto& param : params) {
                pairs.push_back(make_basis_pair(ensemble, param, basis)
                                    .coarsened(request.joint_max_cells_per_parameter));
            }
            LeakageResult result = joint_leakage(pairs, request.cell_budget);
            joint.max_bits = std::max(joint.max_bits, result.bits_per_pulse);
            joint.per_basis.emplace(basis, std::move(result));
        }
        doc.joint_independent = std::move(joint);
    }

    if (stats) {
        doc.warnings.clamped_values = stats->clamped_values;
        doc.warnings.clamped_mass_fraction = stats->clamped_fraction();
        doc.warnings.clamp_fraction_exceeded =
            doc.warnings.clamped_mass_fraction > request.clamp_warn_fraction;
    }
    return doc;
}

void attach_keyrate(ReportDocument& report, double qber) {
    KeyRateSection section;
    section.qber = qber;
    section.i_ab = qber_to_iab(qber);
    section.i_ae_budget = report.budget_total_exact;
    section.r_dr = section.i_ab - section.i_ae_budget;
    report.keyrate = section;
}

json report_to_json(const ReportDocument& report) {
    json parameters = json::object();
    for (const auto& [name, param_report] : report.parameters) {
        json entry = json::object();
        for (const auto& [basis, methods] : param_report.results) {
            json per_method = json::object();
            for (const auto& [method, result] : methods) {
                per_method[std::string(method_name(method))] = result_to_json(result);
            }
            entry[std::string(basis_name(basis))] = std::move(per_method);
        }
        entry["max_exact_bits"] = param_report.max_exact_bits;
        parameters[name] = std::move(entry);
    }

    json doc{
        {"schema_version", report.schema_version},
        {"tool_version", report.tool_version},
        {"input",
         {{"kind", report.input.kind}, {"name", report.input.name}, {"seed", report.input.seed}}},
        {"parameters", std::move(parameters)},
        {"polarization",
         {{"e_hv", report.polarization_errors.e_hv},
          {"e_da", report.polarization_errors.e_da},
          {"delta_e", report.polarization.delta_e},
          {"leakage_proxy", report.polarization.leakage_proxy},
          {"proportionality_constant", 1.0}}},
        {"budget", {{"total_exact", report.budget_total_exact}}},
        {"warnings",
         {{"clamped_values", report.warnings.clamped_values},
          {"clamped_mass_fraction", report.warnings.clamped_mass_fraction},
          {"clamp_fraction_exceeded", report.warnings.clamp_fraction_exceeded},
          {"eq8_negative_raw", report.warnings.eq8_negative_raw}}},
    };

    if (report.joint_independent) {
        json joint = json::object();
        for (const auto& [basis, result] : report.joint_independent->per_basis) {
            joint[std::string(basis_name(basis))] = result_to_json(result);
        }
        joint["max_bits"] = report.joint_independent->max_bits;
        doc["joint_independent"] = std::move(joint);
    }
    if (report.keyrate) {
        doc["keyrate"] = {{"qber", report.keyrate->qber},
                          {"i_ab", report.keyrate->i_ab},
                          {"i_ae_budget", report.keyrate->i_ae_budget},
                          {"r_dr", report.keyrate->r_dr}};
    }
    return doc;
}

void write_report(const std::filesystem::path& path, const ReportDocument& report) {
    std::ofstream out(path);
    if (!out) {
        raise(ErrorCode::FileNotFound, "cannot write " + path.string());
    }
    out << report_to_json(report).dump(2) << "\n";
}

}  // namespace sidechan
