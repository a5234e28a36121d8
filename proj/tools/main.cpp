// Command-line front end: analyze measured ensembles, run synthetic
// studies, and compute key-rate budgets.
//
// Exit codes are a contract:
//   0  success (and, for keyrate, a positive key rate)
//   1  internal error
//   2  input validation error
//   3  key rate <= 0 (protocol abort signal)

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sidechan/ingest.hpp"
#include "sidechan/leakage.hpp"
#include "sidechan/report.hpp"
#include "sidechan/synth.hpp"
#include "sidechan/version.hpp"
#include "sidechan/xcorr.hpp"

namespace fs = std::filesystem;
using namespace sidechan;

namespace {

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> methods;
    for (const auto& name : names) {
        auto m = parse_method(name);
        if (!m) {
            raise(ErrorCode::OutOfRange,
                  "unknown method '" + name + "' (use exact|eq8|guessing|mc)");
        }
        methods.push_back(*m);
    }
    return methods;
}

std::size_t cell_budget_from_env() {
    const char* env = std::getenv("SIDECHAN_CELL_BUDGET");
    if (!env) return kDefaultCellBudget;
    unsigned long long value = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::string_view(env).size(), value);
    if (ec != std::errc{} || *ptr != '\0' || value < 2) {
        raise(ErrorCode::OutOfRange, "SIDECHAN_CELL_BUDGET must be a positive integer >= 2");
    }
    return static_cast<std::size_t>(value);
}

struct SweepSpec {
    enum class Kind { Offset, Pixel } kind = Kind::Offset;
    std::string parameter;               // offset sweeps
    std::vector<double> values;          // offsets or factors
};

SweepSpec parse_sweep(const std::string& text) {
    SweepSpec spec;
    const auto first_colon = text.find(':');
    if (first_colon == std::string::npos) {
        raise(ErrorCode::BadSweep, "sweep must be '<param>:lo:hi:steps' or 'pixel:f1,f2,...'");
    }
    const std::string head = text.substr(0, first_colon);
    const std::string rest = text.substr(first_colon + 1);

    auto to_double = [](const std::string& s, double& out) {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc{} && ptr == s.data() + s.size();
    };

    if (head == "pixel") {
        std::size_t begin = 0;
        while (begin <= rest.size()) {
            const auto comma = rest.find(',', begin);
            const std::string token =
                rest.substr(begin, comma == std::string::npos ? std::string::npos : comma - begin);
            double factor = 0.0;
            if (!to_double(token, factor) || factor < 1.0 || factor != std::floor(factor)) {
                raise(ErrorCode::BadSweep, "pixel sweep factors must see integers >= 1");
            }
            spec.values.push_back(factor);
            if (comma == std::string::npos) break;
            begin = comma + 1;
        }
        spec.kind = SweepSpec::Kind::Pixel;
        return spec;
    }

    if (head != "wavelength" && head != "pulse" && head != "arrival" && head != "spatial") {
        raise(ErrorCode::BadSweep, "unknown sweep parameter '" + head + "'");
    }
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (begin <= rest.size()) {
        const auto colon = rest.find(':', begin);
        parts.push_back(
            rest.substr(begin, colon == std::string::npos ? std::string::npos : colon - begin));
        if (colon == std::string::npos) break;
        begin = colon + 1;
    }
    double lo = 0.0;
    double hi = 0.0;
    double steps = 0.0;
    if (parts.size() != 3 || !to_double(parts[0], lo) || !to_double(parts[1], hi) ||
        !to_double(parts[2], steps) || steps < 2.0 || steps != std::floor(steps) || hi < lo) {
        raise(ErrorCode::BadSweep, "offset sweep must be '<param>:lo:hi:steps' with steps >= 2");
    }
    spec.kind = SweepSpec::Kind::Offset;
    spec.parameter = head;
    const auto n = static_cast<std::size_t>(steps);
    for (std::size_t i = 0; i < n; ++i) {
        spec.values.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                       static_cast<double>(n - 1));
    }
    return spec;
}

// Sweep point: the second diode of each basis becomes the first diode
// shifted by delta in the swept parameter, isolating the offset dimension.
EnsembleConfig offset_config(const EnsembleConfig& base, const std::string& parameter,
                             double delta) {
    EnsembleConfig c = base;
    auto shift = [&](DiodeSpec& to, const DiodeSpec& from) {
        if (parameter == "wavelength") {
            to.wavelength_nm = from.wavelength_nm;
            to.wavelength_nm.mean += delta;
        } else if (parameter == "pulse") {
            to.pulse_ps = from.pulse_ps;
            to.pulse_ps.mean += delta;
        } else if (parameter == "arrival") {
            to.arrival_ns = from.arrival_ns;
            to.arrival_ns.mean += delta;
        } else {
            to.spatial_mm = from.spatial_mm;
            to.spatial_mm.center_x_mm += delta;
        }
    };
    shift(c.diodes[1], c.diodes[0]);  // V from H
    shift(c.diodes[3], c.diodes[2]);  // A from D
    return c;
}

int cmd_analyze(const std::string& manifest, const std::vector<std::string>& params,
                const std::vector<std::string>& method_names, const std::string& out_path) {
    LoadStats stats;
    SourceEnsemble ensemble = load_ensemble(manifest, &stats);

    AnalysisRequest request;
    request.parameters = params;
    request.methods = parse_methods(method_names);
    request.cell_budget = cell_budget_from_env();

    InputFingerprint input{"manifest", manifest, 0};
    ReportDocument doc = analyze_ensemble(ensemble, request, input, &stats);
    write_report(out_path, doc);

    std::cout << "wrote " << out_path << "\n";
    std::cout << "exact leakage budget: " << format_double(doc.budget_total_exact)
              << " bits/pulse over " << doc.parameters.size() << " parameter(s)\n";
    if (!doc.warnings.eq8_negative_raw.empty()) {
        std::cerr << "warning: similarity estimate went negative (clamped) for:";
        for (const auto& entry : doc.warnings.eq8_negative_raw) std::cerr << " " << entry;
        std::cerr << "\n";
    }
    if (doc.warnings.clamp_fraction_exceeded) {
        std::cerr << "warning: clamped negative mass fraction "
                  << format_double(doc.warnings.clamped_mass_fraction)
                  << " exceeds the configured threshold\n";
    }
    return 0;
}

int cmd_simulate(const std::string& preset, std::uint64_t seed, const std::string& sweep_text,
                 const std::vector<std::string>& method_names, const std::string& out_dir) {
    const EnsembleConfig base = preset_config(preset, seed);
    fs::create_directories(out_dir);

    std::vector<Method> methods = parse_methods(method_names);
    if (methods.empty()) {
        methods = {Method::Exact, Method::Eq8Literal, Method::Guessing};
    }
    ReportOptions options;
    options.mc_seed = seed;

    if (sweep_text.empty()) {
        AnalysisRequest request;
        request.methods = methods;
        request.cell_budget = cell_budget_from_env();
        request.options = options;
        InputFingerprint input{"preset", preset, seed};
        ReportDocument doc = analyze_ensemble(synth_ensemble(base), request, input, nullptr);
        const fs::path report_path = fs::path(out_dir) / "report.json";
        write_report(report_path, doc);
        std::cout << "wrote " << report_path.string() << "\n";
        return 0;
    }

    const SweepSpec sweep = parse_sweep(sweep_text);
    nlohmann::json summary{
        {"schema_version", kReportSchemaVersion},
        {"tool_version", kVersion},
        {"input", {{"kind", "preset"}, {"name", preset}, {"seed", seed}}},
        {"sweep", sweep_text},
    };
    nlohmann::json points = nlohmann::json::array();

    // per-method curve rows: sweep value -> max-over-basis leakage
    std::map<Method, std::string> curves;
    std::uint64_t substream = 0;

    for (double value : sweep.values) {
        nlohmann::json point{{"value", value}};
        std::map<Basis, BasisPair> pairs;
        std::string parameter;
        if (sweep.kind == SweepSpec::Kind::Offset) {
            parameter = sweep.parameter;
            SourceEnsemble shifted = synth_ensemble(offset_config(base, parameter, value));
            for (Basis b : kAllBases) pairs.emplace(b, make_basis_pair(shifted, parameter, b));
        } else {
            parameter = "spatial";
            SourceEnsemble ensemble = synth_ensemble(base);
            const auto factor = static_cast<std::size_t>(value);
            for (Basis b : kAllBases) {
                BasisPair pair = make_basis_pair(ensemble, parameter, b);
                const auto& [m0, m1] = pair.dists_2d();
                pairs.emplace(b, BasisPair(b, downsample_2d(m0, factor),
                                           downsample_2d(m1, factor), pair.prior0()));
            }
        }
        for (Method method : methods) {
            double max_bits = 0.0;
            nlohmann::json per_basis = nlohmann::json::object();
            for (const auto& [basis, pair] : pairs) {
                ReportOptions local = options;
                local.mc_seed = seed + 1000003ull * ++substream;
                LeakageResult r = evaluate_pair(pair, method, local);
                max_bits = std::max(max_bits, r.bits_per_pulse);
                per_basis[std::string(basis_name(basis))] = r.bits_per_pulse;
            }
            point[std::string(method_name(method))] = per_basis;
            curves[method] += format_double(value) + " " + format_double(max_bits) + "\n";
        }
        points.push_back(std::move(point));
    }
    summary["parameter"] = sweep.kind == SweepSpec::Kind::Offset ? sweep.parameter : "spatial";
    summary["points"] = std::move(points);

    const std::string stem =
        sweep.kind == SweepSpec::Kind::Offset ? "sweep_" + sweep.parameter : "sweep_pixel";
    for (const auto& [method, rows] : curves) {
        const fs::path curve_path =
            fs::path(out_dir) / (stem + "_" + std::string(method_name(method)) + ".dat");
        std::ofstream out(curve_path);
        out << rows;
    }
    const fs::path summary_path = fs::path(out_dir) / "summary.json";
    std::ofstream out(summary_path);
    out << summary.dump(2) << "\n";
    std::cout << "wrote " << summary_path.string() << " and " << curves.size()
              << " curve file(s)\n";
    return 0;
}

int cmd_keyrate(double qber, const std::string& manifest, const std::string& preset,
                std::uint64_t seed, const std::string& direction) {
    if (direction != "dr") {
        raise(ErrorCode::MissingInput,
              "only direct reconciliation is supported; reverse reconciliation needs I(B:E), "
              "which this tool does not model");
    }
    qber_to_iab(qber);  // validate the range before the (slower) analysis

    AnalysisRequest request;
    request.methods = {Method::Exact};
    request.cell_budget = cell_budget_from_env();

    std::optional<ReportDocument> doc;
    if (!manifest.empty()) {
        LoadStats stats;
        SourceEnsemble ensemble = load_ensemble(manifest, &stats);
        doc = analyze_ensemble(ensemble, request, {"manifest", manifest, 0}, &stats);
    } else {
        SourceEnsemble ensemble = synth_ensemble(preset_config(preset, seed));
        doc = analyze_ensemble(ensemble, request, {"preset", preset, seed}, nullptr);
    }
    attach_keyrate(*doc, qber);
    const KeyRateSection& kr = *doc->keyrate;

    std::cerr << "I(A:B) = " << format_double(kr.i_ab) << " bits/pulse at QBER "
              << format_double(qber) << "\n";
    std::cerr << "I(A:E) budget = " << format_double(kr.i_ae_budget) << " bits/pulse\n";
    std::cout << format_double(kr.r_dr) << "\n";
    return kr.r_dr > 0.0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BB84 transmitter side-channel leakage analyzer"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "analyze a measured ensemble from a manifest");
    std::string manifest;
    std::vector<std::string> params;
    std::vector<std::string> methods;
    std::string out_path = "report.json";
    analyze->add_option("--manifest", manifest, "ensemble manifest path")->required();
    analyze->add_option("--param", params, "restrict to these parameters");
    analyze->add_option("--method", methods, "methods: exact eq8 guessing mc");
    analyze->add_option("--out", out_path, "report output path");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run a synthetic study from a preset");
    std::string preset;
    std::uint64_t seed = 0;
    std::string sweep;
    std::string out_dir = "sim_out";
    simulate->add_option("--preset", preset, "preset: identical | paper | worst-case")
        ->required();
    simulate->add_option("--seed", seed, "random seed for Monte-Carlo paths");
    simulate->add_option("--sweep", sweep, "'<param>:lo:hi:steps' or 'pixel:f1,f2,...'");
    simulate->add_option("--method", methods, "methods: exact eq8 guessing mc");
    simulate->add_option("--out", out_dir, "output directory");

    // keyrate
    auto* keyrate = app.add_subcommand("keyrate", "secret-key-rate bound from QBER and leakage");
    double qber = 0.0;
    std::string kr_manifest;
    std::string kr_preset;
    std::uint64_t kr_seed = 0;
    std::string direction = "dr";
    keyrate->add_option("--qber", qber, "quantum bit error rate in [0, 0.5]")->required();
    keyrate->add_option("--manifest", kr_manifest, "ensemble manifest path");
    keyrate->add_option("--preset", kr_preset, "synthetic preset name");
    keyrate->add_option("--seed", kr_seed, "seed for preset ensembles");
    keyrate->add_option("--direction", direction, "reconciliation direction (dr)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(analyze)) {
            return cmd_analyze(manifest, params, methods, out_path);
        }
        if (app.got_subcommand(simulate)) {
            return cmd_simulate(preset, seed, sweep, methods, out_dir);
        }
        if (!kr_manifest.empty() == !kr_preset.empty()) {
            raise(ErrorCode::MissingInput, "keyrate needs exactly one of --manifest / --preset");
        }
        return cmd_keyrate(qber, kr_manifest, kr_preset, kr_seed, direction);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
