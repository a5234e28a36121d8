#include "sidechan/ingest.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "sidechan/signal.hpp"

namespace sidechan {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool parse_double(std::string_view text, double& out) {
    text = trim(text);
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::ifstream open_or_raise(const fs::path& path) {
    if (!fs::exists(path)) {
        raise(ErrorCode::FileNotFound, path.string());
    }
    std::ifstream in(path);
    if (!in) {
        raise(ErrorCode::FileNotFound, "cannot open " + path.string());
    }
    return in;
}

std::string loc(const fs::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line);
}

// Split a CSV line; no quoting, instrument exports never use it.
std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t begin = 0;
    while (true) {
        const std::size_t comma = line.find(',', begin);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(begin)));
            break;
        }
        out.push_back(trim(line.substr(begin, comma - begin)));
        begin = comma + 1;
    }
    return out;
}

Axis axis_from_samples(const std::vector<double>& xs, Unit unit, const fs::path& path) {
    const double span = xs.back() - xs.front();
    const double step = span / static_cast<double>(xs.size() - 1);
    if (!(step > 0.0)) {
        raise(ErrorCode::NonUniformAxis, path.string() + ": axis is not strictly increasing");
    }
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double local = xs[i + 1] - xs[i];
        if (std::abs(local - step) > 1e-6 * step) {
            raise(ErrorCode::NonUniformAxis,
                  path.string() + ": axis step deviates at row " + std::to_string(i + 1) + " (" +
                      format_double(local) + " vs " + format_double(step) + ")");
        }
    }
    return Axis(xs.front(), step, xs.size(), unit);
}

double clamp_negative(double v, LoadStats& stats, double measure) {
    if (v < 0.0) {
        ++stats.clamped_values;
        stats.clamped_mass += -v * measure;
        return 0.0;
    }
    return v;
}

}  // namespace

void LoadStats::merge(const LoadStats& other) noexcept {
    clamped_values += other.clamped_values;
    clamped_mass += other.clamped_mass;
    total_mass += other.total_mass;
}

SampledDistribution1D read_dist_csv(const fs::path& path, LoadStats* stats) {
    std::ifstream in = open_or_raise(path);
    std::optional<Unit> unit;
    std::vector<double> xs;
    std::vector<double> vs;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = trim(line);
        if (text.empty()) continue;
        if (text.front() == '#') {
            std::string_view body = trim(text.substr(1));
            if (body.starts_with("unit:")) {
                unit = parse_unit(trim(body.substr(5)));
                if (!unit) {
                    raise(ErrorCode::BadHeader, loc(path, line_no) + ": unknown unit '" +
                                                    std::string(trim(body.substr(5))) + "'");
                }
            }
            continue;
        }
        const auto fields = split_csv(text);
        double x = 0.0;
        double v = 0.0;
        if (fields.size() != 2 || !parse_double(fields[0], x) || !parse_double(fields[1], v)) {
            raise(ErrorCode::UnparseableRow,
                  loc(path, line_no) + ": expected 'axis,value', got '" + std::string(text) + "'");
        }
        xs.push_back(x);
        vs.push_back(v);
    }
    if (!unit) {
        raise(ErrorCode::BadHeader, path.string() + ": missing '# unit: <nm|ps|ns|mm>' header");
    }
    if (xs.size() < 2) {
        raise(ErrorCode::TooFewRows,
              path.string() + ": need at least 2 rows, got " + std::to_string(xs.size()));
    }
    const Axis axis = axis_from_samples(xs, *unit, path);

    LoadStats local;
    for (auto& v : vs) v = clamp_negative(v, local, axis.step());
    for (double v : vs) local.total_mass += v * axis.step();
    if (stats) stats->merge(local);
    return normalize(SampledDistribution1D(axis, std::move(vs)));
}

SpatialMode2D read_matrix_csv(const fs::path& path, LoadStats* stats) {
    std::ifstream in = open_or_raise(path);
    std::optional<std::pair<double, double>> x_spec;
    std::optional<std::pair<double, double>> y_spec;
    Unit unit = Unit::Millimetre;
    std::vector<std::vector<double>> rows;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = trim(line);
        if (text.empty()) continue;
        if (text.front() == '#') {
            std::string_view body = trim(text.substr(1));
            auto parse_axis_spec = [&](std::string_view payload,
                                       std::optional<std::pair<double, double>>& slot) {
                const auto fields = split_csv(payload);
                double start = 0.0;
                double step = 0.0;
                if (fields.size() != 2 || !parse_double(fields[0], start) ||
                    !parse_double(fields[1], step) || step <= 0.0) {
                    raise(ErrorCode::BadHeader,
                          loc(path, line_no) + ": expected 'start,step' with step > 0");
                }
                slot = {start, step};
            };
            if (body.starts_with("x:")) {
                parse_axis_spec(trim(body.substr(2)), x_spec);
            } else if (body.starts_with("y:")) {
                parse_axis_spec(trim(body.substr(2)), y_spec);
            } else if (body.starts_with("unit:")) {
                auto u = parse_unit(trim(body.substr(5)));
                if (!u) {
                    raise(ErrorCode::BadHeader, loc(path, line_no) + ": unknown unit");
                }
                unit = *u;
            }
            continue;
        }
        const auto fields = split_csv(text);
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            double v = 0.0;
            if (!parse_double(f, v)) {
                raise(ErrorCode::UnparseableRow,
                      loc(path, line_no) + ": cannot parse '" + std::string(f) + "'");
            }
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            raise(ErrorCode::RaggedRows, loc(path, line_no) + ": row of length " +
                                             std::to_string(row.size()) + " in a matrix of width " +
                                             std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (!x_spec || !y_spec) {
        raise(ErrorCode::BadHeader,
              path.string() + ": missing '# x: start,step' / '# y: start,step' headers");
    }
    if (rows.size() < 2 || rows.front().size() < 2) {
        raise(ErrorCode::TooFewRows, path.string() + ": matrix must be at least 2x2");
    }

    Axis x_axis(x_spec->first, x_spec->second, rows.front().size(), unit);
    Axis y_axis(y_spec->first, y_spec->second, rows.size(), unit);

    LoadStats local;
    const double cell = x_axis.step() * y_axis.step();
    std::vector<double> intensity;
    intensity.reserve(rows.size() * rows.front().size());
    for (auto& row : rows) {
        for (double v : row) {
            const double kept = clamp_negative(v, local, cell);
            local.total_mass += kept * cell;
            intensity.push_back(kept);
        }
    }
    if (stats) stats->merge(local);
    return normalize(SpatialMode2D(x_axis, y_axis, std::move(intensity)));
}

SampledDistribution1D read_timetags(const fs::path& path, double clock_period_ns,
                                    std::size_t bins) {
    std::ifstream in = open_or_raise(path);
    std::vector<double> tags;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        double tag = 0.0;
        if (!parse_double(text, tag)) {
            raise(ErrorCode::UnparseableRow,
                  loc(path, line_no) + ": cannot parse '" + std::string(text) + "'");
        }
        tags.push_back(tag);
    }
    if (tags.empty()) {
        raise(ErrorCode::EmptyInput, path.string() + ": no time tags");
    }
    return histogram_from_timetags(tags, clock_period_ns, bins);
}

namespace {

constexpr int kManifestVersion = 1;
constexpr std::size_t kDefaultTagBins = 256;

struct ManifestDiode {
    Pol pol = Pol::H;
    double mu = 0.1;
    // parameter -> (path, timetag bins when loaded from tags, 0 otherwise)
    std::vector<std::tuple<std::string, std::string, std::size_t>> entries;
};

}  // namespace

SourceEnsemble load_ensemble(const fs::path& manifest_path, LoadStats* stats) {
    std::ifstream in = open_or_raise(manifest_path);
    const fs::path base = manifest_path.parent_path();

    std::optional<int> version;
    double clock_period_ns = 200.0;
    PolarizationErrors errors;
    std::vector<ManifestDiode> diodes;
    ManifestDiode* current = nullptr;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = trim(line);
        if (text.empty() || text.front() == '#') continue;

        if (text.front() == '[') {
            if (!text.ends_with("]")) {
                raise(ErrorCode::BadManifest, loc(manifest_path, line_no) + ": unclosed section");
            }
            std::string_view section = trim(text.substr(1, text.size() - 2));
            if (!section.starts_with("diode")) {
                raise(ErrorCode::BadManifest, loc(manifest_path, line_no) + ": unknown section '" +
                                                  std::string(section) + "'");
            }
            auto pol = parse_pol(trim(section.substr(5)));
            if (!pol) {
                raise(ErrorCode::BadManifest,
                      loc(manifest_path, line_no) + ": diode label must be one of H, V, D, A");
            }
            for (const auto& d : diodes) {
                if (d.pol == *pol) {
                    raise(ErrorCode::DuplicateLabel, loc(manifest_path, line_no) +
                                                         ": second [diode " +
                                                         std::string(1, pol_label(*pol)) + "]");
                }
            }
            diodes.push_back({*pol, 0.1, {}});
            current = &diodes.back();
            continue;
        }

        const std::size_t eq = text.find('=');
        if (eq == std::string_view::npos) {
            raise(ErrorCode::BadManifest,
                  loc(manifest_path, line_no) + ": expected 'key = value'");
        }
        const std::string key(trim(text.substr(0, eq)));
        const std::string value(trim(text.substr(eq + 1)));
        double num = 0.0;

        if (!current) {
            if (key == "version") {
                if (!parse_double(value, num) || num != kManifestVersion) {
                    raise(ErrorCode::BadManifest, loc(manifest_path, line_no) +
                                                      ": unsupported manifest version '" + value +
                                                      "'");
                }
                version = kManifestVersion;
            } else if (key == "clock_period_ns") {
                if (!parse_double(value, num) || num <= 0.0) {
                    raise(ErrorCode::BadManifest,
                          loc(manifest_path, line_no) + ": clock_period_ns must be positive");
                }
                clock_period_ns = num;
            } else if (key == "e_hv" || key == "e_da") {
                if (!parse_double(value, num) || num < 0.0 || num > 1.0) {
                    raise(ErrorCode::BadManifest,
                          loc(manifest_path, line_no) + ": " + key + " must lie in [0, 1]");
                }
                (key == "e_hv" ? errors.e_hv : errors.e_da) = num;
            } else {
                raise(ErrorCode::BadManifest,
                      loc(manifest_path, line_no) + ": unknown key '" + key + "'");
            }
            continue;
        }

        if (key == "mu") {
            if (!parse_double(value, num) || num <= 0.0) {
                raise(ErrorCode::BadManifest,
                      loc(manifest_path, line_no) + ": mu must be positive");
            }
            current->mu = num;
        } else if (key == "arrival_tags") {
            // value: <path> [bins]
            const std::size_t space = value.find_last_of(" \t");
            std::string file = value;
            std::size_t bins = kDefaultTagBins;
            if (space != std::string::npos) {
                double parsed = 0.0;
                if (parse_double(std::string_view(value).substr(space + 1), parsed) &&
                    parsed >= 2.0 && parsed == std::floor(parsed)) {
                    bins = static_cast<std::size_t>(parsed);
                    file = std::string(trim(std::string_view(value).substr(0, space)));
                }
            }
            current->entries.emplace_back("arrival", file, bins);
        } else if (!key.empty()) {
            current->entries.emplace_back(key, value, 0);
        }
    }

    if (!version) {
        raise(ErrorCode::BadManifest, manifest_path.string() + ": missing 'version = 1'");
    }
    if (diodes.size() < 4) {
        std::string missing;
        for (Pol p : kAllPols) {
            bool found = false;
            for (const auto& d : diodes) found = found || d.pol == p;
            if (!found) missing += pol_label(p);
        }
        raise(ErrorCode::MissingDiode,
              manifest_path.string() + ": missing diode(s) " + missing);
    }

    std::vector<DiodeRecord> records;
    records.reserve(diodes.size());
    for (const auto& d : diodes) {
        DiodeRecord rec;
        rec.polarization = d.pol;
        rec.mean_photon_number = d.mu;
        for (const auto& [param, rel_path, tag_bins] : d.entries) {
            const fs::path file = base / rel_path;
            if (tag_bins > 0) {
                rec.parameters.insert_or_assign(
                    param, read_timetags(file, clock_period_ns, tag_bins));
            } else if (param == "spatial") {
                rec.parameters.insert_or_assign(param, read_matrix_csv(file, stats));
            } else {
                rec.parameters.insert_or_assign(param, read_dist_csv(file, stats));
            }
        }
        records.push_back(std::move(rec));
    }
    return SourceEnsemble(std::move(records), errors, clock_period_ns);
}

void write_dist_csv(const fs::path& path, const SampledDistribution1D& d) {
    std::ofstream out(path);
    if (!out) {
        raise(ErrorCode::FileNotFound, "cannot write " + path.string());
    }
    out << "# unit: " << unit_name(d.unit()) << "\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
        out << format_double(d.axis().value(i)) << "," << format_double(d.density()[i]) << "\n";
    }
}

void write_matrix_csv(const fs::path& path, const SpatialMode2D& m) {
    std::ofstream out(path);
    if (!out) {
        raise(ErrorCode::FileNotFound, "cannot write " + path.string());
    }
    out << "# unit: " << unit_name(m.x_axis().unit()) << "\n";
    out << "# x: " << format_double(m.x_axis().start()) << "," << format_double(m.x_axis().step())
        << "\n";
    out << "# y: " << format_double(m.y_axis().start()) << "," << format_double(m.y_axis().step())
        << "\n";
    for (std::size_t iy = 0; iy < m.height(); ++iy) {
        for (std::size_t ix = 0; ix < m.width(); ++ix) {
            if (ix) out << ",";
            out << format_double(m.at(iy, ix));
        }
        out << "\n";
    }
}

void write_timetags(const fs::path& path, std::span<const double> tags_ns) {
    std::ofstream out(path);
    if (!out) {
        raise(ErrorCode::FileNotFound, "cannot write " + path.string());
    }
    for (double t : tags_ns) out << format_double(t) << "\n";
}

std::filesystem::path export_ensemble(const SourceEnsemble& ensemble, const fs::path& dir) {
    fs::create_directories(dir);
    const fs::path manifest_path = dir / "ensemble.manifest";
    std::ofstream out(manifest_path);
    if (!out) {
        raise(ErrorCode::FileNotFound, "cannot write " + manifest_path.string());
    }
    out << "version = 1\n";
    out << "clock_period_ns = " << format_double(ensemble.clock_period_ns()) << "\n";
    out << "e_hv = " << format_double(ensemble.polarization_errors().e_hv) << "\n";
    out << "e_da = " << format_double(ensemble.polarization_errors().e_da) << "\n";

    for (Pol p : kAllPols) {
        const DiodeRecord& diode = ensemble.diode(p);
        const char label = pol_label(p);
        out << "\n[diode " << label << "]\n";
        out << "mu = " << format_double(diode.mean_photon_number) << "\n";
        for (const auto& [param, dist] : diode.parameters) {
            const std::string file = std::string(1, label) + "_" + param + ".csv";
            if (std::holds_alternative<SpatialMode2D>(dist)) {
                write_matrix_csv(dir / file, std::get<SpatialMode2D>(dist));
            } else {
                write_dist_csv(dir / file, std::get<SampledDistribution1D>(dist));
            }
            out << param << " = " << file << "\n";
        }
    }
    return manifest_path;
}

}  // namespace sidechan
