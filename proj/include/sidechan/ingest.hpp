#pragma once

#include <filesystem>
#include <span>

#include "sidechan/ensemble.hpp"

namespace sidechan {

/// Audit trail of the negative-value clamping applied at ingestion.
struct LoadStats {
    std::size_t clamped_values = 0;
    double clamped_mass = 0.0;  // |sum of clamped negatives|, pre-normalization
    double total_mass = 0.0;    // sum of kept values, pre-normalization

    double clamped_fraction() const noexcept {
        return total_mass > 0.0 ? clamped_mass / total_mass : 0.0;
    }
    void merge(const LoadStats& other) noexcept;
};

/// Two-column CSV (axis,value) preceded by a `# unit: <nm|ps|ns|mm>` header
/// line. The axis must be uniform within 1e-6 relative step tolerance.
/// Negative values (detector baseline noise) are clamped to zero and
/// counted in `stats`. The result is normalized.
SampledDistribution1D read_dist_csv(const std::filesystem::path& path, LoadStats* stats = nullptr);

/// Rectangular CSV matrix preceded by `# x: start,step` and `# y: start,step`
/// headers (row index = y). Same clamping and normalization as above.
SpatialMode2D read_matrix_csv(const std::filesystem::path& path, LoadStats* stats = nullptr);

/// One arrival time (ns) per line; `#` comments and blank lines skipped.
/// Tags are folded modulo the clock period and histogrammed.
SampledDistribution1D read_timetags(const std::filesystem::path& path, double clock_period_ns,
                                    std::size_t bins);

/// Manifest binding the four diodes' data files into one ensemble.
/// Grammar (line oriented, `#` comments):
///   version = 1
///   clock_period_ns = <real>
///   e_hv = <real>
///   e_da = <real>
///   [diode H|V|D|A]
///   mu = <real>                      (optional)
///   <parameter> = <relative path>    (spatial loads as a matrix)
///   arrival_tags = <relative path> [bins]
SourceEnsemble load_ensemble(const std::filesystem::path& manifest_path,
                             LoadStats* stats = nullptr);

void write_dist_csv(const std::filesystem::path& path, const SampledDistribution1D& d);
void write_matrix_csv(const std::filesystem::path& path, const SpatialMode2D& m);
void write_timetags(const std::filesystem::path& path, std::span<const double> tags_ns);

/// Write every distribution of the ensemble plus a manifest into `dir`;
/// returns the manifest path. load_ensemble() restores the ensemble within
/// 1e-9 per bin.
std::filesystem::path export_ensemble(const SourceEnsemble& ensemble,
                                      const std::filesystem::path& dir);

}  // namespace sidechan
