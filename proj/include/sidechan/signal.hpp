#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sidechan/distribution.hpp"

namespace sidechan {

/// Rescale so the density integrates to 1 (within 1e-12).
/// Throws AllZeroSignal when the integral is zero.
SampledDistribution1D normalize(const SampledDistribution1D& d);
SpatialMode2D normalize(const SpatialMode2D& m);

/// Put two distributions on one shared grid: the intersection of their
/// ranges, at the finer of the two steps, linearly interpolated and then
/// renormalized. Identical axes pass through untouched (up to the
/// renormalization). Throws UnitMismatch / NoOverlap.
std::pair<SampledDistribution1D, SampledDistribution1D> resample_common(
    const SampledDistribution1D& a, const SampledDistribution1D& b);

/// Full width at half maximum, crossings located by linear interpolation
/// on either side of the peak. Throws NoCrossing when the density never
/// drops below half maximum on one side.
double fwhm(const SampledDistribution1D& d);

/// Axis value of the maximum, refined by a parabolic fit through the three
/// points around the argmax bin. Ties break toward the smaller axis value.
double peak_location(const SampledDistribution1D& d);

struct MeanStd {
    double mean;
    double stdev;
};

/// First moment and standard deviation of a normalized density.
MeanStd mean_std(const SampledDistribution1D& d);

/// Raw per-bin counts of time tags folded modulo the clock period into
/// `bins` uniform bins over [0, clock_period). Counts sum to tags.size().
std::vector<double> timetag_counts(std::span<const double> tags_ns, double clock_period_ns,
                                   std::size_t bins);

/// Normalized arrival-time histogram; axis points are bin centres.
SampledDistribution1D histogram_from_timetags(std::span<const double> tags_ns,
                                              double clock_period_ns, std::size_t bins);

/// Merge `factor` adjacent bins (a trailing partial block is merged as a
/// smaller block), conserving mass, then renormalize.
SampledDistribution1D coarsen(const SampledDistribution1D& d, std::size_t factor);

}  // namespace sidechan
