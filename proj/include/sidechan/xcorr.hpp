#pragma once

#include <cstddef>
#include <vector>

#include "sidechan/distribution.hpp"

namespace sidechan {

/// Normalized cross-correlation over a symmetric range of integer lags.
/// Values lie in [0, 1] (within 1e-9) for nonnegative inputs.
class CorrelationCurve {
  public:
    CorrelationCurve(std::vector<double> shifts, std::vector<double> values,
                     std::size_t zero_lag_index);

    const std::vector<double>& shifts() const noexcept { return shifts_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t zero_lag_index() const noexcept { return zero_lag_index_; }
    double at_zero_lag() const noexcept { return values_[zero_lag_index_]; }

  private:
    std::vector<double> shifts_;
    std::vector<double> values_;
    std::size_t zero_lag_index_;
};

/// R(ds) = sum f(s) g(s+ds) step / sqrt(sum f^2 step * sum g^2 step) for
/// every integer lag with |lag*step| <= max_shift. Samples outside the
/// recorded window are treated as zero. Requires a shared grid.
CorrelationCurve cross_correlation(const SampledDistribution1D& f, const SampledDistribution1D& g,
                                   double max_shift);

/// The lag-zero value of the curve above; the similarity scalar in [0, 1].
double overlap_at_zero(const SampledDistribution1D& f, const SampledDistribution1D& g);

struct ShiftPeak {
    double shift;
    double value;
};

/// Argmax of the curve. Ties break toward smaller |shift|, then smaller shift.
ShiftPeak best_shift(const CorrelationCurve& curve);

/// Zero-lag normalized overlap of two modes on the same pixel grid.
double cross_correlation_2d(const SpatialMode2D& f, const SpatialMode2D& g);

/// Sum non-overlapping factor x factor pixel blocks (trailing partial
/// blocks are summed as smaller blocks), coarsen the axes, renormalize.
/// Models an eavesdropper camera with larger pixels.
SpatialMode2D downsample_2d(const SpatialMode2D& m, std::size_t factor);

}  // namespace sidechan
