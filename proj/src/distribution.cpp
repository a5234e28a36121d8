#include "sidechan/distribution.hpp"

#include <cmath>
#include <string>

#include "sidechan/errors.hpp"
#include "sidechan/numeric.hpp"

namespace sidechan {

namespace {

constexpr double kNormalizedTol = 1e-9;

void check_values(const std::vector<double>& values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            raise(ErrorCode::NonFiniteValue,
                  std::string(what) + " has non-finite entry at index " + std::to_string(i));
        }
        if (values[i] < 0.0) {
            raise(ErrorCode::NegativeValue, std::string(what) + " has negative entry " +
                                                std::to_string(values[i]) + " at index " +
                                                std::to_string(i));
        }
    }
}

}  // namespace

SampledDistribution1D::SampledDistribution1D(Axis axis, std::vector<double> density)
    : axis_(axis), density_(std::move(density)) {
    if (density_.size() != axis_.count()) {
        raise(ErrorCode::GridMismatch, "density length " + std::to_string(density_.size()) +
                                           " does not match axis count " +
                                           std::to_string(axis_.count()));
    }
    check_values(density_, "density");
    integral_ = compensated_sum(density_) * axis_.step();
    normalized_ = std::abs(integral_ - 1.0) <= kNormalizedTol;
}

SpatialMode2D::SpatialMode2D(Axis x_axis, Axis y_axis, std::vector<double> intensity)
    : x_(x_axis), y_(y_axis), intensity_(std::move(intensity)) {
    if (intensity_.size() != x_.count() * y_.count()) {
        raise(ErrorCode::GridMismatch, "intensity size " + std::to_string(intensity_.size()) +
                                           " does not match " + std::to_string(y_.count()) + "x" +
                                           std::to_string(x_.count()) + " grid");
    }
    check_values(intensity_, "intensity");
    integral_ = compensated_sum(intensity_) * cell();
    normalized_ = std::abs(integral_ - 1.0) <= kNormalizedTol;
}

}  // namespace sidechan
