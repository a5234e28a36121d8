#pragma once

#include <cstddef>
#include <vector>

#include "sidechan/axis.hpp"

namespace sidechan {

/// Nonnegative sampled density on a uniform grid. The normalized flag is
/// derived from the data at construction: sum(density)*step == 1 within 1e-9.
class SampledDistribution1D {
  public:
    SampledDistribution1D(Axis axis, std::vector<double> density);

    const Axis& axis() const noexcept { return axis_; }
    const std::vector<double>& density() const noexcept { return density_; }
    Unit unit() const noexcept { return axis_.unit(); }
    std::size_t size() const noexcept { return density_.size(); }

    double integral() const noexcept { return integral_; }
    bool normalized() const noexcept { return normalized_; }

  private:
    Axis axis_;
    std::vector<double> density_;
    double integral_;
    bool normalized_;
};

/// Nonnegative intensity on a uniform pixel grid, row-major with rows = y.
/// Normalized means sum(intensity)*x_step*y_step == 1 within 1e-9.
class SpatialMode2D {
  public:
    SpatialMode2D(Axis x_axis, Axis y_axis, std::vector<double> intensity);

    const Axis& x_axis() const noexcept { return x_; }
    const Axis& y_axis() const noexcept { return y_; }
    const std::vector<double>& intensity() const noexcept { return intensity_; }

    std::size_t width() const noexcept { return x_.count(); }
    std::size_t height() const noexcept { return y_.count(); }
    double at(std::size_t iy, std::size_t ix) const noexcept { return intensity_[iy * x_.count() + ix]; }

    double cell() const noexcept { return x_.step() * y_.step(); }
    double integral() const noexcept { return integral_; }
    bool normalized() const noexcept { return normalized_; }

  private:
    Axis x_;
    Axis y_;
    std::vector<double> intensity_;
    double integral_;
    bool normalized_;
};

}  // namespace sidechan
