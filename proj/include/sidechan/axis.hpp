#pragma once

#include <cstddef>

#include "sidechan/units.hpp"

namespace sidechan {

/// Uniform 1D grid. Point i sits at start + i*step; step > 0, count >= 2.
class Axis {
  public:
    Axis(double start, double step, std::size_t count, Unit unit);

    double start() const noexcept { return start_; }
    double step() const noexcept { return step_; }
    std::size_t count() const noexcept { return count_; }
    Unit unit() const noexcept { return unit_; }

    double value(std::size_t i) const noexcept { return start_ + static_cast<double>(i) * step_; }
    double stop() const noexcept { return value(count_ - 1); }

    // Tolerant identity (1e-9 relative on start/step): two exports of the
    // same instrument grid compare equal despite decimal round-tripping.
    bool same_grid(const Axis& other) const noexcept;

  private:
    double start_;
    double step_;
    std::size_t count_;
    Unit unit_;
};

}  // namespace sidechan
