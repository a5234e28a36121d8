#include "sidechan/axis.hpp"

#include <cmath>
#include <string>

#include "sidechan/errors.hpp"

namespace sidechan {

Axis::Axis(double start, double step, std::size_t count, Unit unit)
    : start_(start), step_(step), count_(count), unit_(unit) {
    if (!std::isfinite(start) || !std::isfinite(step)) {
        raise(ErrorCode::BadAxis, "axis start/step must be finite");
    }
    if (step <= 0.0) {
        raise(ErrorCode::BadAxis, "axis step must be positive, got " + std::to_string(step));
    }
    if (count < 2) {
        raise(ErrorCode::BadAxis, "axis needs at least 2 points, got " + std::to_string(count));
    }
    if (!std::isfinite(stop())) {
        raise(ErrorCode::BadAxis, "axis end point overflows");
    }
}

bool Axis::same_grid(const Axis& other) const noexcept {
    if (unit_ != other.unit_ || count_ != other.count_) return false;
    const double scale = std::max({std::abs(start_), std::abs(stop()), step_});
    return std::abs(start_ - other.start_) <= 1e-9 * scale &&
           std::abs(step_ - other.step_) <= 1e-9 * step_;
}

}  // namespace sidechan
