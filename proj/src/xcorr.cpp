#include "sidechan/xcorr.hpp"

#include <cmath>
#include <span>
#include <string>

#include "sidechan/errors.hpp"
#include "sidechan/numeric.hpp"
#include "sidechan/signal.hpp"

namespace sidechan {

namespace {

constexpr double kBoundTol = 1e-9;

double energy(std::span<const double> v) { return compensated_dot(v, v); }

// Lag product sum_i f[i] * g[i+lag] with zero padding outside the window.
double lag_dot(const std::vector<double>& f, const std::vector<double>& g, long lag) {
    const auto n = static_cast<long>(f.size());
    std::size_t fi = lag < 0 ? static_cast<std::size_t>(-lag) : 0;
    std::size_t gi = lag > 0 ? static_cast<std::size_t>(lag) : 0;
    if (fi >= f.size() || gi >= g.size()) return 0.0;
    const auto len = static_cast<std::size_t>(n) - (fi > gi ? fi : gi);
    return compensated_dot(std::span(f).subspan(fi, len), std::span(g).subspan(gi, len));
}

}  // namespace

CorrelationCurve::CorrelationCurve(std::vector<double> shifts, std::vector<double> values,
                                   std::size_t zero_lag_index)
    : shifts_(std::move(shifts)), values_(std::move(values)), zero_lag_index_(zero_lag_index) {
    if (shifts_.empty() || shifts_.size() != values_.size() || zero_lag_index_ >= shifts_.size()) {
        raise(ErrorCode::OutOfRange, "malformed correlation curve");
    }
    for (std::size_t i = 0; i + 1 < shifts_.size(); ++i) {
        if (!(shifts_[i + 1] > shifts_[i])) {
            raise(ErrorCode::OutOfRange, "correlation shifts must be strictly increasing");
        }
    }
    for (double v : values_) {
        if (v < -kBoundTol || v > 1.0 + kBoundTol) {
            raise(ErrorCode::OutOfRange,
                  "correlation value " + std::to_string(v) + " outside [0, 1]");
        }
    }
}

CorrelationCurve cross_correlation(const SampledDistribution1D& f, const SampledDistribution1D& g,
                                   double max_shift) {
    if (!f.axis().same_grid(g.axis())) {
        raise(ErrorCode::GridMismatch, "cross-correlation requires a shared grid");
    }
    if (max_shift < 0.0 || !std::isfinite(max_shift)) {
        raise(ErrorCode::OutOfRange, "max_shift must be nonnegative and finite");
    }
    const double step = f.axis().step();
    const double ef = energy(f.density()) * step;
    const double eg = energy(g.density()) * step;
    if (ef <= 0.0 || eg <= 0.0) {
        raise(ErrorCode::AllZeroSignal, "cross-correlation of an all-zero signal");
    }
    const double norm = std::sqrt(ef * eg);

    const auto max_lag = static_cast<long>(max_shift / step + 1e-9);
    std::vector<double> shifts;
    std::vector<double> values;
    shifts.reserve(2 * static_cast<std::size_t>(max_lag) + 1);
    values.reserve(shifts.capacity());
    for (long lag = -max_lag; lag <= max_lag; ++lag) {
        shifts.push_back(static_cast<double>(lag) * step);
        double v = lag_dot(f.density(), g.density(), lag) * step / norm;
        // Cauchy-Schwarz bounds the true value by 1; shave off rounding slop
        // so downstream estimators can rely on [0, 1] exactly.
        if (v > 1.0 && v < 1.0 + kBoundTol) v = 1.0;
        values.push_back(v);
    }
    return CorrelationCurve(std::move(shifts), std::move(values),
                            static_cast<std::size_t>(max_lag));
}

double overlap_at_zero(const SampledDistribution1D& f, const SampledDistribution1D& g) {
    return cross_correlation(f, g, 0.0).at_zero_lag();
}

ShiftPeak best_shift(const CorrelationCurve& curve) {
    const auto& shifts = curve.shifts();
    const auto& values = curve.values();
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) {
            best = i;
        } else if (values[i] == values[best]) {
            const double cand = std::abs(shifts[i]);
            const double have = std::abs(shifts[best]);
            if (cand < have || (cand == have && shifts[i] < shifts[best])) best = i;
        }
    }
    return {shifts[best], values[best]};
}

double cross_correlation_2d(const SpatialMode2D& f, const SpatialMode2D& g) {
    if (!f.x_axis().same_grid(g.x_axis()) || !f.y_axis().same_grid(g.y_axis())) {
        raise(ErrorCode::GridMismatch, "2D correlation requires a shared pixel grid");
    }
    const double ef = energy(f.intensity());
    const double eg = energy(g.intensity());
    if (ef <= 0.0 || eg <= 0.0) {
        raise(ErrorCode::AllZeroSignal, "2D correlation of an all-zero mode");
    }
    double v = compensated_dot(f.intensity(), g.intensity()) / std::sqrt(ef * eg);
    if (v > 1.0 && v < 1.0 + kBoundTol) v = 1.0;
    return v;
}

SpatialMode2D downsample_2d(const SpatialMode2D& m, std::size_t factor) {
    if (factor == 0) {
        raise(ErrorCode::OutOfRange, "downsample factor must be >= 1");
    }
    const std::size_t nx = (m.width() + factor - 1) / factor;
    const std::size_t ny = (m.height() + factor - 1) / factor;
    if (nx < 2 || ny < 2) {
        raise(ErrorCode::OutOfRange, "downsample factor leaves fewer than 2 pixels per axis");
    }
    const Axis& x = m.x_axis();
    const Axis& y = m.y_axis();
    Axis cx(x.start() + 0.5 * static_cast<double>(factor - 1) * x.step(),
            x.step() * static_cast<double>(factor), nx, x.unit());
    Axis cy(y.start() + 0.5 * static_cast<double>(factor - 1) * y.step(),
            y.step() * static_cast<double>(factor), ny, y.unit());

    std::vector<double> blocks(nx * ny, 0.0);
    for (std::size_t iy = 0; iy < m.height(); ++iy) {
        for (std::size_t ix = 0; ix < m.width(); ++ix) {
            blocks[(iy / factor) * nx + ix / factor] += m.at(iy, ix);
        }
    }
    SpatialMode2D coarse(cx, cy, std::move(blocks));
    return coarse.integral() > 0.0 ? normalize(coarse) : coarse;
}

}  // namespace sidechan
