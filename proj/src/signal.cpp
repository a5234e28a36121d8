#include "sidechan/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sidechan/errors.hpp"
#include "sidechan/numeric.hpp"

namespace sidechan {

namespace {

std::vector<double> scaled(const std::vector<double>& values, double factor) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] * factor;
    return out;
}

// Linear interpolation of a sampled signal at axis position x; x must lie
// within the axis range (callers guarantee it up to float slop at the ends).
double interp(const Axis& axis, const std::vector<double>& d, double x) {
    double pos = (x - axis.start()) / axis.step();
    if (pos <= 0.0) return d.front();
    if (pos >= static_cast<double>(axis.count() - 1)) return d.back();
    auto i = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(i);
    return d[i] + frac * (d[i + 1] - d[i]);
}

}  // namespace

SampledDistribution1D normalize(const SampledDistribution1D& d) {
    const double integral = d.integral();
    if (integral <= 0.0) {
        raise(ErrorCode::AllZeroSignal, "cannot normalize a signal with zero integral");
    }
    return SampledDistribution1D(d.axis(), scaled(d.density(), 1.0 / integral));
}

SpatialMode2D normalize(const SpatialMode2D& m) {
    const double integral = m.integral();
    if (integral <= 0.0) {
        raise(ErrorCode::AllZeroSignal, "cannot normalize a mode with zero integral");
    }
    return SpatialMode2D(m.x_axis(), m.y_axis(), scaled(m.intensity(), 1.0 / integral));
}

std::pair<SampledDistribution1D, SampledDistribution1D> resample_common(
    const SampledDistribution1D& a, const SampledDistribution1D& b) {
    if (a.unit() != b.unit()) {
        raise(ErrorCode::UnitMismatch, std::string("cannot resample ") +
                                           std::string(unit_name(a.unit())) + " against " +
                                           std::string(unit_name(b.unit())));
    }
    if (a.axis().same_grid(b.axis())) {
        return {normalize(a), normalize(b)};
    }

    const double lo = std::max(a.axis().start(), b.axis().start());
    const double hi = std::min(a.axis().stop(), b.axis().stop());
    const double step = std::min(a.axis().step(), b.axis().step());
    if (hi - lo < step) {
        raise(ErrorCode::NoOverlap, "axis ranges share less than one step of overlap");
    }
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    Axis common(lo, step, count, a.unit());

    auto resample_one = [&](const SampledDistribution1D& src) {
        std::vector<double> values(count);
        for (std::size_t i = 0; i < count; ++i) {
            values[i] = interp(src.axis(), src.density(), common.value(i));
        }
        return normalize(SampledDistribution1D(common, std::move(values)));
    };
    return {resample_one(a), resample_one(b)};
}

double fwhm(const SampledDistribution1D& d) {
    const auto& v = d.density();
    const auto peak_first =
        static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    const double peak = v[peak_first];
    if (peak <= 0.0) {
        raise(ErrorCode::AllZeroSignal, "fwhm of an all-zero signal");
    }
    std::size_t peak_last = peak_first;
    while (peak_last + 1 < v.size() && v[peak_last + 1] == peak) ++peak_last;

    const double half = peak / 2.0;
    const Axis& axis = d.axis();

    // Walk outward from the peak (its full plateau, for flat tops) until the
    // signal drops below half maximum, then place the crossing by linear
    // interpolation on that segment.
    double left = 0.0;
    bool found = false;
    for (std::size_t i = peak_first; i-- > 0;) {
        if (v[i] <= half) {
            double t = (half - v[i]) / (v[i + 1] - v[i]);
            left = axis.value(i) + t * axis.step();
            found = true;
            break;
        }
    }
    if (!found) {
        raise(ErrorCode::NoCrossing, "density never falls below half maximum left of the peak");
    }

    double right = 0.0;
    found = false;
    for (std::size_t i = peak_last + 1; i < v.size(); ++i) {
        if (v[i] <= half) {
            double t = (v[i - 1] - half) / (v[i - 1] - v[i]);
            right = axis.value(i - 1) + t * axis.step();
            found = true;
            break;
        }
    }
    if (!found) {
        raise(ErrorCode::NoCrossing, "density never falls below half maximum right of the peak");
    }
    return right - left;
}

double peak_location(const SampledDistribution1D& d) {
    const auto& v = d.density();
    // first maximum = tie-break toward the smaller axis value
    const auto k = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    const Axis& axis = d.axis();
    if (k == 0 || k + 1 == v.size()) {
        return axis.value(k);
    }
    const double denom = v[k - 1] - 2.0 * v[k] + v[k + 1];
    if (denom >= 0.0) {
        // flat or degenerate neighborhood; the bin itself is the best answer
        return axis.value(k);
    }
    double offset = 0.5 * (v[k - 1] - v[k + 1]) / denom;
    offset = std::clamp(offset, -0.5, 0.5);
    return axis.value(k) + offset * axis.step();
}

MeanStd mean_std(const SampledDistribution1D& d) {
    if (!d.normalized()) {
        raise(ErrorCode::NotNormalized, "mean_std requires a normalized density");
    }
    const Axis& axis = d.axis();
    const auto& v = d.density();
    std::vector<double> weighted(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) weighted[i] = axis.value(i) * v[i];
    const double mean = compensated_sum(weighted) * axis.step();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double dx = axis.value(i) - mean;
        weighted[i] = dx * dx * v[i];
    }
    const double var = compensated_sum(weighted) * axis.step();
    return {mean, std::sqrt(std::max(var, 0.0))};
}

std::vector<double> timetag_counts(std::span<const double> tags_ns, double clock_period_ns,
                                   std::size_t bins) {
    if (clock_period_ns <= 0.0) {
        raise(ErrorCode::NonPositivePeriod,
              "clock period must be positive, got " + std::to_string(clock_period_ns));
    }
    if (bins < 2) {
        raise(ErrorCode::BadAxis, "need at least 2 histogram bins");
    }
    if (tags_ns.empty()) {
        raise(ErrorCode::EmptyInput, "no time tags to histogram");
    }
    std::vector<double> counts(bins, 0.0);
    const double width = clock_period_ns / static_cast<double>(bins);
    for (double tag : tags_ns) {
        if (!std::isfinite(tag)) {
            raise(ErrorCode::NonFiniteValue, "non-finite time tag");
        }
        double folded = std::fmod(tag, clock_period_ns);
        if (folded < 0.0) folded += clock_period_ns;
        auto idx = static_cast<std::size_t>(folded / width);
        if (idx >= bins) idx = bins - 1;  // folded == period up to rounding
        counts[idx] += 1.0;
    }
    return counts;
}

SampledDistribution1D histogram_from_timetags(std::span<const double> tags_ns,
                                              double clock_period_ns, std::size_t bins) {
    auto counts = timetag_counts(tags_ns, clock_period_ns, bins);
    const double width = clock_period_ns / static_cast<double>(bins);
    Axis axis(width / 2.0, width, bins, Unit::Nanosecond);
    return normalize(SampledDistribution1D(axis, std::move(counts)));
}

SampledDistribution1D coarsen(const SampledDistribution1D& d, std::size_t factor) {
    if (factor == 0) {
        raise(ErrorCode::OutOfRange, "coarsening factor must be >= 1");
    }
    if (factor == 1) return normalize(d);
    const Axis& axis = d.axis();
    const std::size_t count = (axis.count() + factor - 1) / factor;
    if (count < 2) {
        raise(ErrorCode::OutOfRange, "coarsening factor leaves fewer than 2 bins");
    }
    const double step = axis.step() * static_cast<double>(factor);
    // New points sit at the centres of the merged blocks.
    Axis merged(axis.start() + 0.5 * static_cast<double>(factor - 1) * axis.step(), step, count,
                axis.unit());
    std::vector<double> out(count, 0.0);
    for (std::size_t i = 0; i < axis.count(); ++i) {
        out[i / factor] += d.density()[i] * axis.step();
    }
    for (double& mass : out) mass /= step;  // back to a density on the coarse grid
    return normalize(SampledDistribution1D(merged, std::move(out)));
}

}  // namespace sidechan
