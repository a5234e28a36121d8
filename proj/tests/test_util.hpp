#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "sidechan/distribution.hpp"
#include "sidechan/signal.hpp"

namespace testutil {

inline sidechan::SampledDistribution1D make_dist(std::vector<double> values, double start = 0.0,
                                                 double step = 1.0,
                                                 sidechan::Unit unit = sidechan::Unit::Dimensionless) {
    sidechan::Axis axis(start, step, values.size(), unit);
    return sidechan::SampledDistribution1D(axis, std::move(values));
}

inline sidechan::SampledDistribution1D gaussian_dist(double mean, double sigma, double lo,
                                                     double hi, std::size_t n,
                                                     sidechan::Unit unit = sidechan::Unit::Dimensionless) {
    sidechan::Axis axis(lo, (hi - lo) / static_cast<double>(n - 1), n, unit);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = (axis.value(i) - mean) / sigma;
        v[i] = std::exp(-0.5 * z * z);
    }
    return sidechan::normalize(sidechan::SampledDistribution1D(axis, std::move(v)));
}

inline sidechan::SpatialMode2D gaussian_mode(double cx, double cy, double sx, double sy, double lo,
                                             double hi, std::size_t n) {
    sidechan::Axis ax(lo, (hi - lo) / static_cast<double>(n - 1), n, sidechan::Unit::Millimetre);
    std::vector<double> v(n * n);
    for (std::size_t iy = 0; iy < n; ++iy) {
        for (std::size_t ix = 0; ix < n; ++ix) {
            const double zx = (ax.value(ix) - cx) / sx;
            const double zy = (ax.value(iy) - cy) / sy;
            v[iy * n + ix] = std::exp(-0.5 * (zx * zx + zy * zy));
        }
    }
    return sidechan::normalize(sidechan::SpatialMode2D(ax, ax, std::move(v)));
}

// ---- closed-form oracles ----------------------------------------------

// Zero-lag normalized overlap of two Gaussians (possibly unequal widths).
inline double gaussian_overlap_oracle(double mu1, double s1, double mu2, double s2) {
    const double d = mu2 - mu1;
    const double ss = s1 * s1 + s2 * s2;
    return std::sqrt(2.0 * s1 * s2 / ss) * std::exp(-d * d / (2.0 * ss));
}

inline double fwhm_of_sigma(double sigma) { return 2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma; }

// Brute-force linear interpolation: locate the bracketing segment by linear
// scan. Independent of the production resampling path.
inline double interp_oracle(const sidechan::SampledDistribution1D& d, double x) {
    const auto& axis = d.axis();
    for (std::size_t i = 0; i + 1 < axis.count(); ++i) {
        const double x0 = axis.value(i);
        const double x1 = axis.value(i + 1);
        if (x >= x0 && x <= x1) {
            const double t = (x - x0) / (x1 - x0);
            return (1.0 - t) * d.density()[i] + t * d.density()[i + 1];
        }
    }
    return x < axis.start() ? d.density().front() : d.density().back();
}

// Brute-force two-parameter joint mutual information from the explicit
// product-grid joint table, with explicitly materialized marginals.
inline double joint_mi_oracle(const std::vector<double>& m0a, const std::vector<double>& m1a,
                              const std::vector<double>& m0b, const std::vector<double>& m1b,
                              double prior0) {
    const std::size_t na = m0a.size();
    const std::size_t nb = m0b.size();
    std::vector<double> joint(2 * na * nb);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            joint[i * nb + j] = prior0 * m0a[i] * m0b[j];
            joint[na * nb + i * nb + j] = (1.0 - prior0) * m1a[i] * m1b[j];
        }
    }
    std::vector<double> p_obs(na * nb);
    for (std::size_t k = 0; k < na * nb; ++k) p_obs[k] = joint[k] + joint[na * nb + k];
    const double p_label[2] = {prior0, 1.0 - prior0};
    double mi = 0.0;
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t k = 0; k < na * nb; ++k) {
            const double p = joint[a * na * nb + k];
            if (p > 0.0) mi += p * std::log2(p / (p_label[a] * p_obs[k]));
        }
    }
    return mi;
}

// ---- scratch directories ------------------------------------------------

class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("sidechan_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline std::filesystem::path write_file(const std::filesystem::path& path,
                                        const std::string& content) {
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace testutil
