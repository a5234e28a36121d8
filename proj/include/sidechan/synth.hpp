#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "sidechan/leakage.hpp"

namespace sidechan {

struct GaussianSpec {
    double mean = 0.0;
    double sigma = 1.0;
};

struct SpatialSpec {
    double center_x_mm = 0.0;
    double center_y_mm = 0.0;
    double width_x_mm = 0.5;  // sigma along x
    double width_y_mm = 0.5;
};

struct DiodeSpec {
    Pol polarization = Pol::H;
    GaussianSpec wavelength_nm;  // spectral peak and width
    GaussianSpec pulse_ps;       // temporal profile centre and shape sigma
    GaussianSpec arrival_ns;     // mean arrival and jitter
    SpatialSpec spatial_mm;
    double mean_photon_number = 0.1;
};

struct GridSpec {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t count = 4096;
};

struct EnsembleConfig {
    std::array<DiodeSpec, 4> diodes;  // order H, V, D, A
    PolarizationErrors polarization_errors;
    GridSpec wavelength_grid;
    GridSpec pulse_grid;
    GridSpec arrival_grid;
    GridSpec spatial_grid_x;
    GridSpec spatial_grid_y;
    double clock_period_ns = 200.0;  // 5 MHz repetition
    std::uint64_t seed = 0;
};

std::vector<std::string_view> preset_names();

/// Named configurations: "identical" (four equal diodes, zero leakage),
/// "paper" (small calibrated mismatches producing 1e-4..1e-2 bits/pulse
/// per basis per parameter), "worst-case" (gross mismatches).
EnsembleConfig preset_config(std::string_view name, std::uint64_t seed = 0);

/// Normalized Gaussian discretized on the grid. The grid must span at
/// least +-4 sigma around the mean (GridTooNarrow otherwise).
SampledDistribution1D synth_distribution(double mean, double sigma, const Axis& grid);

/// Separable 2D Gaussian mode on the pixel grid.
SpatialMode2D synth_mode(const SpatialSpec& spec, const Axis& x, const Axis& y);

/// Deterministic ensemble: analytic distributions for wavelength, pulse,
/// arrival and spatial mode of all four diodes.
SourceEnsemble synth_ensemble(const EnsembleConfig& config);

Axis make_grid(const GridSpec& spec, Unit unit);

/// Monte-Carlo mutual-information oracle: draw labels by prior, draw
/// observations by inverse CDF on the grid, and take the plug-in MI of the
/// sampled joint histogram (observation cells merged down to hist_bins).
/// stderr comes from a 10-way batch split; each batch runs its own
/// counter-derived substream of `seed`, so results are reproducible.
/// diagnostics["null_bias"] carries the estimator's known first-order
/// plug-in offset at independence, (K-1)/(2 N ln 2) for K reachable bins.
LeakageResult mc_mutual_information(const BasisPair& pair, std::size_t n_samples,
                                    std::uint64_t seed, std::size_t hist_bins = 64);

/// Gaussian arrival times folded into [0, clock_period); for exercising
/// the time-tag ingestion path against known statistics.
std::vector<double> sample_timetags(const GaussianSpec& arrival_ns, double clock_period_ns,
                                    std::size_t count, std::uint64_t seed);

}  // namespace sidechan
