#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sidechan/ensemble.hpp"

namespace sidechan {

enum class Method { Exact, Eq8Literal, Guessing, MonteCarlo };

std::string_view method_name(Method m) noexcept;
std::optional<Method> parse_method(std::string_view text) noexcept;  // exact|eq8|guessing|mc

struct LeakageResult {
    Method method = Method::Exact;
    double bits_per_pulse = 0.0;  // clamped at 0; pre-clamp value in diagnostics["raw"]
    std::map<std::string, double> diagnostics;
};

/// The two sources of one basis on a shared grid, with their priors.
/// Construction enforces the shared grid and normalization, so every
/// estimator downstream can assume both.
class BasisPair {
  public:
    BasisPair(Basis label, SampledDistribution1D d0, SampledDistribution1D d1,
              double prior0 = 0.5);
    BasisPair(Basis label, SpatialMode2D d0, SpatialMode2D d1, double prior0 = 0.5);

    Basis label() const noexcept { return label_; }
    double prior0() const noexcept { return prior0_; }
    double prior1() const noexcept { return 1.0 - prior0_; }
    bool is_2d() const noexcept;
    std::size_t cell_count() const noexcept;

    /// Per-cell probability masses (density times cell measure) of both
    /// sources on the shared observation grid.
    struct Masses {
        std::vector<double> m0;
        std::vector<double> m1;
    };
    Masses masses() const;

    /// Zero-lag normalized cross-correlation of the two sources.
    double overlap() const;

    /// Same pair on a coarser observation grid with at most max_cells cells.
    BasisPair coarsened(std::size_t max_cells) const;

    const std::pair<SampledDistribution1D, SampledDistribution1D>& dists_1d() const;
    const std::pair<SpatialMode2D, SpatialMode2D>& dists_2d() const;

  private:
    Basis label_;
    double prior0_;
    std::variant<std::pair<SampledDistribution1D, SampledDistribution1D>,
                 std::pair<SpatialMode2D, SpatialMode2D>>
        dists_;
};

/// h(p) = -p log2 p - (1-p) log2(1-p), with 0 log 0 == 0.
double binary_entropy(double p);

/// Mutual information between the source label and the full observation,
/// by direct quadrature over the shared grid:
///   I = H(prior) + sum_obs sum_a p(a, obs) log2 p(a | obs).
LeakageResult exact_mutual_information(const BasisPair& pair);

/// The literal similarity-based estimate 1 + sum_{4 terms} (R0/4) log2(R0/(4 prior)).
/// Negative for R0 in (0.5, 1); reported value clamps at 0 and the raw
/// value stays in diagnostics (diagnostics["negative_raw"] = 1 flags it).
LeakageResult leakage_eq8_literal(double r0, double prior = 0.5);

/// Guessing-probability estimate: Eve errs with probability R0/2, so
/// I = 1 - h(R0/2). Monotone from 1 at R0=0 down to 0 at R0=1.
LeakageResult leakage_guessing(double r0);

struct PolarizationLeakage {
    double delta_e;        // |e_hv - e_da|
    double leakage_proxy;  // delta_e times a unit proportionality constant
};

PolarizationLeakage polarization_leakage(const PolarizationErrors& errors);

inline constexpr std::size_t kDefaultCellBudget = 2'097'152;  // 128^3

/// Exact mutual information on the product observation space of several
/// parameters, assuming the parameters independent given the source label.
/// All pairs must share priors; the product grid must fit the cell budget.
LeakageResult joint_leakage(std::span<const BasisPair> pairs,
                            std::size_t cell_budget = kDefaultCellBudget);

enum class Direction { DR, RR };

/// Secret-key-rate lower bound: DR -> i_ab - i_ae, RR -> i_ab - i_be.
/// A negative result is the abort signal and is returned as is.
double key_rate_bound(double i_ab, double i_ae, Direction direction,
                      std::optional<double> i_be = std::nullopt);

/// Channel information of a BB84 link at the given error rate: 1 - h(qber).
double qber_to_iab(double qber);

struct ReportOptions {
    std::size_t mc_samples = 1'000'000;
    std::uint64_t mc_seed = 20220906;
    std::size_t mc_hist_bins = 64;
};

struct BasisReport {
    std::map<Basis, LeakageResult> per_basis;
    double max_bits_per_pulse = 0.0;  // conservative per-parameter budget
};

/// Run one estimator on one pair. Monte-Carlo uses options.mc_seed as is;
/// callers wanting distinct substreams mix the seed themselves.
LeakageResult evaluate_pair(const BasisPair& pair, Method method,
                            const ReportOptions& options = {});

/// Pair the two diodes of each basis for one parameter (resampled to a
/// common grid) and run the requested estimator on both pairs.
BasisReport basis_report(const SourceEnsemble& ensemble, const std::string& parameter,
                         Method method, const ReportOptions& options = {});

/// Build the BasisPair for one basis of one parameter; shared by
/// basis_report and the joint-leakage path.
BasisPair make_basis_pair(const SourceEnsemble& ensemble, const std::string& parameter,
                          Basis basis, double prior0 = 0.5);

}  // namespace sidechan
