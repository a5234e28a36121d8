#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sidechan/distribution.hpp"
#include "sidechan/errors.hpp"

namespace sidechan {

enum class Pol { H, V, D, A };
enum class Basis { HV, DA };

constexpr std::array<Pol, 4> kAllPols{Pol::H, Pol::V, Pol::D, Pol::A};
constexpr std::array<Basis, 2> kAllBases{Basis::HV, Basis::DA};

char pol_label(Pol p) noexcept;
std::optional<Pol> parse_pol(std::string_view text) noexcept;
std::string_view basis_name(Basis b) noexcept;

/// The two source polarizations of a basis, in bit order (bit 0, bit 1).
std::pair<Pol, Pol> basis_diodes(Basis b) noexcept;

/// Per-basis preparation error (orthogonal-polarization mass).
struct PolarizationErrors {
    double e_hv = 0.0;
    double e_da = 0.0;
};

/// A recorded source parameter is either a 1D density or a 2D mode image.
using ParameterDistribution = std::variant<SampledDistribution1D, SpatialMode2D>;

struct DiodeRecord {
    Pol polarization = Pol::H;
    double mean_photon_number = 0.1;  // metadata only; enters no leakage formula
    std::map<std::string, ParameterDistribution> parameters;
};

/// The four diodes of one BB84 transmitter plus its polarization errors.
class SourceEnsemble {
  public:
    SourceEnsemble(std::vector<DiodeRecord> diodes, PolarizationErrors errors,
                   double clock_period_ns);

    const DiodeRecord& diode(Pol p) const noexcept;
    const PolarizationErrors& polarization_errors() const noexcept { return errors_; }
    double clock_period_ns() const noexcept { return clock_period_ns_; }

    bool has_parameter(const std::string& name) const;
    /// Parameter names recorded for all four diodes, sorted.
    std::vector<std::string> common_parameters() const;

  private:
    std::array<DiodeRecord, 4> diodes_;  // indexed by Pol
    PolarizationErrors errors_;
    double clock_period_ns_;
};

}  // namespace sidechan
