#include "sidechan/ensemble.hpp"

#include <algorithm>
#include <cmath>

namespace sidechan {

char pol_label(Pol p) noexcept {
    switch (p) {
        case Pol::H: return 'H';
        case Pol::V: return 'V';
        case Pol::D: return 'D';
        case Pol::A: return 'A';
    }
    return '?';
}

std::optional<Pol> parse_pol(std::string_view text) noexcept {
    if (text == "H" || text == "h") return Pol::H;
    if (text == "V" || text == "v") return Pol::V;
    if (text == "D" || text == "d") return Pol::D;
    if (text == "A" || text == "a") return Pol::A;
    return std::nullopt;
}

std::string_view basis_name(Basis b) noexcept { return b == Basis::HV ? "HV" : "DA"; }

std::pair<Pol, Pol> basis_diodes(Basis b) noexcept {
    return b == Basis::HV ? std::pair{Pol::H, Pol::V} : std::pair{Pol::D, Pol::A};
}

SourceEnsemble::SourceEnsemble(std::vector<DiodeRecord> diodes, PolarizationErrors errors,
                               double clock_period_ns)
    : errors_(errors), clock_period_ns_(clock_period_ns) {
    if (!std::isfinite(errors.e_hv) || !std::isfinite(errors.e_da) || errors.e_hv < 0.0 ||
        errors.e_hv > 1.0 || errors.e_da < 0.0 || errors.e_da > 1.0) {
        raise(ErrorCode::OutOfRange, "polarization errors must lie in [0, 1]");
    }
    if (clock_period_ns <= 0.0 || !std::isfinite(clock_period_ns)) {
        raise(ErrorCode::NonPositivePeriod, "clock period must be positive");
    }
    std::array<bool, 4> seen{};
    for (auto& d : diodes) {
        auto idx = static_cast<std::size_t>(d.polarization);
        if (seen[idx]) {
            raise(ErrorCode::DuplicateLabel,
                  std::string("two diodes labeled ") + pol_label(d.polarization));
        }
        seen[idx] = true;
        diodes_[idx] = std::move(d);
    }
    for (Pol p : kAllPols) {
        if (!seen[static_cast<std::size_t>(p)]) {
            raise(ErrorCode::MissingDiode, std::string("no diode labeled ") + pol_label(p));
        }
    }
}

const DiodeRecord& SourceEnsemble::diode(Pol p) const noexcept {
    return diodes_[static_cast<std::size_t>(p)];
}

bool SourceEnsemble::has_parameter(const std::string& name) const {
    return std::all_of(diodes_.begin(), diodes_.end(),
                       [&](const DiodeRecord& d) { return d.parameters.count(name) > 0; });
}

std::vector<std::string> SourceEnsemble::common_parameters() const {
    std::vector<std::string> names;
    for (const auto& [name, dist] : diodes_[0].parameters) {
        if (has_parameter(name)) names.push_back(name);
    }
    return names;  // map iteration keeps them sorted
}

}  // namespace sidechan
