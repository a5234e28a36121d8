#include "sidechan/units.hpp"

namespace sidechan {

std::string_view unit_name(Unit u) noexcept {
    switch (u) {
        case Unit::Nanometre: return "nm";
        case Unit::Picosecond: return "ps";
        case Unit::Nanosecond: return "ns";
        case Unit::Millimetre: return "mm";
        case Unit::Dimensionless: return "dimensionless";
    }
    return "?";
}

std::optional<Unit> parse_unit(std::string_view text) noexcept {
    if (text == "nm") return Unit::Nanometre;
    if (text == "ps") return Unit::Picosecond;
    if (text == "ns") return Unit::Nanosecond;
    if (text == "mm") return Unit::Millimetre;
    if (text == "dimensionless" || text == "1" || text == "none") return Unit::Dimensionless;
    return std::nullopt;
}

}  // namespace sidechan
