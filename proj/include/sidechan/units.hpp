#pragma once

#include <optional>
#include <string_view>

namespace sidechan {

enum class Unit {
    Nanometre,      // wavelength
    Picosecond,     // pulse profile
    Nanosecond,     // arrival time
    Millimetre,     // spatial mode
    Dimensionless,
};

std::string_view unit_name(Unit u) noexcept;
std::optional<Unit> parse_unit(std::string_view text) noexcept;

}  // namespace sidechan
