#pragma once

#include <cstddef>
#include <string_view>

#include "screenlab/dgp.hpp"
#include "screenlab/rng.hpp"

namespace screenlab {

enum class ScreenMechanism { NoScreen, OracleComplier, StatedComplier, PseudoScreen };

std::string_view to_string(ScreenMechanism m);
/// Accepts "none", "oracle", "stated", "pseudo". Throws InvalidConfig otherwise.
ScreenMechanism parse_mechanism(std::string_view name);

struct ScreenedSample {
    Sample sample;
    ScreenMechanism mechanism = ScreenMechanism::NoScreen;
    std::size_t retained_count = 0;
    double retention_fraction = 1.0;

    /// Whether a unit enters estimation. Pseudo-screening marks but keeps all.
    bool uses(const Unit& u) const noexcept {
        return mechanism == ScreenMechanism::PseudoScreen || u.screened_in.value_or(false);
    }
};

/// Draws a stated-complier answer. Compliers answer "yes" with probability
/// 1 - eps2, everyone else with probability eps1.
bool elicit_stated_type(UnitType t, double eps1, double eps2, Stream& stream);

ScreenedSample apply_screen(Sample s, ScreenMechanism m);

}  // namespace screenlab
