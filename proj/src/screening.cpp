#include "screenlab/screening.hpp"

#include <string>

#include "screenlab/errors.hpp"

namespace screenlab {

std::string_view to_string(ScreenMechanism m) {
    switch (m) {
        case ScreenMechanism::NoScreen: return "none";
        case ScreenMechanism::OracleComplier: return "oracle";
        case ScreenMechanism::StatedComplier: return "stated";
        case ScreenMechanism::PseudoScreen: return "pseudo";
    }
    return "unknown";
}

ScreenMechanism parse_mechanism(std::string_view name) {
    if (name == "none") return ScreenMechanism::NoScreen;
    if (name == "oracle") return ScreenMechanism::OracleComplier;
    if (name == "stated") return ScreenMechanism::StatedComplier;
    if (name == "pseudo") return ScreenMechanism::PseudoScreen;
    throw Error(ErrorCode::InvalidConfig, "unknown screening mechanism '" + std::string(name) + "'");
}

bool elicit_stated_type(UnitType t, double eps1, double eps2, Stream& stream) {
    const double u = stream.uniform();
    if (t == UnitType::Complier) return u < 1.0 - eps2;
    return u < eps1;
}

ScreenedSample apply_screen(Sample s, ScreenMechanism m) {
    if (m == ScreenMechanism::OracleComplier && !s.has_types())
        throw Error(ErrorCode::MissingTypes, "oracle screening needs true unit types");
    if ((m == ScreenMechanism::StatedComplier || m == ScreenMechanism::PseudoScreen) && !s.has_stated_types())
        throw Error(ErrorCode::MissingStatedTypes, "stated-type screening needs elicited stated types");

    std::size_t kept = 0;
    for (auto& u : s.units) {
        bool in = true;
        switch (m) {
            case ScreenMechanism::NoScreen: in = true; break;
            case ScreenMechanism::OracleComplier: in = *u.true_type == UnitType::Complier; break;
            case ScreenMechanism::StatedComplier:
            case ScreenMechanism::PseudoScreen: in = *u.stated_complier; break;
        }
        u.screened_in = in;
        kept += in ? 1 : 0;
    }

    ScreenedSample out;
    out.mechanism = m;
    const std::size_t total = s.units.size();
    if (m == ScreenMechanism::PseudoScreen) {
        out.retained_count = total;
    } else {
        if (kept == 0) throw Error(ErrorCode::EmptyScreen, "screen retained no units");
        out.retained_count = kept;
    }
    out.retention_fraction = static_cast<double>(out.retained_count) / static_cast<double>(total);
    out.sample = std::move(s);
    return out;
}

}  // namespace screenlab
