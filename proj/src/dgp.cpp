#include "screenlab/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "screenlab/errors.hpp"
#include "screenlab/screening.hpp"

namespace screenlab {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvalidConfig, what);
}

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

void DiscreteDgpConfig::validate() const {
    require(n >= 2, "n must be at least 2");
    require(is_probability(p_complier) && is_probability(p_always) && is_probability(p_never),
            "p_complier, p_always, p_never must each lie in [0,1]");
    require(std::abs(p_complier + p_always + p_never - 1.0) <= 1e-12,
            "p_complier + p_always + p_never must equal 1 (got " +
                std::to_string(p_complier + p_always + p_never) + ")");
    require(p_complier > 0.0, "p_complier must be positive (first stage must be nonzero)");
    require(std::isfinite(q) && q > 0.0 && q < 1.0, "q must lie strictly between 0 and 1");
    require(std::isfinite(alpha) && std::isfinite(beta_complier) && std::isfinite(beta_always),
            "alpha, beta_complier, beta_always must be finite");
    require(std::isfinite(sigma_u) && sigma_u >= 0.0, "sigma_u must be non-negative");
    require(is_probability(eps1) && is_probability(eps2), "eps1 and eps2 must lie in [0,1]");
}

void GaussianDgpConfig::validate() const {
    require(n >= 4, "n must be at least 4");
    require(std::isfinite(q) && q > 0.0 && q < 1.0, "q must lie strictly between 0 and 1");
    require(std::isfinite(pi) && pi != 0.0, "pi must be nonzero");
    require(std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(phi), "alpha, beta, phi must be finite");
    require(std::isfinite(sigma_u) && sigma_u >= 0.0, "sigma_u must be non-negative");
    require(std::isfinite(sigma_eta) && sigma_eta >= 0.0, "sigma_eta must be non-negative");
}

bool Sample::has_types() const noexcept {
    return !units.empty() && std::all_of(units.begin(), units.end(), [](const Unit& u) { return u.true_type.has_value(); });
}

bool Sample::has_stated_types() const noexcept {
    return !units.empty() &&
           std::all_of(units.begin(), units.end(), [](const Unit& u) { return u.stated_complier.has_value(); });
}

Sample make_sample(std::vector<Unit> units, DgpKind kind, ConfigEcho config) {
    if (units.empty()) throw Error(ErrorCode::SchemaError, "sample has no units");
    std::size_t treated = 0;
    for (const auto& u : units) treated += static_cast<std::size_t>(u.z);
    Sample s;
    s.realized_q = static_cast<double>(treated) / static_cast<double>(units.size());
    s.units = std::move(units);
    s.kind = kind;
    s.config = std::move(config);
    return s;
}

Sample without_stated_types(Sample s) {
    for (auto& u : s.units) u.stated_complier.reset();
    return s;
}

std::size_t treated_count(std::size_t n, double q) {
    // The small slack keeps e.g. 0.29 * 100 from flooring to 28.
    return static_cast<std::size_t>(std::floor(q * static_cast<double>(n) + 1e-9));
}

std::vector<std::uint8_t> assign_instrument(std::size_t n, double q, Seed seed) {
    if (!(q > 0.0 && q < 1.0)) throw Error(ErrorCode::DegenerateAssignment, "q must lie strictly between 0 and 1");
    if (n > std::numeric_limits<std::uint32_t>::max())
        throw Error(ErrorCode::DegenerateAssignment, "sample too large for assignment");
    const std::size_t k = treated_count(n, q);
    if (k < 1 || n - k < 1)
        throw Error(ErrorCode::DegenerateAssignment, "floor(q*n) = " + std::to_string(k) + " of n = " +
                                                         std::to_string(n) + " leaves an empty arm");
    std::vector<std::uint8_t> z(n, 0);
    std::fill_n(z.begin(), k, std::uint8_t{1});
    Stream stream(seed, Purpose::Assignment, 0);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = stream.below(static_cast<std::uint32_t>(i + 1));
        std::swap(z[i], z[j]);
    }
    return z;
}

Sample generate_discrete(const DiscreteDgpConfig& cfg, Seed seed) {
    cfg.validate();
    const auto z = assign_instrument(cfg.n, cfg.q, seed);
    std::vector<Unit> units(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        Unit& u = units[i];
        Stream type_stream(seed, Purpose::UnitType, i);
        const double draw = type_stream.uniform();
        UnitType t = UnitType::NeverTaker;
        if (draw < cfg.p_complier)
            t = UnitType::Complier;
        else if (draw < cfg.p_complier + cfg.p_always)
            t = UnitType::AlwaysTaker;
        u.true_type = t;
        if (cfg.elicit_stated_types) {
            Stream stated_stream(seed, Purpose::StatedType, i);
            u.stated_complier = elicit_stated_type(t, cfg.eps1, cfg.eps2, stated_stream);
        }
        u.z = z[i];
        const int d = realize_treatment(t, u.z);
        u.d = d;
        const double beta = t == UnitType::AlwaysTaker ? cfg.beta_always : cfg.beta_complier;
        Stream noise(seed, Purpose::OutcomeNoise, i);
        u.y = cfg.alpha + beta * d + cfg.sigma_u * noise.normal();
    }
    return make_sample(std::move(units), DgpKind::Discrete, cfg);
}

Sample generate_gaussian(const GaussianDgpConfig& cfg, double r, Seed seed) {
    cfg.validate();
    if (!(std::isfinite(r) && r > 0.0 && r <= 1.0))
        throw Error(ErrorCode::InvalidRetention, "retention fraction must lie in (0,1], got " + std::to_string(r));
    const auto n_screened = static_cast<std::size_t>(std::llround(r * static_cast<double>(cfg.n)));
    if (n_screened < 4)
        throw Error(ErrorCode::InvalidRetention, "round(r*n) = " + std::to_string(n_screened) + " is below 4");
    const double slope = cfg.pi / r;
    const auto z = assign_instrument(n_screened, cfg.q, seed);
    std::vector<Unit> units(n_screened);
    for (std::size_t i = 0; i < n_screened; ++i) {
        Unit& u = units[i];
        u.z = z[i];
        Stream eta(seed, Purpose::FirstStageNoise, i);
        Stream noise(seed, Purpose::OutcomeNoise, i);
        u.d = cfg.phi + slope * u.z + cfg.sigma_eta * eta.normal();
        u.y = cfg.alpha + cfg.beta * u.d + cfg.sigma_u * noise.normal();
    }
    return make_sample(std::move(units), DgpKind::Gaussian, cfg);
}

}  // namespace screenlab
