#pragma once

// Synthetic experiment generators.
//
// Two worlds are supported: a discrete-type world of compliers, always-takers
// and never-takers with binary take-up, and a Gaussian linear-IV world with a
// continuous first stage in which the effect of a complier-retaining screen
// is encoded directly (sample size r*n, first-stage slope pi/r).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "screenlab/rng.hpp"

namespace screenlab {

enum class UnitType : std::uint8_t { Complier, AlwaysTaker, NeverTaker };

enum class DgpKind { Discrete, Gaussian, External };

struct DiscreteDgpConfig {
    std::size_t n = 1000;
    double p_complier = 0.25;
    double p_always = 0.35;
    double p_never = 0.40;
    double q = 0.5;
    double alpha = 0.0;
    double beta_complier = 2.0;
    double beta_always = 2.0;
    double sigma_u = 1.0;
    double eps1 = 0.0;  // P[stated complier | not a complier]
    double eps2 = 0.0;  // P[stated non-complier | complier]
    bool elicit_stated_types = true;

    /// Throws Error(InvalidConfig) naming the violated constraint.
    void validate() const;
};

struct GaussianDgpConfig {
    std::size_t n = 40;
    double q = 0.5;
    double alpha = 0.0;
    double beta = 1.0;
    double phi = 0.0;
    double pi = 0.6324555320336759;
    double sigma_u = 1.0;
    double sigma_eta = 1.0;

    void validate() const;
};

struct Unit {
    std::optional<UnitType> true_type;
    std::optional<bool> stated_complier;
    int z = 0;
    double d = 0.0;
    double y = 0.0;
    std::optional<bool> screened_in;
};

using ConfigEcho = std::variant<std::monostate, DiscreteDgpConfig, GaussianDgpConfig>;

struct Sample {
    std::vector<Unit> units;
    DgpKind kind = DgpKind::External;
    ConfigEcho config;
    double realized_q = 0.0;

    std::size_t size() const noexcept { return units.size(); }
    bool has_types() const noexcept;
    bool has_stated_types() const noexcept;
};

/// Builds a Sample and fills realized_q from the units. Throws on empty input.
Sample make_sample(std::vector<Unit> units, DgpKind kind, ConfigEcho config = {});

/// Copy of the sample with stated types removed.
Sample without_stated_types(Sample s);

/// Number of treated units under complete randomization: floor(q*n).
std::size_t treated_count(std::size_t n, double q);

/// Complete randomization: exactly floor(q*n) ones, uniformly permuted.
std::vector<std::uint8_t> assign_instrument(std::size_t n, double q, Seed seed);

constexpr int realize_treatment(UnitType t, int z) noexcept {
    switch (t) {
        case UnitType::Complier: return z;
        case UnitType::AlwaysTaker: return 1;
        case UnitType::NeverTaker: return 0;
    }
    return 0;
}

Sample generate_discrete(const DiscreteDgpConfig& cfg, Seed seed);

/// Screened Gaussian design of size round(r*n) and first-stage slope pi/r.
Sample generate_gaussian(const GaussianDgpConfig& cfg, double r, Seed seed);

}  // namespace screenlab
