#pragma once

// Machine-readable outputs. JSON documents carry "schema_version"; the
// RepTable CSV column order is fixed:
//
//   rep_index,mechanism,beta_hat,pi_hat,se,retention_fraction,sign_screen_pass,discarded,reason

#include <iosfwd>
#include <optional>

#include <json.hpp>

#include "screenlab/diagnostics.hpp"
#include "screenlab/estimators.hpp"
#include "screenlab/montecarlo.hpp"
#include "screenlab/power.hpp"

namespace screenlab {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const EstimateReport& r);
nlohmann::json to_json(const RetentionEstimate& r);
nlohmann::json to_json(const TnrEstimate& r);
nlohmann::json to_json(const McSummary& s);
nlohmann::json to_json(const SizePowerResult& r);
nlohmann::json to_json(const GainReport& g);
nlohmann::json to_json(const Scenario& sc);

void write_rep_table_csv(std::ostream& out, const RepTable& t);
nlohmann::json rep_table_json(const RepTable& t);

}  // namespace screenlab
