#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "cga/ga/engine.h"

namespace cga {

nlohmann::json to_json(const GAConfig &cfg);
// Missing keys keep their defaults. Throws ConfigError on bad values.
GAConfig config_from_json(const nlohmann::json &doc);

nlohmann::json to_json(const RunHistory &history);
RunHistory history_from_json(const nlohmann::json &doc);

// One row per generation after "# config <json>" and "# target <json>"
// lines, the latter holding target smiles, j and the run improvement. Columns:
// generation, phase, best_fitness, mean_fitness, best_smiles,
// best_similarity, best_j, feasible_fraction, then the operator counters.
void write_history_csv(const RunHistory &history, std::ostream &out);

// Shortest text that reads back to the same double.
std::string format_double(double v);

}  // namespace cga
