#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cga/core/molecule.h"
#include "cga/ga/engine.h"

namespace cga::cli {

// Bad user input (unparsable SMILES, malformed flag values). Maps to exit 2.
class UsageError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct LoadedDataset {
  std::filesystem::path path;
  std::vector<Molecule> mols;
  std::size_t total = 0;    // non-blank, non-comment lines
  std::size_t skipped = 0;  // lines whose first token failed to parse
};

// One SMILES per line; anything after the first whitespace is an ID and is
// ignored. Blank lines and lines starting with '#' are not counted. Throws
// std::runtime_error when the file cannot be read.
LoadedDataset load_dataset(const std::filesystem::path &path);

// First tokens of the non-blank, non-comment lines.
std::vector<std::string> read_first_tokens(const std::filesystem::path &path);

// Fragment table, stats and alphabet computed over a dataset.
ScoringModel build_model(const std::vector<Molecule> &mols,
                         RingPenaltyMode mode = RingPenaltyMode::kSize);

/**
 * Writes the stats JSON to `path` and the fragment table next to it as
 * "<stem>.fragments.tsv". The JSON records dataset line counts, the
 * descriptor and fingerprint configuration and the mutation alphabet.
 */
void save_model(const ScoringModel &model, const LoadedDataset &dataset,
                const std::filesystem::path &path);

// Inverse of save_model. Throws std::runtime_error on unreadable or
// malformed files.
ScoringModel load_model(const std::filesystem::path &path);

void write_json(const nlohmann::json &doc, const std::filesystem::path &path);
nlohmann::json read_json(const std::filesystem::path &path);

// Final population as "smiles<TAB>j<TAB>similarity" rows, best first, after
// "# config" and "# target" comment lines.
void write_final_population(const RunHistory &history,
                            const std::filesystem::path &path);

// Murcko scaffold of the target and, per unique final molecule, whether it
// still contains that scaffold as a substructure.
nlohmann::json scaffold_report(const RunHistory &history);

}  // namespace cga::cli
