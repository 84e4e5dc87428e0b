#include "cli_io.h"

#include <fstream>
#include <set>
#include <sstream>

#include "cga/core/scaffold.h"
#include "cga/desc/sa_score.h"
#include "cga/fmt/selfies.h"
#include "cga/fmt/smiles.h"
#include "cga/ga/history.h"

namespace cga::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ifstream open_input(const fs::path &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot read '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const fs::path &path) {
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

std::string fragment_file_name(const fs::path &stats_path) {
  return stats_path.stem().string() + ".fragments.tsv";
}

}  // namespace

std::vector<std::string> read_first_tokens(const fs::path &path) {
  auto in = open_input(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first) || first[0] == '#')
      continue;
    out.push_back(std::move(first));
  }
  return out;
}

LoadedDataset load_dataset(const fs::path &path) {
  LoadedDataset d;
  d.path = path;
  for (const auto &smiles: read_first_tokens(path)) {
    ++d.total;
    try {
      d.mols.push_back(parse_smiles(smiles));
    } catch (const std::exception &) {
      ++d.skipped;
    }
  }
  return d;
}

ScoringModel build_model(const std::vector<Molecule> &mols,
                         RingPenaltyMode mode) {
  ScoringModel model;
  model.fragments = FragmentTable::build(mols);
  model.stats = compute_stats(mols, model.fragments, mode);
  model.alphabet = alphabet_from(mols);
  return model;
}

void save_model(const ScoringModel &model, const LoadedDataset &dataset,
                const fs::path &path) {
  const std::string fragments = fragment_file_name(path);
  {
    auto out = open_output(path.parent_path() / fragments);
    model.fragments.save(out);
  }
  json alphabet = json::array();
  for (const Token &t: model.alphabet)
    alphabet.push_back(to_string(t));
  const json doc {
    { "stats", to_json(model.stats) },
    { "dataset",
      { { "path", dataset.path.string() },
        { "total", dataset.total },
        { "parsed", dataset.mols.size() },
        { "skipped", dataset.skipped } } },
    { "descriptors",
      { { "logp", "crippen-atom-contributions" },
        { "sa", "fragment-rarity-plus-complexity" },
        { "sa_fragment_radius", kFragmentRadius },
        { "ring_penalty_mode", std::string(to_string(model.stats.ring_mode)) },
        { "fragment_table", fragments },
        { "fragment_count", model.fragments.size() } } },
    { "fingerprint", { { "radius", kDefaultRadius }, { "bits", kDefaultBits } } },
    { "alphabet", alphabet },
  };
  write_json(doc, path);
}

ScoringModel load_model(const fs::path &path) {
  const json doc = read_json(path);
  ScoringModel model;
  try {
    model.stats = stats_from_json(doc.at("stats"));
    const auto name = doc.at("descriptors").at("fragment_table").get<std::string>();
    auto in = open_input(path.parent_path() / name);
    model.fragments = FragmentTable::load(in);
    model.alphabet.clear();
    for (const auto &t: doc.at("alphabet")) {
      const auto tokens = parse_selfies(t.get<std::string>());
      if (tokens.size() != 1)
        throw std::runtime_error("bad alphabet entry " + t.dump());
      model.alphabet.push_back(tokens.front());
    }
  } catch (const json::exception &e) {
    throw std::runtime_error("malformed stats file '" + path.string()
                             + "': " + e.what());
  } catch (const SelfiesError &e) {
    throw std::runtime_error("malformed alphabet in '" + path.string()
                             + "': " + e.what());
  }
  return model;
}

void write_json(const json &doc, const fs::path &path) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

json read_json(const fs::path &path) {
  auto in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    throw std::runtime_error("malformed JSON in '" + path.string()
                             + "': " + e.what());
  }
}

void write_final_population(const RunHistory &h, const fs::path &path) {
  auto out = open_output(path);
  out << "# config " << to_json(h.config).dump() << '\n';
  out << "# target " << h.target_smiles << " j=" << format_double(h.target_j)
      << '\n';
  out << "# smiles\tj\tsimilarity\n";
  for (const auto &m: h.final_population)
    out << m.smiles << '\t' << format_double(m.j) << '\t'
        << format_double(m.similarity) << '\n';
}

json scaffold_report(const RunHistory &h) {
  const Molecule target = parse_smiles(h.target_smiles);
  const Molecule scaffold = murcko_scaffold(target);

  json members = json::array();
  std::set<std::string> seen;
  std::size_t retained = 0;
  for (const auto &m: h.final_population) {
    if (!seen.insert(m.smiles).second)
      continue;
    const bool contains = substructure_contains(parse_smiles(m.smiles),
                                                scaffold);
    retained += contains ? 1 : 0;
    members.push_back({ { "smiles", m.smiles },
                        { "j", m.j },
                        { "similarity", m.similarity },
                        { "contains_scaffold", contains } });
  }
  const double fraction = members.empty()
                              ? 0.0
                              : static_cast<double>(retained)
                                    / static_cast<double>(members.size());
  return {
    { "config", to_json(h.config) },
    { "target", h.target_smiles },
    { "target_scaffold", write_smiles(scaffold) },
    { "unique_molecules", members.size() },
    { "retained", retained },
    { "retained_fraction", fraction },
    { "molecules", members },
  };
}

}  // namespace cga::cli
