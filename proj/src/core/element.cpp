#include "cga/core/element.h"

#include <array>
#include <vector>

namespace cga {
namespace {

struct ValenceEntry {
  Element element;
  int charge;
  std::vector<int> valences;
};

// Neutral values follow the SMILES organic-subset convention. Charged entries
// follow the isoelectronic neighbour (N+ behaves like C, O- like F, ...).
const std::vector<ValenceEntry> &valence_table() {
  static const std::vector<ValenceEntry> table = {
      {Element::kH, 0, {1}},       {Element::kH, 1, {0}},
      {Element::kH, -1, {0}},      {Element::kB, 0, {3}},
      {Element::kB, -1, {4}},      {Element::kB, 1, {2}},
      {Element::kC, 0, {4}},       {Element::kC, 1, {3}},
      {Element::kC, -1, {3}},      {Element::kC, 2, {2}},
      {Element::kC, -2, {2}},      {Element::kN, 0, {3}},
      {Element::kN, 1, {4}},       {Element::kN, -1, {2}},
      {Element::kN, 2, {3}},       {Element::kN, -2, {1}},
      {Element::kO, 0, {2}},       {Element::kO, 1, {3}},
      {Element::kO, -1, {1}},      {Element::kO, -2, {0}},
      {Element::kF, 0, {1}},       {Element::kF, -1, {0}},
      {Element::kP, 0, {3, 5}},    {Element::kP, 1, {4}},
      {Element::kP, -1, {2}},      {Element::kS, 0, {2, 4, 6}},
      {Element::kS, 1, {3, 5}},    {Element::kS, -1, {1, 3, 5}},
      {Element::kCl, 0, {1}},      {Element::kCl, -1, {0}},
      {Element::kCl, 1, {2}},      {Element::kBr, 0, {1}},
      {Element::kBr, -1, {0}},     {Element::kBr, 1, {2}},
      {Element::kI, 0, {1}},       {Element::kI, -1, {0}},
      {Element::kI, 1, {2}},
  };
  return table;
}

struct SymbolEntry {
  std::string_view symbol;
  Element element;
};

constexpr std::array<SymbolEntry, 11> kSymbols = {{
    {"H", Element::kH},
    {"B", Element::kB},
    {"C", Element::kC},
    {"N", Element::kN},
    {"O", Element::kO},
    {"F", Element::kF},
    {"P", Element::kP},
    {"S", Element::kS},
    {"Cl", Element::kCl},
    {"Br", Element::kBr},
    {"I", Element::kI},
}};

}  // namespace

std::string_view element_symbol(Element e) {
  for (const auto &entry: kSymbols)
    if (entry.element == e)
      return entry.symbol;
  return "?";
}

std::optional<Element> element_from_symbol(std::string_view symbol) {
  for (const auto &entry: kSymbols)
    if (entry.symbol == symbol)
      return entry.element;
  return std::nullopt;
}

bool in_organic_subset(Element e) { return e != Element::kH; }

bool can_be_aromatic(Element e) {
  switch (e) {
  case Element::kB:
  case Element::kC:
  case Element::kN:
  case Element::kO:
  case Element::kP:
  case Element::kS:
    return true;
  default:
    return false;
  }
}

std::span<const int> allowed_valences(Element e, int formal_charge) {
  for (const auto &entry: valence_table())
    if (entry.element == e && entry.charge == formal_charge)
      return entry.valences;
  return {};
}

int max_valence(Element e, int formal_charge) {
  auto vals = allowed_valences(e, formal_charge);
  return vals.empty() ? -1 : vals.back();
}

std::optional<int> lowest_valence_at_least(Element e, int formal_charge,
                                           int needed) {
  for (int v: allowed_valences(e, formal_charge))
    if (v >= needed)
      return v;
  return std::nullopt;
}

}  // namespace cga
