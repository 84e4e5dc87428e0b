#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace cga {

// Supported element subset. Values are atomic numbers.
enum class Element : std::uint8_t {
  kH = 1,
  kB = 5,
  kC = 6,
  kN = 7,
  kO = 8,
  kF = 9,
  kP = 15,
  kS = 16,
  kCl = 17,
  kBr = 35,
  kI = 53,
};

constexpr int atomic_number(Element e) { return static_cast<int>(e); }

std::string_view element_symbol(Element e);

std::optional<Element> element_from_symbol(std::string_view symbol);

// Elements that may be written without brackets in SMILES.
bool in_organic_subset(Element e);

// Elements that may carry a lowercase aromatic symbol.
bool can_be_aromatic(Element e);

// Allowed total valences (bond order sum + hydrogens) for an element in a
// given charge state, ascending. Empty when the combination is unsupported.
std::span<const int> allowed_valences(Element e, int formal_charge);

// Largest allowed valence, or -1 if the charge state is unsupported.
int max_valence(Element e, int formal_charge);

// Smallest allowed valence >= needed, if any.
std::optional<int> lowest_valence_at_least(Element e, int formal_charge,
                                           int needed);

}  // namespace cga
