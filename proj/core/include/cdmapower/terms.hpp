#pragma once

#include <cstddef>
#include <string>

#include "cdmapower/geometry.hpp"

namespace cdmapower {

// Interference sums of one subset: X against the serving cell, Y against
// partner k, Z against partner l.
enum class Factor { kX = 0, kY = 1, kZ = 2 };

// Component index of the constant intra-cell term (1 - u).
inline constexpr std::size_t kIntraComponent = kNumCells;

// One summand of an interference sum: component c of factor f, i.e.
// C_{j,c} 10^{b (xi_c - xi_j) / 10} with j the factor's own cell, or the
// constant (1 - u) when c == kIntraComponent. component == own cell is
// invalid (that summand does not exist).
struct TermId {
  Factor factor = Factor::kX;
  std::size_t component = kIntraComponent;

  bool operator==(const TermId&) const = default;
  // "X_3", "Y_0" (intra), 1-based cells.
  std::string label() const;
};

}  // namespace cdmapower
