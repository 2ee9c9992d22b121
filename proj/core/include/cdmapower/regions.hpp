#pragma once

#include <array>
#include <string>
#include <vector>

#include "cdmapower/geometry.hpp"
#include "cdmapower/radio_model.hpp"

namespace cdmapower {

enum class BoundKind { kUpper, kLower };

// xi_target <= xi_ref + offset (upper) or xi_target >= xi_ref + offset (lower).
// offset may be +-infinity; an upper bound at +inf always holds.
struct AffineBound {
  CellIndex ref = kServingCell;
  double offset = 0.0;
  BoundKind kind = BoundKind::kUpper;

  double value(const ShadowVector& xi) const { return xi[ref] + offset; }
  bool holds(double x, const ShadowVector& xi) const {
    const double v = value(xi);
    return kind == BoundKind::kUpper ? x <= v : x >= v;
  }
};

enum class ModeKind { kHho, kSho2, kSho3, kNotCamped };

struct ConnectionMode {
  ModeKind kind = ModeKind::kHho;
  CellIndex k = 0;  // stronger SHO partner
  CellIndex l = 0;  // weaker SHO partner (3-way only)

  static ConnectionMode hho() { return {ModeKind::kHho, 0, 0}; }
  static ConnectionMode sho2(CellIndex k) { return {ModeKind::kSho2, k, 0}; }
  static ConnectionMode sho3(CellIndex k, CellIndex l) { return {ModeKind::kSho3, k, l}; }
  static ConnectionMode not_camped() { return {ModeKind::kNotCamped, 0, 0}; }

  int participants() const;
  bool operator==(const ConnectionMode&) const = default;
  // "HHO", "SHO2(k)", "SHO3(k,l)" with 1-based cell numbers.
  std::string label() const;
};

// Inequality system of one connection subset. The anchors (serving cell and
// SHO partners) carry window bounds; every other cell carries exactly one
// upper bound anchored at one of them.
struct RegionSpec {
  ConnectionMode mode;
  int as_size = 1;
  std::array<std::vector<AffineBound>, kNumCells> bounds;

  // Integration order: {0}, {0, k} or {0, k, l}.
  std::vector<CellIndex> anchors() const;
  bool is_anchor(CellIndex i) const;
  // The single upper bound of a non-anchor cell.
  const AffineBound& upper_of(CellIndex i) const;
  bool contains(const ShadowVector& xi) const;
};

RegionSpec hho_region(int as_size, const MsView& view, const PropagationEnv& env,
                      const HandoffPolicy& policy);
RegionSpec sho2_region(int as_size, CellIndex k, const MsView& view,
                       const PropagationEnv& env, const HandoffPolicy& policy);
RegionSpec sho3_region(CellIndex k, CellIndex l, const MsView& view,
                       const PropagationEnv& env, const HandoffPolicy& policy);

// Assigns shadowing vectors to connection modes. Ties (a measure-zero event)
// go to the lower-multiplicity mode, then to the smaller cell index.
class Classifier {
 public:
  Classifier(int as_size, const MsView& view, const PropagationEnv& env,
             const HandoffPolicy& policy);

  ConnectionMode classify(const ShadowVector& xi) const;

 private:
  int as_size_;
  double cst_;
  double sht_;
  std::array<double, kNumCells> offset_{};  // R_{1,i}
};

ConnectionMode classify(const ShadowVector& xi, int as_size, const MsView& view,
                        const PropagationEnv& env, const HandoffPolicy& policy);

// Every subset of the camping event for the given active-set size, ordered by
// mode then indices: HHO, SHO2 over k, SHO3 over ordered (k, l).
std::vector<ConnectionMode> enumerate_modes(int as_size);

}  // namespace cdmapower
