#include "cdmapower/regions.hpp"

#include <limits>
#include <string>

#include "cdmapower/errors.hpp"

namespace cdmapower {
namespace {

void check_partner(CellIndex k) {
  if (k == kServingCell || k >= kNumCells) {
    throw InvalidParameterError("SHO partner index " + std::to_string(k + 1) +
                                " out of range 2..19");
  }
}

AffineBound upper(CellIndex ref, double offset) {
  return {ref, offset, BoundKind::kUpper};
}
AffineBound lower(CellIndex ref, double offset) {
  return {ref, offset, BoundKind::kLower};
}

}  // namespace

int ConnectionMode::participants() const {
  switch (kind) {
    case ModeKind::kHho:
      return 1;
    case ModeKind::kSho2:
      return 2;
    case ModeKind::kSho3:
      return 3;
    case ModeKind::kNotCamped:
      return 0;
  }
  return 0;
}

std::string ConnectionMode::label() const {
  switch (kind) {
    case ModeKind::kHho:
      return "HHO";
    case ModeKind::kSho2:
      return "SHO2(" + std::to_string(k + 1) + ")";
    case ModeKind::kSho3:
      return "SHO3(" + std::to_string(k + 1) + "," + std::to_string(l + 1) + ")";
    case ModeKind::kNotCamped:
      return "NotCamped";
  }
  return "?";
}

std::vector<CellIndex> RegionSpec::anchors() const {
  switch (mode.kind) {
    case ModeKind::kSho2:
      return {kServingCell, mode.k};
    case ModeKind::kSho3:
      return {kServingCell, mode.k, mode.l};
    default:
      return {kServingCell};
  }
}

bool RegionSpec::is_anchor(CellIndex i) const {
  if (i == kServingCell) return true;
  if (mode.kind == ModeKind::kSho2) return i == mode.k;
  if (mode.kind == ModeKind::kSho3) return i == mode.k || i == mode.l;
  return false;
}

const AffineBound& RegionSpec::upper_of(CellIndex i) const {
  const auto& list = bounds.at(i);
  if (is_anchor(i) || list.size() != 1 || list.front().kind != BoundKind::kUpper) {
    throw InvalidStateError("cell " + std::to_string(i + 1) +
                            " has no single upper bound in " + mode.label());
  }
  return list.front();
}

bool RegionSpec::contains(const ShadowVector& xi) const {
  for (CellIndex i = 0; i < kNumCells; ++i) {
    for (const auto& b : bounds[i]) {
      if (!b.holds(xi[i], xi)) return false;
    }
  }
  return true;
}

RegionSpec hho_region(int as_size, const MsView& view, const PropagationEnv& env,
                      const HandoffPolicy& policy) {
  if (as_size < 1 || as_size > 3) throw InvalidParameterError("as_size must be 1..3");
  const double b = env.b_corr;
  const double slack = as_size == 1 ? policy.cst_xi(b) : -policy.sht_xi(b);
  RegionSpec spec;
  spec.mode = ConnectionMode::hho();
  spec.as_size = as_size;
  for (CellIndex i = 1; i < kNumCells; ++i) {
    const double r1i = db_offset(view, kServingCell, i, env.alpha, b);
    spec.bounds[i].push_back(upper(kServingCell, -r1i + slack));
  }
  return spec;
}

RegionSpec sho2_region(int as_size, CellIndex k, const MsView& view,
                       const PropagationEnv& env, const HandoffPolicy& policy) {
  if (as_size != 2 && as_size != 3) {
    throw InvalidParameterError("2-way SHO requires as_size 2 or 3");
  }
  check_partner(k);
  const double b = env.b_corr;
  const double cst = policy.cst_xi(b);
  const double sht = policy.sht_xi(b);
  RegionSpec spec;
  spec.mode = ConnectionMode::sho2(k);
  spec.as_size = as_size;
  const double r1k = db_offset(view, kServingCell, k, env.alpha, b);
  spec.bounds[k].push_back(lower(kServingCell, -r1k - sht));
  spec.bounds[k].push_back(upper(kServingCell, -r1k + cst));
  for (CellIndex i = 1; i < kNumCells; ++i) {
    if (i == k) continue;
    if (as_size == 2) {
      spec.bounds[i].push_back(upper(k, -db_offset(view, k, i, env.alpha, b)));
    } else {
      spec.bounds[i].push_back(
          upper(kServingCell, -db_offset(view, kServingCell, i, env.alpha, b) - sht));
    }
  }
  return spec;
}

RegionSpec sho3_region(CellIndex k, CellIndex l, const MsView& view,
                       const PropagationEnv& env, const HandoffPolicy& policy) {
  check_partner(k);
  check_partner(l);
  if (k == l) throw InvalidParameterError("3-way SHO partners must differ");
  const double b = env.b_corr;
  const double cst = policy.cst_xi(b);
  const double sht = policy.sht_xi(b);
  RegionSpec spec;
  spec.mode = ConnectionMode::sho3(k, l);
  spec.as_size = 3;
  const double r1k = db_offset(view, kServingCell, k, env.alpha, b);
  const double r1l = db_offset(view, kServingCell, l, env.alpha, b);
  spec.bounds[k].push_back(lower(kServingCell, -r1k - sht));
  spec.bounds[k].push_back(upper(kServingCell, -r1k + cst));
  spec.bounds[l].push_back(lower(kServingCell, -r1l - sht));
  spec.bounds[l].push_back(upper(kServingCell, -r1l + cst));
  spec.bounds[l].push_back(upper(k, -db_offset(view, k, l, env.alpha, b)));
  for (CellIndex i = 1; i < kNumCells; ++i) {
    if (i == k || i == l) continue;
    spec.bounds[i].push_back(upper(l, -db_offset(view, l, i, env.alpha, b)));
  }
  return spec;
}

Classifier::Classifier(int as_size, const MsView& view, const PropagationEnv& env,
                       const HandoffPolicy& policy)
    : as_size_(as_size),
      cst_(policy.cst_xi(env.b_corr)),
      sht_(policy.sht_xi(env.b_corr)) {
  if (as_size < 1 || as_size > 3) throw InvalidParameterError("as_size must be 1..3");
  offset_[kServingCell] = -std::numeric_limits<double>::infinity();
  for (CellIndex i = 1; i < kNumCells; ++i) {
    offset_[i] = db_offset(view, kServingCell, i, env.alpha, env.b_corr);
  }
}

ConnectionMode Classifier::classify(const ShadowVector& xi) const {
  // Relative strength of each neighbour against the serving cell, in the
  // shadowing domain: s_i = xi_i - xi_1 + R_{1,i}. Every inequality of the
  // cell-selection/handoff system reduces to comparisons of these.
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double best = kNegInf;
  double second = kNegInf;
  CellIndex best_i = 0;
  CellIndex second_i = 0;
  for (CellIndex i = 1; i < kNumCells; ++i) {
    const double s = xi[i] - xi[kServingCell] + offset_[i];
    if (s > best) {
      second = best;
      second_i = best_i;
      best = s;
      best_i = i;
    } else if (s > second) {
      second = s;
      second_i = i;
    }
  }
  if (best > cst_) return ConnectionMode::not_camped();
  if (as_size_ == 1 || best <= -sht_) return ConnectionMode::hho();
  if (as_size_ == 2 || second <= -sht_) return ConnectionMode::sho2(best_i);
  return ConnectionMode::sho3(best_i, second_i);
}

ConnectionMode classify(const ShadowVector& xi, int as_size, const MsView& view,
                        const PropagationEnv& env, const HandoffPolicy& policy) {
  return Classifier(as_size, view, env, policy).classify(xi);
}

std::vector<ConnectionMode> enumerate_modes(int as_size) {
  std::vector<ConnectionMode> modes{ConnectionMode::hho()};
  if (as_size >= 2) {
    for (CellIndex k = 1; k < kNumCells; ++k) modes.push_back(ConnectionMode::sho2(k));
  }
  if (as_size >= 3) {
    for (CellIndex k = 1; k < kNumCells; ++k) {
      for (CellIndex l = 1; l < kNumCells; ++l) {
        if (k != l) modes.push_back(ConnectionMode::sho3(k, l));
      }
    }
  }
  return modes;
}

}  // namespace cdmapower
