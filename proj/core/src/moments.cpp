#include "cdmapower/moments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <span>
#include <thread>
#include <tuple>

#include "cdmapower/errors.hpp"

namespace cdmapower {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr Tilt kWindowTiltMin = -2;
constexpr Tilt kWindowTiltMax = 2;

// A region flattened into integration levels: one level per anchor, and for
// every other cell the level its upper bound hangs on.
struct Plan {
  std::vector<CellIndex> anchors;
  std::array<int, kNumCells> level_of{};
  std::vector<CellIndex> others;
  std::vector<int> other_level;
  std::vector<double> other_offset;
  std::vector<LevelSpec> levels;
  bool empty = false;
};

Plan make_plan(const RegionSpec& region) {
  Plan plan;
  plan.anchors = region.anchors();
  plan.level_of.fill(-1);
  for (std::size_t d = 0; d < plan.anchors.size(); ++d) {
    plan.level_of[plan.anchors[d]] = static_cast<int>(d);
  }
  for (std::size_t d = 0; d < plan.anchors.size(); ++d) {
    LevelSpec level;
    for (const auto& b : region.bounds[plan.anchors[d]]) {
      const int ref = plan.level_of[b.ref];
      if (ref < 0 || ref >= static_cast<int>(d)) {
        throw InvalidStateError("anchor bound refers to a later level in " +
                                region.mode.label());
      }
      const AffineLimit lim = AffineLimit::of(ref, b.offset);
      if (b.kind == BoundKind::kLower) {
        if (b.offset == kInf) plan.empty = true;
        level.lower.push_back(lim);
      } else {
        if (b.offset == -kInf) plan.empty = true;
        level.upper.push_back(lim);
      }
    }
    plan.levels.push_back(level);
  }
  for (CellIndex i = 0; i < kNumCells; ++i) {
    if (region.is_anchor(i)) continue;
    const AffineBound& b = region.upper_of(i);
    const int ref = plan.level_of[b.ref];
    if (ref < 0) throw InvalidStateError("bound refers to a non-anchor cell");
    plan.others.push_back(i);
    plan.other_level.push_back(ref);
    plan.other_offset.push_back(b.offset);
  }
  return plan;
}

int factor_count(const RegionSpec& region) { return region.mode.participants(); }

// C_{j,i} for every anchor j (rows follow the anchor order).
std::vector<std::array<double, kNumCells>> gain_rows(const Plan& plan,
                                                     const LinkModel& model) {
  std::vector<std::array<double, kNumCells>> rows(plan.anchors.size());
  for (std::size_t f = 0; f < plan.anchors.size(); ++f) {
    const CellIndex j = plan.anchors[f];
    for (CellIndex i = 0; i < kNumCells; ++i) {
      rows[f][i] = i == j ? 0.0 : gain_ratio(model.view, j, i, model.env.alpha);
    }
  }
  return rows;
}

// Upper bound of each non-anchor cell at one node.
inline double bound_at(const Plan& plan, std::size_t n, std::span<const double> point) {
  return point[static_cast<std::size_t>(plan.other_level[n])] + plan.other_offset[n];
}

std::size_t detail_index(std::size_t f, std::size_t c, std::size_t g, std::size_t d) {
  constexpr std::size_t n = TermDetail::kComponents;
  return ((f * 3 + g) * n + c) * n + d;
}

void check_term(const TermId& t, const Plan& plan) {
  const auto f = static_cast<std::size_t>(t.factor);
  if (f >= plan.anchors.size()) {
    throw InvalidParameterError("term " + t.label() + " has no factor in this subset");
  }
  if (t.component > kIntraComponent || t.component == plan.anchors[f]) {
    throw InvalidParameterError("term " + t.label() + " does not exist");
  }
}

// Integral of coefficient * prod_cells T_cell^{e_cell} over the region, with
// T = 10^{b xi / 10}. Anchor exponents become level tilts; other cells
// contribute A(a_n, e_n). An innermost anchor that no other cell depends on
// is integrated in closed form as a window mass.
double exponent_integral(const Plan& plan, const TiltedGaussian& g,
                         const QuadratureSpec& quad, double coefficient,
                         const std::array<int, kNumCells>& e) {
  if (plan.empty || coefficient == 0.0) return 0.0;
  std::vector<LevelSpec> levels = plan.levels;
  for (std::size_t d = 0; d < levels.size(); ++d) {
    const Tilt y = e[plan.anchors[d]];
    levels[d].tilt = levels[d].window_tilt_min = levels[d].window_tilt_max = y;
  }
  const std::size_t last = levels.size() - 1;
  bool collapse = last > 0;
  for (int ref : plan.other_level) {
    if (ref == static_cast<int>(last)) collapse = false;
  }

  std::vector<Tilt> orders(plan.others.size());
  for (std::size_t n = 0; n < plan.others.size(); ++n) {
    const int o = e[plan.others[n]];
    if (o < 0 || o > 2) throw InvalidStateError("unsupported exponent on a free cell");
    orders[n] = o;
  }

  const LevelSpec inner = levels[last];
  if (collapse) levels.pop_back();
  const Kernel kernel = [&](std::span<const double> point) {
    double v = coefficient;
    if (collapse) {
      double lo = -kInf;
      double hi = kInf;
      for (const auto& l : inner.lower) lo = std::max(lo, point[l.level] + l.offset);
      for (const auto& u : inner.upper) hi = std::min(hi, point[u.level] + u.offset);
      // window mass, oriented so it is never negative
      const double mass = hi > lo ? g.cdf(hi, inner.tilt) - g.cdf(lo, inner.tilt) : 0.0;
      v *= std::max(mass, 0.0);
    }
    for (std::size_t n = 0; n < plan.others.size() && v != 0.0; ++n) {
      v *= g.cdf(bound_at(plan, n, point), orders[n]);
    }
    return v;
  };
  return integrate_nested(levels, kernel, quad, g.sigma(), g.b_corr());
}

// Exponents and coefficient of one summand.
void add_term(const TermId& t, const Plan& plan, const LinkModel& model,
              double& coefficient, std::array<int, kNumCells>& e) {
  if (t.component == kIntraComponent) {
    coefficient *= 1.0 - model.orthogonality;
    return;
  }
  const CellIndex j = plan.anchors[static_cast<std::size_t>(t.factor)];
  coefficient *= gain_ratio(model.view, j, t.component, model.env.alpha);
  e[t.component] += 1;
  e[j] -= 1;
}

double term_integral(const RegionSpec& region, const LinkModel& model,
                     const QuadratureSpec& quad, const TermId* a, const TermId* b) {
  const Plan plan = make_plan(region);
  const TiltedGaussian g(model.env.sigma_db, model.env.b_corr);
  double coefficient = 1.0;
  std::array<int, kNumCells> e{};
  if (a) {
    check_term(*a, plan);
    add_term(*a, plan, model, coefficient, e);
  }
  if (b) {
    check_term(*b, plan);
    add_term(*b, plan, model, coefficient, e);
  }
  return exponent_integral(plan, g, quad, coefficient, e);
}

double checked_probability(const RegionSpec& region, const PropagationEnv& env,
                           const QuadratureSpec& quad, ModeKind kind) {
  if (region.mode.kind != kind) {
    throw InvalidParameterError("region " + region.mode.label() + " has the wrong mode");
  }
  return subset_probability(region, env, quad);
}

}  // namespace

LinkModel LinkModel::from(const ScenarioParams& p) {
  LinkModel m;
  m.view = p.view();
  m.env = p.env;
  m.orthogonality = p.service.orthogonality;
  m.ct = load_constant(p.service);
  return m;
}

std::string TermId::label() const {
  static constexpr const char* kNames[] = {"X", "Y", "Z"};
  const std::string idx =
      component == kIntraComponent ? std::string("0") : std::to_string(component + 1);
  return std::string(kNames[static_cast<int>(factor)]) + "_" + idx;
}

double& TermDetail::pair(Factor f, std::size_t c, Factor g, std::size_t d) {
  return second.at(detail_index(static_cast<std::size_t>(f), c, static_cast<std::size_t>(g), d));
}

double TermDetail::pair(Factor f, std::size_t c, Factor g, std::size_t d) const {
  return second.at(detail_index(static_cast<std::size_t>(f), c, static_cast<std::size_t>(g), d));
}

double TermSet::term(const TermId& a) const {
  if (!detail) throw InvalidStateError("term set computed without detail");
  if (!defined()) throw InvalidStateError("term of a zero-probability subset");
  return detail->first.at(static_cast<std::size_t>(a.factor)).at(a.component) / probability;
}

double TermSet::term(const TermId& a, const TermId& b) const {
  if (!detail) throw InvalidStateError("term set computed without detail");
  if (!defined()) throw InvalidStateError("term of a zero-probability subset");
  return detail->pair(a.factor, a.component, b.factor, b.component) / probability;
}

double MomentReport::probability_of(ModeKind kind) const {
  double p = 0.0;
  for (const auto& s : subsets) {
    if (s.mode.kind == kind) p += s.probability;
  }
  return p;
}

const SubsetMoments* MomentReport::find(const ConnectionMode& mode) const {
  for (const auto& s : subsets) {
    if (s.mode == mode) return &s;
  }
  return nullptr;
}

RegionSpec region_for(const ConnectionMode& mode, const ScenarioParams& p) {
  const MsView view = p.view();
  switch (mode.kind) {
    case ModeKind::kHho:
      return hho_region(p.policy.as_size, view, p.env, p.policy);
    case ModeKind::kSho2:
      return sho2_region(p.policy.as_size, mode.k, view, p.env, p.policy);
    case ModeKind::kSho3:
      if (p.policy.as_size != 3) throw InvalidParameterError("3-way SHO needs as_size 3");
      return sho3_region(mode.k, mode.l, view, p.env, p.policy);
    case ModeKind::kNotCamped:
      break;
  }
  throw InvalidParameterError("no region for " + mode.label());
}

double subset_probability(const RegionSpec& region, const PropagationEnv& env,
                          const QuadratureSpec& quad) {
  const Plan plan = make_plan(region);
  const TiltedGaussian g(env.sigma_db, env.b_corr);
  const double p = exponent_integral(plan, g, quad, 1.0, {});
  return std::clamp(p, 0.0, 1.0);
}

double prob_hho(const RegionSpec& region, const PropagationEnv& env,
                const QuadratureSpec& quad) {
  return checked_probability(region, env, quad, ModeKind::kHho);
}

double prob_sho2(const RegionSpec& region, const PropagationEnv& env,
                 const QuadratureSpec& quad) {
  return checked_probability(region, env, quad, ModeKind::kSho2);
}

double prob_sho3(const RegionSpec& region, const PropagationEnv& env,
                 const QuadratureSpec& quad) {
  return checked_probability(region, env, quad, ModeKind::kSho3);
}

TermSet subset_terms(const RegionSpec& region, const LinkModel& model,
                     const QuadratureSpec& quad, bool detail) {
  quad.validate();
  const Plan plan = make_plan(region);
  TermSet out;
  out.mode = region.mode;
  out.factors = factor_count(region);
  if (detail) out.detail.emplace();
  if (plan.empty) return out;

  const TiltedGaussian g(model.env.sigma_db, model.env.b_corr);
  const auto rows = gain_rows(plan, model);
  const std::size_t q = plan.anchors.size();
  const std::size_t nf = plan.others.size();
  const double intra = 1.0 - model.orthogonality;
  const double slope = model.env.b_corr * std::numbers::ln10 / 10.0;

  std::vector<LevelSpec> levels = plan.levels;
  for (auto& l : levels) {
    l.tilt = 0;
    l.window_tilt_min = kWindowTiltMin;
    l.window_tilt_max = kWindowTiltMax;
  }

  double mass = 0.0;
  std::array<double, 3> sum1{};
  std::array<std::array<double, 3>, 3> sum2{};
  std::vector<double> mu(nf), nu(nf), var(nf);
  std::array<double, 3> t_anchor{};
  std::array<double, 3> e1{};
  std::array<std::vector<double>, 3> coef;
  for (auto& c : coef) c.resize(nf);
  // conditional value of every component given the anchors (detail only)
  std::array<std::array<double, TermDetail::kComponents>, 3> comp{};

  for_each_node(levels, quad, g, [&](std::span<const double> point, double weight) {
    double w = weight;
    for (std::size_t n = 0; n < nf; ++n) {
      const double a = bound_at(plan, n, point);
      const double a0 = g.cdf(a, 0);
      if (a0 == 0.0) return;
      w *= a0;
      mu[n] = g.cdf(a, 1) / a0;
      nu[n] = g.cdf(a, 2) / a0;
      var[n] = nu[n] - mu[n] * mu[n];
    }
    if (w == 0.0) return;
    for (std::size_t f = 0; f < q; ++f) t_anchor[f] = std::exp(slope * point[f]);

    for (std::size_t f = 0; f < q; ++f) {
      double s = intra;
      for (std::size_t a = 0; a < q; ++a) {
        if (a != f) s += rows[f][plan.anchors[a]] * t_anchor[a] / t_anchor[f];
      }
      for (std::size_t n = 0; n < nf; ++n) {
        coef[f][n] = rows[f][plan.others[n]] / t_anchor[f];
        s += coef[f][n] * mu[n];
      }
      e1[f] = s;
    }
    mass += w;
    for (std::size_t f = 0; f < q; ++f) {
      sum1[f] += w * e1[f];
      for (std::size_t h = f; h < q; ++h) {
        double s = e1[f] * e1[h];
        for (std::size_t n = 0; n < nf; ++n) s += coef[f][n] * coef[h][n] * var[n];
        sum2[f][h] += w * s;
      }
    }

    if (!out.detail) return;
    TermDetail& d = *out.detail;
    for (std::size_t f = 0; f < q; ++f) {
      comp[f].fill(0.0);
      comp[f][kIntraComponent] = intra;
      for (std::size_t a = 0; a < q; ++a) {
        if (a != f) comp[f][plan.anchors[a]] = rows[f][plan.anchors[a]] * t_anchor[a] / t_anchor[f];
      }
      for (std::size_t n = 0; n < nf; ++n) comp[f][plan.others[n]] = coef[f][n] * mu[n];
      for (std::size_t c = 0; c < TermDetail::kComponents; ++c) d.first[f][c] += w * comp[f][c];
    }
    for (std::size_t f = 0; f < q; ++f) {
      for (std::size_t h = 0; h < q; ++h) {
        for (std::size_t c = 0; c < TermDetail::kComponents; ++c) {
          if (comp[f][c] == 0.0) continue;
          double* row = &d.second[detail_index(f, c, h, 0)];
          for (std::size_t c2 = 0; c2 < TermDetail::kComponents; ++c2) {
            row[c2] += w * comp[f][c] * comp[h][c2];
          }
        }
        // same free cell on both sides: E[T^2] instead of E[T]^2
        for (std::size_t n = 0; n < nf; ++n) {
          const CellIndex c = plan.others[n];
          d.second[detail_index(f, c, h, c)] += w * coef[f][n] * coef[h][n] * var[n];
        }
      }
    }
  });

  out.probability = std::clamp(mass, 0.0, 1.0);
  if (!(mass > 0.0)) return out;
  for (std::size_t f = 0; f < q; ++f) {
    out.mean[f] = sum1[f] / mass;
    for (std::size_t h = f; h < q; ++h) {
      out.second[f][h] = out.second[h][f] = sum2[f][h] / mass;
    }
  }
  return out;
}

TermSet hho_terms(const RegionSpec& region, const LinkModel& model,
                  const QuadratureSpec& quad, bool detail) {
  if (region.mode.kind != ModeKind::kHho) throw InvalidParameterError("not an HHO region");
  return subset_terms(region, model, quad, detail);
}

TermSet sho2_terms(const RegionSpec& region, const LinkModel& model,
                   const QuadratureSpec& quad, bool detail) {
  if (region.mode.kind != ModeKind::kSho2) throw InvalidParameterError("not a SHO2 region");
  return subset_terms(region, model, quad, detail);
}

TermSet sho3_terms(const RegionSpec& region, const LinkModel& model,
                   const QuadratureSpec& quad, bool detail) {
  if (region.mode.kind != ModeKind::kSho3) throw InvalidParameterError("not a SHO3 region");
  return subset_terms(region, model, quad, detail);
}

double term_value(const RegionSpec& region, const LinkModel& model,
                  const QuadratureSpec& quad, const TermId& a) {
  const double p = subset_probability(region, model.env, quad);
  if (!(p > 0.0)) throw InvalidStateError("term of a zero-probability subset");
  return term_integral(region, model, quad, &a, nullptr) / p;
}

double term_value(const RegionSpec& region, const LinkModel& model,
                  const QuadratureSpec& quad, const TermId& a, const TermId& b) {
  const double p = subset_probability(region, model.env, quad);
  if (!(p > 0.0)) throw InvalidStateError("term of a zero-probability subset");
  return term_integral(region, model, quad, &a, &b) / p;
}

namespace {

SubsetMoments start_moments(const TermSet& terms, ModeKind kind) {
  if (terms.mode.kind != kind) {
    throw InvalidParameterError("term set " + terms.mode.label() + " has the wrong mode");
  }
  SubsetMoments s;
  s.mode = terms.mode;
  s.probability = terms.probability;
  s.terms = terms;
  s.defined = terms.defined();
  return s;
}

void finish_moments(SubsetMoments& s, double leading) {
  if (!std::isfinite(s.beta_mean) || !std::isfinite(s.beta_sq_mean)) {
    s.defined = false;
    return;
  }
  s.taylor_correction = leading > 0.0 ? std::abs(s.beta_mean - leading) / leading : 0.0;
  s.taylor_strained = s.taylor_correction > kTaylorWarn;
  s.negative_variance = s.beta_sq_mean < s.beta_mean * s.beta_mean;
}

}  // namespace

SubsetMoments hho_moments(const TermSet& terms, double ct) {
  SubsetMoments s = start_moments(terms, ModeKind::kHho);
  if (!s.defined) return s;
  s.beta_mean = ct * terms.mean[0];
  s.beta_sq_mean = ct * ct * terms.second[0][0];
  finish_moments(s, s.beta_mean);
  return s;
}

SubsetMoments sho2_moments(const TermSet& terms, double ct) {
  SubsetMoments s = start_moments(terms, ModeKind::kSho2);
  if (!s.defined) return s;
  const double x = terms.mean[0];
  const double y = terms.mean[1];
  const double sum = x + y;
  if (!(sum > 0.0)) throw InvalidStateError("X + Y must be positive");
  const double xx = terms.second[0][0];
  const double yy = terms.second[1][1];
  const double xy = terms.second[0][1];
  const double vx = xx - x * x;
  const double vy = yy - y * y;
  const double cxy = xy - x * y;

  const double b0 = x * y / sum;
  const double eb = b0 - (vx * y * y + vy * x * x - 2.0 * cxy * x * y) / (sum * sum * sum);
  const double s4 = sum * sum * sum * sum;
  const double eb2 =
      (std::pow(y, 4) * xx + std::pow(x, 4) * yy + 2.0 * x * x * y * y * xy) / s4 +
      2.0 * b0 * (eb - b0);
  s.beta_mean = ct * eb;
  s.beta_sq_mean = ct * ct * eb2;
  finish_moments(s, ct * b0);
  return s;
}

SubsetMoments sho3_moments(const TermSet& terms, double ct) {
  SubsetMoments s = start_moments(terms, ModeKind::kSho3);
  if (!s.defined) return s;
  const double x = terms.mean[0];
  const double y = terms.mean[1];
  const double z = terms.mean[2];
  const double d = x * y + x * z + y * z;
  if (!(d > 0.0)) throw InvalidStateError("XY + XZ + YZ must be positive");
  const double vx = terms.second[0][0] - x * x;
  const double vy = terms.second[1][1] - y * y;
  const double vz = terms.second[2][2] - z * z;
  const double cxy = terms.second[0][1] - x * y;
  const double cxz = terms.second[0][2] - x * z;
  const double cyz = terms.second[1][2] - y * z;

  const double b0 = x * y * z / d;
  const double d3 = d * d * d;
  const double d4 = d3 * d;
  const double diag = vx * (y + z) * std::pow(y * z, 2) + vy * (x + z) * std::pow(x * z, 2) +
                      vz * (x + y) * std::pow(x * y, 2);
  const double cross = cxy * x * y * std::pow(z, 3) + cxz * x * z * std::pow(y, 3) +
                       cyz * y * z * std::pow(x, 3);
  // diagonal factor 2 kept as printed
  const double eb = b0 - 2.0 * diag / d3 + 2.0 * cross / d3;
  const double prop = vx * std::pow(y * z, 4) + vy * std::pow(x * z, 4) +
                      vz * std::pow(x * y, 4) +
                      2.0 * cxy * std::pow(x * y, 2) * std::pow(z, 4) +
                      2.0 * cxz * std::pow(x * z, 2) * std::pow(y, 4) +
                      2.0 * cyz * std::pow(y * z, 2) * std::pow(x, 4);
  const double eb2 = b0 * b0 + prop / d4 + 2.0 * b0 * (eb - b0);
  s.beta_mean = ct * eb;
  s.beta_sq_mean = ct * ct * eb2;
  finish_moments(s, ct * b0);
  return s;
}

SubsetMoments subset_moments(const TermSet& terms, double ct) {
  switch (terms.mode.kind) {
    case ModeKind::kHho:
      return hho_moments(terms, ct);
    case ModeKind::kSho2:
      return sho2_moments(terms, ct);
    case ModeKind::kSho3:
      return sho3_moments(terms, ct);
    case ModeKind::kNotCamped:
      break;
  }
  throw InvalidParameterError("no moments for " + terms.mode.label());
}

MomentReport aggregate(std::vector<SubsetMoments> subsets) {
  auto key = [](const SubsetMoments& s) {
    return std::make_tuple(static_cast<int>(s.mode.kind), s.mode.k, s.mode.l);
  };
  std::stable_sort(subsets.begin(), subsets.end(),
                   [&](const auto& a, const auto& b) { return key(a) < key(b); });
  MomentReport r;
  double p = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double within = 0.0;
  for (const auto& s : subsets) {
    if (!s.defined) continue;
    p += s.probability;
    m1 += s.probability * s.beta_mean;
    m2 += s.probability * s.beta_sq_mean;
    within += s.probability * (s.beta_sq_mean - s.beta_mean * s.beta_mean);
    if (s.taylor_strained) ++r.strained_subsets;
    if (s.negative_variance) ++r.negative_variance_subsets;
  }
  if (!(p > 0.0)) throw NoCoverageError("the MS cannot camp on the serving cell here");
  r.camping_probability = p;
  r.beta_mean = m1 / p;
  r.beta_sq_mean = m2 / p;
  const double var = r.beta_sq_mean - r.beta_mean * r.beta_mean;
  r.variance_clamped = var < 0.0;
  r.beta_std = std::sqrt(std::max(0.0, var));
  r.pooled_within_std = std::sqrt(std::max(0.0, within / p));
  r.subsets = std::move(subsets);
  return r;
}

MomentReport compute_moments(const ScenarioParams& p, const MomentOptions& opt) {
  p.validate();
  opt.quad.validate();
  if (!(opt.partner_gain_floor >= 0.0)) {
    throw InvalidParameterError("partner_gain_floor must be >= 0");
  }
  const LinkModel model = LinkModel::from(p);

  auto keep = [&](CellIndex k) {
    if (opt.partner_gain_floor == 0.0) return true;
    return gain_ratio(model.view, kServingCell, k, p.env.alpha) >= opt.partner_gain_floor;
  };
  std::vector<ConnectionMode> modes;
  int pruned = 0;
  for (const auto& m : enumerate_modes(p.policy.as_size)) {
    bool ok = true;
    if (m.kind == ModeKind::kSho2) ok = keep(m.k);
    if (m.kind == ModeKind::kSho3) ok = keep(m.k) && keep(m.l);
    if (ok) {
      modes.push_back(m);
    } else {
      ++pruned;
    }
  }

  std::vector<SubsetMoments> results(modes.size());
  std::vector<std::exception_ptr> errors(modes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < modes.size(); i = next++) {
      try {
        const RegionSpec region = region_for(modes[i], p);
        results[i] = subset_moments(subset_terms(region, model, opt.quad, opt.term_detail),
                                    model.ct);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned n = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                 : opt.threads;
  n = static_cast<unsigned>(std::min<std::size_t>(n, modes.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  MomentReport r = aggregate(std::move(results));
  r.pruned_subsets = pruned;
  r.scenario = p;
  r.quad = opt.quad;
  return r;
}

}  // namespace cdmapower
