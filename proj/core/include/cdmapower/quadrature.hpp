#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cdmapower {

// Integration controls. nodes_per_dim is the Gauss-Legendre order used on a
// level whose window spans the full truncation range; narrower windows get
// proportionally fewer nodes, never less than min_nodes().
struct QuadratureSpec {
  double rel_tol = 1e-8;
  int nodes_per_dim = 96;
  double truncation_mult = 8.0;

  void validate() const;
  int min_nodes() const { return nodes_per_dim / 6 > 8 ? nodes_per_dim / 6 : 8; }
};

// Tilt order y: the integrand carries a factor 10^{y b xi / 10}.
using Tilt = int;

// Gaussian N(0, sigma^2) tilted by 10^{y b t / 10}. Completing the square
// gives mass exp(y^2 k^2 / 2) and mean y k sigma with k = sigma b ln10 / 10.
class TiltedGaussian {
 public:
  TiltedGaussian(double sigma, double b_corr);

  double sigma() const { return sigma_; }
  double b_corr() const { return b_; }
  // A(x, y): integral over (-inf, x] of 10^{y b t/10} N(t; 0, sigma^2) dt.
  double cdf(double x, Tilt y) const;
  double mass(Tilt y) const;
  double mean(Tilt y) const { return y * kappa_ * sigma_; }
  double pdf(double t) const;
  // 10^{y b t / 10}
  double tilt_factor(double t, double y) const { return std::exp(y * slope_ * t); }

 private:
  double sigma_;
  double b_;
  double kappa_;  // sigma b ln10 / 10
  double slope_;  // b ln10 / 10
  double pdf_norm_;
};

// A(x, y) of the closed-form tilted Gaussian CDF. x may be +-infinity.
double a_fn(double x, Tilt y, double sigma, double b_corr);

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// Cached, thread-safe; the returned reference stays valid for the program.
const GaussLegendreRule& gauss_legendre(int n);

// Integration limit affine in an outer level variable: var[level] + offset,
// or a constant when level < 0. offset may be +-infinity.
struct AffineLimit {
  int level = -1;
  double offset = 0.0;

  static AffineLimit constant(double v) { return {-1, v}; }
  static AffineLimit of(int level, double offset) { return {level, offset}; }
};

// One nesting level. The effective window is [max(lower), min(upper)]
// (empty lists mean -inf / +inf), clipped to the truncation range around
// the tilt-shifted means for tilts in [window_tilt_min, window_tilt_max].
struct LevelSpec {
  std::vector<AffineLimit> lower;
  std::vector<AffineLimit> upper;
  Tilt tilt = 0;
  Tilt window_tilt_min = 0;
  Tilt window_tilt_max = 0;

  static LevelSpec full(Tilt tilt = 0) {
    LevelSpec s;
    s.tilt = s.window_tilt_min = s.window_tilt_max = tilt;
    return s;
  }
};

inline constexpr std::size_t kMaxLevels = 3;

namespace detail {

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  int nodes = 0;
  bool empty() const { return !(hi > lo) || nodes == 0; }
};

Window level_window(const LevelSpec& level, std::span<const double> outer,
                    const QuadratureSpec& spec, const TiltedGaussian& g);

template <class Visitor>
void visit_level(std::span<const LevelSpec> levels, std::size_t depth,
                 std::array<double, kMaxLevels>& point, double weight,
                 const QuadratureSpec& spec, const TiltedGaussian& g, Visitor& visit) {
  const LevelSpec& level = levels[depth];
  const Window w = level_window(level, std::span<const double>(point.data(), depth), spec, g);
  if (w.empty()) return;
  const GaussLegendreRule& rule = gauss_legendre(w.nodes);
  const double half = 0.5 * (w.hi - w.lo);
  const double mid = 0.5 * (w.hi + w.lo);
  for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
    const double x = mid + half * rule.nodes[n];
    double wx = weight * half * rule.weights[n] * g.pdf(x);
    if (level.tilt != 0) wx *= g.tilt_factor(x, level.tilt);
    if (wx == 0.0) continue;
    point[depth] = x;
    if (depth + 1 == levels.size()) {
      visit(std::span<const double>(point.data(), levels.size()), wx);
    } else {
      visit_level(levels, depth + 1, point, wx, spec, g, visit);
    }
  }
}

}  // namespace detail

// Calls visit(point, weight) at every tensor-product node; summing
// weight * kernel(point) approximates the tilted Gaussian integral.
// Deterministic for a fixed spec.
template <class Visitor>
void for_each_node(std::span<const LevelSpec> levels, const QuadratureSpec& spec,
                   const TiltedGaussian& g, Visitor&& visit) {
  if (levels.empty() || levels.size() > kMaxLevels) return;
  std::array<double, kMaxLevels> point{};
  detail::visit_level(levels, 0, point, 1.0, spec, g, visit);
}

using Kernel = std::function<double(std::span<const double>)>;

// Integral of prod_level [10^{y b xi/10} f(xi)] * kernel(xi...) over the
// nested limits. Throws NumericalDomainError on a non-finite kernel value.
double integrate_nested(std::span<const LevelSpec> levels, const Kernel& kernel,
                        const QuadratureSpec& spec, double sigma, double b_corr);

}  // namespace cdmapower
