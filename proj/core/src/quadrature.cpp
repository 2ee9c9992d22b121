#include "cdmapower/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <utility>

#include "cdmapower/errors.hpp"

namespace cdmapower {
namespace {

constexpr double kLn10 = std::numbers::ln10;

// P_n(x) and P_{n-1}(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

GaussLegendreRule compute_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, pm] = legendre(n, x);
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pm] = legendre(n, x);
    dp = n * (x * pn - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw InvalidParameterError("rel_tol must be positive");
  if (nodes_per_dim < 8) throw InvalidParameterError("nodes_per_dim must be >= 8");
  if (!(truncation_mult >= 5.0)) {
    throw InvalidParameterError("truncation_mult must be >= 5");
  }
}

TiltedGaussian::TiltedGaussian(double sigma, double b_corr)
    : sigma_(sigma),
      b_(b_corr),
      kappa_(sigma * b_corr * kLn10 / 10.0),
      slope_(b_corr * kLn10 / 10.0),
      pdf_norm_(1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma)) {
  if (!(sigma > 0.0)) throw InvalidParameterError("sigma must be positive");
}

double TiltedGaussian::mass(Tilt y) const {
  return std::exp(0.5 * y * y * kappa_ * kappa_);
}

double TiltedGaussian::cdf(double x, Tilt y) const {
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  if (x == std::numeric_limits<double>::infinity()) return mass(y);
  const double z = (x / sigma_ - y * kappa_) / std::numbers::sqrt2;
  return mass(y) * 0.5 * std::erfc(-z);
}

double TiltedGaussian::pdf(double t) const {
  const double u = t / sigma_;
  return pdf_norm_ * std::exp(-0.5 * u * u);
}

double a_fn(double x, Tilt y, double sigma, double b_corr) {
  return TiltedGaussian(sigma, b_corr).cdf(x, y);
}

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw InvalidParameterError("Gauss-Legendre order must be >= 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(compute_rule(n));
  return *slot;
}

namespace detail {

Window level_window(const LevelSpec& level, std::span<const double> outer,
                    const QuadratureSpec& spec, const TiltedGaussian& g) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto eval = [&](const AffineLimit& lim) {
    if (lim.level < 0) return lim.offset;
    return outer[static_cast<std::size_t>(lim.level)] + lim.offset;
  };
  double lo = -kInf;
  double hi = kInf;
  for (const auto& l : level.lower) lo = std::max(lo, eval(l));
  for (const auto& u : level.upper) hi = std::min(hi, eval(u));

  const double reach = spec.truncation_mult * g.sigma();
  const double trunc_lo = g.mean(std::min(level.window_tilt_min, level.tilt)) - reach;
  const double trunc_hi = g.mean(std::max(level.window_tilt_max, level.tilt)) + reach;
  const double full = trunc_hi - trunc_lo;
  lo = std::max(lo, trunc_lo);
  hi = std::min(hi, trunc_hi);

  Window w;
  w.lo = lo;
  w.hi = hi;
  if (!(hi > lo)) return w;
  const double share = (hi - lo) / full;
  const int scaled = static_cast<int>(std::ceil(spec.nodes_per_dim * share - 1e-9));
  w.nodes = std::clamp(scaled, spec.min_nodes(), spec.nodes_per_dim);
  return w;
}

}  // namespace detail

double integrate_nested(std::span<const LevelSpec> levels, const Kernel& kernel,
                        const QuadratureSpec& spec, double sigma, double b_corr) {
  spec.validate();
  if (levels.empty() || levels.size() > kMaxLevels) {
    throw InvalidParameterError("integrate_nested supports 1 to 3 levels");
  }
  const TiltedGaussian g(sigma, b_corr);
  double sum = 0.0;
  for_each_node(levels, spec, g, [&](std::span<const double> point, double weight) {
    const double v = kernel(point);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "non-finite kernel value " << v << " at (";
      for (std::size_t i = 0; i < point.size(); ++i) msg << (i ? ", " : "") << point[i];
      msg << ")";
      throw NumericalDomainError(msg.str());
    }
    sum += weight * v;
  });
  return sum;
}

}  // namespace cdmapower
