#include "cdmapower/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "cdmapower/errors.hpp"

namespace cdmapower {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Point polar(double radius, double angle_deg) {
  return {radius * std::cos(angle_deg * kDeg), radius * std::sin(angle_deg * kDeg)};
}

void check_index(CellIndex i) {
  if (i >= kNumCells) {
    throw InvalidParameterError("cell index " + std::to_string(i) + " out of range");
  }
}

}  // namespace

NetworkGeometry NetworkGeometry::build(double cell_radius) {
  if (!(cell_radius > 0.0) || !std::isfinite(cell_radius)) {
    throw InvalidParameterError("cell_radius must be positive and finite");
  }
  const double s3 = std::numbers::sqrt3;
  std::array<Point, kNumCells> sites{};
  sites[0] = {0.0, 0.0};
  for (int k = 0; k < 6; ++k) {
    sites[1 + k] = polar(s3 * cell_radius, 60.0 * k);
  }
  for (int k = 0; k < 6; ++k) {
    sites[7 + k] = polar(3.0 * cell_radius, 30.0 + 60.0 * k);
  }
  for (int k = 0; k < 6; ++k) {
    sites[13 + k] = polar(2.0 * s3 * cell_radius, 60.0 * k);
  }
  return NetworkGeometry(cell_radius, sites);
}

NetworkGeometry build_layout(double cell_radius) {
  return NetworkGeometry::build(cell_radius);
}

MsView ms_view(const NetworkGeometry& geom, double r1, double theta_deg) {
  if (!(r1 >= 0.0) || !std::isfinite(r1)) {
    throw InvalidParameterError("r1 must be non-negative and finite");
  }
  MsView view;
  view.r1 = r1;
  view.theta_deg = theta_deg;
  const Point ms = polar(r1, theta_deg);
  for (CellIndex i = 0; i < kNumCells; ++i) {
    const Point& s = geom.site(i);
    view.r[i] = std::hypot(ms.x - s.x, ms.y - s.y);
  }
  // The literal position is (r1, theta) relative to site 0, which is at
  // the origin; keep r[0] exact rather than a round-tripped hypot.
  view.r[0] = r1;
  return view;
}

double gain_ratio(const MsView& view, CellIndex j, CellIndex i, double alpha) {
  check_index(i);
  check_index(j);
  const double ri = view.r[i];
  const double rj = view.r[j];
  if (ri == 0.0) {
    throw DegeneratePositionError("MS co-located with base station " +
                                  std::to_string(i + 1));
  }
  if (rj == 0.0) return 0.0;
  if (i == j) return 1.0;
  return std::pow(rj / ri, alpha);
}

double db_offset(const MsView& view, CellIndex j, CellIndex i, double alpha,
                 double b_corr) {
  if (!(b_corr > 0.0)) throw InvalidParameterError("b_corr must be positive");
  const double c = gain_ratio(view, j, i, alpha);
  if (c == 0.0) return -std::numeric_limits<double>::infinity();
  if (i == j) return 0.0;
  // Work in log-distance space so the chain identity holds to rounding.
  return 10.0 * alpha * (std::log10(view.r[j]) - std::log10(view.r[i])) / b_corr;
}

double fold_angle_deg(double theta_deg) {
  double t = std::fmod(theta_deg, 60.0);
  if (t < 0.0) t += 60.0;
  return t > 30.0 ? 60.0 - t : t;
}

double r_max(double theta_deg, double cell_radius) {
  const double t = fold_angle_deg(theta_deg);
  return std::numbers::sqrt3 * cell_radius / (2.0 * std::cos(t * kDeg));
}

}  // namespace cdmapower
