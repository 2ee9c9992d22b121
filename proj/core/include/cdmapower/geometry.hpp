#pragma once

#include <array>
#include <cstddef>

namespace cdmapower {

// Cells are addressed 0-based: cell 0 is the serving (center) cell, cells
// 1..6 form the first tier and 7..18 the second tier.
using CellIndex = std::size_t;
inline constexpr std::size_t kNumCells = 19;
inline constexpr CellIndex kServingCell = 0;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// 19-site hexagonal layout: the center cell plus two tiers of neighbours.
//
// Orientation: first-tier sites sit at polar angles 0, 60, ..., 300 degrees
// at distance sqrt(3)R, so cell 0 shows a flat edge towards 0 degrees and a
// corner towards 30 degrees. Second-tier sites are ordered by distance then
// angle: the six at 3R (angles 30 + 60k) followed by the six at 2*sqrt(3)R
// (angles 60k).
class NetworkGeometry {
 public:
  // Throws InvalidParameterError unless cell_radius > 0.
  static NetworkGeometry build(double cell_radius);

  double cell_radius() const { return cell_radius_; }
  const std::array<Point, kNumCells>& sites() const { return sites_; }
  const Point& site(CellIndex i) const { return sites_.at(i); }

 private:
  NetworkGeometry(double cell_radius, const std::array<Point, kNumCells>& sites)
      : cell_radius_(cell_radius), sites_(sites) {}

  double cell_radius_;
  std::array<Point, kNumCells> sites_;
};

// Distances from one MS position to every site.
struct MsView {
  std::array<double, kNumCells> r{};
  double r1 = 0.0;
  double theta_deg = 0.0;

  double distance(CellIndex i) const { return r.at(i); }
};

NetworkGeometry build_layout(double cell_radius);

// Distances are evaluated at the literal position (r1 cos t, r1 sin t).
MsView ms_view(const NetworkGeometry& geom, double r1, double theta_deg);

// (r_j / r_i)^alpha. Returns exactly 0 when r_j == 0.
// Throws DegeneratePositionError when r_i == 0.
double gain_ratio(const MsView& view, CellIndex j, CellIndex i, double alpha);

// 10 log10(C_{j,i}) / b, the dB offset expressed in the shadowing domain.
// Returns -infinity when C_{j,i} == 0. Additive: R_{1,k} + R_{k,l} = R_{1,l}.
double db_offset(const MsView& view, CellIndex j, CellIndex i, double alpha,
                 double b_corr);

// Fold an arbitrary angle into [0, 30] degrees using the 12-fold symmetry
// of the hexagon (60 degree rotations plus reflections).
double fold_angle_deg(double theta_deg);

// Distance from the cell center to its border along theta:
// sqrt(3) R / (2 cos theta') with theta' the folded angle.
double r_max(double theta_deg, double cell_radius);

}  // namespace cdmapower
