#pragma once

#include <span>
#include <string>
#include <vector>

#include "maxharm/grid.hpp"

namespace maxharm {

/// Finite family of axis-parallel cubes on the periodic grid: dyadic side
/// lengths from one cell up to half the box, anchors on a per-scale stride
/// (every cell for small sides, side/stride_divisor above). Wraparound cubes
/// are allowed; aligned (dyadic) families restrict anchors to multiples of
/// the side.
struct CubeFamily {
  struct Scale {
    int side_cells;
    int stride_cells;
  };

  GridSpec spec;
  std::vector<Scale> scales;
  bool dyadic_only = false;

  static CubeFamily standard(const GridSpec& spec, bool dyadic_only = false,
                             int dense_max_cells = 32, int stride_divisor = 8);

  /// Anchor lattice points per axis for scale s.
  int anchors_per_axis(size_t s) const { return spec.N / scales[s].stride_cells; }
  std::int64_t anchor_count(size_t s) const {
    std::int64_t c = 1;
    for (int a = 0; a < spec.n; ++a) c *= anchors_per_axis(s);
    return c;
  }
  void validate() const;
};

struct MaximalField {
  GridSpec spec;
  Eigen::ArrayXd values;
  std::string provenance;
};

/// M_r f: largest (avg_Q |f|^r)^{1/r} over family cubes containing each point.
MaximalField hl_maximal(const GridFunction& f, double r, const CubeFamily& fam);

/// Multi-sublinear maximal function: largest prod_j (avg_Q |f_j|^r)^{1/r}
/// over a single common cube containing the point.
MaximalField multisublinear_maximal(std::span<const GridFunction> fs, double r,
                                    const CubeFamily& fam);

/// Dyadic maximal operator (r = 1, aligned cubes only).
MaximalField dyadic_maximal(const GridFunction& f, const CubeFamily& fam);

struct BestConstant {
  cplx c;
  double value;  // (avg |f - c|^t)^{1/t}
};

/// Approximate minimizer over complex c of (avg |f-c|^t)^{1/t}: candidate
/// seeding (0, mean, componentwise median, 16-point subsample) refined by 40
/// steps of coordinate descent with shrinking step. The result is an upper
/// bound on the infimum (and never exceeds the c = 0 objective).
BestConstant best_constant(std::span<const cplx> samples, double t);

/// Homogeneous sharp maximal function (oscillation exponent 1).
MaximalField sharp_maximal_homogeneous(const GridFunction& f, const CubeFamily& fam);

/// Inhomogeneous L^r sharp maximal function: plain averages on cubes of side
/// >= 1, best-constant oscillation on cubes of side < 1; the field value is
/// the larger of the two parts.
MaximalField sharp_maximal_inhomogeneous(const GridFunction& f, double r, const CubeFamily& fam);

/// max over all family cubes of the best-constant oscillation with power t.
double bmo_seminorm(const GridFunction& f, const CubeFamily& fam, double t);

namespace detail {

/// Per-scale cube values, indexed by flattened anchor lattice index.
using CubeTables = std::vector<Eigen::ArrayXd>;

/// Window sums of a nonnegative integrand over every family cube.
CubeTables cube_sums(const CubeFamily& fam, const Eigen::ArrayXd& integrand);

/// Pointwise max over all cubes containing each grid point.
Eigen::ArrayXd max_field(const CubeFamily& fam, const CubeTables& cube_values);

/// Gather the cube samples (wraparound block) into out.
void gather_cube(const Eigen::ArrayXcd& v, const GridSpec& spec, int side_cells,
                 const int* anchor, std::vector<cplx>& out);

}  // namespace detail

}  // namespace maxharm
