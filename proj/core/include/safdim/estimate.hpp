#pragma once

#include "safdim/ifs.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace safdim {

struct Point {
    double x = 0.0, y = 0.0;
};

// Samples of the uniform-weight self-affine measure. Regeneration with the
// same (system, n_points, seed, burn_in) is bit-identical at any worker
// count: generation is chunked at a fixed size and chunk seeds are derived
// by hashing the master seed with the chunk index.
struct PointCloud {
    std::vector<Point> points;
    std::uint64_t seed = 0;
    int burn_in = 0;
    std::string generator_tag;
};

// Random iteration x_{k+1} = S_{i_k}(x_k) from the origin with i.i.d. uniform
// symbols; the first burn_in iterates are discarded per chunk.
PointCloud chaos_game(const AffineIFS& system, std::size_t n_points, std::uint64_t seed,
                      int burn_in = 64);

enum class EstimatorMethod { box, correlation, slice };

struct DimensionReport {
    double estimate = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
    std::vector<double> scales;      // strictly decreasing
    std::vector<double> statistics;  // N(r), sum of squared cell masses, ...
    EstimatorMethod method = EstimatorMethod::box;
};

// Scales 2^-k for k = k_min..k_max (k_min < k_max), largest first.
std::vector<double> dyadic_scales(int k_min, int k_max);

// Occupied-cell counts over half-open dyadic meshes; the estimate is the
// least-squares slope of log N(r) against log(1/r). Needs >= 4 scales of the
// form 2^-k and a non-empty cloud.
DimensionReport box_dimension(const PointCloud& cloud, std::span<const double> scales);

// Mesh-moment sums: the statistic per scale is sum over cells of (cell
// mass)^2 and the estimate is the slope of its log against log r, i.e. the
// q = 2 correlation dimension of the empirical measure.
DimensionReport correlation_dimension(const PointCloud& cloud, std::span<const double> scales);

// One-dimensional box counting of the y-coordinates inside the vertical
// strip of the given width centred at the median x. The strip must catch at
// least 1000 points.
DimensionReport slice_dimension(const PointCloud& cloud, double strip_width,
                                std::span<const double> scales);

struct DensityDiagnostics {
    double q = 0.0;
    int bins = 0;
    double c_q_estimate = 0.0;          // integral of the histogram density^q
    double worst_interval_ratio = 0.0;  // max mass(I) / (C_q^(1/q) |I|^(1-1/q))
};

// Histogram diagnostics for the x-marginal: estimates the L^q norm of its
// density and stresses the induced Holder mass bound on 1000 deterministic
// random subintervals. Evidence, not proof.
DensityDiagnostics lq_density_diagnostics(const PointCloud& cloud, double q, int bins);

// Binary export: 8-byte magic "SAFCLD01", then little-endian float64 x,y
// pairs. CSV export: "x,y" header plus one row per point.
void write_cloud_binary(const PointCloud& cloud, std::ostream& out);
PointCloud read_cloud_binary(std::istream& in);
void write_cloud_csv(const PointCloud& cloud, std::ostream& out);

}  // namespace safdim
