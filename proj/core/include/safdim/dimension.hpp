#pragma once

#include "safdim/ifs.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace safdim {

// Root of sum_i r_i^s = 1 for ratios in (0,1), by bisection on a strictly
// decreasing map. |residual| <= 1e-12 at the returned exponent.
double similarity_dimension(std::span<const double> ratios);

struct AffinityResult {
    double s_x = 0.0, s_y = 0.0;          // similarity dimensions of the axis projections
    double s_hat_x = 0.0, s_hat_y = 0.0;  // clamped at 1
    double d_x = 0.0, d_y = 0.0;          // roots of the two mixed Moran equations
    double dim_aff = 0.0;                 // max(d_x, d_y)
    Axis dominant = Axis::tie;
};

// Falconer affinity dimension of a triangular system: d_x solves
// sum c_i^sx^ b_i^(d-sx^) = 1, d_y the mirror equation.
AffinityResult affinity_dimension(const AffineIFS& system);

// Closed form for diagonally homogeneous x-dominant systems:
//   log N / -log c          when Nc < 1
//   1 + log(Nc) / -log b    when Nc > 1
// (continuous at Nc = 1). Throws std::domain_error when c <= b.
double homogeneous_affinity(int n_maps, double c, double b);

struct LyapunovInputs {
    std::vector<double> p;
    double entropy = 0.0;  // -sum p_i log p_i
    double chi_h = 0.0;    // -sum p_i log c_i
    double chi_v = 0.0;    // -sum p_i log b_i

    static LyapunovInputs from(const AffineIFS& system, std::span<const double> p);
};

// Entropy/exponent upper bound for the self-affine measure with weights p.
// Three cases split at chi_h and chi_h + chi_v; requires chi_h <= chi_v
// (x dominates in the Lyapunov sense), else std::domain_error. Reported
// unclamped: the third case can exceed the ambient dimension.
double lyapunov_dimension(const AffineIFS& system, std::span<const double> p);
double lyapunov_dimension(const LyapunovInputs& in);

enum class TheoremId { trivial_case, theorem_a, theorem_b, theorem_c, none };

std::string theorem_name(TheoremId id);

struct AssumptionCheck {
    std::string name;    // e.g. "A1: c > 1/N"
    bool passed = false;
    std::string detail;  // the instantiated inequality
};

struct TheoremVerdict {
    TheoremId theorem = TheoremId::none;
    std::optional<double> value;  // emitted only when every checkable assumption passes
    std::vector<AssumptionCheck> checked;
    std::vector<std::string> unverifiable;  // e.g. "A3 (L^q density of the x-marginal)"
};

// Picks the dimension theorem whose numerically checkable assumptions hold:
//   trivial case:  sum c_i < 1 with x dominating       -> s_x
//   theorem A:     homogeneous, c > 1/N, b < 1/N       -> 1 + log(Nc)/-log b
//   theorem B:     homogeneous, c > 1/N, b < c         -> min(2, same)
//   theorem C:     homogeneous, c < 1/N, b > c, C5     -> min(logN/-logb, 1+log(Nb)/-logc)
// Assumptions that cannot be decided numerically (density and separation
// hypotheses) are listed as unverifiable. A verdict with theorem == none is
// an answer, not an error.
TheoremVerdict theorem_dimension(const AffineIFS& system);

struct PhaseProfile {
    double c = 0.0;
    double breakpoint = 0.0;  // 1/(3c); may exceed c/2, in which case the
                              // profile never reaches 2 on its domain
    std::vector<std::pair<double, double>> points;  // (b, dim)
};

// dim(b) = 1 + log(3c)/-log b for b <= 1/(3c) and 2 beyond, for the
// three-map homogeneous family with c in (1/sqrt(3), 1). Every b must lie in
// (0, c/2]. Throws std::domain_error outside those ranges.
PhaseProfile phase_transition_profile(double c, std::span<const double> b_grid);

}  // namespace safdim
