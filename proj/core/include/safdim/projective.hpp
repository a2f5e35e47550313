#pragma once

#include "safdim/ifs.hpp"

#include <optional>
#include <vector>

namespace safdim {

enum class ScalarKind {
    horizontal_projection,  // x -> c_i x + u_i
    vertical_projection,    // y -> b_i y + v_i
    furstenberg_forward,    // z -> (b_i/c_i) z + d_i/c_i, needs c_i > b_i
    furstenberg_backward,   // z -> (c/b) z - d_i/b, homogeneous, needs c < b
};

struct ScalarMap {
    double ratio = 0.0;
    double offset = 0.0;
    std::optional<Rational> ratio_exact;
    std::optional<Rational> offset_exact;

    double apply(double z) const { return ratio * z + offset; }
    double fixed_point() const { return offset / (1.0 - ratio); }
};

// One-dimensional affine IFS; all ratios strictly contracting.
struct ScalarIFS {
    std::vector<ScalarMap> maps;
    ScalarKind kind = ScalarKind::horizontal_projection;

    int size() const { return static_cast<int>(maps.size()); }
    bool all_exact() const;
};

// Coefficients follow the kind's formulas above. Throws std::domain_error on
// a domination mismatch (forward needs c_i > b_i for every i, backward needs
// homogeneous c < b).
ScalarIFS derive_scalar_ifs(const AffineIFS& system, ScalarKind kind);

struct Interval {
    double lo = 0.0, hi = 0.0;
    double diameter() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
};

struct RationalInterval {
    Rational lo, hi;
};

// Convex hull of the fixed points offset/(1-ratio): the minimal interval
// mapped into itself by every map (ratios must be positive). A degenerate
// interval is allowed.
Interval invariant_interval(const ScalarIFS& s);

// Exact endpoints when every coefficient carries its rational channel.
std::optional<RationalInterval> invariant_interval_exact(const ScalarIFS& s);

struct Projection {
    double value = 0.0;
    double error_bound = 0.0;  // bounds |limit point - value| for any continuation
};

// Finite truncation of the natural projection: the word's maps applied (last
// symbol first) to the invariant interval's midpoint. Applying map w1 to the
// projection of the shifted word reproduces this value bit for bit.
Projection project_prefix(const ScalarIFS& s, const Word& word);

}  // namespace safdim
