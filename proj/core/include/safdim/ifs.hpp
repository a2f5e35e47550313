#pragma once

#include "safdim/rational.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace safdim {

// A real parameter kept in two channels: the binary double used by the
// numeric paths, and the exact rational when the intended value has one
// (every decimal or fraction literal does). Values tagged irrational carry
// no exact channel.
struct Number {
    double value = 0.0;
    std::optional<Rational> exact;

    static Number from_text(std::string_view text);
    static Number from_rational(const Rational& r);
    static Number from_irrational(double approx);

    // Exact decimal (or p/q) when the exact channel is present; otherwise a
    // shortest round-trip double literal.
    std::string text() const;
};

// Planar affine map (x,y) -> (c x + u, d x + b y + v); lower-triangular
// linear part with positive diagonal.
struct TriangularMap {
    Number c, b, d, u, v;
};

enum class Axis { x, y, tie };

struct AffineIFS {
    std::vector<TriangularMap> maps;
    std::string label;

    int size() const { return static_cast<int>(maps.size()); }

    // All c_i equal and all b_i equal.
    bool is_diag_homogeneous() const;
    // Requires diagonal homogeneity.
    double homogeneous_c() const;
    double homogeneous_b() const;
    // c > b means x dominates; only meaningful for homogeneous systems.
    Axis dominant_axis() const;

    // Every violated invariant, empty when valid.
    std::vector<std::string> validate() const;
    // Throws ValidationError listing all violations.
    void require_valid() const;
};

// Symbols are 1-based: valid entries are 1..N.
using Word = std::vector<int>;

// Composition of triangular affine maps; identity when default-constructed.
struct AffineComposite {
    double c = 1.0, b = 1.0, d = 0.0, u = 0.0, v = 0.0;

    std::array<double, 2> apply(double x, double y) const {
        return {c * x + u, d * x + b * y + v};
    }
};

// first o second (apply `second`, then `first`). The lower-left entry obeys
// d = d1*c2 + b1*d2.
AffineComposite compose(const AffineComposite& first, const AffineComposite& second);
AffineComposite to_composite(const TriangularMap& m);
// S_{w1} o S_{w2} o ... o S_{wn}; empty word gives the identity.
AffineComposite compose(const AffineIFS& system, const Word& word);

// Geometry of the image of the unit square under a word: a parallelogram
// with two vertical sides of length `height`.
struct CylinderParallelogram {
    Word word;
    double x0 = 0.0;      // left edge
    double width = 0.0;   // product of the c's
    double y0 = 0.0;      // y of the image of the origin
    double shear = 0.0;   // lower-left entry of the composed matrix
    double height = 0.0;  // product of the b's

    // (x0,y0), (x0+w, y0+shear), (x0, y0+h), (x0+w, y0+shear+h)
    std::array<std::array<double, 2>, 4> corners() const;
    double x_left() const { return x0; }
    double x_right() const { return x0 + width; }
    // Lower boundary as a function of x in [x0, x0+width].
    double lower_at(double x) const { return y0 + shear * (x - x0) / width; }
};

CylinderParallelogram cylinder(const AffineIFS& system, const Word& word);

void require_word(const AffineIFS& system, const Word& word);

}  // namespace safdim
