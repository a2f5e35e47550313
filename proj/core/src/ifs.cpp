#include "safdim/ifs.hpp"

#include "safdim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace safdim {

Number Number::from_text(std::string_view text) {
    Number n;
    n.exact = parse_rational(text);
    if (text.find('/') != std::string_view::npos) {
        n.value = rational_to_double(*n.exact);
    } else {
        // strtod gives the correctly rounded double for the decimal literal
        n.value = std::strtod(std::string(text).c_str(), nullptr);
    }
    return n;
}

Number Number::from_rational(const Rational& r) {
    Number n;
    n.exact = r;
    n.value = rational_to_double(r);
    return n;
}

Number Number::from_irrational(double approx) {
    Number n;
    n.value = approx;
    return n;
}

std::string Number::text() const {
    if (exact) return rational_decimal_string(*exact);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

bool AffineIFS::is_diag_homogeneous() const {
    for (const auto& m : maps) {
        if (m.c.value != maps[0].c.value) return false;
        if (m.b.value != maps[0].b.value) return false;
    }
    return true;
}

double AffineIFS::homogeneous_c() const {
    if (!is_diag_homogeneous())
        throw std::logic_error("homogeneous_c on a non-homogeneous system");
    return maps[0].c.value;
}

double AffineIFS::homogeneous_b() const {
    if (!is_diag_homogeneous())
        throw std::logic_error("homogeneous_b on a non-homogeneous system");
    return maps[0].b.value;
}

Axis AffineIFS::dominant_axis() const {
    double c = homogeneous_c(), b = homogeneous_b();
    if (c > b) return Axis::x;
    if (b > c) return Axis::y;
    return Axis::tie;
}

std::vector<std::string> AffineIFS::validate() const {
    std::vector<std::string> bad;
    if (maps.empty()) {
        bad.push_back("system has no maps (N >= 1 required)");
        return bad;
    }
    char buf[160];
    for (size_t i = 0; i < maps.size(); ++i) {
        const auto& m = maps[i];
        auto flag = [&](const char* fmt, double x) {
            std::snprintf(buf, sizeof buf, fmt, i + 1, x);
            bad.emplace_back(buf);
        };
        if (!(m.c.value > 0.0 && m.c.value < 1.0)) flag("map %zu: c out of (0,1): %g", m.c.value);
        if (!(m.b.value > 0.0 && m.b.value < 1.0)) flag("map %zu: b out of (0,1): %g", m.b.value);
        if (!std::isfinite(m.d.value)) flag("map %zu: d not finite: %g", m.d.value);
        if (!std::isfinite(m.u.value)) flag("map %zu: u not finite: %g", m.u.value);
        if (!std::isfinite(m.v.value)) flag("map %zu: v not finite: %g", m.v.value);
        if (!(m.c.value > 0.0 && m.c.value < 1.0) || !(m.b.value > 0.0 && m.b.value < 1.0))
            continue;
        // The image of a convex set under an affine map is corner-determined,
        // so containment in the unit square is decided on the four corners.
        double c = m.c.value, b = m.b.value, d = m.d.value, u = m.u.value, v = m.v.value;
        double xlo = u, xhi = u + c;
        double ylo = v + std::min(0.0, d);
        double yhi = v + b + std::max(0.0, d);
        if (xlo < 0.0 || xhi > 1.0) {
            std::snprintf(buf, sizeof buf,
                          "map %zu: x-image [%g, %g] leaves [0,1]", i + 1, xlo, xhi);
            bad.emplace_back(buf);
        }
        if (ylo < 0.0 || yhi > 1.0) {
            std::snprintf(buf, sizeof buf,
                          "map %zu: y-image [%g, %g] leaves [0,1]", i + 1, ylo, yhi);
            bad.emplace_back(buf);
        }
    }
    return bad;
}

void AffineIFS::require_valid() const {
    auto bad = validate();
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

AffineComposite compose(const AffineComposite& a, const AffineComposite& s) {
    AffineComposite r;
    r.c = a.c * s.c;
    r.b = a.b * s.b;
    r.d = a.d * s.c + a.b * s.d;
    r.u = a.u + a.c * s.u;
    r.v = a.v + a.d * s.u + a.b * s.v;
    return r;
}

AffineComposite to_composite(const TriangularMap& m) {
    AffineComposite r;
    r.c = m.c.value;
    r.b = m.b.value;
    r.d = m.d.value;
    r.u = m.u.value;
    r.v = m.v.value;
    return r;
}

void require_word(const AffineIFS& system, const Word& word) {
    for (int s : word)
        if (s < 1 || s > system.size())
            throw std::out_of_range("word symbol " + std::to_string(s) +
                                    " out of range 1.." + std::to_string(system.size()));
}

AffineComposite compose(const AffineIFS& system, const Word& word) {
    require_word(system, word);
    AffineComposite r;
    for (int s : word) r = compose(r, to_composite(system.maps[s - 1]));
    return r;
}

std::array<std::array<double, 2>, 4> CylinderParallelogram::corners() const {
    return {{{x0, y0},
             {x0 + width, y0 + shear},
             {x0, y0 + height},
             {x0 + width, y0 + shear + height}}};
}

CylinderParallelogram cylinder(const AffineIFS& system, const Word& word) {
    if (word.empty()) throw std::invalid_argument("cylinder of the empty word");
    AffineComposite m = compose(system, word);
    CylinderParallelogram p;
    p.word = word;
    p.x0 = m.u;
    p.width = m.c;
    p.y0 = m.v;
    p.shear = m.d;
    p.height = m.b;
    return p;
}

}  // namespace safdim
