#include "safdim/projective.hpp"

#include <cmath>
#include <stdexcept>

namespace safdim {

bool ScalarIFS::all_exact() const {
    for (const auto& m : maps)
        if (!m.ratio_exact || !m.offset_exact) return false;
    return true;
}

namespace {

std::optional<Rational> exact_div(const std::optional<Rational>& a,
                                  const std::optional<Rational>& b) {
    if (a && b && *b != 0) return *a / *b;
    return std::nullopt;
}

std::optional<Rational> exact_neg_div(const std::optional<Rational>& a,
                                      const std::optional<Rational>& b) {
    auto q = exact_div(a, b);
    if (q) return -*q;
    return std::nullopt;
}

}  // namespace

ScalarIFS derive_scalar_ifs(const AffineIFS& system, ScalarKind kind) {
    if (system.maps.empty()) throw std::invalid_argument("empty system");
    ScalarIFS s;
    s.kind = kind;

    switch (kind) {
        case ScalarKind::horizontal_projection:
            for (const auto& m : system.maps)
                s.maps.push_back({m.c.value, m.u.value, m.c.exact, m.u.exact});
            break;
        case ScalarKind::vertical_projection:
            for (const auto& m : system.maps)
                s.maps.push_back({m.b.value, m.v.value, m.b.exact, m.v.exact});
            break;
        case ScalarKind::furstenberg_forward:
            for (const auto& m : system.maps) {
                if (!(m.c.value > m.b.value))
                    throw std::domain_error(
                        "forward projective system needs c_i > b_i for every map");
                s.maps.push_back({m.b.value / m.c.value, m.d.value / m.c.value,
                                  exact_div(m.b.exact, m.c.exact),
                                  exact_div(m.d.exact, m.c.exact)});
            }
            break;
        case ScalarKind::furstenberg_backward: {
            if (!system.is_diag_homogeneous())
                throw std::domain_error("backward projective system needs a "
                                        "diagonally homogeneous system");
            double c = system.homogeneous_c(), b = system.homogeneous_b();
            if (!(c < b))
                throw std::domain_error("backward projective system needs c < b");
            for (const auto& m : system.maps)
                s.maps.push_back({c / b, -m.d.value / b,
                                  exact_div(m.c.exact, m.b.exact),
                                  exact_neg_div(m.d.exact, m.b.exact)});
            break;
        }
    }
    return s;
}

Interval invariant_interval(const ScalarIFS& s) {
    if (s.maps.empty()) throw std::invalid_argument("empty scalar system");
    Interval iv{s.maps[0].fixed_point(), s.maps[0].fixed_point()};
    for (const auto& m : s.maps) {
        if (!(m.ratio > 0.0))
            throw std::domain_error("invariant interval needs positive ratios");
        double z = m.fixed_point();
        iv.lo = std::min(iv.lo, z);
        iv.hi = std::max(iv.hi, z);
    }
    return iv;
}

std::optional<RationalInterval> invariant_interval_exact(const ScalarIFS& s) {
    if (!s.all_exact()) return std::nullopt;
    RationalInterval iv;
    bool first = true;
    for (const auto& m : s.maps) {
        Rational z = *m.offset_exact / (1 - *m.ratio_exact);
        if (first || z < iv.lo) iv.lo = z;
        if (first || z > iv.hi) iv.hi = z;
        first = false;
    }
    return iv;
}

Projection project_prefix(const ScalarIFS& s, const Word& word) {
    if (word.empty()) throw std::invalid_argument("project_prefix of empty word");
    for (int sym : word)
        if (sym < 1 || sym > s.size())
            throw std::out_of_range("word symbol out of range");

    Interval iv = invariant_interval(s);
    Projection p;
    p.value = iv.midpoint();
    double ratio_product = 1.0;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        const ScalarMap& m = s.maps[*it - 1];
        p.value = m.apply(p.value);
        ratio_product *= std::abs(m.ratio);
    }
    p.error_bound = ratio_product * iv.diameter();
    return p;
}

}  // namespace safdim
