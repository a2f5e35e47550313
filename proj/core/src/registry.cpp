#include "safdim/registry.hpp"

#include "safdim/errors.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace safdim {

namespace {

TriangularMap map_from_text(const char* c, const char* b, const char* d, const char* u,
                            const char* v) {
    TriangularMap m;
    m.c = Number::from_text(c);
    m.b = Number::from_text(b);
    m.d = Number::from_text(d);
    m.u = Number::from_text(u);
    m.v = Number::from_text(v);
    return m;
}

// Two overlapping maps, x-dominant, strong x-expansion (Nc > 1): the
// affinity value 1 + log(2c)/-log b is the expected Hausdorff dimension.
AffineIFS make_j49() {
    AffineIFS s;
    s.label = "j49";
    s.maps = {map_from_text("0.7", "0.3", "-0.2", "0", "0.3"),
              map_from_text("0.7", "0.3", "0.2", "0.3", "0.2")};
    return s;
}

// Three maps with pairwise overlapping x-cylinders; the third map's image is
// disjoint from the other two, and the shears sit inside the interval that
// keeps the projective fixed points separated.
AffineIFS make_j29() {
    AffineIFS s;
    s.label = "j29";
    s.maps = {map_from_text("0.4", "0.1", "0", "0.1", "0.15"),
              map_from_text("0.4", "0.1", "0.1", "0.28", "0.35"),
              map_from_text("0.4", "0.1", "0.2", "0.46", "0.65")};
    return s;
}

AffineIFS make_j48(const char* b, const char* v1, const char* v2, const char* v3) {
    AffineIFS s;
    s.label = "j48";
    s.maps = {map_from_text("8/9", b, "0", "0", v1),
              map_from_text("8/9", b, "0.1", "1/18", v2),
              map_from_text("8/9", b, "0.05", "1/9", v3)};
    return s;
}

// y-dominant homogeneous system with rational diagonals and one irrational
// shear and one irrational x-translation: both scalar projections fall under
// the rational-plus-one-irrational separation lemma.
AffineIFS make_j33(HighPrec& d3_out, HighPrec& u3_out) {
    HighPrec sqrt2 = boost::multiprecision::sqrt(HighPrec(2));
    d3_out = sqrt2 / 4;
    u3_out = sqrt2 / 2;
    AffineIFS s;
    s.label = "j33";
    TriangularMap m3;
    m3.c = Number::from_text("0.25");
    m3.b = Number::from_text("0.375");
    m3.d = Number::from_irrational(d3_out.convert_to<double>());
    m3.u = Number::from_irrational(u3_out.convert_to<double>());
    m3.v = Number::from_text("0.2");
    s.maps = {map_from_text("0.25", "0.375", "0", "0", "0"),
              map_from_text("0.25", "0.375", "0.5", "0.5", "0.1"), m3};
    return s;
}

std::vector<ExampleEntry> build_registry() {
    std::vector<ExampleEntry> reg;

    {
        ExampleEntry e;
        e.name = "j49";
        e.summary = "two overlapping x-dominant maps (c=0.7, b=0.3)";
        e.system = make_j49();
        e.expected_theorem = TheoremId::theorem_a;
        e.expected_dimension = 1.0 + std::log(2 * 0.7) / -std::log(0.3);
        reg.push_back(std::move(e));
    }
    {
        ExampleEntry e;
        e.name = "j29";
        e.summary = "three maps, overlapping x-cylinders, separated lift (c=0.4, b=0.1)";
        e.system = make_j29();
        e.expected_theorem = TheoremId::theorem_a;
        e.expected_dimension = 1.0 + std::log(3 * 0.4) / -std::log(0.1);
        reg.push_back(std::move(e));
    }
    {
        ExampleEntry e;
        e.name = "j48";
        e.summary = "three wide maps on an arithmetic progression (c=8/9, b=0.35)";
        e.system = make_j48("0.35", "0.05", "0.03", "0.55");
        e.expected_theorem = TheoremId::theorem_b;
        e.expected_dimension =
            std::min(2.0, 1.0 + std::log(3 * (8.0 / 9.0)) / -std::log(0.35));
        reg.push_back(std::move(e));
    }
    {
        ExampleEntry e;
        e.name = "j33";
        e.summary = "y-dominant system with one irrational shear and translation "
                    "(c=1/4, b=3/8)";
        HighPrec d3, u3;
        e.system = make_j33(d3, u3);
        e.irrational_d = d3;
        e.irrational_u = u3;
        e.expected_theorem = TheoremId::theorem_c;
        e.expected_dimension = std::min(std::log(3.0) / -std::log(0.375),
                                        1.0 + std::log(3 * 0.375) / -std::log(0.25));
        reg.push_back(std::move(e));
    }
    return reg;
}

void fail(std::vector<std::string>& bad, const std::string& msg) { bad.push_back(msg); }

// Family constraint (e): d3 inside the open interval pinned by d1 < d2 and
// the ratio c/b; keeps the projective fixed points of map 3 between the
// other two.
bool shear_condition(double d1, double d2, double d3, double c_over_b) {
    double lo = d2 * (2.0 - c_over_b) + d1 * (c_over_b - 1.0);
    double hi = d1 * (2.0 - c_over_b) + d2 * (c_over_b - 1.0);
    return d3 > lo && d3 < hi;
}

// Vertical separation of map 3 from maps 1 and 2 (images as y-intervals).
bool third_map_separated(const AffineIFS& s) {
    auto yiv = [&](int i) {
        const auto& m = s.maps[i];
        double lo = m.v.value + std::min(0.0, m.d.value);
        double hi = m.v.value + m.b.value + std::max(0.0, m.d.value);
        return std::pair<double, double>{lo, hi};
    };
    auto [l1, h1] = yiv(0);
    auto [l2, h2] = yiv(1);
    auto [l3, h3] = yiv(2);
    return (h3 < l1 || h1 < l3) && (h3 < l2 || h2 < l3);
}

void check_entry(const ExampleEntry& e, std::vector<std::string>& bad) {
    auto violations = e.system.validate();
    for (auto& v : violations) fail(bad, e.name + ": " + v);
    if (!violations.empty()) return;

    TheoremVerdict verdict = theorem_dimension(e.system);
    if (verdict.theorem != e.expected_theorem)
        fail(bad, e.name + ": expected " + theorem_name(e.expected_theorem) + ", got " +
                      theorem_name(verdict.theorem));
    else if (!verdict.value || std::abs(*verdict.value - e.expected_dimension) > 1e-9)
        fail(bad, e.name + ": theorem value drifted from the registered dimension");

    const auto& maps = e.system.maps;
    if (e.name == "j49") {
        double c = maps[0].c.value, b = maps[0].b.value;
        if (!(c > 0.5 && c < 1.0)) fail(bad, "j49: c outside (1/2, 1)");
        if (!(b > 0.0 && b < c / 2.0)) fail(bad, "j49: b outside (0, c/2)");
        if (maps[0].u.value == maps[1].u.value) fail(bad, "j49: u1 == u2");
        if (maps[0].d.value == maps[1].d.value) fail(bad, "j49: d1 == d2");
    } else if (e.name == "j29" || e.name == "j48") {
        double c = maps[0].c.value, b = maps[0].b.value;
        if (e.name == "j29") {
            if (!(c > 1.0 / 3.0 && c < 1.0)) fail(bad, "j29: c outside (1/3, 1)");
            if (!(b > 0.0 && b < c / 2.0 && b < 1.0 / 3.0))
                fail(bad, "j29: b outside (0, c/2) n (0, 1/3)");
            // pairwise overlapping x-cylinders
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) {
                    double lo = std::max(maps[i].u.value, maps[j].u.value);
                    double hi = std::min(maps[i].u.value, maps[j].u.value) + c;
                    if (!(lo < hi)) fail(bad, "j29: x-cylinders do not overlap");
                }
        } else {
            if (!(c > 1.0 / std::sqrt(3.0) && c < 1.0))
                fail(bad, "j48: c outside (1/sqrt(3), 1)");
            if (!(b > 0.0 && b <= c / 2.0)) fail(bad, "j48: b outside (0, c/2]");
            double step1 = maps[1].u.value - maps[0].u.value;
            double step2 = maps[2].u.value - maps[1].u.value;
            if (std::abs(step1 - step2) > 1e-12)
                fail(bad, "j48: u not an arithmetic progression");
        }
        double d1 = maps[0].d.value, d2 = maps[1].d.value, d3 = maps[2].d.value;
        if (!(d1 < d2)) fail(bad, e.name + ": needs d1 < d2");
        if (!shear_condition(d1, d2, d3, c / b))
            fail(bad, e.name + ": d3 outside the admissible shear interval");
        if (!third_map_separated(e.system))
            fail(bad, e.name + ": image of map 3 meets the other images");
    } else if (e.name == "j33") {
        double c = maps[0].c.value, b = maps[0].b.value;
        if (!maps[0].c.exact || !maps[0].b.exact) fail(bad, "j33: c, b must be rational");
        if (!(c < std::min(1.0 / 3.0, b))) fail(bad, "j33: needs c < min(1/3, b)");
        if (!(b < 1.0)) fail(bad, "j33: needs b < 1");
        double cap = std::min(std::sqrt(c),
                              std::pow(c, 1.0 + std::log(3.0) / (2.0 * std::log(3.0 * c))));
        if (!(b < cap)) fail(bad, "j33: b above the admissible cap");
        int irrational_d = 0, irrational_u = 0;
        for (const auto& m : maps) {
            if (!m.d.exact) ++irrational_d;
            if (!m.u.exact) ++irrational_u;
        }
        if (irrational_d != 1 || irrational_u != 1)
            fail(bad, "j33: needs exactly one irrational d and one irrational u");
    }
}

}  // namespace

const std::vector<ExampleEntry>& example_registry() {
    static std::vector<ExampleEntry> reg = build_registry();
    return reg;
}

const ExampleEntry& find_example(const std::string& name) {
    for (const auto& e : example_registry())
        if (e.name == name) return e;
    throw ValidationError({"unknown example \"" + name +
                           "\" (known: j49, j29, j48, j33)"});
}

AffineIFS example_j48_with_b(double b) {
    // The pinned vertical translations keep map 3 separated from the others
    // and every image inside the square only up to b = 0.4 (map 3 tops out
    // at v3 + d3 + b = 1 there).
    if (!(b > 0.0 && b <= 0.4))
        throw std::domain_error("the pinned j48 family supports b in (0, 0.4]");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", b);
    AffineIFS s = make_j48(buf, "0.05", "0.03", "0.55");
    s.require_valid();
    return s;
}

void assert_registry_constraints() {
    std::vector<std::string> bad;
    for (const auto& e : example_registry()) check_entry(e, bad);
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

}  // namespace safdim
