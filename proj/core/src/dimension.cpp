#include "safdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

namespace safdim {

namespace {

constexpr double kTieTol = 1e-12;

// Bisection for f(s) = 1 where f is continuous and strictly decreasing.
// The bracket starts at [0, 4] and the upper end doubles until f < 1.
double solve_decreasing(const std::function<double(double)>& f) {
    double lo = 0.0, hi = 4.0;
    int grow = 0;
    while (f(hi) > 1.0) {
        hi *= 2.0;
        if (++grow > 60) throw std::runtime_error("no upper bracket for Moran equation");
    }
    if (f(lo) < 1.0) return lo;  // root at or below 0; exponents here are >= 0
    for (int i = 0; i < 200 && (hi - lo) > 1e-15; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) >= 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

void check_ratio(double r) {
    if (!(r > 0.0 && r < 1.0))
        throw std::invalid_argument("ratio out of (0,1): " + std::to_string(r));
}

}  // namespace

double similarity_dimension(std::span<const double> ratios) {
    if (ratios.empty()) throw std::invalid_argument("similarity_dimension of empty list");
    for (double r : ratios) check_ratio(r);
    return solve_decreasing([&](double s) {
        double sum = 0.0;
        for (double r : ratios) sum += std::pow(r, s);
        return sum;
    });
}

AffinityResult affinity_dimension(const AffineIFS& system) {
    const auto& maps = system.maps;
    if (maps.empty()) throw std::invalid_argument("affinity_dimension of empty system");
    std::vector<double> cs, bs;
    for (const auto& m : maps) {
        cs.push_back(m.c.value);
        bs.push_back(m.b.value);
    }

    AffinityResult r;
    r.s_x = similarity_dimension(cs);
    r.s_y = similarity_dimension(bs);
    r.s_hat_x = std::min(r.s_x, 1.0);
    r.s_hat_y = std::min(r.s_y, 1.0);

    // sum major_i^shat * minor_i^(d - shat) = 1, strictly decreasing in d.
    auto mixed_root = [&](const std::vector<double>& major, const std::vector<double>& minor,
                          double shat) {
        return solve_decreasing([&](double d) {
            double sum = 0.0;
            for (size_t i = 0; i < major.size(); ++i)
                sum += std::pow(major[i], shat) * std::pow(minor[i], d - shat);
            return sum;
        });
    };
    r.d_x = mixed_root(cs, bs, r.s_hat_x);
    r.d_y = mixed_root(bs, cs, r.s_hat_y);
    r.dim_aff = std::max(r.d_x, r.d_y);
    if (std::abs(r.d_x - r.d_y) <= kTieTol)
        r.dominant = Axis::tie;
    else
        r.dominant = r.d_x > r.d_y ? Axis::x : Axis::y;
    return r;
}

double homogeneous_affinity(int n_maps, double c, double b) {
    if (n_maps < 1) throw std::invalid_argument("need at least one map");
    check_ratio(c);
    check_ratio(b);
    if (!(c > b))
        throw std::domain_error("homogeneous_affinity needs c > b (y-dominant systems "
                                "use the theorem-C formula)");
    double nc = n_maps * c;
    if (std::abs(nc - 1.0) <= kTieTol) return 1.0;  // both branches give 1
    if (nc < 1.0) return std::log(double(n_maps)) / -std::log(c);
    return 1.0 + std::log(nc) / -std::log(b);
}

LyapunovInputs LyapunovInputs::from(const AffineIFS& system, std::span<const double> p) {
    if (static_cast<int>(p.size()) != system.size())
        throw std::invalid_argument("weight vector length != number of maps");
    double sum = 0.0;
    for (double w : p) {
        if (w < 0.0) throw std::invalid_argument("negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("weights do not sum to 1");

    LyapunovInputs in;
    in.p.assign(p.begin(), p.end());
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;  // 0 log 0 = 0
        in.entropy -= p[i] * std::log(p[i]);
        in.chi_h -= p[i] * std::log(system.maps[i].c.value);
        in.chi_v -= p[i] * std::log(system.maps[i].b.value);
    }
    return in;
}

double lyapunov_dimension(const LyapunovInputs& in) {
    if (in.chi_h > in.chi_v)
        throw std::domain_error("chi_H > chi_V: swap the roles of the axes and call "
                                "with the mirrored system");
    // At the case boundaries adjacent branches agree, so the first matching
    // branch is taken.
    if (in.entropy <= in.chi_h) return in.entropy / in.chi_h;
    if (in.entropy <= in.chi_h + in.chi_v)
        return (in.entropy + in.chi_v - in.chi_h) / in.chi_v;
    return 2.0 * in.entropy / (in.chi_h + in.chi_v);
}

double lyapunov_dimension(const AffineIFS& system, std::span<const double> p) {
    return lyapunov_dimension(LyapunovInputs::from(system, p));
}

std::string theorem_name(TheoremId id) {
    switch (id) {
        case TheoremId::trivial_case: return "trivial case (affinity below 1)";
        case TheoremId::theorem_a: return "theorem A";
        case TheoremId::theorem_b: return "theorem B";
        case TheoremId::theorem_c: return "theorem C";
        case TheoremId::none: return "none";
    }
    return "none";
}

namespace {

AssumptionCheck check(const std::string& name, bool ok, double lhs, const char* rel,
                      double rhs) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6g %s %.6g", lhs, rel, rhs);
    return {name, ok, buf};
}

}  // namespace

TheoremVerdict theorem_dimension(const AffineIFS& system) {
    system.require_valid();
    const int n = system.size();
    AffinityResult aff = affinity_dimension(system);

    double sum_c = 0.0;
    for (const auto& m : system.maps) sum_c += m.c.value;

    TheoremVerdict v;

    // Trivial case: works for general (inhomogeneous) triangular systems.
    {
        bool contracting_row = sum_c < 1.0;
        bool x_dom = aff.dominant != Axis::y;
        if (contracting_row && x_dom) {
            v.theorem = TheoremId::trivial_case;
            v.checked.push_back(check("sum c_i < 1", true, sum_c, "<", 1.0));
            v.checked.push_back({"direction-x dominates", true,
                                 "d_x >= d_y from the affinity solver"});
            v.unverifiable = {"exponential separation of the horizontal projection"};
            v.value = aff.s_x;
            return v;
        }
    }

    if (!system.is_diag_homogeneous()) {
        v.theorem = TheoremId::none;
        v.checked.push_back(check("sum c_i < 1", sum_c < 1.0, sum_c, "<", 1.0));
        v.checked.push_back({"diagonally homogeneous", false,
                             "theorems A/B/C need equal diagonals"});
        return v;
    }

    const double c = system.homogeneous_c();
    const double b = system.homogeneous_b();
    const double inv_n = 1.0 / n;

    AssumptionCheck a1 = check("A1: c > 1/N", c > inv_n, c, ">", inv_n);
    AssumptionCheck a2 = check("A2: b < 1/N", b < inv_n, b, "<", inv_n);
    if (a1.passed && a2.passed) {
        v.theorem = TheoremId::theorem_a;
        v.checked = {a1, a2};
        v.unverifiable = {"A3 (x-marginal absolutely continuous with L^q density)",
                          "A4 (transversality)"};
        v.value = 1.0 + std::log(n * c) / -std::log(b);
        return v;
    }

    AssumptionCheck b1 = check("B1: c > 1/N", c > inv_n, c, ">", inv_n);
    AssumptionCheck b2 = check("B2: b < c", b < c, b, "<", c);
    if (b1.passed && b2.passed) {
        v.theorem = TheoremId::theorem_b;
        v.checked = {b1, b2};
        v.unverifiable = {"B3 (x-marginal has L^q density for every q > 1)",
                          "B4 (transversality)"};
        v.value = std::min(2.0, 1.0 + std::log(n * c) / -std::log(b));
        return v;
    }

    AssumptionCheck c1 = check("C1: c < 1/N", c < inv_n, c, "<", inv_n);
    AssumptionCheck c2 = check("C2: b > c", b > c, b, ">", c);
    double logn = std::log(double(n));
    double c5_lhs = logn / std::log(b / c);
    double c5_rhs = std::min({1.0, logn / -std::log(b), 2.0 * (1.0 - logn / -std::log(c))});
    AssumptionCheck c5 = check("C5: log N / log(b/c) >= min{1, log N/-log b, 2(1 - log N/-log c)}",
                               c5_lhs >= c5_rhs, c5_lhs, ">=", c5_rhs);
    if (c1.passed && c2.passed && c5.passed) {
        v.theorem = TheoremId::theorem_c;
        v.checked = {c1, c2, c5};
        v.unverifiable = {"C3 (backward projective system has exponential separation)",
                          "C4 (horizontal projection has exponential separation)"};
        v.value = std::min(logn / -std::log(b), 1.0 + std::log(n * b) / -std::log(c));
        return v;
    }

    v.theorem = TheoremId::none;
    v.checked = {a1, a2, b1, b2, c1, c2, c5};
    v.checked.push_back(check("trivial case: sum c_i < 1", sum_c < 1.0, sum_c, "<", 1.0));
    return v;
}

PhaseProfile phase_transition_profile(double c, std::span<const double> b_grid) {
    const double lo = 1.0 / std::sqrt(3.0);
    if (!(c > lo && c < 1.0))
        throw std::domain_error("phase profile needs c in (1/sqrt(3), 1)");
    PhaseProfile profile;
    profile.c = c;
    profile.breakpoint = 1.0 / (3.0 * c);
    for (double b : b_grid) {
        if (!(b > 0.0 && b <= c / 2.0))
            throw std::domain_error("phase profile needs every b in (0, c/2]");
        double dim = b <= profile.breakpoint ? 1.0 + std::log(3.0 * c) / -std::log(b) : 2.0;
        profile.points.emplace_back(b, dim);
    }
    return profile;
}

}  // namespace safdim
