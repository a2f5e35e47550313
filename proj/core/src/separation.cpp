#include "safdim/separation.hpp"

#include "safdim/errors.hpp"
#include "safdim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace safdim {

// ---------------------------------------------------------------------------
// lift

Lifted3DIFS lift_3d(const AffineIFS& system) {
    system.require_valid();
    ScalarIFS proj = derive_scalar_ifs(system, ScalarKind::furstenberg_forward);
    Lifted3DIFS lifted;
    for (int i = 0; i < system.size(); ++i)
        lifted.maps.push_back({system.maps[i], proj.maps[i]});
    lifted.axis_interval = invariant_interval(proj);
    return lifted;
}

// ---------------------------------------------------------------------------
// planar L-inf distance between parallelograms (vertical-sided quads)

namespace {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

using Quad = std::array<Vec2, 4>;

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew monotone chain; returns a counter-clockwise hull without interior
// collinear points. Works for degenerate (collinear) input, where the "hull"
// comes back with fewer than 3 points.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<Vec2> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

// min over the segment p..q of max(|x|, |y|). The objective is convex and
// piecewise linear in the parameter, so the minimum sits at an endpoint or
// at a kink (x = 0, y = 0, x = y, x = -y).
double linf_origin_to_segment(const Vec2& p, const Vec2& q) {
    double dx = q.x - p.x, dy = q.y - p.y;
    double candidates[6];
    int n_cand = 0;
    candidates[n_cand++] = 0.0;
    candidates[n_cand++] = 1.0;
    auto add_root = [&](double num, double den) {
        if (den != 0.0) {
            double t = num / den;
            if (t > 0.0 && t < 1.0) candidates[n_cand++] = t;
        }
    };
    add_root(-p.x, dx);            // x(t) = 0
    add_root(-p.y, dy);            // y(t) = 0
    add_root(p.y - p.x, dx - dy);  // x(t) = y(t)
    add_root(-p.y - p.x, dx + dy); // x(t) = -y(t)
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_cand; ++i) {
        double t = candidates[i];
        best = std::min(best, std::max(std::abs(p.x + t * dx), std::abs(p.y + t * dy)));
    }
    return best;
}

bool origin_inside(const std::vector<Vec2>& hull) {
    const Vec2 origin{0.0, 0.0};
    for (size_t i = 0; i < hull.size(); ++i) {
        const Vec2& a = hull[i];
        const Vec2& b = hull[(i + 1) % hull.size()];
        if (cross(a, b, origin) < 0.0) return false;
    }
    return true;
}

// L-inf distance between convex quads via the Minkowski difference: the
// distance from the origin to conv{a - b : a in A corners, b in B corners}.
double linf_distance(const Quad& a, const Quad& b) {
    std::vector<Vec2> diffs;
    diffs.reserve(16);
    for (const Vec2& pa : a)
        for (const Vec2& pb : b) diffs.push_back({pa.x - pb.x, pa.y - pb.y});
    std::vector<Vec2> hull = convex_hull(std::move(diffs));
    if (hull.empty()) return 0.0;
    if (hull.size() == 1) return std::max(std::abs(hull[0].x), std::abs(hull[0].y));
    if (hull.size() == 2) return linf_origin_to_segment(hull[0], hull[1]);
    if (origin_inside(hull)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < hull.size(); ++i)
        best = std::min(best, linf_origin_to_segment(hull[i], hull[(i + 1) % hull.size()]));
    return best;
}

// ---------------------------------------------------------------------------
// ssp search

struct Slab {
    Quad quad;
    double zlo = 0.0, zhi = 0.0;
};

double slab_distance(const Slab& a, const Slab& b) {
    double zgap = std::max({0.0, b.zlo - a.zhi, a.zlo - b.zhi});
    double planar = linf_distance(a.quad, b.quad);
    return std::max(planar, zgap);  // product sets in the max metric
}

struct ScalarComposite {
    double r = 1.0, o = 0.0;
};

ScalarComposite extend(const ScalarComposite& cur, const ScalarMap& m) {
    return {cur.r * m.ratio, cur.r * m.offset + cur.o};
}

Quad planar_box_image(const AffineComposite& m, double lo, double hi) {
    auto c0 = m.apply(lo, lo);
    auto c1 = m.apply(hi, lo);
    auto c2 = m.apply(lo, hi);
    auto c3 = m.apply(hi, hi);
    return {Vec2{c0[0], c0[1]}, Vec2{c1[0], c1[1]}, Vec2{c2[0], c2[1]}, Vec2{c3[0], c3[1]}};
}

Slab make_slab(const AffineComposite& planar, const ScalarComposite& axis,
               double eps, const Interval& iv) {
    Slab s;
    s.quad = planar_box_image(planar, eps, 1.0 - eps);
    s.zlo = axis.o + axis.r * iv.lo;  // axis ratios are positive
    s.zhi = axis.o + axis.r * iv.hi;
    return s;
}

void enumerate_slabs(const Lifted3DIFS& lifted, int depth, const AffineComposite& planar,
                     const ScalarComposite& axis, double eps, std::vector<Slab>& out) {
    if (depth == 0) {
        out.push_back(make_slab(planar, axis, eps, lifted.axis_interval));
        return;
    }
    for (const auto& m : lifted.maps)
        enumerate_slabs(lifted, depth - 1, compose(planar, to_composite(m.planar)),
                        extend(axis, m.axis), eps, out);
}

double min_pairwise_distance(const std::vector<Slab>& slabs, bool reverse_order) {
    double best = std::numeric_limits<double>::infinity();
    size_t n = slabs.size();
    auto visit = [&](size_t i, size_t j) {
        double d = slab_distance(slabs[i], slabs[j]);
        if (d < best) best = d;
        return best > 0.0;
    };
    if (!reverse_order) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                if (!visit(i, j)) return 0.0;
    } else {
        for (size_t i = n; i-- > 1;)
            for (size_t j = i; j-- > 0;)
                if (!visit(j, i)) return 0.0;
    }
    return best;
}

constexpr double kContainSlack = 1e-12;

bool slab_in_box(const Slab& s, double eps, const Interval& iv) {
    for (const Vec2& c : s.quad) {
        if (c.x < eps - kContainSlack || c.x > 1.0 - eps + kContainSlack) return false;
        if (c.y < eps - kContainSlack || c.y > 1.0 - eps + kContainSlack) return false;
    }
    return s.zlo >= iv.lo - kContainSlack && s.zhi <= iv.hi + kContainSlack;
}

void check_ssp_args(const AffineIFS& system, int max_level, double eps) {
    system.require_valid();
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("eps must lie in (0, 1/2)");
    if (max_level < 1) throw std::invalid_argument("max_level must be >= 1");
    if (std::pow(double(system.size()), max_level) > 1e7)
        throw GuardError("ssp search refuses N^max_level > 10^7");
}

}  // namespace

SspSearchResult ssp_certificate(const AffineIFS& system, int max_level, double eps) {
    check_ssp_args(system, max_level, eps);
    Lifted3DIFS lifted = lift_3d(system);

    SspSearchResult result;
    // The level-n construction only separates if every level-1 image of the
    // box stays inside the box.
    for (const auto& m : lifted.maps) {
        Slab s = make_slab(to_composite(m.planar), extend({}, m.axis), eps,
                           lifted.axis_interval);
        if (!slab_in_box(s, eps, lifted.axis_interval)) {
            result.note = "a level-1 image leaves the box; no certificate at this eps "
                          "(smaller eps may work)";
            return result;
        }
    }

    for (int level = 1; level <= max_level; ++level) {
        std::vector<Slab> slabs;
        slabs.reserve(static_cast<size_t>(std::pow(double(system.size()), level)));
        enumerate_slabs(lifted, level, AffineComposite{}, ScalarComposite{}, eps, slabs);
        double margin = min_pairwise_distance(slabs, /*reverse_order=*/false);
        result.level_margins.emplace_back(level, margin);
        if (margin > 0.0) {
            result.certificate = SspCertificate{level, margin, SspBox{eps, lifted.axis_interval}};
            return result;
        }
    }
    return result;
}

SspVerification verify_ssp_certificate(const AffineIFS& system, int level, double eps) {
    check_ssp_args(system, level, eps);
    Lifted3DIFS lifted = lift_3d(system);

    SspVerification v;
    v.box_invariant = true;
    for (const auto& m : lifted.maps) {
        Slab s = make_slab(to_composite(m.planar), extend({}, m.axis), eps,
                           lifted.axis_interval);
        if (!slab_in_box(s, eps, lifted.axis_interval)) v.box_invariant = false;
    }

    // Re-enumerate by index odometer, composing each word from scratch.
    const int n_maps = system.size();
    size_t total = 1;
    for (int i = 0; i < level; ++i) total *= static_cast<size_t>(n_maps);
    std::vector<Slab> slabs(total);
    for (size_t idx = 0; idx < total; ++idx) {
        Word word(level);
        size_t rem = idx;
        for (int pos = level - 1; pos >= 0; --pos) {
            word[pos] = static_cast<int>(rem % n_maps) + 1;
            rem /= n_maps;
        }
        AffineComposite planar = compose(system, word);
        ScalarComposite axis;
        for (int sym : word) axis = extend(axis, lifted.maps[sym - 1].axis);
        slabs[idx] = make_slab(planar, axis, eps, lifted.axis_interval);
    }
    v.margin = min_pairwise_distance(slabs, /*reverse_order=*/true);
    v.disjoint = v.margin > 0.0;
    return v;
}

// ---------------------------------------------------------------------------
// exact delta_n

namespace {

void check_delta_guard(int n_maps, int n) {
    if (n < 1) throw std::invalid_argument("level must be >= 1");
    if (n * std::log2(double(n_maps)) > 50.0)
        throw GuardError("delta enumeration guard n*log2(N) <= 50 exceeded");
    if (std::pow(double(n_maps), n) > double(1 << 26))
        throw GuardError("delta enumeration cap of 2^26 words exceeded");
}

BigInt lcm_big(const BigInt& a, const BigInt& b) {
    return a / boost::multiprecision::gcd(a, b) * b;
}

// All level-n word values of {x -> (p/q) x + o_i}, scaled by q^(n-1) * scale
// so they are integers. Built by prepending symbols: value(s w) scaled at
// length k+1 equals O_s * q^k + p * value(w) scaled at length k.
std::vector<BigInt> scaled_word_values(const BigInt& p, const BigInt& q,
                                       const std::vector<BigInt>& scaled_offsets, int n) {
    const size_t n_maps = scaled_offsets.size();
    std::vector<BigInt> vals;
    vals.reserve(n_maps);
    for (const auto& o : scaled_offsets) vals.push_back(o);
    BigInt qpow = 1;
    for (int k = 1; k < n; ++k) {
        qpow *= q;
        std::vector<BigInt> next;
        next.reserve(vals.size() * n_maps);
        for (size_t s = 0; s < n_maps; ++s) {
            BigInt head = scaled_offsets[s] * qpow;
            for (const auto& t : vals) next.push_back(head + p * t);
        }
        vals = std::move(next);
    }
    return vals;
}

}  // namespace

DeltaResult delta_n_exact(const ScalarIFS& s, int n) {
    if (!s.all_exact())
        throw std::domain_error("irrational coefficient present; use delta_n_symbolic");
    if (s.size() < 1) throw std::invalid_argument("empty scalar system");
    check_delta_guard(s.size(), n);
    for (const auto& m : s.maps)
        if (!(boost::multiprecision::abs(*m.ratio_exact) < 1))
            throw std::domain_error("ratios must be strict contractions");

    bool homogeneous = true;
    for (const auto& m : s.maps)
        if (*m.ratio_exact != *s.maps[0].ratio_exact) homogeneous = false;

    DeltaResult result;
    if (homogeneous) {
        // Equal ratios make every derivative product equal: the finite branch
        // applies to all pairs, and an integer sort finds the minimum gap.
        Rational ratio = *s.maps[0].ratio_exact;
        BigInt p = boost::multiprecision::numerator(ratio);
        BigInt q = boost::multiprecision::denominator(ratio);
        BigInt scale = 1;
        for (const auto& m : s.maps)
            scale = lcm_big(scale, boost::multiprecision::denominator(*m.offset_exact));
        std::vector<BigInt> scaled_offsets;
        for (const auto& m : s.maps) {
            Rational so = *m.offset_exact * Rational(scale);
            scaled_offsets.push_back(boost::multiprecision::numerator(so));
        }
        std::vector<BigInt> vals = scaled_word_values(p, q, scaled_offsets, n);
        std::sort(vals.begin(), vals.end());
        BigInt best = -1;
        for (size_t i = 1; i < vals.size(); ++i) {
            BigInt gap = vals[i] - vals[i - 1];
            if (best < 0 || gap < best) best = gap;
            if (best == 0) break;
        }
        BigInt denom = pow_int(q, static_cast<unsigned>(n - 1)) * scale;
        result.gap = Rational(best, denom);
        return result;
    }

    // Heterogeneous rational ratios: group words by exact derivative product.
    struct Entry {
        Rational deriv, value;
    };
    std::vector<Entry> entries;
    std::function<void(int, const Rational&, const Rational&)> walk =
        [&](int depth, const Rational& deriv, const Rational& value) {
            if (depth == n) {
                entries.push_back({deriv, value});
                return;
            }
            for (const auto& m : s.maps)
                walk(depth + 1, deriv * *m.ratio_exact,
                     value + deriv * *m.offset_exact);
        };
    walk(0, Rational(1), Rational(0));
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.deriv < b.deriv || (a.deriv == b.deriv && a.value < b.value);
    });
    bool found = false;
    Rational best;
    for (size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].deriv != entries[i - 1].deriv) continue;
        Rational gap = entries[i].value - entries[i - 1].value;
        if (!found || gap < best) {
            best = gap;
            found = true;
        }
    }
    if (!found) {
        result.is_infinite = true;
        return result;
    }
    result.gap = best;
    return result;
}

// ---------------------------------------------------------------------------
// symbolic delta_n

namespace {

struct SymbolicWords {
    std::vector<BigInt> rational_part;  // P_w: value * q^n * scale, tau term excluded
    std::vector<BigInt> tau_part;       // Q_w: coefficient of tau, scaled by q^n
    BigInt q, qpow_n, scale, n_words;
};

// Scaled so that word value = (P_w + (tau*scale) * Q_w) / (q^n * scale).
SymbolicWords build_symbolic_words(const Rational& ratio,
                                   const std::vector<Rational>& rational_offsets, int n) {
    if (!(ratio > 0 && ratio < 1))
        throw std::invalid_argument("ratio must lie in (0,1)");
    if (rational_offsets.empty())
        throw std::invalid_argument("need at least one rational offset");
    const int n_maps = static_cast<int>(rational_offsets.size()) + 1;
    check_delta_guard(n_maps, n);
    if (std::pow(double(n_maps), n) > double(1 << 24))
        throw GuardError("symbolic delta cap of 2^24 words exceeded");

    SymbolicWords w;
    BigInt p = boost::multiprecision::numerator(ratio);
    w.q = boost::multiprecision::denominator(ratio);
    w.scale = 1;
    for (const auto& o : rational_offsets)
        w.scale = lcm_big(w.scale, boost::multiprecision::denominator(o));
    std::vector<BigInt> scaled_offsets;
    for (const auto& o : rational_offsets)
        scaled_offsets.push_back(boost::multiprecision::numerator(o * Rational(w.scale)));

    // Prepend recursion on suffixes: at length k+1 the new head contributes
    // O_s * q^(k+1) (or q^(k+1) on the tau side for the symbolic symbol) and
    // the old suffix is multiplied by p.
    std::vector<BigInt> pvals, qvals;
    BigInt qpow = w.q;
    for (int s = 0; s < n_maps; ++s) {
        bool symbolic = s == n_maps - 1;
        pvals.push_back(symbolic ? BigInt(0) : scaled_offsets[s] * qpow);
        qvals.push_back(symbolic ? qpow : BigInt(0));
    }
    for (int k = 1; k < n; ++k) {
        qpow *= w.q;
        std::vector<BigInt> np, nq;
        np.reserve(pvals.size() * n_maps);
        nq.reserve(qvals.size() * n_maps);
        for (int s = 0; s < n_maps; ++s) {
            bool symbolic = s == n_maps - 1;
            BigInt headp = symbolic ? BigInt(0) : scaled_offsets[s] * qpow;
            BigInt headq = symbolic ? qpow : BigInt(0);
            for (size_t j = 0; j < pvals.size(); ++j) {
                np.push_back(headp + p * pvals[j]);
                nq.push_back(headq + p * qvals[j]);
            }
        }
        pvals = std::move(np);
        qvals = std::move(nq);
    }
    w.rational_part = std::move(pvals);
    w.tau_part = std::move(qvals);
    w.qpow_n = qpow;
    w.n_words = BigInt(w.rational_part.size());
    return w;
}

}  // namespace

SymbolicDeltaReport delta_n_symbolic(const Rational& ratio,
                                     const std::vector<Rational>& rational_offsets,
                                     const HighPrec& tau, int n) {
    SymbolicWords w = build_symbolic_words(ratio, rational_offsets, n);
    const size_t total = w.rational_part.size();

    SymbolicDeltaReport rep;
    rep.level = n;
    rep.ratio = ratio;
    rep.q = w.q;
    rep.offset_scale = w.scale;
    rep.n_words = w.n_words;
    rep.term_bound = pow_int(2 * w.q, static_cast<unsigned>(n));

    std::vector<size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (w.tau_part[a] != w.tau_part[b]) return w.tau_part[a] < w.tau_part[b];
        return w.rational_part[a] < w.rational_part[b];
    });

    // Group boundaries by tau coefficient.
    std::vector<std::pair<size_t, size_t>> groups;  // [begin, end)
    for (size_t i = 0; i < total;) {
        size_t j = i + 1;
        while (j < total && w.tau_part[order[j]] == w.tau_part[order[i]]) ++j;
        groups.emplace_back(i, j);
        i = j;
    }

    // Exact channel: pairs inside a group have p2 = 0.
    BigInt min_p1 = -1;
    for (auto [beg, end] : groups) {
        for (size_t i = beg + 1; i < end; ++i) {
            BigInt gap = w.rational_part[order[i]] - w.rational_part[order[i - 1]];
            if (gap == 0) rep.exact_collision = true;
            else if (min_p1 < 0 || gap < min_p1) min_p1 = gap;
        }
    }
    if (min_p1 > 0) {
        rep.certified_min_abs_p1 = min_p1;
        rep.certified_floor = Rational(min_p1, w.qpow_n * w.scale);
    }

    // Global extremes give the p1/p2 magnitudes over all pairs.
    auto minmax_p = std::minmax_element(w.rational_part.begin(), w.rational_part.end());
    auto minmax_q = std::minmax_element(w.tau_part.begin(), w.tau_part.end());
    rep.max_abs_p1 = *minmax_p.second - *minmax_p.first;
    rep.max_abs_p2 = *minmax_q.second - *minmax_q.first;
    for (size_t g = 1; g < groups.size(); ++g) {
        BigInt gap = w.tau_part[order[groups[g].first]] -
                     w.tau_part[order[groups[g - 1].first]];
        if (rep.smallest_nonzero_abs_p2 == 0 || gap < rep.smallest_nonzero_abs_p2)
            rep.smallest_nonzero_abs_p2 = gap;
    }

    // Float channel over pairs with p2 != 0: for each ordered group pair the
    // candidates are adjacent elements of two sorted lists, one shifted by
    // tau' * (Q_b - Q_a). Doubles rank the candidates (values here are exact
    // in double until ~2^52), high precision settles the reported minimum.
    const HighPrec tau_scaled = tau * HighPrec(w.scale);
    const double tau_d = tau_scaled.convert_to<double>();
    bool doubles_ok = true;
    if (boost::multiprecision::abs(*minmax_p.first) > BigInt(1) << 52 ||
        boost::multiprecision::abs(*minmax_p.second) > BigInt(1) << 52 ||
        rep.max_abs_p2 > BigInt(1) << 52)
        doubles_ok = false;

    struct Candidate {
        double approx;
        size_t i, j;  // indices into `order`
    };
    std::vector<Candidate> shortlist;
    auto consider = [&](double val, size_t oi, size_t oj) {
        shortlist.push_back({std::abs(val), oi, oj});
    };

    if (groups.size() > 1) {
        std::vector<std::vector<double>> group_vals(groups.size());
        if (doubles_ok) {
            for (size_t g = 0; g < groups.size(); ++g) {
                auto [beg, end] = groups[g];
                group_vals[g].reserve(end - beg);
                for (size_t i = beg; i < end; ++i)
                    group_vals[g].push_back(w.rational_part[order[i]].convert_to<double>());
            }
        }
        for (size_t ga = 0; ga < groups.size(); ++ga) {
            for (size_t gb = ga + 1; gb < groups.size(); ++gb) {
                double shift;
                BigInt dq = w.tau_part[order[groups[gb].first]] -
                            w.tau_part[order[groups[ga].first]];
                shift = doubles_ok ? tau_d * dq.convert_to<double>()
                                   : (tau_scaled * HighPrec(dq)).convert_to<double>();
                // Two-pointer sweep over sorted lists A and B + shift.
                auto [abeg, aend] = groups[ga];
                auto [bbeg, bend] = groups[gb];
                size_t ia = abeg, ib = bbeg;
                double best_here = std::numeric_limits<double>::infinity();
                size_t best_i = 0, best_j = 0;
                while (ia < aend && ib < bend) {
                    double va = doubles_ok
                                    ? group_vals[ga][ia - abeg]
                                    : w.rational_part[order[ia]].convert_to<double>();
                    double vb = (doubles_ok
                                     ? group_vals[gb][ib - bbeg]
                                     : w.rational_part[order[ib]].convert_to<double>()) +
                                shift;
                    double diff = std::abs(vb - va);
                    if (diff < best_here) {
                        best_here = diff;
                        best_i = ib;
                        best_j = ia;
                    }
                    if (va < vb) ++ia;
                    else ++ib;
                }
                consider(best_here, best_i, best_j);
            }
        }
    }

    if (!shortlist.empty()) {
        std::sort(shortlist.begin(), shortlist.end(),
                  [](const Candidate& a, const Candidate& b) { return a.approx < b.approx; });
        if (shortlist.size() > 64) shortlist.resize(64);
        HighPrec best_hp = -1;
        SeparationTerm best_term;
        for (const auto& cand : shortlist) {
            BigInt p1 = w.rational_part[order[cand.i]] - w.rational_part[order[cand.j]];
            BigInt p2 = w.tau_part[order[cand.i]] - w.tau_part[order[cand.j]];
            HighPrec val = boost::multiprecision::abs(HighPrec(p1) + tau_scaled * HighPrec(p2));
            if (best_hp < 0 || val < best_hp) {
                best_hp = val;
                best_term = SeparationTerm{p1, p2, n, w.q};
            }
        }
        rep.min_gap_witness = best_term;
        HighPrec denom = HighPrec(w.qpow_n) * HighPrec(w.scale);
        rep.min_gap = (best_hp / denom).convert_to<double>();
        HighPrec tol = HighPrec("1e-40") *
                       (HighPrec(1) + boost::multiprecision::abs(HighPrec(best_term.p1)));
        if (best_hp < tol) {
            rep.possible_rational_tau = true;
            rep.rational_candidate = Rational(-best_term.p1, best_term.p2 * w.scale);
        }
    }
    return rep;
}

std::vector<SeparationTerm> enumerate_separation_terms(
    const Rational& ratio, const std::vector<Rational>& rational_offsets, int n) {
    SymbolicWords w = build_symbolic_words(ratio, rational_offsets, n);
    const size_t total = w.rational_part.size();
    if (total > 4096)
        throw GuardError("pairwise term enumeration is for small levels only");
    std::vector<SeparationTerm> terms;
    terms.reserve(total * (total - 1) / 2);
    for (size_t i = 0; i < total; ++i)
        for (size_t j = i + 1; j < total; ++j)
            terms.push_back({w.rational_part[i] - w.rational_part[j],
                             w.tau_part[i] - w.tau_part[j], n, w.q});
    return terms;
}

// ---------------------------------------------------------------------------
// cylinder pair counting

namespace {

struct XStrip {
    double x0 = 0.0;     // left edge
    double slope = 0.0;  // d_total / c_total
    double y0 = 0.0;     // lower boundary at x0
    int first = 0;       // first symbol of the word
};

void enumerate_strips(const AffineIFS& system, int depth, int first,
                      const AffineComposite& acc, std::vector<XStrip>& out) {
    if (depth == 0) {
        out.push_back({acc.u, acc.d / acc.c, acc.v, first});
        return;
    }
    for (int s = 1; s <= system.size(); ++s)
        enumerate_strips(system, depth - 1, first == 0 ? s : first,
                         compose(acc, to_composite(system.maps[s - 1])), out);
}

// Vertically fattened strips intersect over [lo,hi] iff both "upper of one
// above lower of the other" margins are positive somewhere; each margin is
// linear in x, so endpoint evaluation decides.
bool strips_intersect(const XStrip& a, const XStrip& b, double width, double height,
                      double fat) {
    double lo = std::max(a.x0, b.x0);
    double hi = std::min(a.x0, b.x0) + width;
    if (lo > hi) return false;
    double slack = height + 2.0 * fat;
    double a_lo = a.y0 + a.slope * (lo - a.x0), a_hi = a.y0 + a.slope * (hi - a.x0);
    double b_lo = b.y0 + b.slope * (lo - b.x0), b_hi = b.y0 + b.slope * (hi - b.x0);
    bool g1 = std::max(a_lo - b_lo, a_hi - b_hi) + slack > 0.0;
    bool g2 = std::max(b_lo - a_lo, b_hi - a_hi) + slack > 0.0;
    return g1 && g2;
}

}  // namespace

PairCountReport count_intersecting_pairs(const AffineIFS& system, int level, double L) {
    system.require_valid();
    if (!system.is_diag_homogeneous())
        throw std::domain_error("pair counting needs a diagonally homogeneous system");
    if (level < 1) throw std::invalid_argument("level must be >= 1");
    if (L < 0.0) throw std::invalid_argument("L must be >= 0");
    if (std::pow(double(system.size()), 2.0 * level) > 1e8)
        throw GuardError("pair counting refuses N^(2*level) > 10^8");

    std::vector<XStrip> strips;
    strips.reserve(static_cast<size_t>(std::pow(double(system.size()), level)));
    enumerate_strips(system, level, 0, AffineComposite{}, strips);

    const double width = std::pow(system.homogeneous_c(), level);
    const double height = std::pow(system.homogeneous_b(), level);
    const double fat = L * height;

    std::sort(strips.begin(), strips.end(), [](const XStrip& a, const XStrip& b) {
        if (a.x0 != b.x0) return a.x0 < b.x0;
        if (a.y0 != b.y0) return a.y0 < b.y0;
        if (a.slope != b.slope) return a.slope < b.slope;
        return a.first < b.first;
    });

    // Equal widths make the x-overlapping candidates a contiguous window in
    // the sorted order.
    const size_t n = strips.size();
    const size_t chunk = 1024;
    const size_t n_chunks = (n + chunk - 1) / chunk;
    auto counts = par::map_chunks<std::uint64_t>(n_chunks, [&](size_t ci) {
        std::uint64_t local = 0;
        size_t begin = ci * chunk, end = std::min(n, begin + chunk);
        for (size_t i = begin; i < end; ++i) {
            for (size_t j = i + 1; j < n && strips[j].x0 <= strips[i].x0 + width; ++j) {
                if (strips[i].first == strips[j].first) continue;
                if (strips_intersect(strips[i], strips[j], width, height, fat))
                    local += 2;  // ordered pairs
            }
        }
        return local;
    });

    PairCountReport rep;
    rep.level = level;
    rep.fattening = L;
    for (auto c : counts) rep.count += c;
    if (rep.count > 0) rep.rate = std::log(double(rep.count)) / level;
    return rep;
}

}  // namespace safdim
