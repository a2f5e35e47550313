#include "safdim/estimate.hpp"

#include "safdim/errors.hpp"
#include "safdim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace safdim {

namespace {

constexpr std::size_t kChunkPoints = 1u << 16;
constexpr char kCloudMagic[8] = {'S', 'A', 'F', 'C', 'L', 'D', '0', '1'};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t chunk_seed(std::uint64_t master, std::uint64_t chunk_index) {
    return splitmix64(master ^ (0x9E3779B97F4A7C15ull * (chunk_index + 1)));
}

// Unbiased-enough fixed mapping of one engine draw to a symbol; kept explicit
// because std::uniform_int_distribution is not pinned by the standard.
int draw_symbol(std::mt19937_64& eng, int n_maps) {
    return static_cast<int>((static_cast<unsigned __int128>(eng()) * n_maps) >> 64);
}

struct Regression {
    double slope = 0.0, stderr_ = 0.0, r2 = 1.0;
};

Regression least_squares(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    Regression r;
    r.slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double res = ys[i] - my - r.slope * (xs[i] - mx);
        ss_res += res * res;
    }
    r.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;  // flat data fits exactly
    if (n > 2 && sxx > 0.0) r.stderr_ = std::sqrt(ss_res / double(n - 2) / sxx);
    return r;
}

void check_scales(std::span<const double> scales) {
    if (scales.size() < 4) throw std::invalid_argument("need at least 4 scales");
    for (double r : scales) {
        if (!(r > 0.0 && r <= 0.5))
            throw std::invalid_argument("scales must lie in (0, 1/2]");
        double k = std::log2(1.0 / r);
        if (std::abs(k - std::round(k)) > 1e-9)
            throw std::invalid_argument("scales must be powers of two (2^-k)");
    }
    for (std::size_t i = 1; i < scales.size(); ++i)
        if (!(scales[i] < scales[i - 1]))
            throw std::invalid_argument("scales must be strictly decreasing");
}

std::uint64_t cell_key(double x, double y, double inv_r) {
    auto ix = static_cast<std::uint64_t>(x * inv_r);
    auto iy = static_cast<std::uint64_t>(y * inv_r);
    return (ix << 32) | iy;
}

}  // namespace

PointCloud chaos_game(const AffineIFS& system, std::size_t n_points, std::uint64_t seed,
                      int burn_in) {
    system.require_valid();
    if (n_points < 1) throw std::invalid_argument("n_points must be >= 1");
    if (burn_in < 0) throw std::invalid_argument("burn_in must be >= 0");

    const int n_maps = system.size();
    const std::size_t n_chunks = (n_points + kChunkPoints - 1) / kChunkPoints;
    auto chunks = par::map_chunks<std::vector<Point>>(n_chunks, [&](std::size_t ci) {
        std::size_t begin = ci * kChunkPoints;
        std::size_t count = std::min(kChunkPoints, n_points - begin);
        std::mt19937_64 eng(chunk_seed(seed, ci));
        double x = 0.0, y = 0.0;
        for (int k = 0; k < burn_in; ++k) {
            const auto& m = system.maps[draw_symbol(eng, n_maps)];
            double nx = m.c.value * x + m.u.value;
            y = m.d.value * x + m.b.value * y + m.v.value;
            x = nx;
        }
        std::vector<Point> pts(count);
        for (std::size_t k = 0; k < count; ++k) {
            const auto& m = system.maps[draw_symbol(eng, n_maps)];
            double nx = m.c.value * x + m.u.value;
            y = m.d.value * x + m.b.value * y + m.v.value;
            x = nx;
            pts[k] = {x, y};
        }
        return pts;
    });

    PointCloud cloud;
    cloud.points.reserve(n_points);
    for (auto& c : chunks)
        cloud.points.insert(cloud.points.end(), c.begin(), c.end());
    cloud.seed = seed;
    cloud.burn_in = burn_in;
    cloud.generator_tag = "mt19937_64/splitmix-chunk-65536/v1";
    return cloud;
}

std::vector<double> dyadic_scales(int k_min, int k_max) {
    if (k_min < 1 || k_max <= k_min) throw std::invalid_argument("need 1 <= k_min < k_max");
    std::vector<double> scales;
    for (int k = k_min; k <= k_max; ++k) scales.push_back(std::ldexp(1.0, -k));
    return scales;
}

DimensionReport box_dimension(const PointCloud& cloud, std::span<const double> scales) {
    if (cloud.points.empty()) throw std::invalid_argument("empty point cloud");
    check_scales(scales);

    auto counts = par::map_chunks<double>(scales.size(), [&](std::size_t si) {
        double inv_r = 1.0 / scales[si];
        std::unordered_set<std::uint64_t> cells;
        cells.reserve(cloud.points.size() / 4);
        for (const Point& p : cloud.points) cells.insert(cell_key(p.x, p.y, inv_r));
        return double(cells.size());
    });

    DimensionReport rep;
    rep.method = EstimatorMethod::box;
    rep.scales.assign(scales.begin(), scales.end());
    rep.statistics = counts;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        xs.push_back(std::log(1.0 / scales[i]));
        ys.push_back(std::log(counts[i]));
    }
    Regression r = least_squares(xs, ys);
    rep.estimate = r.slope;
    rep.slope_stderr = r.stderr_;
    rep.r_squared = r.r2;
    return rep;
}

DimensionReport correlation_dimension(const PointCloud& cloud,
                                      std::span<const double> scales) {
    if (cloud.points.empty()) throw std::invalid_argument("empty point cloud");
    check_scales(scales);

    const double n = double(cloud.points.size());
    auto sums = par::map_chunks<double>(scales.size(), [&](std::size_t si) {
        double inv_r = 1.0 / scales[si];
        std::unordered_map<std::uint64_t, std::uint32_t> cells;
        cells.reserve(cloud.points.size() / 4);
        for (const Point& p : cloud.points) ++cells[cell_key(p.x, p.y, inv_r)];
        double sum = 0.0;
        for (const auto& [key, count] : cells) {
            double mu = count / n;
            sum += mu * mu;
        }
        return sum;
    });

    DimensionReport rep;
    rep.method = EstimatorMethod::correlation;
    rep.scales.assign(scales.begin(), scales.end());
    rep.statistics = sums;
    // tau(2): slope of log sum mu^2 against log r (both negative ranges).
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        xs.push_back(std::log(scales[i]));
        ys.push_back(std::log(sums[i]));
    }
    Regression r = least_squares(xs, ys);
    rep.estimate = r.slope;
    rep.slope_stderr = r.stderr_;
    rep.r_squared = r.r2;
    return rep;
}

DimensionReport slice_dimension(const PointCloud& cloud, double strip_width,
                                std::span<const double> scales) {
    if (cloud.points.empty()) throw std::invalid_argument("empty point cloud");
    check_scales(scales);
    if (!(strip_width >= scales.back()))
        throw std::invalid_argument("strip width below the finest scale");

    std::vector<double> xs_sorted;
    xs_sorted.reserve(cloud.points.size());
    for (const Point& p : cloud.points) xs_sorted.push_back(p.x);
    std::sort(xs_sorted.begin(), xs_sorted.end());
    double median_x = xs_sorted[xs_sorted.size() / 2];

    std::vector<double> ys;
    for (const Point& p : cloud.points)
        if (std::abs(p.x - median_x) <= strip_width / 2.0) ys.push_back(p.y);
    if (ys.size() < 1000)
        throw std::invalid_argument("strip too sparse: " + std::to_string(ys.size()) +
                                    " points (need >= 1000)");

    DimensionReport rep;
    rep.method = EstimatorMethod::slice;
    rep.scales.assign(scales.begin(), scales.end());
    std::vector<double> lx, ln;
    for (double r : scales) {
        double inv_r = 1.0 / r;
        std::unordered_set<std::uint64_t> cells;
        for (double y : ys) cells.insert(static_cast<std::uint64_t>(y * inv_r));
        rep.statistics.push_back(double(cells.size()));
        lx.push_back(std::log(inv_r));
        ln.push_back(std::log(double(cells.size())));
    }
    Regression r = least_squares(lx, ln);
    rep.estimate = r.slope;
    rep.slope_stderr = r.stderr_;
    rep.r_squared = r.r2;
    return rep;
}

DensityDiagnostics lq_density_diagnostics(const PointCloud& cloud, double q, int bins) {
    if (cloud.points.empty()) throw std::invalid_argument("empty point cloud");
    if (!(q > 1.0)) throw std::invalid_argument("q must exceed 1");
    if (bins < 16) throw std::invalid_argument("need at least 16 bins");

    const double n = double(cloud.points.size());
    std::vector<double> hist(bins, 0.0);
    std::vector<double> xs_sorted;
    xs_sorted.reserve(cloud.points.size());
    for (const Point& p : cloud.points) {
        int j = std::min(bins - 1, static_cast<int>(p.x * bins));
        hist[j] += 1.0;
        xs_sorted.push_back(p.x);
    }
    std::sort(xs_sorted.begin(), xs_sorted.end());

    DensityDiagnostics diag;
    diag.q = q;
    diag.bins = bins;
    double cq = 0.0;
    for (double h : hist) {
        double phi = (h / n) * bins;  // histogram density estimate
        cq += std::pow(phi, q) / bins;
    }
    diag.c_q_estimate = cq;

    // Holder bound stress test on deterministic pseudo-random subintervals.
    std::mt19937_64 eng(0x5AFD1A60D1A60ull ^ cloud.seed);
    auto unit = [&] { return std::ldexp(double(eng() >> 11), -53); };
    double root = std::pow(cq, 1.0 / q);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        double a = unit(), b = unit();
        if (a > b) std::swap(a, b);
        if (b - a < 1.0 / bins) continue;
        auto lo = std::lower_bound(xs_sorted.begin(), xs_sorted.end(), a);
        auto hi = std::upper_bound(xs_sorted.begin(), xs_sorted.end(), b);
        double mass = double(hi - lo) / n;
        double bound = root * std::pow(b - a, 1.0 - 1.0 / q);
        if (bound > 0.0) worst = std::max(worst, mass / bound);
    }
    diag.worst_interval_ratio = worst;
    return diag;
}

void write_cloud_binary(const PointCloud& cloud, std::ostream& out) {
    out.write(kCloudMagic, sizeof kCloudMagic);
    static_assert(sizeof(Point) == 16);
    out.write(reinterpret_cast<const char*>(cloud.points.data()),
              std::streamsize(cloud.points.size() * sizeof(Point)));
}

PointCloud read_cloud_binary(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kCloudMagic, sizeof magic) != 0)
        throw std::invalid_argument("not a point-cloud file (bad magic)");
    PointCloud cloud;
    cloud.generator_tag = "file";
    Point p;
    while (in.read(reinterpret_cast<char*>(&p), sizeof p)) cloud.points.push_back(p);
    return cloud;
}

void write_cloud_csv(const PointCloud& cloud, std::ostream& out) {
    out << "x,y\n";
    char buf[64];
    for (const Point& p : cloud.points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.y);
        out << buf;
    }
}

}  // namespace safdim
