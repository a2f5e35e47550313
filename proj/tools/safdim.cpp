// Command-line front end: dimension formulas, attractor estimators,
// separation checks and phase-transition sweeps for planar triangular
// self-affine systems.

#include "safdim/dimension.hpp"
#include "safdim/errors.hpp"
#include "safdim/estimate.hpp"
#include "safdim/io.hpp"
#include "safdim/parallel.hpp"
#include "safdim/projective.hpp"
#include "safdim/registry.hpp"
#include "safdim/separation.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace safdim;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNoTheorem = 3;
constexpr int kExitGuard = 4;

std::string fmt(double x, const char* spec = "%.12g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

std::string fmt17(double x) { return fmt(x, "%.17g"); }

struct CommonOpts {
    std::string system_path;
    std::string example_name;
    std::string out_path;
    unsigned threads = 0;
};

void add_system_flags(CLI::App* cmd, CommonOpts& opts) {
    auto* sys = cmd->add_option("--system", opts.system_path, "system description file");
    auto* ex = cmd->add_option("--example", opts.example_name,
                               "registered example: j49, j29, j48, j33");
    sys->excludes(ex);
}

void add_out_thread_flags(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--out", opts.out_path, "write the payload to this file");
    cmd->add_option("--threads", opts.threads, "cap worker threads (results unchanged)");
}

const ExampleEntry* resolve_example(const CommonOpts& opts) {
    if (opts.example_name.empty()) return nullptr;
    assert_registry_constraints();  // registry corruption fails fast
    return &find_example(opts.example_name);
}

AffineIFS resolve_system(const CommonOpts& opts) {
    if (!opts.example_name.empty()) return resolve_example(opts)->system;
    if (!opts.system_path.empty()) {
        AffineIFS s = load_system_file(opts.system_path);
        return s;
    }
    throw ValidationError({"one of --system or --example is required"});
}

void apply_threads(const CommonOpts& opts) {
    if (opts.threads > 0) par::set_max_workers(opts.threads);
}

// Payload goes to --out when given, else to stdout.
void emit_payload(const CommonOpts& opts, const std::string& payload) {
    if (opts.out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) throw ValidationError({"cannot write output file: " + opts.out_path});
    out << payload;
}

std::string axis_name(Axis a) {
    switch (a) {
        case Axis::x: return "x";
        case Axis::y: return "y";
        case Axis::tie: return "tie";
    }
    return "?";
}

std::pair<int, int> parse_scale_range(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ValidationError({"--scales expects k_min:k_max, e.g. 4:10"});
    try {
        int kmin = std::stoi(text.substr(0, colon));
        int kmax = std::stoi(text.substr(colon + 1));
        return {kmin, kmax};
    } catch (const std::exception&) {
        throw ValidationError({"--scales expects integers k_min:k_max"});
    }
}

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(parse_rational(item));
    }
    if (out.empty()) throw ValidationError({"empty offsets list"});
    return out;
}

// ---------------------------------------------------------------------------
// dim

int cmd_dim(const CommonOpts& opts) {
    AffineIFS system = resolve_system(opts);
    system.require_valid();
    AffinityResult aff = affinity_dimension(system);
    TheoremVerdict verdict = theorem_dimension(system);

    std::ostringstream out;
    out << "system: " << (system.label.empty() ? "(unlabeled)" : system.label)
        << "  N=" << system.size() << "\n";
    if (system.is_diag_homogeneous()) {
        out << "homogeneous: yes  c=" << fmt(system.homogeneous_c())
            << "  b=" << fmt(system.homogeneous_b()) << "\n";
    } else {
        out << "homogeneous: no\n";
    }
    out << "similarity dimensions: s_x=" << fmt(aff.s_x) << "  s_y=" << fmt(aff.s_y)
        << "  (clamped: " << fmt(aff.s_hat_x) << ", " << fmt(aff.s_hat_y) << ")\n";
    out << "moran solutions: d_x=" << fmt(aff.d_x) << "  d_y=" << fmt(aff.d_y) << "\n";
    out << "affinity dimension: " << fmt(aff.dim_aff)
        << "  dominant: " << axis_name(aff.dominant) << "\n";
    out << "theorem: " << theorem_name(verdict.theorem) << "\n";
    for (const auto& chk : verdict.checked)
        out << "  [" << (chk.passed ? "pass" : "fail") << "] " << chk.name << "  ("
            << chk.detail << ")\n";
    for (const auto& u : verdict.unverifiable)
        out << "  [unverifiable here] " << u << "\n";
    if (verdict.value) {
        out << "hausdorff dimension (theorem value): " << fmt(*verdict.value) << "\n";
        out << "caveat: the value holds outside known zero-measure exceptional parameter\n"
               "        sets, and assumes the unverifiable hypotheses above; gather\n"
               "        evidence with `check --kind ssp|delta|pairs|density`.\n";
    } else {
        out << "no theorem applies to this system\n";
    }
    emit_payload(opts, out.str());
    return verdict.value ? kExitOk : kExitNoTheorem;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateOpts {
    std::string method = "box";
    std::size_t points = 200000;
    std::uint64_t seed = 1;
    int burn_in = 64;
    std::string scales = "4:10";
    double strip_width = 0.02;
};

int cmd_estimate(const CommonOpts& opts, const EstimateOpts& eopts,
                 const std::string& cloud_out) {
    AffineIFS system = resolve_system(opts);
    system.require_valid();
    if (eopts.points < 1) throw ValidationError({"--points must be >= 1"});
    auto [kmin, kmax] = parse_scale_range(eopts.scales);
    std::vector<double> scales = dyadic_scales(kmin, kmax);

    PointCloud cloud = chaos_game(system, eopts.points, eopts.seed, eopts.burn_in);
    if (!cloud_out.empty()) {
        std::ofstream cf(cloud_out, std::ios::binary);
        if (!cf) throw ValidationError({"cannot write cloud file: " + cloud_out});
        if (cloud_out.size() >= 4 && cloud_out.substr(cloud_out.size() - 4) == ".csv")
            write_cloud_csv(cloud, cf);
        else
            write_cloud_binary(cloud, cf);
    }

    DimensionReport rep;
    if (eopts.method == "box") rep = box_dimension(cloud, scales);
    else if (eopts.method == "corr") rep = correlation_dimension(cloud, scales);
    else if (eopts.method == "slice") rep = slice_dimension(cloud, eopts.strip_width, scales);
    else throw ValidationError({"--method must be box, corr or slice"});

    std::ostringstream csv;
    csv << "scale,statistic,log_scale,log_statistic\n";
    for (std::size_t i = 0; i < rep.scales.size(); ++i)
        csv << fmt17(rep.scales[i]) << "," << fmt17(rep.statistics[i]) << ","
            << fmt17(std::log(rep.scales[i])) << "," << fmt17(std::log(rep.statistics[i]))
            << "\n";
    emit_payload(opts, csv.str());

    std::cout << "summary: method=" << eopts.method << " points=" << eopts.points
              << " seed=" << eopts.seed << " burn_in=" << eopts.burn_in
              << " scales=" << eopts.scales << " estimate=" << fmt(rep.estimate)
              << " stderr=" << fmt(rep.slope_stderr) << " r2=" << fmt(rep.r_squared)
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// check

struct CheckOpts {
    std::string kind;
    int max_level = 8;
    double eps = 0.01;
    int n = 5;
    int level = 8;
    double fattening = 1.0;
    std::string ratio_text;
    std::string offsets_text;
    std::string tau_text;
    double q = 2.0;
    int bins = 256;
    std::size_t points = 200000;
    std::uint64_t seed = 1;
};

int check_ssp(const CommonOpts& opts, const CheckOpts& copts) {
    AffineIFS system = resolve_system(opts);
    std::ostringstream out;
    out << "ssp search: eps=" << fmt(copts.eps) << " max_level=" << copts.max_level << "\n";
    SspSearchResult result = ssp_certificate(system, copts.max_level, copts.eps);
    for (const auto& [level, margin] : result.level_margins)
        out << "level " << level << ": min pairwise distance " << fmt(margin) << "\n";
    if (!result.note.empty()) out << "note: " << result.note << "\n";
    if (result.certificate) {
        const auto& cert = *result.certificate;
        out << "certificate: level=" << cert.level << " margin=" << fmt(cert.margin)
            << " box=(" << fmt(cert.box.eps) << "," << fmt(1.0 - cert.box.eps) << ")^2 x ["
            << fmt(cert.box.axis.lo) << "," << fmt(cert.box.axis.hi) << "]\n";
        SspVerification v = verify_ssp_certificate(system, cert.level, cert.box.eps);
        out << "re-verification: margin=" << fmt(v.margin)
            << " disjoint=" << (v.disjoint ? "yes" : "no")
            << " box_invariant=" << (v.box_invariant ? "yes" : "no")
            << " |margin delta|=" << fmt(std::abs(v.margin - cert.margin)) << "\n";
        out << "transversality: implied by the strong separation of the lifted system\n";
    } else {
        out << "result: unknown after level " << copts.max_level
            << " (not a refutation; separation may hold with another open set)\n";
    }
    emit_payload(opts, out.str());
    return kExitOk;
}

int check_delta(const CommonOpts& opts, const CheckOpts& copts) {
    std::ostringstream out;

    // Scalar input channel: explicit ratio/offsets (+ optional tau).
    if (!copts.ratio_text.empty()) {
        Rational ratio = parse_rational(copts.ratio_text);
        if (copts.offsets_text.empty())
            throw ValidationError({"--offsets is required with --ratio"});
        std::vector<Rational> offsets = parse_rational_list(copts.offsets_text);
        if (copts.tau_text.empty()) {
            ScalarIFS s;
            s.kind = ScalarKind::horizontal_projection;
            for (const auto& o : offsets)
                s.maps.push_back({rational_to_double(ratio), rational_to_double(o),
                                  ratio, o});
            DeltaResult delta = delta_n_exact(s, copts.n);
            out << "delta check: ratio=" << rational_fraction_string(ratio) << " offsets=["
                << copts.offsets_text << "] n=" << copts.n << "\n";
            if (delta.is_infinite)
                out << "delta_" << copts.n << " = +inf (all pairs differ in derivative)\n";
            else
                out << "delta_" << copts.n << " = " << rational_fraction_string(delta.gap)
                    << " (~" << fmt(rational_to_double(delta.gap)) << ")\n";
            emit_payload(opts, out.str());
            return kExitOk;
        }
        HighPrec tau(copts.tau_text);
        SymbolicDeltaReport rep = delta_n_symbolic(ratio, offsets, tau, copts.n);
        out << "delta check (symbolic): ratio=" << rational_fraction_string(ratio)
            << " offsets=[" << copts.offsets_text << "] tau~"
            << fmt(tau.convert_to<double>(), "%.17g") << " n=" << copts.n << "\n";
        out << "words=" << rep.n_words.str() << "\n";
        if (rep.certified_floor)
            out << "certified floor (p2=0 channel): "
                << rational_fraction_string(*rep.certified_floor)
                << "  (min |p1| = " << rep.certified_min_abs_p1.str() << ")\n";
        else
            out << "certified floor (p2=0 channel): none (no p2=0 pair)\n";
        out << "float min gap over p2!=0 pairs: " << fmt(rep.min_gap);
        if (rep.min_gap_witness)
            out << "  witness p1=" << rep.min_gap_witness->p1.str()
                << " p2=" << rep.min_gap_witness->p2.str();
        out << "\n";
        out << "max |p1|=" << rep.max_abs_p1.str() << "  max |p2|=" << rep.max_abs_p2.str()
            << "  bound (2q)^n=" << rep.term_bound.str() << "  within bound: "
            << (rep.max_abs_p1 <= rep.term_bound && rep.max_abs_p2 <= rep.term_bound
                    ? "yes" : "no")
            << "\n";
        out << "tau possibly rational: " << (rep.possible_rational_tau ? "yes" : "no");
        if (rep.rational_candidate)
            out << "  candidate " << rational_fraction_string(*rep.rational_candidate);
        out << "\n";
        if (rep.exact_collision)
            out << "warning: two distinct words share a value (exact overlap)\n";
        emit_payload(opts, out.str());
        return kExitOk;
    }

    // System channel: the horizontal projection carries the separation data.
    const ExampleEntry* entry = resolve_example(opts);
    AffineIFS system = resolve_system(opts);
    system.require_valid();
    ScalarIFS h = derive_scalar_ifs(system, ScalarKind::horizontal_projection);
    if (h.all_exact()) {
        DeltaResult delta = delta_n_exact(h, copts.n);
        out << "delta check: horizontal projection of "
            << (system.label.empty() ? "system" : system.label) << ", n=" << copts.n << "\n";
        if (delta.is_infinite)
            out << "delta_" << copts.n << " = +inf (all pairs differ in derivative)\n";
        else
            out << "delta_" << copts.n << " = " << rational_fraction_string(delta.gap)
                << " (~" << fmt(rational_to_double(delta.gap)) << ")\n";
        emit_payload(opts, out.str());
        return kExitOk;
    }
    // One irrational translation: report the symbolic separation structure.
    if (entry && entry->irrational_u && system.is_diag_homogeneous()) {
        std::vector<Rational> offsets;
        for (const auto& m : system.maps)
            if (m.u.exact) offsets.push_back(*m.u.exact);
        if (offsets.size() + 1 == system.maps.size()) {
            Rational ratio = *system.maps[0].c.exact;
            SymbolicDeltaReport rep =
                delta_n_symbolic(ratio, offsets, *entry->irrational_u, copts.n);
            out << "delta check (symbolic horizontal projection of " << entry->name
                << "): n=" << copts.n << "\n";
            if (rep.certified_floor)
                out << "certified floor (p2=0 channel): "
                    << rational_fraction_string(*rep.certified_floor) << "\n";
            out << "float min gap over p2!=0 pairs: " << fmt(rep.min_gap) << "\n";
            out << "tau possibly rational: "
                << (rep.possible_rational_tau ? "yes" : "no") << "\n";
            emit_payload(opts, out.str());
            return kExitOk;
        }
    }
    throw ValidationError({"delta check needs exact coefficients, or a homogeneous "
                           "system with exactly one irrational translation"});
}

int check_pairs(const CommonOpts& opts, const CheckOpts& copts) {
    AffineIFS system = resolve_system(opts);
    PairCountReport rep = count_intersecting_pairs(system, copts.level, copts.fattening);
    std::ostringstream out;
    out << "pair count: level=" << rep.level << " L=" << fmt(rep.fattening) << "\n";
    out << "B = " << rep.count << "  (even: " << (rep.count % 2 == 0 ? "yes" : "no")
        << ")\n";
    if (rep.rate) {
        double bound = std::log(double(system.size() * system.size()) *
                                system.homogeneous_c() * system.homogeneous_c());
        out << "rate (1/level) log B = " << fmt(*rep.rate) << "\n";
        out << "growth reference log(N^2 c^2) = " << fmt(bound) << "\n";
    } else {
        out << "rate: undefined (no intersecting pairs)\n";
    }
    emit_payload(opts, out.str());
    return kExitOk;
}

int check_density(const CommonOpts& opts, const CheckOpts& copts) {
    AffineIFS system = resolve_system(opts);
    system.require_valid();
    PointCloud cloud = chaos_game(system, copts.points, copts.seed);
    std::ostringstream out;
    out << "density diagnostics: q=" << fmt(copts.q) << " bins=" << copts.bins
        << " points=" << copts.points << " seed=" << copts.seed << "\n";
    int coarse = std::max(16, copts.bins / 4);
    DensityDiagnostics lo = lq_density_diagnostics(cloud, copts.q, coarse);
    DensityDiagnostics mid = lq_density_diagnostics(cloud, copts.q, copts.bins);
    DensityDiagnostics hi = lq_density_diagnostics(cloud, copts.q, copts.bins * 4);
    out << "C_q estimate: bins=" << coarse << " -> " << fmt(lo.c_q_estimate)
        << ", bins=" << copts.bins << " -> " << fmt(mid.c_q_estimate)
        << ", bins=" << copts.bins * 4 << " -> " << fmt(hi.c_q_estimate) << "\n";
    out << "worst interval ratio (bins=" << copts.bins << "): "
        << fmt(mid.worst_interval_ratio) << "\n";
    bool growing = hi.c_q_estimate > 1.5 * lo.c_q_estimate;
    out << "refinement trend: " << (growing ? "growing (marginal may be singular)"
                                            : "bounded (L^q density plausible)")
        << "\n";
    emit_payload(opts, out.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOpts {
    double c = 0.0;
    double b_min = 0.0;
    double b_max = 0.0;
    int steps = 50;
};

int cmd_sweep(const CommonOpts& opts, const SweepOpts& sopts) {
    if (sopts.steps < 1) throw ValidationError({"--steps must be >= 1"});
    double b_max = sopts.b_max > 0.0 ? sopts.b_max : sopts.c / 2.0;
    double b_min = sopts.b_min > 0.0 ? sopts.b_min : b_max / sopts.steps;
    std::vector<double> grid;
    if (sopts.steps == 1) {
        grid.push_back(b_min);
    } else {
        for (int i = 0; i < sopts.steps; ++i)
            grid.push_back(b_min + (b_max - b_min) * i / (sopts.steps - 1));
    }
    PhaseProfile profile = phase_transition_profile(sopts.c, grid);
    std::ostringstream csv;
    csv << "b,dim,breakpoint\n";
    for (const auto& [b, dim] : profile.points)
        csv << fmt17(b) << "," << fmt17(dim) << "," << fmt17(profile.breakpoint) << "\n";
    emit_payload(opts, csv.str());
    std::cout << "summary: c=" << fmt(sopts.c) << " breakpoint=" << fmt(profile.breakpoint)
              << " rows=" << profile.points.size() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"safdim: dimension toolkit for planar triangular self-affine sets"};
    app.require_subcommand(1);

    CommonOpts dim_common;
    auto* dim = app.add_subcommand("dim", "affinity dimension and theorem verdict");
    add_system_flags(dim, dim_common);
    add_out_thread_flags(dim, dim_common);

    CommonOpts est_common;
    EstimateOpts est_opts;
    std::string cloud_out;
    auto* est = app.add_subcommand("estimate", "numerical dimension estimators");
    add_system_flags(est, est_common);
    add_out_thread_flags(est, est_common);
    est->add_option("--method", est_opts.method, "box, corr or slice")->required();
    est->add_option("--points", est_opts.points, "chaos-game sample size");
    est->add_option("--seed", est_opts.seed, "master seed");
    est->add_option("--burn-in", est_opts.burn_in, "discarded leading iterates per chunk");
    est->add_option("--scales", est_opts.scales, "dyadic scale range k_min:k_max");
    est->add_option("--strip-width", est_opts.strip_width, "strip width for --method slice");
    est->add_option("--cloud-out", cloud_out, "also dump the cloud (.csv or binary)");

    CommonOpts chk_common;
    CheckOpts chk_opts;
    auto* chk = app.add_subcommand("check", "separation and density evidence");
    add_system_flags(chk, chk_common);
    add_out_thread_flags(chk, chk_common);
    chk->add_option("--kind", chk_opts.kind, "ssp, delta, pairs or density")->required();
    chk->add_option("--max-level", chk_opts.max_level, "deepest level for the ssp search");
    chk->add_option("--eps", chk_opts.eps, "box shrink for the ssp search");
    chk->add_option("--n", chk_opts.n, "word length for delta checks");
    chk->add_option("--level", chk_opts.level, "word length for pair counting");
    chk->add_option("--L", chk_opts.fattening, "vertical fattening multiple for pairs");
    chk->add_option("--ratio", chk_opts.ratio_text, "scalar ratio (delta), e.g. 1/2");
    chk->add_option("--offsets", chk_opts.offsets_text,
                    "comma-separated rational offsets (delta)");
    chk->add_option("--tau", chk_opts.tau_text,
                    "one irrational offset, as a high-precision decimal (delta)");
    chk->add_option("--q", chk_opts.q, "moment order for density diagnostics");
    chk->add_option("--bins", chk_opts.bins, "histogram bins for density diagnostics");
    chk->add_option("--points", chk_opts.points, "sample size for density diagnostics");
    chk->add_option("--seed", chk_opts.seed, "seed for density diagnostics");

    CommonOpts swp_common;
    SweepOpts swp_opts;
    auto* swp = app.add_subcommand("sweep", "phase-transition profile over b");
    add_out_thread_flags(swp, swp_common);
    swp->add_option("--c", swp_opts.c, "horizontal contraction, in (1/sqrt(3), 1)")
        ->required();
    swp->add_option("--b-min", swp_opts.b_min, "lowest b (default (c/2)/steps)");
    swp->add_option("--b-max", swp_opts.b_max, "highest b (default c/2)");
    swp->add_option("--steps", swp_opts.steps, "number of grid points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (dim->parsed()) {
            apply_threads(dim_common);
            return cmd_dim(dim_common);
        }
        if (est->parsed()) {
            apply_threads(est_common);
            return cmd_estimate(est_common, est_opts, cloud_out);
        }
        if (chk->parsed()) {
            apply_threads(chk_common);
            if (chk_opts.kind == "ssp") return check_ssp(chk_common, chk_opts);
            if (chk_opts.kind == "delta") return check_delta(chk_common, chk_opts);
            if (chk_opts.kind == "pairs") return check_pairs(chk_common, chk_opts);
            if (chk_opts.kind == "density") return check_density(chk_common, chk_opts);
            throw ValidationError({"--kind must be ssp, delta, pairs or density"});
        }
        if (swp->parsed()) {
            apply_threads(swp_common);
            return cmd_sweep(swp_common, swp_opts);
        }
    } catch (const GuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error at byte " << e.position() << ": " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
