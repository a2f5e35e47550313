#pragma once

#include "safdim/ifs.hpp"
#include "safdim/projective.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace safdim {

// Planar map paired with its action on the projective line; the lift acts on
// (x, y, z) as (S_i(x,y), f_i(z)).
struct Lifted3DMap {
    TriangularMap planar;
    ScalarMap axis;
};

struct Lifted3DIFS {
    std::vector<Lifted3DMap> maps;
    Interval axis_interval;  // invariant interval of the projective action
};

// Requires c_i > b_i for every map (the projective action must contract).
Lifted3DIFS lift_3d(const AffineIFS& system);

// Open box (eps, 1-eps)^2 x axis interval used in the separation search.
struct SspBox {
    double eps = 0.0;
    Interval axis;
};

struct SspCertificate {
    int level = 0;
    double margin = 0.0;  // minimal pairwise gap between level-n images, max metric
    SspBox box;
};

struct SspSearchResult {
    std::optional<SspCertificate> certificate;  // empty = Unknown, never a refutation
    std::vector<std::pair<int, double>> level_margins;  // min pair distance per level tried
    std::string note;  // why the search stopped early, when it did
};

// Searches n = 1..max_level for a level at which all N^n images of the box
// under the lifted system are pairwise disjoint with positive margin. Images
// are parallelogram x interval slabs built by exact corner arithmetic; the
// pair distance is max(planar L-inf distance, axis gap). A level-1 check
// that every map sends the box into itself gates the search. Refuses
// N^max_level > 10^7.
SspSearchResult ssp_certificate(const AffineIFS& system, int max_level, double eps);

struct SspVerification {
    bool box_invariant = false;
    bool disjoint = false;
    double margin = 0.0;
};

// Independent re-enumeration (index odometer + from-scratch composition) of
// the level-n images; used to confirm a certificate.
SspVerification verify_ssp_certificate(const AffineIFS& system, int level, double eps);

struct DeltaResult {
    bool is_infinite = false;  // every distinct pair differs in derivative
    Rational gap;              // valid when !is_infinite; zero means exact overlap
};

// Minimal gap |psi_i(0) - psi_j(0)| over distinct equal-derivative word
// pairs of length n, in exact rational arithmetic. Needs every coefficient
// exact; throws std::domain_error otherwise (use delta_n_symbolic). Guarded
// against enumeration blow-up.
DeltaResult delta_n_exact(const ScalarIFS& s, int n);

// One pairwise difference written as (p1 + tau*p2) / (q^level * scale); in
// the normalized setting (integer offsets) scale = 1 and the magnitudes obey
// |p1|, |p2| <= (2q)^level.
struct SeparationTerm {
    BigInt p1;
    BigInt p2;
    int level = 0;
    BigInt q;
};

struct SymbolicDeltaReport {
    int level = 0;
    Rational ratio;          // p/q
    BigInt q;                // denominator of the ratio
    BigInt offset_scale;     // lcm of the rational offset denominators
    BigInt n_words = 0;

    // p2 = 0 channel: exact, certifies gap >= 1/(q^n * scale) whenever p1 != 0.
    std::optional<Rational> certified_floor;  // min |p1| / (q^n * scale)
    BigInt certified_min_abs_p1 = 0;          // 0 when no p2 = 0 pair exists

    // p2 != 0 channel: high-precision evidence only, never a certificate.
    double min_gap = 0.0;  // min |p1 + tau p2| / (q^n * scale) over p2 != 0 pairs
    std::optional<SeparationTerm> min_gap_witness;
    BigInt smallest_nonzero_abs_p2 = 0;

    BigInt max_abs_p1 = 0, max_abs_p2 = 0;  // over all pairs
    BigInt term_bound;                      // (2q)^n

    bool exact_collision = false;       // two distinct words share the same value
    bool possible_rational_tau = false; // some p2 != 0 pair evaluated to ~0
    std::optional<Rational> rational_candidate;  // -p1/(p2*scale) for that pair
};

// Separation structure of {x -> r x + o_1, ..., x -> r x + o_m, x -> r x + tau}
// at level n, where r = p/q and o_i are rational but tau is irrational.
// Differences whose tau coefficient vanishes are certified exactly; the rest
// are evaluated with a >=128-bit mantissa and reported as evidence.
SymbolicDeltaReport delta_n_symbolic(const Rational& ratio,
                                     const std::vector<Rational>& rational_offsets,
                                     const HighPrec& tau, int n);

// Every pairwise difference as a SeparationTerm; for small n only (the pair
// count is quadratic in the word count).
std::vector<SeparationTerm> enumerate_separation_terms(
    const Rational& ratio, const std::vector<Rational>& rational_offsets, int n);

struct PairCountReport {
    int level = 0;
    double fattening = 0.0;            // L
    std::uint64_t count = 0;           // ordered pairs, distinct first symbols
    std::optional<double> rate;        // (1/level) * log(count) when count > 0
};

// Counts ordered level-l word pairs with distinct first symbols whose
// vertically L*b^l-fattened cylinder parallelograms intersect. Homogeneous
// systems only; the decision per pair is a closed-form linear check at the
// x-overlap endpoints, and candidate pairs are pruned by an x-interval sweep.
// Refuses N^(2l) > 10^8.
PairCountReport count_intersecting_pairs(const AffineIFS& system, int level, double L);

}  // namespace safdim
