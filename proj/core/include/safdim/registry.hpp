#pragma once

#include "safdim/dimension.hpp"
#include "safdim/ifs.hpp"

#include <optional>
#include <string>
#include <vector>

namespace safdim {

// A pinned instance of one of the toolkit's example families. The families
// come with parameter ranges; the registry fixes concrete members so runs
// are reproducible and golden-valued.
struct ExampleEntry {
    std::string name;
    std::string summary;
    AffineIFS system;
    TheoremId expected_theorem = TheoremId::none;
    double expected_dimension = 0.0;

    // High-precision values behind coefficients tagged irrational (their
    // Number carries no exact channel). Set only for j33.
    std::optional<HighPrec> irrational_d, irrational_u;
};

const std::vector<ExampleEntry>& example_registry();
const ExampleEntry& find_example(const std::string& name);  // throws ValidationError

// The j48 family with a caller-chosen height ratio; used when sweeping b
// across the phase transition.
AffineIFS example_j48_with_b(double b);

// Re-checks every documented family constraint on the pinned instances and
// that each instance passes its theorem's checkable assumptions. Throws
// ValidationError on any failure.
void assert_registry_constraints();

}  // namespace safdim
