#pragma once
#include <stdexcept>
#include <string>

namespace heunite {

// Base for all library errors. Two exit-code families for the CLI:
// validation (bad inputs, unsupported parameter regions) and numerical
// (loss of precision, non-convergence, failed cross-checks).
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct validation_error : error {
    using error::error;
};
struct numerical_error : error {
    using error::error;
};

// validation family
struct domain_error : validation_error {
    using validation_error::validation_error;
};
struct range_error : validation_error {
    using validation_error::validation_error;
};
struct pole_error : validation_error {
    using validation_error::validation_error;
};
// gamma = 0, -1, -2, ... : power-series solution in z undefined
struct indicial_error : validation_error {
    using validation_error::validation_error;
};
struct singularity_error : validation_error {
    using validation_error::validation_error;
};
// R_n = 0 for some n: three-term recurrence cannot be advanced
struct resonance_error : validation_error {
    using validation_error::validation_error;
};
// square root of a negative quantity requested by a reduction branch
struct complex_branch_error : validation_error {
    using validation_error::validation_error;
};
// alpha2 = 0 while the cubic-coefficient constraint is nonzero
struct degenerate_error : validation_error {
    using validation_error::validation_error;
};

// numerical family
struct precision_loss_error : numerical_error {
    using numerical_error::numerical_error;
};
struct convergence_error : numerical_error {
    using numerical_error::numerical_error;
};
struct truncation_error : numerical_error {
    using numerical_error::numerical_error;
};
struct oracle_mismatch_error : numerical_error {
    using numerical_error::numerical_error;
};

} // namespace heunite
