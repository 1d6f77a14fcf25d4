#ifndef AUTOHSIC_ERRORS_HPP
#define AUTOHSIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace autohsic {

/// Element or weight dimensions do not match the declared space.
struct ShapeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Median pairwise distance below 1e-12 (e.g. a constant series).
struct DegenerateBandwidth : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Gaussian/Laplacian kernel evaluated without a resolved bandwidth.
struct MissingBandwidth : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Effective sample size T - m below the minimum of 4.
struct TooShort : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The O(n^4) U-statistic oracle refused a block larger than 40.
struct OracleTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// GARCH filter produced a non-positive conditional variance.
struct NonPositiveVariance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// QMLE optimizer failed its convergence criterion.
struct EstimationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Residual sample variance is zero; standardization impossible.
struct DegenerateResiduals : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A recursive DGP state exceeded 1e12 (non-stationary parameterization).
struct NumericalBlowup : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace autohsic

#endif
