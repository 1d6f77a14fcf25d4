#ifndef AUTOHSIC_VERIFY_HPP
#define AUTOHSIC_VERIFY_HPP

#include <string>
#include <vector>

namespace autohsic {

struct VerificationCheck {
    std::string name;
    bool passed = false;
    std::string detail; // first failing case, or a short summary
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;
    bool all_passed() const;
};

/// End-to-end internal consistency run: the centred-estimator vs U-statistic
/// oracle grid, U-centring row/column-sum identities, kernel symmetry/PSD
/// checks, and the wild-bootstrap conditional mean-zero check. Deterministic.
VerificationReport run_verification();

} // namespace autohsic

#endif
