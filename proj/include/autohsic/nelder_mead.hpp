#ifndef AUTOHSIC_NELDER_MEAD_HPP
#define AUTOHSIC_NELDER_MEAD_HPP

#include <functional>
#include <vector>

namespace autohsic {

struct NelderMeadOptions {
    double relative_simplex_tol = 1e-8;
    int max_evaluations = 5000;
    double initial_step = 0.25;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Minimizes fn by the Nelder-Mead simplex method. Converged when the maximum
/// vertex distance from the best vertex, relative to max(1, |best|), falls
/// below relative_simplex_tol.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                             const std::vector<double>& start, const NelderMeadOptions& opts = {});

} // namespace autohsic

#endif
