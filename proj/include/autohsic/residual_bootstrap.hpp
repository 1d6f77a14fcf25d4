#ifndef AUTOHSIC_RESIDUAL_BOOTSTRAP_HPP
#define AUTOHSIC_RESIDUAL_BOOTSTRAP_HPP

#include "autohsic/garch.hpp"
#include "autohsic/wild_bootstrap.hpp"

namespace autohsic {

struct DiagnosticReport {
    std::string schema = "autohsic-diagnostic/1";
    std::uint64_t seed = 0;
    int sample_size = 0;
    int bootstrap_replications = 0;
    double alpha = 0.05;
    int max_lag = 0;
    std::string model;
    std::vector<double> fitted_params;
    std::string kernel_k;
    std::string kernel_l;
    std::vector<StatTestResult> lags; // residual statistics, m = 1..M
    StatTestResult portmanteau;
    int replicate_retries = 0; // refits that needed a second resample
};

/// Simulation burn-in used when regenerating bootstrap series.
inline constexpr int kResidualBootstrapBurnIn = 200;

/// Residual-bootstrap diagnostic test: fits the model, computes residual
/// AutoHSIC statistics for lags 1..M, then for each replicate resamples
/// standardized residuals, simulates a bootstrap series from the fitted
/// parameters, refits, and recomputes the statistics on the refit residuals.
/// A replicate whose refit fails is retried once with a fresh resample; a
/// second failure aborts with EstimationFailed. Deterministic given
/// cfg.master_seed for any thread count.
DiagnosticReport residual_bootstrap_test(const ObjectSeries& series, const CausalModel& model,
                                         const KernelSpec& k_spec, const KernelSpec& l_spec,
                                         int max_lag, const BootstrapConfig& cfg);

/// Residual statistics of one series under a model: per-lag V-hat values for
/// m = 1..M (unscaled). Exposed for the experiment harness, which evaluates
/// several kernels against the same refit.
std::vector<double> residual_lag_statistics(const ObjectSeries& residuals,
                                            const KernelSpec& k_spec, const KernelSpec& l_spec,
                                            int max_lag);

} // namespace autohsic

#endif
