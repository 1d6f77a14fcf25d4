#ifndef AUTOHSIC_WILD_BOOTSTRAP_HPP
#define AUTOHSIC_WILD_BOOTSTRAP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "autohsic/rng.hpp"
#include "autohsic/statistics.hpp"

namespace autohsic {

enum class WeightFamily { Rademacher };

struct BootstrapConfig {
    int replications = 500;          // B
    double alpha = 0.05;
    std::uint64_t master_seed = 0;
    WeightFamily weights = WeightFamily::Rademacher;
    int threads = 1;                 // 0 = hardware concurrency
    bool keep_replicates = true;     // store the scaled replicate arrays in the report

    void validate() const;
};

/// One tested statistic: the observed value on the T-scaled axis, its B
/// bootstrap replicates, the empirical critical value and the plus-one
/// p-value. reject is the strict quantile rule of the bootstrap algorithm.
struct StatTestResult {
    int lag = 0;                // lag m, or max lag M for the portmanteau entry
    double v = 0.0;             // unscaled statistic
    double statistic = 0.0;     // T * v
    std::vector<double> bootstrap; // B values of T * V* (empty if not kept)
    double critical_value = 0.0;
    double p_value = 1.0;
    bool reject = false;
};

struct TestReport {
    std::string schema = "autohsic-report/1";
    std::uint64_t seed = 0;
    int sample_size = 0;
    int bootstrap_replications = 0;
    double alpha = 0.05;
    int max_lag = 0;
    std::string kernel_k;
    std::string kernel_l;
    std::optional<double> bandwidth_k; // resolved; absent for BrownianDistance
    std::optional<double> bandwidth_l;
    std::vector<StatTestResult> lags;  // m = 1..M
    StatTestResult portmanteau;        // lag field holds M
};

/// The weight stream for bootstrap replicate b at lag m.
Rng weight_stream(std::uint64_t master_seed, int b, int m);

/// n i.i.d. weights from the configured family (Rademacher: +-1 equiprobable).
std::vector<double> draw_weights(Rng& stream, int n, WeightFamily family = WeightFamily::Rademacher);

/// One doubly-weighted replicate on the V scale:
/// sum_{i != j} w_i a_ij b_ij w_j / (n (n-3)).
double bootstrap_statistic_once(const CenteredGramPair& pair, const std::vector<double>& weights);

/// Empirical upper quantile: the order statistic at index ceil(level * B)
/// (1-based, ties to the higher index).
double empirical_quantile_upper(std::vector<double> values, double level);

/// Plus-one bootstrap p-value: (1 + #{replicates >= observed}) / (B + 1).
double plus_one_p_value(const std::vector<double>& replicates, double observed);

/// Runs the full wild-bootstrap test: observed statistics for lags 1..M and
/// the portmanteau sum, B doubly-weighted replicates each, critical values
/// and p-values. Deterministic given cfg.master_seed, for any thread count.
TestReport wild_bootstrap_test(const ObjectSeries& series, const KernelSpec& k_spec,
                               const KernelSpec& l_spec, int max_lag, const BootstrapConfig& cfg);

} // namespace autohsic

#endif
