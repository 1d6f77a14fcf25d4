#ifndef AUTOHSIC_RUN_CONFIG_HPP
#define AUTOHSIC_RUN_CONFIG_HPP

#include <optional>
#include <string>

#include "autohsic/simulation.hpp"

namespace autohsic {

/// Invalid or unknown configuration input; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Key-value document for `test` and `diagnose`. Parsed from JSON with
/// unknown keys rejected and every value range-checked before any
/// computation starts.
struct TestRunConfig {
    KernelSpec kernel_k = KernelSpec::gaussian();
    KernelSpec kernel_l = KernelSpec::gaussian();
    int max_lag = 3;
    int bootstrap = 500;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    int threads = 0;
    bool include_replicates = false;
    std::string model = "garch11"; // diagnose only
};

/// Document for `simulate`: either a preset name or an explicit DGP cell.
struct SimulateRunConfig {
    std::optional<std::string> preset;
    std::optional<DgpSpec> dgp;
    std::optional<int> T;
    std::optional<int> replications;
    std::optional<int> bootstrap;
    double alpha = 0.05;
    std::vector<int> single_lags{1, 3};
    std::vector<int> portmanteau_lags{3, 6};
    std::vector<KernelPairSpec> kernels;
    std::uint64_t seed = 0;
    int threads = 0;
};

KernelSpec parse_kernel_name(const std::string& name);
DgpSpec parse_dgp_json(const std::string& json_text);

/// Parse + schema-validate a config document (JSON text).
TestRunConfig parse_test_config(const std::string& json_text, bool diagnose);
SimulateRunConfig parse_simulate_config(const std::string& json_text);

} // namespace autohsic

#endif
