#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "autohsic/presets.hpp"
#include "autohsic/report_io.hpp"
#include "autohsic/run_config.hpp"
#include "autohsic/series_io.hpp"
#include "autohsic/verify.hpp"

namespace {

using namespace autohsic;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitComputationError = 3;

struct CommonFlags {
    std::string config_path;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--output", flags.output_dir, "directory for machine-readable outputs");
    cmd->add_option("--seed", flags.seed, "override the config seed");
    cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string load_config_text(const CommonFlags& flags) {
    if (flags.config_path.empty()) return "{}";
    return read_text_file(flags.config_path);
}

void write_output_file(const std::string& dir, const std::string& name,
                       const std::string& content) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

int cmd_test(const std::string& series_path, const CommonFlags& flags) {
    TestRunConfig cfg = parse_test_config(load_config_text(flags), /*diagnose=*/false);
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.threads) cfg.threads = *flags.threads;

    const ObjectSeries series = read_series_file(series_path);

    BootstrapConfig boot;
    boot.replications = cfg.bootstrap;
    boot.alpha = cfg.alpha;
    boot.master_seed = cfg.seed;
    boot.threads = cfg.threads;
    boot.keep_replicates = cfg.include_replicates;
    const TestReport report =
        wild_bootstrap_test(series, cfg.kernel_k, cfg.kernel_l, cfg.max_lag, boot);

    std::cout << format_report_text(report);
    if (!flags.output_dir.empty())
        write_output_file(flags.output_dir, "report.json", serialize_report(report));
    return kExitOk;
}

int cmd_diagnose(const std::string& series_path, const CommonFlags& flags) {
    TestRunConfig cfg = parse_test_config(load_config_text(flags), /*diagnose=*/true);
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.threads) cfg.threads = *flags.threads;

    const ObjectSeries series = read_series_file(series_path);
    const Garch11Model model;
    if (!(series.space() == model.innovation_space()))
        throw ConfigError("model 'garch11' requires a scalar series (vector 1)");

    BootstrapConfig boot;
    boot.replications = cfg.bootstrap;
    boot.alpha = cfg.alpha;
    boot.master_seed = cfg.seed;
    boot.threads = cfg.threads;
    boot.keep_replicates = cfg.include_replicates;
    const DiagnosticReport report =
        residual_bootstrap_test(series, model, cfg.kernel_k, cfg.kernel_l, cfg.max_lag, boot);

    std::cout << format_diagnostic_text(report);
    if (!flags.output_dir.empty())
        write_output_file(flags.output_dir, "report.json", serialize_diagnostic(report));
    return kExitOk;
}

int cmd_simulate(const CommonFlags& flags, const std::string& preset_flag,
                 const std::string& format) {
    SimulateRunConfig cfg = parse_simulate_config(
        flags.config_path.empty() && !preset_flag.empty()
            ? std::string("{\"preset\": \"") + preset_flag + "\"}"
            : load_config_text(flags));
    if (!preset_flag.empty()) {
        cfg.preset = preset_flag;
        cfg.dgp.reset();
    }
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.threads) cfg.threads = *flags.threads;

    std::vector<PresetCell> cells;
    int default_R = 1000, default_B = 500;
    if (cfg.preset) {
        const Preset preset = lookup_preset(*cfg.preset);
        cells = preset.cells;
        default_R = preset.default_replications;
        default_B = preset.default_bootstrap;
        if (cfg.T) {
            for (auto& cell : cells) cell.T = *cfg.T;
        }
    } else {
        if (!cfg.T) throw ConfigError("simulate with an explicit dgp needs 'T'");
        cells.push_back({*cfg.dgp, *cfg.T});
    }

    std::string all_text, all_records, all_tables_json;
    int cell_index = 0;
    for (const auto& cell : cells) {
        ExperimentConfig exp;
        exp.dgp = cell.dgp;
        exp.T = cell.T;
        exp.replications = cfg.replications.value_or(default_R);
        exp.bootstrap = cfg.bootstrap.value_or(default_B);
        exp.alpha = cfg.alpha;
        exp.single_lags = cfg.single_lags;
        exp.portmanteau_lags = cfg.portmanteau_lags;
        exp.kernels = cfg.kernels;
        // Each cell gets its own derived stream so cell order is immaterial.
        exp.master_seed = derive_seed(cfg.seed, 0x63656c6cULL,
                                      static_cast<std::uint64_t>(cell_index));
        exp.threads = cfg.threads;
        const RejectionTable table = run_experiment(exp);

        all_text += format_table_text(table) + "\n";
        all_records += table_records(table);
        if (!flags.output_dir.empty()) {
            std::ostringstream name;
            name << "table_" << cell_index << ".json";
            write_output_file(flags.output_dir, name.str(), serialize_table(table));
        }
        ++cell_index;
    }

    std::cout << (format == "records" ? all_records : all_text);
    if (!flags.output_dir.empty()) {
        write_output_file(flags.output_dir, "tables.txt", all_text);
        write_output_file(flags.output_dir, "records.jsonl", all_records);
    }
    return kExitOk;
}

int cmd_verify() {
    const VerificationReport report = run_verification();
    for (const auto& check : report.checks) {
        std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name;
        if (!check.detail.empty()) std::cout << " -- " << check.detail;
        std::cout << "\n";
    }
    return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial independence tests for vector, matrix and functional time series"};
    app.require_subcommand(1);

    CommonFlags test_flags, diagnose_flags, simulate_flags;
    std::string test_series, diagnose_series;
    std::string preset_flag;
    std::string format = "text";

    auto* test_cmd = app.add_subcommand("test", "wild-bootstrap serial independence test");
    test_cmd->add_option("series", test_series, "series file")->required();
    add_common_flags(test_cmd, test_flags);

    auto* diagnose_cmd = app.add_subcommand("diagnose", "residual-bootstrap model diagnostic");
    diagnose_cmd->add_option("series", diagnose_series, "series file")->required();
    add_common_flags(diagnose_cmd, diagnose_flags);

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo rejection-rate experiments");
    add_common_flags(simulate_cmd, simulate_flags);
    simulate_cmd->add_option("--preset", preset_flag, "named table preset");
    simulate_cmd->add_option("--format", format, "stdout format")
        ->check(CLI::IsMember({"text", "records"}));

    auto* verify_cmd = app.add_subcommand("verify", "internal consistency checks");
    (void)verify_cmd;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (test_cmd->parsed()) return cmd_test(test_series, test_flags);
        if (diagnose_cmd->parsed()) return cmd_diagnose(diagnose_series, diagnose_flags);
        if (simulate_cmd->parsed()) return cmd_simulate(simulate_flags, preset_flag, format);
        return cmd_verify();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const SeriesParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const DegenerateBandwidth& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return kExitComputationError;
    } catch (const TooShort& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return kExitComputationError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputationError;
    }
}
