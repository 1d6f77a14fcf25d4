#include "autohsic/run_config.hpp"

#include <set>

#include <json.hpp>

#include "autohsic/presets.hpp"

namespace autohsic {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key()))
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

template <typename T>
T get_checked(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("key '" + key + "' has the wrong type");
    }
}

InnovationLaw parse_innovation(const json& j, const std::string& where) {
    const auto name = get_checked<std::string>(j, "innovation", "normal");
    if (name == "normal") return InnovationLaw::normal();
    if (name == "student_t") {
        if (!j.contains("nu")) throw ConfigError(where + ": student_t innovation needs 'nu'");
        const double nu = j.at("nu").get<double>();
        if (!(nu > 0.0)) throw ConfigError(where + ": nu must be positive");
        return InnovationLaw::student_t(nu);
    }
    throw ConfigError(where + ": unknown innovation '" + name + "' (normal|student_t)");
}

int positive_int(const json& j, const std::string& key, int fallback) {
    const int v = get_checked<int>(j, key, fallback);
    if (v < 1) throw ConfigError("key '" + key + "' must be >= 1");
    return v;
}

} // namespace

KernelSpec parse_kernel_name(const std::string& name) {
    if (name == "gaussian") return KernelSpec::gaussian();
    if (name == "laplacian") return KernelSpec::laplacian();
    if (name == "browniandistance" || name == "brownian") return KernelSpec::brownian();
    throw ConfigError("unknown kernel '" + name + "' (gaussian|laplacian|browniandistance)");
}

namespace {

DgpSpec parse_dgp(const json& j) {
    if (!j.is_object() || !j.contains("name")) throw ConfigError("dgp needs a 'name' key");
    const auto name = j.at("name").get<std::string>();
    const std::set<std::string> vec_keys = {"name", "d", "innovation", "nu"};
    if (name == "iid_normal") {
        reject_unknown_keys(j, {"name", "d"}, "dgp");
        return IIDNormal{positive_int(j, "d", 1)};
    }
    if (name == "iid_student_t") {
        reject_unknown_keys(j, {"name", "d", "nu"}, "dgp");
        const double nu = get_checked<double>(j, "nu", 2.0);
        if (!(nu > 0.0)) throw ConfigError("dgp: nu must be positive");
        return IIDStudentT{positive_int(j, "d", 1), nu};
    }
    if (name == "product_ma") {
        reject_unknown_keys(j, vec_keys, "dgp");
        return ProductMA{positive_int(j, "d", 1), parse_innovation(j, "dgp")};
    }
    if (name == "var1") {
        reject_unknown_keys(j, {"name", "d", "rho", "innovation", "nu"}, "dgp");
        return VAR1{positive_int(j, "d", 1), get_checked<double>(j, "rho", 0.3),
                    parse_innovation(j, "dgp")};
    }
    if (name == "component_garch") {
        reject_unknown_keys(j, vec_keys, "dgp");
        return ComponentGarch{positive_int(j, "d", 1), parse_innovation(j, "dgp")};
    }
    if (name == "functional_iid") {
        reject_unknown_keys(j, {"name", "grid_points"}, "dgp");
        return FunctionalIID{positive_int(j, "grid_points", 101)};
    }
    if (name == "functional_arch") {
        reject_unknown_keys(j, {"name", "grid_points"}, "dgp");
        return FunctionalArch{positive_int(j, "grid_points", 101)};
    }
    if (name == "functional_product_ma") {
        reject_unknown_keys(j, {"name", "grid_points"}, "dgp");
        return FunctionalProductMA{positive_int(j, "grid_points", 101)};
    }
    if (name == "matrix_garch") {
        reject_unknown_keys(j, {"name", "d", "c"}, "dgp");
        const double c = get_checked<double>(j, "c", 0.0);
        if (c < 0.0) throw ConfigError("dgp: c must be nonnegative");
        return MatrixGarch{positive_int(j, "d", 2), c};
    }
    if (name == "garch_egp") {
        reject_unknown_keys(j, {"name", "egp"}, "dgp");
        const int egp = positive_int(j, "egp", 1);
        if (egp > 3) throw ConfigError("dgp: egp must be 1, 2 or 3");
        return GarchEgp{egp};
    }
    throw ConfigError("unknown dgp '" + name + "'");
}

KernelSpec parse_kernel_entry(const json& j, const std::string& fixed_key) {
    KernelSpec spec = parse_kernel_name(j.at("kernel_" + fixed_key).get<std::string>());
    const std::string bw_key = "bandwidth_" + fixed_key;
    if (j.contains(bw_key)) {
        if (!spec.needs_bandwidth())
            throw ConfigError("browniandistance kernel carries no bandwidth");
        if (j.at(bw_key).is_string()) {
            if (j.at(bw_key).get<std::string>() != "median")
                throw ConfigError("bandwidth must be 'median' or a positive number");
        } else {
            const double g = j.at(bw_key).get<double>();
            if (!(g > 0.0)) throw ConfigError("fixed bandwidth must be positive");
            spec.fixed_bandwidth = g;
        }
    }
    return spec;
}

} // namespace

DgpSpec parse_dgp_json(const std::string& json_text) { return parse_dgp(parse_json(json_text)); }

TestRunConfig parse_test_config(const std::string& json_text, bool diagnose) {
    const json j = parse_json(json_text);
    std::set<std::string> allowed = {"schema",      "kernel",      "kernel_k",  "kernel_l",
                                     "bandwidth",   "bandwidth_k", "bandwidth_l", "max_lag",
                                     "B",           "alpha",       "seed",      "threads",
                                     "include_replicates"};
    if (diagnose) allowed.insert("model");
    reject_unknown_keys(j, allowed, diagnose ? "diagnose config" : "test config");

    TestRunConfig cfg;
    json expanded = j;
    if (j.contains("kernel")) {
        if (j.contains("kernel_k") || j.contains("kernel_l"))
            throw ConfigError("use either 'kernel' or 'kernel_k'/'kernel_l', not both");
        expanded["kernel_k"] = j.at("kernel");
        expanded["kernel_l"] = j.at("kernel");
    }
    if (j.contains("bandwidth")) {
        if (j.contains("bandwidth_k") || j.contains("bandwidth_l"))
            throw ConfigError("use either 'bandwidth' or 'bandwidth_k'/'bandwidth_l', not both");
        expanded["bandwidth_k"] = j.at("bandwidth");
        expanded["bandwidth_l"] = j.at("bandwidth");
    }
    if (!expanded.contains("kernel_k")) expanded["kernel_k"] = "gaussian";
    if (!expanded.contains("kernel_l")) expanded["kernel_l"] = expanded["kernel_k"];
    cfg.kernel_k = parse_kernel_entry(expanded, "k");
    cfg.kernel_l = parse_kernel_entry(expanded, "l");

    cfg.max_lag = positive_int(j, "max_lag", cfg.max_lag);
    cfg.bootstrap = positive_int(j, "B", cfg.bootstrap);
    cfg.alpha = get_checked<double>(j, "alpha", cfg.alpha);
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
    cfg.seed = get_checked<std::uint64_t>(j, "seed", cfg.seed);
    cfg.threads = get_checked<int>(j, "threads", cfg.threads);
    if (cfg.threads < 0) throw ConfigError("threads must be >= 0");
    cfg.include_replicates = get_checked<bool>(j, "include_replicates", cfg.include_replicates);
    if (diagnose) {
        cfg.model = get_checked<std::string>(j, "model", cfg.model);
        if (cfg.model != "garch11") throw ConfigError("unknown model '" + cfg.model + "'");
    }
    return cfg;
}

SimulateRunConfig parse_simulate_config(const std::string& json_text) {
    const json j = parse_json(json_text);
    reject_unknown_keys(j,
                        {"schema", "preset", "dgp", "T", "R", "B", "alpha", "single_lags",
                         "portmanteau_lags", "kernels", "seed", "threads"},
                        "simulate config");
    SimulateRunConfig cfg;
    if (j.contains("preset")) cfg.preset = j.at("preset").get<std::string>();
    if (j.contains("dgp")) cfg.dgp = parse_dgp(j.at("dgp"));
    if (cfg.preset && cfg.dgp) throw ConfigError("use either 'preset' or 'dgp', not both");
    if (!cfg.preset && !cfg.dgp) throw ConfigError("simulate needs a 'preset' or a 'dgp'");
    if (j.contains("T")) cfg.T = positive_int(j, "T", 0);
    if (j.contains("R")) cfg.replications = positive_int(j, "R", 0);
    if (j.contains("B")) cfg.bootstrap = positive_int(j, "B", 0);
    cfg.alpha = get_checked<double>(j, "alpha", cfg.alpha);
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
    cfg.single_lags = get_checked<std::vector<int>>(j, "single_lags", cfg.single_lags);
    cfg.portmanteau_lags =
        get_checked<std::vector<int>>(j, "portmanteau_lags", cfg.portmanteau_lags);
    for (int m : cfg.single_lags)
        if (m < 1) throw ConfigError("single_lags entries must be >= 1");
    for (int m : cfg.portmanteau_lags)
        if (m < 1) throw ConfigError("portmanteau_lags entries must be >= 1");
    if (j.contains("kernels")) {
        for (const auto& name : j.at("kernels")) {
            const KernelSpec spec = parse_kernel_name(name.get<std::string>());
            cfg.kernels.push_back({spec, spec});
        }
    } else {
        cfg.kernels = standard_kernel_pairs();
    }
    if (cfg.kernels.empty()) throw ConfigError("kernel list is empty");
    cfg.seed = get_checked<std::uint64_t>(j, "seed", cfg.seed);
    cfg.threads = get_checked<int>(j, "threads", cfg.threads);
    if (cfg.threads < 0) throw ConfigError("threads must be >= 0");
    return cfg;
}

} // namespace autohsic
