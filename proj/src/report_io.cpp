#include "autohsic/report_io.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace autohsic {

namespace {

using nlohmann::json;

json stat_to_json(const StatTestResult& r) {
    json j;
    j["lag"] = r.lag;
    j["v"] = r.v;
    j["statistic"] = r.statistic;
    j["critical_value"] = r.critical_value;
    j["p_value"] = r.p_value;
    j["reject"] = r.reject;
    if (!r.bootstrap.empty()) j["bootstrap"] = r.bootstrap;
    return j;
}

StatTestResult stat_from_json(const json& j) {
    StatTestResult r;
    r.lag = j.at("lag").get<int>();
    r.v = j.at("v").get<double>();
    r.statistic = j.at("statistic").get<double>();
    r.critical_value = j.at("critical_value").get<double>();
    r.p_value = j.at("p_value").get<double>();
    r.reject = j.at("reject").get<bool>();
    if (j.contains("bootstrap")) r.bootstrap = j.at("bootstrap").get<std::vector<double>>();
    return r;
}

} // namespace

std::string serialize_report(const TestReport& report) {
    json j;
    j["schema"] = report.schema;
    j["seed"] = report.seed;
    j["sample_size"] = report.sample_size;
    j["bootstrap_replications"] = report.bootstrap_replications;
    j["alpha"] = report.alpha;
    j["max_lag"] = report.max_lag;
    j["kernel_k"] = report.kernel_k;
    j["kernel_l"] = report.kernel_l;
    if (report.bandwidth_k) j["bandwidth_k"] = *report.bandwidth_k;
    if (report.bandwidth_l) j["bandwidth_l"] = *report.bandwidth_l;
    j["lags"] = json::array();
    for (const auto& lag : report.lags) j["lags"].push_back(stat_to_json(lag));
    j["portmanteau"] = stat_to_json(report.portmanteau);
    return j.dump(2) + "\n";
}

TestReport parse_report(const std::string& json_text) {
    const json j = json::parse(json_text);
    TestReport report;
    report.schema = j.at("schema").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.sample_size = j.at("sample_size").get<int>();
    report.bootstrap_replications = j.at("bootstrap_replications").get<int>();
    report.alpha = j.at("alpha").get<double>();
    report.max_lag = j.at("max_lag").get<int>();
    report.kernel_k = j.at("kernel_k").get<std::string>();
    report.kernel_l = j.at("kernel_l").get<std::string>();
    if (j.contains("bandwidth_k")) report.bandwidth_k = j.at("bandwidth_k").get<double>();
    if (j.contains("bandwidth_l")) report.bandwidth_l = j.at("bandwidth_l").get<double>();
    for (const auto& lag : j.at("lags")) report.lags.push_back(stat_from_json(lag));
    report.portmanteau = stat_from_json(j.at("portmanteau"));
    return report;
}

std::string serialize_diagnostic(const DiagnosticReport& report) {
    json j;
    j["schema"] = report.schema;
    j["seed"] = report.seed;
    j["sample_size"] = report.sample_size;
    j["bootstrap_replications"] = report.bootstrap_replications;
    j["alpha"] = report.alpha;
    j["max_lag"] = report.max_lag;
    j["model"] = report.model;
    j["fitted_params"] = report.fitted_params;
    j["kernel_k"] = report.kernel_k;
    j["kernel_l"] = report.kernel_l;
    j["replicate_retries"] = report.replicate_retries;
    j["lags"] = json::array();
    for (const auto& lag : report.lags) j["lags"].push_back(stat_to_json(lag));
    j["portmanteau"] = stat_to_json(report.portmanteau);
    return j.dump(2) + "\n";
}

DiagnosticReport parse_diagnostic(const std::string& json_text) {
    const json j = json::parse(json_text);
    DiagnosticReport report;
    report.schema = j.at("schema").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.sample_size = j.at("sample_size").get<int>();
    report.bootstrap_replications = j.at("bootstrap_replications").get<int>();
    report.alpha = j.at("alpha").get<double>();
    report.max_lag = j.at("max_lag").get<int>();
    report.model = j.at("model").get<std::string>();
    report.fitted_params = j.at("fitted_params").get<std::vector<double>>();
    report.kernel_k = j.at("kernel_k").get<std::string>();
    report.kernel_l = j.at("kernel_l").get<std::string>();
    report.replicate_retries = j.at("replicate_retries").get<int>();
    for (const auto& lag : j.at("lags")) report.lags.push_back(stat_from_json(lag));
    report.portmanteau = stat_from_json(j.at("portmanteau"));
    return report;
}

namespace {

json cell_record(const RejectionTable& table, const RejectionCell& cell) {
    json j;
    j["dgp"] = table.dgp;
    j["kernel"] = cell.kernel;
    j["statistic"] = cell.statistic;
    j["lag"] = cell.lag;
    j["T"] = table.T;
    j["d"] = table.d;
    j["rejection_pct"] = cell.rejection_pct;
    j["se_pct"] = cell.se_pct;
    j["R"] = table.R;
    j["B"] = table.B;
    j["seed"] = table.seed;
    return j;
}

} // namespace

std::string serialize_table(const RejectionTable& table) {
    json j;
    j["schema"] = table.schema;
    j["dgp"] = table.dgp;
    j["T"] = table.T;
    j["d"] = table.d;
    j["R"] = table.R;
    j["B"] = table.B;
    j["alpha"] = table.alpha;
    j["seed"] = table.seed;
    j["failed_replicates"] = table.failed_replicates;
    j["diagnostic"] = table.diagnostic;
    j["cells"] = json::array();
    for (const auto& cell : table.cells) {
        json c;
        c["kernel"] = cell.kernel;
        c["statistic"] = cell.statistic;
        c["lag"] = cell.lag;
        c["rejection_pct"] = cell.rejection_pct;
        c["se_pct"] = cell.se_pct;
        j["cells"].push_back(std::move(c));
    }
    return j.dump(2) + "\n";
}

RejectionTable parse_table(const std::string& json_text) {
    const json j = json::parse(json_text);
    RejectionTable table;
    table.schema = j.at("schema").get<std::string>();
    table.dgp = j.at("dgp").get<std::string>();
    table.T = j.at("T").get<int>();
    table.d = j.at("d").get<int>();
    table.R = j.at("R").get<int>();
    table.B = j.at("B").get<int>();
    table.alpha = j.at("alpha").get<double>();
    table.seed = j.at("seed").get<std::uint64_t>();
    table.failed_replicates = j.at("failed_replicates").get<int>();
    table.diagnostic = j.at("diagnostic").get<bool>();
    for (const auto& c : j.at("cells")) {
        RejectionCell cell;
        cell.kernel = c.at("kernel").get<std::string>();
        cell.statistic = c.at("statistic").get<std::string>();
        cell.lag = c.at("lag").get<int>();
        cell.rejection_pct = c.at("rejection_pct").get<double>();
        cell.se_pct = c.at("se_pct").get<double>();
        table.cells.push_back(std::move(cell));
    }
    return table;
}

std::string table_records(const RejectionTable& table) {
    std::string out;
    for (const auto& cell : table.cells) out += cell_record(table, cell).dump() + "\n";
    return out;
}

std::string format_table_text(const RejectionTable& table) {
    std::ostringstream os;
    os << "dgp=" << table.dgp << "  T=" << table.T << "  d=" << table.d << "  R=" << table.R
       << "  B=" << table.B << "  alpha=" << table.alpha << "  seed=" << table.seed;
    if (table.failed_replicates > 0) os << "  failed=" << table.failed_replicates;
    os << "\n";
    os << std::left << std::setw(18) << "kernel" << std::setw(12) << "statistic" << std::right
       << std::setw(12) << "reject%" << std::setw(10) << "se%" << "\n";
    for (const auto& cell : table.cells) {
        std::ostringstream stat;
        stat << cell.statistic << "[" << cell.lag << "]";
        os << std::left << std::setw(18) << cell.kernel << std::setw(12) << stat.str()
           << std::right << std::setw(12) << std::fixed << std::setprecision(1)
           << cell.rejection_pct << std::setw(10) << std::setprecision(2) << cell.se_pct << "\n";
    }
    return os.str();
}

namespace {

void format_stat_lines(std::ostringstream& os, const std::vector<StatTestResult>& lags,
                       const StatTestResult& port, const char* single_name,
                       const char* port_name) {
    os << std::left << std::setw(12) << "statistic" << std::right << std::setw(14) << "value"
       << std::setw(14) << "critical" << std::setw(10) << "p-value" << std::setw(9) << "reject"
       << "\n";
    auto line = [&](const std::string& name, const StatTestResult& r) {
        os << std::left << std::setw(12) << name << std::right << std::setw(14)
           << std::scientific << std::setprecision(4) << r.statistic << std::setw(14)
           << r.critical_value << std::setw(10) << std::fixed << std::setprecision(4) << r.p_value
           << std::setw(9) << (r.reject ? "yes" : "no") << "\n";
    };
    for (const auto& r : lags) {
        std::ostringstream name;
        name << single_name << "[" << r.lag << "]";
        line(name.str(), r);
    }
    std::ostringstream name;
    name << port_name << "[" << port.lag << "]";
    line(name.str(), port);
}

} // namespace

std::string format_report_text(const TestReport& report) {
    std::ostringstream os;
    os << "wild-bootstrap serial independence test\n";
    os << "T=" << report.sample_size << "  M=" << report.max_lag << "  B="
       << report.bootstrap_replications << "  alpha=" << report.alpha << "  seed=" << report.seed
       << "\n";
    os << "kernels: k=" << report.kernel_k;
    if (report.bandwidth_k) os << " (gamma=" << *report.bandwidth_k << ")";
    os << ", l=" << report.kernel_l;
    if (report.bandwidth_l) os << " (gamma=" << *report.bandwidth_l << ")";
    os << "\n";
    format_stat_lines(os, report.lags, report.portmanteau, "T*V", "T*P");
    return os.str();
}

std::string format_diagnostic_text(const DiagnosticReport& report) {
    std::ostringstream os;
    os << "residual-bootstrap model diagnostic (" << report.model << ")\n";
    os << "T=" << report.sample_size << "  M=" << report.max_lag << "  B="
       << report.bootstrap_replications << "  alpha=" << report.alpha << "  seed=" << report.seed
       << "\n";
    os << "fitted:";
    for (double p : report.fitted_params) os << " " << std::setprecision(6) << p;
    if (report.replicate_retries > 0) os << "  (refit retries: " << report.replicate_retries << ")";
    os << "\n";
    format_stat_lines(os, report.lags, report.portmanteau, "T*Vhat", "T*Phat");
    return os.str();
}

} // namespace autohsic
