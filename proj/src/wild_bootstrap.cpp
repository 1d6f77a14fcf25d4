#include "autohsic/wild_bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "autohsic/parallel.hpp"

namespace autohsic {

void BootstrapConfig::validate() const {
    if (replications < 1) throw std::invalid_argument("bootstrap replications must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
}

Rng weight_stream(std::uint64_t master_seed, int b, int m) {
    return Rng(derive_seed(master_seed, 0x77696c64ULL, static_cast<std::uint64_t>(b),
                           static_cast<std::uint64_t>(m)));
}

std::vector<double> draw_weights(Rng& stream, int n, WeightFamily family) {
    std::vector<double> w(static_cast<std::size_t>(n));
    switch (family) {
        case WeightFamily::Rademacher:
            for (auto& wi : w) wi = stream.rademacher();
            break;
    }
    return w;
}

double bootstrap_statistic_once(const CenteredGramPair& pair, const std::vector<double>& weights) {
    const Eigen::Index n = pair.a.rows();
    if (static_cast<Eigen::Index>(weights.size()) != n)
        throw ShapeMismatch("weight vector length does not match the centred block");
    // Diagonal of a and b is zero, so the full quadratic form equals the
    // i != j sum of the algorithm. Accumulation matches v_statistic term for
    // term, so unit weights recover it exactly.
    long double acc = 0.0L;
    for (Eigen::Index j = 0; j < n; ++j) {
        const long double wj = weights[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < n; ++i) {
            const long double prod =
                static_cast<long double>(pair.a(i, j)) * static_cast<long double>(pair.b(i, j));
            acc += static_cast<long double>(weights[static_cast<std::size_t>(i)]) * prod * wj;
        }
    }
    const long double denom = static_cast<long double>(n) * static_cast<long double>(n - 3);
    return static_cast<double>(acc / denom);
}

double empirical_quantile_upper(std::vector<double> values, double level) {
    if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const auto B = static_cast<double>(values.size());
    auto idx = static_cast<std::size_t>(std::ceil(level * B));
    idx = std::clamp<std::size_t>(idx, 1, values.size());
    return values[idx - 1];
}

double plus_one_p_value(const std::vector<double>& replicates, double observed) {
    std::size_t count = 0;
    for (double r : replicates)
        if (r >= observed) ++count;
    return static_cast<double>(1 + count) / static_cast<double>(replicates.size() + 1);
}

namespace {

void finalize_result(StatTestResult& res, std::vector<double>&& replicates, double alpha,
                     bool keep) {
    res.critical_value = empirical_quantile_upper(replicates, 1.0 - alpha);
    res.p_value = plus_one_p_value(replicates, res.statistic);
    res.reject = res.statistic > res.critical_value;
    if (keep)
        res.bootstrap = std::move(replicates);
}

} // namespace

TestReport wild_bootstrap_test(const ObjectSeries& series, const KernelSpec& k_spec,
                               const KernelSpec& l_spec, int max_lag, const BootstrapConfig& cfg) {
    cfg.validate();
    if (max_lag < 1) throw std::invalid_argument("max lag must be >= 1");
    const int T = series.length();
    if (T - max_lag < 4) throw TooShort("need T - M >= 4");

    TestReport report;
    report.seed = cfg.master_seed;
    report.sample_size = T;
    report.bootstrap_replications = cfg.replications;
    report.alpha = cfg.alpha;
    report.max_lag = max_lag;
    report.kernel_k = kernel_family_name(k_spec.family);
    report.kernel_l = kernel_family_name(l_spec.family);

    // One full-series Gram per kernel side; lag blocks are submatrices.
    const SeriesGeometry geometry(series);
    report.bandwidth_k = resolve_bandwidth(k_spec, geometry);
    report.bandwidth_l = resolve_bandwidth(l_spec, geometry);
    const Eigen::MatrixXd k_full = full_gram(k_spec, report.bandwidth_k, geometry);
    const Eigen::MatrixXd l_full =
        (k_spec == l_spec) ? k_full : full_gram(l_spec, report.bandwidth_l, geometry);

    // Centred pairs and the elementwise products c = a o b, shared by all
    // replicates.
    std::vector<CenteredGramPair> pairs;
    std::vector<Eigen::MatrixXd> products;
    pairs.reserve(static_cast<std::size_t>(max_lag));
    for (int m = 1; m <= max_lag; ++m) {
        CenteredGramPair pair;
        pair.lag = m;
        const int n = T - m;
        pair.a = k_full.block(m, m, n, n);
        pair.b = l_full.block(0, 0, n, n);
        u_center_in_place(pair.a);
        u_center_in_place(pair.b);
        products.push_back(pair.a.cwiseProduct(pair.b));
        pairs.push_back(std::move(pair));
    }

    report.lags.resize(static_cast<std::size_t>(max_lag));
    long double p_sum = 0.0L;
    for (int m = 1; m <= max_lag; ++m) {
        auto& lag_res = report.lags[static_cast<std::size_t>(m - 1)];
        lag_res.lag = m;
        lag_res.v = v_statistic(pairs[static_cast<std::size_t>(m - 1)]);
        lag_res.statistic = static_cast<double>(T) * lag_res.v;
        p_sum += lag_res.v;
    }
    report.portmanteau.lag = max_lag;
    report.portmanteau.v = static_cast<double>(p_sum);
    report.portmanteau.statistic = static_cast<double>(T) * report.portmanteau.v;

    // Replicate matrix: scaled[m][b], plus the portmanteau sums.
    const int B = cfg.replications;
    std::vector<std::vector<double>> scaled(static_cast<std::size_t>(max_lag),
                                            std::vector<double>(static_cast<std::size_t>(B)));
    std::vector<double> scaled_port(static_cast<std::size_t>(B));

    parallel_for(static_cast<std::size_t>(B), cfg.threads, [&](std::size_t bi) {
        const int b = static_cast<int>(bi) + 1;
        long double port = 0.0L;
        for (int m = 1; m <= max_lag; ++m) {
            const int n = T - m;
            Rng stream = weight_stream(cfg.master_seed, b, m);
            const std::vector<double> w = draw_weights(stream, n, cfg.weights);
            const Eigen::Map<const Eigen::VectorXd> wv(w.data(), n);
            const double quad =
                wv.dot(products[static_cast<std::size_t>(m - 1)] * wv);
            const double v_star = quad / (static_cast<double>(n) * static_cast<double>(n - 3));
            scaled[static_cast<std::size_t>(m - 1)][bi] = static_cast<double>(T) * v_star;
            port += v_star;
        }
        scaled_port[bi] = static_cast<double>(T) * static_cast<double>(port);
    });

    for (int m = 1; m <= max_lag; ++m)
        finalize_result(report.lags[static_cast<std::size_t>(m - 1)],
                        std::move(scaled[static_cast<std::size_t>(m - 1)]), cfg.alpha,
                        cfg.keep_replicates);
    finalize_result(report.portmanteau, std::move(scaled_port), cfg.alpha, cfg.keep_replicates);
    return report;
}

} // namespace autohsic
