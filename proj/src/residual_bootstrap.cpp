#include "autohsic/residual_bootstrap.hpp"

#include <atomic>

#include "autohsic/parallel.hpp"

namespace autohsic {

namespace {

// Componentwise affine rescaling to sample mean 0 and variance 1 (divisor n).
// Coincides with standardize_residuals for scalar innovation spaces.
ObjectSeries standardize_series(const ObjectSeries& series) {
    Eigen::MatrixXd data = series.data();
    const auto T = static_cast<double>(data.rows());
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
        const double mu = data.col(c).mean();
        const double var = (data.col(c).array() - mu).square().sum() / T;
        if (!(var > 0.0)) throw DegenerateResiduals("residual sample variance is zero");
        data.col(c) = (data.col(c).array() - mu) / std::sqrt(var);
    }
    return ObjectSeries(series.space(), std::move(data));
}

ObjectSeries resample_rows(const ObjectSeries& pool, std::size_t count, Rng& stream) {
    const auto T = static_cast<std::size_t>(pool.length());
    Eigen::MatrixXd data(static_cast<Eigen::Index>(count), pool.data().cols());
    for (std::size_t i = 0; i < count; ++i)
        data.row(static_cast<Eigen::Index>(i)) =
            pool.data().row(static_cast<Eigen::Index>(stream.index(T)));
    return ObjectSeries(pool.space(), std::move(data));
}

} // namespace

std::vector<double> residual_lag_statistics(const ObjectSeries& residuals,
                                            const KernelSpec& k_spec, const KernelSpec& l_spec,
                                            int max_lag) {
    const int T = residuals.length();
    if (max_lag < 1) throw std::invalid_argument("max lag must be >= 1");
    if (T - max_lag < 4) throw TooShort("need T - M >= 4");
    const SeriesGeometry geometry(residuals);
    const auto gamma_k = resolve_bandwidth(k_spec, geometry);
    const auto gamma_l = resolve_bandwidth(l_spec, geometry);
    const Eigen::MatrixXd k_full = full_gram(k_spec, gamma_k, geometry);
    const Eigen::MatrixXd l_full =
        (k_spec == l_spec) ? k_full : full_gram(l_spec, gamma_l, geometry);

    std::vector<double> v(static_cast<std::size_t>(max_lag));
    for (int m = 1; m <= max_lag; ++m) {
        const int n = T - m;
        CenteredGramPair pair;
        pair.lag = m;
        pair.a = k_full.block(m, m, n, n);
        pair.b = l_full.block(0, 0, n, n);
        u_center_in_place(pair.a);
        u_center_in_place(pair.b);
        v[static_cast<std::size_t>(m - 1)] = v_statistic(pair);
    }
    return v;
}

DiagnosticReport residual_bootstrap_test(const ObjectSeries& series, const CausalModel& model,
                                         const KernelSpec& k_spec, const KernelSpec& l_spec,
                                         int max_lag, const BootstrapConfig& cfg) {
    cfg.validate();
    const int T = series.length();
    if (max_lag < 1) throw std::invalid_argument("max lag must be >= 1");
    if (T - max_lag < 4) throw TooShort("need T - M >= 4");

    DiagnosticReport report;
    report.seed = cfg.master_seed;
    report.sample_size = T;
    report.bootstrap_replications = cfg.replications;
    report.alpha = cfg.alpha;
    report.max_lag = max_lag;
    report.model = model.name();
    report.kernel_k = kernel_family_name(k_spec.family);
    report.kernel_l = kernel_family_name(l_spec.family);

    report.fitted_params = model.estimate(series);
    const ObjectSeries residuals = model.residuals(series, report.fitted_params);
    const std::vector<double> observed = residual_lag_statistics(residuals, k_spec, l_spec, max_lag);

    const ObjectSeries pool = standardize_series(residuals);
    const std::size_t sim_length = static_cast<std::size_t>(T) + kResidualBootstrapBurnIn;

    const int B = cfg.replications;
    std::vector<std::vector<double>> scaled(static_cast<std::size_t>(max_lag),
                                            std::vector<double>(static_cast<std::size_t>(B)));
    std::vector<double> scaled_port(static_cast<std::size_t>(B));
    std::atomic<int> retries{0};

    parallel_for(static_cast<std::size_t>(B), cfg.threads, [&](std::size_t bi) {
        const auto b = static_cast<std::uint64_t>(bi) + 1;
        std::vector<double> v_star;
        for (int attempt = 0;; ++attempt) {
            Rng stream(derive_seed(cfg.master_seed, 0x726573ULL, b,
                                   static_cast<std::uint64_t>(attempt)));
            const ObjectSeries innovations = resample_rows(pool, sim_length, stream);
            const ObjectSeries sim =
                model.simulate(report.fitted_params, innovations, kResidualBootstrapBurnIn);
            try {
                const std::vector<double> refit = model.estimate(sim);
                const ObjectSeries resid_b = model.residuals(sim, refit);
                v_star = residual_lag_statistics(resid_b, k_spec, l_spec, max_lag);
                break;
            } catch (const EstimationFailed&) {
                if (attempt >= 1)
                    throw EstimationFailed("bootstrap replicate " + std::to_string(b) +
                                           " failed to refit twice");
                retries.fetch_add(1, std::memory_order_relaxed);
            }
        }
        long double port = 0.0L;
        for (int m = 1; m <= max_lag; ++m) {
            scaled[static_cast<std::size_t>(m - 1)][bi] =
                static_cast<double>(T) * v_star[static_cast<std::size_t>(m - 1)];
            port += v_star[static_cast<std::size_t>(m - 1)];
        }
        scaled_port[bi] = static_cast<double>(T) * static_cast<double>(port);
    });
    report.replicate_retries = retries.load();

    long double p_sum = 0.0L;
    for (int m = 1; m <= max_lag; ++m) {
        StatTestResult res;
        res.lag = m;
        res.v = observed[static_cast<std::size_t>(m - 1)];
        res.statistic = static_cast<double>(T) * res.v;
        auto& reps = scaled[static_cast<std::size_t>(m - 1)];
        res.critical_value = empirical_quantile_upper(reps, 1.0 - cfg.alpha);
        res.p_value = plus_one_p_value(reps, res.statistic);
        res.reject = res.statistic > res.critical_value;
        if (cfg.keep_replicates) res.bootstrap = std::move(reps);
        report.lags.push_back(std::move(res));
        p_sum += observed[static_cast<std::size_t>(m - 1)];
    }
    StatTestResult port;
    port.lag = max_lag;
    port.v = static_cast<double>(p_sum);
    port.statistic = static_cast<double>(T) * port.v;
    port.critical_value = empirical_quantile_upper(scaled_port, 1.0 - cfg.alpha);
    port.p_value = plus_one_p_value(scaled_port, port.statistic);
    port.reject = port.statistic > port.critical_value;
    if (cfg.keep_replicates) port.bootstrap = std::move(scaled_port);
    report.portmanteau = std::move(port);
    return report;
}

} // namespace autohsic
