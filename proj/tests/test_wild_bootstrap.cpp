#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "autohsic/report_io.hpp"
#include "autohsic/wild_bootstrap.hpp"

using namespace autohsic;

namespace {

ObjectSeries random_series(Rng& rng, int T, int d) {
    Eigen::MatrixXd data(T, d);
    for (int t = 0; t < T; ++t)
        for (int j = 0; j < d; ++j) data(t, j) = rng.normal();
    return ObjectSeries(SpaceDescriptor::euclidean(d), std::move(data));
}

} // namespace

TEST_CASE("draw_weights: support, moments, determinism") {
    Rng stream = weight_stream(42u, 1, 1);
    const std::vector<double> w = draw_weights(stream, 1000);
    for (double wi : w) CHECK((wi == 1.0 || wi == -1.0));

    Rng big = weight_stream(42u, 7, 2);
    long double sum = 0.0L;
    const int n = 1000000;
    for (const double wi : draw_weights(big, n)) sum += wi;
    CHECK(std::abs(static_cast<double>(sum / n)) <= 0.004); // 3 / sqrt(1e6), rounded up

    Rng s1 = weight_stream(9u, 3, 2);
    Rng s2 = weight_stream(9u, 3, 2);
    CHECK(draw_weights(s1, 64) == draw_weights(s2, 64));
    Rng s3 = weight_stream(9u, 3, 1);
    CHECK(draw_weights(s3, 64) != draw_weights(s2, 64));
}

TEST_CASE("bootstrap_statistic_once: unit weights, sign symmetry, reference loop") {
    Rng rng(5u);
    const ObjectSeries series = random_series(rng, 10, 1);
    const CenteredGramPair pair =
        centered_gram_pair(series, KernelSpec::gaussian(), KernelSpec::gaussian(), 1);

    const std::vector<double> ones(static_cast<std::size_t>(pair.n()), 1.0);
    CHECK(bootstrap_statistic_once(pair, ones) == v_statistic(pair));

    Rng stream = weight_stream(11u, 1, 1);
    std::vector<double> w = draw_weights(stream, pair.n());
    const double v = bootstrap_statistic_once(pair, w);
    std::vector<double> flipped = w;
    for (double& wi : flipped) wi = -wi;
    CHECK(bootstrap_statistic_once(pair, flipped) == v);

    // double-loop reference evaluation
    const int n = pair.n();
    double reference = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                reference += w[static_cast<std::size_t>(i)] * pair.a(i, j) * pair.b(i, j) *
                             w[static_cast<std::size_t>(j)];
    reference /= static_cast<double>(n) * (n - 3);
    CHECK(v == doctest::Approx(reference).epsilon(1e-12));

    std::vector<double> bad(static_cast<std::size_t>(n) + 1, 1.0);
    CHECK_THROWS_AS(bootstrap_statistic_once(pair, bad), ShapeMismatch);
}

TEST_CASE("empirical quantile and p-value conventions") {
    // order statistic at ceil(level * B), ties to the higher index
    CHECK(empirical_quantile_upper({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.0);
    CHECK(empirical_quantile_upper({4.0, 1.0, 3.0, 2.0}, 0.95) == 4.0);
    CHECK(empirical_quantile_upper({5.0}, 0.95) == 5.0);

    CHECK(plus_one_p_value({1.0, 2.0, 3.0}, 2.5) == 0.5);      // (1+1)/4
    CHECK(plus_one_p_value({1.0, 2.0, 3.0}, 100.0) == 0.25);   // (1+0)/4
    CHECK(plus_one_p_value({1.0, 2.0, 3.0}, -100.0) == 1.0);   // (1+3)/4
    CHECK(plus_one_p_value({2.0}, 2.0) == 1.0);                // ties count as >=
}

TEST_CASE("wild_bootstrap_test: report structure and invariants") {
    Rng rng(77u);
    const ObjectSeries series = random_series(rng, 60, 2);
    BootstrapConfig cfg;
    cfg.replications = 199;
    cfg.alpha = 0.05;
    cfg.master_seed = 1234u;
    const TestReport report =
        wild_bootstrap_test(series, KernelSpec::gaussian(), KernelSpec::gaussian(), 3, cfg);

    CHECK(report.lags.size() == 3);
    CHECK(report.bandwidth_k.has_value());
    for (const auto& lag : report.lags) {
        CHECK(lag.bootstrap.size() == 199);
        CHECK(lag.p_value > 0.0);
        CHECK(lag.p_value <= 1.0);
        CHECK(lag.reject == (lag.statistic > lag.critical_value));
        CHECK(lag.statistic == doctest::Approx(60.0 * lag.v).epsilon(1e-15));
    }
    CHECK(report.portmanteau.bootstrap.size() == 199);
    const double sum_v = report.lags[0].v + report.lags[1].v + report.lags[2].v;
    CHECK(report.portmanteau.v == doctest::Approx(sum_v).epsilon(1e-12));

    // scale cancellation: the decision is the same on the V scale
    for (const auto& lag : report.lags) {
        std::vector<double> unscaled = lag.bootstrap;
        for (double& r : unscaled) r /= 60.0;
        const double crit_v = empirical_quantile_upper(unscaled, 1.0 - cfg.alpha);
        CHECK((lag.v > crit_v) == lag.reject);
    }
}

TEST_CASE("wild_bootstrap_test: B=1 gives a two-point p-value") {
    Rng rng(88u);
    const ObjectSeries series = random_series(rng, 30, 1);
    BootstrapConfig cfg;
    cfg.replications = 1;
    cfg.master_seed = 5u;
    const TestReport report =
        wild_bootstrap_test(series, KernelSpec::gaussian(), KernelSpec::gaussian(), 1, cfg);
    CHECK((report.lags[0].p_value == 0.5 || report.lags[0].p_value == 1.0));
}

TEST_CASE("wild_bootstrap_test: constant series") {
    Eigen::MatrixXd data = Eigen::MatrixXd::Constant(20, 1, 3.0);
    const ObjectSeries series(SpaceDescriptor::euclidean(1), std::move(data));
    BootstrapConfig cfg;
    cfg.replications = 50;
    cfg.master_seed = 1u;
    CHECK_THROWS_AS(
        wild_bootstrap_test(series, KernelSpec::gaussian(), KernelSpec::gaussian(), 1, cfg),
        DegenerateBandwidth);
    const TestReport report =
        wild_bootstrap_test(series, KernelSpec::brownian(), KernelSpec::brownian(), 1, cfg);
    CHECK(report.lags[0].statistic == 0.0);
    CHECK(report.lags[0].p_value == 1.0);
}

TEST_CASE("wild_bootstrap_test: determinism across runs and thread counts") {
    Rng rng(99u);
    const ObjectSeries series = random_series(rng, 50, 1);
    BootstrapConfig cfg;
    cfg.replications = 100;
    cfg.master_seed = 2024u;
    cfg.threads = 1;
    const TestReport a =
        wild_bootstrap_test(series, KernelSpec::laplacian(), KernelSpec::laplacian(), 2, cfg);
    cfg.threads = 4;
    const TestReport b =
        wild_bootstrap_test(series, KernelSpec::laplacian(), KernelSpec::laplacian(), 2, cfg);
    CHECK(serialize_report(a) == serialize_report(b));

    const TestReport c =
        wild_bootstrap_test(series, KernelSpec::laplacian(), KernelSpec::laplacian(), 2, cfg);
    CHECK(serialize_report(b) == serialize_report(c));
}

TEST_CASE("per-lag weight streams are independent of the max lag") {
    Rng rng(111u);
    const ObjectSeries series = random_series(rng, 40, 1);
    BootstrapConfig cfg;
    cfg.replications = 25;
    cfg.master_seed = 31337u;
    const TestReport m1 =
        wild_bootstrap_test(series, KernelSpec::gaussian(), KernelSpec::gaussian(), 1, cfg);
    const TestReport m2 =
        wild_bootstrap_test(series, KernelSpec::gaussian(), KernelSpec::gaussian(), 2, cfg);
    CHECK(m1.lags[0].bootstrap == m2.lags[0].bootstrap);
}

TEST_CASE("bootstrap replicates have conditional mean zero") {
    Rng rng(246u);
    const ObjectSeries series = random_series(rng, 80, 1);
    const CenteredGramPair pair =
        centered_gram_pair(series, KernelSpec::gaussian(), KernelSpec::gaussian(), 1);
    const int B = 10000;
    long double sum = 0.0L, sum_sq = 0.0L;
    for (int b = 1; b <= B; ++b) {
        Rng stream = weight_stream(777u, b, 1);
        const double v = bootstrap_statistic_once(pair, draw_weights(stream, pair.n()));
        sum += v;
        sum_sq += static_cast<long double>(v) * v;
    }
    const double mean = static_cast<double>(sum / B);
    const double sd = std::sqrt(static_cast<double>(sum_sq / B) - mean * mean);
    CHECK(std::abs(mean) <= 3.0 * sd / std::sqrt(static_cast<double>(B)));
}

TEST_CASE("config validation") {
    BootstrapConfig cfg;
    cfg.replications = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.replications = 10;
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
