#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "autohsic/presets.hpp"
#include "autohsic/report_io.hpp"
#include "autohsic/simulation.hpp"

using namespace autohsic;

namespace {

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double lag1_autocorrelation(const std::vector<double>& x) {
    const std::size_t n = x.size();
    long double mean = 0.0L;
    for (double v : x) mean += v;
    mean /= static_cast<long double>(n);
    long double num = 0.0L, den = 0.0L;
    for (std::size_t t = 0; t + 1 < n; ++t)
        num += (x[t] - mean) * (x[t + 1] - mean);
    for (std::size_t t = 0; t < n; ++t) den += (x[t] - mean) * (x[t] - mean);
    return static_cast<double>(num / den);
}

} // namespace

TEST_CASE("sigma cholesky factor reproduces the AR(1) covariance") {
    for (int d : {1, 3, 10, 160}) {
        const Eigen::MatrixXd chol = ar1_covariance_cholesky(d);
        const Eigen::MatrixXd sigma = chol * chol.transpose();
        double worst = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                worst = std::max(worst, std::abs(sigma(i, j) - std::pow(0.5, std::abs(i - j))));
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("mvn_sample: d=1 standard normal, d=3 covariance, determinism") {
    const Eigen::MatrixXd chol1 = ar1_covariance_cholesky(1);
    Rng rng(1u);
    // d=1: Sigma_11 = 1, so samples are standard normal; check the first two moments
    long double mean = 0.0L, var = 0.0L;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double v = mvn_sample(rng, chol1)[0];
        mean += v;
        var += v * v;
    }
    CHECK(std::abs(static_cast<double>(mean / n)) <= 0.02);
    CHECK(std::abs(static_cast<double>(var / n) - 1.0) <= 0.03);

    const Eigen::MatrixXd chol3 = ar1_covariance_cholesky(3);
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd x = mvn_sample(rng, chol3);
        cov += x * x.transpose();
    }
    cov /= n;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(cov(i, j) - std::pow(0.5, std::abs(i - j))) <= 0.03);

    Rng a(42u), b(42u);
    CHECK(mvn_sample(a, chol3) == mvn_sample(b, chol3));
}

TEST_CASE("mvt_sample: large nu approaches the normal, nu=1 is Cauchy-like") {
    const Eigen::MatrixXd chol = ar1_covariance_cholesky(3);
    Rng rng(2u);
    const int n = 10000;
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) draws[static_cast<std::size_t>(i)] = mvt_sample(rng, 1e6, chol)[0];
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = standard_normal_cdf(draws[static_cast<std::size_t>(i)]);
        ks = std::max(ks, std::abs(f - (i + 1.0) / n));
        ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    }
    CHECK(ks <= 0.02);

    const Eigen::MatrixXd chol1 = ar1_covariance_cholesky(1);
    std::vector<double> cauchy(100000);
    for (auto& v : cauchy) v = mvt_sample(rng, 1.0, chol1)[0];
    std::sort(cauchy.begin(), cauchy.end());
    const double median = 0.5 * (cauchy[49999] + cauchy[50000]);
    CHECK(std::abs(median) <= 0.02);

    Rng a(7u), b(7u);
    CHECK(mvt_sample(a, 2.0, chol1) == mvt_sample(b, 2.0, chol1));
    CHECK_THROWS_AS(mvt_sample(a, 0.0, chol1), std::invalid_argument);
}

TEST_CASE("brownian_path: start, terminal variance, increment independence") {
    std::vector<double> grid(101);
    for (int i = 0; i <= 100; ++i) grid[static_cast<std::size_t>(i)] = i / 100.0;
    grid.back() = 1.0;

    Rng rng(3u);
    const int paths = 10000;
    long double var_end = 0.0L;
    long double inc_prod = 0.0L, inc1_sq = 0.0L, inc2_sq = 0.0L;
    for (int p = 0; p < paths; ++p) {
        const Eigen::VectorXd path = brownian_path(rng, grid);
        CHECK(path[0] == 0.0);
        var_end += path[100] * path[100];
        const double inc1 = path[50] - path[0];
        const double inc2 = path[100] - path[50];
        inc_prod += inc1 * inc2;
        inc1_sq += inc1 * inc1;
        inc2_sq += inc2 * inc2;
    }
    CHECK(std::abs(static_cast<double>(var_end / paths) - 1.0) <= 0.05);
    const double corr = static_cast<double>(
        inc_prod / std::sqrt(static_cast<double>(inc1_sq) * static_cast<double>(inc2_sq)));
    CHECK(std::abs(corr) <= 0.03);
}

TEST_CASE("dgp_sample shapes and labels") {
    Rng rng(4u);
    const ObjectSeries v = dgp_sample(IIDNormal{5}, 50, rng);
    CHECK(v.length() == 50);
    CHECK(v.space().element_size() == 5);

    const ObjectSeries f = dgp_sample(FunctionalIID{21}, 20, rng);
    CHECK(f.space().kind() == SpaceKind::FunctionalGrid);
    CHECK(f.space().element_size() == 21);

    const ObjectSeries m = dgp_sample(MatrixGarch{2, 0.3}, 30, rng);
    CHECK(m.space().kind() == SpaceKind::Matrix);
    CHECK(m.space().element_size() == 4);

    CHECK(dgp_label(IIDStudentT{10, 1.0}) == "iid_t1");
    CHECK(dgp_label(MatrixGarch{2, 0.3}) == "matrix_garch(c=0.3)");
    CHECK(dgp_dimension(FunctionalIID{101}) == 101);
    CHECK(dgp_is_diagnostic(GarchEgp{2}));
    CHECK_FALSE(dgp_is_diagnostic(IIDNormal{1}));
}

TEST_CASE("product MA is serially uncorrelated; VAR(1) has autocorrelation rho") {
    Rng rng(5u);
    // E[(X_t X_{t+1})^2] = 9 for the triple product of normals, so the sample
    // lag-1 autocorrelation has SD 3/sqrt(n); n = 1e6 puts 0.01 at 3.3 SD.
    const ObjectSeries ma = dgp_sample(ProductMA{1, InnovationLaw::normal()}, 1000000, rng);
    CHECK(std::abs(lag1_autocorrelation(to_scalar_series(ma))) <= 0.01);

    const ObjectSeries ar = dgp_sample(VAR1{1, 0.3, InnovationLaw::normal()}, 100000, rng);
    CHECK(lag1_autocorrelation(to_scalar_series(ar)) == doctest::Approx(0.3).epsilon(0.07));
}

TEST_CASE("nonstationary recursion trips the blowup guard") {
    Rng rng(6u);
    CHECK_THROWS_AS(dgp_sample(VAR1{1, 1.6, InnovationLaw::normal()}, 100, rng),
                    NumericalBlowup);
}

TEST_CASE("garch egp variants") {
    Rng rng(7u);
    const ObjectSeries egp1 = dgp_sample(GarchEgp{1}, 50000, rng);
    const std::vector<double> x = to_scalar_series(egp1);
    long double var = 0.0L;
    for (double v : x) var += v * v;
    // unconditional variance omega/(1-alpha-beta) = 0.5
    CHECK(std::abs(static_cast<double>(var / x.size()) - 0.5) <= 0.05);

    CHECK(dgp_sample(GarchEgp{2}, 100, rng).length() == 100);
    CHECK(dgp_sample(GarchEgp{3}, 100, rng).length() == 100);
    CHECK_THROWS_AS(dgp_sample(GarchEgp{4}, 100, rng), std::invalid_argument);
}

TEST_CASE("matrix garch: c=0 collapses to constant mixing states") {
    // With c = 0 the states stay at their fixed point, so every observation is
    // the same linear map applied to fresh Gaussian noise: check second
    // moments are time-constant.
    Rng rng(8u);
    const ObjectSeries series = dgp_sample(MatrixGarch{2, 0.0}, 4000, rng);
    long double first_half = 0.0L, second_half = 0.0L;
    for (int t = 0; t < 2000; ++t)
        first_half += series.element(t).squaredNorm();
    for (int t = 2000; t < 4000; ++t)
        second_half += series.element(t).squaredNorm();
    const double ratio = static_cast<double>(first_half / second_half);
    CHECK(ratio == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("experiment: single replication on a null DGP is a bernoulli draw") {
    ExperimentConfig cfg;
    cfg.dgp = IIDNormal{1};
    cfg.T = 50;
    cfg.replications = 1;
    cfg.bootstrap = 40;
    cfg.single_lags = {1};
    cfg.portmanteau_lags = {};
    cfg.kernels = {{KernelSpec::gaussian(), KernelSpec::gaussian()}};
    cfg.master_seed = 9u;
    const RejectionTable table = run_experiment(cfg);
    CHECK(table.cells.size() == 1);
    CHECK((table.cells[0].rejection_pct == 0.0 || table.cells[0].rejection_pct == 100.0));
}

TEST_CASE("experiment output is independent of the worker count") {
    ExperimentConfig cfg;
    cfg.dgp = ProductMA{1, InnovationLaw::normal()};
    cfg.T = 60;
    cfg.replications = 24;
    cfg.bootstrap = 60;
    cfg.single_lags = {1};
    cfg.portmanteau_lags = {3};
    cfg.kernels = standard_kernel_pairs();
    cfg.master_seed = 10u;
    cfg.threads = 1;
    const std::string serial = serialize_table(run_experiment(cfg));
    cfg.threads = 4;
    const std::string parallel = serialize_table(run_experiment(cfg));
    CHECK(serial == parallel);
}

TEST_CASE("experiment validation and cell metadata") {
    ExperimentConfig cfg;
    cfg.dgp = IIDNormal{2};
    cfg.T = 40;
    cfg.replications = 2;
    cfg.bootstrap = 20;
    cfg.single_lags = {1};
    cfg.portmanteau_lags = {2};
    cfg.kernels = {{KernelSpec::gaussian(), KernelSpec::gaussian()}};
    cfg.master_seed = 11u;
    const RejectionTable table = run_experiment(cfg);
    CHECK(table.dgp == "iid_normal");
    CHECK(table.d == 2);
    CHECK(table.cells.size() == 2);
    CHECK(table.cells[0].statistic == "V");
    CHECK(table.cells[1].statistic == "P");
    CHECK(table.cells[1].lag == 2);

    ExperimentConfig bad = cfg;
    bad.kernels.clear();
    CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
    bad = cfg;
    bad.single_lags = {39};
    CHECK_THROWS_AS(run_experiment(bad), TooShort);
}

TEST_CASE("diagnostic experiment emits Vhat/Phat cells") {
    ExperimentConfig cfg;
    cfg.dgp = GarchEgp{1};
    cfg.T = 100;
    cfg.replications = 2;
    cfg.bootstrap = 20;
    cfg.single_lags = {1};
    cfg.portmanteau_lags = {2};
    cfg.kernels = {{KernelSpec::gaussian(), KernelSpec::gaussian()}};
    cfg.master_seed = 12u;
    const RejectionTable table = run_experiment(cfg);
    CHECK(table.diagnostic);
    CHECK(table.cells[0].statistic == "Vhat");
    CHECK(table.cells[1].statistic == "Phat");
}

TEST_CASE("doubling the burn-in does not move rejection rates") {
    ExperimentConfig cfg;
    cfg.dgp = VAR1{1, 0.3, InnovationLaw::normal()};
    cfg.T = 100;
    cfg.replications = 100;
    cfg.bootstrap = 100;
    cfg.single_lags = {1};
    cfg.portmanteau_lags = {};
    cfg.kernels = {{KernelSpec::gaussian(), KernelSpec::gaussian()}};
    cfg.master_seed = 13u;
    cfg.burn_in = 200;
    const RejectionTable t200 = run_experiment(cfg);
    cfg.burn_in = 400;
    const RejectionTable t400 = run_experiment(cfg);
    const double se = std::hypot(t200.cells[0].se_pct, t400.cells[0].se_pct);
    CHECK(std::abs(t200.cells[0].rejection_pct - t400.cells[0].rejection_pct) <= 2.0 * se);
}

TEST_CASE("presets enumerate the study cells") {
    CHECK(lookup_preset("table2").cells.size() == 9);
    CHECK(lookup_preset("supp-table5").cells.size() == 6);
    CHECK(lookup_preset("supp-table6").cells.size() == 14);
    CHECK_THROWS_AS(lookup_preset("nope"), std::invalid_argument);
    for (const auto& name : preset_names()) CHECK(!lookup_preset(name).cells.empty());
}

TEST_CASE("table serialization round trip and record stream") {
    ExperimentConfig cfg;
    cfg.dgp = IIDNormal{1};
    cfg.T = 40;
    cfg.replications = 4;
    cfg.bootstrap = 20;
    cfg.single_lags = {1};
    cfg.portmanteau_lags = {2};
    cfg.kernels = {{KernelSpec::gaussian(), KernelSpec::gaussian()}};
    cfg.master_seed = 14u;
    const RejectionTable table = run_experiment(cfg);
    const std::string text = serialize_table(table);
    CHECK(serialize_table(parse_table(text)) == text);
    const std::string records = table_records(table);
    CHECK(std::count(records.begin(), records.end(), '\n') == 2);
    CHECK(records.find("\"statistic\":\"V\"") != std::string::npos);
}
