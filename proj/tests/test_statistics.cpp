#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "autohsic/simulation.hpp"
#include "autohsic/statistics.hpp"

using namespace autohsic;

namespace {

ObjectSeries random_series(Rng& rng, int T, int d) {
    Eigen::MatrixXd data(T, d);
    for (int t = 0; t < T; ++t)
        for (int j = 0; j < d; ++j) data(t, j) = rng.normal();
    return ObjectSeries(SpaceDescriptor::euclidean(d), std::move(data));
}

ObjectSeries constant_series(int T, double value) {
    Eigen::MatrixXd data = Eigen::MatrixXd::Constant(T, 1, value);
    return ObjectSeries(SpaceDescriptor::euclidean(1), std::move(data));
}

// Direct evaluation of the centring display, independent of the library path.
Eigen::MatrixXd direct_u_center(Eigen::MatrixXd raw) {
    const Eigen::Index n = raw.rows();
    raw.diagonal().setZero();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    double grand = 0.0;
    for (Eigen::Index t = 0; t < n; ++t)
        for (Eigen::Index u = 0; u < n; ++u) grand += raw(t, u);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            double row = 0.0, col = 0.0;
            for (Eigen::Index t = 0; t < n; ++t) {
                row += raw(i, t);
                col += raw(t, j);
            }
            out(i, j) = raw(i, j) - row / (n - 2) - col / (n - 2) +
                        grand / (static_cast<double>(n - 1) * (n - 2));
        }
    }
    return out;
}

// 24-term sum written out with std::next_permutation, independent of h_kernel.
double naive_h(const Eigen::Matrix4d& k_vals, const Eigen::Matrix4d& l_vals) {
    int idx[4] = {0, 1, 2, 3};
    double acc = 0.0;
    do {
        acc += k_vals(idx[0], idx[1]) *
               (l_vals(idx[2], idx[3]) + l_vals(idx[0], idx[1]) - 2.0 * l_vals(idx[0], idx[2]));
    } while (std::next_permutation(idx, idx + 4));
    return acc / 24.0;
}

} // namespace

TEST_CASE("u_center: constant off-diagonal block maps to zero") {
    Eigen::MatrixXd raw = Eigen::MatrixXd::Ones(4, 4);
    const Eigen::MatrixXd centred = u_center(raw);
    CHECK(centred.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("u_center: n=4 worked example agrees exactly with the direct formula") {
    Eigen::MatrixXd raw(4, 4);
    raw << 0, 1, 2, 3,
           1, 0, 4, 5,
           2, 4, 0, 6,
           3, 5, 6, 0;
    const Eigen::MatrixXd centred = u_center(raw);
    const Eigen::MatrixXd direct = direct_u_center(raw);
    CHECK((centred - direct).cwiseAbs().maxCoeff() == 0.0);
    // this particular block happens to centre to exactly zero
    CHECK(centred.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("u_center: zero diagonal and row/column sums on random gram blocks") {
    Rng rng(17u);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 4 + static_cast<int>(rng.index(30));
        const ObjectSeries series = random_series(rng, n, 2);
        Eigen::MatrixXd gram = gram_matrix(KernelSpec::gaussian(), series, 0, n - 1);
        const Eigen::MatrixXd centred = u_center(gram);
        CHECK(centred.diagonal().cwiseAbs().maxCoeff() == 0.0);
        CHECK(centred.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(centred.colwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((centred - centred.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("u_center rejects blocks smaller than 4") {
    Eigen::MatrixXd raw = Eigen::MatrixXd::Ones(3, 3);
    CHECK_THROWS_AS(u_center(raw), TooShort);
}

TEST_CASE("u_centring annihilates constant offsets") {
    Rng rng(31u);
    const ObjectSeries series = random_series(rng, 15, 1);
    Eigen::MatrixXd gram = gram_matrix(KernelSpec::gaussian(), series, 0, 14);
    const Eigen::MatrixXd base = u_center(gram);
    Eigen::MatrixXd offset = gram.array() + 0.73;
    const Eigen::MatrixXd shifted = u_center(offset);
    CHECK((base - shifted).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("auto_hsic: degenerate constant series gives exactly zero") {
    const ObjectSeries series = constant_series(12, 4.0);
    // fixed bandwidth (the median heuristic is degenerate here)
    CHECK(auto_hsic(series, KernelSpec::gaussian_fixed(1.0), KernelSpec::gaussian_fixed(1.0), 1).v ==
          0.0);
    CHECK(auto_hsic(series, KernelSpec::brownian(), KernelSpec::brownian(), 2).v == 0.0);
    // but the median policy must propagate DegenerateBandwidth
    CHECK_THROWS_AS(auto_hsic(series, KernelSpec::gaussian(), KernelSpec::gaussian(), 1),
                    DegenerateBandwidth);
}

TEST_CASE("auto_hsic matches the U-statistic oracle") {
    Rng rng(23u);
    const ObjectSeries series = random_series(rng, 10, 1);
    const LagStatistic stat =
        auto_hsic(series, KernelSpec::gaussian(), KernelSpec::gaussian(), 1);
    const double oracle =
        auto_hsic_ustat_oracle(series, KernelSpec::gaussian(), KernelSpec::gaussian(), 1);
    CHECK(std::abs(stat.v - oracle) <= 1e-10 * (1.0 + std::abs(oracle)));
    CHECK(stat.scaled == 10.0 * stat.v);
}

TEST_CASE("oracle identity grid: T in 8..14, m in 1..3, all kernel families") {
    Rng rng(67u);
    for (int T = 8; T <= 14; ++T) {
        const ObjectSeries series = random_series(rng, T, 2);
        for (int m = 1; m <= 3; ++m) {
            for (const auto& spec :
                 {KernelSpec::gaussian(), KernelSpec::laplacian(), KernelSpec::brownian()}) {
                const double fast = auto_hsic(series, spec, spec, m).v;
                const double oracle = auto_hsic_ustat_oracle(series, spec, spec, m);
                CHECK(std::abs(fast - oracle) <= 1e-9 * (1.0 + std::abs(oracle)));
            }
        }
    }
}

TEST_CASE("auto_hsic preconditions") {
    Rng rng(3u);
    const ObjectSeries series = random_series(rng, 6, 1);
    CHECK_THROWS_AS(auto_hsic(series, KernelSpec::gaussian(), KernelSpec::gaussian(), 3),
                    TooShort);
    CHECK_THROWS_AS(auto_hsic(series, KernelSpec::gaussian(), KernelSpec::gaussian(), 0),
                    std::invalid_argument);
}

TEST_CASE("portmanteau sums the per-lag statistics") {
    Rng rng(29u);
    const ObjectSeries series = random_series(rng, 40, 2);
    const auto k = KernelSpec::gaussian();
    const PortmanteauStatistic p1 = portmanteau(series, k, k, 1);
    CHECK(p1.p == p1.per_lag[0].v);

    const PortmanteauStatistic p3 = portmanteau(series, k, k, 3);
    const double direct = p3.per_lag[0].v + p3.per_lag[1].v + p3.per_lag[2].v;
    CHECK(std::abs(p3.p - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
    CHECK(p3.scaled == doctest::Approx(40.0 * p3.p).epsilon(1e-15));

    const ObjectSeries flat = constant_series(30, 2.0);
    CHECK(portmanteau(flat, KernelSpec::brownian(), KernelSpec::brownian(), 3).p == 0.0);
}

TEST_CASE("h_kernel: identical arguments, permutation symmetry, naive 24-term check") {
    // all four pairs identical with a bounded kernel: k = l = 1 everywhere
    Eigen::Matrix4d ones = Eigen::Matrix4d::Ones();
    CHECK(h_kernel(ones, ones) == 0.0);

    Rng rng(41u);
    Eigen::Matrix4d k_vals, l_vals;
    for (int trial = 0; trial < 100; ++trial) {
        for (int i = 0; i < 4; ++i) {
            k_vals(i, i) = 1.0;
            l_vals(i, i) = 1.0;
            for (int j = i + 1; j < 4; ++j) {
                k_vals(i, j) = k_vals(j, i) = rng.uniform01();
                l_vals(i, j) = l_vals(j, i) = rng.uniform01();
            }
        }
        const double base = h_kernel(k_vals, l_vals);
        CHECK(base == doctest::Approx(naive_h(k_vals, l_vals)).epsilon(1e-14));

        // permuting the four arguments leaves the value unchanged
        int perm[4] = {0, 1, 2, 3};
        for (int s = 0; s < 4; ++s) std::swap(perm[s], perm[static_cast<int>(rng.index(4))]);
        Eigen::Matrix4d kp, lp;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                kp(i, j) = k_vals(perm[i], perm[j]);
                lp(i, j) = l_vals(perm[i], perm[j]);
            }
        CHECK(h_kernel(kp, lp) == base);
    }
}

TEST_CASE("oracle edge cases") {
    Rng rng(83u);
    // T - m = 4: a single h term
    const ObjectSeries tiny = random_series(rng, 5, 1);
    const auto spec = KernelSpec::gaussian_fixed(1.0);
    const Eigen::MatrixXd k_full = gram_matrix(spec, tiny, 1, 4);
    const Eigen::MatrixXd l_full = gram_matrix(spec, tiny, 0, 3);
    Eigen::Matrix4d kq = k_full, lq = l_full;
    CHECK(auto_hsic_ustat_oracle(tiny, spec, spec, 1) ==
          doctest::Approx(h_kernel(kq, lq)).epsilon(1e-14));

    CHECK(auto_hsic_ustat_oracle(constant_series(10, 1.0), KernelSpec::brownian(),
                                 KernelSpec::brownian(), 1) == 0.0);

    const ObjectSeries big = random_series(rng, 60, 1);
    CHECK_THROWS_AS(auto_hsic_ustat_oracle(big, spec, spec, 1), OracleTooLarge);
}

TEST_CASE("bilinearity: scaling the raw gram blocks scales V by the product") {
    Rng rng(53u);
    const ObjectSeries series = random_series(rng, 20, 1);
    CenteredGramPair pair =
        centered_gram_pair(series, KernelSpec::gaussian(), KernelSpec::gaussian(), 1);
    const double base = v_statistic(pair);
    // powers of two keep the scaling exact in floating point
    CenteredGramPair scaled;
    scaled.lag = pair.lag;
    scaled.a = 2.0 * pair.a;
    scaled.b = 4.0 * pair.b;
    CHECK(v_statistic(scaled) == 8.0 * base);
}

TEST_CASE("brownian kernel: scaling observations scales V by c^2") {
    Rng rng(59u);
    const ObjectSeries series = random_series(rng, 25, 2);
    const double base =
        auto_hsic(series, KernelSpec::brownian(), KernelSpec::brownian(), 1).v;
    for (double c : {2.0, 1.7}) {
        const ObjectSeries scaled(series.space(), (c * series.data()).eval());
        const double v =
            auto_hsic(scaled, KernelSpec::brownian(), KernelSpec::brownian(), 1).v;
        CHECK(std::abs(v - c * c * base) <= 1e-10 * std::abs(base));
    }
}

TEST_CASE("fixed-bandwidth gaussian V is translation invariant") {
    Rng rng(61u);
    const ObjectSeries series = random_series(rng, 30, 2);
    const auto spec = KernelSpec::gaussian_fixed(1.1);
    const double base = auto_hsic(series, spec, spec, 2).v;
    Eigen::MatrixXd shifted_data = series.data();
    shifted_data.col(0).array() += 5.0;
    shifted_data.col(1).array() += -2.5;
    const ObjectSeries shifted(series.space(), std::move(shifted_data));
    CHECK(std::abs(auto_hsic(shifted, spec, spec, 2).v - base) <= 1e-10);
}

TEST_CASE("consistency direction: V grows on a dependent DGP, T*V stays bounded under the null") {
    const auto spec = KernelSpec::gaussian();
    const int reps = 200;

    auto mean_v = [&](const DgpSpec& dgp, int T, bool scaled) {
        long double acc = 0.0L;
        for (int r = 0; r < reps; ++r) {
            Rng rng(derive_seed(3141u, static_cast<std::uint64_t>(T), static_cast<std::uint64_t>(r)));
            const ObjectSeries series = dgp_sample(dgp, T, rng);
            const LagStatistic stat = auto_hsic(series, spec, spec, 1);
            acc += scaled ? stat.scaled : stat.v;
        }
        return static_cast<double>(acc / reps);
    };

    const DgpSpec alt = ProductMA{1, InnovationLaw::normal()};
    const double v50 = mean_v(alt, 50, false);
    const double v400 = mean_v(alt, 400, false);
    CHECK(v400 > 0.0);
    CHECK(v400 > v50);

    const DgpSpec null_dgp = IIDNormal{1};
    CHECK(std::abs(mean_v(null_dgp, 50, true)) < 1.0);
    CHECK(std::abs(mean_v(null_dgp, 400, true)) < 1.0);
}
