#include "autohsic/statistics.hpp"

#include <array>
#include <limits>

namespace autohsic {

void u_center_in_place(Eigen::MatrixXd& raw) {
    const Eigen::Index n = raw.rows();
    if (raw.cols() != n) throw ShapeMismatch("U-centring needs a square block");
    if (n < 4) throw TooShort("U-centring needs n >= 4");

    raw.diagonal().setZero();

    // Row/column/grand sums in extended precision, computed once.
    std::vector<long double> row_sums(static_cast<std::size_t>(n), 0.0L);
    std::vector<long double> col_sums(static_cast<std::size_t>(n), 0.0L);
    long double grand = 0.0L;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const long double v = raw(i, j);
            row_sums[static_cast<std::size_t>(i)] += v;
            col_sums[static_cast<std::size_t>(j)] += v;
            grand += v;
        }
    }
    const long double row_div = static_cast<long double>(n - 2);
    const long double grand_div = static_cast<long double>(n - 1) * static_cast<long double>(n - 2);
    const long double grand_term = grand / grand_div;

    const double max_raw = raw.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
        const long double ri = row_sums[static_cast<std::size_t>(i)] / row_div;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const long double cj = col_sums[static_cast<std::size_t>(j)] / row_div;
            raw(i, j) = static_cast<double>(raw(i, j) - ri - cj + grand_term);
        }
    }
    raw.diagonal().setZero();

    // A block whose centred entries all sit below the centring's own roundoff
    // bound is exactly degenerate (e.g. a constant kernel block); snap it to
    // zero so downstream statistics and bootstrap replicates are exact zeros
    // rather than coherent rounding residue.
    const double noise_floor =
        32.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_raw;
    if (raw.cwiseAbs().maxCoeff() <= noise_floor) raw.setZero();
}

Eigen::MatrixXd u_center(Eigen::MatrixXd raw) {
    u_center_in_place(raw);
    return raw;
}

CenteredGramPair centered_gram_pair(const ObjectSeries& series, const KernelSpec& k_spec,
                                    const KernelSpec& l_spec, int m) {
    const int T = series.length();
    if (m < 1) throw std::invalid_argument("lag must be >= 1");
    if (T - m < 4) throw TooShort("need T - m >= 4");
    CenteredGramPair pair;
    pair.lag = m;
    pair.a = gram_matrix(k_spec, series, m, T - 1);
    pair.b = gram_matrix(l_spec, series, 0, T - 1 - m);
    u_center_in_place(pair.a);
    u_center_in_place(pair.b);
    return pair;
}

double v_statistic(const CenteredGramPair& pair) {
    const Eigen::Index n = pair.a.rows();
    long double acc = 0.0L;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            acc += static_cast<long double>(pair.a(i, j)) * static_cast<long double>(pair.b(i, j));
    const long double denom =
        static_cast<long double>(n) * static_cast<long double>(n - 3);
    return static_cast<double>(acc / denom);
}

LagStatistic auto_hsic(const ObjectSeries& series, const KernelSpec& k_spec,
                       const KernelSpec& l_spec, int m) {
    const CenteredGramPair pair = centered_gram_pair(series, k_spec, l_spec, m);
    LagStatistic stat;
    stat.lag = m;
    stat.v = v_statistic(pair);
    stat.scaled = static_cast<double>(series.length()) * stat.v;
    return stat;
}

PortmanteauStatistic portmanteau(const ObjectSeries& series, const KernelSpec& k_spec,
                                 const KernelSpec& l_spec, int max_lag) {
    if (max_lag < 1) throw std::invalid_argument("max lag must be >= 1");
    if (series.length() - max_lag < 4) throw TooShort("need T - M >= 4");
    PortmanteauStatistic port;
    port.max_lag = max_lag;
    long double sum = 0.0L;
    for (int m = 1; m <= max_lag; ++m) {
        port.per_lag.push_back(auto_hsic(series, k_spec, l_spec, m));
        sum += port.per_lag.back().v;
    }
    port.p = static_cast<double>(sum);
    port.scaled = static_cast<double>(series.length()) * port.p;
    return port;
}

namespace {
// All 24 permutations of {0,1,2,3}, generated once.
constexpr std::array<std::array<int, 4>, 24> kPermutations = {{
    {0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 1, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {0, 3, 2, 1},
    {1, 0, 2, 3}, {1, 0, 3, 2}, {1, 2, 0, 3}, {1, 2, 3, 0}, {1, 3, 0, 2}, {1, 3, 2, 0},
    {2, 0, 1, 3}, {2, 0, 3, 1}, {2, 1, 0, 3}, {2, 1, 3, 0}, {2, 3, 0, 1}, {2, 3, 1, 0},
    {3, 0, 1, 2}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 1, 2, 0}, {3, 2, 0, 1}, {3, 2, 1, 0},
}};
} // namespace

double h_kernel(const Eigen::Matrix4d& k_vals, const Eigen::Matrix4d& l_vals) {
    long double acc = 0.0L;
    for (const auto& p : kPermutations) {
        const double k12 = k_vals(p[0], p[1]);
        acc += static_cast<long double>(k12) *
               (l_vals(p[2], p[3]) + l_vals(p[0], p[1]) - 2.0 * l_vals(p[0], p[2]));
    }
    return static_cast<double>(acc / 24.0L);
}

double auto_hsic_ustat_oracle(const ObjectSeries& series, const KernelSpec& k_spec,
                              const KernelSpec& l_spec, int m) {
    const int T = series.length();
    if (m < 1) throw std::invalid_argument("lag must be >= 1");
    const int n = T - m;
    if (n < 4) throw TooShort("need T - m >= 4");
    if (n > 40) throw OracleTooLarge("oracle is limited to T - m <= 40");

    const Eigen::MatrixXd k_full = gram_matrix(k_spec, series, m, T - 1);
    const Eigen::MatrixXd l_full = gram_matrix(l_spec, series, 0, T - 1 - m);

    long double acc = 0.0L;
    Eigen::Matrix4d kq, lq;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int q = j + 1; q < n; ++q) {
                for (int r = q + 1; r < n; ++r) {
                    const std::array<int, 4> idx = {i, j, q, r};
                    for (int s = 0; s < 4; ++s) {
                        for (int t = 0; t < 4; ++t) {
                            kq(s, t) = k_full(idx[s], idx[t]);
                            lq(s, t) = l_full(idx[s], idx[t]);
                        }
                    }
                    acc += h_kernel(kq, lq);
                }
            }
        }
    }
    const long double binom = static_cast<long double>(n) * (n - 1) * (n - 2) * (n - 3) / 24.0L;
    return static_cast<double>(acc / binom);
}

} // namespace autohsic
