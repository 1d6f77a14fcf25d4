#ifndef AUTOHSIC_STATISTICS_HPP
#define AUTOHSIC_STATISTICS_HPP

#include <vector>

#include "autohsic/kernels.hpp"

namespace autohsic {

/// U-centres a raw Gram block in place: the diagonal is zeroed first, then
/// for i != j
///   a~_ij = a_ij - rowsum_i/(n-2) - colsum_j/(n-2) + grandsum/((n-1)(n-2)),
/// and the diagonal of the output is zero. The result has zero row and
/// column sums. Throws TooShort for n < 4.
void u_center_in_place(Eigen::MatrixXd& raw);

Eigen::MatrixXd u_center(Eigen::MatrixXd raw);

/// The zero-diagonal U-centred pair (a, b) at lag m: a from k(X_i, X_j) and b
/// from l(X_{i-m}, X_{j-m}), both on the overlap indices, n = T - m.
struct CenteredGramPair {
    int lag = 0;
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
    int n() const { return static_cast<int>(a.rows()); }
};

/// Builds the centred pair for lag m, resolving bandwidths once from the full
/// series. Requires T - m >= 4 and m >= 1.
CenteredGramPair centered_gram_pair(const ObjectSeries& series, const KernelSpec& k_spec,
                                    const KernelSpec& l_spec, int m);

struct LagStatistic {
    int lag = 0;
    double v = 0.0;      // V_{T,m}
    double scaled = 0.0; // T * V_{T,m}
};

/// V_{T,m} from a centred pair: sum(a o b) / (n (n-3)) with n = T - m.
double v_statistic(const CenteredGramPair& pair);

/// The single-lag AutoHSIC statistic. May legitimately be negative in finite
/// samples; no clamping.
LagStatistic auto_hsic(const ObjectSeries& series, const KernelSpec& k_spec,
                       const KernelSpec& l_spec, int m);

struct PortmanteauStatistic {
    int max_lag = 0;
    std::vector<LagStatistic> per_lag;
    double p = 0.0;      // sum of V_{T,m}, m = 1..M
    double scaled = 0.0; // T * p
};

/// Per-lag statistics for m = 1..M and their sum. Requires T - M >= 4.
PortmanteauStatistic portmanteau(const ObjectSeries& series, const KernelSpec& k_spec,
                                 const KernelSpec& l_spec, int max_lag);

/// The symmetric fourth-order kernel h averaged over the 24 permutations of
/// four lagged pairs. k_vals(i,j) = k(x_i, x_j), l_vals(i,j) = l(y_i, y_j)
/// for the quadruple's elements.
double h_kernel(const Eigen::Matrix4d& k_vals, const Eigen::Matrix4d& l_vals);

/// Brute-force O(n^4) U-statistic form of V_{T,m}: the independent oracle the
/// fast centred path is validated against. Guarded to T - m <= 40.
double auto_hsic_ustat_oracle(const ObjectSeries& series, const KernelSpec& k_spec,
                              const KernelSpec& l_spec, int m);

} // namespace autohsic

#endif
