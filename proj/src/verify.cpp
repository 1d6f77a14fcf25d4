#include "autohsic/verify.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "autohsic/simulation.hpp"

namespace autohsic {

bool VerificationReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

namespace {

ObjectSeries random_series(Rng& rng, int T, int d) {
    Eigen::MatrixXd data(T, d);
    for (int t = 0; t < T; ++t)
        for (int j = 0; j < d; ++j) data(t, j) = rng.normal();
    return ObjectSeries(SpaceDescriptor::euclidean(d), std::move(data));
}

VerificationCheck oracle_grid() {
    VerificationCheck check{"oracle equivalence (centred vs U-statistic)", true, ""};
    const std::vector<KernelSpec> kernels = {KernelSpec::gaussian(), KernelSpec::laplacian(),
                                             KernelSpec::brownian()};
    Rng rng(20240803u);
    for (int T : {8, 10, 12, 14}) {
        for (int d : {1, 3}) {
            const ObjectSeries series = random_series(rng, T, d);
            for (int m : {1, 2, 3}) {
                for (const auto& spec : kernels) {
                    const double fast = auto_hsic(series, spec, spec, m).v;
                    const double oracle = auto_hsic_ustat_oracle(series, spec, spec, m);
                    const double tol = 1e-9 * (1.0 + std::abs(oracle));
                    if (std::abs(fast - oracle) > tol) {
                        check.passed = false;
                        std::ostringstream os;
                        os << "T=" << T << " d=" << d << " m=" << m << " kernel="
                           << kernel_family_name(spec.family) << " fast=" << fast
                           << " oracle=" << oracle;
                        check.detail = os.str();
                        return check;
                    }
                }
            }
        }
    }
    check.detail = "72 (T, m, kernel) cases within 1e-9 relative";
    return check;
}

VerificationCheck u_centring_sums() {
    VerificationCheck check{"U-centring zero diagonal and row/column sums", true, ""};
    Rng rng(915u);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 4 + static_cast<int>(rng.index(47));
        Eigen::MatrixXd raw(n, n);
        for (int i = 0; i < n; ++i) {
            raw(i, i) = 1.0;
            for (int j = i + 1; j < n; ++j) {
                raw(i, j) = rng.uniform01();
                raw(j, i) = raw(i, j);
            }
        }
        const Eigen::MatrixXd centred = u_center(raw);
        const double scale =
            1e-9 * n * std::max(centred.cwiseAbs().maxCoeff(), 1.0);
        const double max_row = centred.rowwise().sum().cwiseAbs().maxCoeff();
        const double max_col = centred.colwise().sum().cwiseAbs().maxCoeff();
        const double max_diag = centred.diagonal().cwiseAbs().maxCoeff();
        if (max_diag != 0.0 || max_row > scale || max_col > scale) {
            check.passed = false;
            std::ostringstream os;
            os << "n=" << n << " max|rowsum|=" << max_row << " max|colsum|=" << max_col
               << " max|diag|=" << max_diag;
            check.detail = os.str();
            return check;
        }
    }
    check.detail = "100 random blocks, n in [4,50]";
    return check;
}

VerificationCheck kernel_psd() {
    VerificationCheck check{"kernel symmetry and positive semidefiniteness", true, ""};
    Rng rng(2718u);
    const ObjectSeries series = random_series(rng, 50, 3);
    for (const auto& spec :
         {KernelSpec::gaussian(), KernelSpec::laplacian(), KernelSpec::brownian()}) {
        const Eigen::MatrixXd gram = gram_matrix(spec, series, 0, series.length() - 1);
        const double asym = (gram - gram.transpose()).cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
        const double min_eig = solver.eigenvalues().minCoeff();
        if (asym != 0.0 || min_eig < -1e-8) {
            check.passed = false;
            std::ostringstream os;
            os << "kernel=" << kernel_family_name(spec.family) << " asym=" << asym
               << " min_eig=" << min_eig;
            check.detail = os.str();
            return check;
        }
    }
    check.detail = "3 kernels on 50 random 3-vectors";
    return check;
}

VerificationCheck bootstrap_mean_zero() {
    VerificationCheck check{"wild bootstrap conditional mean zero", true, ""};
    Rng rng(5280u);
    const ObjectSeries series = random_series(rng, 60, 1);
    const CenteredGramPair pair =
        centered_gram_pair(series, KernelSpec::gaussian(), KernelSpec::gaussian(), 1);
    const int B = 10000;
    long double sum = 0.0L, sum_sq = 0.0L;
    for (int b = 1; b <= B; ++b) {
        Rng stream = weight_stream(424242u, b, 1);
        const double v = bootstrap_statistic_once(pair, draw_weights(stream, pair.n()));
        sum += v;
        sum_sq += static_cast<long double>(v) * v;
    }
    const double mean = static_cast<double>(sum / B);
    const double var = static_cast<double>(sum_sq / B) - mean * mean;
    const double bound = 3.0 * std::sqrt(var / B);
    check.passed = std::abs(mean) <= bound;
    std::ostringstream os;
    os << "|mean|=" << std::abs(mean) << " bound=" << bound << " (B=" << B << ")";
    check.detail = os.str();
    return check;
}

} // namespace

VerificationReport run_verification() {
    VerificationReport report;
    report.checks.push_back(oracle_grid());
    report.checks.push_back(u_centring_sums());
    report.checks.push_back(kernel_psd());
    report.checks.push_back(bootstrap_mean_zero());
    return report;
}

} // namespace autohsic
