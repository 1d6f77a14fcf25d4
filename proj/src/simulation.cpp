#include "autohsic/simulation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "autohsic/parallel.hpp"

namespace autohsic {

namespace {

constexpr double kBlowupLimit = 1e12;

void check_finite_state(double magnitude, const char* what) {
    if (!(magnitude <= kBlowupLimit))
        throw NumericalBlowup(std::string(what) + " exceeded 1e12; non-stationary parameterization");
}

std::vector<double> uniform_grid(int points) {
    if (points < 2) throw std::invalid_argument("functional grid needs >= 2 points");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
    grid.back() = 1.0;
    return grid;
}

Eigen::VectorXd innovation_sample(Rng& rng, const InnovationLaw& law,
                                  const Eigen::MatrixXd& chol) {
    if (law.kind == InnovationLaw::Kind::Normal) return mvn_sample(rng, chol);
    return mvt_sample(rng, law.nu, chol);
}

std::string innovation_label(const InnovationLaw& law) {
    if (law.kind == InnovationLaw::Kind::Normal) return "normal";
    std::ostringstream os;
    os << "t" << law.nu;
    return os.str();
}

// PSD square root via symmetric eigendecomposition, eigenvalues clamped at 0.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    Eigen::VectorXd lambda = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * lambda.asDiagonal() * solver.eigenvectors().transpose();
}

ObjectSeries vectors_to_series(const SpaceDescriptor& space,
                               const std::vector<Eigen::VectorXd>& rows) {
    Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()), space.element_size());
    for (std::size_t t = 0; t < rows.size(); ++t) data.row(static_cast<Eigen::Index>(t)) = rows[t];
    return ObjectSeries(space, std::move(data));
}

ObjectSeries sample_iid_vectors(int d, int T, Rng& rng, const InnovationLaw& law) {
    const Eigen::MatrixXd chol = ar1_covariance_cholesky(d);
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) rows.push_back(innovation_sample(rng, law, chol));
    return vectors_to_series(SpaceDescriptor::euclidean(d), rows);
}

ObjectSeries sample_product_ma(int d, int T, Rng& rng, const InnovationLaw& law) {
    const Eigen::MatrixXd chol = ar1_covariance_cholesky(d);
    std::vector<Eigen::VectorXd> eta;
    eta.reserve(static_cast<std::size_t>(T) + 2);
    for (int t = 0; t < T + 2; ++t) eta.push_back(innovation_sample(rng, law, chol));
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t)
        rows.push_back(eta[static_cast<std::size_t>(t + 2)]
                           .cwiseProduct(eta[static_cast<std::size_t>(t + 1)])
                           .cwiseProduct(eta[static_cast<std::size_t>(t)]));
    return vectors_to_series(SpaceDescriptor::euclidean(d), rows);
}

ObjectSeries sample_var1(int d, double rho, int T, Rng& rng, const InnovationLaw& law,
                         int burn_in) {
    const Eigen::MatrixXd chol = ar1_covariance_cholesky(d);
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(static_cast<std::size_t>(T));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    for (int t = 0; t < burn_in + T; ++t) {
        x = rho * x + innovation_sample(rng, law, chol);
        check_finite_state(x.cwiseAbs().maxCoeff(), "VAR1 state");
        if (t >= burn_in) rows.push_back(x);
    }
    return vectors_to_series(SpaceDescriptor::euclidean(d), rows);
}

ObjectSeries sample_component_garch(int d, int T, Rng& rng, const InnovationLaw& law,
                                    int burn_in) {
    const Eigen::MatrixXd chol = ar1_covariance_cholesky(d);
    const double omega = 0.1, alpha = 0.6, beta = 0.2;
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(static_cast<std::size_t>(T));
    // Start at the unconditional component variance omega / (1 - alpha - beta).
    Eigen::VectorXd sigma2 = Eigen::VectorXd::Constant(d, omega / (1.0 - alpha - beta));
    Eigen::VectorXd x = innovation_sample(rng, law, chol).cwiseProduct(sigma2.cwiseSqrt());
    for (int t = 0; t < burn_in + T; ++t) {
        sigma2 = (omega + alpha * x.array().square() + beta * sigma2.array()).matrix();
        x = innovation_sample(rng, law, chol).cwiseProduct(sigma2.cwiseSqrt());
        check_finite_state(x.cwiseAbs().maxCoeff(), "component GARCH state");
        if (t >= burn_in) rows.push_back(x);
    }
    return vectors_to_series(SpaceDescriptor::euclidean(d), rows);
}

ObjectSeries sample_functional_iid(int grid_points, int T, Rng& rng) {
    const SpaceDescriptor space = SpaceDescriptor::functional(uniform_grid(grid_points));
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) rows.push_back(brownian_path(rng, space.grid()));
    return vectors_to_series(space, rows);
}

ObjectSeries sample_functional_product_ma(int grid_points, int T, Rng& rng) {
    const SpaceDescriptor space = SpaceDescriptor::functional(uniform_grid(grid_points));
    std::vector<Eigen::VectorXd> eta;
    eta.reserve(static_cast<std::size_t>(T) + 1);
    for (int t = 0; t < T + 1; ++t) eta.push_back(brownian_path(rng, space.grid()));
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t)
        rows.push_back(eta[static_cast<std::size_t>(t + 1)].cwiseProduct(
            eta[static_cast<std::size_t>(t)]));
    return vectors_to_series(space, rows);
}

ObjectSeries sample_functional_arch(int grid_points, int T, Rng& rng, int burn_in) {
    const SpaceDescriptor space = SpaceDescriptor::functional(uniform_grid(grid_points));
    const auto& grid = space.grid();
    const auto& w = space.quad_weights();
    const int g = grid_points;
    Eigen::VectorXd tau(g), exp_half_tau2(g);
    for (int i = 0; i < g; ++i) {
        tau[i] = grid[static_cast<std::size_t>(i)];
        exp_half_tau2[i] = std::exp(0.5 * tau[i] * tau[i]);
    }
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(static_cast<std::size_t>(T));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(g); // X_0 = 0 before burn-in
    for (int t = 0; t < burn_in + T; ++t) {
        // integral of exp(tau1^2/2) X_{t-1}^2(tau1) by the trapezoid rule
        double integral = 0.0;
        for (int i = 0; i < g; ++i)
            integral += w[static_cast<std::size_t>(i)] * exp_half_tau2[i] * x[i] * x[i];
        const Eigen::VectorXd sigma2 = tau + 0.6 * integral * exp_half_tau2;
        x = sigma2.cwiseSqrt().cwiseProduct(brownian_path(rng, grid));
        check_finite_state(x.cwiseAbs().maxCoeff(), "functional ARCH state");
        if (t >= burn_in) rows.push_back(x);
    }
    return vectors_to_series(space, rows);
}

Eigen::MatrixXd matrix_garch_a0(int d) {
    Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) a0(i, j) = 0.4;
    a0(0, 0) = 1.0;
    return a0;
}

ObjectSeries sample_matrix_garch(int d, double c, int T, Rng& rng, int burn_in) {
    const double omega = 0.4, alpha = c, beta = 0.6;
    const double a2 = 0.6; // A2 = B2 = 0.6 I
    const Eigen::MatrixXd a0 = matrix_garch_a0(d);
    const Eigen::MatrixXd base = a0 * a0.transpose();

    // Fixed point of the c = 0 dynamics: y = omega/(1-beta),
    // S = base + a2^2 S  =>  S = base / (1 - a2^2).
    double y = omega / (1.0 - beta);
    Eigen::MatrixXd s1 = base / (1.0 - a2 * a2);
    Eigen::MatrixXd s2 = s1;

    const SpaceDescriptor space = SpaceDescriptor::matrix(d, d);
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(static_cast<std::size_t>(T));

    auto draw_eta = [&] {
        Eigen::MatrixXd eta(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) eta(i, j) = rng.normal();
        return eta;
    };

    auto observe = [&](const Eigen::MatrixXd& s1_t, const Eigen::MatrixXd& s2_t, double y_t) {
        const Eigen::MatrixXd u = s1_t / s1_t.trace() * y_t;
        const Eigen::MatrixXd v = s2_t / s2_t.trace();
        if (std::abs(v.trace() - 1.0) > 1e-10)
            throw NumericalBlowup("matrix GARCH: tr(V_t) drifted from 1");
        if (std::abs(u.trace() - y_t) > 1e-8 * y_t)
            throw NumericalBlowup("matrix GARCH: tr(U_t) drifted from y_t");
        return (psd_sqrt(u) * draw_eta() * psd_sqrt(v)).eval();
    };

    Eigen::MatrixXd x = observe(s1, s2, y);
    for (int t = 0; t < burn_in + T; ++t) {
        y = omega + alpha * (x * x.transpose()).trace() + beta * y;
        s1 = base + c * c * (x * x.transpose()) + a2 * a2 * s1;
        s2 = base + c * c * (x.transpose() * x) + a2 * a2 * s2;
        x = observe(s1, s2, y);
        check_finite_state(x.cwiseAbs().maxCoeff(), "matrix GARCH state");
        if (t >= burn_in) {
            Eigen::VectorXd flat(d * d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) flat[i * d + j] = x(i, j); // row-major
            rows.push_back(std::move(flat));
        }
    }
    return vectors_to_series(space, rows);
}

ObjectSeries sample_garch_egp(int egp, int T, Rng& rng, int burn_in) {
    const Garch11Params theta{0.2, 0.1, 0.5};
    const int total = burn_in + T;
    std::vector<double> eta(static_cast<std::size_t>(total));
    switch (egp) {
        case 1:
            for (auto& e : eta) e = rng.normal();
            break;
        case 2:
            for (auto& e : eta) e = rng.normal() / std::sqrt(rng.chi_squared(4.0) / 4.0);
            break;
        case 3: {
            std::vector<double> eps(static_cast<std::size_t>(total) + 2);
            for (auto& e : eps) e = rng.normal();
            for (int t = 0; t < total; ++t)
                eta[static_cast<std::size_t>(t)] = eps[static_cast<std::size_t>(t + 2)] *
                                                   eps[static_cast<std::size_t>(t + 1)] *
                                                   eps[static_cast<std::size_t>(t)];
            break;
        }
        default:
            throw std::invalid_argument("EGP index must be 1, 2 or 3");
    }
    std::vector<double> x(static_cast<std::size_t>(total));
    double s2 = theta.unconditional_variance();
    for (int t = 0; t < total; ++t) {
        if (t > 0)
            s2 = theta.omega + theta.alpha * x[static_cast<std::size_t>(t - 1)] *
                                   x[static_cast<std::size_t>(t - 1)] +
                 theta.beta * s2;
        x[static_cast<std::size_t>(t)] = std::sqrt(s2) * eta[static_cast<std::size_t>(t)];
        check_finite_state(std::abs(x[static_cast<std::size_t>(t)]), "GARCH EGP state");
    }
    x.erase(x.begin(), x.begin() + burn_in);
    return from_scalar_series(x);
}

} // namespace

Eigen::MatrixXd ar1_covariance_cholesky(int d) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    Eigen::MatrixXd sigma(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) sigma(i, j) = std::pow(0.5, std::abs(i - j));
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) throw std::runtime_error("Sigma factorization failed");
    return llt.matrixL();
}

Eigen::VectorXd mvn_sample(Rng& rng, const Eigen::MatrixXd& chol) {
    Eigen::VectorXd z(chol.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
    return chol * z;
}

Eigen::VectorXd mvt_sample(Rng& rng, double nu, const Eigen::MatrixXd& chol) {
    if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
    const Eigen::VectorXd z = mvn_sample(rng, chol);
    const double w = rng.chi_squared(nu);
    return z / std::sqrt(w / nu);
}

Eigen::VectorXd brownian_path(Rng& rng, const std::vector<double>& grid) {
    Eigen::VectorXd path(static_cast<Eigen::Index>(grid.size()));
    path[0] = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double dt = grid[i] - grid[i - 1];
        path[static_cast<Eigen::Index>(i)] =
            path[static_cast<Eigen::Index>(i - 1)] + std::sqrt(dt) * rng.normal();
    }
    return path;
}

SpaceDescriptor dgp_space(const DgpSpec& spec) {
    return std::visit(
        [](const auto& s) -> SpaceDescriptor {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, IIDNormal> || std::is_same_v<S, IIDStudentT> ||
                          std::is_same_v<S, ProductMA> || std::is_same_v<S, VAR1> ||
                          std::is_same_v<S, ComponentGarch>) {
                return SpaceDescriptor::euclidean(s.d);
            } else if constexpr (std::is_same_v<S, FunctionalIID> ||
                                 std::is_same_v<S, FunctionalArch> ||
                                 std::is_same_v<S, FunctionalProductMA>) {
                return SpaceDescriptor::functional(uniform_grid(s.grid_points));
            } else if constexpr (std::is_same_v<S, MatrixGarch>) {
                return SpaceDescriptor::matrix(s.d, s.d);
            } else {
                return SpaceDescriptor::euclidean(1);
            }
        },
        spec);
}

std::string dgp_label(const DgpSpec& spec) {
    std::ostringstream os;
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, IIDNormal>) {
                os << "iid_normal";
            } else if constexpr (std::is_same_v<S, IIDStudentT>) {
                os << "iid_t" << s.nu;
            } else if constexpr (std::is_same_v<S, ProductMA>) {
                os << "product_ma(" << innovation_label(s.innovation) << ")";
            } else if constexpr (std::is_same_v<S, VAR1>) {
                os << "var1(rho=" << s.rho << "," << innovation_label(s.innovation) << ")";
            } else if constexpr (std::is_same_v<S, ComponentGarch>) {
                os << "component_garch(" << innovation_label(s.innovation) << ")";
            } else if constexpr (std::is_same_v<S, FunctionalIID>) {
                os << "functional_iid";
            } else if constexpr (std::is_same_v<S, FunctionalArch>) {
                os << "functional_arch";
            } else if constexpr (std::is_same_v<S, FunctionalProductMA>) {
                os << "functional_product_ma";
            } else if constexpr (std::is_same_v<S, MatrixGarch>) {
                os << "matrix_garch(c=" << s.c << ")";
            } else if constexpr (std::is_same_v<S, GarchEgp>) {
                os << "garch_egp" << s.egp;
            }
        },
        spec);
    return os.str();
}

int dgp_dimension(const DgpSpec& spec) {
    return std::visit(
        [](const auto& s) -> int {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, IIDNormal> || std::is_same_v<S, IIDStudentT> ||
                          std::is_same_v<S, ProductMA> || std::is_same_v<S, VAR1> ||
                          std::is_same_v<S, ComponentGarch> || std::is_same_v<S, MatrixGarch>) {
                return s.d;
            } else if constexpr (std::is_same_v<S, FunctionalIID> ||
                                 std::is_same_v<S, FunctionalArch> ||
                                 std::is_same_v<S, FunctionalProductMA>) {
                return s.grid_points;
            } else {
                return 1;
            }
        },
        spec);
}

bool dgp_is_diagnostic(const DgpSpec& spec) { return std::holds_alternative<GarchEgp>(spec); }

ObjectSeries dgp_sample(const DgpSpec& spec, int T, Rng& rng, int burn_in) {
    if (T < 10) throw std::invalid_argument("T must be >= 10");
    if (burn_in < 0) throw std::invalid_argument("burn_in must be nonnegative");
    return std::visit(
        [&](const auto& s) -> ObjectSeries {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, IIDNormal>) {
                return sample_iid_vectors(s.d, T, rng, InnovationLaw::normal());
            } else if constexpr (std::is_same_v<S, IIDStudentT>) {
                return sample_iid_vectors(s.d, T, rng, InnovationLaw::student_t(s.nu));
            } else if constexpr (std::is_same_v<S, ProductMA>) {
                return sample_product_ma(s.d, T, rng, s.innovation);
            } else if constexpr (std::is_same_v<S, VAR1>) {
                return sample_var1(s.d, s.rho, T, rng, s.innovation, burn_in);
            } else if constexpr (std::is_same_v<S, ComponentGarch>) {
                return sample_component_garch(s.d, T, rng, s.innovation, burn_in);
            } else if constexpr (std::is_same_v<S, FunctionalIID>) {
                return sample_functional_iid(s.grid_points, T, rng);
            } else if constexpr (std::is_same_v<S, FunctionalArch>) {
                return sample_functional_arch(s.grid_points, T, rng, burn_in);
            } else if constexpr (std::is_same_v<S, FunctionalProductMA>) {
                return sample_functional_product_ma(s.grid_points, T, rng);
            } else if constexpr (std::is_same_v<S, MatrixGarch>) {
                return sample_matrix_garch(s.d, s.c, T, rng, burn_in);
            } else {
                return sample_garch_egp(s.egp, T, rng, burn_in);
            }
        },
        spec);
}

void ExperimentConfig::validate() const {
    if (T < 10) throw std::invalid_argument("T must be >= 10");
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (bootstrap < 1) throw std::invalid_argument("bootstrap replications must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (kernels.empty()) throw std::invalid_argument("at least one kernel pair is required");
    if (single_lags.empty() && portmanteau_lags.empty())
        throw std::invalid_argument("at least one statistic is required");
    for (int m : single_lags)
        if (m < 1) throw std::invalid_argument("lags must be >= 1");
    for (int m : portmanteau_lags)
        if (m < 1) throw std::invalid_argument("portmanteau lags must be >= 1");
    if (T - max_lag() < 4) throw TooShort("need T - max lag >= 4");
}

int ExperimentConfig::max_lag() const {
    int mx = 1;
    for (int m : single_lags) mx = std::max(mx, m);
    for (int m : portmanteau_lags) mx = std::max(mx, m);
    return mx;
}

namespace {

struct ReplicationOutcome {
    bool failed = false;
    // reject[kernel][statistic] in the order the cells are laid out
    std::vector<std::vector<bool>> reject;
};

// Observed and bootstrap per-lag V values for one kernel pair.
struct LagDraws {
    std::vector<double> observed;                // [m-1]
    std::vector<std::vector<double>> replicates; // [m-1][b]
};

ReplicationOutcome run_raw_replication(const ExperimentConfig& cfg, std::uint64_t rep_seed) {
    const int max_lag = cfg.max_lag();
    const int T = cfg.T;
    const int B = cfg.bootstrap;
    Rng data_rng(derive_seed(rep_seed, 0x64617461ULL));
    const ObjectSeries series = dgp_sample(cfg.dgp, T, data_rng, cfg.burn_in);
    const SeriesGeometry geometry(series);

    const std::size_t n_kernels = cfg.kernels.size();
    std::vector<LagDraws> draws(n_kernels);
    std::vector<std::vector<Eigen::MatrixXd>> products(n_kernels);

    for (std::size_t k = 0; k < n_kernels; ++k) {
        const auto& pair_spec = cfg.kernels[k];
        const auto gamma_k = resolve_bandwidth(pair_spec.k, geometry);
        const auto gamma_l = resolve_bandwidth(pair_spec.l, geometry);
        const Eigen::MatrixXd k_full = full_gram(pair_spec.k, gamma_k, geometry);
        const Eigen::MatrixXd l_full =
            (pair_spec.k == pair_spec.l) ? k_full : full_gram(pair_spec.l, gamma_l, geometry);
        draws[k].observed.resize(static_cast<std::size_t>(max_lag));
        for (int m = 1; m <= max_lag; ++m) {
            const int n = T - m;
            CenteredGramPair pair;
            pair.lag = m;
            pair.a = k_full.block(m, m, n, n);
            pair.b = l_full.block(0, 0, n, n);
            u_center_in_place(pair.a);
            u_center_in_place(pair.b);
            draws[k].observed[static_cast<std::size_t>(m - 1)] = v_statistic(pair);
            products[k].push_back(pair.a.cwiseProduct(pair.b));
        }
        draws[k].replicates.assign(static_cast<std::size_t>(max_lag),
                                   std::vector<double>(static_cast<std::size_t>(B)));
    }

    const std::uint64_t boot_seed = derive_seed(rep_seed, 0x626f6f74ULL);
    for (int b = 1; b <= B; ++b) {
        for (int m = 1; m <= max_lag; ++m) {
            const int n = T - m;
            Rng stream = weight_stream(boot_seed, b, m);
            const std::vector<double> w = draw_weights(stream, n);
            const Eigen::Map<const Eigen::VectorXd> wv(w.data(), n);
            const double denom = static_cast<double>(n) * static_cast<double>(n - 3);
            for (std::size_t k = 0; k < n_kernels; ++k) {
                const double quad = wv.dot(products[k][static_cast<std::size_t>(m - 1)] * wv);
                draws[k].replicates[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(
                    b - 1)] = quad / denom;
            }
        }
    }

    ReplicationOutcome outcome;
    outcome.reject.resize(n_kernels);
    for (std::size_t k = 0; k < n_kernels; ++k) {
        auto& flags = outcome.reject[k];
        for (int m : cfg.single_lags) {
            const auto& reps = draws[k].replicates[static_cast<std::size_t>(m - 1)];
            const double crit = empirical_quantile_upper(reps, 1.0 - cfg.alpha);
            flags.push_back(draws[k].observed[static_cast<std::size_t>(m - 1)] > crit);
        }
        for (int M : cfg.portmanteau_lags) {
            double obs = 0.0;
            for (int m = 1; m <= M; ++m) obs += draws[k].observed[static_cast<std::size_t>(m - 1)];
            std::vector<double> reps(static_cast<std::size_t>(B), 0.0);
            for (int m = 1; m <= M; ++m)
                for (int b = 0; b < B; ++b)
                    reps[static_cast<std::size_t>(b)] +=
                        draws[k].replicates[static_cast<std::size_t>(m - 1)]
                                           [static_cast<std::size_t>(b)];
            const double crit = empirical_quantile_upper(reps, 1.0 - cfg.alpha);
            flags.push_back(obs > crit);
        }
    }
    return outcome;
}

ReplicationOutcome run_diagnostic_replication(const ExperimentConfig& cfg,
                                              std::uint64_t rep_seed) {
    const int max_lag = cfg.max_lag();
    const int T = cfg.T;
    const int B = cfg.bootstrap;
    Rng data_rng(derive_seed(rep_seed, 0x64617461ULL));
    const ObjectSeries series = dgp_sample(cfg.dgp, T, data_rng, cfg.burn_in);

    const Garch11Model model;
    const std::vector<double> fitted = model.estimate(series);
    const ObjectSeries residuals = model.residuals(series, fitted);

    const std::size_t n_kernels = cfg.kernels.size();
    std::vector<LagDraws> draws(n_kernels);
    for (std::size_t k = 0; k < n_kernels; ++k) {
        draws[k].observed =
            residual_lag_statistics(residuals, cfg.kernels[k].k, cfg.kernels[k].l, max_lag);
        draws[k].replicates.assign(static_cast<std::size_t>(max_lag),
                                   std::vector<double>(static_cast<std::size_t>(B)));
    }

    // Standardized resampling pool (scalar residual series).
    const std::vector<double> std_resid =
        standardize_residuals(to_scalar_series(residuals));
    const std::size_t sim_length = static_cast<std::size_t>(T) + kResidualBootstrapBurnIn;
    const std::uint64_t boot_seed = derive_seed(rep_seed, 0x626f6f74ULL);

    for (int b = 1; b <= B; ++b) {
        for (int attempt = 0;; ++attempt) {
            Rng stream(derive_seed(boot_seed, 0x726573ULL, static_cast<std::uint64_t>(b),
                                   static_cast<std::uint64_t>(attempt)));
            std::vector<double> innovations(sim_length);
            for (auto& e : innovations) e = std_resid[stream.index(std_resid.size())];
            const ObjectSeries sim = model.simulate(fitted, from_scalar_series(innovations),
                                                    kResidualBootstrapBurnIn);
            try {
                const std::vector<double> refit = model.estimate(sim);
                const ObjectSeries resid_b = model.residuals(sim, refit);
                for (std::size_t k = 0; k < n_kernels; ++k) {
                    const std::vector<double> v_star = residual_lag_statistics(
                        resid_b, cfg.kernels[k].k, cfg.kernels[k].l, max_lag);
                    for (int m = 1; m <= max_lag; ++m)
                        draws[k].replicates[static_cast<std::size_t>(m - 1)]
                                           [static_cast<std::size_t>(b - 1)] =
                            v_star[static_cast<std::size_t>(m - 1)];
                }
                break;
            } catch (const EstimationFailed&) {
                if (attempt >= 1) throw;
            }
        }
    }

    ReplicationOutcome outcome;
    outcome.reject.resize(n_kernels);
    for (std::size_t k = 0; k < n_kernels; ++k) {
        auto& flags = outcome.reject[k];
        for (int m : cfg.single_lags) {
            const auto& reps = draws[k].replicates[static_cast<std::size_t>(m - 1)];
            const double crit = empirical_quantile_upper(reps, 1.0 - cfg.alpha);
            flags.push_back(draws[k].observed[static_cast<std::size_t>(m - 1)] > crit);
        }
        for (int M : cfg.portmanteau_lags) {
            double obs = 0.0;
            for (int m = 1; m <= M; ++m) obs += draws[k].observed[static_cast<std::size_t>(m - 1)];
            std::vector<double> reps(static_cast<std::size_t>(B), 0.0);
            for (int m = 1; m <= M; ++m)
                for (int b = 0; b < B; ++b)
                    reps[static_cast<std::size_t>(b)] +=
                        draws[k].replicates[static_cast<std::size_t>(m - 1)]
                                           [static_cast<std::size_t>(b)];
            const double crit = empirical_quantile_upper(reps, 1.0 - cfg.alpha);
            flags.push_back(obs > crit);
        }
    }
    return outcome;
}

} // namespace

RejectionTable run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const bool diagnostic = dgp_is_diagnostic(cfg.dgp);
    const std::size_t R = static_cast<std::size_t>(cfg.replications);

    std::vector<ReplicationOutcome> outcomes(R);
    parallel_for(R, cfg.threads, [&](std::size_t r) {
        const std::uint64_t rep_seed =
            derive_seed(cfg.master_seed, 0x7265706cULL, static_cast<std::uint64_t>(r));
        try {
            outcomes[r] = diagnostic ? run_diagnostic_replication(cfg, rep_seed)
                                     : run_raw_replication(cfg, rep_seed);
        } catch (const NumericalBlowup&) {
            outcomes[r].failed = true;
        } catch (const DegenerateBandwidth&) {
            outcomes[r].failed = true;
        } catch (const EstimationFailed&) {
            outcomes[r].failed = true;
        }
    });

    std::size_t failed = 0;
    for (const auto& o : outcomes)
        if (o.failed) ++failed;
    if (failed * 100 > R)
        throw std::runtime_error("more than 1% of replicates failed (" + std::to_string(failed) +
                                 " of " + std::to_string(R) + ")");

    RejectionTable table;
    table.dgp = dgp_label(cfg.dgp);
    table.T = cfg.T;
    table.d = dgp_dimension(cfg.dgp);
    table.R = cfg.replications;
    table.B = cfg.bootstrap;
    table.alpha = cfg.alpha;
    table.seed = cfg.master_seed;
    table.failed_replicates = static_cast<int>(failed);
    table.diagnostic = diagnostic;

    const std::size_t n_stats = cfg.single_lags.size() + cfg.portmanteau_lags.size();
    const double successes = static_cast<double>(R - failed);
    for (std::size_t k = 0; k < cfg.kernels.size(); ++k) {
        for (std::size_t s = 0; s < n_stats; ++s) {
            std::size_t rejects = 0;
            for (const auto& o : outcomes)
                if (!o.failed && o.reject[k][s]) ++rejects;
            const double phat = successes > 0 ? static_cast<double>(rejects) / successes : 0.0;
            RejectionCell cell;
            cell.kernel = cfg.kernels[k].label();
            const bool is_single = s < cfg.single_lags.size();
            cell.statistic = is_single ? (diagnostic ? "Vhat" : "V") : (diagnostic ? "Phat" : "P");
            cell.lag = is_single ? cfg.single_lags[s]
                                 : cfg.portmanteau_lags[s - cfg.single_lags.size()];
            cell.rejection_pct = 100.0 * phat;
            cell.se_pct = 100.0 * std::sqrt(phat * (1.0 - phat) / std::max(successes, 1.0));
            table.cells.push_back(std::move(cell));
        }
    }
    return table;
}

} // namespace autohsic
