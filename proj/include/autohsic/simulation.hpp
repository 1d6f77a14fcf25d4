#ifndef AUTOHSIC_SIMULATION_HPP
#define AUTOHSIC_SIMULATION_HPP

#include <variant>

#include "autohsic/residual_bootstrap.hpp"
#include "autohsic/wild_bootstrap.hpp"

namespace autohsic {

struct InnovationLaw {
    enum class Kind { Normal, StudentT } kind = Kind::Normal;
    double nu = 0.0; // StudentT only

    static InnovationLaw normal() { return {Kind::Normal, 0.0}; }
    static InnovationLaw student_t(double nu) { return {Kind::StudentT, nu}; }
};

// Data-generating processes of the simulation study. Vector-valued DGPs draw
// innovations with covariance Sigma_ij = 0.5^|i-j|.
struct IIDNormal { int d = 1; };
struct IIDStudentT { int d = 1; double nu = 2.0; };
/// X_t = eta_t o eta_{t-1} o eta_{t-2} (Hadamard products).
struct ProductMA { int d = 1; InnovationLaw innovation = InnovationLaw::normal(); };
/// X_t = rho X_{t-1} + eta_t.
struct VAR1 { int d = 1; double rho = 0.3; InnovationLaw innovation = InnovationLaw::normal(); };
/// X_t = eta_t o sigma_t, sigma_t o sigma_t = 0.1 + 0.6 X_{t-1}^2 + 0.2 sigma_{t-1}^2.
struct ComponentGarch { int d = 1; InnovationLaw innovation = InnovationLaw::normal(); };
/// i.i.d. standard Brownian motion curves on a uniform grid.
struct FunctionalIID { int grid_points = 101; };
/// X_t = sigma_t eta_t with sigma_t^2(tau) = tau + int 0.6 e^{(tau^2+tau1^2)/2} X_{t-1}^2(tau1) dtau1.
struct FunctionalArch { int grid_points = 101; };
/// X_t(tau) = eta_t(tau) eta_{t-1}(tau).
struct FunctionalProductMA { int grid_points = 101; };
/// Matrix GARCH with omega=0.4, alpha=c, beta=0.6, A1=B1=cI, A2=B2=0.6I.
struct MatrixGarch { int d = 2; double c = 0.0; };
/// Scalar GARCH(1,1) with (0.2, 0.1, 0.5) and EGP 1/2/3 innovations; used by
/// the diagnostic experiments.
struct GarchEgp { int egp = 1; };

using DgpSpec = std::variant<IIDNormal, IIDStudentT, ProductMA, VAR1, ComponentGarch,
                             FunctionalIID, FunctionalArch, FunctionalProductMA, MatrixGarch,
                             GarchEgp>;

/// Recursive DGPs discard this many pre-sample steps by default.
inline constexpr int kDgpBurnIn = 200;

/// Lower Cholesky factor of Sigma_ij = 0.5^|i-j|.
Eigen::MatrixXd ar1_covariance_cholesky(int d);

/// L z with z i.i.d. standard normal.
Eigen::VectorXd mvn_sample(Rng& rng, const Eigen::MatrixXd& chol);

/// Multivariate t: mvn / sqrt(W/nu), W ~ chi^2_nu. nu = 1 and 2 are fine.
Eigen::VectorXd mvt_sample(Rng& rng, double nu, const Eigen::MatrixXd& chol);

/// Standard Brownian motion on the grid: B(0) = 0, independent N(0, dt)
/// increments.
Eigen::VectorXd brownian_path(Rng& rng, const std::vector<double>& grid);

/// The observation space a DGP generates into.
SpaceDescriptor dgp_space(const DgpSpec& spec);

/// Canonical label and reported dimension for table records.
std::string dgp_label(const DgpSpec& spec);
int dgp_dimension(const DgpSpec& spec);

/// True when the DGP drives the residual-diagnostic pipeline instead of the
/// raw serial-independence test.
bool dgp_is_diagnostic(const DgpSpec& spec);

/// Draws a length-T series; recursive DGPs discard burn_in pre-sample steps.
/// Throws NumericalBlowup if any state magnitude exceeds 1e12.
ObjectSeries dgp_sample(const DgpSpec& spec, int T, Rng& rng, int burn_in = kDgpBurnIn);

struct KernelPairSpec {
    KernelSpec k;
    KernelSpec l;
    std::string label() const { return kernel_family_name(k.family); }
};

struct ExperimentConfig {
    DgpSpec dgp;
    int T = 200;
    int replications = 1000; // R
    int bootstrap = 500;     // B
    double alpha = 0.05;
    std::vector<int> single_lags{1, 3};
    std::vector<int> portmanteau_lags{3, 6};
    std::vector<KernelPairSpec> kernels;
    std::uint64_t master_seed = 0;
    int threads = 0;
    int burn_in = kDgpBurnIn;

    void validate() const;
    int max_lag() const;
};

struct RejectionCell {
    std::string kernel;
    std::string statistic; // "V"/"P" (raw) or "Vhat"/"Phat" (diagnostic)
    int lag = 0;           // lag m for V, max lag M for P
    double rejection_pct = 0.0;
    double se_pct = 0.0;
};

struct RejectionTable {
    std::string schema = "autohsic-table/1";
    std::string dgp;
    int T = 0;
    int d = 0;
    int R = 0;
    int B = 0;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    int failed_replicates = 0;
    bool diagnostic = false;
    std::vector<RejectionCell> cells;
};

/// Seeded Monte Carlo rejection-rate experiment. Replications run as
/// independent tasks with derived substreams; the table is bit-reproducible
/// for any thread count. Aborts if more than 1% of replicates fail.
RejectionTable run_experiment(const ExperimentConfig& cfg);

} // namespace autohsic

#endif
