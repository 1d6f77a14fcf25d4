#ifndef AUTOHSIC_GARCH_HPP
#define AUTOHSIC_GARCH_HPP

#include <memory>
#include <vector>

#include "autohsic/spaces.hpp"

namespace autohsic {

/// GARCH(1,1) parameters with the covariance-stationarity constraint.
struct Garch11Params {
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;

    void validate() const;
    double unconditional_variance() const { return omega / (1.0 - alpha - beta); }
};

/// Conditional variances from the recursion
///   sigma2_1 = sigma2_init,  sigma2_t = omega + alpha X_{t-1}^2 + beta sigma2_{t-1}.
std::vector<double> garch11_filter(const std::vector<double>& series, const Garch11Params& params,
                                   double sigma2_init);

/// Gaussian QMLE via Nelder-Mead on a log/logit reparameterization of the
/// constrained region {omega > 0, alpha, beta >= 0, alpha + beta < 1}.
/// sigma2_init is the sample variance. Throws EstimationFailed when no start
/// converges within 5000 evaluations at relative simplex size 1e-8.
Garch11Params garch11_qmle(const std::vector<double>& series);

/// Residuals eta_t = X_t / sigma_t under the filtered volatility.
std::vector<double> garch11_residuals(const std::vector<double>& series,
                                      const Garch11Params& params);

/// Affine rescaling to sample mean 0 and variance 1 (divisor n).
std::vector<double> standardize_residuals(const std::vector<double>& residuals);

/// Behavioral contract for causal models X_t = f(I_{t-1}, theta, eta_t) with
/// invertible residual map. residuals(simulate(theta, eta, 0), theta) must
/// recover eta up to initialization transients.
class CausalModel {
public:
    virtual ~CausalModel() = default;
    virtual std::string name() const = 0;
    virtual SpaceDescriptor innovation_space() const = 0;
    /// Simulates length(innovations) - burn_in observations, consuming the
    /// innovations in order and discarding the first burn_in outputs.
    virtual ObjectSeries simulate(const std::vector<double>& params,
                                  const ObjectSeries& innovations, int burn_in) const = 0;
    virtual std::vector<double> estimate(const ObjectSeries& series) const = 0;
    virtual ObjectSeries residuals(const ObjectSeries& series,
                                   const std::vector<double>& params) const = 0;
};

/// The shipped reference model: scalar GARCH(1,1) with Gaussian QMLE.
/// params are packed as {omega, alpha, beta}.
class Garch11Model final : public CausalModel {
public:
    std::string name() const override { return "garch11"; }
    SpaceDescriptor innovation_space() const override { return SpaceDescriptor::euclidean(1); }
    ObjectSeries simulate(const std::vector<double>& params, const ObjectSeries& innovations,
                          int burn_in) const override;
    std::vector<double> estimate(const ObjectSeries& series) const override;
    ObjectSeries residuals(const ObjectSeries& series,
                           const std::vector<double>& params) const override;

    static Garch11Params unpack(const std::vector<double>& params);
    static std::vector<double> pack(const Garch11Params& params);
};

/// Scalar view of a 1-dimensional ObjectSeries.
std::vector<double> to_scalar_series(const ObjectSeries& series);
ObjectSeries from_scalar_series(const std::vector<double>& values);

} // namespace autohsic

#endif
