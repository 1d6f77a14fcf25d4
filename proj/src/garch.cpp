#include "autohsic/garch.hpp"

#include <cmath>

#include "autohsic/nelder_mead.hpp"

namespace autohsic {

void Garch11Params::validate() const {
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
    if (alpha < 0.0 || beta < 0.0) throw std::invalid_argument("alpha, beta must be nonnegative");
    if (!(alpha + beta < 1.0)) throw std::invalid_argument("alpha + beta must be below 1");
}

std::vector<double> garch11_filter(const std::vector<double>& series, const Garch11Params& params,
                                   double sigma2_init) {
    params.validate();
    if (!(sigma2_init > 0.0)) throw std::invalid_argument("sigma2_init must be positive");
    const std::size_t T = series.size();
    std::vector<double> sigma2(T);
    if (T == 0) return sigma2;
    sigma2[0] = sigma2_init;
    for (std::size_t t = 1; t < T; ++t) {
        sigma2[t] = params.omega + params.alpha * series[t - 1] * series[t - 1] +
                    params.beta * sigma2[t - 1];
        if (!(sigma2[t] > 0.0)) throw NonPositiveVariance("filtered variance not positive");
    }
    return sigma2;
}

namespace {

double sample_mean(const std::vector<double>& x) {
    long double acc = 0.0L;
    for (double v : x) acc += v;
    return static_cast<double>(acc / static_cast<long double>(x.size()));
}

// Divisor-n variance.
double sample_variance(const std::vector<double>& x) {
    const double mu = sample_mean(x);
    long double acc = 0.0L;
    for (double v : x) acc += (v - mu) * static_cast<long double>(v - mu);
    return static_cast<double>(acc / static_cast<long double>(x.size()));
}

// (omega, alpha, beta) <-> unconstrained (u0, u1, u2):
//   omega = exp(u0), (alpha, beta) = (1-eps) (exp(u1), exp(u2)) / (1 + exp(u1) + exp(u2)),
// which maps R^3 into the open constrained region. The softmax is shifted by
// its max so extreme vertices cannot overflow, and the (1-eps) factor keeps
// alpha + beta strictly below 1 in floating point.
Garch11Params from_unconstrained(const std::vector<double>& u) {
    constexpr double kMargin = 1e-6;
    const double shift = std::max({0.0, u[1], u[2]});
    const double e0 = std::exp(-shift);
    const double e1 = std::exp(u[1] - shift);
    const double e2 = std::exp(u[2] - shift);
    const double denom = e0 + e1 + e2;
    Garch11Params p;
    p.omega = std::exp(std::min(u[0], 700.0));
    p.alpha = (1.0 - kMargin) * e1 / denom;
    p.beta = (1.0 - kMargin) * e2 / denom;
    return p;
}

std::vector<double> to_unconstrained(const Garch11Params& p) {
    const double rest = std::max(1.0 - p.alpha - p.beta, 1e-10);
    return {std::log(p.omega), std::log(std::max(p.alpha, 1e-10) / rest),
            std::log(std::max(p.beta, 1e-10) / rest)};
}

// Negative Gaussian quasi-log-likelihood, constants dropped.
double negative_qlik(const std::vector<double>& series, const Garch11Params& params,
                     double sigma2_init) {
    const std::size_t T = series.size();
    long double acc = 0.0L;
    double s2 = sigma2_init;
    for (std::size_t t = 0; t < T; ++t) {
        if (t > 0)
            s2 = params.omega + params.alpha * series[t - 1] * series[t - 1] + params.beta * s2;
        acc += std::log(s2) + series[t] * series[t] / s2;
    }
    const double value = 0.5 * static_cast<double>(acc);
    return std::isfinite(value) ? value : 1e300;
}

} // namespace

Garch11Params garch11_qmle(const std::vector<double>& series) {
    const std::size_t T = series.size();
    if (T < 50) throw std::invalid_argument("QMLE needs T >= 50");
    const double var = sample_variance(series);
    if (!(var > 0.0)) throw EstimationFailed("series has zero sample variance");

    const auto objective = [&](const std::vector<double>& u) {
        return negative_qlik(series, from_unconstrained(u), var);
    };

    // Two deterministic starts, both targeting the sample variance as the
    // unconditional variance.
    Garch11Params start_a{var * (1.0 - 0.1 - 0.5), 0.1, 0.5};
    Garch11Params start_b{var * (1.0 - 0.05 - 0.90), 0.05, 0.90};

    NelderMeadOptions opts;
    opts.relative_simplex_tol = 1e-8;
    opts.max_evaluations = 5000;

    bool any_converged = false;
    double best_value = 0.0;
    std::vector<double> best_u;
    for (const auto& start : {start_a, start_b}) {
        const NelderMeadResult res = nelder_mead(objective, to_unconstrained(start), opts);
        if (!res.converged) continue;
        if (!any_converged || res.value < best_value) {
            any_converged = true;
            best_value = res.value;
            best_u = res.x;
        }
    }
    if (!any_converged)
        throw EstimationFailed("simplex search did not reach relative size 1e-8 in 5000 evals");
    Garch11Params fitted = from_unconstrained(best_u);
    fitted.validate();
    return fitted;
}

std::vector<double> garch11_residuals(const std::vector<double>& series,
                                      const Garch11Params& params) {
    params.validate();
    double s2_init = sample_variance(series);
    if (!(s2_init > 0.0)) s2_init = params.unconditional_variance();
    const std::vector<double> sigma2 = garch11_filter(series, params, s2_init);
    std::vector<double> resid(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) resid[t] = series[t] / std::sqrt(sigma2[t]);
    return resid;
}

std::vector<double> standardize_residuals(const std::vector<double>& residuals) {
    if (residuals.empty()) throw std::invalid_argument("empty residual vector");
    const double mu = sample_mean(residuals);
    const double var = sample_variance(residuals);
    if (!(var > 0.0)) throw DegenerateResiduals("residual sample variance is zero");
    const double sd = std::sqrt(var);
    std::vector<double> out(residuals.size());
    for (std::size_t t = 0; t < residuals.size(); ++t) out[t] = (residuals[t] - mu) / sd;
    return out;
}

std::vector<double> to_scalar_series(const ObjectSeries& series) {
    if (series.space().kind() != SpaceKind::EuclideanVector || series.space().element_size() != 1)
        throw ShapeMismatch("expected a scalar series");
    const int T = series.length();
    std::vector<double> out(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) out[static_cast<std::size_t>(t)] = series.data()(t, 0);
    return out;
}

ObjectSeries from_scalar_series(const std::vector<double>& values) {
    Eigen::MatrixXd data(static_cast<Eigen::Index>(values.size()), 1);
    for (std::size_t t = 0; t < values.size(); ++t)
        data(static_cast<Eigen::Index>(t), 0) = values[t];
    return ObjectSeries(SpaceDescriptor::euclidean(1), std::move(data));
}

Garch11Params Garch11Model::unpack(const std::vector<double>& params) {
    if (params.size() != 3) throw std::invalid_argument("garch11 expects 3 parameters");
    Garch11Params p{params[0], params[1], params[2]};
    p.validate();
    return p;
}

std::vector<double> Garch11Model::pack(const Garch11Params& params) {
    return {params.omega, params.alpha, params.beta};
}

ObjectSeries Garch11Model::simulate(const std::vector<double>& params,
                                    const ObjectSeries& innovations, int burn_in) const {
    const Garch11Params p = unpack(params);
    const std::vector<double> eta = to_scalar_series(innovations);
    if (burn_in < 0 || static_cast<std::size_t>(burn_in) >= eta.size())
        throw std::invalid_argument("burn_in must lie in [0, length)");
    const std::size_t total = eta.size();
    std::vector<double> x(total);
    double s2 = p.unconditional_variance();
    for (std::size_t t = 0; t < total; ++t) {
        if (t > 0) s2 = p.omega + p.alpha * x[t - 1] * x[t - 1] + p.beta * s2;
        x[t] = std::sqrt(s2) * eta[t];
    }
    x.erase(x.begin(), x.begin() + burn_in);
    return from_scalar_series(x);
}

std::vector<double> Garch11Model::estimate(const ObjectSeries& series) const {
    return pack(garch11_qmle(to_scalar_series(series)));
}

ObjectSeries Garch11Model::residuals(const ObjectSeries& series,
                                     const std::vector<double>& params) const {
    return from_scalar_series(garch11_residuals(to_scalar_series(series), unpack(params)));
}

} // namespace autohsic
