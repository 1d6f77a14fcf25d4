#include "autohsic/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace autohsic {

namespace {
constexpr double kDegenerateThreshold = 1e-12;

double kernel_value(KernelFamily family, double gamma, double dist, double norm_x,
                    double norm_y) {
    switch (family) {
        case KernelFamily::Gaussian:
            return std::exp(-dist * dist / (2.0 * gamma * gamma));
        case KernelFamily::Laplacian:
            return std::exp(-dist / gamma);
        case KernelFamily::BrownianDistance:
            return norm_x + norm_y - dist;
    }
    return 0.0;
}
} // namespace

std::string kernel_family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::Gaussian: return "gaussian";
        case KernelFamily::Laplacian: return "laplacian";
        case KernelFamily::BrownianDistance: return "browniandistance";
    }
    return "?";
}

double median_bandwidth(const ObjectSeries& series) {
    const int T = series.length();
    if (T < 2) throw std::invalid_argument("median bandwidth needs at least 2 observations");
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(T) * (T - 1) / 2);
    for (int i = 0; i < T; ++i)
        for (int j = i + 1; j < T; ++j)
            dists.push_back(distance(series.space(), series.element(i), series.element(j)));
    std::sort(dists.begin(), dists.end());
    const std::size_t n = dists.size();
    const double med =
        (n % 2 == 1) ? dists[n / 2] : 0.5 * (dists[n / 2 - 1] + dists[n / 2]);
    if (med < kDegenerateThreshold)
        throw DegenerateBandwidth("median pairwise distance below 1e-12");
    return med;
}

double eval_kernel(const KernelSpec& spec, std::optional<double> gamma,
                   const Eigen::Ref<const Eigen::RowVectorXd>& x,
                   const Eigen::Ref<const Eigen::RowVectorXd>& y, const SpaceDescriptor& space) {
    if (spec.needs_bandwidth()) {
        if (!gamma) throw MissingBandwidth("Gaussian/Laplacian kernel needs a bandwidth");
        if (*gamma <= 0.0) throw MissingBandwidth("bandwidth must be positive");
        return kernel_value(spec.family, *gamma, distance(space, x, y), 0.0, 0.0);
    }
    if (gamma) throw MissingBandwidth("BrownianDistance kernel carries no bandwidth");
    return kernel_value(spec.family, 0.0, distance(space, x, y), norm(space, x), norm(space, y));
}

std::optional<double> resolve_bandwidth(const KernelSpec& spec, const ObjectSeries& series) {
    if (!spec.needs_bandwidth()) return std::nullopt;
    if (spec.fixed_bandwidth) {
        if (*spec.fixed_bandwidth <= 0.0)
            throw std::invalid_argument("fixed bandwidth must be positive");
        return spec.fixed_bandwidth;
    }
    return median_bandwidth(series);
}

Eigen::MatrixXd distance_matrix(const ObjectSeries& series) {
    const int T = series.length();
    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(T, T);
    for (int i = 0; i < T; ++i) {
        for (int j = i + 1; j < T; ++j) {
            const double d = distance(series.space(), series.element(i), series.element(j));
            dist(i, j) = d;
            dist(j, i) = d;
        }
    }
    return dist;
}

Eigen::VectorXd series_norms(const ObjectSeries& series) {
    const int T = series.length();
    Eigen::VectorXd norms(T);
    for (int t = 0; t < T; ++t) norms[t] = norm(series.space(), series.element(t));
    return norms;
}

Eigen::MatrixXd gram_from_distances(const KernelSpec& spec, std::optional<double> gamma,
                                    const Eigen::MatrixXd& dist, const Eigen::VectorXd& norms,
                                    int lo, int hi) {
    if (lo < 0 || hi >= dist.rows() || lo > hi)
        throw std::invalid_argument("gram index range out of bounds");
    const int n = hi - lo + 1;
    Eigen::MatrixXd gram(n, n);
    if (spec.needs_bandwidth()) {
        if (!gamma) throw MissingBandwidth("Gaussian/Laplacian kernel needs a bandwidth");
        const double g = *gamma;
        for (int i = 0; i < n; ++i) {
            gram(i, i) = 1.0;
            for (int j = i + 1; j < n; ++j) {
                const double k = kernel_value(spec.family, g, dist(lo + i, lo + j), 0.0, 0.0);
                gram(i, j) = k;
                gram(j, i) = k;
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            gram(i, i) = 2.0 * norms[lo + i];
            for (int j = i + 1; j < n; ++j) {
                const double k = norms[lo + i] + norms[lo + j] - dist(lo + i, lo + j);
                gram(i, j) = k;
                gram(j, i) = k;
            }
        }
    }
    return gram;
}

SeriesGeometry::SeriesGeometry(const ObjectSeries& series)
    : dist_(distance_matrix(series)), norms_(series_norms(series)) {
    const Eigen::Index T = dist_.rows();
    if (T >= 2) {
        std::vector<double> dists;
        dists.reserve(static_cast<std::size_t>(T) * (T - 1) / 2);
        for (Eigen::Index i = 0; i < T; ++i)
            for (Eigen::Index j = i + 1; j < T; ++j) dists.push_back(dist_(i, j));
        std::sort(dists.begin(), dists.end());
        const std::size_t n = dists.size();
        median_raw_ = (n % 2 == 1) ? dists[n / 2] : 0.5 * (dists[n / 2 - 1] + dists[n / 2]);
    }
}

double SeriesGeometry::median_distance() const {
    if (length() < 2) throw std::invalid_argument("median bandwidth needs at least 2 observations");
    if (median_raw_ < kDegenerateThreshold)
        throw DegenerateBandwidth("median pairwise distance below 1e-12");
    return median_raw_;
}

std::optional<double> resolve_bandwidth(const KernelSpec& spec, const SeriesGeometry& geometry) {
    if (!spec.needs_bandwidth()) return std::nullopt;
    if (spec.fixed_bandwidth) {
        if (*spec.fixed_bandwidth <= 0.0)
            throw std::invalid_argument("fixed bandwidth must be positive");
        return spec.fixed_bandwidth;
    }
    return geometry.median_distance();
}

Eigen::MatrixXd full_gram(const KernelSpec& spec, std::optional<double> gamma,
                          const SeriesGeometry& geometry) {
    return gram_from_distances(spec, gamma, geometry.distances(), geometry.norms(), 0,
                               geometry.length() - 1);
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const ObjectSeries& series, int lo, int hi) {
    if (lo < 0 || hi >= series.length() || lo > hi)
        throw std::invalid_argument("gram index range out of bounds");
    const std::optional<double> gamma = resolve_bandwidth(spec, series);
    const int n = hi - lo + 1;
    Eigen::MatrixXd gram(n, n);
    const auto& space = series.space();
    if (spec.needs_bandwidth()) {
        for (int i = 0; i < n; ++i) {
            gram(i, i) = 1.0;
            for (int j = i + 1; j < n; ++j) {
                const double d = distance(space, series.element(lo + i), series.element(lo + j));
                const double k = kernel_value(spec.family, *gamma, d, 0.0, 0.0);
                gram(i, j) = k;
                gram(j, i) = k;
            }
        }
    } else {
        Eigen::VectorXd norms(n);
        for (int i = 0; i < n; ++i) norms[i] = norm(space, series.element(lo + i));
        for (int i = 0; i < n; ++i) {
            gram(i, i) = 2.0 * norms[i];
            for (int j = i + 1; j < n; ++j) {
                const double d = distance(space, series.element(lo + i), series.element(lo + j));
                gram(i, j) = norms[i] + norms[j] - d;
                gram(j, i) = gram(i, j);
            }
        }
    }
    return gram;
}

} // namespace autohsic
