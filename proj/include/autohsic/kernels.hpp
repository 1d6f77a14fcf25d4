#ifndef AUTOHSIC_KERNELS_HPP
#define AUTOHSIC_KERNELS_HPP

#include <optional>
#include <string>

#include "autohsic/spaces.hpp"

namespace autohsic {

enum class KernelFamily { Gaussian, Laplacian, BrownianDistance };

/// Kernel family plus bandwidth policy. An empty bandwidth means the median
/// heuristic; BrownianDistance carries no bandwidth at all.
struct KernelSpec {
    KernelFamily family = KernelFamily::Gaussian;
    std::optional<double> fixed_bandwidth; // nullopt = median heuristic

    static KernelSpec gaussian() { return {KernelFamily::Gaussian, std::nullopt}; }
    static KernelSpec gaussian_fixed(double gamma) { return {KernelFamily::Gaussian, gamma}; }
    static KernelSpec laplacian() { return {KernelFamily::Laplacian, std::nullopt}; }
    static KernelSpec laplacian_fixed(double gamma) { return {KernelFamily::Laplacian, gamma}; }
    static KernelSpec brownian() { return {KernelFamily::BrownianDistance, std::nullopt}; }

    bool needs_bandwidth() const { return family != KernelFamily::BrownianDistance; }
    bool operator==(const KernelSpec& other) const = default;
};

std::string kernel_family_name(KernelFamily family);

/// Median of all T(T-1)/2 pairwise distances; even counts average the two
/// middle order statistics. Throws DegenerateBandwidth below 1e-12.
double median_bandwidth(const ObjectSeries& series);

/// Single kernel evaluation. gamma must be present for Gaussian/Laplacian and
/// absent for BrownianDistance.
double eval_kernel(const KernelSpec& spec, std::optional<double> gamma,
                   const Eigen::Ref<const Eigen::RowVectorXd>& x,
                   const Eigen::Ref<const Eigen::RowVectorXd>& y, const SpaceDescriptor& space);

/// Resolves the spec's bandwidth policy against the full series: fixed value,
/// median heuristic, or nullopt for BrownianDistance.
std::optional<double> resolve_bandwidth(const KernelSpec& spec, const ObjectSeries& series);

/// Symmetric pairwise-distance matrix of the whole series.
Eigen::MatrixXd distance_matrix(const ObjectSeries& series);

/// Gram matrix on the inclusive index range [lo, hi]; the bandwidth is
/// resolved once from the full series.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const ObjectSeries& series, int lo, int hi);

/// Gram matrix from a precomputed full-series distance matrix restricted to
/// [lo, hi]. norms is required for BrownianDistance and ignored otherwise.
Eigen::MatrixXd gram_from_distances(const KernelSpec& spec, std::optional<double> gamma,
                                    const Eigen::MatrixXd& dist, const Eigen::VectorXd& norms,
                                    int lo, int hi);

/// Per-observation norms in the series' space (BrownianDistance kernel input).
Eigen::VectorXd series_norms(const ObjectSeries& series);

/// Distance geometry of one series, computed once and shared across kernels
/// and lags: pairwise distances, per-point norms, and the (lazy-throwing)
/// median pairwise distance.
class SeriesGeometry {
public:
    explicit SeriesGeometry(const ObjectSeries& series);

    int length() const { return static_cast<int>(dist_.rows()); }
    const Eigen::MatrixXd& distances() const { return dist_; }
    const Eigen::VectorXd& norms() const { return norms_; }
    /// Median pairwise distance; throws DegenerateBandwidth below 1e-12.
    double median_distance() const;

private:
    Eigen::MatrixXd dist_;
    Eigen::VectorXd norms_;
    double median_raw_ = 0.0;
};

/// Bandwidth resolution against precomputed geometry.
std::optional<double> resolve_bandwidth(const KernelSpec& spec, const SeriesGeometry& geometry);

/// Full-series Gram matrix from precomputed geometry.
Eigen::MatrixXd full_gram(const KernelSpec& spec, std::optional<double> gamma,
                          const SeriesGeometry& geometry);

} // namespace autohsic

#endif
