#ifndef AUTOHSIC_SPACES_HPP
#define AUTOHSIC_SPACES_HPP

#include <Eigen/Core>
#include <vector>

#include "autohsic/errors.hpp"

namespace autohsic {

enum class SpaceKind { EuclideanVector, Matrix, FunctionalGrid };

/// Describes the metric space an observation lives in: R^d with the Euclidean
/// norm, matrices with the Frobenius norm, or functions on [0,1] discretized
/// on a declared grid with the trapezoid-rule L2 norm.
class SpaceDescriptor {
public:
    static SpaceDescriptor euclidean(int d);
    static SpaceDescriptor matrix(int rows, int cols);
    /// grid must have >= 2 strictly increasing points with first 0 and last 1.
    static SpaceDescriptor functional(std::vector<double> grid);

    SpaceKind kind() const { return kind_; }
    int element_size() const { return element_size_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::vector<double>& grid() const { return grid_; }
    /// Trapezoid quadrature weights (functional spaces only).
    const std::vector<double>& quad_weights() const { return quad_weights_; }

    bool operator==(const SpaceDescriptor& other) const;

private:
    SpaceDescriptor() = default;
    SpaceKind kind_ = SpaceKind::EuclideanVector;
    int element_size_ = 0;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> grid_;
    std::vector<double> quad_weights_;
};

/// A length-T series of observations, one flattened element per row.
/// Immutable after construction; rejects NaN/Inf and shape mismatches.
class ObjectSeries {
public:
    ObjectSeries(SpaceDescriptor space, Eigen::MatrixXd data);

    int length() const { return static_cast<int>(data_.rows()); }
    const SpaceDescriptor& space() const { return space_; }
    const Eigen::MatrixXd& data() const { return data_; }
    Eigen::MatrixXd::ConstRowXpr element(int t) const { return data_.row(t); }

private:
    SpaceDescriptor space_;
    Eigen::MatrixXd data_;
};

/// Norm of x - y in the space's metric. Zero iff x == y elementwise.
double distance(const SpaceDescriptor& space, const Eigen::Ref<const Eigen::RowVectorXd>& x,
                const Eigen::Ref<const Eigen::RowVectorXd>& y);

/// Norm of x in the space's metric.
double norm(const SpaceDescriptor& space, const Eigen::Ref<const Eigen::RowVectorXd>& x);

} // namespace autohsic

#endif
