#include "autohsic/spaces.hpp"

#include <cmath>
#include <utility>

namespace autohsic {

SpaceDescriptor SpaceDescriptor::euclidean(int d) {
    if (d < 1) throw std::invalid_argument("EuclideanVector dimension must be >= 1");
    SpaceDescriptor s;
    s.kind_ = SpaceKind::EuclideanVector;
    s.rows_ = d;
    s.cols_ = 1;
    s.element_size_ = d;
    return s;
}

SpaceDescriptor SpaceDescriptor::matrix(int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("matrix dimensions must be >= 1");
    SpaceDescriptor s;
    s.kind_ = SpaceKind::Matrix;
    s.rows_ = rows;
    s.cols_ = cols;
    s.element_size_ = rows * cols;
    return s;
}

SpaceDescriptor SpaceDescriptor::functional(std::vector<double> grid) {
    const auto n = grid.size();
    if (n < 2) throw std::invalid_argument("functional grid needs at least 2 points");
    if (grid.front() != 0.0 || grid.back() != 1.0)
        throw std::invalid_argument("functional grid must start at 0 and end at 1");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("functional grid must be strictly increasing");
    }
    SpaceDescriptor s;
    s.kind_ = SpaceKind::FunctionalGrid;
    s.rows_ = static_cast<int>(n);
    s.cols_ = 1;
    s.element_size_ = static_cast<int>(n);
    // Composite trapezoid weights over the declared abscissae.
    s.quad_weights_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = grid[i + 1] - grid[i];
        s.quad_weights_[i] += 0.5 * h;
        s.quad_weights_[i + 1] += 0.5 * h;
    }
    s.grid_ = std::move(grid);
    return s;
}

bool SpaceDescriptor::operator==(const SpaceDescriptor& other) const {
    return kind_ == other.kind_ && rows_ == other.rows_ && cols_ == other.cols_ &&
           grid_ == other.grid_;
}

ObjectSeries::ObjectSeries(SpaceDescriptor space, Eigen::MatrixXd data)
    : space_(std::move(space)), data_(std::move(data)) {
    if (data_.cols() != space_.element_size())
        throw ShapeMismatch("series block width does not match the space's element size");
    if (!data_.allFinite()) throw std::invalid_argument("series contains NaN/Inf entries");
}

double distance(const SpaceDescriptor& space, const Eigen::Ref<const Eigen::RowVectorXd>& x,
                const Eigen::Ref<const Eigen::RowVectorXd>& y) {
    if (x.size() != space.element_size() || y.size() != space.element_size())
        throw ShapeMismatch("element size does not match the space");
    if (space.kind() == SpaceKind::FunctionalGrid) {
        const auto& w = space.quad_weights();
        double acc = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double d = x[i] - y[i];
            acc += w[static_cast<std::size_t>(i)] * d * d;
        }
        return std::sqrt(acc);
    }
    // Euclidean and Frobenius norms coincide on the flattened block.
    return (x - y).norm();
}

double norm(const SpaceDescriptor& space, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
    if (x.size() != space.element_size())
        throw ShapeMismatch("element size does not match the space");
    if (space.kind() == SpaceKind::FunctionalGrid) {
        const auto& w = space.quad_weights();
        double acc = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            acc += w[static_cast<std::size_t>(i)] * x[i] * x[i];
        return std::sqrt(acc);
    }
    return x.norm();
}

} // namespace autohsic
