#include "autohsic/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace autohsic {

namespace {

double vertex_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double vertex_norm(const std::vector<double>& a) {
    double acc = 0.0;
    for (double v : a) acc += v * v;
    return std::sqrt(acc);
}

} // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                             const std::vector<double>& start, const NelderMeadOptions& opts) {
    const std::size_t dim = start.size();
    const std::size_t n_vertices = dim + 1;

    std::vector<std::vector<double>> simplex(n_vertices, start);
    for (std::size_t i = 0; i < dim; ++i) {
        double step = opts.initial_step;
        if (start[i] != 0.0) step = opts.initial_step * std::abs(start[i]);
        simplex[i + 1][i] += step;
    }

    NelderMeadResult result;
    std::vector<double> values(n_vertices);
    for (std::size_t i = 0; i < n_vertices; ++i) {
        values[i] = fn(simplex[i]);
        ++result.evaluations;
    }

    constexpr double kReflect = 1.0;
    constexpr double kExpand = 2.0;
    constexpr double kContract = 0.5;
    constexpr double kShrink = 0.5;

    std::vector<std::size_t> order(n_vertices);
    std::vector<double> centroid(dim), candidate(dim);

    while (result.evaluations < opts.max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[n_vertices - 2];

        double spread = 0.0;
        for (std::size_t i = 0; i < n_vertices; ++i)
            spread = std::max(spread, vertex_distance(simplex[i], simplex[best]));
        const double scale = std::max(1.0, vertex_norm(simplex[best]));
        if (spread / scale < opts.relative_simplex_tol) {
            result.converged = true;
            break;
        }

        // Centroid of all vertices except the worst.
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < n_vertices; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto move_from_centroid = [&](double coef) {
            for (std::size_t j = 0; j < dim; ++j)
                candidate[j] = centroid[j] + coef * (simplex[worst][j] - centroid[j]);
        };

        move_from_centroid(-kReflect);
        const double reflected = fn(candidate);
        ++result.evaluations;

        if (reflected < values[best]) {
            const std::vector<double> reflected_point = candidate;
            move_from_centroid(-kExpand);
            const double expanded = fn(candidate);
            ++result.evaluations;
            if (expanded < reflected) {
                simplex[worst] = candidate;
                values[worst] = expanded;
            } else {
                simplex[worst] = reflected_point;
                values[worst] = reflected;
            }
        } else if (reflected < values[second_worst]) {
            simplex[worst] = candidate;
            values[worst] = reflected;
        } else {
            const bool outside = reflected < values[worst];
            if (outside) {
                for (std::size_t j = 0; j < dim; ++j)
                    candidate[j] = centroid[j] - kContract * (simplex[worst][j] - centroid[j]);
            } else {
                move_from_centroid(kContract);
            }
            const double contracted = fn(candidate);
            ++result.evaluations;
            if (contracted < std::min(reflected, values[worst])) {
                simplex[worst] = candidate;
                values[worst] = contracted;
            } else {
                // Shrink towards the best vertex.
                for (std::size_t i = 0; i < n_vertices; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < dim; ++j)
                        simplex[i][j] =
                            simplex[best][j] + kShrink * (simplex[i][j] - simplex[best][j]);
                    values[i] = fn(simplex[i]);
                    ++result.evaluations;
                }
            }
        }
    }

    const std::size_t best = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());
    result.x = simplex[best];
    result.value = values[best];
    return result;
}

} // namespace autohsic
