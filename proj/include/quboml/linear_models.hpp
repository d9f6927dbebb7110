#ifndef QUBOML_LINEAR_MODELS_HPP
#define QUBOML_LINEAR_MODELS_HPP

#include <cstdint>
#include <vector>

#include "quboml/dataset.hpp"

namespace quboml {

enum class ModelKind { logistic, hinge, ridge };

// Weights and bias live in raw (unstandardized) feature space; fits that
// standardize internally fold the scaling back into the coefficients.
struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    ModelKind kind = ModelKind::logistic;

    double decision(const double* x) const;
    double decision(const std::vector<double>& x) const { return decision(x.data()); }
};

// L2-regularized logistic regression, full-batch gradient descent to
// gradient tolerance 1e-6 or the epoch cap. Features are standardized on
// train statistics inside the fit.
LinearModel fit_logistic(const Matrix& X, const std::vector<int>& y, double l2,
                         int epochs, std::uint64_t seed);

std::vector<double> predict_proba(const LinearModel& m, const Matrix& X);
double predict_proba_one(const LinearModel& m, const double* x, std::size_t d);

// Hinge-loss + L2 large-margin classifier (Pegasos-style full-batch
// subgradient descent), deterministic given seed.
LinearModel fit_linear_margin(const Matrix& X, const std::vector<int>& y, double c,
                              int epochs, std::uint64_t seed);

// Perpendicular distance |w.x + b| / ||w|| to the decision boundary.
double margin_distance(const LinearModel& m, const std::vector<double>& x);
double margin_distance(const LinearModel& m, const double* x, std::size_t d);

// Closed-form regularized least squares; bias unpenalized. Operates on raw
// features (no standardization) so X^T (y - yhat) = l2 * w holds directly.
LinearModel fit_ridge(const Matrix& X, const std::vector<double>& y, double l2);

std::vector<double> predict_linear(const LinearModel& m, const Matrix& X);

}  // namespace quboml

#endif
