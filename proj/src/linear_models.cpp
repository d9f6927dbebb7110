#include "quboml/linear_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quboml/errors.hpp"

namespace quboml {

namespace {

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;  // 1/sd, or 0 for constant columns

    static Standardizer fit(const Matrix& X) {
        Standardizer s;
        s.mean.assign(X.cols, 0.0);
        s.scale.assign(X.cols, 0.0);
        for (std::size_t c = 0; c < X.cols; ++c) {
            double m = 0.0;
            for (std::size_t r = 0; r < X.rows; ++r) m += X(r, c);
            m /= static_cast<double>(X.rows);
            double var = 0.0;
            for (std::size_t r = 0; r < X.rows; ++r) {
                const double d = X(r, c) - m;
                var += d * d;
            }
            var /= static_cast<double>(X.rows);
            s.mean[c] = m;
            s.scale[c] = var > 1e-24 ? 1.0 / std::sqrt(var) : 0.0;
        }
        return s;
    }

    Matrix transform(const Matrix& X) const {
        Matrix Z(X.rows, X.cols);
        for (std::size_t r = 0; r < X.rows; ++r) {
            for (std::size_t c = 0; c < X.cols; ++c) {
                Z(r, c) = (X(r, c) - mean[c]) * scale[c];
            }
        }
        return Z;
    }

    // Fold the standardization into raw-space coefficients.
    void unscale(std::vector<double>& w, double& b) const {
        double shift = 0.0;
        for (std::size_t c = 0; c < w.size(); ++c) {
            const double wr = w[c] * scale[c];
            shift += wr * mean[c];
            w[c] = wr;
        }
        b -= shift;
    }
};

void check_binary_labels(const std::vector<int>& y, std::size_t rows) {
    if (y.size() != rows || rows < 2) {
        throw InvalidArgument("labels must match row count and have at least 2 rows");
    }
    bool pos = false, neg = false;
    for (int v : y) {
        if (v) pos = true;
        else neg = true;
    }
    if (!pos || !neg) throw InvalidArgument("degenerate labels: only one class present");
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Solve the symmetric linear system G b = rhs by Gaussian elimination with
// partial pivoting. Sizes here are tiny (feature count + 1).
std::vector<double> solve_dense(std::vector<std::vector<double>> G, std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(G[r][col]) > std::abs(G[piv][col])) piv = r;
        }
        std::swap(G[col], G[piv]);
        std::swap(rhs[col], rhs[piv]);
        if (std::abs(G[col][col]) < 1e-300) {
            throw InvalidArgument("singular system in ridge solve");
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = G[r][col] / G[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) G[r][c] -= f * G[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double s = rhs[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= G[r][c] * x[c];
        x[r] = s / G[r][r];
    }
    return x;
}

}  // namespace

double LinearModel::decision(const double* x) const {
    double z = bias;
    for (std::size_t c = 0; c < weights.size(); ++c) z += weights[c] * x[c];
    return z;
}

LinearModel fit_logistic(const Matrix& X, const std::vector<int>& y, double l2,
                         int epochs, std::uint64_t seed) {
    (void)seed;  // full-batch descent is order-independent; kept for API symmetry
    check_binary_labels(y, X.rows);
    const auto std_ = Standardizer::fit(X);
    const Matrix Z = std_.transform(X);
    const std::size_t n = Z.rows, d = Z.cols;

    double avg_sq = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double s = 1.0;
        for (std::size_t c = 0; c < d; ++c) s += Z(r, c) * Z(r, c);
        avg_sq += s;
    }
    avg_sq /= static_cast<double>(n);
    const double lr = 1.0 / (0.25 * avg_sq + l2);

    std::vector<double> w(d, 0.0), gw(d);
    double b = 0.0;
    for (int e = 0; e < epochs; ++e) {
        std::fill(gw.begin(), gw.end(), 0.0);
        double gb = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            double z = b;
            const double* row = Z.row(r);
            for (std::size_t c = 0; c < d; ++c) z += w[c] * row[c];
            const double err = sigmoid(z) - (y[r] ? 1.0 : 0.0);
            for (std::size_t c = 0; c < d; ++c) gw[c] += err * row[c];
            gb += err;
        }
        gb /= static_cast<double>(n);
        double gmax = std::abs(gb);
        for (std::size_t c = 0; c < d; ++c) {
            gw[c] = gw[c] / static_cast<double>(n) + l2 * w[c];
            gmax = std::max(gmax, std::abs(gw[c]));
        }
        for (std::size_t c = 0; c < d; ++c) w[c] -= lr * gw[c];
        b -= lr * gb;
        if (gmax < 1e-6) break;
    }
    LinearModel m;
    m.kind = ModelKind::logistic;
    m.weights = std::move(w);
    m.bias = b;
    std_.unscale(m.weights, m.bias);
    return m;
}

double predict_proba_one(const LinearModel& m, const double* x, std::size_t d) {
    if (d != m.weights.size()) throw InvalidArgument("feature width mismatch in predict");
    return sigmoid(m.decision(x));
}

std::vector<double> predict_proba(const LinearModel& m, const Matrix& X) {
    if (X.cols != m.weights.size()) throw InvalidArgument("feature width mismatch in predict");
    std::vector<double> out(X.rows);
    for (std::size_t r = 0; r < X.rows; ++r) out[r] = sigmoid(m.decision(X.row(r)));
    return out;
}

LinearModel fit_linear_margin(const Matrix& X, const std::vector<int>& y, double c,
                              int epochs, std::uint64_t seed) {
    (void)seed;
    check_binary_labels(y, X.rows);
    if (!(c > 0.0)) throw InvalidArgument("margin parameter c must be positive");
    const auto std_ = Standardizer::fit(X);
    const Matrix Z = std_.transform(X);
    const std::size_t n = Z.rows, d = Z.cols;
    const double lambda = 1.0 / (c * static_cast<double>(n));

    std::vector<double> w(d, 0.0), g(d);
    double b = 0.0;
    for (int t = 1; t <= epochs; ++t) {
        const double eta = 1.0 / (lambda * t);
        std::fill(g.begin(), g.end(), 0.0);
        double gb = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double yr = y[r] ? 1.0 : -1.0;
            const double* row = Z.row(r);
            double z = b;
            for (std::size_t k = 0; k < d; ++k) z += w[k] * row[k];
            if (yr * z < 1.0) {
                for (std::size_t k = 0; k < d; ++k) g[k] += yr * row[k];
                gb += yr;
            }
        }
        const double keep = 1.0 - eta * lambda;
        const double step = eta / static_cast<double>(n);
        for (std::size_t k = 0; k < d; ++k) w[k] = keep * w[k] + step * g[k];
        b += step * gb;
    }
    LinearModel m;
    m.kind = ModelKind::hinge;
    m.weights = std::move(w);
    m.bias = b;
    std_.unscale(m.weights, m.bias);
    return m;
}

double margin_distance(const LinearModel& m, const double* x, std::size_t d) {
    if (d != m.weights.size()) throw InvalidArgument("feature width mismatch in margin_distance");
    double norm2 = 0.0;
    for (double w : m.weights) norm2 += w * w;
    if (norm2 <= 0.0) throw InvalidArgument("degenerate model: zero weight vector");
    return std::abs(m.decision(x)) / std::sqrt(norm2);
}

double margin_distance(const LinearModel& m, const std::vector<double>& x) {
    return margin_distance(m, x.data(), x.size());
}

LinearModel fit_ridge(const Matrix& X, const std::vector<double>& y, double l2) {
    if (X.rows < 1 || y.size() != X.rows) {
        throw InvalidArgument("ridge fit needs at least one row and matching targets");
    }
    const std::size_t d = X.cols;
    // Normal equations over [X 1]; l2 applied to weights only.
    std::vector<std::vector<double>> G(d + 1, std::vector<double>(d + 1, 0.0));
    std::vector<double> rhs(d + 1, 0.0);
    for (std::size_t r = 0; r < X.rows; ++r) {
        const double* row = X.row(r);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i; j < d; ++j) G[i][j] += row[i] * row[j];
            G[i][d] += row[i];
            rhs[i] += row[i] * y[r];
        }
        G[d][d] += 1.0;
        rhs[d] += y[r];
    }
    for (std::size_t i = 0; i < d; ++i) {
        G[i][i] += l2;
        for (std::size_t j = 0; j < i; ++j) G[i][j] = G[j][i];
        G[d][i] = G[i][d];
    }
    auto beta = solve_dense(std::move(G), std::move(rhs));
    LinearModel m;
    m.kind = ModelKind::ridge;
    m.bias = beta[d];
    beta.resize(d);
    m.weights = std::move(beta);
    return m;
}

std::vector<double> predict_linear(const LinearModel& m, const Matrix& X) {
    if (X.cols != m.weights.size()) throw InvalidArgument("feature width mismatch in predict");
    std::vector<double> out(X.rows);
    for (std::size_t r = 0; r < X.rows; ++r) out[r] = m.decision(X.row(r));
    return out;
}

}  // namespace quboml
