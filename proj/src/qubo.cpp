#include "quboml/qubo.hpp"

#include <cmath>
#include <string>

#include "quboml/errors.hpp"

namespace quboml {

BinaryQuadraticProblem::BinaryQuadraticProblem(std::size_t n)
    : n_(n), linear_(n, 0.0) {}

namespace {
void check_index(std::size_t i, std::size_t n) {
    if (i >= n) {
        throw InvalidArgument("variable index " + std::to_string(i) +
                              " out of range for n=" + std::to_string(n));
    }
}
}  // namespace

void BinaryQuadraticProblem::set_linear(std::size_t i, double v) {
    check_index(i, n_);
    linear_[i] = v;
}

void BinaryQuadraticProblem::add_linear(std::size_t i, double v) {
    check_index(i, n_);
    linear_[i] += v;
}

void BinaryQuadraticProblem::add_quadratic(std::size_t i, std::size_t j, double v) {
    check_index(i, n_);
    check_index(j, n_);
    if (i == j) throw InvalidArgument("self-pair (" + std::to_string(i) + ") in quadratic term");
    if (i > j) std::swap(i, j);
    quadratic_[{i, j}] += v;
}

double BinaryQuadraticProblem::quadratic_at(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    auto it = quadratic_.find({i, j});
    return it == quadratic_.end() ? 0.0 : it->second;
}

double energy(const BinaryQuadraticProblem& p, const Assignment& x) {
    if (x.size() != p.num_variables()) {
        throw InvalidArgument("assignment length " + std::to_string(x.size()) +
                              " does not match problem size " +
                              std::to_string(p.num_variables()));
    }
    double e = p.offset();
    const auto& lin = p.linear();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i]) e += lin[i];
    }
    for (const auto& [pair, v] : p.quadratic()) {
        if (x[pair.first] && x[pair.second]) e += v;
    }
    return e;
}

BinaryQuadraticProblem k_hot_constraint(std::size_t n, std::size_t k, double strength) {
    if (k > n) {
        throw InvalidArgument("k-hot constraint with k=" + std::to_string(k) +
                              " > n=" + std::to_string(n));
    }
    if (!(strength > 0.0)) throw InvalidArgument("k-hot constraint strength must be positive");
    // strength * (sum x_i - k)^2 expanded over binary variables (x_i^2 = x_i).
    BinaryQuadraticProblem p(n);
    const double kd = static_cast<double>(k);
    for (std::size_t i = 0; i < n; ++i) {
        p.set_linear(i, strength * (1.0 - 2.0 * kd));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            p.add_quadratic(i, j, 2.0 * strength);
        }
    }
    p.add_offset(strength * kd * kd);
    return p;
}

BinaryQuadraticProblem compose(const BinaryQuadraticProblem& a,
                               const BinaryQuadraticProblem& b) {
    if (a.num_variables() != b.num_variables()) {
        throw InvalidArgument("cannot compose problems of sizes " +
                              std::to_string(a.num_variables()) + " and " +
                              std::to_string(b.num_variables()));
    }
    BinaryQuadraticProblem out(a.num_variables());
    for (std::size_t i = 0; i < a.num_variables(); ++i) {
        out.set_linear(i, a.linear()[i] + b.linear()[i]);
    }
    for (const auto& [pair, v] : a.quadratic()) out.add_quadratic(pair.first, pair.second, v);
    for (const auto& [pair, v] : b.quadratic()) out.add_quadratic(pair.first, pair.second, v);
    out.add_offset(a.offset() + b.offset());
    return out;
}

double energy_delta_bound(const BinaryQuadraticProblem& p) {
    double s = 0.0;
    for (double v : p.linear()) s += std::abs(v);
    for (const auto& [pair, v] : p.quadratic()) {
        (void)pair;
        s += std::abs(v);
    }
    return s;
}

}  // namespace quboml
