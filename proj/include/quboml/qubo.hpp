#ifndef QUBOML_QUBO_HPP
#define QUBOML_QUBO_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace quboml {

using Assignment = std::vector<std::uint8_t>;  // entries in {0,1}

// Symmetric QUBO in minimization form:
//   E(x) = offset + sum_i linear[i] x_i + sum_{i<j} quadratic[{i,j}] x_i x_j
// Quadratic coefficients are stored once per unordered pair (i < j); any
// upper/lower-triangular input convention is normalized on construction.
class BinaryQuadraticProblem {
public:
    BinaryQuadraticProblem() = default;
    explicit BinaryQuadraticProblem(std::size_t n);

    std::size_t num_variables() const { return n_; }
    const std::vector<double>& linear() const { return linear_; }
    const std::map<std::pair<std::size_t, std::size_t>, double>& quadratic() const {
        return quadratic_;
    }
    double offset() const { return offset_; }

    void set_linear(std::size_t i, double v);
    void add_linear(std::size_t i, double v);
    // Accepts (i, j) in either order; accumulates into the unordered pair.
    void add_quadratic(std::size_t i, std::size_t j, double v);
    void add_offset(double v) { offset_ += v; }

    double quadratic_at(std::size_t i, std::size_t j) const;

private:
    std::size_t n_ = 0;
    std::vector<double> linear_;
    std::map<std::pair<std::size_t, std::size_t>, double> quadratic_;
    double offset_ = 0.0;
};

double energy(const BinaryQuadraticProblem& p, const Assignment& x);

// Penalty problem whose energy is strength * (sum_i x_i - k)^2.
BinaryQuadraticProblem k_hot_constraint(std::size_t n, std::size_t k, double strength);

// Additive combination: energy(compose(a,b), x) = energy(a,x) + energy(b,x).
BinaryQuadraticProblem compose(const BinaryQuadraticProblem& a,
                               const BinaryQuadraticProblem& b);

// Upper bound on max_x E(x) - min_x E(x), offset excluded:
// sum of absolute coefficient magnitudes.
double energy_delta_bound(const BinaryQuadraticProblem& p);

}  // namespace quboml

#endif
