#include "quboml/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <chrono>
#include <cstdlib>
#include <map>
#include <string>
#include <thread>

#include "quboml/errors.hpp"
#include "quboml/rng.hpp"

namespace quboml {

namespace {

// Flattened adjacency for O(1) single-flip energy deltas.
struct Adjacency {
    std::vector<std::size_t> offsets;   // n+1
    std::vector<std::size_t> neighbor;
    std::vector<double> coeff;
};

Adjacency build_adjacency(const BinaryQuadraticProblem& p) {
    const std::size_t n = p.num_variables();
    std::vector<std::size_t> degree(n, 0);
    for (const auto& [pair, v] : p.quadratic()) {
        (void)v;
        ++degree[pair.first];
        ++degree[pair.second];
    }
    Adjacency adj;
    adj.offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) adj.offsets[i + 1] = adj.offsets[i] + degree[i];
    adj.neighbor.resize(adj.offsets[n]);
    adj.coeff.resize(adj.offsets[n]);
    std::vector<std::size_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
    for (const auto& [pair, v] : p.quadratic()) {
        adj.neighbor[cursor[pair.first]] = pair.second;
        adj.coeff[cursor[pair.first]++] = v;
        adj.neighbor[cursor[pair.second]] = pair.first;
        adj.coeff[cursor[pair.second]++] = v;
    }
    return adj;
}

// Geometric schedule endpoints from coefficient magnitudes: beta_hot keeps
// initial acceptance near 1/2 for the largest plausible uphill move,
// beta_cold makes the smallest nonzero move near-greedy.
std::pair<double, double> auto_betas(const BinaryQuadraticProblem& p) {
    const std::size_t n = p.num_variables();
    std::vector<double> mag(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) mag[i] = std::abs(p.linear()[i]);
    double min_nonzero = 0.0;
    auto consider = [&](double v) {
        double a = std::abs(v);
        if (a > 0.0 && (min_nonzero == 0.0 || a < min_nonzero)) min_nonzero = a;
    };
    for (double v : p.linear()) consider(v);
    for (const auto& [pair, v] : p.quadratic()) {
        mag[pair.first] += std::abs(v);
        mag[pair.second] += std::abs(v);
        consider(v);
    }
    double max_delta = *std::max_element(mag.begin(), mag.end());
    if (max_delta <= 0.0 || min_nonzero <= 0.0) return {1.0, 100.0};
    double hot = std::log(2.0) / max_delta;
    double cold = std::log(100.0) / min_nonzero;
    if (cold <= hot) cold = hot * 100.0;
    return {hot, cold};
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QUBOML_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

Assignment run_read(const BinaryQuadraticProblem& p, const Adjacency& adj,
                    double beta_hot, double beta_cold, int sweeps,
                    std::uint64_t read_seed) {
    const std::size_t n = p.num_variables();
    std::mt19937_64 rng(read_seed);
    Assignment x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>(rng() & 1u);

    // Local fields: h[i] = linear[i] + sum_j q_ij x_j, so flipping i costs
    // (1 - 2 x_i) * h[i].
    std::vector<double> h(p.linear());
    for (std::size_t i = 0; i < n; ++i) {
        if (!x[i]) continue;
        for (std::size_t a = adj.offsets[i]; a < adj.offsets[i + 1]; ++a) {
            h[adj.neighbor[a]] += adj.coeff[a];
        }
    }

    const double ratio = (sweeps > 1) ? std::pow(beta_cold / beta_hot, 1.0 / (sweeps - 1)) : 1.0;
    double beta = (sweeps > 1) ? beta_hot : beta_cold;
    for (int s = 0; s < sweeps; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = x[i] ? -h[i] : h[i];
            bool accept;
            if (delta <= 0.0) {
                accept = true;
            } else if (beta * delta > 40.0) {
                accept = false;  // acceptance probability below 4e-18
            } else {
                accept = uniform01(rng) < std::exp(-beta * delta);
            }
            if (accept) {
                const double sign = x[i] ? -1.0 : 1.0;
                x[i] ^= 1u;
                for (std::size_t a = adj.offsets[i]; a < adj.offsets[i + 1]; ++a) {
                    h[adj.neighbor[a]] += sign * adj.coeff[a];
                }
            }
        }
        beta *= ratio;
    }
    return x;
}

}  // namespace

SampleSet simulated_anneal(const BinaryQuadraticProblem& p, const AnnealConfig& cfg) {
    if (p.num_variables() == 0) throw InvalidArgument("cannot anneal an empty problem");
    if (cfg.reads < 1 || cfg.sweeps < 1) {
        throw InvalidArgument("reads and sweeps must both be at least 1");
    }
    double beta_hot, beta_cold;
    if (cfg.beta_hot && cfg.beta_cold) {
        beta_hot = *cfg.beta_hot;
        beta_cold = *cfg.beta_cold;
        if (!(0.0 < beta_hot && beta_hot < beta_cold)) {
            throw InvalidArgument("require 0 < beta_hot < beta_cold");
        }
    } else {
        std::tie(beta_hot, beta_cold) = auto_betas(p);
    }

    const auto adj = build_adjacency(p);
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<Assignment> results(static_cast<std::size_t>(cfg.reads));
    auto worker = [&](int begin, int end) {
        for (int r = begin; r < end; ++r) {
            results[static_cast<std::size_t>(r)] = run_read(
                p, adj, beta_hot, beta_cold, cfg.sweeps,
                derive_seed(cfg.seed, "anneal-read", static_cast<std::uint64_t>(r)));
        }
    };
    const int threads = std::min(resolve_threads(cfg.threads), cfg.reads);
    if (threads <= 1) {
        worker(0, cfg.reads);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (cfg.reads + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(cfg.reads, lo + chunk);
            if (lo < hi) pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    // Aggregate duplicates; energies are recomputed from scratch so every
    // reported value matches energy() exactly.
    std::map<Assignment, int> counts;
    for (const auto& bits : results) ++counts[bits];
    SampleSet out;
    out.samples.reserve(counts.size());
    for (const auto& [bits, c] : counts) {
        out.samples.push_back({bits, energy(p, bits), c});
    }
    std::sort(out.samples.begin(), out.samples.end(), [](const Sample& a, const Sample& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.bits < b.bits;
    });
    out.solve_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    return out;
}

std::pair<Assignment, double> brute_force_solve(const BinaryQuadraticProblem& p) {
    const std::size_t n = p.num_variables();
    if (n > 25) {
        throw InvalidArgument("brute_force_solve limited to n <= 25, got n=" +
                              std::to_string(n));
    }
    const auto adj = build_adjacency(p);
    // Gray-code walk: consecutive assignments differ in one bit, so each
    // step is an O(degree) energy update.
    Assignment x(n, 0);
    std::vector<double> h(p.linear());
    double e = p.offset();
    std::uint32_t value = 0;  // x read as an integer, bit 0 = variable 0
    double best_e = e;
    std::uint32_t best_value = 0;

    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t g = 1; g < total; ++g) {
        const std::size_t i = static_cast<std::size_t>(__builtin_ctzll(g));
        e += x[i] ? -h[i] : h[i];
        const double sign = x[i] ? -1.0 : 1.0;
        x[i] ^= 1u;
        value ^= (1u << i);
        for (std::size_t a = adj.offsets[i]; a < adj.offsets[i + 1]; ++a) {
            h[adj.neighbor[a]] += sign * adj.coeff[a];
        }
        if (e < best_e || (e == best_e && value < best_value)) {
            best_e = e;
            best_value = value;
        }
    }
    Assignment best(n, 0);
    for (std::size_t i = 0; i < n; ++i) best[i] = (best_value >> i) & 1u;
    return {best, energy(p, best)};
}

void repair_to_k(const BinaryQuadraticProblem& p, Assignment& x, std::size_t k) {
    const std::size_t n = p.num_variables();
    if (x.size() != n) throw InvalidArgument("repair: assignment length mismatch");
    if (k > n) throw InvalidArgument("repair: k exceeds problem size");
    auto popcount = [&] {
        std::size_t c = 0;
        for (auto b : x) c += b;
        return c;
    };
    std::size_t pc = popcount();
    while (pc != k) {
        const bool adding = pc < k;
        std::size_t best_i = n;
        double best_delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (static_cast<bool>(x[i]) == adding) continue;
            double h = p.linear()[i];
            for (const auto& [pair, v] : p.quadratic()) {
                if (pair.first == i && x[pair.second]) h += v;
                else if (pair.second == i && x[pair.first]) h += v;
            }
            const double delta = adding ? h : -h;
            if (best_i == n || delta < best_delta) {
                best_i = i;
                best_delta = delta;
            }
        }
        x[best_i] ^= 1u;
        if (adding) ++pc; else --pc;
    }
}

std::pair<Assignment, bool> best_feasible(const BinaryQuadraticProblem& p,
                                          const SampleSet& set, std::size_t k) {
    for (const auto& s : set.samples) {
        std::size_t pc = 0;
        for (auto b : s.bits) pc += b;
        if (pc == k) return {s.bits, false};
    }
    Assignment x = set.best().bits;
    repair_to_k(p, x, k);
    return {x, true};
}

}  // namespace quboml
