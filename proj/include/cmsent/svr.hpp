#pragma once

// Epsilon-support vector regression.
//
// The dual
//     max  -1/2 sum_ij b_i b_j K(x_i, x_j) - eps sum_i |b_i| + sum_i y_i b_i
//     s.t. sum_i b_i = 0,  -C <= b_i <= C
// is solved in its 2l-variable form (b_i = a_i - a*_i, a, a* in [0, C]) by
// sequential minimal optimization: each step picks the maximal violating
// pair of the KKT conditions and solves the two-variable subproblem in
// closed form. The solver stops once the violation of that pair is <= tol,
// then finishes exactly with an active-set pass when the free set is small.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cmsent/corpus.hpp"
#include "cmsent/error.hpp"
#include "cmsent/kernel.hpp"

namespace cmsent {

struct SvrHyperParams {
    double c = 1.0;
    double epsilon = 0.1;
    double gamma = 0.1;
    KernelType kernel = KernelType::rbf;
    double tol = 1e-3;
    int cache_size_mb = 200;
    // Kept for configuration fidelity; linear and RBF kernels ignore it.
    double coef0 = 0.1;
    // -1 means "until converged", capped at default_iteration_cap updates.
    long long max_iter = -1;
    bool shrinking = true;

    static constexpr long long default_iteration_cap = 10'000'000;

    void validate() const {
        if (!(c > 0.0 && std::isfinite(c))) throw ConfigError("C must be a positive real");
        if (!(epsilon >= 0.0 && std::isfinite(epsilon))) throw ConfigError("epsilon must be a non-negative real");
        if (!(gamma > 0.0 && std::isfinite(gamma))) throw ConfigError("gamma must be a positive real");
        if (!(tol > 0.0 && std::isfinite(tol))) throw ConfigError("tol must be a positive real");
        if (cache_size_mb < 1) throw ConfigError("cache size must be at least 1 MB");
        if (max_iter == 0 || max_iter < -1) throw ConfigError("max_iter must be -1 or positive");
    }

    long long iteration_cap() const { return max_iter < 0 ? default_iteration_cap : max_iter; }

    friend bool operator==(const SvrHyperParams&, const SvrHyperParams&) = default;
};

template <KernelSample Sample>
double kernel_eval(const SvrHyperParams& params, const Sample& x, const Sample& z) {
    require_same_dimension(x, z);
    return kernel_value(params.kernel, params.gamma, x, z);
}

// Rows of the l x l kernel matrix, evicted least-recently-used once the
// byte budget is spent. At least two rows always fit, so the pair of rows
// touched by one SMO step never evict each other.
template <KernelSample Sample>
class KernelCache {
public:
    KernelCache(const SvrHyperParams& params, std::span<const Sample> samples)
        : kernel_(params.kernel), gamma_(params.gamma), samples_(samples), slots_(samples.size(), rows_.end()) {
        const std::size_t row_bytes = std::max<std::size_t>(1, samples.size()) * sizeof(double);
        const std::size_t budget = static_cast<std::size_t>(params.cache_size_mb) * (std::size_t{1} << 20);
        capacity_ = std::max<std::size_t>(2, budget / row_bytes);
        diagonal_.resize(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) diagonal_[i] = eval(i, i);
    }

    double diagonal(std::size_t i) const { return diagonal_[i]; }

    std::span<const double> row(std::size_t i) {
        if (slots_[i] != rows_.end()) {
            ++hits_;
            rows_.splice(rows_.begin(), rows_, slots_[i]);
            return rows_.front().second;
        }
        ++misses_;
        std::vector<double> buffer;
        if (rows_.size() >= capacity_) {
            auto& victim = rows_.back();
            slots_[victim.first] = rows_.end();
            buffer = std::move(victim.second);
            rows_.pop_back();
        }
        buffer.resize(samples_.size());
        for (std::size_t j = 0; j < samples_.size(); ++j) buffer[j] = eval(i, j);
        rows_.emplace_front(i, std::move(buffer));
        slots_[i] = rows_.begin();
        return rows_.front().second;
    }

    std::size_t capacity() const { return capacity_; }
    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }

private:
    double eval(std::size_t i, std::size_t j) const { return kernel_value(kernel_, gamma_, samples_[i], samples_[j]); }

    using Row = std::pair<std::size_t, std::vector<double>>;

    KernelType kernel_;
    double gamma_;
    std::span<const Sample> samples_;
    std::list<Row> rows_;
    std::vector<typename std::list<Row>::iterator> slots_;
    std::vector<double> diagonal_;
    std::size_t capacity_ = 2;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

// Full dual solution over every training point.
struct DualSolution {
    std::vector<double> beta;
    double bias = 0.0;
    long long iterations = 0;
    bool converged = false;
    // Dual objective in the b-form given at the top of this file.
    double objective = 0.0;
    // Violation of the maximal violating pair at exit.
    double max_violation = 0.0;
};

namespace detail {

template <KernelSample Sample>
class SmoSolver {
public:
    SmoSolver(const SvrHyperParams& params, std::span<const Sample> x, std::span<const double> y)
        : params_(params), y_(y), l_(x.size()), n_(2 * x.size()), cache_(params, x) {
        alpha_.assign(n_, 0.0);
        grad_.resize(n_);
        linear_.resize(n_);
        for (std::size_t i = 0; i < l_; ++i) {
            linear_[i] = params.epsilon - y[i];
            linear_[i + l_] = params.epsilon + y[i];
        }
        grad_ = linear_;
        active_.resize(n_);
        for (std::size_t t = 0; t < n_; ++t) active_[t] = t;
    }

    DualSolution solve() {
        const long long cap = params_.iteration_cap();
        long long iter = 0;
        bool converged = false;
        std::size_t shrink_counter = std::min<std::size_t>(n_, 1000);
        double gap = 0.0;

        for (;;) {
            if (params_.shrinking && --shrink_counter == 0) {
                shrink_counter = std::min<std::size_t>(n_, 1000);
                shrink();
            }
            auto [i, j] = select_pair(gap);
            if (gap <= params_.tol) {
                if (active_.size() < n_) {
                    reconstruct_gradient();
                    shrink_counter = 1;
                    std::tie(i, j) = select_pair(gap);
                }
                if (gap <= params_.tol) {
                    converged = true;
                    break;
                }
            }
            if (iter >= cap) break;
            update_pair(i, j);
            ++iter;
        }
        if (active_.size() < n_) {
            reconstruct_gradient();
            select_pair(gap);
        }
        if (converged) polish(gap);

        DualSolution sol;
        sol.beta.resize(l_);
        for (std::size_t i = 0; i < l_; ++i) sol.beta[i] = alpha_[i] - alpha_[i + l_];
        sol.bias = -compute_rho();
        sol.iterations = iter;
        sol.converged = converged;
        sol.max_violation = std::max(gap, 0.0);
        sol.objective = objective(sol.beta);
        return sol;
    }

private:
    double sign(std::size_t t) const { return t < l_ ? 1.0 : -1.0; }
    bool at_upper(std::size_t t) const { return alpha_[t] >= params_.c; }
    bool at_lower(std::size_t t) const { return alpha_[t] <= 0.0; }

    // Maximal violating pair over the active set, lowest index on ties.
    // i maximizes -s_t G_t over I_up, j maximizes s_t G_t over I_low.
    std::pair<std::size_t, std::size_t> select_pair(double& gap) const {
        double up = -std::numeric_limits<double>::infinity();
        double low = -std::numeric_limits<double>::infinity();
        std::size_t i = n_, j = n_;
        for (std::size_t t : active_) {
            const double sg = sign(t) * grad_[t];
            const bool in_up = sign(t) > 0 ? !at_upper(t) : !at_lower(t);
            const bool in_low = sign(t) > 0 ? !at_lower(t) : !at_upper(t);
            if (in_up && -sg > up) {
                up = -sg;
                i = t;
            }
            if (in_low && sg > low) {
                low = sg;
                j = t;
            }
        }
        gap = (i == n_ || j == n_) ? 0.0 : up + low;
        return {i, j};
    }

    double q(std::size_t s, std::size_t t, std::span<const double> krow) const {
        return sign(s) * sign(t) * krow[t % l_];
    }

    void update_pair(std::size_t i, std::size_t j) {
        const auto ki = cache_.row(i % l_);
        const auto kj = cache_.row(j % l_);
        const double qii = cache_.diagonal(i % l_);
        const double qjj = cache_.diagonal(j % l_);
        const double qij = q(i, j, ki);
        const double c = params_.c;
        constexpr double tau = 1e-12;

        const double old_ai = alpha_[i];
        const double old_aj = alpha_[j];
        double ai = old_ai;
        double aj = old_aj;

        if (sign(i) != sign(j)) {
            double quad = qii + qjj + 2.0 * qij;
            if (quad <= 0.0) quad = tau;
            const double delta = (-grad_[i] - grad_[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) {
                    aj = 0.0;
                    ai = diff;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = -diff;
            }
            if (diff > 0.0) {
                if (ai > c) {
                    ai = c;
                    aj = c - diff;
                }
            } else if (aj > c) {
                aj = c;
                ai = c + diff;
            }
        } else {
            double quad = qii + qjj - 2.0 * qij;
            if (quad <= 0.0) quad = tau;
            const double delta = (grad_[i] - grad_[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > c) {
                if (ai > c) {
                    ai = c;
                    aj = sum - c;
                }
            } else if (aj < 0.0) {
                aj = 0.0;
                ai = sum;
            }
            if (sum > c) {
                if (aj > c) {
                    aj = c;
                    ai = sum - c;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = sum;
            }
        }

        alpha_[i] = ai;
        alpha_[j] = aj;
        const double dai = ai - old_ai;
        const double daj = aj - old_aj;
        for (std::size_t t : active_) grad_[t] += q(i, t, ki) * dai + q(j, t, kj) * daj;
    }

    // Drops variables stuck at a bound whose gradient points outward by more
    // than the current extreme violations. Once the gap first falls below
    // 10 * tol the full set is restored a single time.
    void shrink() {
        double up = -std::numeric_limits<double>::infinity();
        double low = -std::numeric_limits<double>::infinity();
        for (std::size_t t : active_) {
            const double sg = sign(t) * grad_[t];
            const bool in_up = sign(t) > 0 ? !at_upper(t) : !at_lower(t);
            const bool in_low = sign(t) > 0 ? !at_lower(t) : !at_upper(t);
            if (in_up) up = std::max(up, -sg);
            if (in_low) low = std::max(low, sg);
        }
        if (!unshrunk_ && up + low <= params_.tol * 10.0) {
            unshrunk_ = true;
            reconstruct_gradient();
        }
        std::vector<std::size_t> keep;
        keep.reserve(active_.size());
        for (std::size_t t : active_) {
            bool drop = false;
            if (at_upper(t)) {
                drop = sign(t) > 0 ? -grad_[t] > up : -grad_[t] > low;
            } else if (at_lower(t)) {
                drop = sign(t) > 0 ? grad_[t] > low : grad_[t] > up;
            }
            if (!drop) keep.push_back(t);
        }
        active_ = std::move(keep);
    }

    // Recomputes gradients of inactive variables and reactivates everything.
    void reconstruct_gradient() {
        if (active_.size() == n_) return;
        std::vector<char> is_active(n_, 0);
        for (std::size_t t : active_) is_active[t] = 1;
        std::vector<std::size_t> inactive;
        for (std::size_t t = 0; t < n_; ++t)
            if (!is_active[t]) {
                inactive.push_back(t);
                grad_[t] = linear_[t];
            }
        for (std::size_t u = 0; u < n_; ++u) {
            if (alpha_[u] == 0.0) continue;
            const auto ku = cache_.row(u % l_);
            for (std::size_t t : inactive) grad_[t] += q(u, t, ku) * alpha_[u];
        }
        active_.resize(n_);
        for (std::size_t t = 0; t < n_; ++t) active_[t] = t;
    }

    // SMO stops within tol of the optimum, which on flat (rank-deficient)
    // problems can leave the objective visibly short. Finish with a primal
    // active-set method on b: Newton steps on the face fixed by the bounded
    // coefficients, blocking at the box, and releasing the bounded
    // coefficient whose multiplier has the wrong sign. The result is kept
    // only if it scores at least as well and still passes the stopping test.
    static constexpr std::size_t polish_free_limit = 1000;

    enum class Face { lower, neg, zero, pos, upper };

    std::vector<double> k_times(const std::vector<double>& beta) {
        std::vector<double> kb(l_, 0.0);
        for (std::size_t j = 0; j < l_; ++j) {
            if (beta[j] == 0.0) continue;
            const auto kj = cache_.row(j);
            for (std::size_t i = 0; i < l_; ++i) kb[i] += kj[i] * beta[j];
        }
        return kb;
    }

    // Returns false when the round cap is hit or the linear algebra fails.
    bool active_set(std::vector<double>& beta) {
        const double c = params_.c, eps = params_.epsilon;
        std::vector<Face> face(l_);
        std::size_t n_free = 0;
        for (std::size_t i = 0; i < l_; ++i) {
            const double b = beta[i];
            face[i] = b >= c ? Face::upper : b <= -c ? Face::lower : b > 0 ? Face::pos : b < 0 ? Face::neg : Face::zero;
            if (face[i] == Face::pos || face[i] == Face::neg) ++n_free;
        }
        if (n_free > polish_free_limit) return false;
        double scale = 1.0;
        for (double v : y_) scale = std::max(scale, std::abs(v));
        const double stop = 1e-11 * scale;

        const std::size_t max_rounds = 4 * l_ + 20;
        for (std::size_t round = 0; round < max_rounds; ++round) {
            std::vector<std::size_t> free;
            for (std::size_t i = 0; i < l_; ++i)
                if (face[i] == Face::pos || face[i] == Face::neg) free.push_back(i);
            if (free.size() > polish_free_limit) return false;
            auto kb = k_times(beta);
            const auto sgn = [&](std::size_t i) { return face[i] == Face::pos ? 1.0 : -1.0; };

            if (!free.empty()) {
                const auto f = static_cast<Eigen::Index>(free.size());
                Eigen::MatrixXd a = Eigen::MatrixXd::Zero(f + 1, f + 1);
                Eigen::VectorXd rhs(f + 1);
                double total = 0.0;
                for (double b : beta) total += b;
                for (Eigen::Index r = 0; r < f; ++r) {
                    const std::size_t i = free[static_cast<std::size_t>(r)];
                    const auto ki = cache_.row(i);
                    for (Eigen::Index s = 0; s < f; ++s) a(r, s) = ki[free[static_cast<std::size_t>(s)]];
                    a(r, f) = 1.0;
                    a(f, r) = 1.0;
                    rhs[r] = y_[i] - eps * sgn(i) - kb[i];
                }
                rhs[f] = -total;
                Eigen::VectorXd d = a.completeOrthogonalDecomposition().solve(rhs);
                if (!d.allFinite()) return false;
                // An inconsistent system means the face objective rises
                // linearly along the residual, so follow it to the box.
                const Eigen::VectorXd resid = rhs - a * d;
                double max_step = 1.0;
                if (resid.norm() > 1e-9 * (1.0 + rhs.norm())) {
                    d = resid;
                    max_step = std::numeric_limits<double>::infinity();
                }

                double step = max_step;
                std::size_t hit = free.size();
                for (std::size_t r = 0; r < free.size(); ++r) {
                    const std::size_t i = free[r];
                    const double dv = d[static_cast<Eigen::Index>(r)];
                    const double lo = face[i] == Face::pos ? 0.0 : -c;
                    const double hi = face[i] == Face::pos ? c : 0.0;
                    double t = std::numeric_limits<double>::infinity();
                    if (dv < 0) t = (lo - beta[i]) / dv;
                    if (dv > 0) t = (hi - beta[i]) / dv;
                    if (t < step) {
                        step = t;
                        hit = r;
                    }
                }
                if (!std::isfinite(step)) return false;
                for (std::size_t r = 0; r < free.size(); ++r) beta[free[r]] += step * d[static_cast<Eigen::Index>(r)];
                if (hit < free.size()) {
                    const std::size_t i = free[hit];
                    const double dv = d[static_cast<Eigen::Index>(hit)];
                    if (face[i] == Face::pos) {
                        beta[i] = dv < 0 ? 0.0 : c;
                        face[i] = dv < 0 ? Face::zero : Face::upper;
                    } else {
                        beta[i] = dv > 0 ? 0.0 : -c;
                        face[i] = dv > 0 ? Face::zero : Face::lower;
                    }
                    continue;
                }
                kb = k_times(beta);
            }

            // Face optimum: find the multiplier of sum(b) = 0 and the worst
            // bounded coefficient.
            double rho = 0.0;
            if (!free.empty()) {
                for (std::size_t i : free) rho += y_[i] - eps * sgn(i) - kb[i];
                rho /= static_cast<double>(free.size());
            } else {
                double lo = -std::numeric_limits<double>::infinity();
                double hi = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < l_; ++i) {
                    const double g = y_[i] - kb[i];
                    if (face[i] != Face::lower) hi = std::min(hi, g + eps);
                    if (face[i] != Face::upper) lo = std::max(lo, g - eps);
                    if (face[i] == Face::upper) hi = std::min(hi, g - eps);
                    if (face[i] == Face::lower) lo = std::max(lo, g + eps);
                }
                rho = std::isfinite(lo) && std::isfinite(hi) ? (lo + hi) / 2.0 : std::isfinite(lo) ? lo : hi;
            }
            double worst = stop;
            std::size_t pick = l_;
            Face to = Face::zero;
            for (std::size_t i = 0; i < l_; ++i) {
                const double g = y_[i] - kb[i] - rho;
                double v = 0.0;
                Face next = Face::zero;
                if (face[i] == Face::zero) {
                    v = std::abs(g) - eps;
                    next = g > 0 ? Face::pos : Face::neg;
                } else if (face[i] == Face::upper) {
                    v = eps - g;
                    next = Face::pos;
                } else if (face[i] == Face::lower) {
                    v = g + eps;
                    next = Face::neg;
                } else {
                    continue;
                }
                if (v > worst) {
                    worst = v;
                    pick = i;
                    to = next;
                }
            }
            if (pick == l_) return true;
            face[pick] = to;
        }
        return false;
    }

    void polish(double& gap) {
        std::vector<double> beta(l_);
        for (std::size_t i = 0; i < l_; ++i) beta[i] = alpha_[i] - alpha_[i + l_];
        auto trial = beta;
        if (!active_set(trial)) return;
        for (auto& b : trial) b = std::clamp(b, -params_.c, params_.c);

        const double before = objective(beta);
        const double after = objective(trial);
        if (!(after + 1e-12 * std::max(1.0, std::abs(before)) >= before)) return;

        const auto saved_alpha = alpha_;
        const auto saved_grad = grad_;
        for (std::size_t i = 0; i < l_; ++i) {
            alpha_[i] = std::max(trial[i], 0.0);
            alpha_[i + l_] = std::max(-trial[i], 0.0);
        }
        for (std::size_t u = 0; u < n_; ++u) {
            const double du = alpha_[u] - saved_alpha[u];
            if (du == 0.0) continue;
            const auto ku = cache_.row(u % l_);
            for (std::size_t t = 0; t < n_; ++t) grad_[t] += q(u, t, ku) * du;
        }
        double new_gap = 0.0;
        select_pair(new_gap);
        if (new_gap > params_.tol) {
            alpha_ = saved_alpha;
            grad_ = saved_grad;
            select_pair(gap);
            return;
        }
        gap = new_gap;
    }

    // Mean of s_t G_t over free variables, else the midpoint of the feasible
    // interval given by the bounded ones.
    double compute_rho() const {
        double ub = std::numeric_limits<double>::infinity();
        double lb = -std::numeric_limits<double>::infinity();
        double sum_free = 0.0;
        std::size_t n_free = 0;
        for (std::size_t t = 0; t < n_; ++t) {
            const double sg = sign(t) * grad_[t];
            if (at_upper(t)) {
                if (sign(t) < 0)
                    ub = std::min(ub, sg);
                else
                    lb = std::max(lb, sg);
            } else if (at_lower(t)) {
                if (sign(t) > 0)
                    ub = std::min(ub, sg);
                else
                    lb = std::max(lb, sg);
            } else {
                ++n_free;
                sum_free += sg;
            }
        }
        if (n_free > 0) return sum_free / static_cast<double>(n_free);
        return (ub + lb) / 2.0;
    }

    double objective(const std::vector<double>& beta) {
        double quad = 0.0, lin = 0.0;
        for (std::size_t i = 0; i < l_; ++i) {
            if (beta[i] == 0.0) continue;
            const auto ki = cache_.row(i);
            double row = 0.0;
            for (std::size_t j = 0; j < l_; ++j) row += beta[j] * ki[j];
            quad += beta[i] * row;
            lin += -params_.epsilon * std::abs(beta[i]) + y_[i] * beta[i];
        }
        return -0.5 * quad + lin;
    }

    const SvrHyperParams& params_;
    std::span<const double> y_;
    std::size_t l_;
    std::size_t n_;
    KernelCache<Sample> cache_;
    std::vector<double> alpha_;
    std::vector<double> grad_;
    std::vector<double> linear_;
    std::vector<std::size_t> active_;
    bool unshrunk_ = false;
};

template <KernelSample Sample>
void validate_training_set(std::span<const Sample> x, std::span<const double> y) {
    if (x.empty()) throw DataError("svr: empty training set");
    if (x.size() != y.size()) throw DataError("svr: sample and target counts differ");
    const auto dim = SampleTraits<Sample>::dimension(x[0]);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(y[i])) throw DataError("svr: non-finite target at index " + std::to_string(i));
        if (SampleTraits<Sample>::dimension(x[i]) != dim)
            throw DataError("svr: dimension mismatch at index " + std::to_string(i));
        if (!std::isfinite(SampleTraits<Sample>::dot(x[i], x[i])))
            throw DataError("svr: non-finite feature values at index " + std::to_string(i));
    }
}

}  // namespace detail

template <KernelSample Sample>
DualSolution solve_dual(const SvrHyperParams& params, std::span<const Sample> x, std::span<const double> y) {
    params.validate();
    detail::validate_training_set(x, y);
    return detail::SmoSolver<Sample>(params, x, y).solve();
}

inline constexpr double support_threshold = 1e-12;

template <KernelSample Sample>
struct SvrModel {
    SvrHyperParams params;
    std::vector<Sample> support_vectors;
    std::vector<double> dual_coef;
    double bias = 0.0;
    long long n_iterations = 0;
    bool converged = false;
    std::size_t dimension = 0;
};

template <KernelSample Sample>
SvrModel<Sample> model_from_solution(const SvrHyperParams& params, std::span<const Sample> x,
                                     const DualSolution& sol) {
    SvrModel<Sample> model;
    model.params = params;
    model.bias = sol.bias;
    model.n_iterations = sol.iterations;
    model.converged = sol.converged;
    model.dimension = SampleTraits<Sample>::dimension(x[0]);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::abs(sol.beta[i]) > support_threshold) {
            model.support_vectors.push_back(x[i]);
            model.dual_coef.push_back(sol.beta[i]);
        }
    }
    return model;
}

template <KernelSample Sample>
SvrModel<Sample> fit(const SvrHyperParams& params, std::span<const Sample> x, std::span<const double> y) {
    const auto sol = solve_dual(params, x, y);
    return model_from_solution(params, x, sol);
}

template <KernelSample Sample>
double predict(const SvrModel<Sample>& model, const Sample& x) {
    if (SampleTraits<Sample>::dimension(x) != model.dimension)
        throw DataError("svr: input dimension " + std::to_string(SampleTraits<Sample>::dimension(x)) +
                        " does not match model dimension " + std::to_string(model.dimension));
    double f = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
        f += model.dual_coef[i] * kernel_value(model.params.kernel, model.params.gamma, model.support_vectors[i], x);
    return f;
}

// negative -> -1, neutral -> 0, positive -> +1.
inline double encode_label(SentimentLabel label) {
    switch (label) {
        case SentimentLabel::negative: return -1.0;
        case SentimentLabel::neutral: return 0.0;
        case SentimentLabel::positive: return 1.0;
    }
    return 0.0;
}

// Nearest of {-1, 0, +1}; +-0.5 exactly decode to neutral.
inline SentimentLabel decode_label(double v) {
    if (!std::isfinite(v)) throw DataError("cannot decode a non-finite regression output");
    if (v < -0.5) return SentimentLabel::negative;
    if (v > 0.5) return SentimentLabel::positive;
    return SentimentLabel::neutral;
}

}  // namespace cmsent
