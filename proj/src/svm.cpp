#include "airgate/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "airgate/error.hpp"

namespace airgate {

namespace {

constexpr double kTau = 1e-12;

struct Problem {
    std::span<const double> K;
    std::span<const int> y;
    std::size_t n;
    double c_pos, c_neg;

    double q(std::size_t i, std::size_t j) const { return y[i] * y[j] * K[i * n + j]; }
    double bound(std::size_t i) const { return y[i] > 0 ? c_pos : c_neg; }
    bool in_up(std::size_t t, double a) const { return y[t] > 0 ? a < bound(t) : a > 0; }
    bool in_low(std::size_t t, double a) const { return y[t] > 0 ? a > 0 : a < bound(t); }
};

Problem make_problem(std::span<const double> kernel, std::span<const int> y, const SmoOptions& o) {
    const std::size_t n = y.size();
    if (n == 0) throw DataError("SMO: empty training set");
    if (kernel.size() != n * n) throw UsageError("SMO: kernel matrix must be n x n");
    if (!(o.c_pos > 0) || !(o.c_neg > 0)) throw UsageError("SMO: C must be positive");
    bool pos = false, neg = false;
    for (int v : y) {
        if (v != 1 && v != -1) throw UsageError("SMO: labels must be +1 or -1");
        (v > 0 ? pos : neg) = true;
    }
    if (!pos || !neg) throw DataError("SMO: both classes are required");
    return {kernel, y, n, o.c_pos, o.c_neg};
}

// G = Q alpha - 1
std::vector<double> gradient(const Problem& p, std::span<const double> alpha) {
    std::vector<double> g(p.n, -1.0);
    for (std::size_t i = 0; i < p.n; ++i) {
        for (std::size_t j = 0; j < p.n; ++j) g[i] += p.q(i, j) * alpha[j];
    }
    return g;
}

// Most violating pair: (i, max_up) and (j, min_low) of -y G.
void extremes(const Problem& p, std::span<const double> alpha, std::span<const double> g, std::size_t& i,
              double& up, std::size_t& j, double& low) {
    up = -std::numeric_limits<double>::infinity();
    low = std::numeric_limits<double>::infinity();
    i = j = p.n;
    for (std::size_t t = 0; t < p.n; ++t) {
        const double v = -p.y[t] * g[t];
        if (p.in_up(t, alpha[t]) && v > up) {
            up = v;
            i = t;
        }
        if (p.in_low(t, alpha[t]) && v < low) {
            low = v;
            j = t;
        }
    }
}

}  // namespace

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
    if (x.size() != y.size()) throw UsageError("rbf_kernel: dimension mismatch");
    double d2 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

double dual_objective(std::span<const double> kernel, std::span<const int> y, std::span<const double> alpha) {
    const std::size_t n = y.size();
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lin += alpha[i];
        for (std::size_t j = 0; j < n; ++j) quad += alpha[i] * alpha[j] * y[i] * y[j] * kernel[i * n + j];
    }
    return lin - 0.5 * quad;
}

double kkt_violation(std::span<const double> kernel, std::span<const int> y, std::span<const double> alpha,
                     const SmoOptions& options) {
    const Problem p = make_problem(kernel, y, options);
    const auto g = gradient(p, alpha);
    std::size_t i, j;
    double up, low;
    extremes(p, alpha, g, i, up, j, low);
    if (i == p.n || j == p.n) return 0.0;
    return std::max(0.0, up - low);
}

SmoResult smo_solve(std::span<const double> kernel, std::span<const int> y, const SmoOptions& options) {
    const Problem p = make_problem(kernel, y, options);
    const std::size_t n = p.n;
    const std::size_t cap = options.max_iterations ? options.max_iterations : 100 * n;

    SmoResult res;
    res.alpha.assign(n, 0.0);
    std::vector<double>& a = res.alpha;
    std::vector<double> g(n, -1.0);

    for (;;) {
        std::size_t i, j;
        double up, low;
        extremes(p, a, g, i, up, j, low);
        res.max_violation = (i == n || j == n) ? 0.0 : std::max(0.0, up - low);
        if (res.max_violation <= options.tolerance) {
            res.converged = true;
            break;
        }
        if (res.iterations >= cap) break;
        ++res.iterations;

        const double ci = p.bound(i), cj = p.bound(j);
        const double old_ai = a[i], old_aj = a[j];
        if (y[i] != y[j]) {
            double quad = p.K[i * n + i] + p.K[j * n + j] - 2.0 * p.K[i * n + j];
            if (quad <= 0) quad = kTau;
            const double delta = (-g[i] - g[j]) / quad;
            const double diff = a[i] - a[j];
            a[i] += delta;
            a[j] += delta;
            if (diff > 0) {
                if (a[j] < 0) {
                    a[j] = 0;
                    a[i] = diff;
                }
            } else if (a[i] < 0) {
                a[i] = 0;
                a[j] = -diff;
            }
            if (diff > ci - cj) {
                if (a[i] > ci) {
                    a[i] = ci;
                    a[j] = ci - diff;
                }
            } else if (a[j] > cj) {
                a[j] = cj;
                a[i] = cj + diff;
            }
        } else {
            double quad = p.K[i * n + i] + p.K[j * n + j] - 2.0 * p.K[i * n + j];
            if (quad <= 0) quad = kTau;
            const double delta = (g[i] - g[j]) / quad;
            const double sum = a[i] + a[j];
            a[i] -= delta;
            a[j] += delta;
            if (sum > ci) {
                if (a[i] > ci) {
                    a[i] = ci;
                    a[j] = sum - ci;
                }
            } else if (a[j] < 0) {
                a[j] = 0;
                a[i] = sum;
            }
            if (sum > cj) {
                if (a[j] > cj) {
                    a[j] = cj;
                    a[i] = sum - cj;
                }
            } else if (a[i] < 0) {
                a[i] = 0;
                a[j] = sum;
            }
        }
        const double di = a[i] - old_ai, dj = a[j] - old_aj;
        for (std::size_t t = 0; t < n; ++t) g[t] += p.q(t, i) * di + p.q(t, j) * dj;
    }

    // Bias from the free vectors, or the midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * g[t];
        if (a[t] >= p.bound(t)) {
            if (y[t] < 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (a[t] <= 0) {
            if (y[t] > 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
    res.bias = -rho;
    res.objective = dual_objective(kernel, y, a);
    return res;
}

}  // namespace airgate
