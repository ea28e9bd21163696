#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "airgate/svm.hpp"
#include "oracles.hpp"

using namespace airgate;

using oracle::projected_gradient;
using Problem = oracle::SvmProblem;
using oracle::random_svm_problem;

TEST_CASE("SMO reaches the projected-gradient optimum on tiny problems") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Problem p = random_svm_problem(rng);
        const SmoResult r = smo_solve(p.K, p.y, p.opts);
        REQUIRE(r.converged);
        const auto oracle = projected_gradient(p);
        CHECK(dual_objective(p.K, p.y, r.alpha) == doctest::Approx(dual_objective(p.K, p.y, oracle)).epsilon(1e-3));
        CHECK(r.objective == doctest::Approx(dual_objective(p.K, p.y, r.alpha)));
        CHECK(kkt_violation(p.K, p.y, r.alpha, p.opts) <= 1e-3);
        double balance = 0;
        for (std::size_t i = 0; i < p.y.size(); ++i) {
            balance += r.alpha[i] * p.y[i];
            CHECK(r.alpha[i] >= 0.0);
            CHECK(r.alpha[i] <= (p.y[i] > 0 ? p.opts.c_pos : p.opts.c_neg) + 1e-12);
        }
        CHECK(std::abs(balance) <= 1e-6);
    }
}

TEST_CASE("free support vectors sit on the margin") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const Problem p = random_svm_problem(rng);
        const SmoResult r = smo_solve(p.K, p.y, p.opts);
        const std::size_t m = p.y.size();
        for (std::size_t i = 0; i < m; ++i) {
            const double C = p.y[i] > 0 ? p.opts.c_pos : p.opts.c_neg;
            if (r.alpha[i] <= 1e-8 || r.alpha[i] >= C - 1e-8) continue;
            double f = r.bias;
            for (std::size_t j = 0; j < m; ++j) f += r.alpha[j] * p.y[j] * p.K[j * m + i];
            CHECK(p.y[i] * f == doctest::Approx(1.0).epsilon(1e-4));
        }
    }
}

TEST_CASE("separable pair has the closed-form solution") {
    // Two points with K = [[1, k], [k, 1]]: alpha = 2 / (2 - 2k), bias 0.
    const double k = 0.3;
    const std::vector<double> K{1, k, k, 1};
    const std::vector<int> y{1, -1};
    SmoOptions o;
    o.c_pos = o.c_neg = 100.0;
    const SmoResult r = smo_solve(K, y, o);
    CHECK(r.alpha[0] == doctest::Approx(1.0 / (1.0 - k)));
    CHECK(r.alpha[1] == doctest::Approx(1.0 / (1.0 - k)));
    CHECK(r.bias == doctest::Approx(0.0));
}

TEST_CASE("rbf kernel") {
    const std::vector<double> a{0, 0}, b{3, 4};
    CHECK(rbf_kernel(a, a, 0.7) == 1.0);
    CHECK(rbf_kernel(a, b, 0.1) == doctest::Approx(std::exp(-2.5)));
}
