#include "airgate/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "airgate/error.hpp"

namespace airgate {

namespace {

void require_scores(const ScoreSet& s) {
    if (s.genuine.empty() || s.impostor.empty()) throw DataError("EER needs genuine and impostor scores");
    for (const auto* side : {&s.genuine, &s.impostor}) {
        for (double v : *side) {
            if (!std::isfinite(v)) throw DataError("EER scores must be finite");
        }
    }
}

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> rank(x.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = r;
        i = j + 1;
    }
    return rank;
}

}  // namespace

double far_at(const ScoreSet& s, double theta) {
    const auto n = std::count_if(s.impostor.begin(), s.impostor.end(), [&](double v) { return v >= theta; });
    return static_cast<double>(n) / static_cast<double>(s.impostor.size());
}

double frr_at(const ScoreSet& s, double theta) {
    const auto n = std::count_if(s.genuine.begin(), s.genuine.end(), [&](double v) { return v < theta; });
    return static_cast<double>(n) / static_cast<double>(s.genuine.size());
}

EerResult compute_eer(const ScoreSet& scores) {
    require_scores(scores);
    std::vector<double> gen = scores.genuine, imp = scores.impostor;
    std::sort(gen.begin(), gen.end());
    std::sort(imp.begin(), imp.end());

    std::vector<double> distinct;
    distinct.reserve(gen.size() + imp.size());
    std::merge(gen.begin(), gen.end(), imp.begin(), imp.end(), std::back_inserter(distinct));
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<double> cand;
    cand.reserve(2 * distinct.size() + 1);
    cand.push_back(distinct.front() - std::max(1.0, std::abs(distinct.front())));
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        if (i > 0) cand.push_back(distinct[i - 1] + 0.5 * (distinct[i] - distinct[i - 1]));
        cand.push_back(distinct[i]);
    }
    cand.push_back(distinct.back() + std::max(1.0, std::abs(distinct.back())));

    const auto ng = static_cast<double>(gen.size()), ni = static_cast<double>(imp.size());
    // Impostors >= theta and genuine < theta, both via binary search on the sorted sides.
    auto counts = [&](double theta) {
        const auto imp_ge = imp.end() - std::lower_bound(imp.begin(), imp.end(), theta);
        const auto gen_lt = std::lower_bound(gen.begin(), gen.end(), theta) - gen.begin();
        return std::pair<std::size_t, std::size_t>(imp_ge, gen_lt);
    };

    double prev_far = 0, prev_frr = 0, prev_theta = 0;
    for (std::size_t k = 0; k < cand.size(); ++k) {
        const auto [imp_ge, gen_lt] = counts(cand[k]);
        const double far = static_cast<double>(imp_ge) / ni;
        const double frr = static_cast<double>(gen_lt) / ng;
        if (imp_ge * gen.size() == gen_lt * imp.size()) return {far, cand[k]};
        if (far < frr) {
            // k > 0: FAR - FRR is +1 at the first candidate.
            const double d0 = prev_far - prev_frr, d1 = far - frr;
            const double t = d0 / (d0 - d1);
            return {prev_far + t * (far - prev_far), prev_theta + t * (cand[k] - prev_theta)};
        }
        prev_far = far;
        prev_frr = frr;
        prev_theta = cand[k];
    }
    throw std::logic_error("compute_eer: FAR and FRR never crossed");
}

std::vector<EvalCounts> counts_at(std::span<const ScoreSet> per_user, double theta) {
    std::vector<EvalCounts> out;
    out.reserve(per_user.size());
    for (const ScoreSet& s : per_user) {
        EvalCounts c;
        for (double v : s.genuine) (v > theta ? c.tp : c.fn)++;
        for (double v : s.impostor) (v > theta ? c.fp : c.tn)++;
        out.push_back(c);
    }
    return out;
}

std::vector<PrPoint> precision_recall(std::span<const ScoreSet> per_user) {
    std::vector<double> thetas{-std::numeric_limits<double>::infinity()};
    for (const ScoreSet& s : per_user) {
        thetas.insert(thetas.end(), s.genuine.begin(), s.genuine.end());
        thetas.insert(thetas.end(), s.impostor.begin(), s.impostor.end());
    }
    std::sort(thetas.begin(), thetas.end());
    thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());

    std::vector<PrPoint> curve;
    for (double theta : thetas) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (const EvalCounts& c : counts_at(per_user, theta)) {
            tp += c.tp;
            fp += c.fp;
            fn += c.fn;
        }
        if (tp + fp == 0 || tp + fn == 0) continue;
        curve.push_back({theta, static_cast<double>(tp) / static_cast<double>(tp + fp),
                         static_cast<double>(tp) / static_cast<double>(tp + fn)});
    }
    return curve;
}

std::string pr_csv(std::span<const PrPoint> curve) {
    std::string out = "theta,precision,recall\n";
    char buf[96];
    for (const PrPoint& p : curve) {
        if (std::isinf(p.theta)) {
            std::snprintf(buf, sizeof buf, "-inf,%.9f,%.9f\n", p.precision, p.recall);
        } else {
            std::snprintf(buf, sizeof buf, "%.9g,%.9f,%.9f\n", p.theta, p.precision, p.recall);
        }
        out += buf;
    }
    return out;
}

double precision_at_recall(std::span<const PrPoint> curve, double r) {
    double best = -1.0;
    for (const PrPoint& p : curve) {
        if (p.recall >= r) best = std::max(best, p.precision);
    }
    return best;
}

double mean(std::span<const double> x) {
    if (x.empty()) throw DataError("mean of an empty list");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double pearson(std::span<const double> x, std::span<const double> y) { return fit_line(x, y).r; }

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("spearman: length mismatch");
    const auto rx = average_ranks(x), ry = average_ranks(y);
    return pearson(rx, ry);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("fit_line: length mismatch");
    if (x.size() < 2) throw DataError("fit_line: need at least 2 points");
    const double mx = mean(x), my = mean(y);
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw DataError("fit_line: zero-variance input");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r = sxy / std::sqrt(sxx * syy);
    return fit;
}

}  // namespace airgate
