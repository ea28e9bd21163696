#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace airgate {

/// Verification scores, higher = more genuine-like.
struct ScoreSet {
    std::vector<double> genuine;
    std::vector<double> impostor;
};

struct EerResult {
    double eer = 0.0;
    double threshold = 0.0;
};

/// Fraction of impostor scores >= theta.
double far_at(const ScoreSet& scores, double theta);
/// Fraction of genuine scores < theta.
double frr_at(const ScoreSet& scores, double theta);

/// Equal error rate. Candidate thresholds are the sorted distinct scores, the
/// midpoints between neighbours, and one point beyond each end. If FAR == FRR
/// at some candidate the first such point is returned; otherwise the FAR and
/// FRR curves are linearly interpolated between the two adjacent candidates
/// where FAR - FRR changes sign.
EerResult compute_eer(const ScoreSet& scores);

struct EvalCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
};

/// Per-user counts at theta with the verifier's accept rule (score > theta).
/// Genuine trials count as tp/fn, attack trials as fp/tn.
std::vector<EvalCounts> counts_at(std::span<const ScoreSet> per_user, double theta);

struct PrPoint {
    double theta = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

/// Sweeps theta over -infinity and every distinct score, ascending. Precision
/// and recall sum the per-user counts. Thresholds with no accepted trial are
/// skipped.
std::vector<PrPoint> precision_recall(std::span<const ScoreSet> per_user);
std::string pr_csv(std::span<const PrPoint> curve);

/// Precision of `curve` at the given recall: the best precision among points
/// with recall >= r, or -1 if none reaches r.
double precision_at_recall(std::span<const PrPoint> curve, double r);

double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;
};
/// Ordinary least squares y = slope * x + intercept with Pearson r.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> x);

}  // namespace airgate
