#pragma once

#include <span>
#include <string>
#include <vector>

#include "robustlab/distributions.hpp"

namespace robustlab {

enum class Preprocess { identity, threshold };

/// Coordinate-wise binarization: +1 where x_i >= 0, -1 otherwise. For any
/// hypercube point, this removes every l-inf perturbation of radius < 1.
std::vector<double> threshold_map(std::span<const double> x);

/// Linear decision rule sign(<w, preprocess(x)>) with the tie sign(0)
/// resolved as +1. Construction rejects the all-zero weight vector so a
/// degenerate constant classifier can never slip through.
class LinearClassifier {
public:
    /// raw_norm records the l2 norm of the pre-normalization weight vector;
    /// pass 0 to take it from w itself.
    explicit LinearClassifier(std::vector<double> w, Preprocess preprocess = Preprocess::identity,
                              double raw_norm = 0.0);

    const std::vector<double>& weights() const { return w_; }
    Preprocess preprocess() const { return preprocess_; }
    double raw_norm() const { return raw_norm_; }
    std::size_t dim() const { return w_.size(); }

    int predict(std::span<const double> x) const;

    /// <w, y * preprocess(x)>. The decision boundary convention for error
    /// accounting lives with the callers: a worst-case margin <= 0 counts
    /// as a misclassification.
    double margin(const LabeledSample& sample) const;

    double l1_norm() const { return l1_; }
    double l2_norm() const { return l2_; }

private:
    std::vector<double> w_;
    Preprocess preprocess_;
    double raw_norm_;
    double l1_;
    double l2_;
};

/// Class-weighted mean learner: w = (1/n) sum_i y_i x_i, optionally rescaled
/// to unit l2 norm (the default; predictions are scale-invariant and the
/// concentration statements are phrased for the unit vector).
LinearClassifier learn_weighted_mean(const Dataset& data, bool normalize = true,
                                     Preprocess preprocess = Preprocess::identity);

std::string classifier_to_json(const LinearClassifier& clf);
LinearClassifier classifier_from_json(const std::string& text);

}  // namespace robustlab
