#include "robustlab/classifiers.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace robustlab {

std::vector<double> threshold_map(std::span<const double> x) {
    std::vector<double> t(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) t[i] = x[i] >= 0.0 ? 1.0 : -1.0;
    return t;
}

LinearClassifier::LinearClassifier(std::vector<double> w, Preprocess preprocess, double raw_norm)
    : w_(std::move(w)), preprocess_(preprocess), raw_norm_(raw_norm), l1_(0.0), l2_(0.0) {
    if (w_.empty()) throw std::invalid_argument("weight vector must have dimension >= 1");
    double sq = 0.0;
    bool nonzero = false;
    for (double wi : w_) {
        if (!std::isfinite(wi)) throw std::invalid_argument("weight vector has a non-finite coordinate");
        if (wi != 0.0) nonzero = true;
        l1_ += std::abs(wi);
        sq += wi * wi;
    }
    if (!nonzero) throw std::invalid_argument("all-zero weight vector rejected");
    l2_ = std::sqrt(sq);
    if (raw_norm_ <= 0.0) raw_norm_ = l2_;
}

int LinearClassifier::predict(std::span<const double> x) const {
    if (x.size() != w_.size()) throw std::invalid_argument("dimension mismatch in predict");
    double dot = 0.0;
    if (preprocess_ == Preprocess::identity) {
        for (std::size_t i = 0; i < w_.size(); ++i) dot += w_[i] * x[i];
    } else {
        for (std::size_t i = 0; i < w_.size(); ++i) dot += w_[i] * (x[i] >= 0.0 ? 1.0 : -1.0);
    }
    return dot >= 0.0 ? 1 : -1;
}

double LinearClassifier::margin(const LabeledSample& sample) const {
    if (sample.x.size() != w_.size()) throw std::invalid_argument("dimension mismatch in margin");
    double dot = 0.0;
    if (preprocess_ == Preprocess::identity) {
        for (std::size_t i = 0; i < w_.size(); ++i) dot += w_[i] * sample.x[i];
    } else {
        for (std::size_t i = 0; i < w_.size(); ++i) dot += w_[i] * (sample.x[i] >= 0.0 ? 1.0 : -1.0);
    }
    return sample.y * dot;
}

LinearClassifier learn_weighted_mean(const Dataset& data, bool normalize, Preprocess preprocess) {
    if (data.empty()) throw std::invalid_argument("weighted mean learner requires data");
    const std::size_t d = data.front().x.size();
    std::vector<double> w(d, 0.0);
    for (const auto& s : data) {
        if (s.x.size() != d) throw std::invalid_argument("inconsistent sample dimensions");
        for (std::size_t i = 0; i < d; ++i) w[i] += s.y * s.x[i];
    }
    const double inv_n = 1.0 / static_cast<double>(data.size());
    for (auto& wi : w) wi *= inv_n;

    double sq = 0.0;
    for (double wi : w) sq += wi * wi;
    const double norm = std::sqrt(sq);
    if (norm == 0.0) throw std::invalid_argument("degenerate dataset: weighted mean is the zero vector");

    if (normalize) {
        for (auto& wi : w) wi /= norm;
    }
    return LinearClassifier(std::move(w), preprocess, norm);
}

std::string classifier_to_json(const LinearClassifier& clf) {
    nlohmann::json j;
    j["kind"] = "linear";
    j["d"] = clf.dim();
    j["w"] = clf.weights();
    j["preprocess"] = clf.preprocess() == Preprocess::identity ? "identity" : "threshold";
    j["norm"] = clf.raw_norm();
    return j.dump();
}

LinearClassifier classifier_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.at("kind").get<std::string>() != "linear") {
        throw std::invalid_argument("unsupported classifier kind");
    }
    auto w = j.at("w").get<std::vector<double>>();
    if (j.contains("d") && j.at("d").get<std::size_t>() != w.size()) {
        throw std::invalid_argument("classifier dimension does not match weight vector");
    }
    const auto pre_name = j.at("preprocess").get<std::string>();
    Preprocess pre;
    if (pre_name == "identity") {
        pre = Preprocess::identity;
    } else if (pre_name == "threshold") {
        pre = Preprocess::threshold;
    } else {
        throw std::invalid_argument("unknown preprocess: " + pre_name);
    }
    const double raw_norm = j.contains("norm") ? j.at("norm").get<double>() : 0.0;
    return LinearClassifier(std::move(w), pre, raw_norm);
}

}  // namespace robustlab
