#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "avi/ingest.hpp"

namespace avi {

struct LabeledCorpus {
    std::vector<std::pair<std::string, Relevance>> items;
};

/// Multinomial Naive Bayes with additive smoothing. Class 0 = relevant,
/// class 1 = irrelevant.
struct ClassifierModel {
    std::map<std::string, std::size_t> vocabulary;  // token -> index
    double log_prior[2] = {0.0, 0.0};
    std::vector<double> log_likelihood[2];  // per-class, indexed by vocabulary
    double alpha = 1.0;
    bool keep_hashtag_stems = true;
};

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // confusion counts with "relevant" as the positive class
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
};

ClassifierModel train_classifier(const LabeledCorpus& corpus, double alpha = 1.0,
                                 bool keep_hashtag_stems = true);

struct Prediction {
    Relevance label;
    double p_relevant;  // posterior probability of the relevant class
};

Prediction predict(const ClassifierModel& model, const std::string& text);

Metrics evaluate(const ClassifierModel& model, const LabeledCorpus& heldout);

/// Deterministic stratified split: for each class, a seeded shuffle and an
/// 80/20 cut. Returns (train, eval).
std::pair<LabeledCorpus, LabeledCorpus> stratified_split(const LabeledCorpus& corpus,
                                                         double train_fraction, std::uint64_t seed);

void save_model(const ClassifierModel& model, std::ostream& out);
ClassifierModel load_model(std::istream& in);

struct ExternalLabelResult {
    std::size_t matched = 0;
    std::vector<std::string> unknown_ids;  // label rows whose post id was not found
};

/// Applies a `post_id,label` stream to the posts in place.
ExternalLabelResult apply_external_labels(std::vector<Post>& posts, std::istream& labels);

/// Loads a `text,label` training corpus (label in {relevant,irrelevant}).
LabeledCorpus load_corpus(std::istream& in);

}  // namespace avi
