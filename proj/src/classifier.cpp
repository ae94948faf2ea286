#include "avi/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <unordered_map>
#include <stdexcept>

#include "avi/text.hpp"

namespace avi {

namespace {

constexpr int kRelevant = 0;
constexpr int kIrrelevant = 1;

int class_index(Relevance r) { return r == Relevance::Relevant ? kRelevant : kIrrelevant; }

Relevance parse_label(const std::string& s, std::size_t lineno) {
    if (s == "relevant") return Relevance::Relevant;
    if (s == "irrelevant") return Relevance::Irrelevant;
    throw ParseError("label '" + s + "' not in {relevant, irrelevant}", lineno);
}

}  // namespace

ClassifierModel train_classifier(const LabeledCorpus& corpus, double alpha,
                                 bool keep_hashtag_stems) {
    if (alpha <= 0.0) throw std::invalid_argument("smoothing alpha must be positive");
    std::size_t class_docs[2] = {0, 0};
    for (const auto& [text, label] : corpus.items) {
        if (text.empty()) throw std::invalid_argument("corpus contains an empty text");
        ++class_docs[class_index(label)];
    }
    if (class_docs[0] == 0 || class_docs[1] == 0) {
        throw std::invalid_argument("training corpus must contain both classes");
    }

    ClassifierModel model;
    model.alpha = alpha;
    model.keep_hashtag_stems = keep_hashtag_stems;

    std::vector<std::vector<std::string>> doc_tokens(corpus.items.size());
    for (std::size_t i = 0; i < corpus.items.size(); ++i) {
        doc_tokens[i] = tokenize(normalize_text(corpus.items[i].first, keep_hashtag_stems));
        for (const auto& tok : doc_tokens[i]) {
            model.vocabulary.emplace(tok, 0);
        }
    }
    std::size_t idx = 0;
    for (auto& [tok, id] : model.vocabulary) id = idx++;
    const std::size_t vocab = model.vocabulary.size();

    std::vector<double> counts[2];
    counts[0].assign(vocab, 0.0);
    counts[1].assign(vocab, 0.0);
    double totals[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < corpus.items.size(); ++i) {
        const int c = class_index(corpus.items[i].second);
        for (const auto& tok : doc_tokens[i]) {
            counts[c][model.vocabulary.at(tok)] += 1.0;
            totals[c] += 1.0;
        }
    }

    const auto n_docs = static_cast<double>(corpus.items.size());
    for (int c = 0; c < 2; ++c) {
        model.log_prior[c] = std::log(static_cast<double>(class_docs[c]) / n_docs);
        model.log_likelihood[c].resize(vocab);
        const double denom = totals[c] + alpha * static_cast<double>(vocab);
        for (std::size_t j = 0; j < vocab; ++j) {
            model.log_likelihood[c][j] = std::log((counts[c][j] + alpha) / denom);
        }
    }
    return model;
}

Prediction predict(const ClassifierModel& model, const std::string& text) {
    const auto tokens = tokenize(normalize_text(text, model.keep_hashtag_stems));
    double score[2] = {model.log_prior[0], model.log_prior[1]};
    for (const auto& tok : tokens) {
        const auto it = model.vocabulary.find(tok);
        if (it == model.vocabulary.end()) continue;  // unseen tokens cancel across classes
        score[0] += model.log_likelihood[0][it->second];
        score[1] += model.log_likelihood[1][it->second];
    }
    // log-sum-exp for the posterior of the relevant class
    const double m = std::max(score[0], score[1]);
    const double z = std::exp(score[0] - m) + std::exp(score[1] - m);
    const double p_rel = std::exp(score[0] - m) / z;
    return Prediction{score[0] >= score[1] ? Relevance::Relevant : Relevance::Irrelevant, p_rel};
}

Metrics evaluate(const ClassifierModel& model, const LabeledCorpus& heldout) {
    if (heldout.items.empty()) throw std::invalid_argument("evaluate: empty held-out set");
    Metrics m;
    for (const auto& [text, label] : heldout.items) {
        const auto pred = predict(model, text).label;
        if (label == Relevance::Relevant) {
            pred == Relevance::Relevant ? ++m.tp : ++m.fn;
        } else {
            pred == Relevance::Relevant ? ++m.fp : ++m.tn;
        }
    }
    const auto total = static_cast<double>(m.total());
    m.accuracy = static_cast<double>(m.tp + m.tn) / total;
    m.precision = (m.tp + m.fp) ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 0.0;
    m.f1 = (m.precision + m.recall > 0.0)
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

std::pair<LabeledCorpus, LabeledCorpus> stratified_split(const LabeledCorpus& corpus,
                                                         double train_fraction, std::uint64_t seed) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0) {
        throw std::invalid_argument("train_fraction must be in (0,1)");
    }
    LabeledCorpus train, eval;
    std::mt19937_64 rng(seed);
    for (const Relevance cls : {Relevance::Relevant, Relevance::Irrelevant}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < corpus.items.size(); ++i) {
            if (corpus.items[i].second == cls) idx.push_back(i);
        }
        std::shuffle(idx.begin(), idx.end(), rng);
        const auto cut = static_cast<std::size_t>(
            std::llround(train_fraction * static_cast<double>(idx.size())));
        for (std::size_t k = 0; k < idx.size(); ++k) {
            (k < cut ? train : eval).items.push_back(corpus.items[idx[k]]);
        }
    }
    return {std::move(train), std::move(eval)};
}

void save_model(const ClassifierModel& model, std::ostream& out) {
    out << "avi-nb-model v1\n";
    out << std::setprecision(17);
    out << "alpha " << model.alpha << "\n";
    out << "keep_hashtag_stems " << (model.keep_hashtag_stems ? 1 : 0) << "\n";
    out << "prior " << model.log_prior[0] << " " << model.log_prior[1] << "\n";
    out << "vocab " << model.vocabulary.size() << "\n";
    for (const auto& [tok, id] : model.vocabulary) {
        out << tok << " " << model.log_likelihood[0][id] << " " << model.log_likelihood[1][id]
            << "\n";
    }
}

ClassifierModel load_model(std::istream& in) {
    std::string header;
    std::getline(in, header);
    if (header != "avi-nb-model v1") throw ParseError("unrecognized model file header: '" + header + "'");
    ClassifierModel model;
    std::string key;
    int keep = 1;
    in >> key >> model.alpha;
    if (key != "alpha") throw ParseError("expected 'alpha' in model file");
    in >> key >> keep;
    if (key != "keep_hashtag_stems") throw ParseError("expected 'keep_hashtag_stems' in model file");
    model.keep_hashtag_stems = keep != 0;
    in >> key >> model.log_prior[0] >> model.log_prior[1];
    if (key != "prior") throw ParseError("expected 'prior' in model file");
    std::size_t vocab = 0;
    in >> key >> vocab;
    if (key != "vocab") throw ParseError("expected 'vocab' in model file");
    model.log_likelihood[0].resize(vocab);
    model.log_likelihood[1].resize(vocab);
    for (std::size_t i = 0; i < vocab; ++i) {
        std::string tok;
        double l0 = 0.0, l1 = 0.0;
        if (!(in >> tok >> l0 >> l1)) throw ParseError("truncated model vocabulary table");
        model.vocabulary.emplace(tok, i);
        model.log_likelihood[0][i] = l0;
        model.log_likelihood[1][i] = l1;
    }
    return model;
}

ExternalLabelResult apply_external_labels(std::vector<Post>& posts, std::istream& labels) {
    std::string line;
    if (!std::getline(labels, line)) throw ParseError("labels file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "post_id,label") {
        throw ParseError("labels file must start with header 'post_id,label'");
    }
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < posts.size(); ++i) by_id.emplace(posts[i].id, i);

    ExternalLabelResult result;
    std::size_t lineno = 1;
    while (std::getline(labels, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("expected 'post_id,label'", lineno);
        const std::string id = line.substr(0, comma);
        const Relevance label = parse_label(line.substr(comma + 1), lineno);
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            result.unknown_ids.push_back(id);
            continue;
        }
        posts[it->second].relevance = label;
        ++result.matched;
    }
    return result;
}

LabeledCorpus load_corpus(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("corpus file is empty");
    LabeledCorpus corpus;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.rfind(',');
        if (comma == std::string::npos) throw ParseError("expected 'text,label'", lineno);
        std::string text = line.substr(0, comma);
        if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
            text = text.substr(1, text.size() - 2);
        }
        corpus.items.emplace_back(std::move(text), parse_label(line.substr(comma + 1), lineno));
    }
    return corpus;
}

}  // namespace avi
