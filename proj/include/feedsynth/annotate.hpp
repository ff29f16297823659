#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "feedsynth/corpus.hpp"
#include "feedsynth/text_preprocess.hpp"

namespace feedsynth {

// One scorer's opinion: hard polarity plus a confidence in [0,1].
struct ScorerVerdict {
    int polarity = 1;  // -1 or +1
    double confidence = 0.0;
};

// Affine map of polarity*confidence onto [0,1]; 0 fully negative, 1 fully
// positive, 0.5 for zero confidence.
inline double normalize_sentiment_score(const ScorerVerdict& v) {
    if (v.polarity != 1 && v.polarity != -1)
        throw std::invalid_argument("verdict polarity must be -1 or +1");
    if (!(v.confidence >= 0.0 && v.confidence <= 1.0))
        throw std::invalid_argument("verdict confidence outside [0,1]");
    return (static_cast<double>(v.polarity) * v.confidence + 1.0) / 2.0;
}

// Open interval: a mean of exactly 0.49 or 0.51 is still usable.
inline bool in_safety_margin(double mean_score) {
    return mean_score > 0.49 && mean_score < 0.51;
}

struct EnsembleResult {
    std::array<ScorerVerdict, 4> per_scorer{};
    std::array<double, 4> normalized_scores{};
    double mean_score = 0.5;
    Sentiment label = Sentiment::xx;
    bool majority_failed = false;
    bool margin_hit = false;
};

// Majority vote over four verdicts: at least three must agree on polarity,
// and the mean normalized score must sit outside the safety margin.
inline EnsembleResult ensemble_label(const std::array<ScorerVerdict, 4>& verdicts) {
    EnsembleResult r;
    r.per_scorer = verdicts;
    int pos = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        r.normalized_scores[i] = normalize_sentiment_score(verdicts[i]);
        sum += r.normalized_scores[i];
        if (verdicts[i].polarity == 1) ++pos;
    }
    r.mean_score = sum / 4.0;
    const int neg = 4 - pos;
    if (pos < 3 && neg < 3) {
        r.majority_failed = true;
        r.label = Sentiment::xx;
        return r;
    }
    if (in_safety_margin(r.mean_score)) {
        r.margin_hit = true;
        r.label = Sentiment::xx;
        return r;
    }
    r.label = pos >= 3 ? Sentiment::positive : Sentiment::negative;
    return r;
}

// Plugin contract for sentiment scorers: UTF-8 text in, verdict out.
class SentimentScorer {
public:
    virtual ~SentimentScorer() = default;
    virtual ScorerVerdict score(const std::string& text) const = 0;
    virtual std::string name() const = 0;
};

// Deterministic lexicon scorer. Polarity follows the sign of
// (positive hits - negative hits), ties break positive; confidence is the
// absolute hit difference over the token count.
class LexiconScorer : public SentimentScorer {
public:
    LexiconScorer(std::string name, std::unordered_set<std::string> positive,
                  std::unordered_set<std::string> negative)
        : name_(std::move(name)), positive_(std::move(positive)), negative_(std::move(negative)) {}

    ScorerVerdict score(const std::string& text) const override {
        const auto toks = split_whitespace(text);
        long diff = 0;
        for (const auto& t : toks) {
            if (positive_.count(t)) ++diff;
            if (negative_.count(t)) --diff;
        }
        ScorerVerdict v;
        v.polarity = diff >= 0 ? 1 : -1;
        v.confidence = std::min(1.0, static_cast<double>(std::labs(diff)) /
                                         static_cast<double>(std::max<std::size_t>(1, toks.size())));
        return v;
    }

    std::string name() const override { return name_; }

private:
    std::string name_;
    std::unordered_set<std::string> positive_;
    std::unordered_set<std::string> negative_;
};

// The four built-in scorer variants carry pairwise-disjoint lexicons so the
// ensemble path (partial agreement, margin hits) is actually exercised.
inline std::vector<std::shared_ptr<SentimentScorer>> make_fallback_scorers() {
    using Set = std::unordered_set<std::string>;
    std::vector<std::shared_ptr<SentimentScorer>> s;
    s.push_back(std::make_shared<LexiconScorer>(
        "lex-a", Set{"great", "wonderful", "excellent"}, Set{"terrible", "awful", "horrible"}));
    s.push_back(std::make_shared<LexiconScorer>(
        "lex-b", Set{"amazing", "love", "fantastic"}, Set{"hate", "dreadful", "nasty"}));
    s.push_back(std::make_shared<LexiconScorer>(
        "lex-c", Set{"happy", "delightful", "superb"}, Set{"sad", "miserable", "gloomy"}));
    s.push_back(std::make_shared<LexiconScorer>(
        "lex-d", Set{"brilliant", "joyful", "good"}, Set{"angry", "worst", "bad"}));
    return s;
}

struct RetentionReport {
    std::size_t total = 0;
    std::size_t retained = 0;
    std::size_t xx_majority = 0;
    std::size_t xx_margin = 0;

    std::string to_csv() const {
        return "total,retained,xx_majority,xx_margin\n" + std::to_string(total) + "," +
               std::to_string(retained) + "," + std::to_string(xx_majority) + "," +
               std::to_string(xx_margin) + "\n";
    }

    std::string to_text() const {
        return "comments total:     " + std::to_string(total) +
               "\nretained:           " + std::to_string(retained) +
               "\nexcluded (majority):" + std::to_string(xx_majority) +
               "\nexcluded (margin):  " + std::to_string(xx_margin) + "\n";
    }
};

inline EnsembleResult
score_with_ensemble(const std::string& text,
                    const std::vector<std::shared_ptr<SentimentScorer>>& scorers) {
    if (scorers.size() != 4)
        throw std::invalid_argument("ensemble requires exactly 4 scorers");
    std::array<ScorerVerdict, 4> verdicts;
    for (std::size_t i = 0; i < 4; ++i) verdicts[i] = scorers[i]->score(text);
    return ensemble_label(verdicts);
}

// Relabels every comment in place and reports retention.
inline RetentionReport
annotate_corpus(Corpus& corpus, const std::vector<std::shared_ptr<SentimentScorer>>& scorers) {
    RetentionReport rep;
    for (auto& p : corpus.posts)
        for (auto& c : p.comments) {
            const auto r = score_with_ensemble(c.text, scorers);
            c.label = r.label;
            ++rep.total;
            if (r.label == Sentiment::xx) {
                if (r.majority_failed) ++rep.xx_majority;
                else ++rep.xx_margin;
            } else {
                ++rep.retained;
            }
        }
    return rep;
}

}  // namespace feedsynth
