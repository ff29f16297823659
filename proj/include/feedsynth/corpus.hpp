#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "feedsynth/image.hpp"
#include "feedsynth/text_preprocess.hpp"
#include "feedsynth/vocab.hpp"

namespace feedsynth {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Sentiment : int { negative = 0, positive = 1, xx = 2 };

inline std::string sentiment_str(Sentiment s) {
    switch (s) {
        case Sentiment::negative: return "0";
        case Sentiment::positive: return "1";
        default: return "XX";
    }
}

inline std::optional<Sentiment> parse_sentiment(const std::string& s) {
    if (s == "0") return Sentiment::negative;
    if (s == "1") return Sentiment::positive;
    if (s == "XX" || s == "xx") return Sentiment::xx;
    return std::nullopt;
}

struct Comment {
    std::string text;
    long likes = 0;
    int relevance_rank = 1;
    Sentiment label = Sentiment::xx;
};

struct Post {
    std::string post_id;
    std::string title;
    std::string body;
    std::vector<std::string> image_refs;
    long post_likes = 0;
    long shares = 0;
    std::vector<Comment> comments;
};

struct Corpus {
    std::vector<Post> posts;
    std::string root_dir;  // base for relative image_refs

    std::size_t comment_count() const {
        std::size_t n = 0;
        for (const auto& p : posts) n += p.comments.size();
        return n;
    }
};

// One training instance: token ids, exactly three 128x128 image slots
// (blank slots all-zero), target wrapped in BOS/EOS.
struct Sample {
    std::string post_id;
    std::vector<int> text_tokens;
    std::array<Image, 3> images;
    std::vector<int> target_tokens;
    Sentiment sentiment = Sentiment::xx;
};

// ---------------------------------------------------------------------------
// CSV persistence. Schema, one row per (post, comment):
//   post_id,title,body,image_paths,post_likes,shares,
//   comment_text,comment_likes,relevance_rank,sentiment_label
// image_paths are semicolon separated; sentiment_label in {0,1,XX}.
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {
        "post_id",      "title",         "body",          "image_paths", "post_likes",
        "shares",       "comment_text",  "comment_likes", "relevance_rank",
        "sentiment_label"};
    return cols;
}

inline std::string csv_escape(const std::string& f) {
    if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

// Splits a whole CSV document into records of fields, honoring quoting.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& content) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    bool any = false;
    for (std::size_t i = 0; i < content.size(); ++i) {
        const char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
            continue;
        }
        if (c == '"') {
            in_quotes = true;
            any = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
            if (any || !cur.empty()) {
                fields.push_back(cur);
                records.push_back(fields);
            }
            fields.clear();
            cur.clear();
            any = false;
        } else {
            cur += c;
            any = true;
        }
    }
    if (in_quotes) throw ValidationError("unterminated quoted field at end of file");
    if (any || !cur.empty()) {
        fields.push_back(cur);
        records.push_back(fields);
    }
    return records;
}

struct LoadReport {
    std::size_t rows = 0;
    std::vector<std::string> issues;    // schema violations, with row numbers
    std::vector<std::string> warnings;  // recoverable (dropped comments, blank slots)

    bool ok() const { return issues.empty(); }
};

inline long parse_long_field(const std::string& s, std::size_t row, const std::string& col,
                             LoadReport& rep) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size() || v < 0) throw std::invalid_argument("neg");
        return v;
    } catch (...) {
        rep.issues.push_back("row " + std::to_string(row) + ": column '" + col +
                             "' is not a non-negative integer: '" + s + "'");
        return 0;
    }
}

inline Corpus load_corpus_csv(const std::string& path, LoadReport& rep) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open corpus file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    const auto records = parse_csv(ss.str());
    if (records.empty()) throw ValidationError("empty corpus file: " + path);

    const auto& header = records[0];
    const auto& expected = csv_columns();
    for (const auto& col : expected)
        if (std::find(header.begin(), header.end(), col) == header.end())
            throw ValidationError("missing required column: " + col);
    std::vector<std::size_t> idx;
    for (const auto& col : expected)
        idx.push_back(static_cast<std::size_t>(
            std::find(header.begin(), header.end(), col) - header.begin()));

    Corpus corpus;
    corpus.root_dir = std::filesystem::path(path).parent_path().string();
    std::vector<std::string> order;  // first-appearance order of post ids
    std::map<std::string, std::size_t> by_id;

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        rep.rows++;
        if (rec.size() != header.size()) {
            rep.issues.push_back("row " + std::to_string(r) + ": expected " +
                                 std::to_string(header.size()) + " fields, got " +
                                 std::to_string(rec.size()));
            continue;
        }
        auto field = [&](std::size_t k) { return rec[idx[k]]; };
        const std::string post_id = field(0);
        if (post_id.empty()) {
            rep.issues.push_back("row " + std::to_string(r) + ": empty post_id");
            continue;
        }
        auto it = by_id.find(post_id);
        if (it == by_id.end()) {
            Post p;
            p.post_id = post_id;
            p.title = field(1);
            p.body = field(2);
            std::stringstream ip(field(3));
            std::string ref;
            while (std::getline(ip, ref, ';'))
                if (!ref.empty()) p.image_refs.push_back(ref);
            p.post_likes = parse_long_field(field(4), r, "post_likes", rep);
            p.shares = parse_long_field(field(5), r, "shares", rep);
            by_id[post_id] = corpus.posts.size();
            corpus.posts.push_back(std::move(p));
            it = by_id.find(post_id);
        }
        Comment c;
        c.text = field(6);
        c.likes = parse_long_field(field(7), r, "comment_likes", rep);
        c.relevance_rank = static_cast<int>(parse_long_field(field(8), r, "relevance_rank", rep));
        const auto s = parse_sentiment(field(9));
        if (!s) {
            rep.issues.push_back("row " + std::to_string(r) +
                                 ": sentiment_label must be 0, 1 or XX, got '" + field(9) + "'");
            continue;
        }
        c.label = *s;
        corpus.posts[it->second].comments.push_back(std::move(c));
    }
    return corpus;
}

inline void save_corpus_csv(const Corpus& corpus, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write corpus file: " + path);
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) f << (i ? "," : "") << cols[i];
    f << "\n";
    for (const auto& p : corpus.posts) {
        std::string imgs;
        for (std::size_t i = 0; i < p.image_refs.size(); ++i)
            imgs += (i ? ";" : "") + p.image_refs[i];
        for (const auto& c : p.comments) {
            f << csv_escape(p.post_id) << ',' << csv_escape(p.title) << ','
              << csv_escape(p.body) << ',' << csv_escape(imgs) << ',' << p.post_likes << ','
              << p.shares << ',' << csv_escape(c.text) << ',' << c.likes << ','
              << c.relevance_rank << ',' << sentiment_str(c.label) << "\n";
        }
    }
}

// ---------------------------------------------------------------------------
// Preprocessing & validation
// ---------------------------------------------------------------------------

// Normalises all text in place, drops comments that reduce to nothing and
// re-ranks the survivors so relevance ranks stay contiguous.
inline void preprocess_corpus(Corpus& corpus, LoadReport& rep) {
    for (auto& p : corpus.posts) {
        p.title = preprocess_text(p.title);
        p.body = preprocess_text(p.body);
        std::vector<Comment> kept;
        for (auto& c : p.comments) {
            c.text = preprocess_text(c.text);
            if (c.text.empty()) {
                rep.warnings.push_back("post " + p.post_id + ": dropped blank comment");
                continue;
            }
            kept.push_back(std::move(c));
        }
        std::stable_sort(kept.begin(), kept.end(), [](const Comment& a, const Comment& b) {
            return a.relevance_rank < b.relevance_rank;
        });
        for (std::size_t i = 0; i < kept.size(); ++i)
            kept[i].relevance_rank = static_cast<int>(i + 1);
        p.comments = std::move(kept);
    }
}

inline void validate_corpus(const Corpus& corpus, LoadReport& rep) {
    std::set<std::string> seen;
    for (const auto& p : corpus.posts) {
        if (!seen.insert(p.post_id).second)
            rep.issues.push_back("duplicate post_id: " + p.post_id);
        if (p.body.empty())
            rep.issues.push_back("post " + p.post_id + ": body empty after preprocessing");
        if (p.comments.empty())
            rep.issues.push_back("post " + p.post_id + ": no usable comments");
        for (std::size_t i = 0; i < p.comments.size(); ++i)
            if (p.comments[i].relevance_rank != static_cast<int>(i + 1)) {
                rep.issues.push_back("post " + p.post_id + ": relevance ranks not contiguous");
                break;
            }
    }
}

// ---------------------------------------------------------------------------
// Sample assembly
// ---------------------------------------------------------------------------

// Returns nullopt when the post text tokenizes to nothing. Unreadable image
// slots degrade to blanks with a warning.
inline std::optional<Sample> assemble_sample(const Post& post, const Comment& comment,
                                             const Vocabulary& vocab,
                                             const std::string& image_root,
                                             std::size_t max_seq_len,
                                             std::vector<std::string>* warnings = nullptr) {
    if (comment.label == Sentiment::xx)
        throw std::invalid_argument("assemble_sample: XX-labelled comment");
    Sample s;
    s.post_id = post.post_id;
    std::string text = post.title;
    if (!text.empty() && !post.body.empty()) text += ' ';
    text += post.body;
    s.text_tokens = vocab.tokenize(text);
    if (s.text_tokens.empty()) return std::nullopt;
    if (s.text_tokens.size() > max_seq_len) s.text_tokens.resize(max_seq_len);

    for (std::size_t i = 0; i < 3; ++i) {
        if (i < post.image_refs.size()) {
            const auto path =
                (std::filesystem::path(image_root) / post.image_refs[i]).string();
            try {
                s.images[i] = resize(read_ppm(path), 128, 128);
            } catch (const std::exception& e) {
                s.images[i] = blank_image();
                if (warnings)
                    warnings->push_back("post " + post.post_id + ": image slot " +
                                        std::to_string(i) + " blanked (" + e.what() + ")");
            }
        } else {
            s.images[i] = blank_image();
        }
    }

    std::vector<int> tgt = vocab.tokenize(comment.text);
    if (tgt.size() > max_seq_len - 2) tgt.resize(max_seq_len - 2);
    s.target_tokens.push_back(Vocabulary::kBos);
    s.target_tokens.insert(s.target_tokens.end(), tgt.begin(), tgt.end());
    s.target_tokens.push_back(Vocabulary::kEos);
    s.sentiment = comment.label;
    return s;
}

// ---------------------------------------------------------------------------
// Cross-validation folds (split by post so nothing leaks across)
// ---------------------------------------------------------------------------

struct FoldSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

inline std::vector<FoldSplit> split_folds(std::size_t n_posts, std::size_t n_folds,
                                          std::uint64_t seed) {
    if (n_folds < 2) throw std::invalid_argument("split_folds: need at least 2 folds");
    if (n_folds > n_posts) throw std::invalid_argument("split_folds: more folds than posts");
    std::vector<std::size_t> order(n_posts);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const std::size_t base = n_posts / n_folds;
    const std::size_t extra = n_posts % n_folds;  // first `extra` folds get one more
    std::vector<FoldSplit> folds(n_folds);
    std::size_t at = 0;
    for (std::size_t f = 0; f < n_folds; ++f) {
        const std::size_t sz = base + (f < extra ? 1 : 0);
        folds[f].test.assign(order.begin() + static_cast<std::ptrdiff_t>(at),
                             order.begin() + static_cast<std::ptrdiff_t>(at + sz));
        at += sz;
    }
    for (std::size_t f = 0; f < n_folds; ++f) {
        std::set<std::size_t> test_set(folds[f].test.begin(), folds[f].test.end());
        for (std::size_t i = 0; i < n_posts; ++i)
            if (!test_set.count(i)) folds[f].train.push_back(i);
        std::sort(folds[f].test.begin(), folds[f].test.end());
    }
    return folds;
}

inline std::vector<FoldSplit> split_folds(const Corpus& corpus, std::size_t n_folds,
                                          std::uint64_t seed) {
    return split_folds(corpus.posts.size(), n_folds, seed);
}

}  // namespace feedsynth
