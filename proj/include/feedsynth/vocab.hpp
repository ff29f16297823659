#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "feedsynth/text_preprocess.hpp"

namespace feedsynth {

// Word-level vocabulary with fixed reserved slots.
class Vocabulary {
public:
    static constexpr int kPad = 0;
    static constexpr int kBos = 1;
    static constexpr int kEos = 2;
    static constexpr int kUnk = 3;
    static constexpr int kReserved = 4;

    Vocabulary() {
        id_to_token_ = {"<pad>", "<bos>", "<eos>", "<unk>"};
        for (int i = 0; i < kReserved; ++i) token_to_id_[id_to_token_[static_cast<std::size_t>(i)]] = i;
    }

    // Most frequent tokens first; ties broken alphabetically so builds are
    // reproducible across runs.
    static Vocabulary build(const std::vector<std::string>& texts, std::size_t max_size) {
        if (max_size <= kReserved) throw std::invalid_argument("vocabulary size too small");
        std::map<std::string, std::size_t> counts;
        for (const auto& t : texts)
            for (const auto& tok : split_whitespace(t)) ++counts[tok];
        std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        Vocabulary v;
        for (const auto& [tok, cnt] : ranked) {
            if (v.size() >= max_size) break;
            v.add(tok);
        }
        return v;
    }

    int add(const std::string& token) {
        auto it = token_to_id_.find(token);
        if (it != token_to_id_.end()) return it->second;
        const int id = static_cast<int>(id_to_token_.size());
        id_to_token_.push_back(token);
        token_to_id_[token] = id;
        return id;
    }

    int lookup(const std::string& token) const {
        auto it = token_to_id_.find(token);
        return it == token_to_id_.end() ? kUnk : it->second;
    }

    const std::string& token(int id) const {
        if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size())
            throw std::out_of_range("vocabulary id out of range");
        return id_to_token_[static_cast<std::size_t>(id)];
    }

    std::size_t size() const { return id_to_token_.size(); }

    std::vector<int> tokenize(const std::string& text) const {
        std::vector<int> ids;
        for (const auto& tok : split_whitespace(text)) ids.push_back(lookup(tok));
        return ids;
    }

    // Reserved ids other than <unk> are skipped on the way out.
    std::string detokenize(const std::vector<int>& ids) const {
        std::vector<std::string> toks;
        for (int id : ids) {
            if (id == kPad || id == kBos || id == kEos) continue;
            toks.push_back(token(id));
        }
        return join_tokens(toks);
    }

    const std::vector<std::string>& tokens() const { return id_to_token_; }

private:
    std::vector<std::string> id_to_token_;
    std::unordered_map<std::string, int> token_to_id_;
};

}  // namespace feedsynth
