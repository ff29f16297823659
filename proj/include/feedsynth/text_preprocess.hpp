#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace feedsynth {

// Bundled replacement tables. Kept in-source so a corpus preprocessed today
// reproduces bit-identically later; extend them here, not at runtime.
namespace tables {

inline const std::vector<std::pair<std::string, std::string>>& emoticons() {
    static const std::vector<std::pair<std::string, std::string>> t = {
        {":-)", " smile "}, {":)", " smile "},  {":-D", " laugh "}, {":D", " laugh "},
        {"xD", " laugh "},  {"XD", " laugh "},  {":-(", " sad "},   {":(", " sad "},
        {":'(", " cry "},   {";-)", " wink "},  {";)", " wink "},   {":-P", " playful "},
        {":P", " playful "},{"<3", " love "},
        {"\xF0\x9F\x98\x80", " smile "},  // grinning face
        {"\xF0\x9F\x98\x83", " smile "},
        {"\xF0\x9F\x98\x84", " smile "},
        {"\xF0\x9F\x99\x82", " smile "},
        {"\xF0\x9F\x98\x8D", " love "},   // heart eyes
        {"\xF0\x9F\x98\xA2", " cry "},
        {"\xF0\x9F\x98\xAD", " cry "},
        {"\xF0\x9F\x98\xA1", " angry "},
        {"\xE2\x9D\xA4", " love "},       // red heart
        {"\xF0\x9F\x91\x8D", " good "},   // thumbs up
        {"\xF0\x9F\x91\x8E", " bad "},    // thumbs down
    };
    return t;
}

inline const std::unordered_map<std::string, std::string>& contractions() {
    // Keys are the apostrophe-less forms; the preprocessing pipeline deletes
    // apostrophes before this stage so "don't" arrives as "dont".
    static const std::unordered_map<std::string, std::string> t = {
        {"dont", "do not"},       {"cant", "can not"},     {"wont", "will not"},
        {"isnt", "is not"},       {"arent", "are not"},    {"wasnt", "was not"},
        {"werent", "were not"},   {"doesnt", "does not"},  {"didnt", "did not"},
        {"couldnt", "could not"}, {"shouldnt", "should not"}, {"wouldnt", "would not"},
        {"havent", "have not"},   {"hasnt", "has not"},    {"hadnt", "had not"},
        {"im", "i am"},           {"ive", "i have"},
        {"youre", "you are"},     {"youve", "you have"},
        {"youll", "you will"},    {"weve", "we have"},
        {"theyre", "they are"},   {"theyve", "they have"}, {"theyll", "they will"},
        {"its", "it is"},         {"hes", "he is"},        {"shes", "she is"},
        {"thats", "that is"},     {"whats", "what is"},    {"whos", "who is"},
        {"theres", "there is"},   {"heres", "here is"},    {"lets", "let us"},
        {"aint", "is not"},       {"gonna", "going to"},   {"wanna", "want to"},
    };
    return t;
}

inline const std::unordered_set<std::string>& stop_words() {
    static const std::unordered_set<std::string> t = {
        "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
        "any", "are", "as", "at", "be", "because", "been", "before", "being", "below",
        "between", "both", "but", "by", "can", "could", "did", "do", "does", "doing",
        "down", "during", "each", "few", "for", "from", "further", "going", "had",
        "has", "have", "having", "he", "her", "here", "hers", "herself", "him",
        "himself", "his", "how", "i", "if", "in", "into", "is", "it", "itself",
        "just", "let", "me", "more", "most", "my", "myself", "no", "nor", "not",
        "now", "of", "off", "on", "once", "only", "or", "other", "our", "ours",
        "ourselves", "out", "over", "own", "same", "she", "should", "so", "some",
        "such", "than", "that", "the", "their", "theirs", "them", "themselves",
        "then", "there", "these", "they", "this", "those", "through", "to", "too",
        "under", "until", "up", "us", "very", "was", "we", "what", "when", "where",
        "which", "while", "who", "whom", "why", "will", "with", "would", "you",
        "your", "yours", "yourself", "yourselves",
    };
    return t;
}

// UTF-8 accented character -> ASCII fold.
inline const std::vector<std::pair<std::string, std::string>>& accent_folds() {
    static const std::vector<std::pair<std::string, std::string>> t = {
        {"\xC3\xA0", "a"}, {"\xC3\xA1", "a"}, {"\xC3\xA2", "a"}, {"\xC3\xA3", "a"},
        {"\xC3\xA4", "a"}, {"\xC3\xA5", "a"}, {"\xC3\xA7", "c"}, {"\xC3\xA8", "e"},
        {"\xC3\xA9", "e"}, {"\xC3\xAA", "e"}, {"\xC3\xAB", "e"}, {"\xC3\xAC", "i"},
        {"\xC3\xAD", "i"}, {"\xC3\xAE", "i"}, {"\xC3\xAF", "i"}, {"\xC3\xB1", "n"},
        {"\xC3\xB2", "o"}, {"\xC3\xB3", "o"}, {"\xC3\xB4", "o"}, {"\xC3\xB5", "o"},
        {"\xC3\xB6", "o"}, {"\xC3\xB9", "u"}, {"\xC3\xBA", "u"}, {"\xC3\xBB", "u"},
        {"\xC3\xBC", "u"}, {"\xC3\xBD", "y"},
        {"\xC3\x80", "a"}, {"\xC3\x81", "a"}, {"\xC3\x82", "a"}, {"\xC3\x84", "a"},
        {"\xC3\x87", "c"}, {"\xC3\x88", "e"}, {"\xC3\x89", "e"}, {"\xC3\x8A", "e"},
        {"\xC3\x91", "n"}, {"\xC3\x93", "o"}, {"\xC3\x96", "o"}, {"\xC3\x9C", "u"},
        {"\xE2\x80\x99", ""},  // right single quote acts as an apostrophe
    };
    return t;
}

}  // namespace tables

inline std::vector<std::string> split_whitespace(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

inline std::string join_tokens(const std::vector<std::string>& toks) {
    std::string out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i) out += ' ';
        out += toks[i];
    }
    return out;
}

// Fixed normalisation pipeline, applied in order:
//   emoticons -> lowercase -> accent fold (other non-ASCII dropped)
//   -> apostrophes deleted, other punctuation/digits blanked
//   -> contraction expansion -> stop-word removal.
// Idempotent: every output token is lowercase ASCII letters, not a stop word
// and not a contraction key.
inline std::string preprocess_text(const std::string& raw) {
    std::string s = raw;

    for (const auto& [pat, rep] : tables::emoticons()) {
        std::size_t pos = 0;
        while ((pos = s.find(pat, pos)) != std::string::npos) {
            s.replace(pos, pat.size(), rep);
            pos += rep.size();
        }
    }

    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');

    for (const auto& [pat, rep] : tables::accent_folds()) {
        std::size_t pos = 0;
        while ((pos = s.find(pat, pos)) != std::string::npos) {
            s.replace(pos, pat.size(), rep);
            pos += rep.size();
        }
    }

    std::string cleaned;
    cleaned.reserve(s.size());
    for (unsigned char c : s) {
        if (c >= 0x80) continue;  // unhandled non-ASCII is dropped
        if (c == '\'') continue;  // delete apostrophes so contractions fuse
        if (std::isalpha(c))
            cleaned += static_cast<char>(c);
        else
            cleaned += ' ';
    }

    std::vector<std::string> out;
    for (const auto& tok : split_whitespace(cleaned)) {
        const auto& ctr = tables::contractions();
        auto it = ctr.find(tok);
        const std::vector<std::string> expanded =
            (it != ctr.end()) ? split_whitespace(it->second) : std::vector<std::string>{tok};
        for (const auto& w : expanded)
            if (!tables::stop_words().count(w)) out.push_back(w);
    }
    return join_tokens(out);
}

}  // namespace feedsynth
