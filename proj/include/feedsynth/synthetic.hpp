#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "feedsynth/corpus.hpp"
#include "feedsynth/image.hpp"

namespace feedsynth {

// Word pools for the generator. The sentiment blocks are split per built-in
// scorer variant so an ensemble over the four disjoint lexicons can actually
// recover the generated labels.
namespace synthwords {

inline const std::vector<std::vector<std::string>>& positive_blocks() {
    static const std::vector<std::vector<std::string>> b = {
        {"great", "wonderful", "excellent"},
        {"amazing", "love", "fantastic"},
        {"happy", "delightful", "superb"},
        {"brilliant", "joyful", "good"},
    };
    return b;
}

inline const std::vector<std::vector<std::string>>& negative_blocks() {
    static const std::vector<std::vector<std::string>> b = {
        {"terrible", "awful", "horrible"},
        {"hate", "dreadful", "nasty"},
        {"sad", "miserable", "gloomy"},
        {"angry", "worst", "bad"},
    };
    return b;
}

inline const std::vector<std::string>& neutral() {
    static const std::vector<std::string> w = {
        "news",   "report", "today",  "city",   "people", "weather", "market", "event",
        "story",  "update", "area",   "team",   "plan",   "road",    "water",  "school",
        "game",   "music",  "travel", "garden", "bridge", "harbor",  "season", "council",
    };
    return w;
}

}  // namespace synthwords

struct SyntheticCorpus {
    Corpus corpus;
    // image ref -> pixels; written next to the CSV on persist
    std::map<std::string, Image> images;
};

// Deterministic CMFeed-shaped corpus. Each post gets a dominant sentiment;
// comment labels lean toward it (p=0.6) and draw words from the matching
// block, images are patterns tinted by the dominant sentiment, bodies stay
// neutral. Image counts run 0..5 so slot padding gets exercised.
inline SyntheticCorpus generate_synthetic_corpus(std::uint64_t seed, std::size_t n_posts) {
    if (n_posts < 1) throw std::invalid_argument("generate_synthetic_corpus: n_posts >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> n_images_dist(0, 5);
    std::uniform_int_distribution<int> n_comments_dist(2, 6);
    std::uniform_int_distribution<int> body_len_dist(8, 16);
    std::uniform_int_distribution<int> title_len_dist(2, 4);
    std::uniform_int_distribution<long> likes_dist(0, 5000);
    std::uniform_int_distribution<long> clikes_dist(0, 400);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const auto& neutral = synthwords::neutral();
    auto pick = [&rng](const std::vector<std::string>& pool) -> const std::string& {
        std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
        return pool[d(rng)];
    };

    SyntheticCorpus out;
    for (std::size_t i = 0; i < n_posts; ++i) {
        Post p;
        char idbuf[32];
        std::snprintf(idbuf, sizeof(idbuf), "post_%05zu", i);
        p.post_id = idbuf;

        const int theta = coin(rng);  // dominant sentiment of the post

        const int title_len = title_len_dist(rng);
        std::vector<std::string> title_words;
        for (int w = 0; w < title_len; ++w) title_words.push_back(pick(neutral));
        p.title = join_tokens(title_words);

        const int body_len = body_len_dist(rng);
        std::vector<std::string> body_words;
        for (int w = 0; w < body_len; ++w) body_words.push_back(pick(neutral));
        p.body = join_tokens(body_words);

        p.post_likes = likes_dist(rng);
        p.shares = likes_dist(rng) / 10;

        const int n_img = n_images_dist(rng);
        for (int k = 0; k < n_img; ++k) {
            const std::string ref =
                "img/" + p.post_id + "_" + std::to_string(k) + ".ppm";
            out.images[ref] = synth_pattern(rng(), theta);
            p.image_refs.push_back(ref);
        }

        const int n_com = n_comments_dist(rng);
        std::vector<long> likes;
        for (int k = 0; k < n_com; ++k) likes.push_back(clikes_dist(rng));
        std::sort(likes.rbegin(), likes.rend());  // most relevant first

        for (int k = 0; k < n_com; ++k) {
            Comment c;
            const int label = unit(rng) < 0.6 ? theta : 1 - theta;
            const auto& blocks = label == 1 ? synthwords::positive_blocks()
                                            : synthwords::negative_blocks();
            std::vector<std::string> words;
            for (const auto& blk : blocks) words.push_back(pick(blk));  // one per variant
            std::uniform_int_distribution<int> extra_dist(0, 3);
            const int extra = extra_dist(rng);
            for (int e = 0; e < extra; ++e) {
                std::uniform_int_distribution<std::size_t> bd(0, blocks.size() - 1);
                words.push_back(pick(blocks[bd(rng)]));
            }
            std::uniform_int_distribution<int> neu_dist(0, 2);
            const int neu = neu_dist(rng);
            for (int e = 0; e < neu; ++e) words.push_back(pick(neutral));
            std::shuffle(words.begin(), words.end(), rng);
            c.text = join_tokens(words);
            c.likes = likes[static_cast<std::size_t>(k)];
            c.relevance_rank = k + 1;
            c.label = label == 1 ? Sentiment::positive : Sentiment::negative;
            p.comments.push_back(std::move(c));
        }
        out.corpus.posts.push_back(std::move(p));
    }
    return out;
}

// Persists CSV plus images under out_dir; returns the CSV path.
inline std::string write_synthetic_corpus(const SyntheticCorpus& sc, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "img");
    for (const auto& [ref, img] : sc.images)
        write_ppm(img, (fs::path(out_dir) / ref).string());
    const std::string csv = (fs::path(out_dir) / "corpus.csv").string();
    save_corpus_csv(sc.corpus, csv);
    return csv;
}

}  // namespace feedsynth
