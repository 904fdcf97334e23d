#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "footgpt/errors.hpp"
#include "footgpt/families.hpp"
#include "footgpt/tables.hpp"
#include "footgpt/util.hpp"

namespace footgpt {

// Whitespace token count scaled by a 1.3 safety factor against subword
// inflation, rounded up.
inline int approx_token_count(const std::string& text) {
    return static_cast<int>(
        std::ceil(static_cast<double>(whitespace_token_count(text)) * 1.3));
}

struct CorpusChunk {
    std::string text;  // datapoints joined by newlines, none split
    int approx_tokens = 0;
    int seq_no = 0;
};

// Phrasing slot for one rendered pair. Depends only on family, params and the
// variant index through a fixed salt, so the corpus content is identical
// across shuffle seeds.
inline int variant_slot(const QueryParams& q, int variant_index) {
    const int slots = variant_count(q);
    if (slots <= 1) return 0;
    std::uint64_t h = fnv1a64(family_key(q.family));
    h = fnv1a64(params_signature(to_params(q)), h);
    h = fnv1a64("#" + std::to_string(variant_index), h);
    return static_cast<int>(h % static_cast<std::uint64_t>(slots));
}

inline std::vector<QAPair> render_family(const Tables& tables,
                                         const CurationConfig& cfg,
                                         Family family) {
    std::vector<QAPair> out;
    const auto combos = enumerate_family(tables, cfg, family);
    for (const auto& q : combos) {
        const int variants =
            std::min(variant_count(q), std::max(1, cfg.variants_per_template));
        for (int i = 0; i < variants; ++i) {
            out.push_back(render_pair(tables, cfg, q, variant_slot(q, i)));
        }
    }
    return out;
}

struct Corpus {
    std::vector<CorpusChunk> chunks;
    std::vector<std::string> datapoints;  // post-dedup, enumeration order
    std::map<std::string, std::int64_t> per_family_counts;  // after dedup
    std::int64_t dedup_count = 0;
    std::int64_t total_datapoints = 0;
    std::uint64_t seed = 0;
    std::string config_hash;
};

inline std::string config_hash_of(const CurationConfig& cfg) {
    std::string blob = std::to_string(cfg.max_tokens) + "|" +
                       std::to_string(cfg.variants_per_template) + "|" +
                       cfg.league_name + "|" + cfg.season_label + "|";
    for (const auto& fam : cfg.families_enabled) blob += fam + ",";
    return hex64(fnv1a64(blob));
}

// Renders every enabled family, merges the teacher material, removes exact
// duplicates, shuffles with the config seed and packs greedily into chunks.
inline Corpus build_corpus(const Tables& tables, const CurationConfig& cfg,
                           const std::vector<QAPair>& teacher_pairs = {},
                           const std::vector<std::string>& teacher_paragraphs = {}) {
    struct Datapoint {
        std::string text;
        std::string family;
    };
    std::vector<Datapoint> points;
    for (Family f : all_families()) {
        if (!cfg.families_enabled.count(std::string(family_key(f)))) continue;
        for (const auto& pair : render_family(tables, cfg, f)) {
            points.push_back({pair.line(), std::string(family_key(f))});
        }
    }
    for (const auto& pair : teacher_pairs) {
        points.push_back({pair.line(), "teacher_qa"});
    }
    for (const auto& text : teacher_paragraphs) {
        points.push_back({text, "teacher_paragraph"});
    }

    Corpus corpus;
    corpus.seed = cfg.seed;
    corpus.config_hash = config_hash_of(cfg);

    std::vector<Datapoint> unique;
    std::unordered_set<std::string> seen;
    for (auto& p : points) {
        if (!seen.insert(p.text).second) {
            ++corpus.dedup_count;
            continue;
        }
        unique.push_back(std::move(p));
    }
    for (const auto& p : unique) ++corpus.per_family_counts[p.family];
    for (const auto& p : unique) corpus.datapoints.push_back(p.text);
    corpus.total_datapoints = static_cast<std::int64_t>(unique.size());

    SplitMix64 rng(cfg.seed);
    rng.shuffle(unique);

    CorpusChunk current;
    auto flush = [&] {
        if (current.text.empty()) return;
        current.seq_no = static_cast<int>(corpus.chunks.size());
        corpus.chunks.push_back(std::move(current));
        current = CorpusChunk{};
    };
    for (const auto& p : unique) {
        if (approx_token_count(p.text) > cfg.max_tokens) {
            throw ConfigError("datapoint of ~" +
                              std::to_string(approx_token_count(p.text)) +
                              " tokens exceeds max_tokens " +
                              std::to_string(cfg.max_tokens));
        }
        const std::string candidate =
            current.text.empty() ? p.text : current.text + "\n" + p.text;
        const int tokens = approx_token_count(candidate);
        if (tokens > cfg.max_tokens) {
            flush();
            current.text = p.text;
            current.approx_tokens = approx_token_count(p.text);
        } else {
            current.text = candidate;
            current.approx_tokens = tokens;
        }
    }
    flush();
    return corpus;
}

inline std::int64_t emit_jsonl(const std::vector<CorpusChunk>& chunks,
                               const std::string& path) {
    std::string out;
    for (const auto& chunk : chunks) {
        nlohmann::ordered_json line;
        line["text"] = chunk.text;
        line["seq"] = chunk.seq_no;
        out += line.dump();
        out += '\n';
    }
    write_file(path, out);
    return static_cast<std::int64_t>(chunks.size());
}

inline void emit_manifest(const Corpus& corpus, const std::string& path) {
    nlohmann::ordered_json m;
    m["seed"] = corpus.seed;
    m["config_hash"] = corpus.config_hash;
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (const auto& [family, n] : corpus.per_family_counts) counts[family] = n;
    m["per_family_counts"] = counts;
    m["dedup_count"] = corpus.dedup_count;
    m["total_datapoints"] = corpus.total_datapoints;
    write_file(path, m.dump(2) + "\n");
}

}  // namespace footgpt
