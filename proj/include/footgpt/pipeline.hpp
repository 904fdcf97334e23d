#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "footgpt/curate.hpp"
#include "footgpt/distill.hpp"
#include "footgpt/errors.hpp"
#include "footgpt/ingest.hpp"
#include "footgpt/tables.hpp"
#include "footgpt/util.hpp"

namespace footgpt {

struct RunConfig {
    std::string matches_path;
    std::string events_path;
    std::string teams_path;
    std::string players_path;
    std::string mapping_path;  // optional canonical-to-actual field names
    std::string output_dir = "out";
    ParseOptions parse;
    CurationConfig curation;
    TeacherConfig teacher;
    bool distill_enabled = true;
};

namespace detail {

// Reruns a stage body, stamping the stage name into the message while keeping
// the error's concrete type so exit-code mapping still sees it.
template <class Fn>
auto run_stage(const std::string& name, Fn&& fn) {
    const auto tag = [&](const std::exception& e) {
        return "stage '" + name + "': " + e.what();
    };
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError(tag(e));
    } catch (const ParseError& e) {
        throw ParseError(tag(e), e.byte_offset());
    } catch (const IntegrityError& e) {
        throw IntegrityError(tag(e));
    } catch (const EmptyDatasetError& e) {
        throw EmptyDatasetError(tag(e));
    } catch (const TransportError& e) {
        throw TransportError(tag(e));
    } catch (const IoError& e) {
        throw IoError(tag(e));
    } catch (const Error& e) {
        throw Error(tag(e));
    }
}

inline void check_input_path(const std::string& label, const std::string& path) {
    if (path.empty()) throw ConfigError(label + " path not set");
    if (!std::filesystem::exists(path)) {
        throw ConfigError(label + " file not found: " + path);
    }
}

}  // namespace detail

inline KeyMap keymap_from_json(const nlohmann::json& obj) {
    KeyMap m;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!it.value().is_string()) {
            throw ConfigError("field mapping values must be strings");
        }
        m[it.key()] = it.value().get<std::string>();
    }
    return m;
}

inline FieldMapping load_field_mapping(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("field mapping " + path + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("field mapping " + path + ": top level must be an object");
    }
    FieldMapping mapping;
    for (const auto& [key, target] :
         std::initializer_list<std::pair<const char*, KeyMap*>>{
             {"matches", &mapping.matches},
             {"events", &mapping.events},
             {"teams", &mapping.teams},
             {"players", &mapping.players}}) {
        if (doc.contains(key)) *target = keymap_from_json(doc.at(key));
    }
    return mapping;
}

// Runs ingest, table building, optional distillation and corpus curation,
// writing all products under output_dir plus a run manifest hashing each one.
// The teacher cache is working state, not a product, so it stays out of the
// manifest and two identical runs produce identical manifests.
inline nlohmann::ordered_json run_pipeline(RunConfig config) {
    namespace fs = std::filesystem;
    std::vector<std::pair<std::string, std::string>> emitted;  // path, content

    const RawDataset dataset = detail::run_stage("ingest", [&] {
        detail::check_input_path("matches", config.matches_path);
        detail::check_input_path("events", config.events_path);
        detail::check_input_path("teams", config.teams_path);
        detail::check_input_path("players", config.players_path);
        if (!config.mapping_path.empty()) {
            config.parse.mapping = load_field_mapping(config.mapping_path);
        }
        return parse_dataset(read_file(config.matches_path),
                             read_file(config.events_path),
                             read_file(config.teams_path),
                             read_file(config.players_path), config.parse);
    });

    const Tables tables =
        detail::run_stage("tables", [&] { return build_tables(dataset); });
    detail::run_stage("tables", [&] {
        const std::string dir = config.output_dir + "/tables";
        fs::create_directories(dir);
        export_tables_csv(tables, dir);
        for (const char* name : {"teams_info.csv", "players_info.csv",
                                 "team_week.csv", "player_week.csv",
                                 "events.csv"}) {
            const std::string path = dir + "/" + name;
            emitted.push_back({path, read_file(path)});
        }
        return 0;
    });

    DistillResult distilled;
    if (config.distill_enabled) {
        distilled = detail::run_stage("distill", [&] {
            if (config.teacher.cache_dir.empty()) {
                config.teacher.cache_dir = config.output_dir + "/teacher_cache";
            }
            return run_distill(tables, config.curation, config.teacher);
        });
        if (distilled.transport_failures > 0) {
            throw TransportError(
                "stage 'distill': " +
                std::to_string(distilled.transport_failures) +
                " teacher calls failed after retries");
        }
        detail::run_stage("distill", [&] {
            nlohmann::ordered_json summary;
            summary["prompts"] = distilled.responses.size();
            summary["pairs"] = distilled.pairs.size();
            summary["paragraphs"] = distilled.paragraphs.size();
            summary["parse_failures"] = distilled.parse_failures;
            const std::string path = config.output_dir + "/distill_summary.json";
            const std::string content = summary.dump(2) + "\n";
            write_file(path, content);
            emitted.push_back({path, content});
            return 0;
        });
    }

    const Corpus corpus = detail::run_stage("curate", [&] {
        return build_corpus(tables, config.curation, distilled.pairs,
                            distilled.paragraphs);
    });
    detail::run_stage("curate", [&] {
        const std::string corpus_path = config.output_dir + "/corpus.jsonl";
        emit_jsonl(corpus.chunks, corpus_path);
        emitted.push_back({corpus_path, read_file(corpus_path)});
        const std::string manifest_path =
            config.output_dir + "/corpus_manifest.json";
        emit_manifest(corpus, manifest_path);
        emitted.push_back({manifest_path, read_file(manifest_path)});
        return 0;
    });

    nlohmann::ordered_json manifest;
    manifest["seed"] = config.curation.seed;
    manifest["league"] = config.parse.league;
    manifest["config_hash"] = config_hash_of(config.curation);
    manifest["counts"] = {
        {"matches", dataset.matches.size()},
        {"events", dataset.events.size()},
        {"teams", dataset.teams.size()},
        {"players", dataset.players.size()},
        {"dropped_events", dataset.discard.dropped_events_total()},
        {"corpus_chunks", corpus.chunks.size()},
        {"corpus_datapoints", corpus.total_datapoints},
    };
    nlohmann::ordered_json files = nlohmann::json::array();
    for (const auto& [path, content] : emitted) {
        files.push_back({{"path", fs::relative(path, config.output_dir).string()},
                         {"bytes", content.size()},
                         {"fnv64", hex64(fnv1a64(content))}});
    }
    manifest["files"] = files;
    const std::string manifest_text = manifest.dump(2) + "\n";
    write_file(config.output_dir + "/run_manifest.json", manifest_text);
    return manifest;
}

}  // namespace footgpt
