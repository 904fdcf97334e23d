#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "footgpt/curate.hpp"
#include "footgpt/distill.hpp"
#include "footgpt/distill_http.hpp"
#include "footgpt/errors.hpp"
#include "footgpt/families.hpp"
#include "footgpt/fixture.hpp"
#include "footgpt/ingest.hpp"
#include "footgpt/lora.hpp"
#include "footgpt/oracle.hpp"
#include "footgpt/pipeline.hpp"
#include "footgpt/stats.hpp"
#include "footgpt/tables.hpp"

namespace {

using namespace footgpt;
using nlohmann::ordered_json;

struct DataFlags {
    std::string data_dir;
    std::string mapping;
    std::string league = "Italy";
    int gw_min = 1;
    int gw_max = 10;
};

void add_data_flags(CLI::App* sub, DataFlags& flags) {
    sub->add_option("--data", flags.data_dir,
                    "Directory with matches.json, events.json, teams.json, players.json")
        ->required();
    sub->add_option("--mapping", flags.mapping, "Field-mapping JSON file");
    sub->add_option("--league", flags.league, "Competition to keep");
    sub->add_option("--gw-min", flags.gw_min, "First gameweek kept");
    sub->add_option("--gw-max", flags.gw_max, "Last gameweek kept");
}

RawDataset load_dataset(const DataFlags& flags) {
    ParseOptions options;
    options.league = flags.league;
    options.gameweek_min = flags.gw_min;
    options.gameweek_max = flags.gw_max;
    if (!flags.mapping.empty()) {
        options.mapping = load_field_mapping(flags.mapping);
    }
    const std::string d = flags.data_dir;
    return parse_dataset(read_file(d + "/matches.json"), read_file(d + "/events.json"),
                         read_file(d + "/teams.json"), read_file(d + "/players.json"),
                         options);
}

Tables load_tables(const DataFlags& flags) { return build_tables(load_dataset(flags)); }

Id resolve_team(const Tables& tables, const std::string& spec) {
    if (!spec.empty() && spec.find_first_not_of("0123456789") == std::string::npos) {
        const Id id = std::stoll(spec);
        tables.team(id);  // throws NotFoundError for unknown ids
        return id;
    }
    std::vector<Id> partial;
    for (const auto& team : tables.teams_info) {
        if (normalize_text(team.name) == normalize_text(spec)) return team.team_id;
        if (contains_ci(team.name, spec)) partial.push_back(team.team_id);
    }
    if (partial.size() == 1) return partial.front();
    if (partial.size() > 1) {
        std::vector<std::string> names;
        for (Id id : partial) names.push_back(tables.team_name(id));
        throw AmbiguityError("team '" + spec + "' matches several teams", names);
    }
    throw NotFoundError("no team matches '" + spec + "'");
}

EventType resolve_event(const std::string& name) {
    if (auto et = event_type_from_string(name)) return *et;
    std::string valid;
    for (const auto& n : event_type_names()) {
        if (!valid.empty()) valid += ", ";
        valid += n;
    }
    throw DomainError("unknown event type '" + name + "' (valid: " + valid + ")");
}

ordered_json standings_json(const Tables& tables, const std::vector<StandingsRow>& rows) {
    ordered_json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"rank", r.rank},
                       {"team", tables.team_name(r.team_id)},
                       {"points", r.points_cum},
                       {"goals", r.goals_cum}});
    }
    return arr;
}

void print_standings_text(const Tables& tables, const std::vector<StandingsRow>& rows) {
    std::printf("%4s  %-28s %6s %6s\n", "rank", "team", "points", "goals");
    for (const auto& r : rows) {
        std::printf("%4d  %-28s %6lld %6lld\n", r.rank,
                    tables.team_name(r.team_id).c_str(), r.points_cum, r.goals_cum);
    }
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
        dynamic_cast<const NotFoundError*>(&e) ||
        dynamic_cast<const UnsupportedQuestionError*>(&e) ||
        dynamic_cast<const AmbiguityError*>(&e)) {
        return 2;
    }
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const IntegrityError*>(&e) ||
        dynamic_cast<const EmptyDatasetError*>(&e)) {
        return 3;
    }
    if (dynamic_cast<const TransportError*>(&e)) return 4;
    return 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Soccer event pipeline: ingest, tables, stats, teacher distillation, corpus curation, grading, adapter math"};
    app.require_subcommand(1);
    bool json_out = false;
    app.add_flag("--json", json_out, "Machine-readable output");

    try {
        // fixture
        auto* fixture_cmd = app.add_subcommand("fixture", "Generate a synthetic league");
        int fx_teams = 20, fx_gameweeks = 10;
        std::uint64_t fx_seed = 1;
        double fx_scale = 1.0;
        std::string fx_out;
        fixture_cmd->add_option("--teams", fx_teams, "Even team count");
        fixture_cmd->add_option("--gameweeks", fx_gameweeks, "Gameweek count");
        fixture_cmd->add_option("--seed", fx_seed, "Generator seed");
        fixture_cmd->add_option("--event-scale", fx_scale, "Event volume multiplier");
        fixture_cmd->add_option("--out", fx_out, "Output directory")->required();
        fixture_cmd->callback([&] {
            FixtureOptions options;
            options.event_scale = fx_scale;
            const auto files = fixture_gen(fx_teams, fx_gameweeks, fx_seed, options);
            write_fixture(files, fx_out);
            if (json_out) {
                ordered_json out{{"teams", fx_teams},
                                 {"gameweeks", fx_gameweeks},
                                 {"seed", fx_seed},
                                 {"dir", fx_out}};
                std::cout << out.dump() << "\n";
            } else {
                std::cout << "wrote synthetic league (" << fx_teams << " teams, "
                          << fx_gameweeks << " gameweeks) to " << fx_out << "\n";
            }
        });

        // ingest
        auto* ingest_cmd = app.add_subcommand("ingest", "Parse and validate raw feeds");
        DataFlags ingest_flags;
        add_data_flags(ingest_cmd, ingest_flags);
        ingest_cmd->callback([&] {
            const auto dataset = load_dataset(ingest_flags);
            const auto& d = dataset.discard;
            if (json_out) {
                ordered_json out;
                out["matches"] = dataset.matches.size();
                out["events"] = dataset.events.size();
                out["teams"] = dataset.teams.size();
                out["players"] = dataset.players.size();
                out["max_gameweek"] = dataset.max_gameweek();
                out["discarded"] = {{"type_excluded", d.type_excluded},
                                    {"coordinates_missing", d.coordinates_missing},
                                    {"gameweek_filtered_matches", d.gameweek_filtered_matches},
                                    {"gameweek_filtered_events", d.gameweek_filtered_events},
                                    {"league_filtered_matches", d.league_filtered_matches},
                                    {"league_filtered_events", d.league_filtered_events}};
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << "kept " << dataset.matches.size() << " matches, "
                          << dataset.events.size() << " events, "
                          << dataset.teams.size() << " teams, "
                          << dataset.players.size() << " players\n"
                          << "discarded events: " << d.dropped_events_total()
                          << " (type " << d.type_excluded << ", coordinates "
                          << d.coordinates_missing << ", gameweek "
                          << d.gameweek_filtered_events << ", league "
                          << d.league_filtered_events << ")\n";
            }
        });

        // tables
        auto* tables_cmd = app.add_subcommand("tables", "Build and export intermediate tables");
        DataFlags tables_flags;
        std::string tables_out;
        add_data_flags(tables_cmd, tables_flags);
        tables_cmd->add_option("--out", tables_out, "CSV output directory")->required();
        tables_cmd->callback([&] {
            const auto tables = load_tables(tables_flags);
            std::filesystem::create_directories(tables_out);
            export_tables_csv(tables, tables_out);
            ordered_json out{{"team_week_rows", tables.team_week.size()},
                             {"player_week_rows", tables.player_week.size()},
                             {"event_rows", tables.events.size()},
                             {"dir", tables_out}};
            if (json_out) {
                std::cout << out.dump() << "\n";
            } else {
                std::cout << "wrote " << tables.team_week.size() << " team-week rows, "
                          << tables.player_week.size() << " player-week rows, "
                          << tables.events.size() << " event rows to " << tables_out
                          << "\n";
            }
        });

        // stats
        auto* stats_cmd = app.add_subcommand("stats", "Query standings and aggregates");
        stats_cmd->require_subcommand(1);
        DataFlags stats_flags;
        add_data_flags(stats_cmd, stats_flags);

        auto* standings_cmd = stats_cmd->add_subcommand("standings", "League table at a gameweek");
        int st_gw = 1;
        standings_cmd->add_option("--gameweek", st_gw)->required();
        standings_cmd->callback([&] {
            const auto tables = load_tables(stats_flags);
            const auto rows = standings(tables, st_gw);
            if (json_out) {
                std::cout << standings_json(tables, rows).dump(2) << "\n";
            } else {
                print_standings_text(tables, rows);
            }
        });

        auto* prog_cmd = stats_cmd->add_subcommand("progression", "Rank movement between two gameweeks");
        std::string prog_team;
        int prog_start = 1, prog_end = 2;
        prog_cmd->add_option("--team", prog_team)->required();
        prog_cmd->add_option("--start", prog_start)->required();
        prog_cmd->add_option("--end", prog_end)->required();
        prog_cmd->callback([&] {
            const auto tables = load_tables(stats_flags);
            const Id team = resolve_team(tables, prog_team);
            const auto p = progression(tables, team, prog_start, prog_end);
            ordered_json out{{"team", tables.team_name(team)},
                             {"gw_start", prog_start},
                             {"gw_end", prog_end},
                             {"rank_start", p.rank_start},
                             {"rank_end", p.rank_end},
                             {"verdict", std::string(to_string(p.verdict))}};
            if (json_out) {
                std::cout << out.dump() << "\n";
            } else {
                std::cout << tables.team_name(team) << ": rank " << p.rank_start
                          << " (gw" << prog_start << ") -> rank " << p.rank_end
                          << " (gw" << prog_end << "), "
                          << to_string(p.verdict) << "\n";
            }
        });

        auto* avg_cmd = stats_cmd->add_subcommand("average", "Cumulative per-gameweek average");
        std::string avg_team, avg_metric = "goals";
        int avg_gw = 1;
        avg_cmd->add_option("--team", avg_team)->required();
        avg_cmd->add_option("--gameweek", avg_gw)->required();
        avg_cmd->add_option("--metric", avg_metric, "goals or points");
        avg_cmd->callback([&] {
            const auto tables = load_tables(stats_flags);
            const Id team = resolve_team(tables, avg_team);
            AverageMetric metric;
            if (avg_metric == "goals") {
                metric = AverageMetric::Goals;
            } else if (avg_metric == "points") {
                metric = AverageMetric::Points;
            } else {
                throw DomainError("metric must be goals or points, got '" + avg_metric + "'");
            }
            const auto r = cumulative_average(tables, team, avg_gw, metric);
            ordered_json out{{"team", tables.team_name(team)},
                             {"gameweek", avg_gw},
                             {"metric", avg_metric},
                             {"numerator", r.numerator},
                             {"denominator", r.denominator},
                             {"value", r.value_text()},
                             {"arithmetic", r.arithmetic_string()}};
            if (json_out) {
                std::cout << out.dump() << "\n";
            } else {
                std::cout << tables.team_name(team) << " " << avg_metric
                          << " through gw" << avg_gw << ": " << r.arithmetic_string()
                          << "\n";
            }
        });

        auto* decomp_cmd = stats_cmd->add_subcommand("decomposition", "Regional split of one event type");
        std::string de_team, de_event;
        int de_start = 1, de_end = 1;
        bool de_per_match = false;
        decomp_cmd->add_option("--team", de_team)->required();
        decomp_cmd->add_option("--event", de_event)->required();
        decomp_cmd->add_option("--start", de_start)->required();
        decomp_cmd->add_option("--end", de_end)->required();
        decomp_cmd->add_flag("--per-match", de_per_match, "Report the per-match total");
        decomp_cmd->callback([&] {
            const auto tables = load_tables(stats_flags);
            const Id team = resolve_team(tables, de_team);
            const EventType type = resolve_event(de_event);
            const auto d = event_decomposition(tables, team, de_start, de_end, type,
                                               de_per_match);
            ordered_json top = nlohmann::json::array();
            for (const auto& share : d.top5) {
                top.push_back({{"region", region_tag(share.region)}, {"pct", share.pct}});
            }
            ordered_json out{{"team", tables.team_name(team)},
                             {"event", std::string(to_string(type))},
                             {"gw_start", de_start},
                             {"gw_end", de_end},
                             {"per_match", de_per_match},
                             {"total", d.total_count},
                             {"top", top}};
            if (json_out) {
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << tables.team_name(team) << " " << to_string(type)
                          << " gw" << de_start << "-" << de_end << ": total "
                          << d.total_count << (de_per_match ? " per match" : "") << "\n";
                for (const auto& share : d.top5) {
                    std::cout << "  " << region_tag(share.region) << "  " << share.pct
                              << "%\n";
                }
            }
        });

        auto* rank_cmd = stats_cmd->add_subcommand("ranking", "Season per-match ranking for one event type");
        std::string rk_event;
        rank_cmd->add_option("--event", rk_event)->required();
        rank_cmd->callback([&] {
            const auto tables = load_tables(stats_flags);
            const auto rows = season_event_ranking(tables, resolve_event(rk_event));
            if (json_out) {
                ordered_json arr = nlohmann::json::array();
                for (const auto& r : rows) {
                    arr.push_back({{"rank", r.rank},
                                   {"team", tables.team_name(r.team_id)},
                                   {"average", r.avg_text()}});
                }
                std::cout << arr.dump(2) << "\n";
            } else {
                for (const auto& r : rows) {
                    std::printf("%4d  %-28s %8s\n", r.rank,
                                tables.team_name(r.team_id).c_str(), r.avg_text().c_str());
                }
            }
        });

        auto* cmp_cmd = stats_cmd->add_subcommand("compare", "Standings excerpt for selected teams");
        std::vector<std::string> cmp_teams;
        int cmp_gw = 1;
        cmp_cmd->add_option("--team", cmp_teams, "Repeat for each team")->required();
        cmp_cmd->add_option("--gameweek", cmp_gw)->required();
        cmp_cmd->callback([&] {
            const auto tables = load_tables(stats_flags);
            std::vector<Id> ids;
            for (const auto& spec : cmp_teams) ids.push_back(resolve_team(tables, spec));
            const auto rows = compare_teams(tables, ids, cmp_gw);
            if (json_out) {
                std::cout << standings_json(tables, rows).dump(2) << "\n";
            } else {
                print_standings_text(tables, rows);
            }
        });

        // distill
        auto* distill_cmd = app.add_subcommand("distill", "Collect teacher paragraphs and QA pairs");
        DataFlags distill_flags;
        add_data_flags(distill_cmd, distill_flags);
        std::string di_out = "out";
        bool di_live = false;
        std::string di_endpoint, di_model = "teacher-default", di_adapter = "simple", di_cache;
        distill_cmd->add_option("--out", di_out, "Output directory");
        distill_cmd->add_flag("--live", di_live, "Call the real endpoint instead of the stub");
        distill_cmd->add_option("--endpoint", di_endpoint, "Teacher endpoint (default: TEACHER_ENDPOINT)");
        distill_cmd->add_option("--model", di_model, "Teacher model name");
        distill_cmd->add_option("--adapter", di_adapter, "Request shape: simple or openai_chat");
        distill_cmd->add_option("--cache", di_cache, "Response cache directory");
        distill_cmd->callback([&] {
            const auto tables = load_tables(distill_flags);
            TeacherConfig teacher = TeacherConfig::from_env();
            teacher.stub = !di_live;
            teacher.model = di_model;
            teacher.adapter = di_adapter;
            if (!di_endpoint.empty()) teacher.endpoint = di_endpoint;
            teacher.cache_dir = di_cache.empty() ? di_out + "/teacher_cache" : di_cache;
            if (di_live) teacher.http_post = make_httplib_transport();
            CurationConfig cur;
            cur.league_name = distill_flags.league;
            const auto result = run_distill(tables, cur, teacher);
            if (result.transport_failures > 0) {
                throw TransportError(std::to_string(result.transport_failures) +
                                     " teacher calls failed after retries");
            }
            ordered_json out{{"prompts", result.responses.size()},
                             {"pairs", result.pairs.size()},
                             {"paragraphs", result.paragraphs.size()},
                             {"parse_failures", result.parse_failures},
                             {"cache_dir", teacher.cache_dir}};
            std::filesystem::create_directories(di_out);
            write_file(di_out + "/distill_summary.json", out.dump(2) + "\n");
            if (json_out) {
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << result.responses.size() << " prompts -> "
                          << result.pairs.size() << " QA pairs, "
                          << result.paragraphs.size() << " paragraphs ("
                          << result.parse_failures << " parse failures)\n";
            }
        });

        // curate
        auto* curate_cmd = app.add_subcommand("curate", "Render the template corpus");
        DataFlags curate_flags;
        add_data_flags(curate_cmd, curate_flags);
        std::string cu_out = "out";
        CurationConfig cu_cfg;
        std::string cu_families;
        curate_cmd->add_option("--out", cu_out, "Output directory");
        curate_cmd->add_option("--seed", cu_cfg.seed, "Shuffle seed");
        curate_cmd->add_option("--max-tokens", cu_cfg.max_tokens, "Chunk budget");
        curate_cmd->add_option("--variants", cu_cfg.variants_per_template, "Paraphrase variants per template");
        curate_cmd->add_option("--season", cu_cfg.season_label, "Season label in rendered text");
        curate_cmd->add_option("--families", cu_families, "Comma-separated family subset");
        curate_cmd->callback([&] {
            const auto tables = load_tables(curate_flags);
            cu_cfg.league_name = curate_flags.league;
            if (!cu_families.empty()) {
                cu_cfg.families_enabled.clear();
                for (const auto& key : split(cu_families, ',')) {
                    cu_cfg.families_enabled.insert(
                        std::string(family_key(family_from_key(trim(key)))));
                }
            }
            const auto corpus = build_corpus(tables, cu_cfg);
            std::filesystem::create_directories(cu_out);
            emit_jsonl(corpus.chunks, cu_out + "/corpus.jsonl");
            emit_manifest(corpus, cu_out + "/corpus_manifest.json");
            ordered_json out{{"chunks", corpus.chunks.size()},
                             {"datapoints", corpus.total_datapoints},
                             {"dedup_dropped", corpus.dedup_count},
                             {"dir", cu_out}};
            if (json_out) {
                std::cout << out.dump() << "\n";
            } else {
                std::cout << "wrote " << corpus.chunks.size() << " chunks ("
                          << corpus.total_datapoints << " datapoints, "
                          << corpus.dedup_count << " duplicates dropped) to "
                          << cu_out << "\n";
            }
        });

        // oracle
        auto* oracle_cmd = app.add_subcommand("oracle", "Answer or grade a question");
        DataFlags oracle_flags;
        add_data_flags(oracle_cmd, oracle_flags);
        std::string or_question, or_answer, or_season = "2017/2018";
        oracle_cmd->add_option("--question", or_question, "Question text")->required();
        oracle_cmd->add_option("--answer", or_answer, "Candidate answer to grade");
        oracle_cmd->add_option("--season", or_season, "Season label");
        oracle_cmd->callback([&] {
            const auto tables = load_tables(oracle_flags);
            CurationConfig cfg;
            cfg.league_name = oracle_flags.league;
            cfg.season_label = or_season;
            const auto query = parse_question(tables, or_question);
            const auto gold = answer(tables, cfg, query);
            ordered_json out;
            out["family"] = std::string(family_key(query.family));
            ordered_json params = nlohmann::ordered_json::object();
            for (const auto& [k, v] : to_params(query)) params[k] = v;
            out["params"] = params;
            out["answer"] = gold.text;
            ordered_json facts = nlohmann::json::array();
            for (const auto& f : gold.facts.numeric) {
                facts.push_back({{"kind", "numeric"},
                                 {"name", f.name},
                                 {"expected", f.expected},
                                 {"decimals", f.decimals}});
            }
            for (const auto& f : gold.facts.entities) {
                facts.push_back({{"kind", "entity"}, {"name", f.name}, {"text", f.text}});
            }
            out["facts"] = facts;
            if (!or_answer.empty()) {
                const auto report = grade(or_answer, gold);
                out["verdict"] = std::string(to_string(report.verdict));
                out["score"] = report.score;
                ordered_json misses = nlohmann::json::array();
                for (const auto& c : report.numeric_facts)
                    if (!c.matched) misses.push_back(c.name);
                for (const auto& c : report.entity_facts)
                    if (!c.found) misses.push_back(c.name);
                out["missing"] = misses;
            }
            if (json_out) {
                std::cout << out.dump(2) << "\n";
            } else if (!or_answer.empty()) {
                std::cout << "verdict: " << out["verdict"].get<std::string>()
                          << " (score " << out["score"].get<double>() << ")\n"
                          << "gold: " << gold.text << "\n";
            } else {
                std::cout << gold.text << "\n";
            }
        });

        // lora
        auto* lora_cmd = app.add_subcommand("lora", "Adapter math demos");
        lora_cmd->require_subcommand(1);
        auto* demo_cmd = lora_cmd->add_subcommand("demo", "Train a toy adapter and report invariants");
        int lo_d = 8, lo_k = 6, lo_r = 2, lo_steps = 200;
        std::uint64_t lo_seed = 1;
        double lo_lr = 0.05;
        demo_cmd->add_option("--d", lo_d, "Output dimension");
        demo_cmd->add_option("--k", lo_k, "Input dimension");
        demo_cmd->add_option("--r", lo_r, "Adapter rank");
        demo_cmd->add_option("--steps", lo_steps, "Training steps");
        demo_cmd->add_option("--seed", lo_seed, "RNG seed");
        demo_cmd->add_option("--lr", lo_lr, "Learning rate");
        demo_cmd->callback([&] {
            SplitMix64 rng(lo_seed);
            Matrix w0(lo_d, lo_k);
            for (double& v : w0.data) v = rng.next_gaussian();
            const BaseMatrix base(w0);
            const std::uint64_t hash_before = base.byte_hash();

            Matrix bt(lo_d, 1), at(1, lo_k);
            for (double& v : bt.data) v = rng.next_gaussian();
            for (double& v : at.data) v = rng.next_gaussian();
            const Matrix target_delta = matmul(bt, at);

            const int n = 4 * lo_k;
            Matrix x(lo_k, n), y(lo_d, n);
            for (double& v : x.data) v = rng.next_gaussian();
            y = add(matmul(base.W0, x), matmul(target_delta, x));

            auto adapter = init_adapter(lo_d, lo_k, lo_r, lo_seed + 1);
            std::vector<double> losses;
            for (int s = 0; s < lo_steps; ++s) {
                losses.push_back(train_step(base, adapter, x, y, lo_lr));
            }
            losses.push_back(lora_loss(base, adapter, x, y));

            double max_gap = 0.0;
            {
                const BaseMatrix merged = merge(base, adapter);
                SplitMix64 probe(lo_seed + 2);
                for (int trial = 0; trial < 5; ++trial) {
                    std::vector<double> v(lo_k);
                    for (double& e : v) e = probe.next_gaussian();
                    const auto fast = forward(base, adapter, v);
                    Matrix vx(lo_k, 1);
                    vx.data = v;
                    const auto dense = matmul(merged.W0, vx);
                    for (int i = 0; i < lo_d; ++i) {
                        max_gap = std::max(max_gap, std::abs(fast[i] - dense.data[i]));
                    }
                }
            }
            const auto q = quantize8(adapter.A);
            const auto back = dequantize8(q);
            double quant_err = 0.0;
            for (std::size_t i = 0; i < back.data.size(); ++i) {
                quant_err = std::max(quant_err, std::abs(back.data[i] - adapter.A.data[i]));
            }

            ordered_json out;
            out["d"] = lo_d;
            out["k"] = lo_k;
            out["r"] = lo_r;
            out["steps"] = lo_steps;
            out["lr"] = lo_lr;
            out["trainable_params"] = trainable_params(adapter);
            out["dense_params"] = static_cast<std::int64_t>(lo_d) * lo_k;
            ordered_json curve = nlohmann::json::array();
            for (std::size_t s = 0; s < losses.size(); ++s) {
                if (s % std::max(1, lo_steps / 20) == 0 || s + 1 == losses.size()) {
                    curve.push_back({{"step", s}, {"loss", losses[s]}});
                }
            }
            out["loss_curve"] = curve;
            out["final_loss"] = losses.back();
            out["invariants"] = {
                {"w0_hash_constant", base.byte_hash() == hash_before},
                {"forward_merge_max_gap", max_gap},
                {"forward_matches_merge", max_gap < 1e-10},
                {"quantization_max_error", quant_err},
                {"quantization_within_bound", quant_err <= q.scale / 2 + 1e-12},
            };
            std::cout << out.dump(2) << "\n";
        });

        // run
        auto* run_cmd = app.add_subcommand("run", "Full pipeline: ingest to corpus");
        std::string rc_config, rc_data, rc_out, rc_mapping;
        std::int64_t rc_seed = -1;
        bool rc_live = false, rc_no_distill = false;
        run_cmd->add_option("--config", rc_config, "Declarative run config (JSON)");
        run_cmd->add_option("--data", rc_data, "Directory with the four raw feeds");
        run_cmd->add_option("--out", rc_out, "Output directory");
        run_cmd->add_option("--mapping", rc_mapping, "Field-mapping JSON file");
        run_cmd->add_option("--seed", rc_seed, "Curation shuffle seed");
        run_cmd->add_flag("--live", rc_live, "Use the live teacher endpoint");
        run_cmd->add_flag("--no-distill", rc_no_distill, "Skip the teacher stage");
        run_cmd->callback([&] {
            RunConfig config;
            config.teacher = TeacherConfig::from_env();
            if (!rc_config.empty()) {
                nlohmann::json doc;
                try {
                    doc = nlohmann::json::parse(read_file(rc_config));
                } catch (const nlohmann::json::parse_error& e) {
                    throw ConfigError("run config " + rc_config + ": " + e.what());
                }
                if (doc.contains("data_dir")) {
                    const auto dir = doc["data_dir"].get<std::string>();
                    config.matches_path = dir + "/matches.json";
                    config.events_path = dir + "/events.json";
                    config.teams_path = dir + "/teams.json";
                    config.players_path = dir + "/players.json";
                }
                if (doc.contains("matches")) config.matches_path = doc["matches"];
                if (doc.contains("events")) config.events_path = doc["events"];
                if (doc.contains("teams")) config.teams_path = doc["teams"];
                if (doc.contains("players")) config.players_path = doc["players"];
                if (doc.contains("mapping")) config.mapping_path = doc["mapping"];
                if (doc.contains("output_dir")) config.output_dir = doc["output_dir"];
                if (doc.contains("league")) {
                    config.parse.league = doc["league"];
                    config.curation.league_name = doc["league"];
                }
                if (doc.contains("gw_min")) config.parse.gameweek_min = doc["gw_min"];
                if (doc.contains("gw_max")) config.parse.gameweek_max = doc["gw_max"];
                if (doc.contains("seed")) config.curation.seed = doc["seed"];
                if (doc.contains("max_tokens")) config.curation.max_tokens = doc["max_tokens"];
                if (doc.contains("variants_per_template")) {
                    config.curation.variants_per_template = doc["variants_per_template"];
                }
                if (doc.contains("season")) config.curation.season_label = doc["season"];
                if (doc.contains("families")) {
                    config.curation.families_enabled.clear();
                    for (const auto& key : doc["families"]) {
                        config.curation.families_enabled.insert(std::string(
                            family_key(family_from_key(key.get<std::string>()))));
                    }
                }
                if (doc.contains("distill")) {
                    const auto& di = doc["distill"];
                    if (di.contains("enabled")) config.distill_enabled = di["enabled"];
                    if (di.contains("stub")) config.teacher.stub = di["stub"];
                    if (di.contains("model")) config.teacher.model = di["model"];
                    if (di.contains("adapter")) config.teacher.adapter = di["adapter"];
                    if (di.contains("cache_dir")) config.teacher.cache_dir = di["cache_dir"];
                    if (di.contains("endpoint")) config.teacher.endpoint = di["endpoint"];
                }
            }
            if (!rc_data.empty()) {
                config.matches_path = rc_data + "/matches.json";
                config.events_path = rc_data + "/events.json";
                config.teams_path = rc_data + "/teams.json";
                config.players_path = rc_data + "/players.json";
            }
            if (!rc_out.empty()) config.output_dir = rc_out;
            if (!rc_mapping.empty()) config.mapping_path = rc_mapping;
            if (rc_seed >= 0) config.curation.seed = static_cast<std::uint64_t>(rc_seed);
            if (rc_no_distill) config.distill_enabled = false;
            if (rc_live) config.teacher.stub = false;
            if (!config.teacher.stub) config.teacher.http_post = make_httplib_transport();

            const auto manifest = run_pipeline(config);
            if (json_out) {
                std::cout << manifest.dump(2) << "\n";
            } else {
                std::cout << "pipeline complete: " << manifest["counts"]["corpus_chunks"]
                          << " corpus chunks, manifest at " << config.output_dir
                          << "/run_manifest.json\n";
            }
        });

        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const AmbiguityError& e) {
        std::cerr << "footgpt: error: " << e.what() << "\n";
        for (const auto& c : e.candidates()) std::cerr << "  candidate: " << c << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "footgpt: error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}
