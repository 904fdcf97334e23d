#pragma once

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "footgpt/curate.hpp"
#include "footgpt/errors.hpp"
#include "footgpt/families.hpp"
#include "footgpt/pitch_grid.hpp"
#include "footgpt/stats.hpp"
#include "footgpt/tables.hpp"
#include "footgpt/util.hpp"

namespace footgpt {

enum class PromptKind {
    RegionLegend,
    ParagraphFromStats,
    QaFromParagraph,
    EventCorrelation,
    FieldGeometry,
    GameweekJsonContext,
    StyleConclusions,
};

inline std::string_view to_string(PromptKind k) {
    switch (k) {
        case PromptKind::RegionLegend: return "region_legend";
        case PromptKind::ParagraphFromStats: return "paragraph_from_stats";
        case PromptKind::QaFromParagraph: return "qa_from_paragraph";
        case PromptKind::EventCorrelation: return "event_correlation";
        case PromptKind::FieldGeometry: return "field_geometry";
        case PromptKind::GameweekJsonContext: return "gameweek_json_context";
        case PromptKind::StyleConclusions: return "style_conclusions";
    }
    return "";
}

struct TeacherPrompt {
    PromptKind kind = PromptKind::RegionLegend;
    std::string body;
    std::string payload_hash;

    std::string prompt_hash() const { return hex64(fnv1a64(body)); }
};

enum class TeacherStatus { Ok, ParseFailed, TransportFailed };

inline std::string_view to_string(TeacherStatus s) {
    switch (s) {
        case TeacherStatus::Ok: return "ok";
        case TeacherStatus::ParseFailed: return "parse_failed";
        case TeacherStatus::TransportFailed: return "transport_failed";
    }
    return "";
}

struct TeacherResponse {
    std::string prompt_hash;
    std::string raw_text;
    std::vector<QAPair> pairs;  // qa_from_paragraph prompts only
    std::string paragraph;      // all other prompt kinds
    TeacherStatus status = TeacherStatus::TransportFailed;
};

struct HttpResult {
    int status = 0;
    std::string body;
    std::map<std::string, std::string> headers;
};

// Performs one HTTP POST; url is the full endpoint, headers include auth when
// configured. Injected so transports and failures are swappable in tests.
using HttpPostFn = std::function<HttpResult(
    const std::string& url, const std::map<std::string, std::string>& headers,
    const std::string& json_body)>;

struct TeacherConfig {
    bool stub = true;  // deterministic offline teacher
    std::string endpoint;
    std::string api_key;
    std::string model = "teacher-default";
    std::string adapter = "simple";  // or "openai_chat"
    int max_tokens = 1024;
    int max_retries = 3;
    int base_backoff_ms = 250;
    int min_pairs = 1;
    int max_pairs = 60;
    std::string cache_dir;
    HttpPostFn http_post;
    std::function<void(int ms)> sleep_fn = [](int ms) {
        std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    };

    static TeacherConfig from_env() {
        TeacherConfig cfg;
        if (const char* endpoint = std::getenv("TEACHER_ENDPOINT")) {
            cfg.endpoint = endpoint;
        }
        if (const char* key = std::getenv("TEACHER_API_KEY")) {
            cfg.api_key = key;
        }
        return cfg;
    }
};

inline const std::string& region_legend_text() {
    static const std::string legend = [] {
        std::string out =
            "Let's identify and describe each region based on the division of "
            "the football field into 6 horizontal and 4 vertical cells: With "
            "this perspective, for a football field, the regions are oriented "
            "with the team's attack direction. It gives a clear understanding "
            "of where each player might be situated relative to offensive and "
            "defensive duties during a game. ";
        for (int c = 0; c < kGridCols; ++c) {
            for (int r = 0; r < kGridRows; ++r) {
                out += "Region " + std::to_string(c) + ", " + std::to_string(r) +
                       ": " + std::string(describe(Region{c, r})) + " ";
            }
        }
        out.pop_back();
        return out;
    }();
    return legend;
}

inline TeacherPrompt build_prompt(PromptKind kind,
                                  const std::vector<std::string>& payload) {
    auto require_payload = [&] {
        if (payload.empty()) {
            throw DomainError(std::string("prompt kind '") +
                              std::string(to_string(kind)) +
                              "' needs a payload");
        }
    };
    TeacherPrompt p;
    p.kind = kind;
    std::uint64_t h = kFnvOffset;
    for (const auto& line : payload) h = fnv1a64(line, h);
    p.payload_hash = hex64(h);

    switch (kind) {
        case PromptKind::RegionLegend:
            p.body = region_legend_text();
            break;
        case PromptKind::ParagraphFromStats: {
            require_payload();
            std::string joined;
            for (const auto& line : payload) {
                if (!joined.empty()) joined += ", ";
                joined += "'" + line + "'";
            }
            p.body = "given this : " + joined + " and this : " +
                     region_legend_text() +
                     "\nwrite a detailed paragraph about gameplays of teams by "
                     "mentioning verbally regional decompositions and events";
            break;
        }
        case PromptKind::QaFromParagraph:
            require_payload();
            p.body = payload.front() +
                     "\ngenerate 50 question answer pairs from this about the "
                     "gameplay and its relationship to events and regional "
                     "decomposition for the team (in python list of tuples "
                     "format ex : [(q,a), (q,a), ..], use \" \" and add "
                     "\"footgpt, \" at the beginning of each question)";
            break;
        case PromptKind::EventCorrelation:
            p.body =
                "among these football events a team makes, which of them are "
                "positevely correlated with performance and which are "
                "negatively correlated with performance : 'Air duel', 'Ground "
                "loose ball duel', 'Ground defending duel','Ground attacking "
                "duel', 'Touch', 'Clearance', 'Shot', 'Simple pass', 'High "
                "pass', 'Head pass', 'Acceleration', 'Goals', 'Red Cards', "
                "'Yellow Cards'";
            break;
        case PromptKind::FieldGeometry:
            p.body = "assume football field is 120 (horizontal) by 80 "
                     "(vertical) meters and describe where each of the 24 "
                     "regions falls in meters. " +
                     region_legend_text();
            break;
        case PromptKind::GameweekJsonContext:
            require_payload();
            p.body = "I will give you the results for the matches gameweek " +
                     (payload.size() > 1 ? payload[1] : std::string("1")) +
                     " of italian football league in 2017/2018 as a json\n" +
                     payload.front();
            break;
        case PromptKind::StyleConclusions:
            require_payload();
            p.body = payload.front() +
                     "\ngiven all these above and the json. give conclusions "
                     "about the playing style of this team through out "
                     "gameweeks (precising the team name and the opposing "
                     "teams at each gameweek)";
            break;
    }
    return p;
}

// Tolerant extraction of ("question", "answer") tuples from model output.
// Accepts single or double quotes, escaped characters, trailing commas and
// arbitrary prose around the list. Never throws.
inline std::vector<QAPair> parse_qa_tuples(const std::string& raw) {
    std::vector<QAPair> pairs;
    const auto parse_string = [&](std::size_t& i) -> std::optional<std::string> {
        if (i >= raw.size() || (raw[i] != '"' && raw[i] != '\'')) {
            return std::nullopt;
        }
        const char quote = raw[i];
        ++i;
        std::string out;
        while (i < raw.size()) {
            const char c = raw[i];
            if (c == '\\' && i + 1 < raw.size()) {
                const char next = raw[i + 1];
                out += next == 'n' ? '\n' : next == 't' ? '\t' : next;
                i += 2;
                continue;
            }
            if (c == quote) {
                ++i;
                return out;
            }
            out += c;
            ++i;
        }
        return std::nullopt;  // unterminated
    };
    const auto skip_ws = [&](std::size_t& i) {
        while (i < raw.size() &&
               std::isspace(static_cast<unsigned char>(raw[i]))) {
            ++i;
        }
    };

    std::size_t i = 0;
    while (i < raw.size()) {
        if (raw[i] != '(') {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        skip_ws(j);
        auto question = parse_string(j);
        if (!question) {
            ++i;
            continue;
        }
        skip_ws(j);
        if (j >= raw.size() || raw[j] != ',') {
            ++i;
            continue;
        }
        ++j;
        skip_ws(j);
        auto answer_text = parse_string(j);
        if (!answer_text) {
            ++i;
            continue;
        }
        skip_ws(j);
        if (j < raw.size() && raw[j] == ',') {
            ++j;
            skip_ws(j);
        }
        if (j >= raw.size() || raw[j] != ')') {
            ++i;
            continue;
        }
        std::string q = trim(*question);
        std::string a = trim(*answer_text);
        for (const char* prefix : {"Question :", "question :"}) {
            if (starts_with(q, prefix)) q = trim(q.substr(std::string(prefix).size()));
        }
        for (const char* prefix : {"footgpt,", "Footgpt,", "FOOTGPT,"}) {
            if (starts_with(q, prefix)) q = trim(q.substr(std::string(prefix).size()));
        }
        for (const char* prefix : {"Answer :", "answer :"}) {
            if (starts_with(a, prefix)) a = trim(a.substr(std::string(prefix).size()));
        }
        if (!q.empty() && !a.empty()) {
            QAPair pair;
            pair.question = "Question : footgpt, " + q;
            pair.answer = "Answer : " + a;
            pair.template_id = "teacher_qa";
            pair.provenance = QAPair::Provenance::Teacher;
            pairs.push_back(std::move(pair));
        }
        i = j + 1;
    }
    return pairs;
}

namespace detail {

// Canned deterministic teacher output: fixed sentence frames around the
// payload so every number survives verbatim and the offline pipeline is
// byte-reproducible.
inline std::string stub_teacher_text(const TeacherPrompt& prompt) {
    switch (prompt.kind) {
        case PromptKind::QaFromParagraph: {
            const std::string body = prompt.body.substr(0, prompt.body.find('\n'));
            std::vector<std::string> sentences;
            std::string current;
            for (char c : body) {
                current += c;
                if (c == '.' && current.size() > 40) {
                    sentences.push_back(trim(current));
                    current.clear();
                }
            }
            if (!trim(current).empty()) sentences.push_back(trim(current));
            std::string out = "Here are the pairs you asked for:\n[";
            const std::size_t n = std::min<std::size_t>(sentences.size(), 10);
            for (std::size_t i = 0; i < n; ++i) {
                std::string a = replace_all(sentences[i], "\"", "'");
                out += "(\"footgpt, what does observation " +
                       std::to_string(i + 1) +
                       " of this gameplay context state?\", \"" + a + "\"), ";
            }
            out += "]";
            return out;
        }
        case PromptKind::RegionLegend:
            return "The field splits into 24 rectangles oriented along the "
                   "attack. " + region_legend_text();
        case PromptKind::EventCorrelation:
            return "Shots, simple passes, high passes, accelerations and goals "
                   "correlate positively with performance; clearances, red "
                   "cards and yellow cards correlate negatively; duels and "
                   "touches are context-dependent.";
        default: {
            std::string out = "Looking at the gameweeks in context, the data "
                              "reads as follows. ";
            out += prompt.body;
            out += " In essence, the regional decomposition of events offers a "
                   "nuanced understanding of each team's gameplay.";
            return out;
        }
    }
}

inline std::string cache_path(const TeacherConfig& cfg,
                              const std::string& prompt_hash) {
    return cfg.cache_dir + "/" + prompt_hash + ".json";
}

inline std::optional<std::string> cache_lookup(const TeacherConfig& cfg,
                                               const std::string& prompt_hash) {
    if (cfg.cache_dir.empty()) return std::nullopt;
    const std::string path = cache_path(cfg, prompt_hash);
    if (!std::filesystem::exists(path)) return std::nullopt;
    try {
        const auto doc = nlohmann::json::parse(read_file(path));
        if (doc.contains("raw_text") && doc["raw_text"].is_string()) {
            return doc["raw_text"].get<std::string>();
        }
    } catch (const std::exception&) {
        // corrupt cache entry; fall through to a fresh call
    }
    return std::nullopt;
}

inline void cache_store(const TeacherConfig& cfg, const TeacherPrompt& prompt,
                        const std::string& raw_text) {
    if (cfg.cache_dir.empty()) return;
    std::filesystem::create_directories(cfg.cache_dir);
    nlohmann::ordered_json entry;
    entry["prompt"] = prompt.body;
    entry["raw_text"] = raw_text;
    entry["timestamp"] = static_cast<std::int64_t>(std::time(nullptr));
    write_file(cache_path(cfg, prompt.prompt_hash()), entry.dump(2) + "\n");
}

inline std::string request_body(const TeacherConfig& cfg,
                                const TeacherPrompt& prompt) {
    nlohmann::ordered_json body;
    if (cfg.adapter == "openai_chat") {
        body["model"] = cfg.model;
        body["messages"] = nlohmann::json::array(
            {{{"role", "user"}, {"content", prompt.body}}});
        body["max_tokens"] = cfg.max_tokens;
    } else {
        body["model"] = cfg.model;
        body["prompt"] = prompt.body;
        body["max_tokens"] = cfg.max_tokens;
    }
    return body.dump();
}

inline std::optional<std::string> response_text(const TeacherConfig& cfg,
                                                const std::string& body) {
    try {
        const auto doc = nlohmann::json::parse(body);
        if (cfg.adapter == "openai_chat") {
            const auto& choices = doc.at("choices");
            if (choices.empty()) return std::nullopt;
            return choices[0].at("message").at("content").get<std::string>();
        }
        return doc.at("text").get<std::string>();
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline std::optional<std::string> live_call(const TeacherConfig& cfg,
                                            const TeacherPrompt& prompt) {
    std::map<std::string, std::string> headers{
        {"Content-Type", "application/json"}};
    if (!cfg.api_key.empty()) {
        headers["Authorization"] = "Bearer " + cfg.api_key;
    }
    const std::string body = request_body(cfg, prompt);
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        HttpResult res;
        try {
            res = cfg.http_post(cfg.endpoint, headers, body);
        } catch (const std::exception&) {
            res.status = 0;
        }
        if (res.status >= 200 && res.status < 300) {
            return response_text(cfg, res.body);
        }
        if (attempt == cfg.max_retries) break;
        int wait_ms = cfg.base_backoff_ms << attempt;
        auto retry_after = res.headers.find("Retry-After");
        if (retry_after != res.headers.end()) {
            try {
                wait_ms = std::stoi(retry_after->second) * 1000;
            } catch (const std::exception&) {
                // unparseable header; keep exponential backoff
            }
        }
        cfg.sleep_fn(wait_ms);
    }
    return std::nullopt;
}

}  // namespace detail

// Resolves one prompt to a response: cache first, then the stub or the live
// endpoint. Auth material never reaches the cache or the response.
inline TeacherResponse call_teacher(const TeacherPrompt& prompt,
                                    const TeacherConfig& cfg) {
    TeacherResponse resp;
    resp.prompt_hash = prompt.prompt_hash();

    auto cached = detail::cache_lookup(cfg, resp.prompt_hash);
    if (cached) {
        resp.raw_text = *cached;
    } else if (cfg.stub) {
        resp.raw_text = detail::stub_teacher_text(prompt);
        detail::cache_store(cfg, prompt, resp.raw_text);
    } else {
        if (cfg.endpoint.empty() || !cfg.http_post) {
            throw ConfigError(
                "live teacher mode needs TEACHER_ENDPOINT and a transport");
        }
        auto text = detail::live_call(cfg, prompt);
        if (!text) {
            resp.status = TeacherStatus::TransportFailed;
            return resp;
        }
        resp.raw_text = *text;
        detail::cache_store(cfg, prompt, resp.raw_text);
    }

    if (prompt.kind == PromptKind::QaFromParagraph) {
        resp.pairs = parse_qa_tuples(resp.raw_text);
        const int n = static_cast<int>(resp.pairs.size());
        if (n < cfg.min_pairs || n > cfg.max_pairs) {
            resp.pairs.clear();
            resp.status = TeacherStatus::ParseFailed;
            return resp;
        }
    } else {
        resp.paragraph = resp.raw_text;
    }
    resp.status = TeacherStatus::Ok;
    return resp;
}

// The deterministic prompt plan for a dataset: one legend prompt, per-team
// stats paragraphs (chained into QA prompts by run_distill), the correlation
// and geometry one-offs, per-gameweek json contexts and per-team style
// prompts.
inline std::vector<TeacherPrompt> build_prompt_plan(const Tables& tables,
                                                    const CurationConfig& cfg) {
    std::vector<TeacherPrompt> plan;
    plan.push_back(build_prompt(PromptKind::RegionLegend, {}));
    plan.push_back(build_prompt(PromptKind::EventCorrelation, {}));
    plan.push_back(build_prompt(PromptKind::FieldGeometry, {}));

    const std::array<EventType, 3> profile_types = {
        EventType::HighPass, EventType::SimplePass, EventType::Touch};
    for (const auto& team : tables.teams_info) {
        std::vector<std::string> lines;
        for (EventType et : profile_types) {
            const auto d = event_decomposition(tables, team.team_id, 1,
                                               tables.max_gameweek, et, true);
            if (d.total_count == 0 && d.top5.empty()) continue;
            QueryParams q;
            q.family = Family::EventDecomposition;
            q.event_aspect = EventAspect::Season;
            q.team = team.team_id;
            q.gw_start = 1;
            q.gw_end = tables.max_gameweek;
            q.event_type = et;
            const std::string rendered = render_answer(tables, cfg, q, 0);
            lines.push_back(rendered.substr(std::string("Answer : ").size()));
        }
        if (!lines.empty()) {
            plan.push_back(build_prompt(PromptKind::ParagraphFromStats, lines));
        }
    }

    for (int gw = 1; gw <= tables.max_gameweek; ++gw) {
        nlohmann::ordered_json matches = nlohmann::json::array();
        const auto table = standings(tables, gw);
        for (const auto& row : tables.team_week) {
            if (row.gameweek != gw || row.side != Side::Home) continue;
            nlohmann::ordered_json m;
            m["gameweek"] = gw;
            m["home_team"] = tables.team_name(row.team_id);
            m["away_team"] = tables.team_name(row.opposing_team_id);
            m["home_goals"] = row.goals_scored;
            m["away_goals"] =
                team_week_lookup(tables, row.opposing_team_id, gw).goals_scored;
            m["home_rank"] = standings_row(table, row.team_id).rank;
            m["away_rank"] = standings_row(table, row.opposing_team_id).rank;
            matches.push_back(m);
        }
        plan.push_back(build_prompt(PromptKind::GameweekJsonContext,
                                    {matches.dump(), std::to_string(gw)}));
    }

    for (const auto& team : tables.teams_info) {
        nlohmann::ordered_json weeks = nlohmann::json::array();
        for (int gw = 1; gw <= tables.max_gameweek; ++gw) {
            auto it = tables.team_week_index.find({team.team_id, gw});
            if (it == tables.team_week_index.end()) continue;
            const auto& row = tables.team_week[it->second];
            nlohmann::ordered_json w;
            w["gameweek"] = gw;
            w["team"] = team.name;
            w["opponent"] = tables.team_name(row.opposing_team_id);
            w["goals"] = row.goals_scored;
            w["points"] = row.points;
            weeks.push_back(w);
        }
        plan.push_back(
            build_prompt(PromptKind::StyleConclusions, {weeks.dump()}));
    }
    return plan;
}

struct DistillResult {
    std::vector<TeacherResponse> responses;  // in prompt-hash order
    std::vector<QAPair> pairs;
    std::vector<std::string> paragraphs;
    int transport_failures = 0;
    int parse_failures = 0;
};

// Runs the two-phase plan: stats paragraphs first, then QA extraction from
// each successful paragraph. Outputs are merged in prompt-hash order so the
// result is independent of call scheduling.
inline DistillResult run_distill(const Tables& tables, const CurationConfig& cur,
                                 const TeacherConfig& teacher) {
    auto plan = build_prompt_plan(tables, cur);
    std::vector<std::pair<TeacherPrompt, TeacherResponse>> done;
    for (const auto& prompt : plan) {
        done.push_back({prompt, call_teacher(prompt, teacher)});
    }
    std::vector<TeacherPrompt> qa_prompts;
    for (const auto& [prompt, resp] : done) {
        if (prompt.kind == PromptKind::ParagraphFromStats &&
            resp.status == TeacherStatus::Ok) {
            qa_prompts.push_back(
                build_prompt(PromptKind::QaFromParagraph, {resp.paragraph}));
        }
    }
    for (const auto& prompt : qa_prompts) {
        done.push_back({prompt, call_teacher(prompt, teacher)});
    }

    std::sort(done.begin(), done.end(), [](const auto& a, const auto& b) {
        return a.second.prompt_hash < b.second.prompt_hash;
    });

    DistillResult result;
    for (auto& [prompt, resp] : done) {
        switch (resp.status) {
            case TeacherStatus::Ok:
                for (auto& pair : resp.pairs) result.pairs.push_back(pair);
                if (!resp.paragraph.empty()) {
                    result.paragraphs.push_back(resp.paragraph);
                }
                break;
            case TeacherStatus::ParseFailed:
                ++result.parse_failures;
                break;
            case TeacherStatus::TransportFailed:
                ++result.transport_failures;
                break;
        }
        result.responses.push_back(std::move(resp));
    }
    return result;
}

}  // namespace footgpt
