#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "footgpt/errors.hpp"
#include "footgpt/families.hpp"
#include "footgpt/tables.hpp"
#include "footgpt/util.hpp"

namespace footgpt {

struct GoldAnswer {
    QueryParams query;
    std::string text;  // canonical phrasing, variant 0
    GoldFacts facts;
};

inline GoldAnswer answer(const Tables& tables, const CurationConfig& cfg,
                         const QueryParams& query) {
    GoldAnswer gold;
    gold.query = query;
    gold.text = render_answer(tables, cfg, query, 0);
    gold.facts = compute_facts(tables, cfg, query);
    return gold;
}

namespace detail {

inline bool word_boundary(const std::string& text, std::size_t pos,
                          std::size_t len) {
    const auto alnum = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0;
    };
    if (pos > 0 && alnum(text[pos - 1])) return false;
    if (pos + len < text.size() && alnum(text[pos + len])) return false;
    return true;
}

inline std::vector<std::size_t> find_word(const std::string& haystack,
                                          const std::string& needle) {
    std::vector<std::size_t> hits;
    if (needle.empty()) return hits;
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        if (word_boundary(haystack, pos, needle.size())) hits.push_back(pos);
        pos += 1;
    }
    return hits;
}

struct TeamHit {
    std::size_t pos = 0;
    std::size_t len = 0;
    Id team_id = 0;
};

// Nickname forms seen in questions about the Italian league. Only applied
// when the full club name is absent from the question.
inline const std::vector<std::pair<std::string, std::string>>& team_aliases() {
    static const std::vector<std::pair<std::string, std::string>> aliases = {
        {"napoli", "SSC Napoli"},
        {"juventus", "Juventus FC"},
        {"juve", "Juventus FC"},
        {"lazio", "SS Lazio"},
        {"roma", "AS Roma"},
        {"crotone", "FC Crotone"},
        {"torino", "Torino FC"},
        {"genoa", "Genoa CFC"},
        {"atalanta", "Atalanta Bergamasca Calcio"},
        {"sampdoria", "UC Sampdoria"},
        {"fiorentina", "ACF Fiorentina"},
        {"sassuolo", "US Sassuolo Calcio"},
        {"benevento", "Benevento Calcio"},
        {"bologna", "Bologna FC 1909"},
        {"udinese", "Udinese Calcio"},
        {"chievo", "AC Chievo Verona"},
        {"inter", "FC Internazionale Milano"},
        {"milan", "AC Milan"},
    };
    return aliases;
}

inline bool generic_name_word(const std::string& w) {
    static const std::vector<std::string> generic = {
        "fc", "ac", "ssc", "ss", "as", "us", "uc", "acf",
        "calcio", "cfc", "1909", "team", "club"};
    return std::find(generic.begin(), generic.end(), w) != generic.end();
}

// All team mentions in question order. Full names win over aliases, aliases
// over distinctive single words; a word shared by several teams with none of
// them already matched is ambiguous.
inline std::vector<TeamHit> find_teams(const Tables& tables,
                                       const std::string& normalized) {
    std::vector<TeamHit> hits;
    auto overlaps = [&](std::size_t pos, std::size_t len) {
        for (const auto& h : hits) {
            if (pos < h.pos + h.len && h.pos < pos + len) return true;
        }
        return false;
    };
    auto already_found = [&](Id id) {
        for (const auto& h : hits) {
            if (h.team_id == id) return true;
        }
        return false;
    };

    std::vector<const TeamInfo*> by_length;
    for (const auto& t : tables.teams_info) by_length.push_back(&t);
    std::sort(by_length.begin(), by_length.end(),
              [](const TeamInfo* a, const TeamInfo* b) {
                  return a->name.size() > b->name.size();
              });
    for (const TeamInfo* team : by_length) {
        const std::string name = normalize_text(team->name);
        for (std::size_t pos : find_word(normalized, name)) {
            if (!overlaps(pos, name.size()) && !already_found(team->team_id)) {
                hits.push_back({pos, name.size(), team->team_id});
            }
        }
    }
    for (const auto& [alias, full] : team_aliases()) {
        const TeamInfo* target = nullptr;
        for (const auto& t : tables.teams_info) {
            if (t.name == full) {
                target = &t;
                break;
            }
        }
        if (!target || already_found(target->team_id)) continue;
        for (std::size_t pos : find_word(normalized, alias)) {
            if (!overlaps(pos, alias.size())) {
                hits.push_back({pos, alias.size(), target->team_id});
                break;
            }
        }
    }
    for (const auto& team : tables.teams_info) {
        if (already_found(team.team_id)) continue;
        for (const auto& word : split(normalize_text(team.name), ' ')) {
            if (word.size() < 3 || generic_name_word(word)) continue;
            for (std::size_t pos : find_word(normalized, word)) {
                if (overlaps(pos, word.size())) continue;
                std::vector<std::string> candidates;
                for (const auto& other : tables.teams_info) {
                    if (already_found(other.team_id)) continue;
                    for (const auto& w2 : split(normalize_text(other.name), ' ')) {
                        if (w2 == word) {
                            candidates.push_back(other.name);
                            break;
                        }
                    }
                }
                if (candidates.size() > 1) {
                    throw AmbiguityError("team mention '" + word +
                                             "' matches several clubs",
                                         candidates);
                }
                hits.push_back({pos, word.size(), team.team_id});
                break;
            }
            if (already_found(team.team_id)) break;
        }
    }
    std::sort(hits.begin(), hits.end(),
              [](const TeamHit& a, const TeamHit& b) { return a.pos < b.pos; });
    return hits;
}

// Numbers directly following the word "gameweek"/"gameweeks", each optionally
// extended by "to <n>" to cover ranges.
inline std::vector<int> extract_gameweeks(const std::string& normalized) {
    std::vector<int> gws;
    std::size_t pos = 0;
    const std::string key = "gameweek";
    while ((pos = normalized.find(key, pos)) != std::string::npos) {
        std::size_t i = pos + key.size();
        if (i < normalized.size() && normalized[i] == 's') ++i;
        while (i < normalized.size() && normalized[i] == ' ') ++i;
        std::size_t start = i;
        while (i < normalized.size() &&
               std::isdigit(static_cast<unsigned char>(normalized[i]))) {
            ++i;
        }
        if (i > start) {
            gws.push_back(std::stoi(normalized.substr(start, i - start)));
            if (normalized.compare(i, 4, " to ") == 0) {
                std::size_t j = i + 4;
                std::size_t start2 = j;
                while (j < normalized.size() &&
                       std::isdigit(static_cast<unsigned char>(normalized[j]))) {
                    ++j;
                }
                if (j > start2) {
                    gws.push_back(std::stoi(normalized.substr(start2, j - start2)));
                }
            }
        }
        pos += key.size();
    }
    return gws;
}

inline std::optional<EventType> find_event_type(const std::string& normalized) {
    for (EventType et : all_event_types()) {
        const std::string name = normalize_text(std::string(to_string(et)));
        if (!find_word(normalized, name).empty()) return et;
    }
    return std::nullopt;
}

inline bool has(const std::string& text, const char* phrase) {
    return text.find(phrase) != std::string::npos;
}

}  // namespace detail

// Classifies a free-text question into a family and recovers its parameters.
// Works on any question produced by the variant bank plus reasonable manual
// phrasings using the same vocabulary.
inline QueryParams parse_question(const Tables& tables, const std::string& text) {
    using detail::has;
    const std::string norm = normalize_text(text);

    QueryParams q;
    if (has(norm, "what is footgpt")) {
        q.family = Family::SelfAwareness;
        q.self_q = 0;
        return q;
    }
    if (has(norm, "how many teams in total")) {
        q.family = Family::SelfAwareness;
        q.self_q = 1;
        return q;
    }
    if (has(norm, "individual players")) {
        q.family = Family::SelfAwareness;
        q.self_q = 2;
        return q;
    }

    const auto teams = detail::find_teams(tables, norm);
    const auto gws = detail::extract_gameweeks(norm);
    const auto event = detail::find_event_type(norm);
    auto need_team = [&](std::size_t n) {
        if (teams.size() < n) {
            throw NotFoundError("question mentions " + std::to_string(teams.size()) +
                                " known teams, need " + std::to_string(n));
        }
    };
    auto need_gw = [&](std::size_t n) {
        if (gws.size() < n) {
            throw UnsupportedQuestionError(
                "question does not name the required gameweek(s)");
        }
    };

    if (event && (has(norm, "performance ranking") || has(norm, "rank in terms of") ||
                  has(norm, "place for"))) {
        q.family = Family::SeasonRanking;
        need_team(1);
        q.team = teams[0].team_id;
        q.event_type = *event;
        return q;
    }
    if (event) {
        q.family = Family::EventDecomposition;
        need_team(1);
        q.team = teams[0].team_id;
        q.event_type = *event;
        if (has(norm, "per match") || has(norm, "per-match")) {
            q.event_aspect = EventAspect::Season;
            need_gw(2);
            q.gw_start = gws[0];
            q.gw_end = gws[1];
        } else {
            q.event_aspect = EventAspect::Single;
            need_gw(1);
            q.gameweek = gws[0];
        }
        return q;
    }
    if (has(norm, "elevate their game") || has(norm, "stepped up") ||
        has(norm, "moved forward")) {
        q.family = Family::Progression;
        need_team(1);
        need_gw(2);
        q.team = teams[0].team_id;
        q.gw_start = gws[0];
        q.gw_end = gws[1];
        return q;
    }
    if (has(norm, "rankings of") || has(norm, "how would you order")) {
        q.family = Family::MultiComparison;
        need_team(2);
        need_gw(1);
        for (const auto& hit : teams) q.teams.push_back(hit.team_id);
        q.gameweek = gws[0];
        return q;
    }
    if (has(norm, "compare the performances") || has(norm, "stack up") ||
        has(norm, "weigh up")) {
        q.family = Family::PairwiseComparison;
        q.pairwise_aspect = PairwiseAspect::Detail;
        need_team(2);
        need_gw(1);
        q.team = teams[0].team_id;
        q.team_b = teams[1].team_id;
        q.gameweek = gws[0];
        return q;
    }
    if (has(norm, "which team was better") || has(norm, "came out on top") ||
        has(norm, "who won the duel")) {
        q.family = Family::PairwiseComparison;
        q.pairwise_aspect = PairwiseAspect::MatchBetter;
        need_team(2);
        need_gw(1);
        q.team = teams[0].team_id;
        q.team_b = teams[1].team_id;
        q.gameweek = gws[0];
        return q;
    }
    if (has(norm, "on average") || has(norm, "averaged how many") ||
        has(norm, "what is the average")) {
        q.family = Family::CumulativeAverage;
        need_team(1);
        need_gw(1);
        q.team = teams[0].team_id;
        q.gameweek = gws[0];
        if (has(norm, "goal")) {
            q.metric = AverageMetric::Goals;
        } else if (has(norm, "point")) {
            q.metric = AverageMetric::Points;
        } else {
            throw UnsupportedQuestionError("average question names no metric");
        }
        return q;
    }
    if (has(norm, "goal count") || has(norm, "goal tally") ||
        has(norm, "how many goals")) {
        q.family = Family::WeeklyStanding;
        q.weekly_aspect = WeeklyAspect::Goals;
    } else if (has(norm, "match result") || has(norm, "how did the match") ||
               has(norm, "fixture of gameweek") || has(norm, "what happened in")) {
        q.family = Family::WeeklyStanding;
        q.weekly_aspect = WeeklyAspect::Result;
    } else if (has(norm, "current standing") || has(norm, "doing in the") ||
               has(norm, "stand in")) {
        q.family = Family::WeeklyStanding;
        q.weekly_aspect = WeeklyAspect::Standing;
    } else if (has(norm, "placed") || has(norm, "current position") ||
               has(norm, "full picture")) {
        q.family = Family::WeeklyStanding;
        q.weekly_aspect = WeeklyAspect::Full;
    } else {
        throw UnsupportedQuestionError("question matches no known family: " + text);
    }
    need_team(1);
    need_gw(1);
    q.team = teams[0].team_id;
    q.gameweek = gws[0];
    return q;
}

struct NumericCheck {
    std::string name;
    double expected = 0.0;
    bool matched = false;
    double extracted = 0.0;  // meaningful only when matched
    double relative_error = 0.0;
};

struct EntityCheck {
    std::string name;
    std::string text;
    bool found = false;
};

enum class Verdict { Correct, Partial, Wrong };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Correct: return "correct";
        case Verdict::Partial: return "partial";
        case Verdict::Wrong: return "wrong";
    }
    return "wrong";
}

struct GradeReport {
    std::vector<NumericCheck> numeric_facts;
    std::vector<EntityCheck> entity_facts;
    Verdict verdict = Verdict::Wrong;
    double score = 0.0;
};

namespace detail {

// Numeric tokens of free text: integers, decimals, percentages and ordinals
// ("25%" -> 25, "4th" -> 4). "2017/2018" yields both years.
inline std::vector<double> extract_numbers(const std::string& text) {
    std::vector<double> out;
    std::size_t i = 0;
    const auto digit = [&](std::size_t k) {
        return k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]));
    };
    while (i < text.size()) {
        if (!digit(i)) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (digit(i)) ++i;
        if (i < text.size() && text[i] == '.' && digit(i + 1)) {
            ++i;
            while (digit(i)) ++i;
        }
        out.push_back(std::stod(text.substr(start, i - start)));
        // ordinal / percent suffixes are consumed so "4th" never re-parses
        static const char* suffixes[] = {"st", "nd", "rd", "th", "%"};
        for (const char* s : suffixes) {
            const std::size_t len = std::char_traits<char>::length(s);
            if (text.compare(i, len, s) == 0) {
                i += len;
                break;
            }
        }
    }
    return out;
}

inline double tolerance_for(int decimals) {
    switch (decimals) {
        case 0: return 1e-9;
        case 1: return 0.05 + 1e-9;
        default: return 0.005 + 1e-9;
    }
}

}  // namespace detail

// Fact-based grading: entity facts by normalized substring, numeric facts by
// multiset matching with per-precision tolerance. Entity mentions are blanked
// before the numeric scan so digits inside names ("Bologna FC 1909", region
// tags) cannot satisfy numeric facts.
inline GradeReport grade(const std::string& model_text, const GoldAnswer& gold) {
    if (gold.facts.total() == 0) {
        throw DomainError("gold answer carries no gradeable facts");
    }
    GradeReport report;
    std::string working = normalize_text(model_text);

    std::vector<std::size_t> order(gold.facts.entities.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return gold.facts.entities[a].text.size() >
               gold.facts.entities[b].text.size();
    });
    report.entity_facts.resize(gold.facts.entities.size());
    for (std::size_t idx : order) {
        const auto& fact = gold.facts.entities[idx];
        EntityCheck check{fact.name, fact.text, false};
        const std::string needle = normalize_text(fact.text);
        const std::size_t pos = working.find(needle);
        if (pos != std::string::npos) {
            check.found = true;
            working.replace(pos, needle.size(), " ");
        }
        report.entity_facts[idx] = check;
    }

    const auto numbers = detail::extract_numbers(working);
    std::vector<bool> used(numbers.size(), false);
    for (const auto& fact : gold.facts.numeric) {
        NumericCheck check;
        check.name = fact.name;
        check.expected = fact.expected;
        const double tol = detail::tolerance_for(fact.decimals);
        for (std::size_t i = 0; i < numbers.size(); ++i) {
            if (used[i]) continue;
            if (std::abs(numbers[i] - fact.expected) <= tol) {
                used[i] = true;
                check.matched = true;
                check.extracted = numbers[i];
                check.relative_error = std::abs(numbers[i] - fact.expected) /
                                       std::max(1.0, std::abs(fact.expected));
                break;
            }
        }
        report.numeric_facts.push_back(check);
    }

    std::size_t matched = 0;
    for (const auto& c : report.numeric_facts) matched += c.matched ? 1 : 0;
    for (const auto& c : report.entity_facts) matched += c.found ? 1 : 0;
    report.score = static_cast<double>(matched) /
                   static_cast<double>(gold.facts.total());
    report.verdict = matched == gold.facts.total() ? Verdict::Correct
                     : matched == 0                 ? Verdict::Wrong
                                                    : Verdict::Partial;
    return report;
}

}  // namespace footgpt
