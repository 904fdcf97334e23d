#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "footgpt/errors.hpp"
#include "footgpt/stats.hpp"
#include "footgpt/tables.hpp"
#include "footgpt/util.hpp"

namespace footgpt {

// The eight question-answer families. Aspects below subdivide a family where
// one family covers several question shapes sharing parameters.
enum class Family {
    WeeklyStanding,
    Progression,
    MultiComparison,
    PairwiseComparison,
    CumulativeAverage,
    EventDecomposition,
    SeasonRanking,
    SelfAwareness,
};

inline const std::vector<Family>& all_families() {
    static const std::vector<Family> fams = {
        Family::WeeklyStanding,    Family::Progression,
        Family::MultiComparison,   Family::PairwiseComparison,
        Family::CumulativeAverage, Family::EventDecomposition,
        Family::SeasonRanking,     Family::SelfAwareness,
    };
    return fams;
}

inline std::string_view family_key(Family f) {
    switch (f) {
        case Family::WeeklyStanding: return "weekly_standing";
        case Family::Progression: return "progression";
        case Family::MultiComparison: return "multi_comparison";
        case Family::PairwiseComparison: return "pairwise_comparison";
        case Family::CumulativeAverage: return "cumulative_average";
        case Family::EventDecomposition: return "event_decomposition";
        case Family::SeasonRanking: return "season_ranking";
        case Family::SelfAwareness: return "self_awareness";
    }
    return "";
}

inline Family family_from_key(std::string_view key) {
    for (Family f : all_families()) {
        if (family_key(f) == key) return f;
    }
    throw DomainError("unknown family '" + std::string(key) + "'");
}

enum class WeeklyAspect { Full, Standing, Goals, Result };
enum class PairwiseAspect { Detail, MatchBetter };
enum class EventAspect { Single, Season };

inline std::string_view to_string(WeeklyAspect a) {
    switch (a) {
        case WeeklyAspect::Full: return "full";
        case WeeklyAspect::Standing: return "standing";
        case WeeklyAspect::Goals: return "goals";
        case WeeklyAspect::Result: return "result";
    }
    return "";
}

inline std::string_view to_string(PairwiseAspect a) {
    return a == PairwiseAspect::Detail ? "detail" : "match_better";
}

inline std::string_view to_string(EventAspect a) {
    return a == EventAspect::Single ? "single" : "season";
}

// Parameter bundle covering every family; unused fields stay at defaults.
struct QueryParams {
    Family family = Family::SelfAwareness;
    Id team = 0;
    Id team_b = 0;
    std::vector<Id> teams;  // multi comparison, in question order
    int gameweek = 0;
    int gw_start = 0;
    int gw_end = 0;
    WeeklyAspect weekly_aspect = WeeklyAspect::Full;
    PairwiseAspect pairwise_aspect = PairwiseAspect::Detail;
    EventAspect event_aspect = EventAspect::Single;
    AverageMetric metric = AverageMetric::Goals;
    EventType event_type = EventType::Touch;
    int self_q = 0;
};

inline std::map<std::string, std::string> to_params(const QueryParams& q) {
    std::map<std::string, std::string> p;
    p["family"] = std::string(family_key(q.family));
    switch (q.family) {
        case Family::WeeklyStanding:
            p["aspect"] = std::string(to_string(q.weekly_aspect));
            p["team"] = std::to_string(q.team);
            p["gameweek"] = std::to_string(q.gameweek);
            break;
        case Family::Progression:
            p["team"] = std::to_string(q.team);
            p["gw_start"] = std::to_string(q.gw_start);
            p["gw_end"] = std::to_string(q.gw_end);
            break;
        case Family::MultiComparison: {
            std::string ids;
            for (Id id : q.teams) {
                if (!ids.empty()) ids += ',';
                ids += std::to_string(id);
            }
            p["teams"] = ids;
            p["gameweek"] = std::to_string(q.gameweek);
            break;
        }
        case Family::PairwiseComparison:
            p["aspect"] = std::string(to_string(q.pairwise_aspect));
            p["team"] = std::to_string(q.team);
            p["team_b"] = std::to_string(q.team_b);
            p["gameweek"] = std::to_string(q.gameweek);
            break;
        case Family::CumulativeAverage:
            p["metric"] = std::string(to_string(q.metric));
            p["team"] = std::to_string(q.team);
            p["gameweek"] = std::to_string(q.gameweek);
            break;
        case Family::EventDecomposition:
            p["aspect"] = std::string(to_string(q.event_aspect));
            p["team"] = std::to_string(q.team);
            p["event"] = std::string(to_string(q.event_type));
            if (q.event_aspect == EventAspect::Single) {
                p["gameweek"] = std::to_string(q.gameweek);
            } else {
                p["gw_start"] = std::to_string(q.gw_start);
                p["gw_end"] = std::to_string(q.gw_end);
            }
            break;
        case Family::SeasonRanking:
            p["team"] = std::to_string(q.team);
            p["event"] = std::string(to_string(q.event_type));
            break;
        case Family::SelfAwareness:
            p["q"] = std::to_string(q.self_q);
            break;
    }
    return p;
}

inline QueryParams query_from_params(const std::map<std::string, std::string>& p) {
    auto get = [&](const char* key) -> const std::string& {
        auto it = p.find(key);
        if (it == p.end()) {
            throw DomainError(std::string("params missing key '") + key + "'");
        }
        return it->second;
    };
    QueryParams q;
    q.family = family_from_key(get("family"));
    switch (q.family) {
        case Family::WeeklyStanding: {
            const std::string& a = get("aspect");
            q.weekly_aspect = a == "full"     ? WeeklyAspect::Full
                              : a == "standing" ? WeeklyAspect::Standing
                              : a == "goals"    ? WeeklyAspect::Goals
                                                : WeeklyAspect::Result;
            q.team = std::stoll(get("team"));
            q.gameweek = std::stoi(get("gameweek"));
            break;
        }
        case Family::Progression:
            q.team = std::stoll(get("team"));
            q.gw_start = std::stoi(get("gw_start"));
            q.gw_end = std::stoi(get("gw_end"));
            break;
        case Family::MultiComparison:
            for (const auto& part : split(get("teams"), ',')) {
                q.teams.push_back(std::stoll(part));
            }
            q.gameweek = std::stoi(get("gameweek"));
            break;
        case Family::PairwiseComparison:
            q.pairwise_aspect = get("aspect") == "detail" ? PairwiseAspect::Detail
                                                          : PairwiseAspect::MatchBetter;
            q.team = std::stoll(get("team"));
            q.team_b = std::stoll(get("team_b"));
            q.gameweek = std::stoi(get("gameweek"));
            break;
        case Family::CumulativeAverage:
            q.metric = get("metric") == "points" ? AverageMetric::Points
                                                 : AverageMetric::Goals;
            q.team = std::stoll(get("team"));
            q.gameweek = std::stoi(get("gameweek"));
            break;
        case Family::EventDecomposition: {
            q.event_aspect = get("aspect") == "season" ? EventAspect::Season
                                                        : EventAspect::Single;
            q.team = std::stoll(get("team"));
            auto et = event_type_from_string(get("event"));
            if (!et) throw DomainError("unknown event '" + get("event") + "'");
            q.event_type = *et;
            if (q.event_aspect == EventAspect::Single) {
                q.gameweek = std::stoi(get("gameweek"));
            } else {
                q.gw_start = std::stoi(get("gw_start"));
                q.gw_end = std::stoi(get("gw_end"));
            }
            break;
        }
        case Family::SeasonRanking: {
            q.team = std::stoll(get("team"));
            auto et = event_type_from_string(get("event"));
            if (!et) throw DomainError("unknown event '" + get("event") + "'");
            q.event_type = *et;
            break;
        }
        case Family::SelfAwareness:
            q.self_q = std::stoi(get("q"));
            break;
    }
    return q;
}

struct CurationConfig {
    std::uint64_t seed = 1;
    int max_tokens = 512;
    int variants_per_template = 2;
    std::set<std::string> families_enabled = [] {
        std::set<std::string> all;
        for (Family f : all_families()) all.insert(std::string(family_key(f)));
        return all;
    }();
    std::string league_name = "Italy";
    std::string season_label = "2017/2018";
};

struct QAPair {
    std::string question;  // starts with "Question : footgpt, "
    std::string answer;    // starts with "Answer : "
    std::string template_id;
    std::map<std::string, std::string> params;
    enum class Provenance { Template, Teacher } provenance = Provenance::Template;

    std::string line() const { return question + " " + answer; }
};

// One checkable fact of a canonical answer. decimals selects the grading
// tolerance: 0 exact, 1 within 0.05, 2 within 0.005.
struct NumericFact {
    std::string name;
    double expected = 0.0;
    int decimals = 0;
};

struct EntityFact {
    std::string name;
    std::string text;  // matched as normalized substring
};

struct GoldFacts {
    std::vector<NumericFact> numeric;
    std::vector<EntityFact> entities;

    std::size_t total() const { return numeric.size() + entities.size(); }
};

namespace detail {

inline std::string league_adjective(const std::string& league) {
    return normalize_text(league) == "italy" ? "Italian" : league;
}

inline std::string number_word(int n) {
    static const char* words[] = {"zero", "one", "two",   "three", "four",
                                  "five", "six", "seven", "eight", "nine",
                                  "ten",  "eleven", "twelve"};
    if (n >= 0 && n <= 12) return words[n];
    return std::to_string(n);
}

// Outcome wordings shared by every variant of a family so the fragment can be
// graded as an entity fact independent of the chosen phrasing.
inline std::string full_outcome_clause(const std::string& team, int my_goals,
                                       const std::string& opp, int their_goals) {
    if (my_goals > their_goals) return team + " prevailed against " + opp + ".";
    if (my_goals < their_goals) return team + " ended up losing to " + opp + ".";
    return team + " played out a draw with " + opp + ".";
}

inline std::string full_outcome_fragment(int my_goals, int their_goals) {
    if (my_goals > their_goals) return "prevailed against";
    if (my_goals < their_goals) return "ended up losing to";
    return "played out a draw with";
}

inline std::string result_outcome_clause(const std::string& team, int my_goals,
                                         const std::string& opp, int their_goals) {
    if (my_goals > their_goals) return team + " got the better of " + opp;
    if (my_goals < their_goals) {
        return team + " couldn't hold their ground against " + opp;
    }
    return team + " shared the points with " + opp;
}

inline std::string result_outcome_fragment(int my_goals, int their_goals) {
    if (my_goals > their_goals) return "got the better of";
    if (my_goals < their_goals) return "couldn't hold their ground";
    return "shared the points";
}

inline std::string join_teams(const Tables& t, const std::vector<Id>& ids,
                              const std::string& sep) {
    std::string out;
    for (Id id : ids) {
        if (!out.empty()) out += sep;
        out += t.team_name(id);
    }
    return out;
}

inline std::string decomposition_text(const Tables& t, const Decomposition& d) {
    std::string out;
    for (const auto& share : d.top5) {
        if (!out.empty()) out += "; ";
        out += std::to_string(share.pct) + "% in " + region_tag(share.region);
    }
    return out;
}

struct WeeklyContext {
    const TeamWeekRow* row = nullptr;
    std::string team;
    std::string opp;
    int rank = 0;
    long long points = 0;
    int n_teams = 0;
};

inline WeeklyContext weekly_context(const Tables& t, const QueryParams& q) {
    WeeklyContext c;
    c.row = &team_week_lookup(t, q.team, q.gameweek);
    c.team = t.team_name(q.team);
    c.opp = t.team_name(c.row->opposing_team_id);
    const auto table = standings(t, q.gameweek);
    c.rank = standings_row(table, q.team).rank;
    c.points = standings_row(table, q.team).points_cum;
    c.n_teams = static_cast<int>(table.size());
    return c;
}

inline int opponent_goals(const Tables& t, const TeamWeekRow& row) {
    return team_week_lookup(t, row.opposing_team_id, row.gameweek).goals_scored;
}

}  // namespace detail

inline int variant_count(const QueryParams& q) {
    return q.family == Family::SelfAwareness ? 1 : 3;
}

inline std::string template_id_of(const QueryParams& q) {
    std::string id(family_key(q.family));
    switch (q.family) {
        case Family::WeeklyStanding:
            id += "/" + std::string(to_string(q.weekly_aspect));
            break;
        case Family::PairwiseComparison:
            id += "/" + std::string(to_string(q.pairwise_aspect));
            break;
        case Family::CumulativeAverage:
            id += "/" + std::string(to_string(q.metric));
            break;
        case Family::EventDecomposition:
            id += "/" + std::string(to_string(q.event_aspect));
            break;
        case Family::SelfAwareness:
            id += "/" + std::to_string(q.self_q);
            break;
        default:
            break;
    }
    return id;
}

inline std::string render_question(const Tables& t, const CurationConfig& cfg,
                                   const QueryParams& q, int slot) {
    const std::string& lg = cfg.league_name;
    const std::string adj = detail::league_adjective(lg);
    std::string body;
    switch (q.family) {
        case Family::WeeklyStanding: {
            const std::string team = t.team_name(q.team);
            const std::string gw = std::to_string(q.gameweek);
            switch (q.weekly_aspect) {
                case WeeklyAspect::Full:
                    body = slot == 0 ? "where is team " + team + " placed of " + lg +
                                           " in gameweek " + gw + "?"
                           : slot == 1
                               ? "I'd like to know the current position of team " +
                                     team + " in " + lg + " for gameweek " + gw + "."
                               : "can you give the full picture for team " + team +
                                     " in " + lg + " on gameweek " + gw + "?";
                    break;
                case WeeklyAspect::Standing:
                    body = slot == 0 ? "how's team " + team + " doing in the " + lg +
                                           " during gameweek " + gw + "?"
                           : slot == 1 ? "what's the current standing of team " +
                                             team + " in " + lg + " as of gameweek " +
                                             gw + "?"
                                       : "where does team " + team + " stand in " +
                                             lg + " after gameweek " + gw + "?";
                    break;
                case WeeklyAspect::Goals:
                    body = slot == 0 ? "what was " + team + "'s goal count on gameweek " +
                                           gw + " ?"
                           : slot == 1 ? "how many goals did team " + team +
                                             " score on gameweek " + gw + " ?"
                                       : "could you tell me the goal tally of team " +
                                             team + " for gameweek " + gw + " ?";
                    break;
                case WeeklyAspect::Result:
                    body = slot == 0 ? "what was the match result of " + team +
                                           " played on gameweek " + gw + "?"
                           : slot == 1 ? "how did the match of team " + team +
                                             " end on gameweek " + gw + "?"
                                       : "what happened in team " + team +
                                             "'s fixture of gameweek " + gw + "?";
                    break;
            }
            break;
        }
        case Family::Progression: {
            const std::string team = t.team_name(q.team);
            const std::string a = std::to_string(q.gw_start);
            const std::string b = std::to_string(q.gw_end);
            body = slot == 0 ? "from the duration of gameweek " + a + " to " + b +
                                   ", did team " + team + " elevate their game?"
                   : slot == 1 ? "during the interval from gameweek " + a + " to " +
                                     b + ", has team " + team + " stepped up?"
                               : "looking at gameweeks " + a + " to " + b +
                                     ", can you tell if team " + team +
                                     " moved forward?";
            break;
        }
        case Family::MultiComparison: {
            const std::string list = detail::join_teams(t, q.teams, ", ");
            const std::string gw = std::to_string(q.gameweek);
            body = slot == 0 ? "based on the matches of the " + adj +
                                   " league until gameweek " + gw +
                                   ", could you evaluate the rankings of " + list
                   : slot == 1 ? "in the " + adj + " league through gameweek " + gw +
                                     ", how do the rankings of " + list + " compare?"
                               : "up to gameweek " + gw + " of the " + adj +
                                     " league, how would you order " + list + "?";
            break;
        }
        case Family::PairwiseComparison: {
            const std::string a = t.team_name(q.team);
            const std::string b = t.team_name(q.team_b);
            const std::string gw = std::to_string(q.gameweek);
            if (q.pairwise_aspect == PairwiseAspect::Detail) {
                body = slot == 0 ? "on gameweek " + gw + " in league " + lg +
                                       ", can you compare the performances team " +
                                       a + " and team " + b + " ?"
                       : slot == 1 ? "how do team " + a + " and team " + b +
                                         " stack up on gameweek " + gw +
                                         " in league " + lg + " ?"
                                   : "could you weigh up team " + a +
                                         " against team " + b + " for gameweek " +
                                         gw + " in league " + lg + " ?";
            } else {
                body = slot == 0 ? "for the match on gameweek " + gw + " between " +
                                       a + " and " + b + " in " + lg +
                                       " league. Which team was better?"
                       : slot == 1 ? "between " + a + " and " + b +
                                         ", who came out on top in their gameweek " +
                                         gw + " meeting in " + lg + " league ?"
                                   : "who won the duel between " + a + " and " + b +
                                         " on gameweek " + gw + " in " + lg +
                                         " league ?";
            }
            break;
        }
        case Family::CumulativeAverage: {
            const std::string team = t.team_name(q.team);
            const std::string gw = std::to_string(q.gameweek);
            const bool goals = q.metric == AverageMetric::Goals;
            body = slot == 0
                       ? "till gameweek " + gw + " in league " + lg +
                             ", on average team " + team +
                             (goals ? " how many goals scored ?"
                                    : " how many points collected ?")
                   : slot == 1
                       ? "through gameweek " + gw + " in league " + lg +
                             ", what is the average " +
                             (goals ? "goals scored" : "points collected") +
                             " by team " + team + " ?"
                       : "up to gameweek " + gw + " in league " + lg + ", team " +
                             team + " averaged how many " +
                             (goals ? "goals" : "points") + " ?";
            break;
        }
        case Family::EventDecomposition: {
            const std::string team = t.team_name(q.team);
            const std::string ev(to_string(q.event_type));
            if (q.event_aspect == EventAspect::Single) {
                const std::string gw = std::to_string(q.gameweek);
                body = slot == 0 ? "considering gameweek " + gw + " in " + lg +
                                       ", could you provide the number of " + ev +
                                       " team " + team +
                                       " had and their locations on the field?"
                       : slot == 1 ? "on gameweek " + gw + " of " + lg +
                                         ", can you quantify the " + ev +
                                         " involving team " + team +
                                         " and give a pitch-wise breakdown?"
                                   : "on gameweek " + gw + " in league " + lg +
                                         ", how many times encounter " + ev +
                                         " did team " + team +
                                         "  and how are these events spread "
                                         "regionally on the field?";
            } else {
                const std::string a = std::to_string(q.gw_start);
                const std::string b = std::to_string(q.gw_end);
                body = slot == 0 ? "from gameweek " + a + " to " + b +
                                       ", could you tell the instances of " + ev +
                                       " per match for team " + team +
                                       " and their geographical distribution on "
                                       "the pitch?"
                       : slot == 1 ? "across gameweeks " + a + " to " + b +
                                         ", how many " + ev +
                                         " per match did team " + team +
                                         " record and where on the pitch did they "
                                         "happen?"
                                   : "over the stretch of gameweek " + a + " to " +
                                         b + ", what is team " + team +
                                         "'s per-match count of " + ev +
                                         " and its regional spread?";
            }
            break;
        }
        case Family::SeasonRanking: {
            const std::string team = t.team_name(q.team);
            const std::string ev(to_string(q.event_type));
            const std::string tail = " made per match at the end in league " + lg +
                                     " on season " + cfg.season_label + " ?";
            body = slot == 0 ? "what is the performance ranking of team " + team +
                                   " in terms of " + ev + tail
                   : slot == 1 ? "where does team " + team + " rank in terms of " +
                                     ev + tail
                               : "how does team " + team + " place for " + ev + tail;
            break;
        }
        case Family::SelfAwareness:
            body = q.self_q == 0   ? "What is footgpt ?"
                   : q.self_q == 1 ? "How many teams in total are in your dataset?"
                                   : "can footgpt give answers related to "
                                     "individual players?";
            break;
    }
    return "Question : footgpt, " + body;
}

inline std::string render_answer(const Tables& t, const CurationConfig& cfg,
                                 const QueryParams& q, int slot) {
    const std::string& lg = cfg.league_name;
    std::string body;
    switch (q.family) {
        case Family::WeeklyStanding: {
            const auto c = detail::weekly_context(t, q);
            const std::string gw = std::to_string(q.gameweek);
            const int opp_goals = detail::opponent_goals(t, *c.row);
            const std::string side(to_string(c.row->side));
            switch (q.weekly_aspect) {
                case WeeklyAspect::Full: {
                    const std::string clause = detail::full_outcome_clause(
                        c.team, c.row->goals_scored, c.opp, opp_goals);
                    if (slot == 1) {
                        body = "During gameweek " + gw + " in the " + lg + ", " +
                               c.team + " went head-to-head with " + c.opp + " at " +
                               side + ". The outcome was " + clause +
                               ". Up to this gameweek, " + c.team +
                               " has amassed " + std::to_string(c.points) +
                               " points, standing " + std::to_string(c.rank) +
                               " among " + std::to_string(c.n_teams) + " teams. " +
                               c.team + " managed to score " +
                               std::to_string(c.row->goals_scored) +
                               " goals against " + c.opp + ".";
                    } else {
                        const std::string opening =
                            slot == 0 ? "In gameweek " + gw + " of league " + lg +
                                            ", " + c.team + " faced off against " +
                                            c.opp + " on the " + side + " side"
                                      : "On gameweek " + gw + " of league " + lg +
                                            ", " + c.team + " met " + c.opp +
                                            " as the " + side + " team";
                        body = opening + ". The result was " + clause +
                               ". Till this gameweek, " + c.team + " accumulated " +
                               std::to_string(c.points) + " points, placing them " +
                               std::to_string(c.rank) + " out of " +
                               std::to_string(c.n_teams) + " teams. In the match, " +
                               c.team + " netted " +
                               std::to_string(c.row->goals_scored) +
                               " times against " + c.opp + ".";
                    }
                    break;
                }
                case WeeklyAspect::Standing:
                    body = slot == 0 ? "Up to this game, " + c.team + " sits with " +
                                           std::to_string(c.points) +
                                           " points and is at position " +
                                           std::to_string(c.rank) + " out of " +
                                           std::to_string(c.n_teams) + " teams."
                           : slot == 1 ? c.team + " Having collected " +
                                             std::to_string(c.points) +
                                             " points by this gameweek, holds the " +
                                             std::to_string(c.rank) +
                                             " rank among " +
                                             std::to_string(c.n_teams) + " teams"
                                       : "After this gameweek, " + c.team +
                                             " holds " + std::to_string(c.points) +
                                             " points and occupies position " +
                                             std::to_string(c.rank) + " out of " +
                                             std::to_string(c.n_teams) + " teams.";
                    break;
                case WeeklyAspect::Goals: {
                    const std::string g = std::to_string(c.row->goals_scored);
                    body = slot == 0 ? c.team + " netted " + g +
                                           " times during gameweek " + gw +
                                           " when playing " + c.opp + "."
                           : slot == 1 ? c.team + " scored " + g +
                                             " goals during gameweek " + gw +
                                             " against " + c.opp + "."
                                       : "Playing " + c.opp + " on gameweek " + gw +
                                             ", " + c.team + " found the net " + g +
                                             " times.";
                    break;
                }
                case WeeklyAspect::Result: {
                    const std::string clause = detail::result_outcome_clause(
                        c.team, c.row->goals_scored, c.opp, opp_goals);
                    body = slot == 0 ? clause + ". on gameweek " + gw + " in " + lg +
                                           " league."
                           : slot == 1 ? "On gameweek " + gw + " in " + lg +
                                             " league, " + clause + "."
                                       : "The fixture of gameweek " + gw + " in " +
                                             lg + " league saw " + clause + ".";
                    break;
                }
            }
            break;
        }
        case Family::Progression: {
            const std::string team = t.team_name(q.team);
            const auto p = progression(t, q.team, q.gw_start, q.gw_end);
            const std::string a = std::to_string(q.gw_start);
            const std::string b = std::to_string(q.gw_end);
            const std::string ra = std::to_string(p.rank_start);
            const std::string rb = std::to_string(p.rank_end);
            if (slot == 0) {
                const std::string verdict =
                    p.verdict == ProgressionVerdict::Improvement
                        ? "Clearly, an improvement."
                    : p.verdict == ProgressionVerdict::StepBackwards
                        ? "This is a step backwards."
                        : "No change in the standings.";
                body = "Team " + team + " held the " + ordinal(p.rank_start) +
                       " position on gameweek " + a + ". Moving to gameweek " + b +
                       ", it now stands at rank " + rb + ". " + verdict;
            } else if (slot == 1) {
                const std::string move =
                    p.verdict == ProgressionVerdict::Improvement
                        ? "it climbed to rank " + rb + ". An evident progression."
                    : p.verdict == ProgressionVerdict::StepBackwards
                        ? "it dropped to rank " + rb + ". An evident step backwards."
                        : "it stayed at rank " + rb + ". No evident change.";
                body = "Team " + team + " was positioned at rank " + ra +
                       " during gameweek " + a + ". By the time we reached gameweek " +
                       b + ", " + move;
            } else {
                const std::string verdict =
                    p.verdict == ProgressionVerdict::Improvement
                        ? "This is an improvement."
                    : p.verdict == ProgressionVerdict::StepBackwards
                        ? "This is a step backwards."
                        : "This is no change.";
                body = "team " + team + "'s position was " + ra + " For gameweek " +
                       a + ". Jumping to gameweek " + b + ", its rank changed to " +
                       rb + ". " + verdict;
            }
            break;
        }
        case Family::MultiComparison: {
            const auto ordered = compare_teams(t, q.teams, q.gameweek);
            std::vector<Id> ids;
            for (const auto& r : ordered) ids.push_back(r.team_id);
            const std::string sep = slot == 0   ? " is better than "
                                    : slot == 1 ? " > "
                                                : " is ahead of ";
            body = "on gameweek " + std::to_string(q.gameweek) + " in " +
                   to_lower(lg) + " : " + detail::join_teams(t, ids, sep);
            break;
        }
        case Family::PairwiseComparison: {
            const std::string gw = std::to_string(q.gameweek);
            if (q.pairwise_aspect == PairwiseAspect::Detail) {
                const auto ordered = compare_teams(t, {q.team, q.team_b}, q.gameweek);
                const auto& best = ordered[0];
                const auto& rest = ordered[1];
                const std::string a = t.team_name(best.team_id);
                const std::string b = t.team_name(rest.team_id);
                const std::string ga = std::to_string(best.goals_cum);
                const std::string gb = std::to_string(rest.goals_cum);
                const std::string goals_clause =
                    best.goals_cum > rest.goals_cum
                        ? a + " scored " + ga + " goals, more (better) than " + b +
                              " which scored " + gb
                    : best.goals_cum < rest.goals_cum
                        ? a + " scored " + ga + " goals, less (yet better by points) than " +
                              b + " which scored " + gb
                        : a + " scored " + ga + " goals, same as " + b +
                              " which scored " + gb;
                body = "on gameweek " + gw + " in league " + lg + ", team " + a +
                       " ranks " + std::to_string(best.rank) +
                       " in points and team " + b + " ranks " +
                       std::to_string(rest.rank) + ". So, " + a +
                       " is better compared to " + b + ". " + goals_clause;
            } else {
                const auto& row_a = team_week_lookup(t, q.team, q.gameweek);
                const auto& row_b = team_week_lookup(t, q.team_b, q.gameweek);
                if (row_a.opposing_team_id != q.team_b || row_a.points == 1) {
                    throw DomainError("no decisive head-to-head between " +
                                      std::to_string(q.team) + " and " +
                                      std::to_string(q.team_b) + " in gameweek " +
                                      std::to_string(q.gameweek));
                }
                const Id winner = row_a.points == 3 ? q.team : q.team_b;
                (void)row_b;
                const std::string w = t.team_name(winner);
                body = slot == 0 ? w + " was better for this gameweek."
                       : slot == 1 ? w + " was the better side for this gameweek."
                                   : "It was " + w +
                                         " who was better for this gameweek.";
            }
            break;
        }
        case Family::CumulativeAverage: {
            const std::string team = t.team_name(q.team);
            const auto avg = cumulative_average(t, q.team, q.gameweek, q.metric);
            const std::string gw = std::to_string(q.gameweek);
            const bool goals = q.metric == AverageMetric::Goals;
            const std::string metric_clause =
                goals ? " scored " + avg.value_text() + " goals on average : "
                       : " has collected " + avg.value_text() +
                             " points on average : ";
            const std::string opening = slot == 0   ? "till gameweek "
                                        : slot == 1 ? "through gameweek "
                                                    : "up to gameweek ";
            if (slot == 2) {
                body = opening + gw + " in league " + lg + ", team " + team +
                       " averaged " + avg.value_text() +
                       (goals ? " goals scored : " : " points collected : ") +
                       avg.arithmetic_string();
            } else {
                body = opening + gw + " in league " + lg + ", team " + team +
                       metric_clause + avg.arithmetic_string();
            }
            break;
        }
        case Family::EventDecomposition: {
            const std::string team = t.team_name(q.team);
            const std::string ev(to_string(q.event_type));
            if (q.event_aspect == EventAspect::Single) {
                const auto d = event_decomposition(t, q.team, q.gameweek, q.gameweek,
                                                   q.event_type, false);
                body = "team " + team + " on gameweek " + std::to_string(q.gameweek) +
                       " did " + std::to_string(d.total_count) + " " + ev +
                       "(s) / regional decomposition : " +
                       detail::decomposition_text(t, d);
            } else {
                const auto d = event_decomposition(t, q.team, q.gw_start, q.gw_end,
                                                   q.event_type, true);
                body = "team " + team + " from gameweek " +
                       std::to_string(q.gw_start) + " to " +
                       std::to_string(q.gw_end) + "  did " +
                       std::to_string(d.total_count) + " " + ev +
                       "(s) per match / regional decomposition : " +
                       detail::decomposition_text(t, d);
            }
            break;
        }
        case Family::SeasonRanking: {
            const std::string team = t.team_name(q.team);
            const std::string ev(to_string(q.event_type));
            const auto rows = season_event_ranking(t, q.event_type);
            const auto& row = season_rank_row(rows, q.team);
            body = "Team " + team + " ranks " + std::to_string(row.rank) +
                   " out of " + std::to_string(rows.size()) +
                   " teams in terms of " + ev +
                   " made per match at the end in league " + lg + " on season " +
                   cfg.season_label + "  (average count : " + row.avg_text() + ").";
            break;
        }
        case Family::SelfAwareness: {
            const std::string gw_count = std::to_string(t.max_gameweek);
            const std::string adj_lower = to_lower(detail::league_adjective(lg));
            if (q.self_q == 0) {
                body = "footgpt is the name of the system which is trained with the "
                       "data, statistics of the football matches (games) played for "
                       "first " + gw_count + " gameweeks of " + adj_lower +
                       " league. Users can ask you questions about stats and "
                       "performances of teams in these leagues on season " +
                       cfg.season_label + " and get answers.";
            } else if (q.self_q == 1) {
                body = "I have data on all teams that participated in league " +
                       to_lower(lg) + " during the first " +
                       detail::number_word(t.max_gameweek) + " gameweeks of " +
                       cfg.season_label + " season.";
            } else {
                body = "No, footgpt can only give answers related to performances "
                       "of teams in " + lg + " league (first " + gw_count +
                       " gameweeks) on season " + cfg.season_label + ".";
            }
            break;
        }
    }
    return "Answer : " + body;
}

// Facts shared by every phrasing variant of the family, used for grading.
inline GoldFacts compute_facts(const Tables& t, const CurationConfig& cfg,
                               const QueryParams& q) {
    GoldFacts f;
    auto num = [&](const char* name, double v, int decimals = 0) {
        f.numeric.push_back({name, v, decimals});
    };
    auto ent = [&](const char* name, std::string text) {
        f.entities.push_back({name, std::move(text)});
    };
    switch (q.family) {
        case Family::WeeklyStanding: {
            const auto c = detail::weekly_context(t, q);
            const int opp_goals = detail::opponent_goals(t, *c.row);
            switch (q.weekly_aspect) {
                case WeeklyAspect::Full:
                    num("gameweek", q.gameweek);
                    num("points", static_cast<double>(c.points));
                    num("rank", c.rank);
                    num("goals", c.row->goals_scored);
                    ent("team", c.team);
                    ent("opponent", c.opp);
                    ent("outcome", detail::full_outcome_fragment(
                                       c.row->goals_scored, opp_goals));
                    break;
                case WeeklyAspect::Standing:
                    num("points", static_cast<double>(c.points));
                    num("rank", c.rank);
                    ent("team", c.team);
                    break;
                case WeeklyAspect::Goals:
                    num("gameweek", q.gameweek);
                    num("goals", c.row->goals_scored);
                    ent("team", c.team);
                    ent("opponent", c.opp);
                    break;
                case WeeklyAspect::Result:
                    num("gameweek", q.gameweek);
                    ent("team", c.team);
                    ent("opponent", c.opp);
                    ent("outcome", detail::result_outcome_fragment(
                                       c.row->goals_scored, opp_goals));
                    break;
            }
            break;
        }
        case Family::Progression: {
            const auto p = progression(t, q.team, q.gw_start, q.gw_end);
            num("rank_start", p.rank_start);
            num("rank_end", p.rank_end);
            num("gw_start", q.gw_start);
            num("gw_end", q.gw_end);
            ent("team", t.team_name(q.team));
            break;
        }
        case Family::MultiComparison: {
            num("gameweek", q.gameweek);
            for (Id id : q.teams) ent("team", t.team_name(id));
            break;
        }
        case Family::PairwiseComparison: {
            if (q.pairwise_aspect == PairwiseAspect::Detail) {
                const auto ordered = compare_teams(t, {q.team, q.team_b}, q.gameweek);
                num("gameweek", q.gameweek);
                num("rank_better", ordered[0].rank);
                num("rank_worse", ordered[1].rank);
                num("goals_better", static_cast<double>(ordered[0].goals_cum));
                num("goals_worse", static_cast<double>(ordered[1].goals_cum));
                ent("team", t.team_name(ordered[0].team_id));
                ent("team", t.team_name(ordered[1].team_id));
            } else {
                const auto& row_a = team_week_lookup(t, q.team, q.gameweek);
                if (row_a.opposing_team_id != q.team_b || row_a.points == 1) {
                    throw DomainError("no decisive head-to-head for match_better");
                }
                const Id winner = row_a.points == 3 ? q.team : q.team_b;
                ent("winner", t.team_name(winner));
            }
            break;
        }
        case Family::CumulativeAverage: {
            const auto avg = cumulative_average(t, q.team, q.gameweek, q.metric);
            num("numerator", static_cast<double>(avg.numerator));
            num("denominator", avg.denominator);
            num("average", avg.value_tenths / 10.0, 1);
            ent("team", t.team_name(q.team));
            break;
        }
        case Family::EventDecomposition: {
            const bool single = q.event_aspect == EventAspect::Single;
            const int lo = single ? q.gameweek : q.gw_start;
            const int hi = single ? q.gameweek : q.gw_end;
            const auto d = event_decomposition(t, q.team, lo, hi, q.event_type,
                                               !single);
            if (single) {
                num("gameweek", q.gameweek);
            } else {
                num("gw_start", q.gw_start);
                num("gw_end", q.gw_end);
            }
            num("total", static_cast<double>(d.total_count));
            for (const auto& share : d.top5) {
                num("share", share.pct);
                ent("region", region_tag(share.region));
            }
            ent("team", t.team_name(q.team));
            ent("event", std::string(to_string(q.event_type)));
            break;
        }
        case Family::SeasonRanking: {
            const auto rows = season_event_ranking(t, q.event_type);
            const auto& row = season_rank_row(rows, q.team);
            num("rank", row.rank);
            num("average", row.avg_hundredths / 100.0, 2);
            ent("team", t.team_name(q.team));
            ent("event", std::string(to_string(q.event_type)));
            break;
        }
        case Family::SelfAwareness: {
            if (q.self_q == 0) {
                num("gameweeks", t.max_gameweek);
                ent("name", "footgpt");
                ent("season", cfg.season_label);
            } else if (q.self_q == 1) {
                ent("league", to_lower(cfg.league_name));
                ent("season", cfg.season_label);
            } else {
                num("gameweeks", t.max_gameweek);
                ent("name", "footgpt");
                ent("league", cfg.league_name);
                ent("season", cfg.season_label);
            }
            break;
        }
    }
    return f;
}

inline QAPair render_pair(const Tables& t, const CurationConfig& cfg,
                          const QueryParams& q, int slot) {
    QAPair pair;
    pair.question = render_question(t, cfg, q, slot);
    pair.answer = render_answer(t, cfg, q, slot);
    pair.template_id = template_id_of(q);
    pair.params = to_params(q);
    pair.provenance = QAPair::Provenance::Template;
    return pair;
}

// All parameter combinations a family expands to on this dataset. Content
// depends only on the tables, never on the corpus shuffle seed.
inline std::vector<QueryParams> enumerate_family(const Tables& t,
                                                 const CurationConfig& cfg,
                                                 Family family) {
    std::vector<QueryParams> out;
    if (!cfg.families_enabled.count(std::string(family_key(family)))) return out;
    const int max_gw = t.max_gameweek;
    switch (family) {
        case Family::WeeklyStanding:
            for (const auto& team : t.teams_info) {
                for (int gw = 1; gw <= max_gw; ++gw) {
                    if (!t.team_week_index.count({team.team_id, gw})) continue;
                    for (WeeklyAspect aspect :
                         {WeeklyAspect::Full, WeeklyAspect::Standing,
                          WeeklyAspect::Goals, WeeklyAspect::Result}) {
                        QueryParams q;
                        q.family = family;
                        q.team = team.team_id;
                        q.gameweek = gw;
                        q.weekly_aspect = aspect;
                        out.push_back(q);
                    }
                }
            }
            break;
        case Family::Progression:
            for (const auto& team : t.teams_info) {
                for (int a = 1; a <= max_gw; ++a) {
                    for (int b = a + 2; b <= std::min(max_gw, a + 6); ++b) {
                        QueryParams q;
                        q.family = family;
                        q.team = team.team_id;
                        q.gw_start = a;
                        q.gw_end = b;
                        out.push_back(q);
                    }
                }
            }
            break;
        case Family::MultiComparison: {
            const std::size_t group = 4;
            if (t.teams_info.size() < group) break;
            for (int gw = 1; gw <= max_gw; ++gw) {
                std::vector<Id> ids;
                for (const auto& team : t.teams_info) ids.push_back(team.team_id);
                SplitMix64 rng(fnv1a64("multi_comparison_groups") ^
                               static_cast<std::uint64_t>(gw));
                rng.shuffle(ids);
                const std::size_t n_groups =
                    std::min<std::size_t>(3, ids.size() / group);
                for (std::size_t g = 0; g < n_groups; ++g) {
                    QueryParams q;
                    q.family = family;
                    q.gameweek = gw;
                    q.teams.assign(ids.begin() + g * group,
                                   ids.begin() + (g + 1) * group);
                    out.push_back(q);
                }
            }
            break;
        }
        case Family::PairwiseComparison: {
            for (int gw = 1; gw <= max_gw; ++gw) {
                for (std::size_t i = 0; i < t.teams_info.size(); ++i) {
                    for (std::size_t j = i + 1; j < t.teams_info.size(); ++j) {
                        const Id a = t.teams_info[i].team_id;
                        const Id b = t.teams_info[j].team_id;
                        if (!t.team_week_index.count({a, gw}) ||
                            !t.team_week_index.count({b, gw})) {
                            continue;
                        }
                        QueryParams q;
                        q.family = family;
                        q.pairwise_aspect = PairwiseAspect::Detail;
                        q.team = a;
                        q.team_b = b;
                        q.gameweek = gw;
                        out.push_back(q);
                    }
                }
            }
            for (const auto& row : t.team_week) {
                if (row.side != Side::Home || row.points == 1) continue;
                QueryParams q;
                q.family = family;
                q.pairwise_aspect = PairwiseAspect::MatchBetter;
                q.team = row.team_id;
                q.team_b = row.opposing_team_id;
                q.gameweek = row.gameweek;
                out.push_back(q);
            }
            break;
        }
        case Family::CumulativeAverage:
            for (const auto& team : t.teams_info) {
                for (int gw = 1; gw <= max_gw; ++gw) {
                    if (!t.team_week_index.count({team.team_id, gw})) continue;
                    for (AverageMetric m :
                         {AverageMetric::Goals, AverageMetric::Points}) {
                        QueryParams q;
                        q.family = family;
                        q.team = team.team_id;
                        q.gameweek = gw;
                        q.metric = m;
                        out.push_back(q);
                    }
                }
            }
            break;
        case Family::EventDecomposition: {
            for (const auto& team : t.teams_info) {
                for (EventType et : all_event_types()) {
                    for (int gw = 1; gw <= max_gw; ++gw) {
                        const auto d =
                            event_decomposition(t, team.team_id, gw, gw, et, false);
                        if (d.total_count == 0) continue;
                        QueryParams q;
                        q.family = family;
                        q.event_aspect = EventAspect::Single;
                        q.team = team.team_id;
                        q.gameweek = gw;
                        q.event_type = et;
                        out.push_back(q);
                    }
                    const auto season =
                        event_decomposition(t, team.team_id, 1, max_gw, et, false);
                    if (season.total_count == 0) continue;
                    QueryParams q;
                    q.family = family;
                    q.event_aspect = EventAspect::Season;
                    q.team = team.team_id;
                    q.gw_start = 1;
                    q.gw_end = max_gw;
                    q.event_type = et;
                    out.push_back(q);
                }
            }
            break;
        }
        case Family::SeasonRanking:
            for (const auto& team : t.teams_info) {
                for (EventType et : all_event_types()) {
                    QueryParams q;
                    q.family = family;
                    q.team = team.team_id;
                    q.event_type = et;
                    out.push_back(q);
                }
            }
            break;
        case Family::SelfAwareness:
            for (int i = 0; i < 3; ++i) {
                QueryParams q;
                q.family = family;
                q.self_q = i;
                out.push_back(q);
            }
            break;
    }
    return out;
}

inline std::string params_signature(const std::map<std::string, std::string>& p) {
    std::string sig;
    for (const auto& [k, v] : p) {
        sig += k;
        sig += '=';
        sig += v;
        sig += ';';
    }
    return sig;
}

}  // namespace footgpt
