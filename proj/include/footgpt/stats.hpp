#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "footgpt/errors.hpp"
#include "footgpt/tables.hpp"
#include "footgpt/util.hpp"

namespace footgpt {

struct StandingsRow {
    Id team_id = 0;
    int rank = 0;
    long long points_cum = 0;
    long long goals_cum = 0;
    int gameweek = 0;
};

// League table after (inclusive=true) or before (inclusive=false) the given
// gameweek. Ordering: points desc, cumulative goals desc, team name asc; ranks
// run 1..N in that order.
inline std::vector<StandingsRow> standings(const Tables& tables, int gameweek,
                                           bool inclusive = true) {
    if (gameweek < 1 || gameweek > tables.max_gameweek) {
        throw DomainError("gameweek " + std::to_string(gameweek) +
                          " outside 1.." + std::to_string(tables.max_gameweek));
    }
    const int last = inclusive ? gameweek : gameweek - 1;
    std::vector<StandingsRow> rows;
    rows.reserve(tables.teams_info.size());
    for (const auto& team : tables.teams_info) {
        StandingsRow r;
        r.team_id = team.team_id;
        r.gameweek = gameweek;
        rows.push_back(r);
    }
    for (const auto& w : tables.team_week) {
        if (w.gameweek > last) continue;
        for (auto& r : rows) {
            if (r.team_id == w.team_id) {
                r.points_cum += w.points;
                r.goals_cum += w.goals_scored;
                break;
            }
        }
    }
    std::sort(rows.begin(), rows.end(),
              [&](const StandingsRow& a, const StandingsRow& b) {
                  if (a.points_cum != b.points_cum) return a.points_cum > b.points_cum;
                  if (a.goals_cum != b.goals_cum) return a.goals_cum > b.goals_cum;
                  return tables.team_name(a.team_id) < tables.team_name(b.team_id);
              });
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = static_cast<int>(i + 1);
    return rows;
}

inline const StandingsRow& standings_row(const std::vector<StandingsRow>& table,
                                         Id team_id) {
    for (const auto& r : table) {
        if (r.team_id == team_id) return r;
    }
    throw NotFoundError("team " + std::to_string(team_id) + " not in standings");
}

enum class ProgressionVerdict { Improvement, StepBackwards, Unchanged };

inline std::string_view to_string(ProgressionVerdict v) {
    switch (v) {
        case ProgressionVerdict::Improvement: return "improvement";
        case ProgressionVerdict::StepBackwards: return "step backwards";
        case ProgressionVerdict::Unchanged: return "unchanged";
    }
    return "unchanged";
}

struct Progression {
    int rank_start = 0;
    int rank_end = 0;
    ProgressionVerdict verdict = ProgressionVerdict::Unchanged;
};

inline Progression progression(const Tables& tables, Id team_id, int gw_start,
                               int gw_end) {
    if (gw_start >= gw_end) {
        throw DomainError("progression needs gw_start < gw_end, got " +
                          std::to_string(gw_start) + ".." + std::to_string(gw_end));
    }
    Progression p;
    p.rank_start = standings_row(standings(tables, gw_start), team_id).rank;
    p.rank_end = standings_row(standings(tables, gw_end), team_id).rank;
    p.verdict = p.rank_end < p.rank_start  ? ProgressionVerdict::Improvement
                : p.rank_end > p.rank_start ? ProgressionVerdict::StepBackwards
                                            : ProgressionVerdict::Unchanged;
    return p;
}

// Teams ordered best-first by their standings rank at the gameweek.
inline std::vector<StandingsRow> compare_teams(const Tables& tables,
                                               const std::vector<Id>& team_ids,
                                               int gameweek) {
    if (team_ids.size() < 2) {
        throw DomainError("comparison needs at least 2 teams");
    }
    for (std::size_t i = 0; i < team_ids.size(); ++i) {
        for (std::size_t j = i + 1; j < team_ids.size(); ++j) {
            if (team_ids[i] == team_ids[j]) {
                throw DomainError("comparison teams must be distinct");
            }
        }
    }
    const auto table = standings(tables, gameweek);
    std::vector<StandingsRow> picked;
    for (Id id : team_ids) picked.push_back(standings_row(table, id));
    std::sort(picked.begin(), picked.end(),
              [](const StandingsRow& a, const StandingsRow& b) {
                  return a.rank < b.rank;
              });
    return picked;
}

enum class AverageMetric { Goals, Points };

inline std::string_view to_string(AverageMetric m) {
    return m == AverageMetric::Goals ? "goals" : "points";
}

struct AverageResult {
    long long numerator = 0;
    int denominator = 1;
    int value_tenths = 0;
    // False when the team missed a fixture and the denominator fell back to
    // matches actually played instead of the gameweek count.
    bool played_all = true;

    std::string value_text() const { return format_tenths(value_tenths); }
    std::string arithmetic_string() const {
        return std::to_string(numerator) + " / " + std::to_string(denominator) +
               " = " + value_text();
    }
};

inline AverageResult cumulative_average(const Tables& tables, Id team_id,
                                        int through_gw, AverageMetric metric) {
    if (through_gw < 1 || through_gw > tables.max_gameweek) {
        throw DomainError("gameweek " + std::to_string(through_gw) +
                          " outside 1.." + std::to_string(tables.max_gameweek));
    }
    AverageResult res;
    int played = 0;
    for (int gw = 1; gw <= through_gw; ++gw) {
        auto it = tables.team_week_index.find({team_id, gw});
        if (it == tables.team_week_index.end()) continue;
        const auto& row = tables.team_week[it->second];
        res.numerator += metric == AverageMetric::Goals ? row.goals_scored : row.points;
        ++played;
    }
    if (played == 0) {
        throw NotFoundError("team " + std::to_string(team_id) +
                            " played no match through gameweek " +
                            std::to_string(through_gw));
    }
    res.played_all = played == through_gw;
    res.denominator = res.played_all ? through_gw : played;
    res.value_tenths = tenths_round_half_up(res.numerator, res.denominator);
    return res;
}

struct RegionShare {
    Region region;
    int pct = 0;  // share of the full total, rounded half-up
};

struct Decomposition {
    long long total_count = 0;  // per-match value when computed with per_match
    std::vector<RegionShare> top5;
};

// Counts one event type for one team over a gameweek window and reports the
// five busiest regions. Shares are always percentages of the raw total; only
// total_count is rescaled by the per_match flag.
inline Decomposition event_decomposition(const Tables& tables, Id team_id,
                                         int gw_start, int gw_end,
                                         EventType event_type,
                                         bool per_match = false) {
    if (gw_start > gw_end || gw_start < 1 || gw_end > tables.max_gameweek) {
        throw DomainError("bad gameweek range " + std::to_string(gw_start) + ".." +
                          std::to_string(gw_end));
    }
    std::array<std::array<long long, kGridRows>, kGridCols> counts{};
    long long raw_total = 0;
    for (const auto& e : tables.events) {
        if (e.team_id != team_id || e.event_type != event_type) continue;
        const int gw = tables.gameweek_by_match.at(e.match_id);
        if (gw < gw_start || gw > gw_end) continue;
        ++counts[e.region.col][e.region.row];
        ++raw_total;
    }
    Decomposition d;
    if (raw_total == 0) return d;

    if (per_match) {
        int matches = 0;
        for (int gw = gw_start; gw <= gw_end; ++gw) {
            if (tables.team_week_index.count({team_id, gw})) ++matches;
        }
        d.total_count = div_round_half_up(raw_total, matches);
    } else {
        d.total_count = raw_total;
    }

    std::vector<std::pair<long long, Region>> ranked;
    for (int c = 0; c < kGridCols; ++c) {
        for (int r = 0; r < kGridRows; ++r) {
            if (counts[c][r] > 0) ranked.push_back({counts[c][r], Region{c, r}});
        }
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first > b.first;
                  return std::tie(a.second.col, a.second.row) <
                         std::tie(b.second.col, b.second.row);
              });
    const std::size_t keep = std::min<std::size_t>(5, ranked.size());
    for (std::size_t i = 0; i < keep; ++i) {
        const int pct =
            static_cast<int>(div_round_half_up(100 * ranked[i].first, raw_total));
        d.top5.push_back({ranked[i].second, pct});
    }
    return d;
}

struct SeasonRankRow {
    Id team_id = 0;
    int avg_hundredths = 0;  // per-match average, 2 decimal digits
    int rank = 0;

    std::string avg_text() const { return format_hundredths(avg_hundredths); }
};

// Per-match average of one event type for every team over all ingested
// gameweeks, ranked busiest-first; ties break by team name ascending.
inline std::vector<SeasonRankRow> season_event_ranking(const Tables& tables,
                                                       EventType event_type) {
    std::vector<SeasonRankRow> rows;
    for (const auto& team : tables.teams_info) {
        long long total = 0;
        for (const auto& e : tables.events) {
            if (e.team_id == team.team_id && e.event_type == event_type) ++total;
        }
        int matches = 0;
        for (int gw = 1; gw <= tables.max_gameweek; ++gw) {
            if (tables.team_week_index.count({team.team_id, gw})) ++matches;
        }
        SeasonRankRow r;
        r.team_id = team.team_id;
        r.avg_hundredths =
            matches == 0 ? 0 : hundredths_round_half_up(total, matches);
        rows.push_back(r);
    }
    std::sort(rows.begin(), rows.end(),
              [&](const SeasonRankRow& a, const SeasonRankRow& b) {
                  if (a.avg_hundredths != b.avg_hundredths) {
                      return a.avg_hundredths > b.avg_hundredths;
                  }
                  return tables.team_name(a.team_id) < tables.team_name(b.team_id);
              });
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = static_cast<int>(i + 1);
    return rows;
}

inline const SeasonRankRow& season_rank_row(const std::vector<SeasonRankRow>& rows,
                                            Id team_id) {
    for (const auto& r : rows) {
        if (r.team_id == team_id) return r;
    }
    throw NotFoundError("team " + std::to_string(team_id) +
                        " not in season ranking");
}

}  // namespace footgpt
