#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "footgpt/errors.hpp"
#include "footgpt/ingest.hpp"
#include "footgpt/pitch_grid.hpp"
#include "footgpt/records.hpp"

namespace footgpt {

enum class Side { Home, Away };

inline std::string_view to_string(Side s) {
    return s == Side::Home ? "home" : "away";
}

// One team's view of one fixture: their goals and the 3/1/0 points outcome.
struct TeamWeekRow {
    Id match_id = 0;
    Id team_id = 0;
    Id opposing_team_id = 0;
    int gameweek = 0;
    Side side = Side::Home;
    int goals_scored = 0;
    int points = 0;
};

struct PlayerWeekRow {
    Id match_id = 0;
    Id player_id = 0;
    Id opposing_team_id = 0;
    int gameweek = 0;
    int goals = 0;
    int yellow_cards = 0;
    int red_cards = 0;
    bool started_first_xi = false;
    int minutes_played = 0;
};

struct EventRow {
    Id event_id = 0;
    Id match_id = 0;
    Id player_id = 0;
    Id team_id = 0;
    EventType event_type = EventType::Touch;
    Region region;
};

struct TablesOptions {
    // When set, a goal of kind own_goal also counts toward the scoring
    // player's personal tally. Team totals always come from the match score.
    bool credit_own_goals_to_player = false;
};

// The five derived tables plus positional indexes for constant-time lookups.
// Construction is the only mutation point; treat instances as immutable.
struct Tables {
    std::vector<TeamInfo> teams_info;
    std::vector<PlayerInfo> players_info;
    std::vector<TeamWeekRow> team_week;
    std::vector<PlayerWeekRow> player_week;
    std::vector<EventRow> events;

    std::map<std::pair<Id, int>, std::size_t> team_week_index;  // (team, gw)
    std::unordered_map<Id, int> gameweek_by_match;
    std::unordered_map<Id, std::size_t> team_pos;
    std::unordered_map<Id, std::size_t> player_pos;

    int max_gameweek = 0;

    const TeamInfo& team(Id team_id) const {
        auto it = team_pos.find(team_id);
        if (it == team_pos.end()) {
            throw NotFoundError("unknown team_id " + std::to_string(team_id));
        }
        return teams_info[it->second];
    }

    const std::string& team_name(Id team_id) const { return team(team_id).name; }
};

inline Tables build_tables(const RawDataset& dataset,
                           const TablesOptions& options = {}) {
    Tables t;
    t.teams_info = dataset.teams;
    t.players_info = dataset.players;
    for (std::size_t i = 0; i < t.teams_info.size(); ++i) {
        t.team_pos[t.teams_info[i].team_id] = i;
    }
    for (std::size_t i = 0; i < t.players_info.size(); ++i) {
        t.player_pos[t.players_info[i].player_id] = i;
    }

    std::unordered_map<Id, const RawMatch*> match_by_id;
    for (const auto& m : dataset.matches) {
        match_by_id[m.match_id] = &m;
        if (!m.home_goals || !m.away_goals) {
            throw IntegrityError("match " + std::to_string(m.match_id) +
                                 " has no final score");
        }
        const int hg = *m.home_goals;
        const int ag = *m.away_goals;
        const auto points = [](int mine, int theirs) {
            return mine > theirs ? 3 : mine == theirs ? 1 : 0;
        };
        t.team_week.push_back({m.match_id, m.home_team_id, m.away_team_id,
                               m.gameweek, Side::Home, hg, points(hg, ag)});
        t.team_week.push_back({m.match_id, m.away_team_id, m.home_team_id,
                               m.gameweek, Side::Away, ag, points(ag, hg)});

        std::unordered_map<Id, PlayerWeekRow> rows;
        for (const auto& l : m.lineups) {
            auto pit = t.player_pos.find(l.player_id);
            if (pit == t.player_pos.end()) {
                throw IntegrityError("match " + std::to_string(m.match_id) +
                                     " lineup references unknown player_id " +
                                     std::to_string(l.player_id));
            }
            const Id own_team = t.players_info[pit->second].current_team_id;
            if (own_team != m.home_team_id && own_team != m.away_team_id) {
                throw IntegrityError("player " + std::to_string(l.player_id) +
                                     " in match " + std::to_string(m.match_id) +
                                     " belongs to neither side");
            }
            PlayerWeekRow r;
            r.match_id = m.match_id;
            r.player_id = l.player_id;
            r.opposing_team_id =
                own_team == m.home_team_id ? m.away_team_id : m.home_team_id;
            r.gameweek = m.gameweek;
            r.started_first_xi = l.starter;
            r.minutes_played = std::max(0, l.minute_off - l.minute_on);
            rows[l.player_id] = r;
        }
        for (const auto& ev : m.impactful_events) {
            auto rit = rows.find(ev.player_id);
            if (rit == rows.end()) continue;  // bench players never fielded
            switch (ev.kind) {
                case ImpactKind::Goal:
                    ++rit->second.goals;
                    break;
                case ImpactKind::OwnGoal:
                    if (options.credit_own_goals_to_player) ++rit->second.goals;
                    break;
                case ImpactKind::YellowCard:
                    ++rit->second.yellow_cards;
                    break;
                case ImpactKind::RedCard:
                    ++rit->second.red_cards;
                    break;
                case ImpactKind::Substitution:
                    break;
            }
        }
        for (auto& [pid, r] : rows) {
            if (r.yellow_cards > 2 || r.red_cards > 1) {
                throw IntegrityError("player " + std::to_string(pid) +
                                     " in match " + std::to_string(m.match_id) +
                                     " has an impossible card count");
            }
            t.player_week.push_back(r);
        }
    }

    for (const auto& e : dataset.events) {
        auto mit = match_by_id.find(e.match_id);
        if (mit == match_by_id.end()) {
            throw IntegrityError("event " + std::to_string(e.event_id) +
                                 " references unknown match_id " +
                                 std::to_string(e.match_id));
        }
        t.events.push_back({e.event_id, e.match_id, e.player_id, e.team_id,
                            e.event_type, event_region(e)});
    }

    for (const auto& m : dataset.matches) {
        t.gameweek_by_match[m.match_id] = m.gameweek;
    }
    const auto& gw_by_match = t.gameweek_by_match;
    std::sort(t.team_week.begin(), t.team_week.end(),
              [](const TeamWeekRow& a, const TeamWeekRow& b) {
                  return std::tie(a.gameweek, a.match_id, a.team_id) <
                         std::tie(b.gameweek, b.match_id, b.team_id);
              });
    std::sort(t.player_week.begin(), t.player_week.end(),
              [](const PlayerWeekRow& a, const PlayerWeekRow& b) {
                  return std::tie(a.gameweek, a.match_id, a.player_id) <
                         std::tie(b.gameweek, b.match_id, b.player_id);
              });
    std::sort(t.events.begin(), t.events.end(),
              [&](const EventRow& a, const EventRow& b) {
                  const int ga = gw_by_match.at(a.match_id);
                  const int gb = gw_by_match.at(b.match_id);
                  return std::tie(ga, a.match_id, a.event_id) <
                         std::tie(gb, b.match_id, b.event_id);
              });

    for (std::size_t i = 0; i < t.team_week.size(); ++i) {
        const auto& r = t.team_week[i];
        auto key = std::make_pair(r.team_id, r.gameweek);
        if (!t.team_week_index.emplace(key, i).second) {
            throw IntegrityError("team " + std::to_string(r.team_id) +
                                 " has two fixtures in gameweek " +
                                 std::to_string(r.gameweek));
        }
        t.max_gameweek = std::max(t.max_gameweek, r.gameweek);
    }
    return t;
}

inline const TeamWeekRow& team_week_lookup(const Tables& tables, Id team_id,
                                           int gameweek) {
    auto it = tables.team_week_index.find({team_id, gameweek});
    if (it == tables.team_week_index.end()) {
        throw NotFoundError("no fixture for team " + std::to_string(team_id) +
                            " in gameweek " + std::to_string(gameweek));
    }
    return tables.team_week[it->second];
}

namespace detail {

inline std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

// Debug/inspection dump of the five tables as CSV files under dir.
inline void export_tables_csv(const Tables& t, const std::string& dir) {
    std::ostringstream teams;
    teams << "team_id,name,competition\n";
    for (const auto& r : t.teams_info) {
        teams << r.team_id << ',' << detail::csv_cell(r.name) << ','
              << detail::csv_cell(r.competition) << '\n';
    }
    write_file(dir + "/teams_info.csv", teams.str());

    std::ostringstream players;
    players << "player_id,name,current_team_id,position,age\n";
    for (const auto& r : t.players_info) {
        players << r.player_id << ',' << detail::csv_cell(r.name) << ','
                << r.current_team_id << ',' << detail::csv_cell(r.position) << ','
                << r.age << '\n';
    }
    write_file(dir + "/players_info.csv", players.str());

    std::ostringstream tw;
    tw << "match_id,team_id,opposing_team_id,gameweek,side,goals_scored,points\n";
    for (const auto& r : t.team_week) {
        tw << r.match_id << ',' << r.team_id << ',' << r.opposing_team_id << ','
           << r.gameweek << ',' << to_string(r.side) << ',' << r.goals_scored
           << ',' << r.points << '\n';
    }
    write_file(dir + "/team_week.csv", tw.str());

    std::ostringstream pw;
    pw << "match_id,player_id,opposing_team_id,gameweek,goals,yellow_cards,"
          "red_cards,started_first_xi,minutes_played\n";
    for (const auto& r : t.player_week) {
        pw << r.match_id << ',' << r.player_id << ',' << r.opposing_team_id << ','
           << r.gameweek << ',' << r.goals << ',' << r.yellow_cards << ','
           << r.red_cards << ',' << (r.started_first_xi ? 1 : 0) << ','
           << r.minutes_played << '\n';
    }
    write_file(dir + "/player_week.csv", pw.str());

    std::ostringstream ev;
    ev << "event_id,match_id,player_id,team_id,event_type,region\n";
    for (const auto& r : t.events) {
        ev << r.event_id << ',' << r.match_id << ',' << r.player_id << ','
           << r.team_id << ',' << detail::csv_cell(std::string(to_string(r.event_type)))
           << ',' << detail::csv_cell(region_tag(r.region)) << '\n';
    }
    write_file(dir + "/events.csv", ev.str());
}

}  // namespace footgpt
