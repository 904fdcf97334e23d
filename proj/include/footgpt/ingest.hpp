#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "footgpt/errors.hpp"
#include "footgpt/pitch_grid.hpp"
#include "footgpt/records.hpp"

namespace footgpt {

// Renames applied while reading one file: canonical field name -> key used in
// the source file. Unlisted fields are read under their canonical name, so an
// empty mapping reads the canonical layout as-is.
using KeyMap = std::unordered_map<std::string, std::string>;

struct FieldMapping {
    KeyMap matches;
    KeyMap events;
    KeyMap teams;
    KeyMap players;
};

struct ParseOptions {
    std::string league = "Italy";
    int gameweek_min = 1;
    int gameweek_max = 10;
    FieldMapping mapping;
};

namespace detail {

inline const nlohmann::json* find_field(const nlohmann::json& obj,
                                        const KeyMap& mapping,
                                        const std::string& canonical) {
    auto renamed = mapping.find(canonical);
    const std::string& key = renamed == mapping.end() ? canonical : renamed->second;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
}

inline Id require_id(const nlohmann::json& obj, const KeyMap& mapping,
                     const std::string& canonical, const std::string& where) {
    const auto* v = find_field(obj, mapping, canonical);
    if (!v || !v->is_number_integer()) {
        throw ParseError(where + ": missing or non-integer field '" + canonical + "'");
    }
    return v->get<Id>();
}

inline int require_int(const nlohmann::json& obj, const KeyMap& mapping,
                       const std::string& canonical, const std::string& where) {
    const auto* v = find_field(obj, mapping, canonical);
    if (!v || !v->is_number_integer()) {
        throw ParseError(where + ": missing or non-integer field '" + canonical + "'");
    }
    return v->get<int>();
}

inline std::string require_string(const nlohmann::json& obj, const KeyMap& mapping,
                                  const std::string& canonical,
                                  const std::string& where) {
    const auto* v = find_field(obj, mapping, canonical);
    if (!v || !v->is_string()) {
        throw ParseError(where + ": missing or non-string field '" + canonical + "'");
    }
    return v->get<std::string>();
}

inline std::string optional_string(const nlohmann::json& obj, const KeyMap& mapping,
                                   const std::string& canonical) {
    const auto* v = find_field(obj, mapping, canonical);
    return v && v->is_string() ? v->get<std::string>() : std::string();
}

inline std::optional<int> optional_int(const nlohmann::json& obj,
                                       const KeyMap& mapping,
                                       const std::string& canonical,
                                       const std::string& where) {
    const auto* v = find_field(obj, mapping, canonical);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
        throw ParseError(where + ": non-integer field '" + canonical + "'");
    }
    return v->get<int>();
}

// Reads an (x, y) percentage pair under <prefix>_x / <prefix>_y. A pair with
// only one half present counts as absent; ingest then decides whether the
// event survives based on which coordinate anchors its type.
inline std::optional<PitchPoint> optional_point(const nlohmann::json& obj,
                                                const KeyMap& mapping,
                                                const std::string& prefix,
                                                const std::string& where) {
    const auto* x = find_field(obj, mapping, prefix + "_x");
    const auto* y = find_field(obj, mapping, prefix + "_y");
    if (!x || !y) return std::nullopt;
    if (!x->is_number() || !y->is_number()) {
        throw ParseError(where + ": non-numeric coordinate in '" + prefix + "'");
    }
    PitchPoint p{x->get<double>(), y->get<double>()};
    if (p.x_pct < 0.0 || p.x_pct > 100.0 || p.y_pct < 0.0 || p.y_pct > 100.0) {
        throw IntegrityError(where + ": coordinate outside [0,100] in '" + prefix +
                             "'");
    }
    return p;
}

inline nlohmann::json parse_document(const std::string& bytes,
                                     const std::string& file_label) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(file_label + ": " + e.what(), e.byte);
    }
    if (!doc.is_array()) {
        throw ParseError(file_label + ": top-level value must be an array");
    }
    return doc;
}

}  // namespace detail

// Parses the four raw feeds into one validated dataset restricted to the
// configured league and gameweek window. Referential checks run against the
// full parsed universe before any filtering, so a dangling id is always an
// error even if its match would have been filtered out.
inline RawDataset parse_dataset(const std::string& matches_bytes,
                                const std::string& events_bytes,
                                const std::string& teams_bytes,
                                const std::string& players_bytes,
                                const ParseOptions& options = {}) {
    using detail::find_field;
    using nlohmann::json;

    const json teams_doc = detail::parse_document(teams_bytes, "teams");
    const json players_doc = detail::parse_document(players_bytes, "players");
    const json matches_doc = detail::parse_document(matches_bytes, "matches");
    const json events_doc = detail::parse_document(events_bytes, "events");

    std::unordered_map<Id, TeamInfo> teams_by_id;
    for (std::size_t i = 0; i < teams_doc.size(); ++i) {
        const auto& obj = teams_doc[i];
        const std::string where = "teams[" + std::to_string(i) + "]";
        if (!obj.is_object()) throw ParseError(where + ": not an object");
        TeamInfo t;
        t.team_id = detail::require_id(obj, options.mapping.teams, "team_id", where);
        t.name = detail::require_string(obj, options.mapping.teams, "name", where);
        if (t.name.empty()) throw IntegrityError(where + ": empty team name");
        t.competition =
            detail::require_string(obj, options.mapping.teams, "competition", where);
        if (!teams_by_id.emplace(t.team_id, t).second) {
            throw IntegrityError("duplicate team_id " + std::to_string(t.team_id));
        }
    }

    std::unordered_map<Id, PlayerInfo> players_by_id;
    for (std::size_t i = 0; i < players_doc.size(); ++i) {
        const auto& obj = players_doc[i];
        const std::string where = "players[" + std::to_string(i) + "]";
        if (!obj.is_object()) throw ParseError(where + ": not an object");
        PlayerInfo p;
        p.player_id =
            detail::require_id(obj, options.mapping.players, "player_id", where);
        p.name = detail::optional_string(obj, options.mapping.players, "name");
        const auto* team =
            find_field(obj, options.mapping.players, "current_team_id");
        p.current_team_id =
            team && team->is_number_integer() ? team->get<Id>() : 0;
        p.position = detail::optional_string(obj, options.mapping.players, "position");
        const auto age =
            detail::optional_int(obj, options.mapping.players, "age", where);
        p.age = age.value_or(0);
        if (!players_by_id.emplace(p.player_id, p).second) {
            throw IntegrityError("duplicate player_id " + std::to_string(p.player_id));
        }
    }

    // All matches parse first; filter classification comes after so events can
    // be attributed to the reason their match disappeared.
    enum class MatchFate { Kept, GameweekFiltered, LeagueFiltered };
    std::unordered_map<Id, MatchFate> fate_by_match;
    std::vector<RawMatch> kept_matches;
    DiscardReport discard;

    for (std::size_t i = 0; i < matches_doc.size(); ++i) {
        const auto& obj = matches_doc[i];
        const std::string where = "matches[" + std::to_string(i) + "]";
        if (!obj.is_object()) throw ParseError(where + ": not an object");
        const auto& km = options.mapping.matches;
        RawMatch m;
        m.match_id = detail::require_id(obj, km, "match_id", where);
        m.gameweek = detail::require_int(obj, km, "gameweek", where);
        m.date = detail::optional_string(obj, km, "date");
        m.home_team_id = detail::require_id(obj, km, "home_team_id", where);
        m.away_team_id = detail::require_id(obj, km, "away_team_id", where);
        if (m.home_team_id == m.away_team_id) {
            throw IntegrityError("match " + std::to_string(m.match_id) +
                                 ": home and away team are both " +
                                 std::to_string(m.home_team_id));
        }
        for (Id tid : {m.home_team_id, m.away_team_id}) {
            if (!teams_by_id.count(tid)) {
                throw IntegrityError("match " + std::to_string(m.match_id) +
                                     " references unknown team_id " +
                                     std::to_string(tid));
            }
        }
        m.home_goals = detail::optional_int(obj, km, "home_goals", where);
        m.away_goals = detail::optional_int(obj, km, "away_goals", where);
        if ((m.home_goals && *m.home_goals < 0) ||
            (m.away_goals && *m.away_goals < 0)) {
            throw IntegrityError("match " + std::to_string(m.match_id) +
                                 ": negative goal count");
        }
        if (const auto* lineups = find_field(obj, km, "lineups")) {
            if (!lineups->is_array()) {
                throw ParseError(where + ": 'lineups' must be an array");
            }
            for (const auto& entry : *lineups) {
                LineupEntry l;
                l.player_id = detail::require_id(entry, {}, "player_id", where);
                const auto starter = entry.find("starter");
                l.starter = starter != entry.end() && starter->is_boolean() &&
                            starter->get<bool>();
                l.minute_on = detail::optional_int(entry, {}, "minute_on", where)
                                  .value_or(0);
                l.minute_off = detail::optional_int(entry, {}, "minute_off", where)
                                   .value_or(0);
                if (l.minute_on < 0 || l.minute_on > 130 || l.minute_off < 0 ||
                    l.minute_off > 130) {
                    throw IntegrityError("match " + std::to_string(m.match_id) +
                                         ": lineup minute outside [0,130] for player " +
                                         std::to_string(l.player_id));
                }
                if (!players_by_id.count(l.player_id)) {
                    throw IntegrityError("match " + std::to_string(m.match_id) +
                                         " lineup references unknown player_id " +
                                         std::to_string(l.player_id));
                }
                m.lineups.push_back(l);
            }
        }
        if (const auto* impacts = find_field(obj, km, "impactful_events")) {
            if (!impacts->is_array()) {
                throw ParseError(where + ": 'impactful_events' must be an array");
            }
            for (const auto& entry : *impacts) {
                const std::string kind_name =
                    detail::require_string(entry, {}, "kind", where);
                const auto kind = impact_kind_from_string(kind_name);
                // Unrecognized kinds pass through silently so richer feeds load.
                if (!kind) continue;
                ImpactfulEvent ev;
                ev.kind = *kind;
                ev.player_id = detail::require_id(entry, {}, "player_id", where);
                ev.minute = detail::optional_int(entry, {}, "minute", where).value_or(0);
                if (ev.minute < 0 || ev.minute > 130) {
                    throw IntegrityError("match " + std::to_string(m.match_id) +
                                         ": impactful event minute outside [0,130]");
                }
                if (!players_by_id.count(ev.player_id)) {
                    throw IntegrityError("match " + std::to_string(m.match_id) +
                                         " impactful event references unknown player_id " +
                                         std::to_string(ev.player_id));
                }
                m.impactful_events.push_back(ev);
            }
        }
        if (fate_by_match.count(m.match_id)) {
            throw IntegrityError("duplicate match_id " + std::to_string(m.match_id));
        }

        MatchFate fate = MatchFate::Kept;
        if (m.gameweek < options.gameweek_min || m.gameweek > options.gameweek_max) {
            fate = MatchFate::GameweekFiltered;
            ++discard.gameweek_filtered_matches;
        } else if (teams_by_id.at(m.home_team_id).competition != options.league ||
                   teams_by_id.at(m.away_team_id).competition != options.league) {
            fate = MatchFate::LeagueFiltered;
            ++discard.league_filtered_matches;
        }
        fate_by_match.emplace(m.match_id, fate);
        if (fate == MatchFate::Kept) kept_matches.push_back(std::move(m));
    }

    std::unordered_map<Id, int> gameweek_by_match;
    for (const auto& m : kept_matches) gameweek_by_match[m.match_id] = m.gameweek;

    std::vector<EventRecord> kept_events;
    std::unordered_set<Id> seen_event_ids;
    for (std::size_t i = 0; i < events_doc.size(); ++i) {
        const auto& obj = events_doc[i];
        const std::string where = "events[" + std::to_string(i) + "]";
        if (!obj.is_object()) throw ParseError(where + ": not an object");
        const auto& km = options.mapping.events;
        EventRecord e;
        e.event_id = detail::require_id(obj, km, "event_id", where);
        if (!seen_event_ids.insert(e.event_id).second) {
            throw IntegrityError("duplicate event_id " + std::to_string(e.event_id));
        }
        e.match_id = detail::require_id(obj, km, "match_id", where);
        e.player_id = detail::require_id(obj, km, "player_id", where);
        e.team_id = detail::require_id(obj, km, "team_id", where);
        auto fate_it = fate_by_match.find(e.match_id);
        if (fate_it == fate_by_match.end()) {
            throw IntegrityError("event " + std::to_string(e.event_id) +
                                 " references unknown match_id " +
                                 std::to_string(e.match_id));
        }
        if (!teams_by_id.count(e.team_id)) {
            throw IntegrityError("event " + std::to_string(e.event_id) +
                                 " references unknown team_id " +
                                 std::to_string(e.team_id));
        }
        if (!players_by_id.count(e.player_id)) {
            throw IntegrityError("event " + std::to_string(e.event_id) +
                                 " references unknown player_id " +
                                 std::to_string(e.player_id));
        }
        if (fate_it->second == MatchFate::GameweekFiltered) {
            ++discard.gameweek_filtered_events;
            continue;
        }
        if (fate_it->second == MatchFate::LeagueFiltered) {
            ++discard.league_filtered_events;
            continue;
        }
        const std::string type_name =
            detail::require_string(obj, km, "event_type", where);
        const auto type = event_type_from_string(type_name);
        if (!type) {
            ++discard.type_excluded;
            continue;
        }
        e.event_type = *type;
        e.source = detail::optional_point(obj, km, "source", where);
        e.dest = detail::optional_point(obj, km, "dest", where);
        const bool anchored = anchor_for(e.event_type) == AnchorKind::Destination
                                  ? e.dest.has_value()
                                  : e.source.has_value();
        if (!anchored) {
            ++discard.coordinates_missing;
            continue;
        }
        kept_events.push_back(e);
    }

    if (kept_matches.empty()) {
        throw EmptyDatasetError("no matches remain for league '" + options.league +
                                "' in gameweeks " +
                                std::to_string(options.gameweek_min) + ".." +
                                std::to_string(options.gameweek_max));
    }

    std::sort(kept_matches.begin(), kept_matches.end(),
              [](const RawMatch& a, const RawMatch& b) {
                  return std::tie(a.gameweek, a.match_id) <
                         std::tie(b.gameweek, b.match_id);
              });
    std::sort(kept_events.begin(), kept_events.end(),
              [&](const EventRecord& a, const EventRecord& b) {
                  const int ga = gameweek_by_match.at(a.match_id);
                  const int gb = gameweek_by_match.at(b.match_id);
                  return std::tie(ga, a.match_id, a.event_id) <
                         std::tie(gb, b.match_id, b.event_id);
              });

    RawDataset ds;
    ds.league = options.league;
    ds.matches = std::move(kept_matches);
    ds.events = std::move(kept_events);
    for (const auto& [id, t] : teams_by_id) {
        if (t.competition == options.league) ds.teams.push_back(t);
    }
    std::sort(ds.teams.begin(), ds.teams.end(),
              [](const TeamInfo& a, const TeamInfo& b) { return a.team_id < b.team_id; });
    for (const auto& [id, p] : players_by_id) ds.players.push_back(p);
    std::sort(ds.players.begin(), ds.players.end(),
              [](const PlayerInfo& a, const PlayerInfo& b) {
                  return a.player_id < b.player_id;
              });
    ds.discard = discard;
    return ds;
}

inline const DiscardReport& discard_report(const RawDataset& dataset) {
    return dataset.discard;
}

// Convenience wrapper reading the four files from a directory laid out as
// matches.json / events.json / teams.json / players.json.
inline RawDataset parse_dataset_dir(const std::string& dir,
                                    const ParseOptions& options = {}) {
    return parse_dataset(read_file(dir + "/matches.json"),
                         read_file(dir + "/events.json"),
                         read_file(dir + "/teams.json"),
                         read_file(dir + "/players.json"), options);
}

}  // namespace footgpt
