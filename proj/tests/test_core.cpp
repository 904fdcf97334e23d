#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "footgpt/ingest.hpp"
#include "footgpt/pitch_grid.hpp"
#include "footgpt/stats.hpp"
#include "footgpt/tables.hpp"
#include "footgpt/util.hpp"
#include "helpers.hpp"

using namespace footgpt;
using nlohmann::json;

TEST_SUITE("util") {
    TEST_CASE("half-up integer division") {
        CHECK(div_round_half_up(5, 2) == 3);
        CHECK(div_round_half_up(3, 2) == 2);
        CHECK(div_round_half_up(1, 3) == 0);
        CHECK(div_round_half_up(2, 3) == 1);
        CHECK(div_round_half_up(0, 7) == 0);
        CHECK(div_round_half_up(7, 7) == 1);
        CHECK(div_round_half_up(25, 10) == 3);
        CHECK(div_round_half_up(24, 10) == 2);
    }

    TEST_CASE("tenths and hundredths") {
        CHECK(tenths_round_half_up(24, 9) == 27);
        CHECK(tenths_round_half_up(15, 5) == 30);
        CHECK(tenths_round_half_up(5, 4) == 13);
        CHECK(tenths_round_half_up(4, 3) == 13);
        CHECK(hundredths_round_half_up(7, 3) == 233);
        CHECK(hundredths_round_half_up(5, 2) == 250);
        CHECK(format_tenths(27) == "2.7");
        CHECK(format_tenths(30) == "3.0");
        CHECK(format_tenths(5) == "0.5");
        CHECK(format_hundredths(2216) == "22.16");
        CHECK(format_hundredths(250) == "2.50");
        CHECK(format_hundredths(7) == "0.07");
    }

    TEST_CASE("ordinals") {
        CHECK(ordinal(1) == "1st");
        CHECK(ordinal(2) == "2nd");
        CHECK(ordinal(3) == "3rd");
        CHECK(ordinal(4) == "4th");
        CHECK(ordinal(11) == "11th");
        CHECK(ordinal(12) == "12th");
        CHECK(ordinal(13) == "13th");
        CHECK(ordinal(21) == "21st");
        CHECK(ordinal(22) == "22nd");
        CHECK(ordinal(23) == "23rd");
        CHECK(ordinal(101) == "101st");
        CHECK(ordinal(111) == "111th");
    }

    TEST_CASE("fnv1a64 known values") {
        CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
        CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
        CHECK(fnv1a64_bytes("a", 1) == fnv1a64("a"));
        CHECK(hex64(0xcbf29ce484222325ULL) == "cbf29ce484222325");
    }

    TEST_CASE("rng determinism") {
        SplitMix64 a(42), b(42), c(43);
        bool all_equal = true, any_diff = false;
        for (int i = 0; i < 100; ++i) {
            const auto va = a.next();
            all_equal = all_equal && va == b.next();
            any_diff = any_diff || va != c.next();
        }
        CHECK(all_equal);
        CHECK(any_diff);
    }

    TEST_CASE("rng ranges") {
        SplitMix64 rng(7);
        for (int i = 0; i < 1000; ++i) {
            CHECK(rng.next_below(13) < 13);
            const double d = rng.next_double();
            CHECK(d >= 0.0);
            CHECK(d < 1.0);
            const int v = rng.next_int(-3, 3);
            CHECK(v >= -3);
            CHECK(v <= 3);
        }
    }

    TEST_CASE("gaussian moments") {
        SplitMix64 rng(11);
        double sum = 0.0, sum_sq = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) {
            const double g = rng.next_gaussian();
            sum += g;
            sum_sq += g * g;
        }
        const double mean = sum / n;
        const double var = sum_sq / n - mean * mean;
        CHECK(std::abs(mean) < 0.05);
        CHECK(std::abs(var - 1.0) < 0.08);
    }

    TEST_CASE("shuffle is a deterministic permutation") {
        std::vector<int> v1{1, 2, 3, 4, 5, 6, 7, 8}, v2 = v1, sorted = v1;
        SplitMix64 a(5), b(5);
        a.shuffle(v1);
        b.shuffle(v2);
        CHECK(v1 == v2);
        std::sort(v2.begin(), v2.end());
        CHECK(v2 == sorted);
    }

    TEST_CASE("text helpers") {
        CHECK(normalize_text("  FC  Internazionale\tMilano ") == "fc internazionale milano");
        CHECK(whitespace_token_count("a b  c") == 3);
        CHECK(whitespace_token_count("") == 0);
        CHECK(trim("  x  ") == "x");
        CHECK(replace_all("a-b-c", "-", "+") == "a+b+c");
        CHECK(split("x,y,,z", ',') == std::vector<std::string>{"x", "y", "", "z"});
        CHECK(contains_ci("Simple Pass", "simple pass"));
    }
}

TEST_SUITE("pitch_grid") {
    TEST_CASE("locate corners and clamping") {
        CHECK(locate(0, 0) == Region{0, 0});
        CHECK(locate(100, 100) == Region{5, 3});
        CHECK(locate(100, 0) == Region{5, 0});
        CHECK(locate(0, 100) == Region{0, 3});
        CHECK(locate(99.99, 99.99) == Region{5, 3});
    }

    TEST_CASE("half-open interior boundaries") {
        CHECK(locate(50.0, 0) == Region{3, 0});
        CHECK(locate(49.99, 0) == Region{2, 0});
        CHECK(locate(0, 25.0) == Region{0, 1});
        CHECK(locate(0, 24.99) == Region{0, 0});
        CHECK(locate(0, 50.0) == Region{0, 2});
        CHECK(locate(0, 75.0) == Region{0, 3});
    }

    TEST_CASE("out of range coordinates rejected") {
        CHECK_THROWS_AS(locate(-0.01, 50), DomainError);
        CHECK_THROWS_AS(locate(100.01, 50), DomainError);
        CHECK_THROWS_AS(locate(50, -1), DomainError);
        CHECK_THROWS_AS(locate(50, 101), DomainError);
    }

    TEST_CASE("sweep covers every region uniformly") {
        std::map<std::pair<int, int>, int> hits;
        for (int i = 0; i < 600; ++i) {
            for (int j = 0; j < 400; ++j) {
                const Region r = locate(i / 6.0, j / 4.0);
                ++hits[{r.col, r.row}];
            }
        }
        CHECK(hits.size() == 24);
        for (const auto& [cell, count] : hits) CHECK(count == 10000);
    }

    TEST_CASE("anchor kinds per event type") {
        for (EventType t : all_event_types()) {
            const AnchorKind k = anchor_for(t);
            const bool is_pass = t == EventType::SimplePass || t == EventType::HighPass ||
                                 t == EventType::HeadPass;
            CHECK(k == (is_pass ? AnchorKind::Destination : AnchorKind::Source));
        }
    }

    TEST_CASE("event_region uses the anchor") {
        EventRecord pass;
        pass.event_type = EventType::HighPass;
        pass.source = PitchPoint{1, 1};
        pass.dest = PitchPoint{99, 99};
        CHECK(event_region(pass) == Region{5, 3});

        EventRecord shot;
        shot.event_type = EventType::Shot;
        shot.source = PitchPoint{99, 99};
        shot.dest = PitchPoint{1, 1};
        CHECK(event_region(shot) == Region{5, 3});

        EventRecord missing;
        missing.event_type = EventType::SimplePass;
        missing.source = PitchPoint{1, 1};
        CHECK_THROWS_AS(event_region(missing), IntegrityError);
    }

    TEST_CASE("region tags") {
        CHECK(region_tag(Region{0, 0}) == "[region 0 , 0]");
        CHECK(region_tag(Region{5, 3}) == "[region 5 , 3]");
        CHECK(region_tag(Region{2, 1}) == "[region 2 , 1]");
    }

    TEST_CASE("region descriptions are fixed and injective") {
        CHECK(describe(Region{0, 0}) == "Defensive third, near the left corner flag.");
        CHECK(describe(Region{1, 0}) == "Defensive center, left wing.");
        CHECK(describe(Region{2, 0}) == "center, left wing.");
        CHECK(describe(Region{3, 0}) == "center, left.");
        CHECK(describe(Region{4, 0}) == "Offensive center, left wing.");
        CHECK(describe(Region{5, 0}) == "Offensive third, left win.");
        CHECK(describe(Region{2, 1}) == "center, left of center.");
        CHECK(describe(Region{5, 3}) == "Offensive third, right wing.");
        std::set<std::string_view> seen;
        for (int c = 0; c < kGridCols; ++c) {
            for (int r = 0; r < kGridRows; ++r) {
                seen.insert(describe(Region{c, r}));
            }
        }
        CHECK(seen.size() == 24);
        CHECK_THROWS_AS(describe(Region{6, 0}), DomainError);
        CHECK_THROWS_AS(describe(Region{0, 4}), DomainError);
    }
}

TEST_SUITE("ingest") {
    TEST_CASE("parses the hand league") {
        const auto ds = testutil::stats_league();
        CHECK(ds.matches.size() == 5);
        CHECK(ds.events.size() == 20);
        CHECK(ds.teams.size() == 5);
        CHECK(ds.players.size() == 5);
        CHECK(ds.max_gameweek() == 4);
        CHECK(ds.discard.all_zero());
    }

    TEST_CASE("events sorted by gameweek then match then id") {
        const auto ds = testutil::stats_league();
        for (std::size_t i = 1; i < ds.events.size(); ++i) {
            CHECK(ds.events[i - 1].event_id < ds.events[i].event_id);
        }
    }

    TEST_CASE("malformed json reports a byte offset") {
        ParseOptions opt;
        try {
            parse_dataset("[{\"match_id\": }]", "[]", "[]", "[]", opt);
            CHECK(false);
        } catch (const ParseError& e) {
            CHECK(e.byte_offset() > 0);
        }
    }

    TEST_CASE("top level must be an array") {
        CHECK_THROWS_AS(parse_dataset("{}", "[]", "[]", "[]", {}), ParseError);
    }

    TEST_CASE("duplicate ids rejected") {
        auto teams = testutil::stats_teams();
        teams.push_back(teams[0]);
        CHECK_THROWS_AS(parse_dataset(testutil::stats_matches().dump(), "[]",
                                      teams.dump(), testutil::stats_players().dump(), {}),
                        IntegrityError);

        auto matches = testutil::stats_matches();
        matches.push_back(matches[0]);
        CHECK_THROWS_AS(parse_dataset(matches.dump(), "[]",
                                      testutil::stats_teams().dump(),
                                      testutil::stats_players().dump(), {}),
                        IntegrityError);

        auto events = testutil::stats_events();
        events.push_back(events[0]);
        CHECK_THROWS_AS(parse_dataset(testutil::stats_matches().dump(), events.dump(),
                                      testutil::stats_teams().dump(),
                                      testutil::stats_players().dump(), {}),
                        IntegrityError);
    }

    TEST_CASE("referential integrity") {
        auto matches = testutil::stats_matches();
        matches[0]["home_team_id"] = 999;
        CHECK_THROWS_AS(parse_dataset(matches.dump(), "[]",
                                      testutil::stats_teams().dump(),
                                      testutil::stats_players().dump(), {}),
                        IntegrityError);

        auto events = testutil::stats_events();
        events[0]["player_id"] = 999;
        CHECK_THROWS_AS(parse_dataset(testutil::stats_matches().dump(), events.dump(),
                                      testutil::stats_teams().dump(),
                                      testutil::stats_players().dump(), {}),
                        IntegrityError);

        events = testutil::stats_events();
        events[0]["match_id"] = 999;
        CHECK_THROWS_AS(parse_dataset(testutil::stats_matches().dump(), events.dump(),
                                      testutil::stats_teams().dump(),
                                      testutil::stats_players().dump(), {}),
                        IntegrityError);
    }

    TEST_CASE("identical home and away rejected") {
        auto matches = testutil::stats_matches();
        matches[0]["away_team_id"] = matches[0]["home_team_id"];
        CHECK_THROWS_AS(parse_dataset(matches.dump(), "[]",
                                      testutil::stats_teams().dump(),
                                      testutil::stats_players().dump(), {}),
                        IntegrityError);
    }

    TEST_CASE("negative goals rejected") {
        auto matches = testutil::stats_matches();
        matches[0]["home_goals"] = -1;
        CHECK_THROWS_AS(parse_dataset(matches.dump(), "[]",
                                      testutil::stats_teams().dump(),
                                      testutil::stats_players().dump(), {}),
                        IntegrityError);
    }

    TEST_CASE("coordinates outside the pitch rejected") {
        auto events = testutil::stats_events();
        events[0]["source_x"] = 100.5;
        CHECK_THROWS_AS(parse_dataset(testutil::stats_matches().dump(), events.dump(),
                                      testutil::stats_teams().dump(),
                                      testutil::stats_players().dump(), {}),
                        IntegrityError);
        events = testutil::stats_events();
        events[0]["source_y"] = "north";
        CHECK_THROWS_AS(parse_dataset(testutil::stats_matches().dump(), events.dump(),
                                      testutil::stats_teams().dump(),
                                      testutil::stats_players().dump(), {}),
                        ParseError);
    }

    TEST_CASE("discard classification") {
        auto events = testutil::stats_events();
        events.push_back({{"event_id", 900},
                          {"match_id", 11},
                          {"player_id", 10},
                          {"team_id", 1},
                          {"event_type", "Corner"},
                          {"source_x", 5.0},
                          {"source_y", 5.0}});
        // pass without a destination: anchor missing even though source is set
        events.push_back({{"event_id", 901},
                          {"match_id", 11},
                          {"player_id", 10},
                          {"team_id", 1},
                          {"event_type", "Simple pass"},
                          {"source_x", 5.0},
                          {"source_y", 5.0}});
        // touch without a source: anchor missing even though dest is set
        events.push_back({{"event_id", 902},
                          {"match_id", 11},
                          {"player_id", 10},
                          {"team_id", 1},
                          {"event_type", "Touch"},
                          {"dest_x", 5.0},
                          {"dest_y", 5.0}});
        // touch with only source present is kept
        events.push_back({{"event_id", 903},
                          {"match_id", 11},
                          {"player_id", 10},
                          {"team_id", 1},
                          {"event_type", "Touch"},
                          {"source_x", 5.0},
                          {"source_y", 5.0}});
        const auto ds = parse_dataset(testutil::stats_matches().dump(), events.dump(),
                                      testutil::stats_teams().dump(),
                                      testutil::stats_players().dump(), {});
        CHECK(ds.discard.type_excluded == 1);
        CHECK(ds.discard.coordinates_missing == 2);
        CHECK(ds.events.size() == 21);
    }

    TEST_CASE("gameweek and league filters") {
        auto teams = testutil::stats_teams();
        teams.push_back({{"team_id", 6}, {"name", "Foreign Rangers"}, {"competition", "Spain"}});
        auto matches = testutil::stats_matches();
        matches.push_back({{"match_id", 51}, {"gameweek", 11}, {"home_team_id", 1},
                           {"away_team_id", 2}, {"home_goals", 1}, {"away_goals", 0}});
        matches.push_back({{"match_id", 52}, {"gameweek", 2}, {"home_team_id", 2},
                           {"away_team_id", 6}, {"home_goals", 0}, {"away_goals", 0}});
        auto events = testutil::stats_events();
        events.push_back({{"event_id", 910}, {"match_id", 51}, {"player_id", 10},
                          {"team_id", 1}, {"event_type", "Touch"},
                          {"source_x", 5.0}, {"source_y", 5.0}});
        events.push_back({{"event_id", 911}, {"match_id", 52}, {"player_id", 20},
                          {"team_id", 2}, {"event_type", "Touch"},
                          {"source_x", 5.0}, {"source_y", 5.0}});
        const auto ds = parse_dataset(matches.dump(), events.dump(), teams.dump(),
                                      testutil::stats_players().dump(), {});
        CHECK(ds.discard.gameweek_filtered_matches == 1);
        CHECK(ds.discard.gameweek_filtered_events == 1);
        CHECK(ds.discard.league_filtered_matches == 1);
        CHECK(ds.discard.league_filtered_events == 1);
        CHECK(ds.matches.size() == 5);
        // league roster only lists teams in the configured competition
        for (const auto& t : ds.teams) CHECK(t.competition == "Italy");

        // the gameweek filter wins when both would apply
        matches = testutil::stats_matches();
        matches.push_back({{"match_id", 53}, {"gameweek", 12}, {"home_team_id", 1},
                           {"away_team_id", 6}, {"home_goals", 0}, {"away_goals", 0}});
        const auto ds2 = parse_dataset(matches.dump(), testutil::stats_events().dump(),
                                       teams.dump(), testutil::stats_players().dump(), {});
        CHECK(ds2.discard.gameweek_filtered_matches == 1);
        CHECK(ds2.discard.league_filtered_matches == 0);
    }

    TEST_CASE("empty kept dataset rejected") {
        CHECK_THROWS_AS(parse_dataset("[]", "[]", testutil::stats_teams().dump(),
                                      testutil::stats_players().dump(), {}),
                        EmptyDatasetError);
    }

    TEST_CASE("field mapping renames raw keys") {
        json matches = json::array();
        matches.push_back({{"wyId", 11}, {"gw", 1}, {"home", 1}, {"away", 2},
                           {"hg", 2}, {"ag", 0}});
        ParseOptions opt;
        opt.mapping.matches = {{"match_id", "wyId"}, {"gameweek", "gw"},
                               {"home_team_id", "home"}, {"away_team_id", "away"},
                               {"home_goals", "hg"}, {"away_goals", "ag"}};
        const auto ds = parse_dataset(matches.dump(), "[]", testutil::stats_teams().dump(),
                                      testutil::stats_players().dump(), opt);
        CHECK(ds.matches.size() == 1);
        CHECK(ds.matches[0].match_id == 11);
        CHECK(ds.matches[0].home_goals == 2);
    }

    TEST_CASE("missing required field is a parse error") {
        json matches = json::array();
        matches.push_back({{"match_id", 11}, {"gameweek", 1}, {"home_team_id", 1}});
        CHECK_THROWS_AS(parse_dataset(matches.dump(), "[]", testutil::stats_teams().dump(),
                                      testutil::stats_players().dump(), {}),
                        ParseError);
    }
}

namespace {

json squad_teams() {
    return json::array({
        {{"team_id", 7}, {"name", "Xanto Flyers"}, {"competition", "Italy"}},
        {{"team_id", 8}, {"name", "Ygrit Harbor"}, {"competition", "Italy"}},
    });
}

json squad_players() {
    return json::array({
        {{"player_id", 71}, {"name", "Xanto One"}, {"current_team_id", 7}},
        {{"player_id", 72}, {"name", "Xanto Two"}, {"current_team_id", 7}},
        {{"player_id", 73}, {"name", "Xanto Three"}, {"current_team_id", 7}},
        {{"player_id", 81}, {"name", "Ygrit One"}, {"current_team_id", 8}},
        {{"player_id", 82}, {"name", "Ygrit Two"}, {"current_team_id", 8}},
    });
}

json squad_match(json impacts) {
    json lineups = json::array({
        {{"player_id", 71}, {"starter", true}, {"minute_on", 0}, {"minute_off", 90}},
        {{"player_id", 72}, {"starter", true}, {"minute_on", 0}, {"minute_off", 60}},
        {{"player_id", 73}, {"starter", false}, {"minute_on", 60}, {"minute_off", 90}},
        {{"player_id", 81}, {"starter", true}, {"minute_on", 0}, {"minute_off", 90}},
        {{"player_id", 82}, {"starter", true}, {"minute_on", 0}, {"minute_off", 90}},
    });
    return json::array({{{"match_id", 91},
                         {"gameweek", 1},
                         {"home_team_id", 7},
                         {"away_team_id", 8},
                         {"home_goals", 3},
                         {"away_goals", 1},
                         {"lineups", lineups},
                         {"impactful_events", impacts}}});
}

json squad_impacts() {
    return json::array({
        {{"kind", "goal"}, {"player_id", 71}, {"minute", 10}},
        {{"kind", "goal"}, {"player_id", 71}, {"minute", 50}},
        {{"kind", "own_goal"}, {"player_id", 82}, {"minute", 85}},
        {{"kind", "goal"}, {"player_id", 81}, {"minute", 70}},
        {{"kind", "yellow_card"}, {"player_id", 72}, {"minute", 30}},
        {{"kind", "red_card"}, {"player_id", 82}, {"minute", 80}},
        {{"kind", "substitution"}, {"player_id", 73}, {"minute", 60}},
    });
}

Tables squad_tables(json impacts, TablesOptions opts = {}) {
    const auto ds = parse_dataset(squad_match(std::move(impacts)).dump(), "[]",
                                  squad_teams().dump(), squad_players().dump(), {});
    return build_tables(ds, opts);
}

}  // namespace

TEST_SUITE("tables") {
    TEST_CASE("team week rows carry points and opponents") {
        const auto t = squad_tables(squad_impacts());
        REQUIRE(t.team_week.size() == 2);
        const auto& home = team_week_lookup(t, 7, 1);
        CHECK(home.goals_scored == 3);
        CHECK(home.points == 3);
        CHECK(home.opposing_team_id == 8);
        CHECK(home.side == Side::Home);
        const auto& away = team_week_lookup(t, 8, 1);
        CHECK(away.goals_scored == 1);
        CHECK(away.points == 0);
        CHECK(away.opposing_team_id == 7);
        CHECK(away.side == Side::Away);
    }

    TEST_CASE("draw scores one point each") {
        auto matches = squad_match(json::array());
        matches[0]["home_goals"] = 2;
        matches[0]["away_goals"] = 2;
        const auto ds = parse_dataset(matches.dump(), "[]", squad_teams().dump(),
                                      squad_players().dump(), {});
        const auto t = build_tables(ds);
        CHECK(team_week_lookup(t, 7, 1).points == 1);
        CHECK(team_week_lookup(t, 8, 1).points == 1);
    }

    TEST_CASE("player week rows: goals, cards, minutes") {
        const auto t = squad_tables(squad_impacts());
        REQUIRE(t.player_week.size() == 5);
        const auto row = [&](Id pid) -> const PlayerWeekRow& {
            for (const auto& r : t.player_week) {
                if (r.player_id == pid) return r;
            }
            throw std::runtime_error("missing player row");
        };
        CHECK(row(71).goals == 2);
        CHECK(row(71).started_first_xi);
        CHECK(row(71).minutes_played == 90);
        CHECK(row(71).opposing_team_id == 8);
        CHECK(row(72).yellow_cards == 1);
        CHECK(row(72).minutes_played == 60);
        CHECK_FALSE(row(73).started_first_xi);
        CHECK(row(73).minutes_played == 30);
        CHECK(row(81).goals == 1);
        CHECK(row(81).opposing_team_id == 7);
        CHECK(row(82).red_cards == 1);
        CHECK(row(82).goals == 0);  // own goal not credited by default
    }

    TEST_CASE("own goal crediting is switchable") {
        TablesOptions opts;
        opts.credit_own_goals_to_player = true;
        const auto t = squad_tables(squad_impacts(), opts);
        for (const auto& r : t.player_week) {
            if (r.player_id == 82) CHECK(r.goals == 1);
        }
    }

    TEST_CASE("card limits enforced") {
        auto impacts = squad_impacts();
        impacts.push_back({{"kind", "yellow_card"}, {"player_id", 72}, {"minute", 40}});
        impacts.push_back({{"kind", "yellow_card"}, {"player_id", 72}, {"minute", 44}});
        CHECK_THROWS_AS(squad_tables(impacts), IntegrityError);

        impacts = squad_impacts();
        impacts.push_back({{"kind", "red_card"}, {"player_id", 82}, {"minute", 88}});
        CHECK_THROWS_AS(squad_tables(impacts), IntegrityError);
    }

    TEST_CASE("missing score rejected at table build") {
        auto matches = squad_match(json::array());
        matches[0].erase("home_goals");
        const auto ds = parse_dataset(matches.dump(), "[]", squad_teams().dump(),
                                      squad_players().dump(), {});
        CHECK_THROWS_AS(build_tables(ds), IntegrityError);
    }

    TEST_CASE("two fixtures for one team in a gameweek rejected") {
        auto matches = testutil::stats_matches();
        matches.push_back({{"match_id", 61}, {"gameweek", 1}, {"home_team_id", 1},
                           {"away_team_id", 5}, {"home_goals", 0}, {"away_goals", 0}});
        const auto ds = parse_dataset(matches.dump(), testutil::stats_events().dump(),
                                      testutil::stats_teams().dump(),
                                      testutil::stats_players().dump(), {});
        CHECK_THROWS_AS(build_tables(ds), IntegrityError);
    }

    TEST_CASE("event rows carry anchor regions") {
        const auto t = testutil::stats_tables();
        REQUIRE(t.events.size() == 20);
        int passes_at_origin = 0;
        for (const auto& e : t.events) {
            if (e.event_type == EventType::SimplePass) {
                CHECK(e.region == Region{0, 0});  // anchored at dest, not source
                ++passes_at_origin;
            }
        }
        CHECK(passes_at_origin == 3);
    }

    TEST_CASE("csv export") {
        const auto t = testutil::stats_tables();
        const auto dir = testutil::temp_dir("csv");
        export_tables_csv(t, dir);
        const auto team_week = read_file(dir + "/team_week.csv");
        CHECK(team_week.rfind("match_id,team_id,opposing_team_id,gameweek,side,goals_scored,points\n", 0) == 0);
        CHECK(team_week.find("11,1,2,1,home,2,3") != std::string::npos);
        const auto events = read_file(dir + "/events.csv");
        CHECK(events.find("[region 0 , 0]") != std::string::npos);
        for (const char* name : {"teams_info.csv", "players_info.csv", "player_week.csv"}) {
            CHECK(std::filesystem::exists(dir + "/" + std::string(name)));
        }
    }

    TEST_CASE("lookups throw for unknown keys") {
        const auto t = testutil::stats_tables();
        CHECK_THROWS_AS(t.team(999), NotFoundError);
        CHECK_THROWS_AS(team_week_lookup(t, 2, 3), NotFoundError);  // B idle in gw3
    }
}

TEST_SUITE("stats") {
    TEST_CASE("standings after each gameweek") {
        const auto t = testutil::stats_tables();
        const auto gw1 = standings(t, 1);
        REQUIRE(gw1.size() == 5);
        CHECK(gw1[0].team_id == 1);  // Arvo 3pts
        CHECK(gw1[0].points_cum == 3);
        CHECK(gw1[1].team_id == 3);  // Corvett 1pt, name before Durano
        CHECK(gw1[2].team_id == 4);
        CHECK(gw1[3].team_id == 2);  // Brindel 0pts, name before Enso
        CHECK(gw1[4].team_id == 5);

        const auto gw2 = standings(t, 2);
        CHECK(gw2[0].team_id == 3);  // Corvett 4pts after winning gw2
        CHECK(gw2[0].points_cum == 4);
        CHECK(gw2[1].team_id == 1);

        const auto gw4 = standings(t, 4);
        CHECK(gw4[0].team_id == 1);
        CHECK(gw4[0].points_cum == 9);
        CHECK(gw4[0].goals_cum == 5);
        CHECK(standings_row(gw4, 3).rank == 2);
        CHECK(standings_row(gw4, 4).rank == 3);
    }

    TEST_CASE("standings exclusive of the gameweek") {
        const auto t = testutil::stats_tables();
        const auto before_gw2 = standings(t, 2, false);
        CHECK(standings_row(before_gw2, 1).rank == 1);
        CHECK(standings_row(before_gw2, 1).points_cum == 3);
    }

    TEST_CASE("standings rejects out-of-range gameweeks") {
        const auto t = testutil::stats_tables();
        CHECK_THROWS_AS(standings(t, 0), DomainError);
        CHECK_THROWS_AS(standings(t, 5), DomainError);
    }

    TEST_CASE("progression verdicts") {
        const auto t = testutil::stats_tables();
        const auto down = progression(t, 1, 1, 2);
        CHECK(down.rank_start == 1);
        CHECK(down.rank_end == 2);
        CHECK(down.verdict == ProgressionVerdict::StepBackwards);

        const auto up = progression(t, 3, 1, 2);
        CHECK(up.rank_start == 2);
        CHECK(up.rank_end == 1);
        CHECK(up.verdict == ProgressionVerdict::Improvement);

        const auto flat = progression(t, 4, 1, 4);
        CHECK(flat.rank_start == 3);
        CHECK(flat.rank_end == 3);
        CHECK(flat.verdict == ProgressionVerdict::Unchanged);

        CHECK_THROWS_AS(progression(t, 1, 2, 2), DomainError);
        CHECK_THROWS_AS(progression(t, 1, 3, 2), DomainError);
    }

    TEST_CASE("comparisons pick and order the named teams") {
        const auto t = testutil::stats_tables();
        const auto rows = compare_teams(t, {1, 3}, 2);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].team_id == 3);
        CHECK(rows[1].team_id == 1);
        CHECK_THROWS_AS(compare_teams(t, {1}, 2), DomainError);
        CHECK_THROWS_AS(compare_teams(t, {1, 1}, 2), DomainError);
    }

    TEST_CASE("cumulative averages with half-up rounding") {
        const auto t = testutil::stats_tables();
        const auto a4 = cumulative_average(t, 1, 4, AverageMetric::Goals);
        CHECK(a4.arithmetic_string() == "5 / 4 = 1.3");  // 1.25 rounds half-up
        CHECK(a4.played_all);

        const auto c3 = cumulative_average(t, 3, 3, AverageMetric::Goals);
        CHECK(c3.arithmetic_string() == "4 / 3 = 1.3");

        const auto a2 = cumulative_average(t, 1, 2, AverageMetric::Points);
        CHECK(a2.arithmetic_string() == "3 / 2 = 1.5");

        const auto c4 = cumulative_average(t, 3, 4, AverageMetric::Points);
        CHECK(c4.denominator == 3);  // missed gw4, denominator falls back
        CHECK_FALSE(c4.played_all);
        CHECK(c4.arithmetic_string() == "4 / 3 = 1.3");

        const auto d4 = cumulative_average(t, 4, 4, AverageMetric::Goals);
        CHECK(d4.arithmetic_string() == "1 / 2 = 0.5");
        CHECK_FALSE(d4.played_all);

        const auto b1 = cumulative_average(t, 2, 1, AverageMetric::Points);
        CHECK(b1.arithmetic_string() == "0 / 1 = 0.0");
        CHECK(b1.played_all);

        CHECK_THROWS_AS(cumulative_average(t, 5, 4, AverageMetric::Goals), NotFoundError);
        CHECK_THROWS_AS(cumulative_average(t, 1, 0, AverageMetric::Goals), DomainError);
        CHECK_THROWS_AS(cumulative_average(t, 1, 9, AverageMetric::Goals), DomainError);
    }

    TEST_CASE("event decomposition shares and ordering") {
        const auto t = testutil::stats_tables();
        const auto d = event_decomposition(t, 1, 1, 1, EventType::Touch);
        CHECK(d.total_count == 10);
        REQUIRE(d.top5.size() == 5);
        CHECK(d.top5[0].region == Region{0, 0});
        CHECK(d.top5[0].pct == 40);
        CHECK(d.top5[1].region == Region{1, 0});
        CHECK(d.top5[1].pct == 20);
        // singletons tie and order by (col, row); the sixth region drops off
        CHECK(d.top5[2].region == Region{2, 1});
        CHECK(d.top5[3].region == Region{3, 2});
        CHECK(d.top5[4].region == Region{4, 3});
        CHECK(d.top5[2].pct == 10);

        const auto passes = event_decomposition(t, 1, 1, 1, EventType::SimplePass);
        CHECK(passes.total_count == 3);
        REQUIRE(passes.top5.size() == 1);
        CHECK(passes.top5[0].region == Region{0, 0});
        CHECK(passes.top5[0].pct == 100);
    }

    TEST_CASE("share rounding is half-up") {
        const auto t = testutil::stats_tables();
        const auto d = event_decomposition(t, 3, 1, 1, EventType::Touch);
        CHECK(d.total_count == 7);
        REQUIRE(d.top5.size() == 4);
        CHECK(d.top5[0].pct == 43);  // 3/7
        CHECK(d.top5[1].pct == 29);  // 2/7
        CHECK(d.top5[2].pct == 14);  // 1/7
        CHECK(d.top5[3].pct == 14);
    }

    TEST_CASE("per-match totals divide by matches played in range") {
        const auto t = testutil::stats_tables();
        const auto d = event_decomposition(t, 1, 1, 4, EventType::Touch, true);
        CHECK(d.total_count == 3);  // 10 touches over 4 matches, 2.5 rounds up
        CHECK(d.top5[0].pct == 40);  // shares stay relative to the raw total

        const auto empty = event_decomposition(t, 2, 2, 4, EventType::Touch);
        CHECK(empty.total_count == 0);
        CHECK(empty.top5.empty());

        CHECK_THROWS_AS(event_decomposition(t, 1, 3, 2, EventType::Touch), DomainError);
        CHECK_THROWS_AS(event_decomposition(t, 1, 0, 2, EventType::Touch), DomainError);
    }

    TEST_CASE("season ranking averages per match played") {
        const auto t = testutil::stats_tables();
        const auto rows = season_event_ranking(t, EventType::Touch);
        REQUIRE(rows.size() == 5);
        CHECK(rows[0].team_id == 1);
        CHECK(rows[0].avg_text() == "2.50");
        CHECK(rows[1].team_id == 3);
        CHECK(rows[1].avg_text() == "2.33");
        // zero-average tie breaks by name: Brindel, Durano, Enso
        CHECK(rows[2].team_id == 2);
        CHECK(rows[3].team_id == 4);
        CHECK(rows[4].team_id == 5);
        CHECK(season_rank_row(rows, 3).rank == 2);
        CHECK_THROWS_AS(season_rank_row(rows, 99), NotFoundError);
    }
}
