#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "footgpt/curate.hpp"
#include "footgpt/fixture.hpp"
#include "footgpt/oracle.hpp"
#include "footgpt/util.hpp"
#include "helpers.hpp"

using namespace footgpt;
using nlohmann::json;

namespace {

QueryParams weekly(Id team, int gw, WeeklyAspect aspect) {
    QueryParams q;
    q.family = Family::WeeklyStanding;
    q.team = team;
    q.gameweek = gw;
    q.weekly_aspect = aspect;
    return q;
}

std::vector<std::string> chunk_lines(const Corpus& corpus) {
    std::vector<std::string> lines;
    for (const auto& chunk : corpus.chunks) {
        for (const auto& part : split(chunk.text, '\n')) lines.push_back(part);
    }
    return lines;
}

void sweep_league(const Tables& t, const CurationConfig& cfg) {
    for (Family f : all_families()) {
        for (const auto& q : enumerate_family(t, cfg, f)) {
            const auto gold = answer(t, cfg, q);
            for (int slot = 0; slot < variant_count(q); ++slot) {
                const std::string question = render_question(t, cfg, q, slot);
                const std::string ans = render_answer(t, cfg, q, slot);
                CAPTURE(question);
                CAPTURE(ans);
                REQUIRE(question.rfind("Question : footgpt, ", 0) == 0);
                REQUIRE(ans.rfind("Answer : ", 0) == 0);
                const auto report = grade(ans, gold);
                REQUIRE(report.verdict == Verdict::Correct);
                const auto parsed = parse_question(t, question);
                REQUIRE(to_params(parsed) == to_params(q));
            }
        }
    }
}

Tables verde_tables() {
    json teams = json::array({
        {{"team_id", 1}, {"name", "Verde United"}, {"competition", "Italy"}},
        {{"team_id", 2}, {"name", "Verde City"}, {"competition", "Italy"}},
        {{"team_id", 3}, {"name", "Rosso Town"}, {"competition", "Italy"}},
        {{"team_id", 4}, {"name", "Giallo Park"}, {"competition", "Italy"}},
    });
    json players = json::array({
        {{"player_id", 10}, {"name", "P One"}, {"current_team_id", 1}},
        {{"player_id", 20}, {"name", "P Two"}, {"current_team_id", 2}},
        {{"player_id", 30}, {"name", "P Three"}, {"current_team_id", 3}},
        {{"player_id", 40}, {"name", "P Four"}, {"current_team_id", 4}},
    });
    json matches = json::array({
        {{"match_id", 1}, {"gameweek", 1}, {"home_team_id", 1},
         {"away_team_id", 2}, {"home_goals", 1}, {"away_goals", 0}},
        {{"match_id", 2}, {"gameweek", 1}, {"home_team_id", 3},
         {"away_team_id", 4}, {"home_goals", 0}, {"away_goals", 0}},
    });
    return build_tables(parse_dataset(matches.dump(), "[]", teams.dump(),
                                      players.dump(), {}));
}

}  // namespace

TEST_SUITE("families") {
    TEST_CASE("question and answer goldens") {
        const auto t = testutil::stats_tables();
        CurationConfig cfg;

        CHECK(render_question(t, cfg, weekly(1, 1, WeeklyAspect::Full), 0) ==
              "Question : footgpt, where is team Arvo United placed of Italy in "
              "gameweek 1?");
        CHECK(render_answer(t, cfg, weekly(1, 1, WeeklyAspect::Goals), 1) ==
              "Answer : Arvo United scored 2 goals during gameweek 1 against "
              "Brindel City.");

        QueryParams avg;
        avg.family = Family::CumulativeAverage;
        avg.team = 1;
        avg.gameweek = 2;
        avg.metric = AverageMetric::Goals;
        CHECK(render_answer(t, cfg, avg, 0) ==
              "Answer : till gameweek 2 in league Italy, team Arvo United scored "
              "1.0 goals on average : 2 / 2 = 1.0");

        QueryParams dec;
        dec.family = Family::EventDecomposition;
        dec.event_aspect = EventAspect::Single;
        dec.team = 1;
        dec.gameweek = 1;
        dec.event_type = EventType::Touch;
        CHECK(render_answer(t, cfg, dec, 0) ==
              "Answer : team Arvo United on gameweek 1 did 10 Touch(s) / regional "
              "decomposition : 40% in [region 0 , 0]; 20% in [region 1 , 0]; 10% "
              "in [region 2 , 1]; 10% in [region 3 , 2]; 10% in [region 4 , 3]");

        QueryParams rank;
        rank.family = Family::SeasonRanking;
        rank.team = 1;
        rank.event_type = EventType::Touch;
        CHECK(render_answer(t, cfg, rank, 0) ==
              "Answer : Team Arvo United ranks 1 out of 5 teams in terms of Touch "
              "made per match at the end in league Italy on season 2017/2018  "
              "(average count : 2.50).");
        CHECK(render_question(t, cfg, rank, 1) ==
              "Question : footgpt, where does team Arvo United rank in terms of "
              "Touch made per match at the end in league Italy on season "
              "2017/2018 ?");

        QueryParams multi;
        multi.family = Family::MultiComparison;
        multi.teams = {1, 3};
        multi.gameweek = 2;
        CHECK(render_answer(t, cfg, multi, 1) ==
              "Answer : on gameweek 2 in italy : Corvett Rovers > Arvo United");

        QueryParams prog;
        prog.family = Family::Progression;
        prog.team = 1;
        prog.gw_start = 1;
        prog.gw_end = 2;
        CHECK(render_answer(t, cfg, prog, 0) ==
              "Answer : Team Arvo United held the 1st position on gameweek 1. "
              "Moving to gameweek 2, it now stands at rank 2. This is a step "
              "backwards.");

        QueryParams duel;
        duel.family = Family::PairwiseComparison;
        duel.pairwise_aspect = PairwiseAspect::MatchBetter;
        duel.team = 3;
        duel.team_b = 1;
        duel.gameweek = 2;
        CHECK(render_answer(t, cfg, duel, 0) ==
              "Answer : Corvett Rovers was better for this gameweek.");

        QueryParams self;
        self.family = Family::SelfAwareness;
        self.self_q = 1;
        CHECK(render_answer(t, cfg, self, 0) ==
              "Answer : I have data on all teams that participated in league "
              "italy during the first four gameweeks of 2017/2018 season.");
    }

    TEST_CASE("enumeration counts on the hand league") {
        const auto t = testutil::stats_tables();
        CurationConfig cfg;
        const auto count = [&](Family f) {
            return enumerate_family(t, cfg, f).size();
        };
        CHECK(count(Family::WeeklyStanding) == 40);     // 10 fixtures x 4 aspects
        CHECK(count(Family::Progression) == 15);        // 3 windows x 5 teams
        CHECK(count(Family::MultiComparison) == 4);     // 1 group x 4 gameweeks
        CHECK(count(Family::PairwiseComparison) == 13);  // 9 detail + 4 decisive
        CHECK(count(Family::CumulativeAverage) == 20);  // 10 fixtures x 2 metrics
        CHECK(count(Family::EventDecomposition) == 6);
        CHECK(count(Family::SeasonRanking) == 55);  // 5 teams x 11 event types
        CHECK(count(Family::SelfAwareness) == 3);
    }

    TEST_CASE("enumeration respects the family filter") {
        const auto t = testutil::stats_tables();
        CurationConfig cfg;
        cfg.families_enabled = {"self_awareness"};
        CHECK(enumerate_family(t, cfg, Family::WeeklyStanding).empty());
        CHECK(enumerate_family(t, cfg, Family::SelfAwareness).size() == 3);
    }

    TEST_CASE("variant slots are deterministic and in range") {
        const auto t = testutil::stats_tables();
        const auto q = weekly(1, 1, WeeklyAspect::Full);
        for (int i = 0; i < 5; ++i) {
            const int slot = variant_slot(q, i);
            CHECK(slot >= 0);
            CHECK(slot < variant_count(q));
            CHECK(slot == variant_slot(q, i));
        }
        QueryParams self;
        self.family = Family::SelfAwareness;
        CHECK(variant_count(self) == 1);
        CHECK(variant_slot(self, 3) == 0);
    }

    TEST_CASE("params round trip for every family") {
        const auto t = testutil::stats_tables();
        CurationConfig cfg;
        for (Family f : all_families()) {
            for (const auto& q : enumerate_family(t, cfg, f)) {
                const auto p = to_params(q);
                CHECK(to_params(query_from_params(p)) == p);
            }
        }
    }

    TEST_CASE("every hand-league pair grades correct and parses back") {
        const auto t = testutil::stats_tables();
        CurationConfig cfg;
        sweep_league(t, cfg);
    }

    TEST_CASE("oracle text matches the canonical variant") {
        const auto t = testutil::stats_tables();
        CurationConfig cfg;
        const auto q = weekly(1, 1, WeeklyAspect::Goals);
        CHECK(answer(t, cfg, q).text == render_answer(t, cfg, q, 0));
    }
}

TEST_SUITE("oracle") {
    TEST_CASE("grading verdict boundaries") {
        const auto t = testutil::stats_tables();
        CurationConfig cfg;
        const auto gold = answer(t, cfg, weekly(1, 1, WeeklyAspect::Goals));

        CHECK(grade("no data available", gold).verdict == Verdict::Wrong);

        const auto partial = grade(
            "Arvo United scored 9 goals during gameweek 7 against Brindel City.",
            gold);
        CHECK(partial.verdict == Verdict::Partial);
        CHECK(partial.score == doctest::Approx(0.5));

        const auto full = grade(
            "Playing Brindel City on gameweek 1, Arvo United found the net 2 times.",
            gold);
        CHECK(full.verdict == Verdict::Correct);
        CHECK(full.score == doctest::Approx(1.0));
    }

    TEST_CASE("entity mentions cannot feed numeric facts") {
        GoldAnswer gold;
        gold.facts.entities.push_back({"team", "Bologna FC 1909"});
        gold.facts.numeric.push_back({"year", 1909, 0});
        CHECK(grade("Bologna FC 1909 played well", gold).verdict ==
              Verdict::Partial);
        CHECK(grade("Bologna FC 1909 was founded in 1909", gold).verdict ==
              Verdict::Correct);

        GoldAnswer region_gold;
        region_gold.facts.entities.push_back({"region", "[region 2 , 1]"});
        region_gold.facts.numeric.push_back({"total", 2, 0});
        CHECK(grade("[region 2 , 1] saw the most action", region_gold).verdict ==
              Verdict::Partial);
        CHECK(grade("2 events landed in [region 2 , 1]", region_gold).verdict ==
              Verdict::Correct);
    }

    TEST_CASE("ordinals, percentages and season years") {
        GoldAnswer gold;
        gold.facts.numeric.push_back({"rank", 4, 0});
        gold.facts.numeric.push_back({"share", 25, 0});
        CHECK(grade("finished 4th with 25% of the events", gold).verdict ==
              Verdict::Correct);

        GoldAnswer years;
        years.facts.numeric.push_back({"y1", 2017, 0});
        years.facts.numeric.push_back({"y2", 2018, 0});
        CHECK(grade("that was the 2017/2018 campaign", years).verdict ==
              Verdict::Correct);
    }

    TEST_CASE("numeric tolerances per precision") {
        const auto single = [](double expected, int decimals, const char* text) {
            GoldAnswer gold;
            gold.facts.numeric.push_back({"v", expected, decimals});
            return grade(text, gold).verdict;
        };
        CHECK(single(2.7, 1, "around 2.74") == Verdict::Correct);
        CHECK(single(2.7, 1, "around 2.76") == Verdict::Wrong);
        CHECK(single(2.50, 2, "exactly 2.504") == Verdict::Correct);
        CHECK(single(2.50, 2, "exactly 2.506") == Verdict::Wrong);
        CHECK(single(3, 0, "count 3") == Verdict::Correct);
        CHECK(single(3, 0, "count 3.01") == Verdict::Wrong);
    }

    TEST_CASE("numbers are consumed as a multiset") {
        GoldAnswer gold;
        gold.facts.numeric.push_back({"a", 2, 0});
        gold.facts.numeric.push_back({"b", 2, 0});
        CHECK(grade("2 and 2 again", gold).verdict == Verdict::Correct);
        CHECK(grade("only one 2 here", gold).verdict == Verdict::Partial);
    }

    TEST_CASE("gold without facts is rejected") {
        GoldAnswer empty;
        CHECK_THROWS_AS(grade("anything", empty), DomainError);
    }

    TEST_CASE("questions without a family are unsupported") {
        const auto t = testutil::stats_tables();
        CHECK_THROWS_AS(parse_question(t, "footgpt, tell me a joke"),
                        UnsupportedQuestionError);
        CHECK_THROWS_AS(
            parse_question(t, "on average what did team Arvo United manage "
                              "till gameweek 2 ?"),
            UnsupportedQuestionError);
        CHECK_THROWS_AS(
            parse_question(t, "how many goals did team Arvo United score ?"),
            UnsupportedQuestionError);
    }

    TEST_CASE("unknown teams raise not-found") {
        const auto t = testutil::stats_tables();
        CHECK_THROWS_AS(
            parse_question(t, "where is team Nessuno Rangers placed of Italy in "
                              "gameweek 1?"),
            NotFoundError);
    }

    TEST_CASE("shared name words are ambiguous") {
        const auto t = verde_tables();
        try {
            parse_question(t, "how many goals did team Verde score on gameweek 1 ?");
            CHECK(false);
        } catch (const AmbiguityError& e) {
            REQUIRE(e.candidates().size() == 2);
            CHECK(std::string(e.what()).find("verde") != std::string::npos);
        }
        const auto q = parse_question(
            t, "how many goals did team Verde United score on gameweek 1 ?");
        CHECK(q.team == 1);
        const auto q2 = parse_question(
            t, "how many goals did team Rosso score on gameweek 1 ?");
        CHECK(q2.team == 3);
    }

    TEST_CASE("club nicknames resolve to full names") {
        json teams = json::array({
            {{"team_id", 1}, {"name", "SSC Napoli"}, {"competition", "Italy"}},
            {{"team_id", 2}, {"name", "Torino FC"}, {"competition", "Italy"}},
        });
        json players = json::array({
            {{"player_id", 10}, {"name", "P One"}, {"current_team_id", 1}},
        });
        json matches = json::array({
            {{"match_id", 1}, {"gameweek", 1}, {"home_team_id", 1},
             {"away_team_id", 2}, {"home_goals", 3}, {"away_goals", 0}},
        });
        const auto t = build_tables(
            parse_dataset(matches.dump(), "[]", teams.dump(), players.dump(), {}));
        CHECK(parse_question(t, "how many goals did napoli score on gameweek 1 ?")
                  .team == 1);
        CHECK(parse_question(t, "how many goals did SSC Napoli score on "
                                "gameweek 1 ?")
                  .team == 1);
        CHECK(parse_question(t, "what was torino's goal count on gameweek 1 ?")
                  .team == 2);
    }

    TEST_CASE("self awareness questions short-circuit") {
        const auto t = testutil::stats_tables();
        CHECK(parse_question(t, "What is footgpt ?").self_q == 0);
        CHECK(parse_question(t, "How many teams in total are in your dataset?")
                  .self_q == 1);
        CHECK(parse_question(t, "can footgpt give answers related to individual "
                                "players?")
                  .self_q == 2);
        CHECK(parse_question(t, "What is footgpt ?").family ==
              Family::SelfAwareness);
    }
}

TEST_SUITE("corpus") {
    TEST_CASE("token estimate") {
        CHECK(approx_token_count("") == 0);
        CHECK(approx_token_count("hello") == 2);   // ceil(1 * 1.3)
        CHECK(approx_token_count("a b c") == 4);   // ceil(3 * 1.3)
        CHECK(approx_token_count("one two three four five six seven eight nine "
                                 "ten") == 13);
    }

    TEST_CASE("same configuration reproduces bytes") {
        const auto t = testutil::stats_tables();
        CurationConfig cfg;
        cfg.seed = 42;
        const auto a = build_corpus(t, cfg);
        const auto b = build_corpus(t, cfg);
        REQUIRE(a.chunks.size() == b.chunks.size());
        for (std::size_t i = 0; i < a.chunks.size(); ++i) {
            CHECK(a.chunks[i].text == b.chunks[i].text);
            CHECK(a.chunks[i].seq_no == b.chunks[i].seq_no);
        }

        const auto dir = testutil::temp_dir("corpus_bytes");
        emit_jsonl(a.chunks, dir + "/a.jsonl");
        emit_jsonl(b.chunks, dir + "/b.jsonl");
        CHECK(read_file(dir + "/a.jsonl") == read_file(dir + "/b.jsonl"));
        emit_manifest(a, dir + "/a.json");
        emit_manifest(b, dir + "/b.json");
        CHECK(read_file(dir + "/a.json") == read_file(dir + "/b.json"));
    }

    TEST_CASE("different seeds reorder the same datapoints") {
        const auto t = testutil::stats_tables();
        CurationConfig cfg1, cfg2;
        cfg1.seed = 1;
        cfg2.seed = 2;
        const auto a = build_corpus(t, cfg1);
        const auto b = build_corpus(t, cfg2);

        CHECK(a.datapoints == b.datapoints);  // content is seed-independent
        CHECK(a.config_hash == b.config_hash);
        CHECK(a.total_datapoints == b.total_datapoints);
        CHECK(a.per_family_counts == b.per_family_counts);

        auto lines_a = chunk_lines(a);
        auto lines_b = chunk_lines(b);
        CHECK(lines_a != lines_b);  // the shuffle actually moved something
        std::sort(lines_a.begin(), lines_a.end());
        std::sort(lines_b.begin(), lines_b.end());
        CHECK(lines_a == lines_b);

        auto sorted_points = a.datapoints;
        std::sort(sorted_points.begin(), sorted_points.end());
        CHECK(lines_a == sorted_points);  // packing never splits a datapoint
    }

    TEST_CASE("packing respects the token budget") {
        const auto files = fixture_gen(6, 6, 77);
        const auto ds = parse_dataset(files.matches_json, files.events_json,
                                      files.teams_json, files.players_json, {});
        const auto t = build_tables(ds);
        CurationConfig cfg;
        const auto corpus = build_corpus(t, cfg);
        REQUIRE(corpus.chunks.size() > 1);

        std::size_t text_total = 0;
        for (std::size_t i = 0; i < corpus.chunks.size(); ++i) {
            const auto& chunk = corpus.chunks[i];
            CHECK(chunk.seq_no == static_cast<int>(i));
            CHECK(chunk.approx_tokens <= cfg.max_tokens);
            CHECK(chunk.approx_tokens == approx_token_count(chunk.text));
            text_total += chunk.text.size();
        }
        std::size_t point_total = 0;
        for (const auto& p : corpus.datapoints) point_total += p.size();
        const std::size_t joins = corpus.datapoints.size() - corpus.chunks.size();
        CHECK(text_total == point_total + joins);
    }

    TEST_CASE("oversized datapoints are rejected") {
        const auto t = testutil::stats_tables();
        CurationConfig cfg;
        cfg.max_tokens = 10;
        CHECK_THROWS_AS(build_corpus(t, cfg), ConfigError);
    }

    TEST_CASE("exact duplicates collapse once") {
        const auto t = testutil::stats_tables();
        CurationConfig cfg;
        const auto base = build_corpus(t, cfg);

        QAPair teacher;
        teacher.question = "Question : footgpt, what does the teacher say?";
        teacher.answer = "Answer : the teacher repeats itself.";
        const auto with_dupes = build_corpus(t, cfg, {teacher, teacher});
        CHECK(with_dupes.dedup_count == base.dedup_count + 1);
        CHECK(with_dupes.total_datapoints == base.total_datapoints + 1);
        CHECK(with_dupes.per_family_counts.at("teacher_qa") == 1);

        const auto paragraphs = build_corpus(t, cfg, {}, {"A paragraph.", "A paragraph."});
        CHECK(paragraphs.dedup_count == base.dedup_count + 1);
        CHECK(paragraphs.per_family_counts.at("teacher_paragraph") == 1);
    }

    TEST_CASE("jsonl lines carry text and seq only") {
        const auto t = testutil::stats_tables();
        CurationConfig cfg;
        const auto corpus = build_corpus(t, cfg);
        const auto dir = testutil::temp_dir("corpus_jsonl");
        const auto n = emit_jsonl(corpus.chunks, dir + "/c.jsonl");
        CHECK(n == static_cast<std::int64_t>(corpus.chunks.size()));

        const auto content = read_file(dir + "/c.jsonl");
        const auto lines = split(content, '\n');
        int seq = 0;
        for (const auto& line : lines) {
            if (line.empty()) continue;
            const auto doc = json::parse(line);
            CHECK(doc.size() == 2);
            CHECK(doc.at("seq") == seq++);
            CHECK(!doc.at("text").get<std::string>().empty());
        }
        CHECK(seq == static_cast<int>(corpus.chunks.size()));
        CHECK(content.rfind("{\"text\":", 0) == 0);
    }

    TEST_CASE("manifest fields") {
        const auto t = testutil::stats_tables();
        CurationConfig cfg;
        cfg.seed = 9;
        const auto corpus = build_corpus(t, cfg);
        const auto dir = testutil::temp_dir("corpus_manifest");
        emit_manifest(corpus, dir + "/m.json");
        const auto text = read_file(dir + "/m.json");
        CHECK(text.find("timestamp") == std::string::npos);

        const auto m = json::parse(text);
        CHECK(m.size() == 5);
        CHECK(m.at("seed") == 9);
        CHECK(m.at("config_hash") == config_hash_of(cfg));
        CHECK(m.at("dedup_count") == corpus.dedup_count);
        CHECK(m.at("total_datapoints") == corpus.total_datapoints);
        std::int64_t sum = 0;
        for (const auto& [family, count] : m.at("per_family_counts").items()) {
            CHECK(count.get<std::int64_t>() > 0);
            sum += count.get<std::int64_t>();
        }
        CHECK(sum == corpus.total_datapoints);
    }

    TEST_CASE("config hash tracks settings but not the seed") {
        CurationConfig a, b;
        a.seed = 1;
        b.seed = 77;
        CHECK(config_hash_of(a) == config_hash_of(b));
        b.max_tokens = 256;
        CHECK(config_hash_of(a) != config_hash_of(b));
        CurationConfig c;
        c.families_enabled = {"self_awareness"};
        CHECK(config_hash_of(a) != config_hash_of(c));
        CurationConfig d;
        d.season_label = "2018/2019";
        CHECK(config_hash_of(a) != config_hash_of(d));
    }

    TEST_CASE("family filter shapes the corpus") {
        const auto t = testutil::stats_tables();
        CurationConfig cfg;
        cfg.families_enabled = {"self_awareness"};
        const auto corpus = build_corpus(t, cfg);
        CHECK(corpus.total_datapoints == 3);
        CHECK(corpus.per_family_counts.size() == 1);
        CHECK(corpus.per_family_counts.at("self_awareness") == 3);
        for (const auto& p : corpus.datapoints) {
            CHECK(p.rfind("Question : footgpt, ", 0) == 0);
        }
    }
}

TEST_SUITE("synthetic_league") {
    TEST_CASE("every generated pair grades correct and parses back") {
        const auto files = fixture_gen(6, 6, 77);
        const auto ds = parse_dataset(files.matches_json, files.events_json,
                                      files.teams_json, files.players_json, {});
        const auto t = build_tables(ds);
        CurationConfig cfg;
        sweep_league(t, cfg);
    }
}
