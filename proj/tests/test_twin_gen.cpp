#include "bfmn/error.hpp"
#include "bfmn/text.hpp"
#include "bfmn/twin_gen.hpp"
#include "fake_chat.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <set>
#include <thread>

using namespace bfmn;

namespace {

std::string fixture(const std::string& name) {
    return read_file(std::string(BFMN_TEST_DATA) + "/fixtures/replies/" + name);
}

// Education x gender x socioeconomic grid at fixed age and year.
std::string render_grid(PromptLanguage lang) {
    std::string out;
    for (auto edu : {Education::highschool_final_year, Education::bsc_psychology, Education::bsc_physics}) {
        for (auto g : {Gender::male, Gender::female}) {
            for (int s = 0; s < 5; ++s) {
                TwinProfile p;
                p.education = edu;
                p.gender = g;
                p.socioeconomic = static_cast<Socioeconomic>(s);
                p.age = edu == Education::highschool_final_year ? 19 : 20;
                p.year = edu == Education::highschool_final_year ? kHighSchoolFinalYear : 2;
                out += "[" + p.canonical() + "]\n" + render_prompt(p, lang) + "\n";
            }
        }
    }
    return out;
}

EndpointConfig quick_endpoint() {
    EndpointConfig e;
    e.model = "test-model";
    e.sleeper = [](std::chrono::milliseconds) {};
    return e;
}

std::string good_reply(const std::string& cue) {
    return "{\"associations\": [\"" + cue + "_a\", \"" + cue + "_b\", \"" + cue + "_c\"], \"valence\": {\"" + cue +
           "\": 3, \"" + cue + "_a\": 4, \"" + cue + "_b\": 2, \"" + cue + "_c\": 5}}";
}

} // namespace

TEST_CASE("prompt goldens for the 3x2x5 grid") {
    for (auto [lang, name] : {std::pair{PromptLanguage::it, "prompts_it.txt"}, std::pair{PromptLanguage::en, "prompts_en.txt"}}) {
        const std::string path = std::string(BFMN_TEST_DATA) + "/golden/" + name;
        const std::string got = render_grid(lang);
        if (std::getenv("BFMN_UPDATE_GOLDEN")) write_file(path, got);
        CHECK(got == read_file(path));
    }
}

TEST_CASE("Italian morphology follows gender in every slot") {
    TwinProfile f;
    f.gender = Gender::female;
    f.age = 20;
    f.year = 2;
    f.education = Education::bsc_psychology;
    f.socioeconomic = Socioeconomic::medium;
    const auto it = render_prompt(f, PromptLanguage::it);
    CHECK(it.find("Sei una studentessa italiana di 20 anni. Sei iscritta al secondo anno di laurea triennale in "
                  "Psicologia. Sei cresciuta e vivi in condizioni socio-economiche medie.") == 0);
    TwinProfile m = f;
    m.gender = Gender::male;
    const auto im = render_prompt(m, PromptLanguage::it);
    CHECK(im.find("Sei un studente italiano di 20 anni. Sei iscritto") == 0);

    // Only the gender morphemes differ.
    auto strip = [](std::string s) {
        for (const char* w : {"una ", "un ", "studentessa", "studente", "italiana", "italiano", "iscritta", "iscritto",
                              "cresciuta", "cresciuto"}) {
            for (auto pos = s.find(w); pos != std::string::npos; pos = s.find(w)) s.erase(pos, std::string(w).size());
        }
        return s;
    };
    CHECK(strip(it) == strip(im));

    const auto en = render_prompt(f, PromptLanguage::en);
    CHECK(en.rfind("You are a female student of Italian nationality, aged 20. You are enrolled in the second year of "
                   "a Bachelor's degree in Psychology. You grew up and live in medium socio-economic conditions.",
                   0) == 0);
}

TEST_CASE("profile sampling ranges, determinism and uniformity") {
    for (std::uint64_t s = 0; s < 500; ++s) {
        const auto hs = sample_profile(s, Education::highschool_final_year);
        CHECK((hs.age >= 18 && hs.age <= 19));
        CHECK(hs.year == kHighSchoolFinalYear);
        const auto b = sample_profile(s, Education::bsc_physics);
        CHECK((b.age >= 18 && b.age <= 25));
        CHECK((b.year >= 1 && b.year <= 3));
        CHECK_NOTHROW(b.validate());
    }
    CHECK(sample_profile(42, Education::bsc_psychology) == sample_profile(42, Education::bsc_psychology));
    std::array<int, 5> bands{};
    for (std::uint64_t s = 0; s < 10000; ++s) ++bands[static_cast<int>(sample_profile(s, Education::bsc_psychology).socioeconomic)];
    for (int b : bands) CHECK(std::abs(b / 10000.0 - 0.2) <= 0.02);
}

TEST_CASE("likert words") {
    CHECK(likert_from_text("molto positivo") == 5);
    CHECK(likert_from_text("Molto Negativa") == 1);
    CHECK(likert_from_text("neutro") == 3);
    CHECK(likert_from_text("4") == 4);
    CHECK(likert_from_text("4.0") == 4);
    CHECK(likert_from_text("4.5") == std::nullopt);
    CHECK(likert_from_text("6") == std::nullopt);
    CHECK(likert_from_text("boh") == std::nullopt);
    for (int r = 1; r <= 5; ++r) {
        CHECK(likert_from_text(likert_label(r, PromptLanguage::it)) == r);
        CHECK(likert_from_text(likert_label(r, PromptLanguage::en)) == r);
    }
}

TEST_CASE("reply parser fixtures") {
    const auto well = parse_association_reply(fixture("well_formed.txt"), "matematica");
    REQUIRE(well);
    CHECK(well->responses == std::vector<std::string>{"numeri", "ansia", "calcolo"});
    CHECK(well->valences.size() == 4);
    CHECK(well->valences.at("ansia") == 1);
    CHECK(well->warnings.empty());

    const auto over = parse_association_reply(fixture("over_long.txt"), "matematica");
    REQUIRE(over);
    CHECK(over->responses == std::vector<std::string>{"numeri", "ansia", "calcolo"});
    CHECK(over->valences.count("professore") == 0);
    CHECK(over->valences.size() == 4);
    REQUIRE(over->warnings.size() == 1);
    CHECK(over->warnings[0].find("kept the first 3") != std::string::npos);

    const auto words = parse_association_reply(fixture("word_likert.txt"), "matematica");
    REQUIRE(words);
    CHECK(words->valences.at("matematica") == 3);
    CHECK(words->valences.at("numeri") == 5);
    CHECK(words->valences.at("ansia") == 1);
    CHECK(words->valences.count("scuola") == 0); // unmappable -> unrated
    CHECK(words->warnings.size() == 1);

    CHECK_FALSE(parse_association_reply(fixture("malformed.txt"), "matematica").has_value());
    CHECK_FALSE(parse_association_reply("{\"associations\": \"numeri\"}", "x").has_value());

    for (const auto* p : {&well, &over, &words}) {
        AssociationRecord rec;
        rec.participant_id = "gpt_oss_psychology_001";
        rec.cue = "matematica";
        rec.responses = (*p)->responses;
        rec.valences = (*p)->valences;
        CHECK_NOTHROW(rec.validate());
    }
}

TEST_CASE("questionnaire reply parser") {
    CHECK(parse_masit_reply("{\"items\": [1, 2, \"molto positivo\"]}", 3) == std::vector<int>{1, 2, 5});
    CHECK_FALSE(parse_masit_reply("{\"items\": [1, 2]}", 3).has_value());
    CHECK_FALSE(parse_masit_reply("{\"items\": [1, 2, 7]}", 3).has_value());
}

TEST_CASE("ids and planning") {
    CHECK(twin_participant_id("psychology", 1) == "gpt_oss_psychology_001");
    CHECK(group_tag_from_id(twin_participant_id("highschool", 62)) == "gpt_highschool");
    const auto tasks = plan_twins(62, Education::highschool_final_year, 9);
    REQUIRE(tasks.size() == 62);
    CHECK(tasks[61].participant_id == "gpt_oss_highschool_062");
    CHECK(tasks[0].group == "gpt_highschool");
    CHECK(plan_twins(62, Education::highschool_final_year, 9)[10].profile == tasks[10].profile);
}

TEST_CASE("run_twin happy path, truncation and malformed retries") {
    CueSet cues{"t", {"matematica", "scuola", "numero"}};
    FakeChat chat([](const ChatRequest& req, std::size_t) {
        const auto cue = cue_of(req);
        if (cue == "scuola") return FakeChat::ok("not json at all");
        return FakeChat::ok(good_reply(cue));
    });
    RequestLog log;
    const auto task = plan_twins(1, Education::bsc_psychology, 1)[0];
    auto ep = quick_endpoint();
    ep.max_malformed_retries = 2;
    const auto run = run_twin(task, cues, ep, chat, log, PromptLanguage::it);
    CHECK(run.parsed.size() == 2);
    CHECK(run.missing_cues == std::vector<std::string>{"scuola"});
    CHECK(run.requests_issued == 1 + 3 + 1);
    CHECK(log.appended() == 5);
    CHECK(run.parsed[0].responses.size() == 3);
    CHECK(run.parsed[0].valences.size() == 4);
    CHECK(run.model_id == "test-model");
    // The persona goes in the system message, the cue task in the user message.
    const auto reqs = chat.requests();
    CHECK(reqs[0].messages[0].role == "system");
    CHECK(reqs[0].messages[0].content == render_prompt(task.profile, PromptLanguage::it));
}

TEST_CASE("reruns with a populated log issue no requests") {
    TempDir dir("twins");
    CueSet cues{"t", {"a", "b"}};
    MasItSpec masit{{"Fare un esame", "Leggere un grafico"}, {}};
    auto script = [](const ChatRequest& req, std::size_t) {
        if (req.messages.back().content.find("\"items\"") != std::string::npos) return FakeChat::ok("{\"items\": [4, 2]}");
        return FakeChat::ok(good_reply(cue_of(req)));
    };
    const auto tasks = plan_twins(5, Education::bsc_physics, 3);
    FakeChat first(script);
    std::vector<TwinRun> a;
    {
        RequestLog log(dir / "requests.jsonl");
        a = simulate_twins(tasks, cues, quick_endpoint(), first, log, PromptLanguage::en, &masit);
    }
    CHECK(first.calls() == 5 * 3);
    REQUIRE(a[0].mas_it.has_value());
    CHECK(a[0].mas_it->total == 6);

    FakeChat second(script);
    RequestLog reloaded(dir / "requests.jsonl");
    const auto b = simulate_twins(tasks, cues, quick_endpoint(), second, reloaded, PromptLanguage::en, &masit);
    CHECK(second.calls() == 0);
    REQUIRE(b.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(b[i].task.participant_id == a[i].task.participant_id);
        REQUIRE(b[i].parsed.size() == a[i].parsed.size());
        CHECK(b[i].parsed[0].responses == a[i].parsed[0].responses);
    }
}

TEST_CASE("request key depends on profile, participant, cue and model") {
    const auto t = plan_twins(2, Education::bsc_physics, 3);
    CHECK(request_key(t[0], "a", "m") == request_key(t[0], "a", "m"));
    CHECK(request_key(t[0], "a", "m") != request_key(t[1], "a", "m"));
    CHECK(request_key(t[0], "a", "m") != request_key(t[0], "b", "m"));
    CHECK(request_key(t[0], "a", "m") != request_key(t[0], "a", "n"));
}

TEST_CASE("bounded concurrency") {
    std::atomic<int> in_flight{0}, peak{0};
    FakeChat chat([&](const ChatRequest& req, std::size_t) {
        const int now = ++in_flight;
        int p = peak.load();
        while (now > p && !peak.compare_exchange_weak(p, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
        --in_flight;
        return FakeChat::ok(good_reply(cue_of(req)));
    });
    RequestLog log;
    auto ep = quick_endpoint();
    ep.max_in_flight = 3;
    const auto runs = simulate_twins(plan_twins(12, Education::bsc_psychology, 5), CueSet{"t", {"x", "y"}}, ep, chat,
                                     log, PromptLanguage::it);
    CHECK(runs.size() == 12);
    CHECK(peak.load() <= 3);
    CHECK(chat.calls() == 24);
    for (std::size_t i = 0; i < runs.size(); ++i) CHECK(runs[i].task.participant_id == twin_participant_id("psychology", i + 1));
}

TEST_CASE("endpoint errors propagate out of the pool") {
    FakeChat chat([](const ChatRequest&, std::size_t) { return FakeChat::status(401); });
    RequestLog log;
    try {
        simulate_twins(plan_twins(4, Education::bsc_psychology, 5), CueSet{"t", {"x"}}, quick_endpoint(), chat, log,
                       PromptLanguage::it);
        FAIL("expected AuthError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AuthError);
    }
}

TEST_CASE("group size matching") {
    std::vector<TwinRun> runs;
    for (const auto& t : plan_twins(100, Education::highschool_final_year, 1)) runs.push_back(TwinRun{t});
    const auto m = match_group_sizes(runs, {{"gpt_highschool", 62}}, 4);
    CHECK(m.size() == 62);
    std::set<std::string> ids;
    for (const auto& r : m) ids.insert(r.task.participant_id);
    CHECK(ids.size() == 62);
    CHECK(match_group_sizes(runs, {{"gpt_highschool", 62}}, 4)[5].task.participant_id == m[5].task.participant_id);
    CHECK(match_group_sizes(runs, {{"gpt_highschool", 100}}, 4).size() == 100);
    CHECK(match_group_sizes(runs, {{"gpt_highschool", 0}}, 4).empty());
    try {
        match_group_sizes(runs, {{"gpt_highschool", 101}}, 4);
        FAIL("expected InsufficientTwins");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientTwins);
    }
}

TEST_CASE("cue set files") {
    TempDir dir("cues");
    const auto set = load_cue_set(dir.file("3.txt", "# set 3\nMatematica\n\nscuola\n"));
    CHECK(set.id == "3");
    CHECK(set.cues == std::vector<std::string>{"matematica", "scuola"});
    CHECK_THROWS_AS(load_cue_set(dir.file("empty.txt", "# nothing\n")), Error);
}

TEST_CASE("declared cue-set size") {
    TempDir dir("cuesize");
    const auto set = load_cue_set(dir.file("5.txt", "#! size = 42\nfisica\nansia\n"));
    CHECK(set.cues.size() == 2);
    CHECK(set.size() == 42);
    CHECK(load_cue_set(dir.file("s.txt", "#! size = 1\na\nb\n")).size() == 2);
    CHECK_THROWS_AS(load_cue_set(dir.file("bad.txt", "#! size = many\na\n")), Error);

    const std::map<std::string, std::size_t> sizes{{"1", 50}, {"2", 51}, {"3", 40}, {"4", 41}, {"5", 42}};
    for (const auto& [id, n] : sizes) {
        const auto s = load_cue_set(std::string(BFMN_REPO_DATA) + "/cue_sets/" + id + ".txt");
        CHECK(s.id == id);
        CHECK(s.size() == n);
    }
}
