#include "bfmn/twin_gen.hpp"
#include "bfmn/error.hpp"
#include "bfmn/rng.hpp"
#include "bfmn/text.hpp"

#include <charconv>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <thread>

namespace bfmn {

using nlohmann::json;

std::string to_string(Gender g) { return g == Gender::male ? "male" : "female"; }

std::string to_string(Education e) {
    switch (e) {
    case Education::highschool_final_year: return "highschool_final_year";
    case Education::bsc_psychology: return "bsc_psychology";
    case Education::bsc_physics: return "bsc_physics";
    }
    return "bsc_psychology";
}

std::string to_string(Socioeconomic s) {
    switch (s) {
    case Socioeconomic::low: return "low";
    case Socioeconomic::medium_low: return "medium_low";
    case Socioeconomic::medium: return "medium";
    case Socioeconomic::medium_high: return "medium_high";
    case Socioeconomic::high: return "high";
    }
    return "medium";
}

std::optional<Education> parse_education(std::string_view s) {
    if (s == "highschool" || s == "highschool_final_year") return Education::highschool_final_year;
    if (s == "psychology" || s == "bsc_psychology") return Education::bsc_psychology;
    if (s == "physics" || s == "bsc_physics") return Education::bsc_physics;
    return std::nullopt;
}

std::optional<PromptLanguage> parse_language(std::string_view s) {
    if (s == "it") return PromptLanguage::it;
    if (s == "en") return PromptLanguage::en;
    return std::nullopt;
}

void TwinProfile::validate() const {
    if (age < kMinTwinAge || age > kMaxTwinAge) throw Error(ErrorCode::BadInput, "twin age outside 18..25");
    if (education == Education::highschool_final_year) {
        if (year != kHighSchoolFinalYear) throw Error(ErrorCode::BadInput, "high-school twins are in the final year");
    } else if (year < 1 || year > 3) {
        throw Error(ErrorCode::BadInput, "BSc year outside 1..3");
    }
}

std::string TwinProfile::canonical() const {
    return to_string(gender) + "|" + std::to_string(age) + "|" + to_string(education) + "|" + std::to_string(year) +
           "|" + to_string(socioeconomic);
}

TwinProfile sample_profile(std::uint64_t seed, Education education) {
    Rng rng(seed);
    TwinProfile p;
    p.education = education;
    p.gender = rng.below(2) == 0 ? Gender::male : Gender::female;
    if (education == Education::highschool_final_year) {
        p.age = static_cast<int>(rng.between(kMinTwinAge, kMaxHighSchoolAge));
        p.year = kHighSchoolFinalYear;
    } else {
        p.age = static_cast<int>(rng.between(kMinTwinAge, kMaxTwinAge));
        p.year = static_cast<int>(rng.between(1, 3));
    }
    p.socioeconomic = static_cast<Socioeconomic>(rng.below(5));
    return p;
}

namespace {

struct ItalianMorphology {
    const char* article;
    const char* student;
    const char* italian;
    const char* enrolled;
    const char* grown;
};

constexpr ItalianMorphology kMale{"un", "studente", "italiano", "iscritto", "cresciuto"};
constexpr ItalianMorphology kFemale{"una", "studentessa", "italiana", "iscritta", "cresciuta"};

std::string italian_year(int year) {
    switch (year) {
    case 1: return "primo";
    case 2: return "secondo";
    case 3: return "terzo";
    case kHighSchoolFinalYear: return "quinto";
    }
    throw Error(ErrorCode::BadInput, "no Italian ordinal for year " + std::to_string(year));
}

std::string english_year(int year) {
    switch (year) {
    case 1: return "first";
    case 2: return "second";
    case 3: return "third";
    case kHighSchoolFinalYear: return "final";
    }
    throw Error(ErrorCode::BadInput, "no English ordinal for year " + std::to_string(year));
}

std::string italian_education(Education e) {
    switch (e) {
    case Education::highschool_final_year: return "scuola superiore";
    case Education::bsc_psychology: return "laurea triennale in Psicologia";
    case Education::bsc_physics: return "laurea triennale in Fisica";
    }
    return {};
}

std::string english_education(Education e) {
    switch (e) {
    case Education::highschool_final_year: return "high school";
    case Education::bsc_psychology: return "a Bachelor's degree in Psychology";
    case Education::bsc_physics: return "a Bachelor's degree in Physics";
    }
    return {};
}

std::string italian_socioeconomic(Socioeconomic s) {
    switch (s) {
    case Socioeconomic::low: return "basse";
    case Socioeconomic::medium_low: return "medio-basse";
    case Socioeconomic::medium: return "medie";
    case Socioeconomic::medium_high: return "medio-alte";
    case Socioeconomic::high: return "alte";
    }
    return {};
}

std::string english_socioeconomic(Socioeconomic s) {
    switch (s) {
    case Socioeconomic::low: return "low";
    case Socioeconomic::medium_low: return "medium-low";
    case Socioeconomic::medium: return "medium";
    case Socioeconomic::medium_high: return "medium-high";
    case Socioeconomic::high: return "high";
    }
    return {};
}

} // namespace

std::string render_prompt(const TwinProfile& profile, PromptLanguage language) {
    profile.validate();
    if (language == PromptLanguage::it) {
        const auto& m = profile.gender == Gender::male ? kMale : kFemale;
        return std::string("Sei ") + m.article + " " + m.student + " " + m.italian + " di " +
               std::to_string(profile.age) + " anni. Sei " + m.enrolled + " al " + italian_year(profile.year) +
               " anno di " + italian_education(profile.education) + ". Sei " + m.grown +
               " e vivi in condizioni socio-economiche " + italian_socioeconomic(profile.socioeconomic) +
               ". Pertanto, ricorda che le risposte da fornire nel compito devono essere originali, creative e "
               "coerenti con le tue caratteristiche uniche.";
    }
    return "You are a " + to_string(profile.gender) + " student of Italian nationality, aged " +
           std::to_string(profile.age) + ". You are enrolled in the " + english_year(profile.year) + " year of " +
           english_education(profile.education) + ". You grew up and live in " +
           english_socioeconomic(profile.socioeconomic) +
           " socio-economic conditions. Therefore, remember that the responses you provide in the task should be "
           "original, creative, and consistent with your unique characteristics.";
}

std::string association_instruction(const std::string& cue, PromptLanguage language) {
    const json example{{"associations", {"...", "...", "..."}}, {"valence", {{cue, 3}}}};
    if (language == PromptLanguage::it) {
        return "Parola stimolo: \"" + cue +
               "\".\nScrivi le prime tre parole che ti vengono in mente leggendo questa parola. Poi valuta la "
               "valenza emotiva della parola stimolo e di ciascuna delle tue parole su una scala da 1 (molto "
               "negativo) a 5 (molto positivo), dove 3 significa neutro.\nRispondi esclusivamente con un oggetto "
               "JSON con le chiavi \"associations\" (lista delle tue parole) e \"valence\" (parola -> voto 1-5), "
               "per esempio: " +
               example.dump();
    }
    return "Cue word: \"" + cue +
           "\".\nWrite the first three words that come to mind when reading this word. Then rate the emotional "
           "valence of the cue word and of each of your words on a scale from 1 (very negative) to 5 (very "
           "positive), where 3 means neutral.\nAnswer only with a JSON object with the keys \"associations\" (list "
           "of your words) and \"valence\" (word -> rating 1-5), for example: " +
           example.dump();
}

std::string masit_instruction(const std::vector<std::string>& items, PromptLanguage language) {
    std::string list;
    for (std::size_t i = 0; i < items.size(); ++i) list += std::to_string(i + 1) + ". " + items[i] + "\n";
    if (language == PromptLanguage::it) {
        return "Indica quanta ansia proveresti in ciascuna situazione, da 1 (per niente ansioso) a 5 (molto "
               "ansioso).\n" +
               list + "Rispondi esclusivamente con un oggetto JSON {\"items\": [..]} con " +
               std::to_string(items.size()) + " numeri interi nell'ordine delle domande.";
    }
    return "Indicate how anxious you would feel in each situation, from 1 (not anxious at all) to 5 (very "
           "anxious).\n" +
           list + "Answer only with a JSON object {\"items\": [..]} holding " + std::to_string(items.size()) +
           " integers in item order.";
}

std::optional<int> likert_from_text(std::string_view text) {
    const std::string t = normalize_word(text);
    if (t.empty()) return std::nullopt;
    if (t[0] >= '1' && t[0] <= '5' && (t.size() == 1 || t[1] == ' ' || t[1] == '.' || t[1] == '(' || t[1] == ')')) {
        if (t.size() > 1 && t[1] == '.' && t.size() > 2 && t[2] != '0') return std::nullopt;
        return t[0] - '0';
    }
    static const std::map<std::string, int> words{
        {"molto negativo", 1},      {"molto negativa", 1},       {"very negative", 1},
        {"negativo", 2},            {"negativa", 2},             {"abbastanza negativo", 2},
        {"abbastanza negativa", 2}, {"negative", 2},             {"somewhat negative", 2},
        {"neutro", 3},              {"neutra", 3},               {"neutrale", 3},
        {"neutral", 3},             {"positivo", 4},             {"positiva", 4},
        {"abbastanza positivo", 4}, {"abbastanza positiva", 4},  {"positive", 4},
        {"somewhat positive", 4},   {"molto positivo", 5},       {"molto positiva", 5},
        {"very positive", 5},
    };
    if (auto it = words.find(t); it != words.end()) return it->second;
    return std::nullopt;
}

std::string likert_label(int rating, PromptLanguage language) {
    static const char* it[] = {"molto negativo", "negativo", "neutro", "positivo", "molto positivo"};
    static const char* en[] = {"very negative", "negative", "neutral", "positive", "very positive"};
    if (rating < kMinRating || rating > kMaxRating) throw Error(ErrorCode::BadInput, "rating outside 1..5");
    return (language == PromptLanguage::it ? it : en)[rating - 1];
}

namespace {

// The outermost {...} of a reply, ignoring code fences and prose around it.
std::optional<json> extract_json_object(const std::string& reply) {
    auto open = reply.find('{');
    auto close = reply.rfind('}');
    if (open == std::string::npos || close == std::string::npos || close < open) return std::nullopt;
    json parsed = json::parse(reply.substr(open, close - open + 1), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) return std::nullopt;
    return parsed;
}

const json* find_key(const json& obj, std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
        if (auto it = obj.find(k); it != obj.end()) return &*it;
    }
    return nullptr;
}

std::optional<int> rating_from_json(const json& v) {
    if (v.is_number_integer()) {
        auto r = v.get<long long>();
        if (r >= kMinRating && r <= kMaxRating) return static_cast<int>(r);
        return std::nullopt;
    }
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (d == std::floor(d) && d >= kMinRating && d <= kMaxRating) return static_cast<int>(d);
        return std::nullopt;
    }
    if (v.is_string()) return likert_from_text(v.get<std::string>());
    return std::nullopt;
}

} // namespace

std::optional<ParsedCue> parse_association_reply(const std::string& reply, const std::string& cue) {
    auto obj = extract_json_object(reply);
    if (!obj) return std::nullopt;
    const json* assoc = find_key(*obj, {"associations", "associazioni", "parole", "words"});
    if (assoc == nullptr || !assoc->is_array()) return std::nullopt;

    ParsedCue out;
    for (const auto& item : *assoc) {
        if (!item.is_string()) return std::nullopt;
        std::string w = normalize_word(item.get<std::string>());
        if (w.empty()) continue;
        out.responses.push_back(std::move(w));
    }
    if (out.responses.size() > kMaxResponses) {
        out.warnings.push_back("reply for '" + cue + "' had " + std::to_string(out.responses.size()) +
                               " associations; kept the first 3");
        out.responses.resize(kMaxResponses);
    }

    const json* val = find_key(*obj, {"valence", "valences", "valenze", "valenza", "ratings"});
    std::map<std::string, int> given;
    if (val != nullptr && val->is_object()) {
        for (auto it = val->begin(); it != val->end(); ++it) {
            const std::string word = normalize_word(it.key());
            if (auto r = rating_from_json(it.value())) {
                given[word] = *r;
            } else {
                out.warnings.push_back("unmappable rating for '" + word + "' left unrated");
            }
        }
    }
    auto keep = [&](const std::string& w) {
        if (auto it = given.find(w); it != given.end()) out.valences[w] = it->second;
    };
    keep(normalize_word(cue));
    for (const auto& r : out.responses) keep(r);
    return out;
}

std::optional<std::vector<int>> parse_masit_reply(const std::string& reply, std::size_t item_count) {
    auto obj = extract_json_object(reply);
    if (!obj) return std::nullopt;
    const json* items = find_key(*obj, {"items", "risposte", "answers"});
    if (items == nullptr || !items->is_array() || items->size() != item_count) return std::nullopt;
    std::vector<int> out;
    for (const auto& v : *items) {
        auto r = rating_from_json(v);
        if (!r) return std::nullopt;
        out.push_back(*r);
    }
    return out;
}

// --- request log -------------------------------------------------------------

RequestLog::RequestLog(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        json entry = json::parse(line, nullptr, false);
        // A torn final line from an interrupted run is skipped.
        if (entry.is_discarded() || !entry.is_object()) continue;
        if (entry.value("ok", false) && entry.contains("key") && entry.contains("raw_reply")) {
            ok_replies_[entry["key"].get<std::string>()] = entry["raw_reply"].get<std::string>();
        }
    }
}

std::optional<std::string> RequestLog::lookup(const std::string& key) const {
    std::lock_guard lock(mutex_);
    auto it = ok_replies_.find(key);
    if (it == ok_replies_.end()) return std::nullopt;
    return it->second;
}

void RequestLog::append(const std::string& key, const std::string& profile_hash, const std::string& participant_id,
                        const std::string& cue, const std::string& raw_reply, bool ok, int attempt) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);

    json entry{{"timestamp", stamp},     {"key", key}, {"profile_hash", profile_hash},
               {"participant_id", participant_id}, {"cue", cue}, {"attempt", attempt},
               {"ok", ok},               {"raw_reply", raw_reply}};
    std::lock_guard lock(mutex_);
    if (!path_.empty()) {
        std::ofstream out(path_, std::ios::app);
        if (!out) throw Error(ErrorCode::Io, "cannot append to request log " + path_);
        out << entry.dump() << '\n';
    }
    if (ok) ok_replies_[key] = raw_reply;
    ++appended_;
}

std::size_t RequestLog::appended() const {
    std::lock_guard lock(mutex_);
    return appended_;
}

// --- runs ----------------------------------------------------------------------

CueSet load_cue_set(const std::string& path, const std::string& id) {
    CueSet set;
    set.id = id.empty() ? std::filesystem::path(path).stem().string() : id;
    for (const auto& raw : split(read_file(path), '\n')) {
        std::string line = trim(raw);
        if (line.rfind("#!", 0) == 0) {
            auto eq = line.find('=');
            if (trim(line.substr(2, eq == std::string::npos ? 0 : eq - 2)) != "size") continue;
            std::size_t n = 0;
            const std::string v = trim(line.substr(eq + 1));
            auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
            if (ec != std::errc{} || ptr != v.data() + v.size() || n == 0) {
                throw Error(ErrorCode::BadInput, "cue set " + path + ": bad size directive '" + line + "'");
            }
            set.declared_size = n;
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        set.cues.push_back(normalize_word(line));
    }
    if (set.cues.empty()) throw Error(ErrorCode::BadInput, "cue set " + path + " is empty");
    return set;
}

std::string twin_participant_id(const std::string& group, std::size_t index) {
    char num[16];
    std::snprintf(num, sizeof num, "%03zu", index);
    return "gpt_oss_" + group + "_" + num;
}

std::string group_for_education(Education e) {
    switch (e) {
    case Education::highschool_final_year: return "highschool";
    case Education::bsc_psychology: return "psychology";
    case Education::bsc_physics: return "physics";
    }
    return "psychology";
}

std::vector<TwinTask> plan_twins(std::size_t n, Education education, std::uint64_t seed) {
    std::vector<TwinTask> tasks;
    const std::string group = group_for_education(education);
    for (std::size_t i = 1; i <= n; ++i) {
        tasks.push_back({sample_profile(derive_seed(seed, i), education), twin_participant_id(group, i),
                         "gpt_" + group});
    }
    return tasks;
}

std::string request_key(const TwinTask& task, const std::string& cue, const std::string& model) {
    return hex64(fnv1a64(task.profile.canonical() + "|" + task.participant_id + "|" + cue + "|" + model));
}

namespace {

// Reply for one task message: cached from the log, else fetched and parsed
// with up to max_malformed_retries re-asks. nullopt when every attempt was
// malformed.
template <typename Parsed, typename ParseFn>
std::optional<Parsed> ask(const TwinTask& task, const std::string& cue_key, const std::string& instruction,
                          const EndpointConfig& endpoint, ChatClient& client, RequestLog& log,
                          const std::string& system_prompt, ParseFn&& parse, TwinRun& run) {
    const std::string key = request_key(task, cue_key, endpoint.model);
    if (auto cached = log.lookup(key)) {
        if (auto parsed = parse(*cached)) {
            run.raw_responses[cue_key] = *cached;
            return parsed;
        }
    }
    ChatRequest req;
    req.model = endpoint.model;
    req.temperature = endpoint.temperature;
    req.max_tokens = endpoint.max_tokens;
    req.messages = {{"system", system_prompt}, {"user", instruction}};
    const std::string profile_hash = hex64(fnv1a64(task.profile.canonical()));

    for (int attempt = 0; attempt <= endpoint.max_malformed_retries; ++attempt) {
        ChatResponse res = complete_with_retry(client, req, endpoint);
        ++run.requests_issued;
        auto parsed = parse(res.content);
        log.append(key, profile_hash, task.participant_id, cue_key, res.content, parsed.has_value(), attempt);
        run.raw_responses[cue_key] = res.content;
        if (parsed) return parsed;
    }
    return std::nullopt;
}

} // namespace

TwinRun run_twin(const TwinTask& task, const CueSet& cues, const EndpointConfig& endpoint, ChatClient& client,
                 RequestLog& log, PromptLanguage language, const MasItSpec* masit) {
    TwinRun run;
    run.task = task;
    run.cue_set_id = cues.id;
    run.model_id = endpoint.model;
    const std::string system_prompt = render_prompt(task.profile, language);

    for (const auto& cue : cues.cues) {
        auto parsed = ask<ParsedCue>(
            task, cue, association_instruction(cue, language), endpoint, client, log, system_prompt,
            [&](const std::string& reply) { return parse_association_reply(reply, cue); }, run);
        if (!parsed) {
            run.missing_cues.push_back(cue);
            run.warnings.push_back(std::string(to_string(ErrorCode::MalformedAfterRetries)) + ": cue '" + cue +
                                   "' marked missing");
            continue;
        }
        for (auto& w : parsed->warnings) run.warnings.push_back(std::move(w));
        AssociationRecord rec;
        rec.participant_id = task.participant_id;
        rec.group_tag = group_tag_from_id(task.participant_id);
        rec.cue = cue;
        rec.responses = std::move(parsed->responses);
        rec.valences = std::move(parsed->valences);
        rec.validate();
        run.parsed.push_back(std::move(rec));
    }

    if (masit != nullptr && !masit->items.empty()) {
        const std::size_t n_items = masit->items.size();
        auto items = ask<std::vector<int>>(
            task, "#masit", masit_instruction(masit->items, language), endpoint, client, log, system_prompt,
            [&](const std::string& reply) { return parse_masit_reply(reply, n_items); }, run);
        if (items) {
            run.mas_it = MasItScore::make(task.participant_id, std::move(*items), masit->factors);
        } else {
            run.warnings.push_back(std::string(to_string(ErrorCode::MalformedAfterRetries)) + ": questionnaire missing");
        }
    }
    return run;
}

std::vector<TwinRun> simulate_twins(const std::vector<TwinTask>& tasks, const CueSet& cues,
                                    const EndpointConfig& endpoint, ChatClient& client, RequestLog& log,
                                    PromptLanguage language, const MasItSpec* masit) {
    std::vector<TwinRun> runs(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                runs[i] = run_twin(tasks[i], cues, endpoint, client, log, language, masit);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed = true;
            }
        }
    };
    const std::size_t n_workers = std::clamp<std::size_t>(endpoint.max_in_flight, 1, std::max<std::size_t>(1, tasks.size()));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }
    if (first_error) std::rethrow_exception(first_error);
    return runs;
}

std::vector<TwinRun> match_group_sizes(const std::vector<TwinRun>& twins,
                                       const std::map<std::string, std::size_t>& human_counts, std::uint64_t seed) {
    std::map<std::string, std::vector<std::size_t>> by_group;
    for (std::size_t i = 0; i < twins.size(); ++i) by_group[twins[i].task.group].push_back(i);

    std::vector<std::size_t> keep;
    for (const auto& [group, target] : human_counts) {
        const auto& available = by_group[group];
        if (available.size() < target) {
            throw Error(ErrorCode::InsufficientTwins, group + ": need " + std::to_string(target) + ", have " +
                                                          std::to_string(available.size()));
        }
        Rng rng(derive_seed(seed, fnv1a64(group)));
        IndexSampler sampler(available.size());
        for (auto idx : sampler.draw(target, rng)) keep.push_back(available[idx]);
    }
    std::sort(keep.begin(), keep.end());
    std::vector<TwinRun> out;
    out.reserve(keep.size());
    for (auto i : keep) out.push_back(twins[i]);
    return out;
}

} // namespace bfmn
