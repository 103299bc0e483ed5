#include "bfmn/ingestion.hpp"
#include "bfmn/error.hpp"
#include "bfmn/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <unordered_map>

namespace bfmn {

std::string_view to_string(Valence v) {
    switch (v) {
    case Valence::negative: return "negative";
    case Valence::neutral: return "neutral";
    case Valence::positive: return "positive";
    }
    return "neutral";
}

std::optional<Valence> parse_valence(std::string_view s) {
    if (s == "negative") return Valence::negative;
    if (s == "neutral") return Valence::neutral;
    if (s == "positive") return Valence::positive;
    return std::nullopt;
}

std::string_view to_string(Emotion e) {
    static constexpr std::array<std::string_view, 8> names{
        "joy", "trust", "fear", "surprise", "sadness", "disgust", "anger", "anticipation"};
    return names[static_cast<std::size_t>(e)];
}

void AssociationRecord::validate() const {
    if (responses.size() > kMaxResponses) {
        throw Error(ErrorCode::BadInput, participant_id + "/" + cue + ": more than 3 responses");
    }
    for (const auto& r : responses) {
        if (r.empty()) throw Error(ErrorCode::BadInput, participant_id + "/" + cue + ": blank response");
    }
    for (const auto& [word, rating] : valences) {
        bool known = word == cue || std::find(responses.begin(), responses.end(), word) != responses.end();
        if (!known) throw Error(ErrorCode::BadInput, participant_id + "/" + cue + ": rating for unknown word " + word);
        if (rating < kMinRating || rating > kMaxRating) {
            throw Error(ErrorCode::BadInput, participant_id + "/" + cue + ": rating out of range");
        }
    }
}

ColumnSpec ColumnSpec::from_config(const KvConfig& cfg) {
    ColumnSpec spec;
    auto set = [&](const char* key, std::string& field) {
        if (auto v = cfg.get(std::string("columns.") + key)) field = *v;
    };
    set("participant_id", spec.participant_id);
    set("cue", spec.cue);
    set("valence_cue", spec.valence_cue);
    for (std::size_t i = 0; i < kMaxResponses; ++i) {
        set(("response_" + std::to_string(i + 1)).c_str(), spec.responses[i]);
        set(("valence_r" + std::to_string(i + 1)).c_str(), spec.valence_responses[i]);
    }
    set("masit_participant_id", spec.masit_participant_id);
    set("masit_item_prefix", spec.masit_item_prefix);
    return spec;
}

std::string group_tag_from_id(const std::string& participant_id) {
    std::string id = normalize_word(participant_id);
    auto us = id.find_last_of('_');
    if (us != std::string::npos && us + 1 < id.size() &&
        std::all_of(id.begin() + static_cast<std::ptrdiff_t>(us) + 1, id.end(),
                    [](unsigned char c) { return std::isdigit(c) != 0; })) {
        id.erase(us);
    }
    constexpr std::string_view gpt_prefix = "gpt_oss_";
    if (id.rfind(gpt_prefix, 0) == 0) id = "gpt_" + id.substr(gpt_prefix.size());
    return id;
}

namespace {

std::optional<int> parse_int(std::string_view s) {
    std::string t = trim(s);
    // Accept "4" and "4.0" (spreadsheet exports).
    if (t.size() > 2 && t.compare(t.size() - 2, 2, ".0") == 0) t.resize(t.size() - 2);
    int value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) return std::nullopt;
    return value;
}

std::map<std::string, std::size_t> header_index(const std::vector<std::string>& header) {
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < header.size(); ++i) idx.emplace(trim(header[i]), i);
    return idx;
}

std::size_t require_column(const std::map<std::string, std::size_t>& idx, const std::string& name) {
    auto it = idx.find(name);
    if (it == idx.end()) throw Error(ErrorCode::MissingColumn, "column '" + name + "' not in header");
    return it->second;
}

const std::string& cell(const std::vector<std::string>& row, std::size_t i) {
    static const std::string empty;
    return i < row.size() ? row[i] : empty;
}

} // namespace

AssociationParse parse_associations_text(const std::string& csv_text, const ColumnSpec& spec) {
    auto rows = parse_csv(csv_text);
    if (rows.empty()) throw Error(ErrorCode::MissingColumn, "association file has no header");
    auto idx = header_index(rows.front());

    const std::size_t c_pid = require_column(idx, spec.participant_id);
    const std::size_t c_cue = require_column(idx, spec.cue);
    const std::size_t c_vcue = require_column(idx, spec.valence_cue);
    std::array<std::size_t, kMaxResponses> c_resp{}, c_val{};
    for (std::size_t i = 0; i < kMaxResponses; ++i) {
        c_resp[i] = require_column(idx, spec.responses[i]);
        c_val[i] = require_column(idx, spec.valence_responses[i]);
    }

    AssociationParse out;
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        auto diag = [&](const char* code, std::string msg) {
            out.diagnostics.push_back({r, code, std::move(msg)});
        };

        AssociationRecord rec;
        rec.participant_id = trim(cell(row, c_pid));
        rec.cue = normalize_word(cell(row, c_cue));
        if (rec.participant_id.empty() || rec.cue.empty()) {
            diag("BadRow", "missing participant id or cue");
            continue;
        }
        rec.group_tag = group_tag_from_id(rec.participant_id);

        bool bad = false;
        auto read_rating = [&](std::size_t col) -> std::optional<int> {
            std::string raw = trim(cell(row, col));
            if (raw.empty()) return std::nullopt;
            auto v = parse_int(raw);
            if (!v || *v < kMinRating || *v > kMaxRating) {
                diag("BadRating", "rating '" + raw + "' outside 1..5 in column " + cell(rows.front(), col));
                bad = true;
                return std::nullopt;
            }
            return v;
        };

        if (auto v = read_rating(c_vcue)) rec.valences[rec.cue] = *v;
        for (std::size_t i = 0; i < kMaxResponses; ++i) {
            std::string word = normalize_word(cell(row, c_resp[i]));
            auto rating = read_rating(c_val[i]);
            // Ratings given for blank responses are ignored.
            if (word.empty()) continue;
            rec.responses.push_back(word);
            if (rating) rec.valences[word] = *rating;
        }
        if (bad) continue;

        if (!seen.emplace(rec.participant_id, rec.cue).second) {
            diag("DuplicateParticipantRow", "participant " + rec.participant_id + " repeats cue '" + rec.cue + "'");
            continue;
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

AssociationParse parse_associations(const std::string& path, const ColumnSpec& spec) {
    return parse_associations_text(read_file(path), spec);
}

std::string write_associations_csv(const std::vector<AssociationRecord>& records, const ColumnSpec& spec) {
    std::string out = csv_escape(spec.participant_id) + "," + csv_escape(spec.cue);
    for (const auto& c : spec.responses) out += "," + csv_escape(c);
    out += "," + csv_escape(spec.valence_cue);
    for (const auto& c : spec.valence_responses) out += "," + csv_escape(c);
    out += "\n";
    auto rating = [](const AssociationRecord& rec, const std::string& w) -> std::string {
        auto it = rec.valences.find(w);
        return it == rec.valences.end() ? std::string{} : std::to_string(it->second);
    };
    for (const auto& rec : records) {
        out += csv_escape(rec.participant_id) + "," + csv_escape(rec.cue);
        for (std::size_t i = 0; i < kMaxResponses; ++i) {
            out += ",";
            if (i < rec.responses.size()) out += csv_escape(rec.responses[i]);
        }
        out += "," + rating(rec, rec.cue);
        for (std::size_t i = 0; i < kMaxResponses; ++i) {
            out += ",";
            if (i < rec.responses.size()) out += rating(rec, rec.responses[i]);
        }
        out += "\n";
    }
    return out;
}

CleanResult clean_participants(const std::vector<AssociationRecord>& records, std::size_t cue_set_size) {
    if (cue_set_size == 0) throw Error(ErrorCode::BadInput, "cue_set_size must be positive");

    std::map<std::string, std::size_t> given; // responses produced per participant
    for (const auto& rec : records) given[rec.participant_id] += rec.responses.size();

    const std::size_t expected = kMaxResponses * cue_set_size;
    std::set<std::string> drop;
    CleanResult out;
    for (const auto& [pid, n] : given) {
        std::size_t missing = n >= expected ? 0 : expected - n;
        // missing / expected >= 1/3, in integers.
        if (3 * missing >= expected) {
            drop.insert(pid);
            out.dropped_participants.push_back({pid, missing, expected});
        }
    }
    for (const auto& rec : records) {
        (drop.count(rec.participant_id) ? out.dropped : out.kept).push_back(rec);
    }
    return out;
}

// --- MAS-IT ----------------------------------------------------------------

std::string to_string(MasItFactor f) {
    switch (f) {
    case MasItFactor::evaluation: return "evaluation";
    case MasItFactor::everyday_social: return "everyday_social";
    case MasItFactor::passive_observation: return "passive_observation";
    }
    return "evaluation";
}

FactorMap factor_map_from_config(const KvConfig& cfg) {
    FactorMap map;
    for (auto f : {MasItFactor::evaluation, MasItFactor::everyday_social, MasItFactor::passive_observation}) {
        for (const auto& item : cfg.get_list("masit_factors." + to_string(f))) {
            auto v = parse_int(item);
            if (!v || *v < 1) throw Error(ErrorCode::BadConfig, "bad MAS-IT item index '" + item + "'");
            map[f].push_back(static_cast<std::size_t>(*v));
        }
    }
    return map;
}

MasItScore MasItScore::make(std::string participant_id, std::vector<int> items, const FactorMap& factors) {
    MasItScore s;
    s.participant_id = std::move(participant_id);
    for (int v : items) {
        if (v < kMinRating || v > kMaxRating) throw Error(ErrorCode::BadRating, "MAS-IT item outside 1..5");
        s.total += v;
    }
    for (const auto& [factor, indices] : factors) {
        int sum = 0;
        for (auto i : indices) {
            if (i == 0 || i > items.size()) {
                throw Error(ErrorCode::BadConfig, "MAS-IT factor references item " + std::to_string(i));
            }
            sum += items[i - 1];
        }
        s.factor_scores[factor] = sum;
    }
    s.item_scores = std::move(items);
    return s;
}

MasItParse parse_masit_text(const std::string& csv_text, const FactorMap& factors, const ColumnSpec& spec) {
    auto rows = parse_csv(csv_text);
    if (rows.empty()) throw Error(ErrorCode::MissingColumn, "MAS-IT file has no header");
    auto idx = header_index(rows.front());
    const std::size_t c_pid = require_column(idx, spec.masit_participant_id);

    // Item columns in header order.
    std::vector<std::size_t> item_cols;
    for (std::size_t i = 0; i < rows.front().size(); ++i) {
        if (trim(rows.front()[i]).rfind(spec.masit_item_prefix, 0) == 0) item_cols.push_back(i);
    }
    if (item_cols.empty()) throw Error(ErrorCode::MissingColumn, "no '" + spec.masit_item_prefix + "*' columns");

    MasItParse out;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        std::string pid = trim(cell(row, c_pid));
        if (pid.empty()) {
            out.diagnostics.push_back({r, "BadRow", "missing participant id"});
            continue;
        }
        std::vector<int> items;
        bool bad = false;
        for (auto c : item_cols) {
            auto v = parse_int(cell(row, c));
            if (!v || *v < kMinRating || *v > kMaxRating) {
                out.diagnostics.push_back({r, "BadRating", "item '" + cell(row, c) + "' outside 1..5"});
                bad = true;
                break;
            }
            items.push_back(*v);
        }
        if (bad) continue;
        if (!seen.insert(pid).second) {
            out.diagnostics.push_back({r, "DuplicateParticipantRow", "participant " + pid + " repeated"});
            continue;
        }
        out.scores.push_back(MasItScore::make(pid, std::move(items), factors));
    }
    return out;
}

MasItParse parse_masit(const std::string& path, const FactorMap& factors, const ColumnSpec& spec) {
    return parse_masit_text(read_file(path), factors, spec);
}

std::string write_masit_csv(const std::vector<MasItScore>& scores, std::size_t item_count) {
    std::string out = "participant_id";
    for (std::size_t i = 1; i <= item_count; ++i) {
        out += ",item_";
        if (i < 10) out += "0";
        out += std::to_string(i);
    }
    out += "\n";
    for (const auto& s : scores) {
        out += csv_escape(s.participant_id);
        for (std::size_t i = 0; i < item_count; ++i) {
            out += ",";
            if (i < s.item_scores.size()) out += std::to_string(s.item_scores[i]);
        }
        out += "\n";
    }
    return out;
}

std::string to_string(Subgroup s) {
    switch (s) {
    case Subgroup::low_anxiety: return "low_anxiety";
    case Subgroup::high_anxiety: return "high_anxiety";
    case Subgroup::excluded: return "excluded";
    case Subgroup::unsplit: return "unsplit";
    }
    return "unsplit";
}

double median_total(const std::vector<MasItScore>& scores) {
    if (scores.empty()) throw Error(ErrorCode::BadInput, "median of an empty sample");
    std::vector<int> totals;
    totals.reserve(scores.size());
    for (const auto& s : scores) totals.push_back(s.total);
    std::sort(totals.begin(), totals.end());
    const std::size_t n = totals.size();
    if (n % 2 == 1) return totals[n / 2];
    return 0.5 * (static_cast<double>(totals[n / 2 - 1]) + static_cast<double>(totals[n / 2]));
}

std::vector<GroupAssignment> assign_subgroups(const std::vector<MasItScore>& scores) {
    const double median = median_total(scores);
    std::vector<GroupAssignment> out;
    out.reserve(scores.size());
    for (const auto& s : scores) {
        const double t = s.total;
        Subgroup g = t < median ? Subgroup::low_anxiety : t > median ? Subgroup::high_anxiety : Subgroup::excluded;
        out.push_back({s.participant_id, g});
    }
    return out;
}

// --- lexical resources -----------------------------------------------------

const std::string& LexicalResources::lemmatize(const std::string& word) const {
    auto it = lemma_map.find(word);
    return it == lemma_map.end() ? word : it->second;
}

std::string LexicalResources::display(const std::string& word) const {
    auto it = translation_map.find(word);
    return it == translation_map.end() ? word : it->second;
}

namespace {

template <typename Fn>
void for_each_resource_line(const std::string& path, Fn&& fn) {
    std::string text = read_file(path);
    if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);
    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        fn(line_no, split_resource_line(line));
    }
}

template <typename Map, typename Value>
void insert_last_wins(Map& map, const std::string& key, Value value, const std::string& path, std::size_t line,
                      std::vector<std::string>& warnings) {
    auto [it, inserted] = map.insert_or_assign(key, std::move(value));
    if (!inserted) {
        warnings.push_back(path + ":" + std::to_string(line) + ": duplicate entry '" + key + "', keeping last");
    }
}

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

} // namespace

std::map<std::string, std::string> load_pair_map(const std::string& path, std::vector<std::string>& warnings) {
    std::map<std::string, std::string> map;
    for_each_resource_line(path, [&](std::size_t line, const std::vector<std::string>& f) {
        if (f.size() < 2 || f[0].empty() || f[1].empty()) {
            throw Error(ErrorCode::BadInput, path + ":" + std::to_string(line) + ": expected two columns");
        }
        insert_last_wins(map, normalize_word(f[0]), normalize_word(f[1]), path, line, warnings);
    });
    return map;
}

std::map<std::string, EmotionMask> load_emotion_lexicon(const std::string& path, std::vector<std::string>& warnings) {
    std::map<std::string, EmotionMask> lex;
    bool first = true;
    for_each_resource_line(path, [&](std::size_t line, const std::vector<std::string>& f) {
        const bool header_candidate = first;
        first = false;
        auto fail = [&](const std::string& why) {
            throw Error(ErrorCode::BadFlagRow, path + ":" + std::to_string(line) + ": " + why);
        };
        if (f.size() != 1 + kEmotionCount) {
            if (header_candidate) return;
            fail("expected word + 8 flags");
        }
        EmotionMask mask = 0;
        for (std::size_t i = 0; i < kEmotionCount; ++i) {
            const auto& flag = f[i + 1];
            if (flag == "1") {
                mask = static_cast<EmotionMask>(mask | (1u << i));
            } else if (flag != "0") {
                if (header_candidate) return;
                fail("flag '" + flag + "' is not 0/1");
            }
        }
        std::string word = normalize_word(f[0]);
        if (word.empty()) fail("empty word");
        insert_last_wins(lex, word, mask, path, line, warnings);
    });
    return lex;
}

std::map<std::string, double> load_concreteness_norms(const std::string& path, std::vector<std::string>& warnings) {
    std::map<std::string, double> norms;
    bool first = true;
    for_each_resource_line(path, [&](std::size_t line, const std::vector<std::string>& f) {
        const bool header_candidate = first;
        first = false;
        auto fail = [&](const std::string& why) {
            throw Error(ErrorCode::BadScore, path + ":" + std::to_string(line) + ": " + why);
        };
        if (f.size() < 2) fail("expected word and score");
        auto v = parse_double(f[1]);
        if (!v) {
            if (header_candidate) return;
            fail("score '" + f[1] + "' is not a number");
        }
        if (!std::isfinite(*v) || *v < kNormMin || *v > kNormMax) fail("score " + f[1] + " outside 1..5");
        std::string word = normalize_word(f[0]);
        if (word.empty()) fail("empty word");
        insert_last_wins(norms, word, *v, path, line, warnings);
    });
    return norms;
}

LexicalResources load_resources(const std::string& lemma_path, const std::string& emotion_path,
                                const std::string& concreteness_path, const std::string& translation_path) {
    LexicalResources res;
    if (!lemma_path.empty()) res.lemma_map = load_pair_map(lemma_path, res.warnings);
    if (!emotion_path.empty()) res.emotion_lexicon = load_emotion_lexicon(emotion_path, res.warnings);
    if (!concreteness_path.empty()) res.concreteness_norms = load_concreteness_norms(concreteness_path, res.warnings);
    if (!translation_path.empty()) {
        // Display strings keep their case.
        for_each_resource_line(translation_path, [&](std::size_t line, const std::vector<std::string>& f) {
            if (f.size() < 2) {
                throw Error(ErrorCode::BadInput, translation_path + ":" + std::to_string(line) + ": expected two columns");
            }
            insert_last_wins(res.translation_map, normalize_word(f[0]), f[1], translation_path, line, res.warnings);
        });
    }
    return res;
}

// --- edge frequencies ------------------------------------------------------

WordPair make_word_pair(const std::string& a, const std::string& b) {
    return a <= b ? WordPair{a, b} : WordPair{b, a};
}

EdgeFrequencyTable edge_frequency_table(const std::vector<AssociationRecord>& records) {
    EdgeFrequencyTable table;
    for (const auto& rec : records) {
        for (const auto& r : rec.responses) ++table[make_word_pair(rec.cue, r)];
    }
    return table;
}

} // namespace bfmn
