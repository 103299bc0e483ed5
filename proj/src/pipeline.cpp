#include "bfmn/pipeline.hpp"
#include "bfmn/error.hpp"
#include "bfmn/rng.hpp"
#include "bfmn/text.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <set>

namespace bfmn {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string resolve_path(const std::string& base_dir, const std::string& p) {
    if (p.empty() || base_dir.empty() || fs::path(p).is_absolute()) return p;
    return (fs::path(base_dir) / p).lexically_normal().string();
}

double parse_real(const std::string& key, const std::string& v) {
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size()) throw Error(ErrorCode::BadConfig, key + ": '" + v + "' is not a number");
    return d;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
        throw Error(ErrorCode::BadConfig, key + ": '" + v + "' is not a non-negative integer");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error(ErrorCode::BadConfig, key + ": '" + v + "' is not a boolean");
}

json features_json(const NetworkFeatures& f) {
    json hubs = json::array();
    for (const auto& h : f.hubs) hubs.push_back({{"word", h.word}, {"degree", h.degree}});
    return {{"n_nodes", f.n_nodes},
            {"n_edges", f.n_edges},
            {"avg_shortest_path", f.avg_shortest_path},
            {"diameter", f.diameter},
            {"clustering", f.clustering},
            {"component_nodes", f.component_nodes},
            {"hubs", hubs}};
}

json profile_json(const EmotionProfile& p) {
    json emotions = json::object();
    for (std::size_t i = 0; i < kEmotionCount; ++i) {
        emotions[std::string(to_string(kAllEmotions[i]))] = {
            {"count", p.counts[i]}, {"z", p.z[i]}, {"significant", p.significant[i]}};
    }
    return {{"sample_size", p.sample_size}, {"z_critical", p.z_critical}, {"emotions", emotions}};
}

EmotionProfile profile_from_json(const json& j) {
    EmotionProfile p;
    p.sample_size = j.at("sample_size").get<std::size_t>();
    p.z_critical = j.at("z_critical").get<double>();
    for (std::size_t i = 0; i < kEmotionCount; ++i) {
        const auto& e = j.at("emotions").at(std::string(to_string(kAllEmotions[i])));
        p.counts[i] = e.at("count").get<std::size_t>();
        p.z[i] = e.at("z").get<double>();
        p.significant[i] = e.at("significant").get<bool>();
    }
    return p;
}

json concreteness_json(const ConcretenessResult& r) {
    json j{{"group", r.group_tag},         {"keyword", r.keyword},     {"k", r.k},
           {"matched", r.matched},         {"mean_frame", r.mean_frame}, {"mean_null", r.mean_null},
           {"std_null", r.std_null},       {"mean_diff", r.mean_diff()}, {"z", r.z},
           {"cohens_d", r.cohens_d},       {"cliffs_delta", r.cliffs_delta}, {"significant", r.significant},
           {"low_coverage", r.low_coverage}};
    if (r.diagnostic) j["diagnostic"] = *r.diagnostic;
    return j;
}

std::string safe_file_stem(const std::string& word) {
    std::string out;
    for (unsigned char c : word) {
        if (std::isalnum(c) || c >= 0x80) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('_');
        }
    }
    return out.empty() ? "_" : out;
}

} // namespace

// --- config ------------------------------------------------------------------

RunConfig RunConfig::from_kv(const KvConfig& kv, const std::string& base_dir) {
    RunConfig c;
    for (const auto& f : kv.get_list("data.associations")) c.association_files.push_back(resolve_path(base_dir, f));
    c.masit_file = resolve_path(base_dir, kv.get_or("data.masit", ""));
    c.lemma_map = resolve_path(base_dir, kv.get_or("resources.lemma_map", ""));
    c.emotion_lexicon = resolve_path(base_dir, kv.get_or("resources.emotion_lexicon", ""));
    c.concreteness_norms = resolve_path(base_dir, kv.get_or("resources.concreteness_norms", ""));
    c.translation_map = resolve_path(base_dir, kv.get_or("resources.translation_map", ""));
    if (auto v = kv.get("output.dir")) c.output_dir = resolve_path(base_dir, *v);

    auto real = [&](const char* key, double& field) {
        if (auto v = kv.get(key)) field = parse_real(key, *v);
    };
    auto count = [&](const char* key, std::size_t& field) {
        if (auto v = kv.get(key)) field = static_cast<std::size_t>(parse_uint(key, *v));
    };
    real("analysis.alpha_valence", c.alpha_valence);
    real("analysis.alpha_concreteness", c.alpha_concreteness);
    count("analysis.n_null_concreteness", c.n_null_concreteness);
    count("analysis.n_null_emotion", c.n_null_emotion);
    real("analysis.emotion_z_critical", c.emotion_z_critical);
    real("analysis.hub_fraction_network", c.hub_fraction_network);
    real("analysis.hub_fraction_frame", c.hub_fraction_frame);
    if (auto v = kv.get("analysis.emotion_exclude_unknown")) {
        c.emotion_exclude_unknown = parse_bool("analysis.emotion_exclude_unknown", *v);
    }
    if (auto v = kv.get("analysis.valence_scope")) {
        if (*v == "group") {
            c.valence_scope = ValenceScope::group;
        } else if (*v == "pooled") {
            c.valence_scope = ValenceScope::pooled;
        } else {
            throw Error(ErrorCode::BadConfig, "analysis.valence_scope must be group or pooled");
        }
    }
    if (auto v = kv.get("analysis.seed")) c.seed = parse_uint("analysis.seed", *v);
    c.split_groups = kv.get_list("analysis.split_groups");

    for (const auto& [id, path] : kv.section("cue_sets")) c.cue_sets[id] = resolve_path(base_dir, path);
    for (const auto& [group, id] : kv.section("group_cue_sets")) c.group_cue_set[group] = id;
    c.columns = ColumnSpec::from_config(kv);
    c.masit_factors = factor_map_from_config(kv);

    count("render.min_edge_frequency", c.min_edge_frequency);
    if (auto v = kv.get("render.jaccard_log_scale")) c.jaccard_log_scale = parse_bool("render.jaccard_log_scale", *v);

    auto& e = c.endpoint;
    e.base_url = kv.get_or("endpoint.base_url", e.base_url);
    e.model = kv.get_or("endpoint.model", e.model);
    e.api_key_env = kv.get_or("endpoint.api_key_env", e.api_key_env);
    real("endpoint.temperature", e.temperature);
    if (auto v = kv.get("endpoint.max_tokens")) e.max_tokens = static_cast<int>(parse_uint("endpoint.max_tokens", *v));
    auto integer = [&](const char* key, int& field) {
        if (auto v = kv.get(key)) field = static_cast<int>(parse_uint(key, *v));
    };
    integer("endpoint.timeout_s", e.timeout_s);
    integer("endpoint.max_malformed_retries", e.max_malformed_retries);
    integer("endpoint.max_transient_retries", e.max_transient_retries);
    integer("endpoint.backoff_initial_ms", e.backoff_initial_ms);
    integer("endpoint.backoff_max_ms", e.backoff_max_ms);
    count("endpoint.max_in_flight", e.max_in_flight);
    if (auto v = kv.get("simulate.language")) {
        auto lang = parse_language(*v);
        if (!lang) throw Error(ErrorCode::BadConfig, "simulate.language must be it or en");
        c.language = *lang;
    }
    c.masit_items_file = resolve_path(base_dir, kv.get_or("simulate.masit_items", ""));
    c.validate();
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    return from_kv(KvConfig::load(path), fs::path(path).parent_path().string());
}

void RunConfig::validate() const {
    auto in_unit = [](double a) { return a > 0.0 && a < 1.0; };
    if (!in_unit(alpha_valence)) throw Error(ErrorCode::BadConfig, "alpha_valence must lie in (0, 1)");
    if (!in_unit(alpha_concreteness)) throw Error(ErrorCode::BadConfig, "alpha_concreteness must lie in (0, 1)");
    if (!(hub_fraction_network > 0.0 && hub_fraction_network <= 1.0) ||
        !(hub_fraction_frame > 0.0 && hub_fraction_frame <= 1.0)) {
        throw Error(ErrorCode::BadConfig, "hub fractions must lie in (0, 1]");
    }
    if (n_null_concreteness == 0 || n_null_emotion == 0) throw Error(ErrorCode::BadConfig, "null counts must be positive");
    if (min_edge_frequency < 1) throw Error(ErrorCode::BadConfig, "min_edge_frequency must be >= 1");
    for (const auto& [group, id] : group_cue_set) {
        if (!cue_sets.count(id)) throw Error(ErrorCode::BadConfig, "group " + group + " uses unknown cue set " + id);
    }
}

std::uint64_t RunConfig::require_seed() const {
    if (!seed) throw Error(ErrorCode::BadConfig, "this command resamples and needs an explicit seed (--seed)");
    return *seed;
}

json RunConfig::to_json() const {
    json factors = json::object();
    for (const auto& [f, items] : masit_factors) factors[to_string(f)] = items;
    return {{"association_files", association_files},
            {"masit_file", masit_file},
            {"lemma_map", lemma_map},
            {"emotion_lexicon", emotion_lexicon},
            {"concreteness_norms", concreteness_norms},
            {"translation_map", translation_map},
            {"alpha_valence", alpha_valence},
            {"alpha_concreteness", alpha_concreteness},
            {"n_null_concreteness", n_null_concreteness},
            {"n_null_emotion", n_null_emotion},
            {"emotion_z_critical", emotion_z_critical},
            {"emotion_exclude_unknown", emotion_exclude_unknown},
            {"hub_fraction_network", hub_fraction_network},
            {"hub_fraction_frame", hub_fraction_frame},
            {"valence_scope", valence_scope == ValenceScope::group ? "group" : "pooled"},
            {"seed", seed ? json(*seed) : json(nullptr)},
            {"split_groups", split_groups},
            {"cue_sets", cue_sets},
            {"group_cue_set", group_cue_set},
            {"masit_factors", factors},
            {"min_edge_frequency", min_edge_frequency},
            {"jaccard_log_scale", jaccard_log_scale}};
}

std::string RunConfig::hash() const { return hex64(fnv1a64(to_json().dump())); }

// --- dataset -------------------------------------------------------------------

std::vector<AssociationRecord> Dataset::all_records() const {
    std::vector<AssociationRecord> out;
    for (const auto& [tag, summary] : summaries) {
        auto it = groups.find(tag);
        if (it != groups.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
}

Dataset build_dataset(const RunConfig& config) {
    Dataset data;
    std::map<std::string, std::vector<AssociationRecord>> by_tag;
    for (const auto& path : config.association_files) {
        auto parsed = parse_associations(path, config.columns);
        for (auto& d : parsed.diagnostics) {
            d.message = path + ": " + d.message;
            data.diagnostics.push_back(std::move(d));
        }
        for (auto& rec : parsed.records) by_tag[rec.group_tag].push_back(std::move(rec));
    }
    std::size_t total = 0;
    for (const auto& [tag, recs] : by_tag) total += recs.size();
    if (total == 0) throw Error(ErrorCode::BadInput, "no association records were read");

    std::map<std::string, MasItScore> masit;
    if (!config.masit_file.empty()) {
        auto parsed = parse_masit(config.masit_file, config.masit_factors, config.columns);
        for (auto& d : parsed.diagnostics) {
            d.message = config.masit_file + ": " + d.message;
            data.diagnostics.push_back(std::move(d));
        }
        for (auto& s : parsed.scores) masit.emplace(s.participant_id, std::move(s));
    }

    const std::set<std::string> split(config.split_groups.begin(), config.split_groups.end());
    for (auto& [tag, recs] : by_tag) {
        GroupSummary summary;
        if (auto it = config.group_cue_set.find(tag); it != config.group_cue_set.end()) {
            summary.cue_set_size = load_cue_set(config.cue_sets.at(it->second), it->second).size();
        } else {
            std::set<std::string> cues;
            for (const auto& r : recs) cues.insert(r.cue);
            summary.cue_set_size = cues.size();
            data.notices.push_back(tag + ": no cue set configured; using " + std::to_string(cues.size()) +
                                   " distinct cues as the cue-set size");
        }
        auto cleaned = clean_participants(recs, summary.cue_set_size);
        std::set<std::string> kept_ids;
        for (const auto& r : cleaned.kept) kept_ids.insert(r.participant_id);
        summary.kept = kept_ids.size();
        summary.dropped = cleaned.dropped_participants.size();
        data.dropped.insert(data.dropped.end(), cleaned.dropped_participants.begin(),
                            cleaned.dropped_participants.end());

        summary.split = split.count(tag) != 0;
        if (summary.split) {
            std::vector<MasItScore> scores;
            for (const auto& id : kept_ids) {
                if (auto it = masit.find(id); it != masit.end()) {
                    scores.push_back(it->second);
                } else {
                    data.subgroups[id] = Subgroup::excluded;
                    ++summary.excluded;
                    data.notices.push_back(id + ": no MAS-IT score; excluded from subgroups");
                }
            }
            if (!scores.empty()) {
                for (const auto& a : assign_subgroups(scores)) {
                    data.subgroups[a.participant_id] = a.subgroup;
                    if (a.subgroup == Subgroup::high_anxiety) ++summary.high;
                    if (a.subgroup == Subgroup::low_anxiety) ++summary.low;
                    if (a.subgroup == Subgroup::excluded) ++summary.excluded;
                }
            }
            auto& high = data.groups[tag + "_high_anxiety"];
            auto& low = data.groups[tag + "_low_anxiety"];
            for (const auto& r : cleaned.kept) {
                auto s = data.subgroups[r.participant_id];
                if (s == Subgroup::high_anxiety) high.push_back(r);
                if (s == Subgroup::low_anxiety) low.push_back(r);
            }
        } else {
            for (const auto& id : kept_ids) data.subgroups[id] = Subgroup::unsplit;
        }
        data.groups[tag] = std::move(cleaned.kept);
        data.summaries[tag] = summary;
    }
    std::sort(data.dropped.begin(), data.dropped.end(),
              [](const DroppedParticipant& a, const DroppedParticipant& b) { return a.participant_id < b.participant_id; });
    return data;
}

json ingest_report_json(const Dataset& data) {
    json groups = json::object();
    for (const auto& [tag, s] : data.summaries) {
        groups[tag] = {{"kept", s.kept},         {"dropped", s.dropped},   {"split", s.split},
                       {"high_anxiety", s.high}, {"low_anxiety", s.low},   {"excluded", s.excluded},
                       {"cue_set_size", s.cue_set_size}};
    }
    json dropped = json::array();
    for (const auto& d : data.dropped) {
        dropped.push_back({{"participant_id", d.participant_id},
                           {"missing_cells", d.missing_cells},
                           {"expected_cells", d.expected_cells},
                           {"reason", "missing responses >= 1/3 of expected cells"}});
    }
    json diags = json::array();
    for (const auto& d : data.diagnostics) diags.push_back({{"row", d.row}, {"code", d.code}, {"message", d.message}});
    json available = json::array();
    for (const auto& [name, recs] : data.groups) available.push_back({{"group", name}, {"records", recs.size()}});
    return {{"tool_version", kToolVersion}, {"groups", groups}, {"analysable_groups", available},
            {"dropped", dropped},           {"diagnostics", diags}, {"notices", data.notices}};
}

Dataset cmd_ingest(const RunConfig& config) {
    Dataset data = build_dataset(config);
    fs::create_directories(config.output_dir);
    const fs::path out(config.output_dir);
    write_file((out / "ingest_report.json").string(), ingest_report_json(data).dump(2) + "\n");
    write_file((out / "cleaned_associations.csv").string(), write_associations_csv(data.all_records()));
    std::string sub = "participant_id\tsubgroup\n";
    for (const auto& [id, s] : data.subgroups) sub += id + "\t" + to_string(s) + "\n";
    write_file((out / "subgroups.tsv").string(), sub);
    return data;
}

// --- analysis ----------------------------------------------------------------

std::optional<std::string> resolve_target(const Bfmn& g, const LexicalResources& lex, const std::string& target) {
    const std::string w = normalize_word(target);
    if (g.find(w)) return w;
    if (const auto& lemma = lex.lemmatize(w); g.find(lemma)) return lemma;
    for (const auto& [source, shown] : lex.translation_map) {
        if (normalize_word(shown) == w && g.find(source)) return source;
    }
    return std::nullopt;
}

GroupAnalysis analyze_group(const Dataset& data, const LexicalResources& lex, const RunConfig& config,
                            const std::string& group, const std::vector<std::string>& targets,
                            const AnalysisOptions& options) {
    auto git = data.groups.find(group);
    if (git == data.groups.end()) throw Error(ErrorCode::UnknownGroup, "group '" + group + "' not in dataset");
    const auto& records = git->second;

    const bool emotions = options.emotions && !lex.emotion_lexicon.empty();
    const bool concrete = options.concreteness && !lex.concreteness_norms.empty();
    std::uint64_t seed = 0;
    if ((emotions || concrete) && !targets.empty()) seed = config.require_seed();

    const auto labels = config.valence_scope == ValenceScope::group
                            ? categorize_group(records, config.alpha_valence)
                            : categorize_group(data.all_records(), config.alpha_valence);
    BuildReport build;
    const Bfmn g = build_bfmn(records, labels, &build);
    const auto freq = edge_frequency_table(records);

    GroupAnalysis out;
    json& report = out.report;
    std::set<std::string> participants;
    for (const auto& r : records) participants.insert(r.participant_id);
    report["group"] = group;
    report["n_participants"] = participants.size();
    report["valence_scope"] = config.valence_scope == ValenceScope::group ? "group" : "pooled";

    std::array<std::size_t, 3> label_counts{};
    for (NodeId u = 0; u < g.node_count(); ++u) ++label_counts[static_cast<std::size_t>(g.valence(u))];
    report["node_valence_counts"] = {{"negative", label_counts[0]}, {"neutral", label_counts[1]},
                                     {"positive", label_counts[2]}};
    if (options.network && g.node_count() > 0) {
        json net = features_json(compute_features(g, config.hub_fraction_network));
        net["self_pairs_dropped"] = build.self_pairs_dropped;
        report["network"] = net;
    }

    std::vector<SemanticFrame> frames;
    std::vector<ConcretenessResult> concreteness_rows;
    json frames_json = json::array();
    json skipped = json::array();
    std::set<std::string> seen_targets;
    for (const auto& raw_target : targets) {
        auto node = resolve_target(g, lex, raw_target);
        if (!node) {
            skipped.push_back({{"target", raw_target}, {"reason", "not in the group's network"}});
            continue;
        }
        if (!seen_targets.insert(*node).second) continue;
        SemanticFrame frame = extract_frame(g, *node);
        json fj;
        fj["target"] = frame.target;
        fj["requested"] = raw_target;
        fj["display"] = lex.display(frame.target);
        fj["target_valence"] = std::string(to_string(frame.target_valence));
        fj["table_node_count"] = frame.table_node_count();
        json members = json::array();
        for (const auto& m : frame.members) {
            members.push_back({{"word", m}, {"valence", std::string(to_string(frame.member_valences.at(m)))}});
        }
        fj["members"] = members;
        json edges = json::array();
        for (const auto& [a, b] : frame.induced_edges()) {
            auto f = freq.find(make_word_pair(a, b));
            edges.push_back({a, b, f == freq.end() ? 0 : f->second});
        }
        fj["edges"] = edges;
        const Aura au = aura(frame);
        fj["aura"] = {{"negative", au.count(Valence::negative)},
                      {"neutral", au.count(Valence::neutral)},
                      {"positive", au.count(Valence::positive)},
                      {"polarity", std::string(to_string(au.polarity))}};
        if (options.frames) {
            NetworkFeatures ff = compute_features(frame.induced, config.hub_fraction_frame);
            fj["features"] = features_json(ff);
        }
        if (emotions && !frame.members.empty()) {
            std::set<std::string> words(frame.members.begin(), frame.members.end());
            EmotionNullOptions eo;
            eo.n_null = config.n_null_emotion;
            eo.seed = derive_seed(seed, fnv1a64(group + "|" + frame.target + "|emotions"));
            eo.z_critical = config.emotion_z_critical;
            eo.exclude_unknown = config.emotion_exclude_unknown;
            try {
                fj["emotions"] = profile_json(emotion_zscores(words, lex, eo));
            } catch (const Error& e) {
                fj["emotions_error"] = e.what();
            }
        }
        if (concrete && !frame.members.empty()) {
            ConcretenessOptions co;
            co.n_samples = config.n_null_concreteness;
            co.seed = derive_seed(seed, fnv1a64(group + "|" + frame.target + "|concreteness"));
            co.alpha = config.alpha_concreteness;
            try {
                auto r = concreteness_test(frame, lex.concreteness_norms, lex.lemma_map, co);
                r.group_tag = group;
                fj["concreteness"] = concreteness_json(r);
                concreteness_rows.push_back(std::move(r));
            } catch (const Error& e) {
                fj["concreteness_error"] = e.what();
            }
        }
        frames_json.push_back(std::move(fj));
        frames.push_back(std::move(frame));
    }
    report["frames"] = frames_json;
    report["skipped_targets"] = skipped;

    const auto pairs = jaccard_pairs(frames);
    json jac = json::array();
    for (const auto& p : pairs) jac.push_back({{"a", p.a}, {"b", p.b}, {"value", p.value}});
    report["jaccard"] = jac;

    out.valence_tsv = valence_table_tsv(labels);
    out.nodes_tsv = node_table_tsv(g);
    out.edges_tsv = edge_list_tsv(g);
    out.jaccard_tsv = jaccard_tsv(pairs);
    out.concreteness_tsv = concreteness_report_tsv(concreteness_rows);
    return out;
}

std::string bundle_dir(const RunConfig& config, const std::string& group) {
    return (fs::path(config.output_dir) / ("analysis_" + safe_file_stem(group))).string();
}

std::string cmd_analyze(const RunConfig& config, const std::string& group, const std::vector<std::string>& targets) {
    const Dataset data = build_dataset(config);
    const LexicalResources lex =
        load_resources(config.lemma_map, config.emotion_lexicon, config.concreteness_norms, config.translation_map);
    GroupAnalysis analysis = analyze_group(data, lex, config, group, targets);

    const std::string dir = bundle_dir(config, group);
    fs::create_directories(dir);
    const fs::path out(dir);
    json manifest{{"tool", "bfmn"},
                  {"tool_version", kToolVersion},
                  {"config_hash", config.hash()},
                  {"seed", config.seed ? json(*config.seed) : json(nullptr)},
                  {"group", group},
                  {"targets", targets},
                  {"config", config.to_json()}};
    analysis.report["manifest"] = {{"tool_version", kToolVersion},
                                   {"config_hash", config.hash()},
                                   {"seed", config.seed ? json(*config.seed) : json(nullptr)}};
    write_file((out / "report.json").string(), analysis.report.dump(2) + "\n");
    write_file((out / "manifest.json").string(), manifest.dump(2) + "\n");
    write_file((out / "valence.tsv").string(), analysis.valence_tsv);
    write_file((out / "nodes.tsv").string(), analysis.nodes_tsv);
    write_file((out / "edges.tsv").string(), analysis.edges_tsv);
    write_file((out / "jaccard.tsv").string(), analysis.jaccard_tsv);
    write_file((out / "concreteness.tsv").string(), analysis.concreteness_tsv);
    return dir;
}

// --- render ----------------------------------------------------------------------

std::vector<std::string> cmd_render(const RunConfig& config, const std::string& bundle) {
    const fs::path dir(bundle);
    const fs::path report_path = dir / "report.json";
    if (!fs::exists(report_path)) throw Error(ErrorCode::MissingReport, report_path.string() + " does not exist");
    json report = json::parse(read_file(report_path.string()), nullptr, false);
    if (report.is_discarded() || !report.is_object()) {
        throw Error(ErrorCode::MissingReport, report_path.string() + " is not valid JSON");
    }

    std::map<std::string, std::string> translations;
    if (!config.translation_map.empty()) {
        translations = load_resources({}, {}, {}, config.translation_map).translation_map;
    }
    RenderSpec spec;
    spec.min_edge_frequency = config.min_edge_frequency;
    spec.translation_map = translations.empty() ? nullptr : &translations;

    const fs::path figures = dir / "figures";
    fs::create_directories(figures);
    std::vector<std::string> written;
    const std::string group = report.value("group", std::string{});

    for (const auto& fj : report.at("frames")) {
        SemanticFrame frame;
        frame.target = fj.at("target").get<std::string>();
        frame.target_valence = parse_valence(fj.at("target_valence").get<std::string>()).value_or(Valence::neutral);
        std::map<std::string, Valence> labels{{frame.target, frame.target_valence}};
        for (const auto& m : fj.at("members")) {
            const auto word = m.at("word").get<std::string>();
            const auto v = parse_valence(m.at("valence").get<std::string>()).value_or(Valence::neutral);
            frame.members.push_back(word);
            frame.member_valences[word] = v;
            labels[word] = v;
        }
        std::vector<std::pair<std::string, std::string>> edges;
        EdgeFrequencyTable freq;
        for (const auto& e : fj.at("edges")) {
            const auto a = e.at(0).get<std::string>(), b = e.at(1).get<std::string>();
            edges.emplace_back(a, b);
            freq[make_word_pair(a, b)] = e.at(2).get<std::size_t>();
        }
        std::vector<std::string> words = frame.members;
        words.push_back(frame.target);
        frame.induced = Bfmn(group, words, edges, labels);

        const std::string stem = safe_file_stem(frame.target);
        if (!frame.members.empty()) {
            const auto path = (figures / ("frame_" + stem + ".svg")).string();
            write_file(path, render_frame_svg(frame, spec, freq));
            written.push_back(path);
        }
        if (fj.contains("emotions")) {
            const auto path = (figures / ("flower_" + stem + ".svg")).string();
            write_file(path, render_flower_svg(profile_from_json(fj.at("emotions")), fj.value("display", frame.target)));
            written.push_back(path);
        }
    }

    std::map<std::string, double> bars;
    for (const auto& j : report.at("jaccard")) {
        bars[j.at("a").get<std::string>() + " / " + j.at("b").get<std::string>()] = j.at("value").get<double>();
    }
    if (!bars.empty()) {
        const auto path = (figures / "jaccard.svg").string();
        write_file(path, render_jaccard_bars(bars, config.jaccard_log_scale, group));
        written.push_back(path);
    }
    return written;
}

// --- simulate ----------------------------------------------------------------------

std::vector<TwinRun> cmd_simulate(const RunConfig& config, const SimulateRequest& request, ChatClient& client) {
    const std::uint64_t seed = config.require_seed();
    if (request.n_twins == 0) throw Error(ErrorCode::BadInput, "n_twins must be positive");
    CueSet cues;
    if (auto it = config.cue_sets.find(request.cue_set); it != config.cue_sets.end()) {
        cues = load_cue_set(it->second, it->first);
    } else if (!request.cue_set.empty()) {
        cues = load_cue_set(request.cue_set);
    } else {
        throw Error(ErrorCode::BadConfig, "simulate needs a cue set");
    }

    std::optional<MasItSpec> masit;
    if (!config.masit_items_file.empty()) {
        MasItSpec spec;
        for (const auto& line : split(read_file(config.masit_items_file), '\n')) {
            auto t = trim(line);
            if (!t.empty() && t[0] != '#') spec.items.push_back(t);
        }
        spec.factors = config.masit_factors;
        masit = std::move(spec);
    }

    fs::create_directories(config.output_dir);
    const fs::path out(config.output_dir);
    RequestLog log((out / "requests.jsonl").string());
    const auto tasks = plan_twins(request.n_twins, request.education, seed);
    auto runs = simulate_twins(tasks, cues, config.endpoint, client, log, config.language, masit ? &*masit : nullptr);
    if (request.match_count) {
        const std::string group = "gpt_" + group_for_education(request.education);
        runs = match_group_sizes(runs, {{group, *request.match_count}}, derive_seed(seed, fnv1a64("match")));
    }

    std::vector<AssociationRecord> records;
    std::vector<MasItScore> scores;
    for (const auto& r : runs) {
        records.insert(records.end(), r.parsed.begin(), r.parsed.end());
        if (r.mas_it) scores.push_back(*r.mas_it);
    }
    const std::string group = group_for_education(request.education);
    write_file((out / ("gpt_" + group + "_associations.csv")).string(), write_associations_csv(records));
    if (masit) {
        write_file((out / ("gpt_" + group + "_masit.csv")).string(), write_masit_csv(scores, masit->items.size()));
    }
    return runs;
}

int exit_code_for(const Error& e) { return is_endpoint_error(e.code()) ? 3 : 2; }

} // namespace bfmn
