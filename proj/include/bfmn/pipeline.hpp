#pragma once

#include "bfmn/affect.hpp"
#include "bfmn/chat_client.hpp"
#include "bfmn/concreteness.hpp"
#include "bfmn/error.hpp"
#include "bfmn/frames.hpp"
#include "bfmn/graph.hpp"
#include "bfmn/ingestion.hpp"
#include "bfmn/kv_config.hpp"
#include "bfmn/render.hpp"
#include "bfmn/twin_gen.hpp"
#include "bfmn/valence_stats.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bfmn {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ValenceScope { group, pooled };

// Everything a run depends on. Loaded from a key-value config file whose
// relative paths resolve against the file's directory.
struct RunConfig {
    std::vector<std::string> association_files;
    std::string masit_file;
    std::string lemma_map;
    std::string emotion_lexicon;
    std::string concreteness_norms;
    std::string translation_map;
    std::string output_dir = "bfmn_out";

    double alpha_valence = kDefaultValenceAlpha;
    double alpha_concreteness = kDefaultConcretenessAlpha;
    std::size_t n_null_concreteness = kDefaultConcretenessNulls;
    std::size_t n_null_emotion = kDefaultEmotionNulls;
    double emotion_z_critical = kEmotionZCritical;
    bool emotion_exclude_unknown = false;
    double hub_fraction_network = kNetworkHubFraction;
    double hub_fraction_frame = kFrameHubFraction;
    ValenceScope valence_scope = ValenceScope::group;
    std::optional<std::uint64_t> seed;

    std::vector<std::string> split_groups;               // group tags split by MAS-IT median
    std::map<std::string, std::string> cue_sets;         // set id -> cue file
    std::map<std::string, std::string> group_cue_set;    // group tag -> set id
    ColumnSpec columns;
    FactorMap masit_factors;

    std::size_t min_edge_frequency = 1;
    bool jaccard_log_scale = false;

    EndpointConfig endpoint;
    PromptLanguage language = PromptLanguage::it;
    std::string masit_items_file;

    static RunConfig from_kv(const KvConfig& kv, const std::string& base_dir = {});
    static RunConfig load(const std::string& path);

    void validate() const;
    // Seed or Error(BadConfig): resampling never runs unseeded.
    std::uint64_t require_seed() const;
    // Canonical JSON of every analysis-relevant setting.
    nlohmann::json to_json() const;
    std::string hash() const;
};

struct GroupSummary {
    std::size_t kept = 0;
    std::size_t dropped = 0;
    std::size_t high = 0;
    std::size_t low = 0;
    std::size_t excluded = 0;
    bool split = false;
    std::size_t cue_set_size = 0;
};

// Cleaned records per analysable group. Split groups appear three times:
// "<tag>" (all kept), "<tag>_high_anxiety" and "<tag>_low_anxiety".
struct Dataset {
    std::map<std::string, std::vector<AssociationRecord>> groups;
    std::map<std::string, GroupSummary> summaries;      // by group tag
    std::vector<DroppedParticipant> dropped;
    std::map<std::string, Subgroup> subgroups;          // participant -> subgroup
    std::vector<RowDiagnostic> diagnostics;
    std::vector<std::string> notices;

    std::vector<AssociationRecord> all_records() const; // every kept record once
};

Dataset build_dataset(const RunConfig& config);
nlohmann::json ingest_report_json(const Dataset& data);

// Writes ingest_report.json, cleaned_associations.csv and subgroups.tsv to
// config.output_dir. Throws Error(BadInput) when no records survive parsing.
Dataset cmd_ingest(const RunConfig& config);

struct AnalysisOptions {
    bool network = true;
    bool frames = true;
    bool emotions = true;
    bool concreteness = true;
};

struct GroupAnalysis {
    nlohmann::json report;
    std::string valence_tsv;
    std::string nodes_tsv;
    std::string edges_tsv;
    std::string jaccard_tsv;
    std::string concreteness_tsv;
};

// Composition of every analysis for one group and list of targets. Targets
// missing from the group's network are listed under "skipped_targets".
// Throws Error(UnknownGroup).
GroupAnalysis analyze_group(const Dataset& data, const LexicalResources& lex, const RunConfig& config,
                             const std::string& group, const std::vector<std::string>& targets,
                             const AnalysisOptions& options = {});

// Bundle directory written by cmd_analyze.
std::string bundle_dir(const RunConfig& config, const std::string& group);

// Node of `g` for a user-supplied target: the normalized word itself, its lemma,
// else the word whose translation matches it.
std::optional<std::string> resolve_target(const Bfmn& g, const LexicalResources& lex, const std::string& target);

// Runs analyze_group and writes report.json, manifest.json, valence.tsv,
// nodes.tsv, edges.tsv, jaccard.tsv and concreteness.tsv. Returns the
// bundle directory.
std::string cmd_analyze(const RunConfig& config, const std::string& group, const std::vector<std::string>& targets);

// One frame SVG and one flower per target in the bundle plus the Jaccard
// bar chart. Returns the written paths. Throws Error(MissingReport).
std::vector<std::string> cmd_render(const RunConfig& config, const std::string& bundle);

struct SimulateRequest {
    std::size_t n_twins = 0;
    Education education = Education::bsc_psychology;
    std::string cue_set;                  // cue set id from the config, or a file path
    std::optional<std::size_t> match_count; // subsample to this many twins
};

// Writes <group>_associations.csv, <group>_masit.csv (when questionnaire
// items are configured) and appends to requests.jsonl in output_dir.
std::vector<TwinRun> cmd_simulate(const RunConfig& config, const SimulateRequest& request, ChatClient& client);

// Exit code for a failure: 2 data, 3 endpoint.
int exit_code_for(const Error& e);

} // namespace bfmn
