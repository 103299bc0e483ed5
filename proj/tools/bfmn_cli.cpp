#include "bfmn/pipeline.hpp"
#include "bfmn/text.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace bfmn;
using nlohmann::json;

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string output_dir;
    std::optional<double> alpha_valence;
    std::optional<double> alpha_concreteness;
    std::optional<std::size_t> n_null_concreteness;
    std::optional<std::size_t> n_null_emotion;
    std::optional<std::size_t> min_edge_frequency;
    std::string valence_scope;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("-c,--config", c.config_path, "run configuration file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "base seed for resampling");
    cmd->add_option("-o,--output", c.output_dir, "output directory");
    cmd->add_option("--alpha-valence", c.alpha_valence);
    cmd->add_option("--alpha-concreteness", c.alpha_concreteness);
    cmd->add_option("--n-null-concreteness", c.n_null_concreteness);
    cmd->add_option("--n-null-emotion", c.n_null_emotion);
    cmd->add_option("--min-edge-frequency", c.min_edge_frequency);
    cmd->add_option("--valence-scope", c.valence_scope)->check(CLI::IsMember({"group", "pooled"}));
}

RunConfig load_config(const Common& c) {
    RunConfig cfg = RunConfig::load(c.config_path);
    if (c.seed) cfg.seed = c.seed;
    if (!c.output_dir.empty()) cfg.output_dir = c.output_dir;
    if (c.alpha_valence) cfg.alpha_valence = *c.alpha_valence;
    if (c.alpha_concreteness) cfg.alpha_concreteness = *c.alpha_concreteness;
    if (c.n_null_concreteness) cfg.n_null_concreteness = *c.n_null_concreteness;
    if (c.n_null_emotion) cfg.n_null_emotion = *c.n_null_emotion;
    if (c.min_edge_frequency) cfg.min_edge_frequency = *c.min_edge_frequency;
    if (c.valence_scope == "pooled") cfg.valence_scope = ValenceScope::pooled;
    if (c.valence_scope == "group") cfg.valence_scope = ValenceScope::group;
    cfg.validate();
    return cfg;
}

GroupAnalysis quick_analysis(const RunConfig& cfg, const std::string& group, const std::vector<std::string>& targets,
                             AnalysisOptions options) {
    const Dataset data = build_dataset(cfg);
    const LexicalResources lex =
        load_resources(cfg.lemma_map, cfg.emotion_lexicon, cfg.concreteness_norms, cfg.translation_map);
    return analyze_group(data, lex, cfg, group, targets, options);
}

void print_skipped(const json& report) {
    for (const auto& s : report.at("skipped_targets")) {
        std::cerr << "skipped " << s.at("target").get<std::string>() << ": " << s.at("reason").get<std::string>()
                  << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Behavioural forma mentis network toolkit"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    Common common;
    std::string group;
    std::vector<std::string> targets;

    auto* ingest = app.add_subcommand("ingest", "parse, clean and split association data");
    add_common(ingest, common);

    auto* analyze = app.add_subcommand("analyze", "write the full report bundle for one group");
    add_common(analyze, common);
    analyze->add_option("-g,--group", group)->required();
    analyze->add_option("-t,--target", targets, "target words");

    std::string bundle;
    auto* render = app.add_subcommand("render", "draw SVG figures from a report bundle");
    add_common(render, common);
    render->add_option("-b,--bundle", bundle, "bundle directory written by analyze")->required();

    std::size_t n_twins = 0;
    std::string education = "bsc_psychology";
    std::string cue_set;
    std::optional<std::size_t> match;
    std::string language;
    auto* simulate = app.add_subcommand("simulate", "generate digital-twin participants through a chat endpoint");
    add_common(simulate, common);
    simulate->add_option("-n,--twins", n_twins)->required()->check(CLI::PositiveNumber);
    simulate->add_option("-e,--education", education)
        ->check(CLI::IsMember({"highschool_final_year", "bsc_psychology", "bsc_physics"}));
    simulate->add_option("--cue-set", cue_set, "cue set id from the config, or a cue file")->required();
    simulate->add_option("--match", match, "subsample twins down to this many");
    simulate->add_option("--language", language)->check(CLI::IsMember({"it", "en"}));

    auto* features = app.add_subcommand("features", "network features of a group, or of target frames");
    add_common(features, common);
    features->add_option("-g,--group", group)->required();
    features->add_option("-t,--target", targets);

    auto* jaccard = app.add_subcommand("jaccard", "pairwise frame overlap between targets");
    add_common(jaccard, common);
    jaccard->add_option("-g,--group", group)->required();
    jaccard->add_option("-t,--target", targets)->required();

    auto* concreteness = app.add_subcommand("concreteness", "frame concreteness against a random null");
    add_common(concreteness, common);
    concreteness->add_option("-g,--group", group)->required();
    concreteness->add_option("-t,--target", targets)->required();

    auto* emotions = app.add_subcommand("emotions", "emotion z-scores of target frames");
    add_common(emotions, common);
    emotions->add_option("-g,--group", group)->required();
    emotions->add_option("-t,--target", targets)->required();

    std::uint64_t prompt_seed = 0;
    auto* prompt = app.add_subcommand("prompt", "print a sampled persona prompt");
    prompt->add_option("-e,--education", education)
        ->check(CLI::IsMember({"highschool_final_year", "bsc_psychology", "bsc_physics"}));
    prompt->add_option("--seed", prompt_seed)->required();
    prompt->add_option("--language", language)->check(CLI::IsMember({"it", "en"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (prompt->parsed()) {
            const auto lang = language.empty() ? PromptLanguage::it : *parse_language(language);
            std::cout << render_prompt(sample_profile(prompt_seed, *parse_education(education)), lang) << "\n";
            return 0;
        }

        const RunConfig cfg = load_config(common);
        if (ingest->parsed()) {
            const Dataset data = cmd_ingest(cfg);
            for (const auto& [tag, s] : data.summaries) {
                std::cout << tag << "\tkept " << s.kept << "\tdropped " << s.dropped;
                if (s.split) std::cout << "\thigh " << s.high << "\tlow " << s.low << "\texcluded " << s.excluded;
                std::cout << "\n";
            }
            for (const auto& n : data.notices) std::cerr << n << "\n";
        } else if (analyze->parsed()) {
            std::cout << cmd_analyze(cfg, group, targets) << "\n";
        } else if (render->parsed()) {
            for (const auto& path : cmd_render(cfg, bundle)) std::cout << path << "\n";
        } else if (simulate->parsed()) {
            RunConfig sim = cfg;
            if (!language.empty()) sim.language = *parse_language(language);
            auto client = HttpChatClient::from_environment(sim.endpoint);
            SimulateRequest req{n_twins, *parse_education(education), cue_set, match};
            const auto runs = cmd_simulate(sim, req, *client);
            std::size_t missing = 0;
            for (const auto& r : runs) missing += r.missing_cues.size();
            std::cout << runs.size() << " twins written to " << sim.output_dir << ", " << missing
                      << " missing cues\n";
        } else if (features->parsed()) {
            AnalysisOptions o{true, true, false, false};
            const auto a = quick_analysis(cfg, group, targets, o);
            json out{{"group", group}, {"network", a.report.value("network", json())}};
            json frames = json::object();
            for (const auto& f : a.report.at("frames")) frames[f.at("target").get<std::string>()] = f.at("features");
            if (!frames.empty()) out["frames"] = frames;
            std::cout << out.dump(2) << "\n";
            print_skipped(a.report);
        } else if (jaccard->parsed()) {
            const auto a = quick_analysis(cfg, group, targets, {false, false, false, false});
            std::cout << a.jaccard_tsv;
            print_skipped(a.report);
        } else if (concreteness->parsed()) {
            const auto a = quick_analysis(cfg, group, targets, {false, false, false, true});
            std::cout << a.concreteness_tsv;
            for (const auto& f : a.report.at("frames")) {
                if (f.contains("concreteness_error")) {
                    std::cerr << f.at("target").get<std::string>() << ": "
                              << f.at("concreteness_error").get<std::string>() << "\n";
                }
            }
            print_skipped(a.report);
        } else if (emotions->parsed()) {
            const auto a = quick_analysis(cfg, group, targets, {false, false, true, false});
            std::cout << "target";
            for (auto e : kAllEmotions) std::cout << "\t" << to_string(e);
            std::cout << "\n";
            for (const auto& f : a.report.at("frames")) {
                std::cout << f.at("target").get<std::string>();
                if (!f.contains("emotions")) {
                    std::cout << "\tn/a\n";
                    continue;
                }
                for (auto e : kAllEmotions) {
                    const auto& v = f.at("emotions").at("emotions").at(std::string(to_string(e)));
                    std::cout << "\t" << format_fixed(v.at("z").get<double>(), 2)
                              << (v.at("significant").get<bool>() ? "*" : "");
                }
                std::cout << "\n";
            }
            print_skipped(a.report);
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
