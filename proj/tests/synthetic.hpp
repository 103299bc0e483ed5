#pragma once

#include "bfmn/rng.hpp"
#include "test_util.hpp"

#include <string>
#include <vector>

// Small two-group study written to disk: physics (with MAS-IT scores, split
// by anxiety) and psychology. Word lists are drawn from a shared vocabulary
// whose first words lean negative and last words lean positive.
struct SyntheticStudy {
    std::string config_path;
    std::vector<std::string> cues{"matematica", "fisica", "scienza", "scuola"};
    std::vector<std::string> vocab;
};

inline SyntheticStudy write_synthetic_study(const TempDir& dir, std::uint64_t seed = 11, std::size_t per_group = 24) {
    SyntheticStudy s;
    for (int i = 0; i < 30; ++i) s.vocab.push_back("parola" + std::to_string(100 + i));
    bfmn::Rng rng(seed);

    std::string csv = "participant_id,cue,response_1,response_2,response_3,valence_cue,valence_r1,valence_r2,valence_r3\n";
    std::string masit = "participant_id";
    for (int i = 1; i <= 14; ++i) masit += ",item_" + std::to_string(i);
    masit += "\n";
    for (const char* group : {"physics", "psychology"}) {
        for (std::size_t p = 1; p <= per_group; ++p) {
            const std::string pid = std::string(group) + "_" + std::to_string(p);
            const bool sparse = p == per_group; // answers only one cue: dropped
            for (std::size_t c = 0; c < s.cues.size(); ++c) {
                if (sparse && c > 0) break;
                std::vector<std::size_t> picks;
                while (picks.size() < 3) {
                    auto w = static_cast<std::size_t>(rng.below(s.vocab.size()));
                    if (std::find(picks.begin(), picks.end(), w) == picks.end()) picks.push_back(w);
                }
                csv += pid + "," + s.cues[c];
                for (auto w : picks) csv += "," + s.vocab[w];
                csv += "," + std::to_string(c == 0 ? 1 + rng.below(2) : 2 + rng.below(3));
                for (auto w : picks) {
                    const int lean = w < 10 ? 1 : (w >= 20 ? 4 : 2);
                    csv += "," + std::to_string(lean + static_cast<int>(rng.below(2)));
                }
                csv += "\n";
            }
            if (std::string(group) == "physics" && p != 3) { // physics_3 has no questionnaire
                masit += pid;
                for (int i = 0; i < 14; ++i) masit += "," + std::to_string(1 + rng.below(5));
                masit += "\n";
            }
        }
    }
    dir.file("associations.csv", csv);
    dir.file("masit.csv", masit);

    std::string lexicon = "word,joy,trust,fear,surprise,sadness,disgust,anger,anticipation\n";
    std::string norms = "word,concreteness\n";
    for (std::size_t i = 0; i < s.vocab.size(); ++i) {
        lexicon += s.vocab[i];
        for (int e = 0; e < 8; ++e) lexicon += (i % 8 == static_cast<std::size_t>(e) || (i < 10 && e == 2)) ? ",1" : ",0";
        lexicon += "\n";
        norms += s.vocab[i] + "," + std::to_string(1.0 + 4.0 * static_cast<double>(i) / 29.0) + "\n";
    }
    for (int i = 0; i < 200; ++i) {
        lexicon += "riempitivo" + std::to_string(i) + (i % 5 == 0 ? ",0,1,0,0,0,0,0,0\n" : ",0,0,0,0,0,0,0,0\n");
        norms += "riempitivo" + std::to_string(i) + "," + std::to_string(1.0 + (i % 40) * 0.1) + "\n";
    }
    dir.file("lexicon.csv", lexicon);
    dir.file("norms.csv", norms);
    dir.file("lemmas.tsv", "matematiche\tmatematica\n");
    dir.file("translations.tsv", "matematica\tmath\nfisica\tphysics\n");
    std::string cue_file = "# cue set\n";
    for (const auto& c : s.cues) cue_file += c + "\n";
    dir.file("cues.txt", cue_file);

    s.config_path = dir.file("study.ini", "[data]\n"
                                          "associations = associations.csv\n"
                                          "masit = masit.csv\n"
                                          "[resources]\n"
                                          "lemma_map = lemmas.tsv\n"
                                          "emotion_lexicon = lexicon.csv\n"
                                          "concreteness_norms = norms.csv\n"
                                          "translation_map = translations.tsv\n"
                                          "[output]\n"
                                          "dir = out\n"
                                          "[analysis]\n"
                                          "seed = 20240601\n"
                                          "n_null_emotion = 200\n"
                                          "n_null_concreteness = 100\n"
                                          "split_groups = physics\n"
                                          "[cue_sets]\n"
                                          "main = cues.txt\n"
                                          "[group_cue_sets]\n"
                                          "physics = main\n"
                                          "psychology = main\n"
                                          "[masit_factors]\n"
                                          "evaluation = 1, 2, 3, 4, 5\n");
    return s;
}
