#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

enum class Status { pass, fail, skip };

struct Outcome {
    Status status = Status::fail;
    std::string detail;
};

struct Criterion {
    std::string name;
    bool needs_data = false;
    std::function<Outcome()> run;
};

std::vector<Criterion> self_contained_criteria();
// Criteria over the public study data found under `data_dir`.
std::vector<Criterion> data_criteria(const std::optional<std::string>& data_dir);

inline Outcome verdict(bool ok, std::string detail) { return {ok ? Status::pass : Status::fail, std::move(detail)}; }
