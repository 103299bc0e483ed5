#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace bfmn {

// Seeded generator with a portable bounded-integer draw, so resampling
// results do not depend on the standard library's distribution classes.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

    // Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi);

private:
    std::mt19937_64 engine_;
};

// Derives an independent sub-seed from a base seed and a label.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Draws k distinct indices out of [0, n) without replacement. The pool keeps
// its permutation between draws (a partial Fisher-Yates shuffle from any
// starting permutation is still uniform), so repeated draws cost O(k).
class IndexSampler {
public:
    explicit IndexSampler(std::size_t n);

    std::span<const std::size_t> draw(std::size_t k, Rng& rng);
    std::size_t population() const { return perm_.size(); }

private:
    std::vector<std::size_t> perm_;
};

} // namespace bfmn
