#pragma once

#include <cstdint>

#include "qcsp/relation.hpp"

namespace qcsp {

// SplitMix64 (Steele, Lea, Flood 2014). All seeded corpora in the test
// suites and the CLI derive from this generator so that a port in another
// language can reproduce them: state += 0x9E3779B97F4A7C15, then two
// xor-shift-multiply rounds. Bounded draws use next() % n.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : s_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform-ish draw in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // Element of A = {1..dsize}.
    int element(int dsize) { return static_cast<int>(below(static_cast<std::uint64_t>(dsize))) + 1; }

    bool coin() { return next() & 1; }

private:
    std::uint64_t s_;
};

// Each position independently present with probability num/den.
inline Relation random_relation(const Domain& dom, int arity, SplitMix64& rng, int num = 1,
                                int den = 2) {
    Relation r(dom, arity);
    for (std::size_t i = 0; i < r.positions(); ++i)
        if (rng.below(static_cast<std::uint64_t>(den)) < static_cast<std::uint64_t>(num))
            r.set_index(i);
    return r;
}

inline Relation random_nonempty_relation(const Domain& dom, int arity, SplitMix64& rng) {
    while (true) {
        Relation r = random_relation(dom, arity, rng);
        if (!r.empty()) return r;
    }
}

}  // namespace qcsp
