#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcsp {

// Domain elements are 1-based: A = {1, ..., |A|}.
using Tuple = std::vector<int>;

// Subset of a domain as a bitmask, bit i set <=> element i+1 present.
using Mask = std::uint64_t;

class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& where, int line, const std::string& what)
        : std::runtime_error(where + ":" + std::to_string(line) + ": " + what) {}
};

namespace detail {
inline int& max_positions_slot() {
    static int cap = [] {
        if (const char* env = std::getenv("QCSP_MAX_POSITIONS")) {
            int v = std::atoi(env);
            if (v > 0) return v;
        }
        return 24;
    }();
    return cap;
}
}  // namespace detail

// Cap on the number of radix positions (relation arity). Relations whose
// arity exceeds the cap are rejected with a capacity_error so that the
// exponential constructions fail loudly instead of exhausting memory.
inline int max_positions() { return detail::max_positions_slot(); }

inline void set_max_positions(int n) {
    if (n <= 0) throw std::invalid_argument("max positions must be positive");
    detail::max_positions_slot() = n;
}

// Hard ceiling on the bit size of a single relation table.
inline constexpr std::size_t kMaxTableBits = std::size_t(1) << 28;

// |A|^arity with both caps enforced.
inline std::size_t checked_positions(int dsize, int arity) {
    if (dsize < 1) throw std::invalid_argument("domain size must be >= 1");
    if (arity < 0) throw std::invalid_argument("arity must be >= 0");
    if (arity > max_positions())
        throw capacity_error("arity " + std::to_string(arity) + " exceeds the cap of " +
                             std::to_string(max_positions()) + " positions");
    std::size_t p = 1;
    for (int i = 0; i < arity; ++i) {
        if (p > kMaxTableBits / static_cast<std::size_t>(dsize))
            throw capacity_error("relation table of arity " + std::to_string(arity) +
                                 " over domain " + std::to_string(dsize) +
                                 " exceeds " + std::to_string(kMaxTableBits) + " bits");
        p *= static_cast<std::size_t>(dsize);
    }
    return p;
}

inline std::size_t unchecked_positions(int dsize, int arity) {
    std::size_t p = 1;
    for (int i = 0; i < arity; ++i) p *= static_cast<std::size_t>(dsize);
    return p;
}

// Radix encoding of tuples: the first coordinate is the most significant
// digit, so index order coincides with lexicographic tuple order.
inline std::size_t encode_tuple(const Tuple& t, int dsize) {
    std::size_t idx = 0;
    for (int v : t) idx = idx * static_cast<std::size_t>(dsize) + static_cast<std::size_t>(v - 1);
    return idx;
}

inline Tuple decode_tuple(std::size_t idx, int dsize, int arity) {
    Tuple t(static_cast<std::size_t>(arity));
    for (int i = arity - 1; i >= 0; --i) {
        t[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(dsize)) + 1;
        idx /= static_cast<std::size_t>(dsize);
    }
    return t;
}

inline bool tuple_in_range(const Tuple& t, int dsize) {
    for (int v : t)
        if (v < 1 || v > dsize) return false;
    return true;
}

inline Mask full_mask(int dsize) {
    return dsize >= 64 ? ~Mask(0) : ((Mask(1) << dsize) - 1);
}

}  // namespace qcsp
