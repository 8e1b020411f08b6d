#pragma once

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsp/base.hpp"
#include "qcsp/bitset.hpp"
#include "qcsp/domain.hpp"

namespace qcsp {

// A finite relation over A = {1..|A|}: an arity and a set of tuples, stored
// as a bitset indexed by the radix encoding of the tuple. Arity 0 is
// first-class: the table has a single position and the relation is either
// {Lambda} (the empty tuple) or empty.
class Relation {
public:
    Relation() : dom_(), arity_(0), bits_(1) {}
    Relation(Domain dom, int arity)
        : dom_(std::move(dom)), arity_(arity), bits_(checked_positions(dom_.size(), arity)) {}

    static Relation full(const Domain& dom, int arity) {
        Relation r(dom, arity);
        r.bits_.set_all();
        return r;
    }

    static Relation from_tuples(const Domain& dom, int arity, const std::vector<Tuple>& ts) {
        Relation r(dom, arity);
        for (const auto& t : ts) r.add(t);
        return r;
    }

    // Binary identity relation {(a,a) : a in A}.
    static Relation diagonal(const Domain& dom) {
        Relation r(dom, 2);
        for (int a = 1; a <= dom.size(); ++a) r.add({a, a});
        return r;
    }

    const Domain& domain() const { return dom_; }
    int domain_size() const { return dom_.size(); }
    int arity() const { return arity_; }
    std::size_t positions() const { return bits_.size(); }
    std::size_t count() const { return bits_.count(); }
    bool empty() const { return bits_.none(); }

    bool test_index(std::size_t i) const { return bits_.test(i); }
    void set_index(std::size_t i) {
        drop_rows();
        bits_.set(i);
    }
    void reset_index(std::size_t i) {
        drop_rows();
        bits_.reset(i);
    }

    bool contains(const Tuple& t) const {
        check_tuple(t);
        return bits_.test(encode_tuple(t, dom_.size()));
    }
    void add(const Tuple& t) {
        check_tuple(t);
        drop_rows();
        bits_.set(encode_tuple(t, dom_.size()));
    }
    void remove(const Tuple& t) {
        check_tuple(t);
        drop_rows();
        bits_.reset(encode_tuple(t, dom_.size()));
    }

    // All tuples in index (= lexicographic) order.
    std::vector<Tuple> tuples() const {
        std::vector<Tuple> out;
        for (std::size_t i = bits_.next_set(0); i < bits_.size(); i = bits_.next_set(i + 1))
            out.push_back(decode_tuple(i, dom_.size(), arity_));
        return out;
    }

    // Cached tuple list: computed on first use, dropped on mutation. Safe to
    // call from several threads on a relation that is no longer mutated.
    std::shared_ptr<const std::vector<Tuple>> rows() const {
        auto cached = std::atomic_load(&rows_);
        if (!cached) {
            cached = std::make_shared<const std::vector<Tuple>>(tuples());
            std::atomic_store(&rows_, cached);
        }
        return cached;
    }

    // Per coordinate, a class id per value: two values share a class iff
    // their rows project to the same partner-tuple list. Values in one class
    // are interchangeable at that coordinate, which the solvers use to prune
    // branching. Cached like rows().
    std::shared_ptr<const std::vector<std::vector<int>>> column_classes() const {
        auto cached = std::atomic_load(&col_classes_);
        if (cached) return cached;
        auto rows_ptr = rows();
        int ds = dom_.size();
        auto out = std::make_shared<std::vector<std::vector<int>>>();
        for (int coord = 0; coord < arity_; ++coord) {
            std::vector<std::vector<std::size_t>> pattern(static_cast<std::size_t>(ds));
            for (const Tuple& t : *rows_ptr) {
                Tuple rest;
                rest.reserve(t.size() - 1);
                for (int j = 0; j < arity_; ++j)
                    if (j != coord) rest.push_back(t[static_cast<std::size_t>(j)]);
                pattern[static_cast<std::size_t>(t[static_cast<std::size_t>(coord)] - 1)].push_back(
                    encode_tuple(rest, ds));
            }
            std::vector<int> cls(static_cast<std::size_t>(ds), -1);
            int next = 0;
            for (int a = 0; a < ds; ++a) {
                if (cls[static_cast<std::size_t>(a)] >= 0) continue;
                cls[static_cast<std::size_t>(a)] = next;
                for (int b = a + 1; b < ds; ++b)
                    if (cls[static_cast<std::size_t>(b)] < 0 &&
                        pattern[static_cast<std::size_t>(a)] == pattern[static_cast<std::size_t>(b)])
                        cls[static_cast<std::size_t>(b)] = next;
                ++next;
            }
            out->push_back(std::move(cls));
        }
        std::shared_ptr<const std::vector<std::vector<int>>> frozen = out;
        std::atomic_store(&col_classes_, frozen);
        return frozen;
    }

    template <class F>
    void for_each_index(F&& f) const {
        for (std::size_t i = bits_.next_set(0); i < bits_.size(); i = bits_.next_set(i + 1)) f(i);
    }

    const Bitset& bits() const { return bits_; }
    Bitset& bits() {
        drop_rows();
        return bits_;
    }

    bool operator==(const Relation& o) const {
        return dom_.size() == o.dom_.size() && arity_ == o.arity_ && bits_ == o.bits_;
    }
    bool operator!=(const Relation& o) const { return !(*this == o); }

    bool is_subset_of(const Relation& o) const {
        require_same_shape(o);
        return bits_.is_subset_of(o.bits_);
    }

private:
    void check_tuple(const Tuple& t) const {
        if (static_cast<int>(t.size()) != arity_) throw std::invalid_argument("tuple length != arity");
        if (!tuple_in_range(t, dom_.size())) throw std::invalid_argument("tuple entry out of domain");
    }
    void require_same_shape(const Relation& o) const {
        if (dom_.size() != o.dom_.size() || arity_ != o.arity_)
            throw std::invalid_argument("relation shape mismatch");
    }
    void drop_rows() {
        std::atomic_store(&rows_, std::shared_ptr<const std::vector<Tuple>>());
        std::atomic_store(&col_classes_, std::shared_ptr<const std::vector<std::vector<int>>>());
    }

    Domain dom_;
    int arity_;
    Bitset bits_;
    mutable std::shared_ptr<const std::vector<Tuple>> rows_;
    mutable std::shared_ptr<const std::vector<std::vector<int>>> col_classes_;
};

inline void require_binary(const Relation& r, const char* who) {
    if (r.arity() != 2) throw std::invalid_argument(std::string(who) + ": relation must be binary");
}

inline void require_same_domain(const Relation& a, const Relation& b, const char* who) {
    if (a.domain_size() != b.domain_size())
        throw std::invalid_argument(std::string(who) + ": domain mismatch");
}

inline Relation intersect(const Relation& a, const Relation& b) {
    require_same_domain(a, b, "intersect");
    if (a.arity() != b.arity()) throw std::invalid_argument("intersect: arity mismatch");
    Relation r = a;
    r.bits() &= b.bits();
    return r;
}

inline Relation unite(const Relation& a, const Relation& b) {
    require_same_domain(a, b, "unite");
    if (a.arity() != b.arity()) throw std::invalid_argument("unite: arity mismatch");
    Relation r = a;
    r.bits() |= b.bits();
    return r;
}

inline Relation converse(const Relation& s) {
    require_binary(s, "converse");
    Relation r(s.domain(), 2);
    int n = s.domain_size();
    for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y)
            if (s.contains({x, y})) r.add({y, x});
    return r;
}

// S1 + S2 = {(x,y) : exists z, S1(x,z) and S2(z,y)}.
inline Relation compose(const Relation& s1, const Relation& s2) {
    require_binary(s1, "compose");
    require_binary(s2, "compose");
    require_same_domain(s1, s2, "compose");
    int n = s1.domain_size();
    Relation r(s1.domain(), 2);
    for (int x = 1; x <= n; ++x)
        for (int z = 1; z <= n; ++z) {
            if (!s1.contains({x, z})) continue;
            for (int y = 1; y <= n; ++y)
                if (s2.contains({z, y})) r.add({x, y});
        }
    return r;
}

// S1 - S2 = {(x,y) : exists z, S1(x,z) and S2(y,z)} = S1 + converse(S2).
inline Relation compose_inv(const Relation& s1, const Relation& s2) {
    require_binary(s1, "compose_inv");
    require_binary(s2, "compose_inv");
    require_same_domain(s1, s2, "compose_inv");
    return compose(s1, converse(s2));
}

// m-fold composition S + S + ... + S.
inline Relation repeat(const Relation& s, long m) {
    require_binary(s, "repeat");
    if (m < 1) throw std::invalid_argument("repeat: m must be >= 1");
    Relation acc = s;
    for (long i = 1; i < m; ++i) acc = compose(acc, s);
    return acc;
}

// Unary/binary compositions, with U a subset mask of the domain.
// image(S, U)    = U + S = {y : exists x in U, S(x,y)}
// preimage(S, U) = S + U = {x : exists y, S(x,y) and y in U}
inline Mask image(const Relation& s, Mask u) {
    require_binary(s, "image");
    Mask out = 0;
    int n = s.domain_size();
    for (int x = 1; x <= n; ++x) {
        if (!(u >> (x - 1) & 1)) continue;
        for (int y = 1; y <= n; ++y)
            if (s.contains({x, y})) out |= Mask(1) << (y - 1);
    }
    return out;
}

inline Mask preimage(const Relation& s, Mask u) {
    require_binary(s, "preimage");
    Mask out = 0;
    int n = s.domain_size();
    for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y)
            if ((u >> (y - 1) & 1) && s.contains({x, y})) out |= Mask(1) << (x - 1);
    return out;
}

inline Mask unary_mask(const Relation& u) {
    if (u.arity() != 1) throw std::invalid_argument("unary_mask: relation must be unary");
    Mask m = 0;
    for (int a = 1; a <= u.domain_size(); ++a)
        if (u.contains({a})) m |= Mask(1) << (a - 1);
    return m;
}

inline Relation mask_relation(const Domain& dom, Mask m) {
    Relation r(dom, 1);
    for (int a = 1; a <= dom.size(); ++a)
        if (m >> (a - 1) & 1) r.add({a});
    return r;
}

inline bool is_symmetric(const Relation& r) {
    require_binary(r, "is_symmetric");
    int n = r.domain_size();
    for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y)
            if (r.contains({x, y}) != r.contains({y, x})) return false;
    return true;
}

inline bool is_transitive(const Relation& r) {
    require_binary(r, "is_transitive");
    return compose(r, r).is_subset_of(r);
}

inline bool is_reflexive_on(const Relation& r, Mask d) {
    require_binary(r, "is_reflexive_on");
    for (int a = 1; a <= r.domain_size(); ++a)
        if ((d >> (a - 1) & 1) && !r.contains({a, a})) return false;
    return true;
}

inline bool supported_on(const Relation& r, Mask d) {
    require_binary(r, "supported_on");
    int n = r.domain_size();
    for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y)
            if (r.contains({x, y}) && !((d >> (x - 1) & 1) && (d >> (y - 1) & 1))) return false;
    return true;
}

// Equivalence relation on the subset d: support within d*d, reflexive on d,
// symmetric and transitive.
inline bool is_equivalence_on(const Relation& r, Mask d) {
    return supported_on(r, d) && is_reflexive_on(r, d) && is_symmetric(r) && is_transitive(r);
}

// Least symmetric transitive superset of r. For r reflexive on its support
// this coincides with the alternating composition r - r + r - ... iterated
// to a fixpoint.
inline Relation trans_sym_closure(const Relation& r, const Relation& d) {
    require_binary(r, "trans_sym_closure");
    if (d.arity() != 1) throw std::invalid_argument("trans_sym_closure: d must be unary");
    require_same_domain(r, d, "trans_sym_closure");
    Relation acc = unite(r, converse(r));
    while (true) {
        Relation next = unite(acc, compose(acc, acc));
        if (next == acc) return acc;
        acc = next;
    }
}

inline Relation trans_sym_closure(const Relation& r) {
    return trans_sym_closure(r, Relation::full(r.domain(), 1));
}

// Join of two equivalence relations on d: the minimal equivalence relation
// containing both, computed as the fixpoint of alternating compositions
// r1 + r2 + r1 + r2 + ...
inline Relation join_equiv(const Relation& r1, const Relation& r2, const Relation& d) {
    require_binary(r1, "join_equiv");
    require_binary(r2, "join_equiv");
    if (d.arity() != 1) throw std::invalid_argument("join_equiv: d must be unary");
    require_same_domain(r1, r2, "join_equiv");
    require_same_domain(r1, d, "join_equiv");
    Mask dm = unary_mask(d);
    if (!is_equivalence_on(r1, dm) || !is_equivalence_on(r2, dm))
        throw std::invalid_argument("join_equiv: inputs must be equivalence relations on d");
    Relation acc = compose(r1, r2);
    while (true) {
        Relation next = compose(acc, acc);
        if (next == acc) return acc;
        acc = next;
    }
}

// Projection onto the listed coordinates (1-based), in the given order.
inline Relation project(const Relation& r, const std::vector<int>& coords) {
    for (int c : coords)
        if (c < 1 || c > r.arity()) throw std::invalid_argument("project: coordinate out of range");
    Relation out(r.domain(), static_cast<int>(coords.size()));
    int dsize = r.domain_size();
    r.for_each_index([&](std::size_t idx) {
        Tuple t = decode_tuple(idx, dsize, r.arity());
        Tuple p(coords.size());
        for (std::size_t i = 0; i < coords.size(); ++i)
            p[i] = t[static_cast<std::size_t>(coords[i] - 1)];
        out.add(p);
    });
    return out;
}

inline Mask proj_mask(const Relation& r, int coord) {
    Mask m = 0;
    int dsize = r.domain_size();
    r.for_each_index([&](std::size_t idx) {
        Tuple t = decode_tuple(idx, dsize, r.arity());
        m |= Mask(1) << (t[static_cast<std::size_t>(coord - 1)] - 1);
    });
    return m;
}

// Fix the listed coordinates to the given values and drop them; the
// remaining coordinates keep their order.
inline Relation pin_coords(const Relation& r, const std::vector<std::pair<int, int>>& pins) {
    std::vector<int> pinned_value(static_cast<std::size_t>(r.arity()) + 1, 0);
    for (auto [c, v] : pins) {
        if (c < 1 || c > r.arity()) throw std::invalid_argument("pin_coords: coordinate out of range");
        if (v < 1 || v > r.domain_size()) throw std::invalid_argument("pin_coords: value out of range");
        pinned_value[static_cast<std::size_t>(c)] = v;
    }
    std::vector<int> keep;
    for (int c = 1; c <= r.arity(); ++c)
        if (!pinned_value[static_cast<std::size_t>(c)]) keep.push_back(c);
    Relation out(r.domain(), static_cast<int>(keep.size()));
    int dsize = r.domain_size();
    r.for_each_index([&](std::size_t idx) {
        Tuple t = decode_tuple(idx, dsize, r.arity());
        for (auto [c, v] : pins)
            if (t[static_cast<std::size_t>(c - 1)] != v) return;
        Tuple p(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i)
            p[i] = t[static_cast<std::size_t>(keep[i] - 1)];
        out.add(p);
    });
    return out;
}

}  // namespace qcsp
