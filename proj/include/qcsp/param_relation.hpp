#pragma once

#include <functional>
#include <optional>
#include <stdexcept>

#include "qcsp/relation.hpp"

namespace qcsp {

// Coordinate group lengths of a parameterized relation. The base relation's
// coordinates are always ordered z-group, delta-group, alpha-group,
// value-group; every consumer relies on this one flat layout. A plain
// z-parameterized relation has zlen = |A|; the value group may be empty
// (a 0-ary slice is {Lambda} or empty).
struct ParamSignature {
    int z = 0;
    int d = 0;
    int a = 0;
    int v = 0;

    int arity() const { return z + d + a + v; }
    bool operator==(const ParamSignature& o) const {
        return z == o.z && d == o.d && a == o.a && v == o.v;
    }
};

class ParamRelation {
public:
    ParamRelation() = default;
    ParamRelation(Relation base, ParamSignature sig) : base_(std::move(base)), sig_(sig) {
        if (sig_.z < 0 || sig_.d < 0 || sig_.a < 0 || sig_.v < 0)
            throw std::invalid_argument("negative group length");
        if (sig_.arity() != base_.arity())
            throw std::invalid_argument("signature group lengths do not sum to base arity");
    }

    const Relation& base() const { return base_; }
    const Domain& domain() const { return base_.domain(); }
    int domain_size() const { return base_.domain_size(); }
    const ParamSignature& sig() const { return sig_; }

    std::size_t zcount() const { return unchecked_positions(domain_size(), sig_.z); }
    std::size_t dcount() const { return unchecked_positions(domain_size(), sig_.d); }
    std::size_t acount() const { return unchecked_positions(domain_size(), sig_.a); }
    std::size_t vcount() const { return unchecked_positions(domain_size(), sig_.v); }

    bool contains(std::size_t zi, std::size_t di, std::size_t ai, std::size_t vi) const {
        return base_.test_index(((zi * dcount() + di) * acount() + ai) * vcount() + vi);
    }
    void set(std::size_t zi, std::size_t di, std::size_t ai, std::size_t vi) {
        base_.set_index(((zi * dcount() + di) * acount() + ai) * vcount() + vi);
    }

    // The value relation at fixed parameter indices.
    Relation slice(std::size_t zi, std::size_t di, std::size_t ai) const {
        Relation out(domain(), sig_.v);
        std::size_t off = ((zi * dcount() + di) * acount() + ai) * vcount();
        for (std::size_t vi = 0; vi < vcount(); ++vi)
            if (base_.test_index(off + vi)) out.set_index(vi);
        return out;
    }

    Mask unary_slice(std::size_t zi, std::size_t di, std::size_t ai) const {
        if (sig_.v != 1) throw std::invalid_argument("unary_slice: value group must be unary");
        Mask m = 0;
        std::size_t off = ((zi * dcount() + di) * acount() + ai) * vcount();
        for (int a = 1; a <= domain_size(); ++a)
            if (base_.test_index(off + static_cast<std::size_t>(a - 1))) m |= Mask(1) << (a - 1);
        return m;
    }

    bool slice_empty(std::size_t zi, std::size_t di, std::size_t ai) const {
        std::size_t off = ((zi * dcount() + di) * acount() + ai) * vcount();
        for (std::size_t vi = 0; vi < vcount(); ++vi)
            if (base_.test_index(off + vi)) return false;
        return true;
    }

    // Fix the supplied groups and return the relation over the remaining
    // coordinates; groups left unset stay parameters. Fixing every group
    // leaves a ParamRelation with an empty parameter part, whose value
    // relation is as_relation().
    ParamRelation instantiate(const std::optional<Tuple>& z, const std::optional<Tuple>& d,
                              const std::optional<Tuple>& a) const {
        auto check = [&](const std::optional<Tuple>& t, int len, const char* name) {
            if (t && static_cast<int>(t->size()) != len)
                throw std::invalid_argument(std::string("instantiate: ") + name + " group length mismatch");
            if (t && !tuple_in_range(*t, domain_size()))
                throw std::invalid_argument(std::string("instantiate: ") + name + " entry out of domain");
        };
        check(z, sig_.z, "z");
        check(d, sig_.d, "delta");
        check(a, sig_.a, "alpha");

        ParamSignature out_sig{z ? 0 : sig_.z, d ? 0 : sig_.d, a ? 0 : sig_.a, sig_.v};
        Relation out(domain(), out_sig.arity());
        std::size_t ds = static_cast<std::size_t>(domain_size());
        std::size_t zn = z ? 1 : zcount(), dn = d ? 1 : dcount(), an = a ? 1 : acount();
        std::size_t zfix = z ? encode_tuple(*z, domain_size()) : 0;
        std::size_t dfix = d ? encode_tuple(*d, domain_size()) : 0;
        std::size_t afix = a ? encode_tuple(*a, domain_size()) : 0;
        std::size_t out_idx = 0;
        for (std::size_t zi = 0; zi < zn; ++zi)
            for (std::size_t di = 0; di < dn; ++di)
                for (std::size_t ai = 0; ai < an; ++ai)
                    for (std::size_t vi = 0; vi < vcount(); ++vi, ++out_idx)
                        if (contains(z ? zfix : zi, d ? dfix : di, a ? afix : ai, vi))
                            out.set_index(out_idx);
        (void)ds;
        return ParamRelation(std::move(out), out_sig);
    }

    Relation as_relation() const {
        if (sig_.z || sig_.d || sig_.a)
            throw std::invalid_argument("as_relation: parameter groups remain");
        return base_;
    }

    // Forall-interpretation of the alpha parameter: intersect the slices over
    // all constant tuples (a, a, ..., a). The result is (z, delta)-parameterized.
    ParamRelation q_forall() const {
        if (sig_.a < 1) throw std::invalid_argument("q_forall: alpha group is empty");
        ParamSignature out_sig{sig_.z, sig_.d, 0, sig_.v};
        Relation out(domain(), out_sig.arity());
        for (std::size_t zi = 0; zi < zcount(); ++zi)
            for (std::size_t di = 0; di < dcount(); ++di)
                for (std::size_t vi = 0; vi < vcount(); ++vi) {
                    bool all = true;
                    for (int a = 1; a <= domain_size() && all; ++a) {
                        Tuple ct(static_cast<std::size_t>(sig_.a), a);
                        all = contains(zi, di, encode_tuple(ct, domain_size()), vi);
                    }
                    if (all) out.set_index((zi * dcount() + di) * vcount() + vi);
                }
        return ParamRelation(std::move(out), out_sig);
    }

    // Intersection over all alpha tuples; always a subset of q_forall().
    ParamRelation q_forallforall() const {
        if (sig_.a < 1) throw std::invalid_argument("q_forallforall: alpha group is empty");
        ParamSignature out_sig{sig_.z, sig_.d, 0, sig_.v};
        Relation out(domain(), out_sig.arity());
        for (std::size_t zi = 0; zi < zcount(); ++zi)
            for (std::size_t di = 0; di < dcount(); ++di)
                for (std::size_t vi = 0; vi < vcount(); ++vi) {
                    bool all = true;
                    for (std::size_t ai = 0; ai < acount() && all; ++ai)
                        all = contains(zi, di, ai, vi);
                    if (all) out.set_index((zi * dcount() + di) * vcount() + vi);
                }
        return ParamRelation(std::move(out), out_sig);
    }

    bool operator==(const ParamRelation& o) const { return sig_ == o.sig_ && base_ == o.base_; }
    bool operator!=(const ParamRelation& o) const { return !(*this == o); }

private:
    Relation base_;
    ParamSignature sig_;
};

// Builds a parameterized relation slice by slice.
inline ParamRelation make_param(const Domain& dom, ParamSignature sig,
                                const std::function<Relation(std::size_t, std::size_t, std::size_t)>& fn) {
    Relation base(dom, sig.arity());
    ParamRelation shape(Relation(dom, sig.arity()), sig);
    std::size_t vn = shape.vcount();
    std::size_t idx = 0;
    for (std::size_t zi = 0; zi < shape.zcount(); ++zi)
        for (std::size_t di = 0; di < shape.dcount(); ++di)
            for (std::size_t ai = 0; ai < shape.acount(); ++ai) {
                Relation s = fn(zi, di, ai);
                if (s.arity() != sig.v) throw std::invalid_argument("make_param: slice arity mismatch");
                for (std::size_t vi = 0; vi < vn; ++vi, ++idx)
                    if (s.test_index(vi)) base.set_index(idx);
            }
    return ParamRelation(std::move(base), sig);
}

}  // namespace qcsp
