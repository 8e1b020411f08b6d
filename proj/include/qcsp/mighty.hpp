#pragma once

#include <map>
#include <string>
#include <vector>

#include "qcsp/param_relation.hpp"

namespace qcsp {

// The certificate bundles. Kind I is the full five-part tuple
// (Q, D, B, C, Delta); the primed kinds add the kappa property; II/III/IV
// drop parts; V/V' are the irreflexive variants.
enum class MightyKind { I, IPrime, II, III, IV, V, VPrime };

inline const char* mighty_kind_name(MightyKind k) {
    switch (k) {
        case MightyKind::I: return "I";
        case MightyKind::IPrime: return "I'";
        case MightyKind::II: return "II";
        case MightyKind::III: return "III";
        case MightyKind::IV: return "IV";
        case MightyKind::V: return "V";
        case MightyKind::VPrime: return "V'";
    }
    return "?";
}

inline MightyKind mighty_kind_from_name(const std::string& s) {
    if (s == "I" || s == "1") return MightyKind::I;
    if (s == "I'" || s == "1p" || s == "Ip") return MightyKind::IPrime;
    if (s == "II" || s == "2") return MightyKind::II;
    if (s == "III" || s == "3") return MightyKind::III;
    if (s == "IV" || s == "4") return MightyKind::IV;
    if (s == "V" || s == "5") return MightyKind::V;
    if (s == "V'" || s == "5p" || s == "Vp") return MightyKind::VPrime;
    throw std::invalid_argument("unknown mighty tuple kind '" + s + "'");
}

struct MightyTuple {
    MightyKind kind = MightyKind::I;
    std::map<std::string, ParamRelation> parts;
    std::string provenance;

    const ParamRelation& part(const std::string& name) const {
        auto it = parts.find(name);
        if (it == parts.end()) throw std::invalid_argument("missing part '" + name + "'");
        return it->second;
    }
};

struct ConditionResult {
    int index = 0;
    bool pass = false;
    std::string witness;
};

struct MightyReport {
    MightyKind kind = MightyKind::I;
    std::vector<ConditionResult> conditions;
    bool all_pass = false;
};

namespace mighty_detail {

inline std::string z_witness(const Domain& dom, std::size_t zi) {
    return "z=" + dom.format_tuple(decode_tuple(zi, dom.size(), dom.size()));
}

inline std::string idx_witness(const Domain& dom, const char* name, std::size_t idx, int len) {
    return std::string(name) + "=" + dom.format_tuple(decode_tuple(idx, dom.size(), len));
}

// Parameter-signature checks, thrown as hard errors rather than conditions.
inline void require_sig(const ParamRelation& p, ParamSignature want, const std::string& what) {
    if (!(p.sig() == want))
        throw std::invalid_argument(what + ": expected signature z=" + std::to_string(want.z) +
                                    " delta=" + std::to_string(want.d) + " alpha=" +
                                    std::to_string(want.a) + " value=" + std::to_string(want.v));
}

// Membership of a delta index in the (z-sliced) Delta relation.
inline bool delta_has(const ParamRelation& delta, std::size_t zi, std::size_t di) {
    return delta.contains(zi, 0, 0, di);
}

}  // namespace mighty_detail

// The cross-module guard: the forallforall interpretation is always below
// the forall interpretation.
inline void assert_ff_below_f(const ParamRelation& q) {
    if (!q.q_forallforall().base().is_subset_of(q.q_forall().base()))
        throw std::logic_error("q_forallforall exceeded q_forall");
}

// Evaluates every enumerated condition of the kind's definition by direct
// enumeration over the parameter spaces; failures carry a witnessing
// parameter choice. Signature mismatches throw.
inline MightyReport check_mighty(const MightyTuple& t) {
    using namespace mighty_detail;
    MightyReport rep;
    rep.kind = t.kind;
    assert_ff_below_f(t.part("Q"));
    const Domain& dom = t.part("Q").domain();
    int A = dom.size();
    auto add = [&](int idx, bool pass, std::string witness) {
        rep.conditions.push_back({idx, pass, pass ? "" : std::move(witness)});
    };

    switch (t.kind) {
        case MightyKind::I:
        case MightyKind::IPrime: {
            const ParamRelation& q = t.part("Q");
            const ParamRelation& d = t.part("D");
            const ParamRelation& b = t.part("B");
            const ParamRelation& c = t.part("C");
            const ParamRelation& delta = t.part("Delta");
            int k = q.sig().d;
            int m = q.sig().a;
            if (m < 1) throw std::invalid_argument("Q: alpha group must be nonempty");
            require_sig(q, ParamSignature{A, k, m, 2}, "Q");
            for (const auto* u : {&d, &b, &c})
                require_sig(*u, ParamSignature{A, k, 0, 1}, "D/B/C");
            require_sig(delta, ParamSignature{A, 0, 0, k}, "Delta");
            if (t.kind == MightyKind::IPrime && m != A)
                throw std::invalid_argument("Q: kappa property needs alpha group of length |A|");

            ParamRelation qf = q.q_forall();
            ParamRelation qff = q.q_forallforall();

            bool p1 = true, p2 = true, p3 = true, p4 = true, p5 = true, p6 = false, p7 = true;
            std::string w1, w2, w3, w4, w5, w7;
            std::size_t kappa_ai = 0;
            if (t.kind == MightyKind::IPrime) kappa_ai = encode_tuple(dom.kappa(), A);
            for (std::size_t zi = 0; zi < q.zcount(); ++zi) {
                bool nonempty_delta = false;
                bool all_neq = true;
                for (std::size_t di = 0; di < q.dcount(); ++di) {
                    if (!delta_has(delta, zi, di)) continue;
                    nonempty_delta = true;
                    Mask dm = d.unary_slice(zi, di, 0);
                    Mask bm = b.unary_slice(zi, di, 0);
                    Mask cm = c.unary_slice(zi, di, 0);
                    std::string where = z_witness(dom, zi) + " " + idx_witness(dom, "delta", di, k);
                    if (p2 && (!dm || !bm || !cm)) {
                        p2 = false;
                        w2 = where;
                    }
                    if (p3) {
                        for (std::size_t ai = 0; ai < q.acount() && p3; ++ai)
                            if (!is_equivalence_on(q.slice(zi, di, ai), dm)) {
                                p3 = false;
                                w3 = where + " " + idx_witness(dom, "alpha", ai, m);
                            }
                    }
                    if (p4) {
                        Relation want(dom, 2);
                        for (int x = 1; x <= A; ++x)
                            for (int y = 1; y <= A; ++y)
                                if ((dm >> (x - 1) & 1) && (dm >> (y - 1) & 1)) want.add({x, y});
                        if (qf.slice(zi, di, 0) != want) {
                            p4 = false;
                            w4 = where;
                        }
                    }
                    if (p5) {
                        Relation ff = qff.slice(zi, di, 0);
                        auto is_class = [&](Mask u) {
                            if (!u) return false;
                            int seed = __builtin_ctzll(u) + 1;
                            Mask cls = 0;
                            for (int y = 1; y <= A; ++y)
                                if (ff.contains({seed, y})) cls |= Mask(1) << (y - 1);
                            return cls == u;
                        };
                        if (!is_class(bm) || !is_class(cm)) {
                            p5 = false;
                            w5 = where;
                        }
                    }
                    if (bm == cm) all_neq = false;
                    if (t.kind == MightyKind::IPrime && p7) {
                        Relation rk = q.slice(zi, di, kappa_ai);
                        for (std::size_t ai = 0; ai < q.acount() && p7; ++ai)
                            if (!rk.is_subset_of(q.slice(zi, di, ai))) {
                                p7 = false;
                                w7 = where + " " + idx_witness(dom, "alpha", ai, m);
                            }
                    }
                }
                if (!nonempty_delta && p1) {
                    p1 = false;
                    w1 = z_witness(dom, zi);
                }
                if (nonempty_delta && all_neq) p6 = true;
            }
            add(1, p1, w1);
            add(2, p2, w2);
            add(3, p3, w3);
            add(4, p4, w4);
            add(5, p5, w5);
            add(6, p6, "no z with B != C across all delta");
            if (t.kind == MightyKind::IPrime) add(7, p7, w7);
            break;
        }
        case MightyKind::II:
        case MightyKind::III:
        case MightyKind::IV: {
            const ParamRelation& q = t.part("Q");
            int k = q.sig().a;
            if (k < 1) throw std::invalid_argument("Q: alpha group must be nonempty");
            require_sig(q, ParamSignature{A, 0, k, 2}, "Q");
            bool has_d = t.kind != MightyKind::III;
            const ParamRelation& b = t.part("B");
            const ParamRelation& c = t.part("C");
            require_sig(b, ParamSignature{A, 0, 0, 1}, "B");
            require_sig(c, ParamSignature{A, 0, 0, 1}, "C");
            if (has_d) require_sig(t.part("D"), ParamSignature{A, 0, 0, 1}, "D");

            ParamRelation qf = q.q_forall();
            ParamRelation qff = q.q_forallforall();

            bool p1 = true, p2 = true, p3 = true, p4 = true, p5 = false;
            std::string w1, w2, w3, w4;
            for (std::size_t zi = 0; zi < q.zcount(); ++zi) {
                Mask bm = b.unary_slice(zi, 0, 0);
                Mask cm = c.unary_slice(zi, 0, 0);
                Mask dm = has_d ? t.part("D").unary_slice(zi, 0, 0) : full_mask(A);
                Relation rf = qf.slice(zi, 0, 0);
                Relation rff = qff.slice(zi, 0, 0);
                std::string where = z_witness(dom, zi);
                switch (t.kind) {
                    case MightyKind::II:
                        if (p1 && (!bm || !cm)) { p1 = false; w1 = where; }
                        if (p2)
                            for (std::size_t ai = 0; ai < q.acount() && p2; ++ai)
                                if (!is_equivalence_on(q.slice(zi, 0, ai), dm)) {
                                    p2 = false;
                                    w2 = where + " " + idx_witness(dom, "alpha", ai, k);
                                }
                        if (p3 && (image(rff, bm) != bm || image(rff, cm) != cm)) { p3 = false; w3 = where; }
                        if (p4 && (image(rf, bm) != dm || image(rf, cm) != dm)) { p4 = false; w4 = where; }
                        break;
                    case MightyKind::III:
                        if (p1 && (!bm || !cm)) { p1 = false; w1 = where; }
                        if (p2 && image(rff, bm) != bm) { p2 = false; w2 = where; }
                        if (p3 && preimage(rff, cm) != cm) { p3 = false; w3 = where; }
                        if (p4) {
                            bool hit = false;
                            for (int x = 1; x <= A && !hit; ++x)
                                for (int y = 1; y <= A && !hit; ++y)
                                    hit = (bm >> (x - 1) & 1) && (cm >> (y - 1) & 1) && rf.contains({x, y});
                            if (!hit) { p4 = false; w4 = where; }
                        }
                        break;
                    default:  // IV
                        if (p1 && (!bm || !cm || (bm & ~dm) || (cm & ~dm))) { p1 = false; w1 = where; }
                        if (p2 && image(rff, bm) != bm) { p2 = false; w2 = where; }
                        if (p3 && image(rf, bm) != dm) { p3 = false; w3 = where; }
                        if (p4 && image(rff, dm) != dm) { p4 = false; w4 = where; }
                        break;
                }
                if (!(bm & cm)) p5 = true;
            }
            add(1, p1, w1);
            add(2, p2, w2);
            add(3, p3, w3);
            add(4, p4, w4);
            add(5, p5, "B and C intersect for every z");
            break;
        }
        case MightyKind::V: {
            const ParamRelation& q = t.part("Q");
            const ParamRelation& d = t.part("D");
            int m = q.sig().a;
            if (m < 1) throw std::invalid_argument("Q: alpha group must be nonempty");
            require_sig(q, ParamSignature{A, 0, m, 2}, "Q");
            require_sig(d, ParamSignature{A, 0, 0, 1}, "D");
            ParamRelation qf = q.q_forall();
            ParamRelation qff = q.q_forallforall();
            bool p0 = true, p1 = true, p2 = true, p3 = false;
            std::string w0, w1, w2;
            for (std::size_t zi = 0; zi < q.zcount(); ++zi) {
                Mask dm = d.unary_slice(zi, 0, 0);
                std::string where = z_witness(dom, zi);
                if (p0 && !dm) { p0 = false; w0 = where; }
                if (p1 && !is_reflexive_on(qf.slice(zi, 0, 0), dm)) { p1 = false; w1 = where; }
                Relation ff = qff.slice(zi, 0, 0);
                if (p2 && (proj_mask(ff, 1) != dm || proj_mask(ff, 2) != dm)) { p2 = false; w2 = where; }
                bool loop = false;
                for (int x = 1; x <= A && !loop; ++x) loop = ff.contains({x, x});
                if (!loop) p3 = true;
            }
            add(0, p0, w0);
            add(1, p1, w1);
            add(2, p2, w2);
            add(3, p3, "Q-forallforall has a loop for every z");
            break;
        }
        case MightyKind::VPrime: {
            const ParamRelation& q = t.part("Q");
            const ParamRelation& d = t.part("D");
            const ParamRelation& delta = t.part("Delta");
            int k = q.sig().d;
            require_sig(q, ParamSignature{A, k, A, 2}, "Q");
            require_sig(d, ParamSignature{A, k, 0, 1}, "D");
            require_sig(delta, ParamSignature{A, 0, 0, k}, "Delta");
            ParamRelation qf = q.q_forall();
            ParamRelation qff = q.q_forallforall();
            std::size_t kappa_ai = encode_tuple(dom.kappa(), A);
            bool p0 = true, p1 = true, p2 = true, p3 = true, p4 = true, p5 = false;
            std::string w0, w1, w2, w3, w4;
            for (std::size_t zi = 0; zi < q.zcount(); ++zi) {
                bool nonempty = false;
                bool no_loops_all_delta = true;
                for (std::size_t di = 0; di < q.dcount(); ++di) {
                    if (!delta_has(delta, zi, di)) continue;
                    nonempty = true;
                    Mask dm = d.unary_slice(zi, di, 0);
                    std::string where = z_witness(dom, zi) + " " + idx_witness(dom, "delta", di, k);
                    if (p0 && !dm) { p0 = false; w0 = where; }
                    if (p2) {
                        Relation rk = q.slice(zi, di, kappa_ai);
                        for (std::size_t ai = 0; ai < q.acount() && p2; ++ai)
                            if (!rk.is_subset_of(q.slice(zi, di, ai))) {
                                p2 = false;
                                w2 = where + " " + idx_witness(dom, "alpha", ai, A);
                            }
                    }
                    if (p3 && !is_reflexive_on(qf.slice(zi, di, 0), dm)) { p3 = false; w3 = where; }
                    if (p4)
                        for (std::size_t ai = 0; ai < q.acount() && p4; ++ai) {
                            Relation s = q.slice(zi, di, ai);
                            if (proj_mask(s, 1) != dm || proj_mask(s, 2) != dm) {
                                p4 = false;
                                w4 = where + " " + idx_witness(dom, "alpha", ai, A);
                            }
                        }
                    Relation ff = qff.slice(zi, di, 0);
                    for (int x = 1; x <= A; ++x)
                        if (ff.contains({x, x})) no_loops_all_delta = false;
                }
                if (!nonempty && p1) { p1 = false; w1 = z_witness(dom, zi); }
                if (nonempty && no_loops_all_delta) p5 = true;
            }
            add(0, p0, w0);
            add(1, p1, w1);
            add(2, p2, w2);
            add(3, p3, w3);
            add(4, p4, w4);
            add(5, p5, "Q-forallforall has a loop under every z");
            break;
        }
    }
    rep.all_pass = true;
    for (const auto& c : rep.conditions) rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

// Kind I -> I' and kind V -> V': replace the alpha group by |A| slots and
// conjoin the relation over every index map, which pins the kappa slice to
// the forallforall interpretation without changing forall.
inline MightyTuple tuple_to_prime(const MightyTuple& t) {
    if (t.kind != MightyKind::I && t.kind != MightyKind::V)
        throw std::invalid_argument("tuple_to_prime: input must be of kind I or V");
    MightyReport pre = check_mighty(t);
    if (!pre.all_pass) throw std::invalid_argument("tuple_to_prime: input tuple fails its own checks");

    const ParamRelation& q = t.part("Q");
    assert_ff_below_f(q);
    const Domain& dom = q.domain();
    int A = dom.size();
    int k = q.sig().a;
    std::size_t maps = unchecked_positions(A, k);  // index maps [k] -> [|A|]

    bool is_v = t.kind == MightyKind::V;
    ParamSignature out_sig{A, q.sig().d, A, 2};
    ParamRelation r = make_param(dom, out_sig, [&](std::size_t zi, std::size_t di, std::size_t ai) {
        Tuple xs = decode_tuple(ai, A, A);
        Relation acc = Relation::full(dom, 2);
        for (std::size_t mi = 0; mi < maps; ++mi) {
            Tuple sel = decode_tuple(mi, A, k);
            Tuple alpha(sel.size());
            for (std::size_t j = 0; j < sel.size(); ++j)
                alpha[j] = xs[static_cast<std::size_t>(sel[j] - 1)];
            acc = intersect(acc, q.slice(zi, di, encode_tuple(alpha, A)));
        }
        if (is_v) {
            Mask dm = t.part("D").unary_slice(zi, di, 0);
            Relation dd(dom, 2);
            for (int x = 1; x <= A; ++x)
                for (int y = 1; y <= A; ++y)
                    if ((dm >> (x - 1) & 1) && (dm >> (y - 1) & 1)) dd.add({x, y});
            acc = intersect(acc, dd);
        }
        return acc;
    });

    MightyTuple out;
    out.provenance = "primed from kind " + std::string(mighty_kind_name(t.kind));
    if (t.kind == MightyKind::I) {
        out.kind = MightyKind::IPrime;
        out.parts = {{"Q", r},
                     {"D", t.part("D")},
                     {"B", t.part("B")},
                     {"C", t.part("C")},
                     {"Delta", t.part("Delta")}};
    } else {
        out.kind = MightyKind::VPrime;
        // Delta of arity 0 per z: the empty tuple is present for every z
        ParamRelation delta(Relation::full(dom, A), ParamSignature{A, 0, 0, 0});
        out.parts = {{"Q", r}, {"D", t.part("D")}, {"Delta", delta}};
    }

    // the defining identities of the primed relation
    std::size_t kappa_ai = encode_tuple(dom.kappa(), A);
    ParamRelation rff = r.q_forallforall();
    ParamRelation qff = q.q_forallforall();
    ParamRelation rf = r.q_forall();
    ParamRelation qf = q.q_forall();
    for (std::size_t zi = 0; zi < r.zcount(); ++zi)
        for (std::size_t di = 0; di < r.dcount(); ++di) {
            Relation rk = r.slice(zi, di, kappa_ai);
            Relation want_ff = qff.slice(zi, di, 0);
            Relation want_f = qf.slice(zi, di, 0);
            if (is_v) {
                Mask dm = t.part("D").unary_slice(zi, di, 0);
                Relation dd(dom, 2);
                for (int x = 1; x <= A; ++x)
                    for (int y = 1; y <= A; ++y)
                        if ((dm >> (x - 1) & 1) && (dm >> (y - 1) & 1)) dd.add({x, y});
                want_ff = intersect(want_ff, dd);
                want_f = intersect(want_f, dd);
            }
            if (rk != want_ff || rff.slice(zi, di, 0) != want_ff)
                throw std::logic_error("tuple_to_prime: kappa slice differs from forallforall");
            if (rf.slice(zi, di, 0) != want_f)
                throw std::logic_error("tuple_to_prime: forall interpretation changed");
        }

    MightyReport post = check_mighty(out);
    if (!post.all_pass) throw std::logic_error("tuple_to_prime: output failed the primed checks");
    return out;
}

}  // namespace qcsp
