#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qcsp/formula.hpp"
#include "qcsp/mighty.hpp"

namespace qcsp {

// A quadruple (R, D, B, C): R a (z, alpha)-parameterized binary relation,
// D, B, C z-parameterized unary relations.
struct Quadruple {
    ParamRelation r;
    ParamRelation d, b, c;

    const Domain& domain() const { return r.domain(); }
    int alpha_len() const { return r.sig().a; }

    void require_shape() const {
        int A = domain().size();
        if (!(r.sig() == ParamSignature{A, 0, r.sig().a, 2}) || r.sig().a < 1)
            throw std::invalid_argument("quadruple: R must be (z,alpha)-parameterized binary");
        for (const ParamRelation* u : {&d, &b, &c})
            if (!(u->sig() == ParamSignature{A, 0, 0, 1}))
                throw std::invalid_argument("quadruple: D/B/C must be z-parameterized unary");
    }

    std::size_t zcount() const { return r.zcount(); }
    Relation r_slice(std::size_t zi, std::size_t ai) const { return r.slice(zi, 0, ai); }
    Mask dm(std::size_t zi) const { return d.unary_slice(zi, 0, 0); }
    Mask bm(std::size_t zi) const { return b.unary_slice(zi, 0, 0); }
    Mask cm(std::size_t zi) const { return c.unary_slice(zi, 0, 0); }

    long sum_d() const {
        long s = 0;
        for (std::size_t zi = 0; zi < zcount(); ++zi) s += __builtin_popcountll(dm(zi));
        return s;
    }
    long sum_c() const {
        long s = 0;
        for (std::size_t zi = 0; zi < zcount(); ++zi) s += __builtin_popcountll(cm(zi));
        return s;
    }
};

// The fourteen quadruple properties. kappa fixes the alpha group to |A| and
// pins the kappa slice below every slice; the rest are composition equations
// between the parts and the forall / forallforall interpretations.
enum class QProp { Kappa, DPlus, Un, Bc, Empty, BPlus, PlusC, T, Sd, R, Bd, Cd, CPlus, S };

inline const char* qprop_name(QProp p) {
    switch (p) {
        case QProp::Kappa: return "kappa";
        case QProp::DPlus: return "d+";
        case QProp::Un: return "un";
        case QProp::Bc: return "bc";
        case QProp::Empty: return "empty";
        case QProp::BPlus: return "b+";
        case QProp::PlusC: return "+c";
        case QProp::T: return "t";
        case QProp::Sd: return "sd";
        case QProp::R: return "r";
        case QProp::Bd: return "bd";
        case QProp::Cd: return "cd";
        case QProp::CPlus: return "c+";
        case QProp::S: return "s";
    }
    return "?";
}

inline QProp qprop_from_name(const std::string& s) {
    for (QProp p : {QProp::Kappa, QProp::DPlus, QProp::Un, QProp::Bc, QProp::Empty, QProp::BPlus,
                    QProp::PlusC, QProp::T, QProp::Sd, QProp::R, QProp::Bd, QProp::Cd, QProp::CPlus,
                    QProp::S})
        if (s == qprop_name(p)) return p;
    throw std::invalid_argument("unknown quadruple property '" + s + "'");
}

struct PropResult {
    bool pass = false;
    std::string witness;
};

inline PropResult check_quadruple_property(const Quadruple& q, QProp prop) {
    q.require_shape();
    const Domain& dom = q.domain();
    int A = dom.size();
    int k = q.alpha_len();
    ParamRelation rf = q.r.q_forall();
    ParamRelation rff = q.r.q_forallforall();
    if (!rff.base().is_subset_of(rf.base()))
        throw std::logic_error("q_forallforall exceeded q_forall");
    auto zw = [&](std::size_t zi) { return mighty_detail::z_witness(dom, zi); };
    auto aw = [&](std::size_t ai) { return mighty_detail::idx_witness(dom, "alpha", ai, k); };

    auto forall_z = [&](const std::function<bool(std::size_t)>& f) -> PropResult {
        for (std::size_t zi = 0; zi < q.zcount(); ++zi)
            if (!f(zi)) return {false, zw(zi)};
        return {true, ""};
    };
    auto exists_z = [&](const std::function<bool(std::size_t)>& f) -> PropResult {
        for (std::size_t zi = 0; zi < q.zcount(); ++zi)
            if (f(zi)) return {true, ""};
        return {false, "no z works"};
    };
    auto forall_za = [&](const std::function<bool(std::size_t, std::size_t)>& f) -> PropResult {
        for (std::size_t zi = 0; zi < q.zcount(); ++zi)
            for (std::size_t ai = 0; ai < q.r.acount(); ++ai)
                if (!f(zi, ai)) return {false, zw(zi) + " " + aw(ai)};
        return {true, ""};
    };

    switch (prop) {
        case QProp::Kappa: {
            if (k != A) return {false, "alpha group has length " + std::to_string(k)};
            std::size_t kappa_ai = encode_tuple(dom.kappa(), A);
            return forall_za([&](std::size_t zi, std::size_t ai) {
                return q.r_slice(zi, kappa_ai).is_subset_of(q.r_slice(zi, ai));
            });
        }
        case QProp::DPlus:
            return forall_z([&](std::size_t zi) {
                return image(rff.slice(zi, 0, 0), q.dm(zi)) == q.dm(zi);
            });
        case QProp::Un:
            return forall_z([&](std::size_t zi) {
                Mask b = q.bm(zi), c = q.cm(zi), d = q.dm(zi);
                return b && c && !(b & ~d) && !(c & ~d);
            });
        case QProp::Bc:
            return forall_z([&](std::size_t zi) {
                Relation f = rf.slice(zi, 0, 0);
                for (int x = 1; x <= A; ++x)
                    for (int y = 1; y <= A; ++y)
                        if ((q.bm(zi) >> (x - 1) & 1) && (q.cm(zi) >> (y - 1) & 1) && f.contains({x, y}))
                            return true;
                return false;
            });
        case QProp::Empty:
            return exists_z([&](std::size_t zi) { return (q.bm(zi) & q.cm(zi)) == 0; });
        case QProp::BPlus:
            return forall_z([&](std::size_t zi) {
                return image(rff.slice(zi, 0, 0), q.bm(zi)) == q.bm(zi);
            });
        case QProp::PlusC:
            return forall_z([&](std::size_t zi) {
                return preimage(rff.slice(zi, 0, 0), q.cm(zi)) == q.cm(zi);
            });
        case QProp::T:
            return forall_za([&](std::size_t zi, std::size_t ai) {
                Relation s = q.r_slice(zi, ai);
                return compose(s, s) == s;
            });
        case QProp::Sd:
            return forall_za([&](std::size_t zi, std::size_t ai) {
                Relation s = q.r_slice(zi, ai);
                return proj_mask(s, 1) == q.dm(zi) && proj_mask(s, 2) == q.dm(zi);
            });
        case QProp::R:
            return forall_za([&](std::size_t zi, std::size_t ai) {
                return is_reflexive_on(q.r_slice(zi, ai), q.dm(zi));
            });
        case QProp::Bd:
            return forall_z([&](std::size_t zi) {
                return image(rf.slice(zi, 0, 0), q.bm(zi)) == q.dm(zi);
            });
        case QProp::Cd:
            return forall_z([&](std::size_t zi) {
                return preimage(rf.slice(zi, 0, 0), q.cm(zi)) == q.dm(zi);
            });
        case QProp::CPlus:
            return exists_z([&](std::size_t zi) {
                return image(rff.slice(zi, 0, 0), q.cm(zi)) == q.cm(zi);
            });
        case QProp::S:
            return forall_za(
                [&](std::size_t zi, std::size_t ai) { return is_symmetric(q.r_slice(zi, ai)); });
    }
    return {false, "unreachable"};
}

inline const std::vector<QProp>& props_iii() {
    static const std::vector<QProp> v = {QProp::Un, QProp::Bc, QProp::Empty, QProp::BPlus,
                                         QProp::PlusC};
    return v;
}
inline const std::vector<QProp>& props_iv() {
    static const std::vector<QProp> v = {QProp::DPlus, QProp::Un, QProp::Bc, QProp::Empty,
                                         QProp::BPlus, QProp::Bd};
    return v;
}
inline const std::vector<QProp>& props_j() {
    static const std::vector<QProp> v = {QProp::Kappa, QProp::DPlus, QProp::Un,    QProp::Bc,
                                         QProp::Empty, QProp::BPlus, QProp::PlusC, QProp::T,
                                         QProp::R,     QProp::Sd};
    return v;
}
inline const std::vector<QProp>& props_ii_kappa() {
    static const std::vector<QProp> v = {QProp::Kappa, QProp::DPlus, QProp::Un,    QProp::Bc,
                                         QProp::Empty, QProp::BPlus, QProp::PlusC, QProp::T,
                                         QProp::R,     QProp::Sd,    QProp::Bd,    QProp::Cd,
                                         QProp::CPlus, QProp::S};
    return v;
}

namespace quad_detail {

inline void require_props(const Quadruple& q, const std::vector<QProp>& props, const char* who) {
    for (QProp p : props) {
        PropResult res = check_quadruple_property(q, p);
        if (!res.pass)
            throw std::invalid_argument(std::string(who) + ": missing property (" + qprop_name(p) +
                                        ") " + res.witness);
    }
}

inline void require_absent(const Quadruple& q, QProp p, const char* who) {
    if (check_quadruple_property(q, p).pass)
        throw std::invalid_argument(std::string(who) + ": property (" + qprop_name(p) +
                                    ") unexpectedly holds");
}

inline void assert_props(const Quadruple& q, const std::vector<QProp>& props, const char* who) {
    for (QProp p : props) {
        PropResult res = check_quadruple_property(q, p);
        if (!res.pass)
            throw std::logic_error(std::string(who) + ": conclusion property (" + qprop_name(p) +
                                   ") failed " + res.witness);
    }
}

inline Mask domain_square_filtered(const Relation& s, Mask dm, int A, Relation& out) {
    out = Relation(s.domain(), 2);
    for (int x = 1; x <= A; ++x)
        for (int y = 1; y <= A; ++y)
            if ((dm >> (x - 1) & 1) && (dm >> (y - 1) & 1) && s.contains({x, y})) out.add({x, y});
    return dm;
}

inline ParamRelation restrict_r(const Quadruple& q, const std::function<Mask(std::size_t)>& new_d) {
    return make_param(q.domain(), q.r.sig(), [&](std::size_t zi, std::size_t, std::size_t ai) {
        Relation out(q.domain(), 2);
        domain_square_filtered(q.r_slice(zi, ai), new_d(zi), q.domain().size(), out);
        return out;
    });
}

inline ParamRelation unary_param(const Domain& dom, std::size_t zcount,
                                 const std::function<Mask(std::size_t)>& f) {
    (void)zcount;
    return make_param(dom, ParamSignature{dom.size(), 0, 0, 1},
                      [&](std::size_t zi, std::size_t, std::size_t) {
                          return mask_relation(dom, f(zi));
                      });
}

inline Relation kappa_slice(const Quadruple& q, std::size_t zi) {
    return q.r_slice(zi, encode_tuple(q.domain().kappa(), q.domain().size()));
}

}  // namespace quad_detail

// One transformation per claim, keyed by name. Each checks its hypothesis
// set first (invalid_argument naming the missing property), builds the new
// quadruple by the claim's explicit construction, and asserts its conclusion
// set plus the stated move of the termination measures.
inline Quadruple apply_claim(const Quadruple& q, const std::string& claim) {
    using namespace quad_detail;
    q.require_shape();
    const Domain& dom = q.domain();
    int A = dom.size();

    if (claim == "add_kappa") {
        // conjunction over every index map [k] -> [|A|]; keeps any III/IV
        // properties the input had and gains (kappa)
        std::vector<QProp> held;
        for (QProp p : {QProp::DPlus, QProp::Un, QProp::Bc, QProp::Empty, QProp::BPlus, QProp::PlusC,
                        QProp::Bd})
            if (check_quadruple_property(q, p).pass) held.push_back(p);
        int k = q.alpha_len();
        std::size_t maps = unchecked_positions(A, k);
        ParamRelation r0 =
            make_param(dom, ParamSignature{A, 0, A, 2}, [&](std::size_t zi, std::size_t, std::size_t ai) {
                Tuple xs = decode_tuple(ai, A, A);
                Relation acc = Relation::full(dom, 2);
                for (std::size_t mi = 0; mi < maps; ++mi) {
                    Tuple sel = decode_tuple(mi, A, k);
                    Tuple alpha(sel.size());
                    for (std::size_t j = 0; j < sel.size(); ++j)
                        alpha[j] = xs[static_cast<std::size_t>(sel[j] - 1)];
                    acc = intersect(acc, q.r_slice(zi, encode_tuple(alpha, A)));
                }
                return acc;
            });
        Quadruple out{r0, q.d, q.b, q.c};
        held.push_back(QProp::Kappa);
        assert_props(out, held, "add_kappa");
        // the new kappa slice is exactly the old forallforall interpretation
        ParamRelation qff = q.r.q_forallforall();
        std::size_t kappa_ai = encode_tuple(dom.kappa(), A);
        for (std::size_t zi = 0; zi < out.zcount(); ++zi)
            if (out.r_slice(zi, kappa_ai) != qff.slice(zi, 0, 0))
                throw std::logic_error("add_kappa: kappa slice differs from forallforall");
        return out;
    }

    if (claim == "transitivize_iii" || claim == "transitivize_iv") {
        bool iii = claim == "transitivize_iii";
        std::vector<QProp> hyp = iii ? props_iii() : props_iv();
        hyp.push_back(QProp::Kappa);
        require_props(q, hyp, claim.c_str());
        long N = 1;
        for (int i = 2; i <= A; ++i) N *= i;
        N *= A * A;
        ParamRelation r0 =
            make_param(dom, q.r.sig(), [&](std::size_t zi, std::size_t, std::size_t ai) {
                return repeat(q.r_slice(zi, ai), N);
            });
        Quadruple out{r0, q.d, q.b, q.c};
        std::vector<QProp> concl = hyp;
        concl.push_back(QProp::T);
        assert_props(out, concl, claim.c_str());
        return out;
    }

    if (claim == "plusc_iv") {
        std::vector<QProp> hyp = props_iv();
        hyp.push_back(QProp::Kappa);
        hyp.push_back(QProp::T);
        require_props(q, hyp, "plusc_iv");
        ParamRelation c0 = unary_param(dom, q.zcount(), [&](std::size_t zi) {
            return preimage(kappa_slice(q, zi), q.cm(zi)) & q.dm(zi);
        });
        ParamRelation r0 = restrict_r(q, [&](std::size_t zi) { return q.dm(zi); });
        Quadruple out{r0, q.d, q.b, c0};
        std::vector<QProp> concl = hyp;
        concl.push_back(QProp::PlusC);
        assert_props(out, concl, "plusc_iv");
        return out;
    }

    if (claim == "add_sdr") {
        std::vector<QProp> hyp = props_iii();
        hyp.push_back(QProp::Kappa);
        hyp.push_back(QProp::T);
        require_props(q, hyp, "add_sdr");
        auto d0 = [&](std::size_t zi) {
            Mask m = 0;
            Relation rk = kappa_slice(q, zi);
            for (int x = 1; x <= A; ++x)
                if (rk.contains({x, x})) m |= Mask(1) << (x - 1);
            return m;
        };
        Quadruple out{restrict_r(q, d0), unary_param(dom, q.zcount(), d0),
                      unary_param(dom, q.zcount(), [&](std::size_t zi) { return q.bm(zi) & d0(zi); }),
                      unary_param(dom, q.zcount(), [&](std::size_t zi) { return q.cm(zi) & d0(zi); })};
        assert_props(out, props_j(), "add_sdr");
        return out;
    }

    if (claim == "reduce_bd" || claim == "reduce_cd") {
        bool bd = claim == "reduce_bd";
        require_props(q, props_j(), claim.c_str());
        require_absent(q, bd ? QProp::Bd : QProp::Cd, claim.c_str());
        ParamRelation rf = q.r.q_forall();
        auto d0 = [&](std::size_t zi) {
            Relation f = rf.slice(zi, 0, 0);
            return bd ? image(f, q.bm(zi)) : preimage(f, q.cm(zi));
        };
        Quadruple out{restrict_r(q, d0), unary_param(dom, q.zcount(), d0),
                      unary_param(dom, q.zcount(), [&](std::size_t zi) { return q.bm(zi) & d0(zi); }),
                      unary_param(dom, q.zcount(), [&](std::size_t zi) { return q.cm(zi) & d0(zi); })};
        std::vector<QProp> concl = props_j();
        concl.push_back(bd ? QProp::Bd : QProp::Cd);
        assert_props(out, concl, claim.c_str());
        if (out.sum_d() >= q.sum_d())
            throw std::logic_error(claim + ": sum |D| did not strictly decrease");
        return out;
    }

    if (claim == "reduce_cd_right") {
        require_props(q, props_j(), "reduce_cd_right");
        require_props(q, {QProp::Bd, QProp::Cd}, "reduce_cd_right");
        for (std::size_t zi = 0; zi < q.zcount(); ++zi)
            if (!(image(kappa_slice(q, zi), q.cm(zi)) & q.bm(zi)))
                throw std::invalid_argument(
                    "reduce_cd_right: (C + R^kappa) misses B at " + mighty_detail::z_witness(dom, zi));
        bool proper = false;
        for (std::size_t zi = 0; zi < q.zcount(); ++zi)
            if (image(kappa_slice(q, zi), q.cm(zi)) != q.dm(zi)) proper = true;
        if (!proper)
            throw std::invalid_argument("reduce_cd_right: C + R^kappa already covers D everywhere");
        auto d0 = [&](std::size_t zi) { return image(kappa_slice(q, zi), q.cm(zi)); };
        Quadruple out{restrict_r(q, d0), unary_param(dom, q.zcount(), d0),
                      unary_param(dom, q.zcount(), [&](std::size_t zi) { return q.bm(zi) & d0(zi); }),
                      unary_param(dom, q.zcount(), [&](std::size_t zi) { return q.cm(zi); })};
        assert_props(out, props_j(), "reduce_cd_right");
        if (out.sum_d() >= q.sum_d())
            throw std::logic_error("reduce_cd_right: sum |D| did not strictly decrease");
        return out;
    }

    if (claim == "increase_c") {
        require_props(q, props_j(), "increase_c");
        require_absent(q, QProp::CPlus, "increase_c");
        bool found = false;
        for (std::size_t zi = 0; zi < q.zcount(); ++zi)
            if (!(image(kappa_slice(q, zi), q.cm(zi)) & q.bm(zi))) found = true;
        if (!found)
            throw std::invalid_argument("increase_c: (C + R^kappa) meets B for every z");
        ParamRelation c1 = unary_param(dom, q.zcount(), [&](std::size_t zi) {
            Mask c0 = image(kappa_slice(q, zi), q.cm(zi));
            return preimage(kappa_slice(q, zi), c0);
        });
        Quadruple out{q.r, q.d, q.b, c1};
        assert_props(out, props_j(), "increase_c");
        if (out.sum_d() != q.sum_d()) throw std::logic_error("increase_c: sum |D| changed");
        if (out.sum_c() <= q.sum_c())
            throw std::logic_error("increase_c: sum |C| did not strictly increase");
        return out;
    }

    if (claim == "symmetrize_fill") {
        require_props(q, props_j(), "symmetrize_fill");
        require_props(q, {QProp::Bd, QProp::Cd}, "symmetrize_fill");
        for (std::size_t zi = 0; zi < q.zcount(); ++zi)
            if (image(kappa_slice(q, zi), q.cm(zi)) != q.dm(zi))
                throw std::invalid_argument("symmetrize_fill: C + R^kappa != D at " +
                                            mighty_detail::z_witness(dom, zi));
        ParamRelation r0 =
            make_param(dom, q.r.sig(), [&](std::size_t zi, std::size_t, std::size_t ai) {
                Relation s = q.r_slice(zi, ai);
                return intersect(s, converse(s));
            });
        Quadruple out{r0, q.d, q.b, q.c};
        std::vector<QProp> concl = props_j();
        concl.push_back(QProp::CPlus);
        concl.push_back(QProp::S);
        assert_props(out, concl, "symmetrize_fill");
        if (out.sum_d() != q.sum_d()) throw std::logic_error("symmetrize_fill: sum |D| changed");
        return out;
    }

    if (claim == "symmetrize_stab") {
        require_props(q, props_j(), "symmetrize_stab");
        require_props(q, {QProp::Bd, QProp::Cd, QProp::CPlus}, "symmetrize_stab");
        // grow B and R by the zig-zag steps until both stabilize
        std::vector<Mask> bcur(q.zcount());
        for (std::size_t zi = 0; zi < q.zcount(); ++zi) bcur[zi] = q.bm(zi);
        std::vector<std::vector<Relation>> rcur(q.zcount());
        for (std::size_t zi = 0; zi < q.zcount(); ++zi)
            for (std::size_t ai = 0; ai < q.r.acount(); ++ai) rcur[zi].push_back(q.r_slice(zi, ai));
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t zi = 0; zi < q.zcount(); ++zi) {
                Relation rk = kappa_slice(q, zi);
                Mask nb = image(rk, preimage(rk, bcur[zi]));
                if (nb != bcur[zi]) {
                    bcur[zi] = nb;
                    changed = true;
                }
                for (std::size_t ai = 0; ai < q.r.acount(); ++ai) {
                    const Relation& step = q.r_slice(zi, ai);
                    Relation nr = compose(compose_inv(rcur[zi][ai], step), step);
                    if (nr != rcur[zi][ai]) {
                        rcur[zi][ai] = nr;
                        changed = true;
                    }
                }
            }
        }
        ParamRelation r0 = make_param(dom, q.r.sig(), [&](std::size_t zi, std::size_t, std::size_t ai) {
            return rcur[zi][ai];
        });
        ParamRelation b0 = unary_param(dom, q.zcount(), [&](std::size_t zi) { return bcur[zi]; });
        Quadruple out{r0, q.d, b0, q.c};
        assert_props(out, props_ii_kappa(), "symmetrize_stab");
        return out;
    }

    throw std::invalid_argument("unknown claim '" + claim + "'");
}

struct DerivationRound {
    std::string claim;
    long sum_d = 0;
    long sum_c = 0;
};

struct DerivationResult {
    Quadruple quadruple;
    std::vector<DerivationRound> rounds;
};

// The full derivation III |- II + kappa: add kappa, transitivize, saturate
// with the reduction claims while the termination measures move, finish with
// a symmetrization. A round that moves no measure is a bug, not a loop.
inline DerivationResult derive_II_from_III(const Quadruple& input) {
    using namespace quad_detail;
    require_props(input, props_iii(), "derive_II_from_III");

    DerivationResult res{input, {}};
    auto step = [&](const std::string& claim) {
        res.quadruple = apply_claim(res.quadruple, claim);
        res.rounds.push_back({claim, res.quadruple.sum_d(), res.quadruple.sum_c()});
    };
    step("add_kappa");
    step("transitivize_iii");
    step("add_sdr");

    int A = input.domain().size();
    long bound = (static_cast<long>(A) * static_cast<long>(input.zcount()) + 2);
    bound = bound * bound + 16;
    for (long iter = 0; iter < bound; ++iter) {
        const Quadruple& q = res.quadruple;
        if (!check_quadruple_property(q, QProp::Bd).pass) {
            step("reduce_bd");
            continue;
        }
        if (!check_quadruple_property(q, QProp::Cd).pass) {
            step("reduce_cd");
            continue;
        }
        if (check_quadruple_property(q, QProp::CPlus).pass) {
            step("symmetrize_stab");
            return res;
        }
        bool misses_b = false, proper = false;
        for (std::size_t zi = 0; zi < q.zcount(); ++zi) {
            Mask img = image(kappa_slice(q, zi), q.cm(zi));
            if (!(img & q.bm(zi))) misses_b = true;
            if (img != q.dm(zi)) proper = true;
        }
        if (misses_b) {
            step("increase_c");
            continue;
        }
        if (proper) {
            step("reduce_cd_right");
            continue;
        }
        step("symmetrize_fill");
        if (check_quadruple_property(res.quadruple, QProp::Bd).pass &&
            check_quadruple_property(res.quadruple, QProp::Cd).pass) {
            assert_props(res.quadruple, props_ii_kappa(), "derive_II_from_III");
            return res;
        }
    }
    throw std::logic_error("derive_II_from_III: termination measure stalled");
}

// The five defining formulas turning a quadruple with all II+kappa
// properties into a kind-I tuple, with delta = (u, v) ranging over pairs
// joined to a common point by the forall interpretation.
inline MightyTuple tuple_I_from_quadruple(const Quadruple& q) {
    using namespace quad_detail;
    require_props(q, props_ii_kappa(), "tuple_I_from_quadruple");
    const Domain& dom = q.domain();
    int A = dom.size();
    ParamRelation rf = q.r.q_forall();
    std::size_t kappa_ai = encode_tuple(dom.kappa(), A);

    auto joined = [&](std::size_t zi, int u, int v) {
        if (!(q.bm(zi) >> (u - 1) & 1) || !(q.cm(zi) >> (v - 1) & 1)) return false;
        Relation f = rf.slice(zi, 0, 0);
        for (int x = 1; x <= A; ++x)
            if (f.contains({u, x}) && f.contains({v, x})) return true;
        return false;
    };

    ParamRelation delta1 =
        make_param(dom, ParamSignature{A, 0, 0, 2}, [&](std::size_t zi, std::size_t, std::size_t) {
            Relation out(dom, 2);
            for (int u = 1; u <= A; ++u)
                for (int v = 1; v <= A; ++v)
                    if (joined(zi, u, v)) out.add({u, v});
            return out;
        });
    auto split = [&](std::size_t di, int& u, int& v) {
        u = static_cast<int>(di / static_cast<std::size_t>(A)) + 1;
        v = static_cast<int>(di % static_cast<std::size_t>(A)) + 1;
    };
    ParamRelation d1 =
        make_param(dom, ParamSignature{A, 2, 0, 1}, [&](std::size_t zi, std::size_t di, std::size_t) {
            int u, v;
            split(di, u, v);
            Relation out(dom, 1);
            if (!joined(zi, u, v)) return out;
            Relation f = rf.slice(zi, 0, 0);
            for (int x = 1; x <= A; ++x)
                if (f.contains({u, x}) && f.contains({v, x})) out.add({x});
            return out;
        });
    ParamRelation q1 = make_param(dom, ParamSignature{A, 2, q.alpha_len(), 2},
                                  [&](std::size_t zi, std::size_t di, std::size_t ai) {
                                      Mask dm = d1.unary_slice(zi, di, 0);
                                      Relation out(dom, 2);
                                      domain_square_filtered(q.r_slice(zi, ai), dm, A, out);
                                      return out;
                                  });
    auto seeded_class = [&](bool from_u) {
        return make_param(dom, ParamSignature{A, 2, 0, 1},
                          [&](std::size_t zi, std::size_t di, std::size_t) {
                              int u, v;
                              split(di, u, v);
                              Relation out(dom, 1);
                              if (!joined(zi, u, v)) return out;
                              Relation f = rf.slice(zi, 0, 0);
                              Relation kap = q.r_slice(zi, kappa_ai);
                              for (int x = 1; x <= A; ++x) {
                                  bool in = from_u ? (kap.contains({u, x}) && f.contains({v, x}))
                                                   : (f.contains({u, x}) && kap.contains({v, x}));
                                  if (in) out.add({x});
                              }
                              return out;
                          });
    };

    MightyTuple out;
    out.kind = MightyKind::I;
    out.provenance = "built from a quadruple with the II+kappa properties";
    out.parts = {{"Q", q1},
                 {"D", d1},
                 {"B", seeded_class(true)},
                 {"C", seeded_class(false)},
                 {"Delta", delta1}};
    assert_ff_below_f(q1);
    MightyReport rep = check_mighty(out);
    if (!rep.all_pass) throw std::logic_error("tuple_I_from_quadruple: output failed the kind-I checks");
    return out;
}

// From an equivalence relation sigma on D and a cover B, C of A (both
// proper), build the kind-II tuple via the two switch relations
//   L(y1,y2,x) = (y1,y2 in D) and (sigma(y1,y2) or x in B),
//   R(y1,y2,x) = (y1,y2 in D) and (sigma(y1,y2) or x in C),
// with Q(x1,x2)(y1,y2) = exists y, L(y1,y,x1) and R(y,y2,x2) and the parts
// B', C' the sigma-classes of the least inequivalent pair. The z parameter
// is fictitious.
inline MightyTuple tuple_II_from_classification(const Relation& sigma, const Relation& d_rel,
                                                Mask b, Mask c) {
    const Domain& dom = sigma.domain();
    int A = dom.size();
    if (d_rel.arity() != 1 || d_rel.domain_size() != A)
        throw std::invalid_argument("classification: d must be unary over the same domain");
    Mask dm = unary_mask(d_rel);
    if (!is_equivalence_on(sigma, dm))
        throw std::invalid_argument("classification: sigma is not an equivalence relation on d");
    Mask full = full_mask(A);
    if ((b | c) != full) throw std::invalid_argument("classification: b and c must cover the domain");
    if (b == full || c == full)
        throw std::invalid_argument("classification: b and c must be proper subsets");

    int b0 = 0, c0 = 0;
    for (int u = 1; u <= A && !b0; ++u)
        for (int v = 1; v <= A && !b0; ++v)
            if ((dm >> (u - 1) & 1) && (dm >> (v - 1) & 1) && !sigma.contains({u, v})) {
                b0 = u;
                c0 = v;
            }
    if (!b0)
        throw std::invalid_argument("classification: no two sigma-inequivalent elements in d");

    auto switch_rel = [&](Mask free_set) {
        Relation out(dom, 3);
        for (int y1 = 1; y1 <= A; ++y1)
            for (int y2 = 1; y2 <= A; ++y2)
                for (int x = 1; x <= A; ++x) {
                    if (!(dm >> (y1 - 1) & 1) || !(dm >> (y2 - 1) & 1)) continue;
                    if (sigma.contains({y1, y2}) || (free_set >> (x - 1) & 1)) out.add({y1, y2, x});
                }
        return out;
    };
    RelLibrary lib;
    lib.dom = dom;
    lib.add("L", switch_rel(b));
    lib.add("Rr", switch_rel(c));
    lib.add("SEED_B", Relation::from_tuples(dom, 1, {{b0}}));
    lib.add("SEED_C", Relation::from_tuples(dom, 1, {{c0}}));

    QcFormula fq;
    fq.free_vars = {"x1", "x2", "y1", "y2"};
    fq.quantified = {{Quant::Exists, "y"}};
    fq.atoms = {{"L", {"y1", "y", "x1"}}, {"Rr", {"y", "y2", "x2"}}};
    Relation q_table = eval_qc_formula(fq, lib);  // coords (x1, x2, y1, y2)

    auto part_formula = [&](const std::string& seed) {
        QcFormula f;
        f.free_vars = {"y"};
        f.quantified = {{Quant::Exists, "yp"}, {Quant::Forall, "x"}};
        f.atoms = {{seed, {"yp"}}, {"L", {"y", "yp", "x"}}};
        return eval_qc_formula(f, lib);
    };
    Relation bprime = part_formula("SEED_B");
    Relation cprime = part_formula("SEED_C");

    auto constant_unary = [&](const Relation& r) {
        return make_param(dom, ParamSignature{A, 0, 0, 1},
                          [&](std::size_t, std::size_t, std::size_t) { return r; });
    };
    // z fictitious, alpha = (x1, x2): slice the 4-ary table per alpha pair
    ParamRelation qparam =
        make_param(dom, ParamSignature{A, 0, 2, 2}, [&](std::size_t, std::size_t, std::size_t ai) {
            Tuple a = decode_tuple(ai, A, 2);
            return pin_coords(q_table, {{1, a[0]}, {2, a[1]}});
        });
    MightyTuple out;
    out.kind = MightyKind::II;
    out.provenance = "classification construction (fictitious z)";
    out.parts = {{"Q", qparam},
                 {"D", constant_unary(d_rel)},
                 {"B", constant_unary(bprime)},
                 {"C", constant_unary(cprime)}};

    const ParamRelation& qp = out.part("Q");
    Relation qf = qp.q_forall().slice(0, 0, 0);
    Relation qff = qp.q_forallforall().slice(0, 0, 0);
    Relation dd(dom, 2);
    for (int x = 1; x <= A; ++x)
        for (int y = 1; y <= A; ++y)
            if ((dm >> (x - 1) & 1) && (dm >> (y - 1) & 1)) dd.add({x, y});
    if (qf != dd) throw std::logic_error("classification: Q-forall is not D x D");
    if (qff != sigma) throw std::logic_error("classification: Q-forallforall is not sigma");
    MightyReport rep = check_mighty(out);
    if (!rep.all_pass)
        throw std::logic_error("classification: output failed the kind-II checks");
    return out;
}

}  // namespace qcsp
