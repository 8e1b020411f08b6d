#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <vector>

#include "qcsp/mighty.hpp"
#include "qcsp/relation.hpp"

namespace qcsp {

// Single-step constructions from a symmetric kind-V' tuple. The full
// derivation of a kind-I tuple runs these inside an induction on the odd
// cycle length; here each case is exposed as one explicit transformation,
// capped to small domains.

namespace vprime_detail {

inline constexpr int kInfinity = std::numeric_limits<int>::max();

// Minimal odd length of a closed walk through any vertex (equivalently, the
// minimal odd cycle length), by BFS over (vertex, parity).
inline int min_odd_cycle(const Relation& r) {
    int n = r.domain_size();
    int best = kInfinity;
    for (int s = 1; s <= n; ++s) {
        std::vector<std::array<int, 2>> dist(static_cast<std::size_t>(n) + 1, {kInfinity, kInfinity});
        std::vector<std::pair<int, int>> queue = {{s, 0}};
        dist[static_cast<std::size_t>(s)][0] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            auto [v, par] = queue[head];
            int dcur = dist[static_cast<std::size_t>(v)][par];
            for (int w = 1; w <= n; ++w) {
                if (!r.contains({v, w})) continue;
                int np = par ^ 1;
                if (dist[static_cast<std::size_t>(w)][np] == kInfinity) {
                    dist[static_cast<std::size_t>(w)][np] = dcur + 1;
                    queue.emplace_back(w, np);
                }
            }
        }
        best = std::min(best, dist[static_cast<std::size_t>(s)][1]);
    }
    return best;
}

inline void require_symmetric_vprime(const MightyTuple& t, int domain_cap, const char* who) {
    if (t.kind != MightyKind::VPrime)
        throw std::invalid_argument(std::string(who) + ": input must be of kind V'");
    if (t.part("Q").domain_size() > domain_cap)
        throw capacity_error(std::string(who) + ": gated to domains of size at most " +
                             std::to_string(domain_cap));
    if (!check_mighty(t).all_pass)
        throw std::invalid_argument(std::string(who) + ": input tuple fails the V' checks");
    const ParamRelation& q = t.part("Q");
    for (std::size_t zi = 0; zi < q.zcount(); ++zi)
        for (std::size_t di = 0; di < q.dcount(); ++di)
            for (std::size_t ai = 0; ai < q.acount(); ++ai)
                if (!is_symmetric(q.slice(zi, di, ai)))
                    throw std::invalid_argument(std::string(who) + ": Q must be symmetric slice-wise");
}

inline Relation kappa_slice(const ParamRelation& q, std::size_t zi, std::size_t di) {
    return q.slice(zi, di, encode_tuple(q.domain().kappa(), q.domain_size()));
}

// The pair measure (minimal odd cycle length, |D|) with the order
// (m1,s1) <= (m2,s2) iff m1 < m2, or m1 = m2 and s1 >= s2, evaluated as
// max over z of min over delta.
struct Phi {
    int m = 0;
    int dsize = 0;
    bool operator<(const Phi& o) const { return m < o.m || (m == o.m && dsize > o.dsize); }
};

inline Phi phi_measure(const MightyTuple& t) {
    const ParamRelation& q = t.part("Q");
    const ParamRelation& delta = t.part("Delta");
    Phi best_max{0, 0};
    bool first_z = true;
    for (std::size_t zi = 0; zi < q.zcount(); ++zi) {
        Phi best_min{vprime_detail::kInfinity, 0};
        bool found = false;
        for (std::size_t di = 0; di < q.dcount(); ++di) {
            if (!mighty_detail::delta_has(delta, zi, di)) continue;
            Phi cur{min_odd_cycle(kappa_slice(q, zi, di)),
                    static_cast<int>(__builtin_popcountll(t.part("D").unary_slice(zi, di, 0)))};
            if (!found || cur < best_min) best_min = cur;
            found = true;
        }
        if (!found) continue;
        if (first_z || best_max < best_min) best_max = best_min;
        first_z = false;
    }
    return best_max;
}

}  // namespace vprime_detail

// Base case: some z sees only even cycles in the kappa slice for every
// delta. The factorial power of Q splits that slice from its closure and the
// (u,v)-indexed classes become the B/C parts of a kind-I tuple.
inline MightyTuple symmetric_vprime_even_case(const MightyTuple& t, int domain_cap = 3) {
    using namespace vprime_detail;
    require_symmetric_vprime(t, domain_cap, "symmetric_vprime_even_case");
    const ParamRelation& q = t.part("Q");
    const ParamRelation& d = t.part("D");
    const ParamRelation& delta = t.part("Delta");
    const Domain& dom = q.domain();
    int A = dom.size();
    int k = q.sig().d;

    bool found_even_z = false;
    for (std::size_t zi = 0; zi < q.zcount() && !found_even_z; ++zi) {
        bool all_even = false;
        for (std::size_t di = 0; di < q.dcount(); ++di) {
            if (!mighty_detail::delta_has(delta, zi, di)) continue;
            all_even = true;
            if (min_odd_cycle(kappa_slice(q, zi, di)) != kInfinity) {
                all_even = false;
                break;
            }
        }
        found_even_z = all_even;
    }
    if (!found_even_z)
        throw std::invalid_argument(
            "symmetric_vprime_even_case: every z has an odd kappa cycle for some delta");

    long N = 1;
    for (int i = 2; i <= A; ++i) N *= i;
    N *= A * A;
    ParamRelation q0 = make_param(dom, q.sig(), [&](std::size_t zi, std::size_t di, std::size_t ai) {
        return repeat(q.slice(zi, di, ai), N);
    });
    ParamRelation q0f = q0.q_forall();

    // delta group grows by the pair (u, v) drawn from the kappa slice
    ParamSignature dsig{A, 0, 0, k + 2};
    ParamSignature usig{A, k + 2, 0, 1};
    ParamSignature qsig{A, k + 2, A, 2};
    std::size_t kappa_ai = encode_tuple(dom.kappa(), A);

    auto split = [&](std::size_t di2, std::size_t& di, int& u, int& v) {
        v = static_cast<int>(di2 % static_cast<std::size_t>(A)) + 1;
        di2 /= static_cast<std::size_t>(A);
        u = static_cast<int>(di2 % static_cast<std::size_t>(A)) + 1;
        di = di2 / static_cast<std::size_t>(A);
    };

    ParamRelation delta1 = make_param(dom, dsig, [&](std::size_t zi, std::size_t, std::size_t) {
        Relation out(dom, k + 2);
        for (std::size_t di = 0; di < q.dcount(); ++di) {
            if (!mighty_detail::delta_has(delta, zi, di)) continue;
            Relation rk = kappa_slice(q, zi, di);
            Tuple dt = decode_tuple(di, A, k);
            for (int u = 1; u <= A; ++u)
                for (int v = 1; v <= A; ++v)
                    if (rk.contains({u, v})) {
                        Tuple full = dt;
                        full.push_back(u);
                        full.push_back(v);
                        out.add(full);
                    }
        }
        return out;
    });
    ParamRelation d1 = make_param(dom, usig, [&](std::size_t zi, std::size_t di2, std::size_t) {
        std::size_t di;
        int u, v;
        split(di2, di, u, v);
        Relation out(dom, 1);
        if (!kappa_slice(q, zi, di).contains({u, v})) return out;
        Relation f = q0f.slice(zi, di, 0);
        for (int x = 1; x <= A; ++x)
            if (f.contains({u, x})) out.add({x});
        return out;
    });
    ParamRelation q1 = make_param(dom, qsig, [&](std::size_t zi, std::size_t di2, std::size_t ai) {
        std::size_t di;
        int u, v;
        split(di2, di, u, v);
        Mask dm = d1.unary_slice(zi, di2, 0);
        Relation out(dom, 2);
        Relation src = q0.slice(zi, di, ai);
        (void)u;
        (void)v;
        for (int x = 1; x <= A; ++x)
            for (int y = 1; y <= A; ++y)
                if ((dm >> (x - 1) & 1) && (dm >> (y - 1) & 1) && src.contains({x, y})) out.add({x, y});
        return out;
    });
    auto class_part = [&](bool from_u) {
        return make_param(dom, usig, [&](std::size_t zi, std::size_t di2, std::size_t) {
            std::size_t di;
            int u, v;
            split(di2, di, u, v);
            Relation out(dom, 1);
            if (!kappa_slice(q, zi, di).contains({u, v})) return out;
            Relation k0 = q0.slice(zi, di, kappa_ai);
            int seed = from_u ? u : v;
            for (int x = 1; x <= A; ++x)
                if (k0.contains({seed, x})) out.add({x});
            return out;
        });
    };

    MightyTuple out;
    out.kind = MightyKind::I;
    out.provenance = "even-cycle case from a symmetric kind V'";
    out.parts = {{"Q", q1}, {"D", d1}, {"B", class_part(true)}, {"C", class_part(false)}, {"Delta", delta1}};
    (void)d;
    MightyReport rep = check_mighty(out);
    if (!rep.all_pass)
        throw std::logic_error("symmetric_vprime_even_case: output failed the kind-I checks");
    return out;
}

// Inductive step: the measure's odd cycle length m is finite. Restricting to
// the midpoints of the m-cycles produces a kind-V' tuple with a strictly
// larger measure.
inline MightyTuple symmetric_vprime_odd_step(const MightyTuple& t, int domain_cap = 3) {
    using namespace vprime_detail;
    require_symmetric_vprime(t, domain_cap, "symmetric_vprime_odd_step");
    const ParamRelation& q = t.part("Q");
    const ParamRelation& delta = t.part("Delta");
    const Domain& dom = q.domain();
    int A = dom.size();
    int k = q.sig().d;

    Phi phi = phi_measure(t);
    int m = phi.m;
    if (m == kInfinity)
        throw std::invalid_argument("symmetric_vprime_odd_step: no odd cycles; use the even case");
    if (m < 3) throw std::logic_error("symmetric_vprime_odd_step: odd cycle shorter than 3");

    ParamSignature dsig{A, 0, 0, k + 1};
    ParamSignature usig{A, k + 1, 0, 1};
    ParamSignature qsig{A, k + 1, A, 2};

    auto half_power = [&](std::size_t zi, std::size_t di) {
        return repeat(kappa_slice(q, zi, di), m / 2);
    };
    auto mid_domain = [&](std::size_t zi, std::size_t di, int y) {
        // elements x with paths of lengths floor(m/2) and ceil(m/2) from y
        Relation r0 = half_power(zi, di);
        Relation rk = kappa_slice(q, zi, di);
        Relation out(dom, 1);
        for (int x = 1; x <= A; ++x) {
            if (!r0.contains({y, x})) continue;
            for (int xp = 1; xp <= A; ++xp)
                if (r0.contains({y, xp}) && rk.contains({x, xp})) {
                    out.add({x});
                    break;
                }
        }
        return out;
    };

    ParamRelation delta1 = make_param(dom, dsig, [&](std::size_t zi, std::size_t, std::size_t) {
        Relation out(dom, k + 1);
        for (std::size_t di = 0; di < q.dcount(); ++di) {
            if (!mighty_detail::delta_has(delta, zi, di)) continue;
            Tuple dt = decode_tuple(di, A, k);
            for (int y = 1; y <= A; ++y)
                if (!mid_domain(zi, di, y).empty()) {
                    Tuple full = dt;
                    full.push_back(y);
                    out.add(full);
                }
        }
        return out;
    });
    ParamRelation d1 = make_param(dom, usig, [&](std::size_t zi, std::size_t di2, std::size_t) {
        std::size_t di = di2 / static_cast<std::size_t>(A);
        int y = static_cast<int>(di2 % static_cast<std::size_t>(A)) + 1;
        return mid_domain(zi, di, y);
    });
    ParamRelation q1 = make_param(dom, qsig, [&](std::size_t zi, std::size_t di2, std::size_t ai) {
        std::size_t di = di2 / static_cast<std::size_t>(A);
        Mask dm = d1.unary_slice(zi, di2, 0);
        Relation out(dom, 2);
        Relation src = q.slice(zi, di, ai);
        for (int x = 1; x <= A; ++x)
            for (int y = 1; y <= A; ++y)
                if ((dm >> (x - 1) & 1) && (dm >> (y - 1) & 1) && src.contains({x, y})) out.add({x, y});
        return out;
    });

    MightyTuple out;
    out.kind = MightyKind::VPrime;
    out.provenance = "odd-cycle step from a symmetric kind V' (m=" + std::to_string(m) + ")";
    out.parts = {{"Q", q1}, {"D", d1}, {"Delta", delta1}};
    MightyReport rep = check_mighty(out);
    if (!rep.all_pass) throw std::logic_error("symmetric_vprime_odd_step: output failed the V' checks");
    Phi grown = phi_measure(out);
    if (!(phi < grown)) throw std::logic_error("symmetric_vprime_odd_step: measure did not grow");
    return out;
}

}  // namespace qcsp
