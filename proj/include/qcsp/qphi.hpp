#pragma once

#include <string>
#include <vector>

#include "qcsp/detail/engine.hpp"
#include "qcsp/gamma.hpp"
#include "qcsp/qbool.hpp"
#include "qcsp/qcsp_instance.hpp"

namespace qcsp {

// The chain structure underlying the DNF reductions. Terms become chain
// segments of three parallel edges; an existential quantifier grows the
// chain with a fresh node on each side, attaching both gadget edges to the
// old left end, and commits the old right end before the universal move and
// the old left end after it. The two outermost nodes stay free.
struct ChainEdge {
    int upsilon = 0;  // 0 or 1: which of the two parameterized relations
    int xvar = 0;     // controlling variable of the source formula, 1..n
    int from = 0;     // node ids after remapping to 0..node_count-1
    int to = 0;
};

struct ChainEvent {
    bool is_x = false;
    int id = 0;  // node id for a y-event, source variable for an x-event
};

struct ChainStructure {
    int node_count = 0;
    int left_end = 0;
    int right_end = 0;
    std::vector<ChainEdge> edges;
    std::vector<ChainEvent> order;  // quantifier events, outermost first
};

inline ChainStructure build_chain(const QBoolFormula& dnf) {
    dnf.validate();
    if (dnf.mode != QBoolFormula::Mode::Dnf) throw std::invalid_argument("build_chain: formula must be DNF");
    int s = static_cast<int>(dnf.clauses.size());
    if (s < 1) throw std::invalid_argument("build_chain: need at least one term");
    int n = dnf.nvars;

    struct RawEdge {
        int upsilon, xvar, from, to;
    };
    std::vector<RawEdge> raw;
    for (int i = 1; i <= s; ++i)
        for (const auto& lit : dnf.clauses[static_cast<std::size_t>(i - 1)])
            raw.push_back({1 - lit.bit, lit.var, i - 1, i});

    // blocks built innermost-first (k = n down to 1), emitted outermost-first
    std::vector<std::vector<ChainEvent>> blocks(static_cast<std::size_t>(n) + 1);
    int l = 0, r = s;
    for (int k = n; k >= 1; --k) {
        if (dnf.prefix[static_cast<std::size_t>(k - 1)] == Quant::Forall) {
            blocks[static_cast<std::size_t>(k)] = {{true, k}};
        } else {
            blocks[static_cast<std::size_t>(k)] = {{false, r}, {true, k}, {false, l}};
            raw.push_back({0, k, l - 1, l});
            raw.push_back({1, k, r + 1, l});
            --l;
            ++r;
        }
    }

    ChainStructure out;
    int offset = -l;
    out.node_count = r - l + 1;
    out.left_end = 0;
    out.right_end = r - l;
    for (const auto& e : raw) out.edges.push_back({e.upsilon, e.xvar, e.from + offset, e.to + offset});
    for (int k = 1; k <= n; ++k)
        for (auto ev : blocks[static_cast<std::size_t>(k)]) {
            if (!ev.is_x) ev.id += offset;
            out.order.push_back(ev);
        }
    for (int i = 1; i < s; ++i) out.order.push_back({false, i + offset});  // chain internals, innermost
    return out;
}

// T^Phi(r0, r1): evaluate the two-free-variable chain formula over the given
// alpha-parameterized binary relations and take the transitive symmetric
// closure. The relations must share the alpha signature and have no z or
// delta parameters.
inline Relation q_phi_operator(const QBoolFormula& dnf, const ParamRelation& r0,
                               const ParamRelation& r1) {
    if (r0.sig().z || r0.sig().d || r1.sig().z || r1.sig().d)
        throw std::invalid_argument("q_phi_operator: relations must be alpha-parameterized only");
    if (r0.sig().v != 2 || r1.sig().v != 2)
        throw std::invalid_argument("q_phi_operator: relations must be binary-valued");
    if (r0.sig().a != r1.sig().a || r0.sig().a < 1)
        throw std::invalid_argument("q_phi_operator: alpha signatures must match and be nonempty");
    if (r0.domain_size() != r1.domain_size())
        throw std::invalid_argument("q_phi_operator: domain mismatch");

    ChainStructure chain = build_chain(dnf);
    int m = r0.sig().a;
    const Domain& dom = r0.domain();

    // engine variables: left end, right end, then the quantifier events,
    // with each x-event expanded to m universal slots
    std::vector<Quant> quants = {Quant::Exists, Quant::Exists};
    std::vector<int> node_var(static_cast<std::size_t>(chain.node_count), -1);
    std::vector<int> xvar_base(static_cast<std::size_t>(dnf.nvars) + 1, -1);
    node_var[static_cast<std::size_t>(chain.left_end)] = 0;
    node_var[static_cast<std::size_t>(chain.right_end)] = 1;
    for (const auto& ev : chain.order) {
        if (ev.is_x) {
            xvar_base[static_cast<std::size_t>(ev.id)] = static_cast<int>(quants.size());
            for (int j = 0; j < m; ++j) quants.push_back(Quant::Forall);
        } else {
            node_var[static_cast<std::size_t>(ev.id)] = static_cast<int>(quants.size());
            quants.push_back(Quant::Exists);
        }
    }

    auto base0 = std::make_shared<Relation>(r0.base());
    auto base1 = std::make_shared<Relation>(r1.base());
    std::vector<detail::GameEngine::Cons> cons;
    for (const auto& e : chain.edges) {
        detail::GameEngine::Cons c;
        c.rel = e.upsilon ? base1 : base0;
        for (int j = 0; j < m; ++j)
            c.scope.push_back(xvar_base[static_cast<std::size_t>(e.xvar)] + j);
        c.scope.push_back(node_var[static_cast<std::size_t>(e.from)]);
        c.scope.push_back(node_var[static_cast<std::size_t>(e.to)]);
        cons.push_back(std::move(c));
    }

    detail::GameEngine engine(dom, std::move(quants), std::move(cons));
    Relation sigma(dom, 2);
    for (int a = 1; a <= dom.size(); ++a)
        for (int b = 1; b <= dom.size(); ++b)
            if (engine.eval_with_prefix({a, b})) sigma.add({a, b});
    return trans_sym_closure(sigma);
}

// The 4-element encoding of the complement of a Quantified-3-CNF: the chain
// instance over {R0, R1, {+}, {-}} whose truth value is the negation of the
// input sentence. Chain ends are pinned to + (left) and - (right).
inline QcspInstance encode_q3cnf_complement(const QBoolFormula& cnf) {
    if (cnf.mode != QBoolFormula::Mode::Cnf)
        throw std::invalid_argument("encode_q3cnf_complement: input must be CNF");
    cnf.validate();
    QBoolFormula dnf = cnf.complement();
    ChainStructure chain = build_chain(dnf);

    // shared library with primed caches, so the per-instance copies reuse
    // the decoded rows and column classes
    static const RelLibrary g4 = [] {
        RelLibrary l = gamma4();
        for (auto& [name, r] : l.rels) {
            r.rows();
            r.column_classes();
        }
        return l;
    }();
    QcspInstance inst;
    inst.dom = gamma4_domain();
    inst.lib = g4;

    auto node_name = [](int id) { return "v" + std::to_string(id); };
    for (const auto& ev : chain.order) {
        if (ev.is_x)
            inst.prefix.emplace_back(Quant::Forall, "x" + std::to_string(ev.id));
        else
            inst.prefix.emplace_back(Quant::Exists, node_name(ev.id));
    }
    inst.prefix.emplace_back(Quant::Exists, node_name(chain.left_end));
    inst.prefix.emplace_back(Quant::Exists, node_name(chain.right_end));

    for (const auto& e : chain.edges)
        inst.constraints.push_back({e.upsilon ? "R1" : "R0",
                                    {node_name(e.from), node_name(e.to), "x" + std::to_string(e.xvar)}});
    inst.constraints.push_back({"PLUS", {node_name(chain.left_end)}});
    inst.constraints.push_back({"MINUS", {node_name(chain.right_end)}});
    inst.validate();
    return inst;
}

}  // namespace qcsp
