#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcsp/param_relation.hpp"
#include "qcsp/relation.hpp"

namespace qcsp {

// A named set of relations over one domain, as read from a .rel file.
struct RelLibrary {
    Domain dom;
    std::map<std::string, Relation> rels;
    std::map<std::string, ParamRelation> params;

    bool has(const std::string& name) const { return rels.count(name) || params.count(name); }

    const Relation& rel(const std::string& name) const {
        auto it = rels.find(name);
        if (it == rels.end()) throw std::invalid_argument("unknown relation '" + name + "'");
        return it->second;
    }

    void add(const std::string& name, Relation r) {
        if (has(name)) throw std::invalid_argument("duplicate relation '" + name + "'");
        rels.emplace(name, std::move(r));
    }
    void add(const std::string& name, ParamRelation p) {
        if (has(name)) throw std::invalid_argument("duplicate relation '" + name + "'");
        params.emplace(name, std::move(p));
    }

    void merge(const RelLibrary& other) {
        if (dom.size() != other.dom.size())
            throw std::invalid_argument("library domain size mismatch");
        for (const auto& [n, r] : other.rels) add(n, r);
        for (const auto& [n, p] : other.params) add(n, p);
    }
};

namespace detail {
inline std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        if (tok[0] == '#') break;
        out.push_back(tok);
    }
    return out;
}
}  // namespace detail

// Line-oriented relation file format:
//
//   domain <k> [<label1> ... <labelk>]
//   relation <name> <arity>
//   [param z <zlen> delta <k> alpha <m> value <t>]
//   <t1> <t2> ... <t_arity>        one tuple per line, labels or 1-based ints
//   end
//
// '#' starts a comment. A file holds one domain and any number of relations.
inline RelLibrary read_rel_stream(std::istream& in, const std::string& where) {
    RelLibrary lib;
    bool have_domain = false;
    std::string line;
    int lineno = 0;

    std::optional<std::string> cur_name;
    int cur_arity = 0;
    std::optional<ParamSignature> cur_sig;
    std::vector<Tuple> cur_tuples;
    bool expecting_param_line = false;

    auto flush = [&]() {
        if (!cur_name) return;
        Relation r = Relation::from_tuples(lib.dom, cur_arity, cur_tuples);
        if (cur_sig)
            lib.add(*cur_name, ParamRelation(std::move(r), *cur_sig));
        else
            lib.add(*cur_name, std::move(r));
        cur_name.reset();
        cur_sig.reset();
        cur_tuples.clear();
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto toks = detail::split_tokens(line);
        if (toks.empty()) continue;
        try {
            if (toks[0] == "domain") {
                if (have_domain) throw std::invalid_argument("duplicate domain line");
                if (toks.size() < 2) throw std::invalid_argument("domain: missing size");
                int k = std::stoi(toks[1]);
                std::vector<std::string> labels(toks.begin() + 2, toks.end());
                lib.dom = labels.empty() ? Domain(k) : Domain(k, labels);
                have_domain = true;
            } else if (toks[0] == "relation") {
                if (!have_domain) throw std::invalid_argument("relation before domain line");
                flush();
                if (toks.size() != 3) throw std::invalid_argument("relation: expected name and arity");
                cur_name = toks[1];
                cur_arity = std::stoi(toks[2]);
                expecting_param_line = true;
            } else if (toks[0] == "param") {
                if (!cur_name || !expecting_param_line)
                    throw std::invalid_argument("param line must follow a relation line");
                if (toks.size() != 9 || toks[1] != "z" || toks[3] != "delta" || toks[5] != "alpha" ||
                    toks[7] != "value")
                    throw std::invalid_argument("param: expected 'param z <n> delta <n> alpha <n> value <n>'");
                cur_sig = ParamSignature{std::stoi(toks[2]), std::stoi(toks[4]), std::stoi(toks[6]),
                                         std::stoi(toks[8])};
                if (cur_sig->arity() != cur_arity)
                    throw std::invalid_argument("param groups do not sum to relation arity");
                expecting_param_line = false;
            } else if (toks[0] == "end") {
                if (!cur_name) throw std::invalid_argument("end without relation");
                flush();
            } else if (toks[0] == "lambda") {
                // membership of the empty tuple in an arity-0 relation
                if (!cur_name || cur_arity != 0)
                    throw std::invalid_argument("lambda is only valid in an arity-0 relation");
                expecting_param_line = false;
                cur_tuples.push_back(Tuple{});
            } else {
                if (!cur_name) throw std::invalid_argument("tuple line outside a relation block");
                expecting_param_line = false;
                if (static_cast<int>(toks.size()) != cur_arity)
                    throw std::invalid_argument("tuple has wrong number of entries");
                Tuple t;
                for (const auto& tok : toks) t.push_back(lib.dom.parse(tok));
                cur_tuples.push_back(std::move(t));
            }
        } catch (const std::exception& e) {
            throw parse_error(where, lineno, e.what());
        }
    }
    flush();
    if (!have_domain) throw parse_error(where, lineno, "missing domain line");
    return lib;
}

inline RelLibrary read_rel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_rel_stream(in, path);
}

inline void write_relation(std::ostream& out, const Domain& dom, const std::string& name,
                           const Relation& r, const ParamSignature* sig = nullptr) {
    out << "relation " << name << " " << r.arity() << "\n";
    if (sig)
        out << "param z " << sig->z << " delta " << sig->d << " alpha " << sig->a << " value "
            << sig->v << "\n";
    for (const auto& t : r.tuples()) {
        if (t.empty()) {
            out << "lambda\n";
            continue;
        }
        for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << dom.format(t[i]);
        out << "\n";
    }
    out << "end\n";
}

inline void write_rel_library(std::ostream& out, const RelLibrary& lib) {
    out << "domain " << lib.dom.size();
    for (const auto& l : lib.dom.labels()) out << " " << l;
    out << "\n";
    for (const auto& [name, r] : lib.rels) write_relation(out, lib.dom, name, r);
    for (const auto& [name, p] : lib.params) {
        ParamSignature sig = p.sig();
        write_relation(out, lib.dom, name, p.base(), &sig);
    }
}

inline void write_rel_file(const std::string& path, const RelLibrary& lib) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_rel_library(out, lib);
}

}  // namespace qcsp
