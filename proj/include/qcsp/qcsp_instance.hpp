#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "qcsp/formula.hpp"
#include "qcsp/rel_io.hpp"

namespace qcsp {

struct QcspConstraint {
    std::string rel;
    std::vector<std::string> vars;
};

// A prenex sentence: quantifier prefix over named variables, matrix a
// conjunction of constraints over a named relation library.
struct QcspInstance {
    Domain dom;
    RelLibrary lib;
    std::vector<std::pair<Quant, std::string>> prefix;
    std::vector<QcspConstraint> constraints;

    int var_position(const std::string& name) const {
        for (std::size_t i = 0; i < prefix.size(); ++i)
            if (prefix[i].second == name) return static_cast<int>(i);
        return -1;
    }

    int universal_count() const {
        int n = 0;
        for (const auto& [q, v] : prefix) n += (q == Quant::Forall);
        return n;
    }

    void validate() const {
        if (lib.dom.size() != dom.size()) throw std::invalid_argument("library/instance domain mismatch");
        std::set<std::string> names;
        for (const auto& [q, v] : prefix)
            if (!names.insert(v).second) throw std::invalid_argument("duplicate variable '" + v + "'");
        for (const auto& c : constraints) {
            const Relation& r = lib.rel(c.rel);
            if (static_cast<int>(c.vars.size()) != r.arity())
                throw std::invalid_argument("constraint on '" + c.rel + "' has wrong arity");
            for (const auto& v : c.vars)
                if (!names.count(v))
                    throw std::invalid_argument("constraint variable '" + v + "' not in prefix");
        }
    }
};

// Substitution target: another variable or a constant element.
using VarOrConst = std::variant<std::string, int>;

// Rename variables and pin variables to constants. Renames must not collide
// with an existing distinct variable (capture); constants are realized by
// singleton unary relations added to the library, keeping the variable
// quantified as it was.
inline QcspInstance substitute(const QcspInstance& inst, const std::map<std::string, VarOrConst>& map) {
    inst.validate();
    QcspInstance out = inst;
    std::map<std::string, std::string> rename;
    for (const auto& [from, to] : map) {
        if (inst.var_position(from) < 0)
            throw std::invalid_argument("substitute: unknown variable '" + from + "'");
        if (const auto* tv = std::get_if<std::string>(&to)) {
            if (inst.var_position(*tv) >= 0 && *tv != from)
                throw std::invalid_argument("substitute: '" + *tv + "' would capture a quantified variable");
            rename[from] = *tv;
        }
    }
    for (auto& [q, v] : out.prefix)
        if (auto it = rename.find(v); it != rename.end()) v = it->second;
    for (auto& c : out.constraints)
        for (auto& v : c.vars)
            if (auto it = rename.find(v); it != rename.end()) v = it->second;

    for (const auto& [from, to] : map) {
        if (const auto* a = std::get_if<int>(&to)) {
            if (*a < 1 || *a > inst.dom.size())
                throw std::invalid_argument("substitute: constant out of domain");
            std::string rel_name = "const_" + std::to_string(*a);
            if (!out.lib.has(rel_name))
                out.lib.add(rel_name, Relation::from_tuples(out.dom, 1, {{*a}}));
            out.constraints.push_back({rel_name, {from}});
        }
    }
    out.validate();
    return out;
}

// .qcsp format, line oriented with '#' comments:
//   domain <k>
//   use <file.rel>            (repeatable; paths relative to the .qcsp file)
//   prefix A <var> E <var> ...
//   cons <relname> <var> ...
inline QcspInstance read_qcsp_stream(std::istream& in, const std::string& where,
                                     const std::string& base_dir) {
    QcspInstance inst;
    bool have_domain = false, have_lib = false, have_prefix = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = detail::split_tokens(line);
        if (toks.empty()) continue;
        try {
            if (toks[0] == "domain") {
                if (toks.size() != 2) throw std::invalid_argument("domain: expected size");
                inst.dom = Domain(std::stoi(toks[1]));
                have_domain = true;
            } else if (toks[0] == "use") {
                if (toks.size() != 2) throw std::invalid_argument("use: expected one path");
                std::filesystem::path p(toks[1]);
                if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
                RelLibrary sub = read_rel_file(p.string());
                if (!have_domain) throw std::invalid_argument("use before domain line");
                if (sub.dom.size() != inst.dom.size())
                    throw std::invalid_argument("used library domain size mismatch");
                if (!have_lib) {
                    inst.lib = std::move(sub);
                    have_lib = true;
                } else {
                    inst.lib.merge(sub);
                }
            } else if (toks[0] == "prefix") {
                if (have_prefix) throw std::invalid_argument("duplicate prefix line");
                if ((toks.size() - 1) % 2) throw std::invalid_argument("prefix: odd token count");
                for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
                    Quant q;
                    if (toks[i] == "A")
                        q = Quant::Forall;
                    else if (toks[i] == "E")
                        q = Quant::Exists;
                    else
                        throw std::invalid_argument("prefix: expected A or E, got '" + toks[i] + "'");
                    inst.prefix.emplace_back(q, toks[i + 1]);
                }
                have_prefix = true;
            } else if (toks[0] == "cons") {
                if (toks.size() < 2) throw std::invalid_argument("cons: missing relation name");
                QcspConstraint c;
                c.rel = toks[1];
                c.vars.assign(toks.begin() + 2, toks.end());
                inst.constraints.push_back(std::move(c));
            } else {
                throw std::invalid_argument("unknown directive '" + toks[0] + "'");
            }
        } catch (const parse_error&) {
            throw;
        } catch (const std::exception& e) {
            throw parse_error(where, lineno, e.what());
        }
    }
    if (!have_domain) throw parse_error(where, lineno, "missing domain line");
    if (!have_lib) inst.lib.dom = inst.dom;
    try {
        inst.validate();
    } catch (const std::exception& e) {
        throw parse_error(where, lineno, e.what());
    }
    return inst;
}

inline QcspInstance read_qcsp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string dir = std::filesystem::path(path).parent_path().string();
    return read_qcsp_stream(in, path, dir);
}

// Writes the instance plus a .rel library next to it. `rel_name` is the
// file name recorded in the `use` line.
inline void write_qcsp_file(const std::string& qcsp_path, const std::string& rel_name,
                            const QcspInstance& inst) {
    std::filesystem::path qp(qcsp_path);
    write_rel_file((qp.parent_path() / rel_name).string(), inst.lib);
    std::ofstream out(qcsp_path);
    if (!out) throw std::runtime_error("cannot open '" + qcsp_path + "' for writing");
    out << "domain " << inst.dom.size() << "\n";
    out << "use " << rel_name << "\n";
    out << "prefix";
    for (const auto& [q, v] : inst.prefix) out << " " << (q == Quant::Forall ? "A" : "E") << " " << v;
    out << "\n";
    for (const auto& c : inst.constraints) {
        out << "cons " << c.rel;
        for (const auto& v : c.vars) out << " " << v;
        out << "\n";
    }
}

}  // namespace qcsp
