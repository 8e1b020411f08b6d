#pragma once

#include <array>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qcsp/base.hpp"
#include "qcsp/formula.hpp"

namespace qcsp {

// A quantified boolean 3-formula: prefix over variables 1..n, matrix a list
// of 3-literal clauses (CNF) or 3-literal terms (DNF). A literal (var, bit)
// is satisfied when the variable takes the bit value; a clause needs one
// satisfied literal, a term needs all three.
struct BoolLiteral {
    int var = 0;
    int bit = 0;  // 0 or 1
};

struct QBoolFormula {
    enum class Mode { Cnf, Dnf };
    Mode mode = Mode::Cnf;
    int nvars = 0;
    std::vector<Quant> prefix;                         // per variable 1..nvars
    std::vector<std::array<BoolLiteral, 3>> clauses;   // clauses or terms

    void validate() const {
        if (static_cast<int>(prefix.size()) != nvars)
            throw std::invalid_argument("prefix does not cover all variables");
        for (const auto& cl : clauses)
            for (const auto& lit : cl) {
                if (lit.var < 1 || lit.var > nvars) throw std::invalid_argument("literal variable out of range");
                if (lit.bit != 0 && lit.bit != 1) throw std::invalid_argument("literal bit must be 0 or 1");
            }
    }

    // The complement formula: flipped quantifiers, De Morgan on the matrix.
    QBoolFormula complement() const {
        QBoolFormula out = *this;
        out.mode = (mode == Mode::Cnf) ? Mode::Dnf : Mode::Cnf;
        for (auto& q : out.prefix) q = (q == Quant::Forall) ? Quant::Exists : Quant::Forall;
        for (auto& cl : out.clauses)
            for (auto& lit : cl) lit.bit ^= 1;
        return out;
    }
};

// Truth by direct recursion over the prefix; the oracle for every encoder.
inline bool qbf_truth(const QBoolFormula& f) {
    f.validate();
    std::vector<int> val(static_cast<std::size_t>(f.nvars) + 1, 0);
    auto matrix = [&]() {
        bool conj = f.mode == QBoolFormula::Mode::Cnf;
        for (const auto& cl : f.clauses) {
            bool cnf_clause = false, dnf_term = true;
            for (const auto& lit : cl) {
                bool sat = val[static_cast<std::size_t>(lit.var)] == lit.bit;
                cnf_clause = cnf_clause || sat;
                dnf_term = dnf_term && sat;
            }
            if (conj && !cnf_clause) return false;
            if (!conj && dnf_term) return true;
        }
        return conj;
    };
    auto rec = [&](auto&& self, int i) -> bool {
        if (i > f.nvars) return matrix();
        for (int b = 0; b <= 1; ++b) {
            val[static_cast<std::size_t>(i)] = b;
            bool v = self(self, i + 1);
            if (f.prefix[static_cast<std::size_t>(i - 1)] == Quant::Forall && !v) return false;
            if (f.prefix[static_cast<std::size_t>(i - 1)] == Quant::Exists && v) return true;
        }
        return f.prefix[static_cast<std::size_t>(i - 1)] == Quant::Forall;
    };
    return rec(rec, 1);
}

// QDIMACS subset: 'p cnf <v> <c>' (or the 'p dnf' extension), 'a'/'e'
// quantifier lines, then 3-literal clause lines, all 0-terminated. Every
// variable must be covered by a quantifier line.
inline QBoolFormula read_qdimacs_stream(std::istream& in, const std::string& where) {
    QBoolFormula f;
    int expected_clauses = -1;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    std::vector<int> quant_of;  // 0 unknown, 1 forall, 2 exists
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream is(line);
        std::string tok;
        if (!(is >> tok)) continue;
        if (tok == "c") continue;
        try {
            if (tok == "p") {
                std::string kind;
                int v, c;
                if (!(is >> kind >> v >> c)) throw std::invalid_argument("bad header");
                if (kind == "cnf")
                    f.mode = QBoolFormula::Mode::Cnf;
                else if (kind == "dnf")
                    f.mode = QBoolFormula::Mode::Dnf;
                else
                    throw std::invalid_argument("expected 'p cnf' or 'p dnf'");
                f.nvars = v;
                expected_clauses = c;
                quant_of.assign(static_cast<std::size_t>(v) + 1, 0);
                have_header = true;
            } else if (tok == "a" || tok == "e") {
                if (!have_header) throw std::invalid_argument("quantifier line before header");
                int v;
                while (is >> v && v != 0) {
                    if (v < 1 || v > f.nvars) throw std::invalid_argument("variable out of range");
                    if (quant_of[static_cast<std::size_t>(v)])
                        throw std::invalid_argument("variable quantified twice");
                    quant_of[static_cast<std::size_t>(v)] = (tok == "a") ? 1 : 2;
                }
            } else {
                if (!have_header) throw std::invalid_argument("clause before header");
                std::array<BoolLiteral, 3> cl;
                int lit = std::stoi(tok);
                int count = 0;
                while (lit != 0) {
                    if (count >= 3) throw std::invalid_argument("clause has more than 3 literals");
                    int var = lit > 0 ? lit : -lit;
                    cl[static_cast<std::size_t>(count++)] = BoolLiteral{var, lit > 0 ? 1 : 0};
                    if (!(is >> lit)) throw std::invalid_argument("clause not 0-terminated");
                }
                if (count != 3) throw std::invalid_argument("clause must have exactly 3 literals");
                f.clauses.push_back(cl);
            }
        } catch (const std::exception& e) {
            throw parse_error(where, lineno, e.what());
        }
    }
    if (!have_header) throw parse_error(where, lineno, "missing 'p' header");
    for (int v = 1; v <= f.nvars; ++v)
        if (!quant_of[static_cast<std::size_t>(v)])
            throw parse_error(where, lineno, "variable " + std::to_string(v) + " has no quantifier");
    for (int v = 1; v <= f.nvars; ++v)
        f.prefix.push_back(quant_of[static_cast<std::size_t>(v)] == 1 ? Quant::Forall : Quant::Exists);
    if (expected_clauses >= 0 && expected_clauses != static_cast<int>(f.clauses.size()))
        throw parse_error(where, lineno, "clause count does not match header");
    f.validate();
    return f;
}

inline QBoolFormula read_qdimacs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_qdimacs_stream(in, path);
}

// A Pi2 ONE-IN-THREE instance: forall block, exists block, positive clauses.
struct OneInThreeInstance {
    int nvars = 0;
    int universals = 0;  // variables 1..universals are forall, the rest exists
    std::vector<std::array<int, 3>> clauses;

    void validate() const {
        if (universals < 0 || universals > nvars) throw std::invalid_argument("bad universal count");
        for (const auto& c : clauses)
            for (int v : c)
                if (v < 1 || v > nvars) throw std::invalid_argument("clause variable out of range");
    }
};

// Truth over {0,1} with the usual ONE-IN-THREE relation, by enumeration.
inline bool one_in_three_truth(const OneInThreeInstance& inst) {
    inst.validate();
    std::vector<int> val(static_cast<std::size_t>(inst.nvars) + 1, 0);
    auto matrix = [&]() {
        for (const auto& c : inst.clauses) {
            int ones = val[static_cast<std::size_t>(c[0])] + val[static_cast<std::size_t>(c[1])] +
                       val[static_cast<std::size_t>(c[2])];
            if (ones != 1) return false;
        }
        return true;
    };
    auto rec = [&](auto&& self, int i) -> bool {
        if (i > inst.nvars) return matrix();
        bool is_forall = i <= inst.universals;
        for (int b = 0; b <= 1; ++b) {
            val[static_cast<std::size_t>(i)] = b;
            bool v = self(self, i + 1);
            if (is_forall && !v) return false;
            if (!is_forall && v) return true;
        }
        return is_forall;
    };
    return rec(rec, 1);
}

// Format: 'p 1in3 <v> <c>', one 'a <vars...> 0' line, one 'e <vars...> 0'
// line (blocks must be the prefix and the suffix of 1..v), clause lines
// 'i j k 0'.
inline OneInThreeInstance read_one_in_three_stream(std::istream& in, const std::string& where) {
    OneInThreeInstance inst;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    std::vector<int> a_block, e_block;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream is(line);
        std::string tok;
        if (!(is >> tok)) continue;
        if (tok == "c") continue;
        try {
            if (tok == "p") {
                std::string kind;
                int v, c;
                if (!(is >> kind >> v >> c) || kind != "1in3")
                    throw std::invalid_argument("expected 'p 1in3 <v> <c>'");
                inst.nvars = v;
                have_header = true;
            } else if (tok == "a" || tok == "e") {
                int v;
                auto& block = (tok == "a") ? a_block : e_block;
                while (is >> v && v != 0) block.push_back(v);
            } else {
                std::array<int, 3> cl{};
                cl[0] = std::stoi(tok);
                if (!(is >> cl[1] >> cl[2])) throw std::invalid_argument("clause needs 3 variables");
                int z;
                if (!(is >> z) || z != 0) throw std::invalid_argument("clause not 0-terminated");
                inst.clauses.push_back(cl);
            }
        } catch (const std::exception& e) {
            throw parse_error(where, lineno, e.what());
        }
    }
    if (!have_header) throw parse_error(where, lineno, "missing 'p 1in3' header");
    inst.universals = static_cast<int>(a_block.size());
    for (int i = 0; i < static_cast<int>(a_block.size()); ++i)
        if (a_block[static_cast<std::size_t>(i)] != i + 1)
            throw parse_error(where, lineno, "universal block must be 1..m in order");
    for (int i = 0; i < static_cast<int>(e_block.size()); ++i)
        if (e_block[static_cast<std::size_t>(i)] != inst.universals + i + 1)
            throw parse_error(where, lineno, "existential block must follow the universal block");
    if (inst.universals + static_cast<int>(e_block.size()) != inst.nvars)
        throw parse_error(where, lineno, "quantifier blocks do not cover all variables");
    inst.validate();
    return inst;
}

inline OneInThreeInstance read_one_in_three_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_one_in_three_stream(in, path);
}

}  // namespace qcsp
