#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcsp/relation.hpp"

namespace qcsp {

// A total finitary operation on A, tabulated over A^arity.
class FiniteOperation {
public:
    FiniteOperation(Domain dom, int arity, std::vector<int> table)
        : dom_(std::move(dom)), arity_(arity), table_(std::move(table)) {
        if (table_.size() != unchecked_positions(dom_.size(), arity_))
            throw std::invalid_argument("operation table has wrong size");
        for (int v : table_)
            if (v < 1 || v > dom_.size()) throw std::invalid_argument("operation value out of domain");
    }

    const Domain& domain() const { return dom_; }
    int arity() const { return arity_; }

    int apply(const Tuple& args) const {
        if (static_cast<int>(args.size()) != arity_) throw std::invalid_argument("operation arity mismatch");
        return table_[encode_tuple(args, dom_.size())];
    }

private:
    Domain dom_;
    int arity_;
    std::vector<int> table_;
};

struct PolymorphismReport {
    bool preserves = true;
    std::vector<Tuple> witness_rows;  // the n argument tuples, on failure
    Tuple witness_image;
};

// True iff applying op coordinate-wise to any op.arity() tuples of r lands
// back in r; on failure the violating tuple combination is reported.
inline PolymorphismReport check_polymorphism(const FiniteOperation& op, const Relation& r) {
    if (op.domain().size() != r.domain_size())
        throw std::invalid_argument("check_polymorphism: domain mismatch");
    PolymorphismReport rep;
    auto rows = r.tuples();
    int n = op.arity();
    std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
    if (rows.empty()) return rep;
    while (true) {
        Tuple image(static_cast<std::size_t>(r.arity()));
        Tuple args(static_cast<std::size_t>(n));
        for (int coord = 0; coord < r.arity(); ++coord) {
            for (int i = 0; i < n; ++i)
                args[static_cast<std::size_t>(i)] =
                    rows[pick[static_cast<std::size_t>(i)]][static_cast<std::size_t>(coord)];
            image[static_cast<std::size_t>(coord)] = op.apply(args);
        }
        if (!r.contains(image)) {
            rep.preserves = false;
            for (int i = 0; i < n; ++i) rep.witness_rows.push_back(rows[pick[static_cast<std::size_t>(i)]]);
            rep.witness_image = image;
            return rep;
        }
        int i = n - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] + 1 == rows.size()) {
            pick[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
    }
    return rep;
}

}  // namespace qcsp
