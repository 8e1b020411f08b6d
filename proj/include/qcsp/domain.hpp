#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsp/base.hpp"

namespace qcsp {

// A finite domain A = {1, ..., size}. Labels, when present, are display
// names for the elements; all arithmetic is done on the 1-based indices.
// Label storage is shared so that copying domains (and the relations that
// carry them) stays cheap.
class Domain {
public:
    Domain() : size_(1) {}
    explicit Domain(int size) : size_(size) {
        if (size < 1) throw std::invalid_argument("domain size must be >= 1");
    }
    Domain(int size, std::vector<std::string> labels) : size_(size) {
        if (size < 1) throw std::invalid_argument("domain size must be >= 1");
        if (!labels.empty()) {
            if (static_cast<int>(labels.size()) != size)
                throw std::invalid_argument("label count does not match domain size");
            std::set<std::string> seen(labels.begin(), labels.end());
            if (static_cast<int>(seen.size()) != size)
                throw std::invalid_argument("domain labels must be distinct");
            labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
        }
    }

    int size() const { return size_; }
    bool has_labels() const { return labels_ != nullptr; }
    const std::vector<std::string>& labels() const {
        static const std::vector<std::string> none;
        return labels_ ? *labels_ : none;
    }

    std::string format(int element) const {
        if (element < 1 || element > size_) throw std::invalid_argument("element out of range");
        if (has_labels()) return (*labels_)[static_cast<std::size_t>(element - 1)];
        return std::to_string(element);
    }

    // Tokens that match a label resolve as that label; otherwise they must be
    // a 1-based integer index.
    int parse(const std::string& token) const {
        const auto& ls = labels();
        for (std::size_t i = 0; i < ls.size(); ++i)
            if (ls[i] == token) return static_cast<int>(i) + 1;
        for (char c : token)
            if (c < '0' || c > '9') throw std::invalid_argument("unknown domain element '" + token + "'");
        int v = std::atoi(token.c_str());
        if (v < 1 || v > size_) throw std::invalid_argument("domain element out of range: '" + token + "'");
        return v;
    }

    // The tuple (1, 2, ..., |A|) listing every element once.
    Tuple kappa() const {
        Tuple t(static_cast<std::size_t>(size_));
        for (int i = 0; i < size_; ++i) t[static_cast<std::size_t>(i)] = i + 1;
        return t;
    }

    std::string format_tuple(const Tuple& t) const {
        std::string s = "(";
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i) s += ",";
            s += format(t[i]);
        }
        return s + ")";
    }

    bool operator==(const Domain& o) const { return size_ == o.size_ && labels() == o.labels(); }
    bool operator!=(const Domain& o) const { return !(*this == o); }

private:
    int size_;
    std::shared_ptr<const std::vector<std::string>> labels_;
};

}  // namespace qcsp
