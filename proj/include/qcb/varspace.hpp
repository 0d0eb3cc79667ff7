#pragma once

#include "qcb/error.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace qcb {

/// Ordered list of variable names split into equivariant parameters
/// a1..ar, flavour parameters m1..mf, the loop-rotation class h, and
/// auxiliary cohomology generators (e.g. "x").  The declared order is
/// the monomial order used everywhere.
class VariableSpace {
public:
    VariableSpace(int equiv, int flavour, std::vector<std::string> aux = {})
        : equiv_(equiv), flavour_(flavour) {
        if (equiv < 0 || flavour < 0) throw InputError("negative variable count");
        for (int i = 1; i <= equiv; ++i) names_.push_back("a" + std::to_string(i));
        for (int j = 1; j <= flavour; ++j) names_.push_back("m" + std::to_string(j));
        names_.push_back("h");
        for (auto& n : aux) names_.push_back(n);
        std::set<std::string> seen(names_.begin(), names_.end());
        if (seen.size() != names_.size())
            throw InputError("variable names must be distinct");
    }

    std::size_t var_count() const { return names_.size(); }
    int equiv_count() const { return equiv_; }
    int flavour_count() const { return flavour_; }
    std::size_t aux_count() const { return names_.size() - equiv_ - flavour_ - 1; }

    std::size_t equiv_index(int i) const { return static_cast<std::size_t>(i); }
    std::size_t flavour_index(int j) const { return equiv_ + static_cast<std::size_t>(j); }
    std::size_t hbar_index() const { return equiv_ + flavour_; }
    std::size_t aux_index(int k) const { return hbar_index() + 1 + k; }

    const std::string& name(std::size_t i) const { return names_[i]; }

    /// Index of a variable by name, or -1.
    int find(const std::string& n) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == n) return static_cast<int>(i);
        return -1;
    }

    bool operator==(const VariableSpace& o) const { return names_ == o.names_; }
    bool operator!=(const VariableSpace& o) const { return !(*this == o); }

private:
    int equiv_;
    int flavour_;
    std::vector<std::string> names_;
};

using Space = std::shared_ptr<const VariableSpace>;

inline Space make_space(int equiv, int flavour = 0, std::vector<std::string> aux = {}) {
    return std::make_shared<const VariableSpace>(equiv, flavour, std::move(aux));
}

inline void check_same_space(const Space& a, const Space& b) {
    if (a == b) return;
    if (!a || !b || *a != *b) throw InputError("variable-space mismatch");
}

} // namespace qcb
