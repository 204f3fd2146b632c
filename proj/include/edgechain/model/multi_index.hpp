#pragma once

#include <initializer_list>
#include <vector>

namespace edgechain {

/// Non-negative integer multi-index ν of length d.
class MultiIndex {
  public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);
    MultiIndex(std::initializer_list<int> entries);

    /// Zero index of dimension d.
    static MultiIndex zero(int d);
    /// Unit index e_i of dimension d.
    static MultiIndex unit(int d, int i);
    /// All indices of dimension d with |ν| = order, in lexicographic order (descending first entry).
    static std::vector<MultiIndex> all_of_order(int d, int order);

    int dim() const { return static_cast<int>(entries_.size()); }
    int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& entries() const { return entries_; }

    int order() const;
    double factorial() const;

    MultiIndex operator+(const MultiIndex& other) const;
    bool operator==(const MultiIndex& other) const = default;

  private:
    std::vector<int> entries_;
};

}  // namespace edgechain
