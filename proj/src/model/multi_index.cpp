#include "edgechain/model/multi_index.hpp"

#include "edgechain/errors.hpp"

#include <functional>
#include <numeric>

namespace edgechain {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    for (int e : entries_) {
        if (e < 0) throw DomainError("multi-index entries must be non-negative");
    }
}

MultiIndex::MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

MultiIndex MultiIndex::zero(int d) {
    if (d < 1) throw DomainError("multi-index dimension must be >= 1");
    return MultiIndex(std::vector<int>(static_cast<std::size_t>(d), 0));
}

MultiIndex MultiIndex::unit(int d, int i) {
    MultiIndex m = zero(d);
    if (i < 0 || i >= d) throw DomainError("unit index out of range");
    m.entries_[static_cast<std::size_t>(i)] = 1;
    return m;
}

std::vector<MultiIndex> MultiIndex::all_of_order(int d, int order) {
    if (d < 1 || order < 0) throw DomainError("invalid multi-index enumeration request");
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<std::size_t>(d), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == d - 1) {
            cur[static_cast<std::size_t>(pos)] = left;
            out.emplace_back(cur);
            return;
        }
        for (int v = left; v >= 0; --v) {
            cur[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, order);
    return out;
}

int MultiIndex::order() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

double MultiIndex::factorial() const {
    double f = 1.0;
    for (int e : entries_) {
        for (int k = 2; k <= e; ++k) f *= k;
    }
    return f;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
    if (dim() != other.dim()) throw DomainError("multi-index dimension mismatch");
    std::vector<int> e = entries_;
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.entries_[i];
    return MultiIndex(std::move(e));
}

}  // namespace edgechain
