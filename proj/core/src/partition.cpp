#include "pilotshare/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace pilotshare {

namespace {

// Relabel by order of first appearance; returns the block count.
std::size_t canonicalize(std::vector<int>& labels) {
    std::vector<int> remap;
    for (int& lab : labels) {
        auto it = std::find(remap.begin(), remap.end(), lab);
        int canon;
        if (it == remap.end()) {
            canon = static_cast<int>(remap.size());
            remap.push_back(lab);
        } else {
            canon = static_cast<int>(it - remap.begin());
        }
        lab = canon;
    }
    return remap.size();
}

} // namespace

CoalitionStructure::CoalitionStructure(std::vector<int> labels)
    : labels_(std::move(labels)) {
    if (labels_.empty())
        throw std::invalid_argument("partition of zero cells");
    num_blocks_ = canonicalize(labels_);
}

CoalitionStructure CoalitionStructure::singletons(std::size_t L) {
    std::vector<int> labels(L);
    for (std::size_t i = 0; i < L; ++i) labels[i] = static_cast<int>(i);
    return CoalitionStructure(std::move(labels));
}

CoalitionStructure CoalitionStructure::grand(std::size_t L) {
    return CoalitionStructure(std::vector<int>(L, 0));
}

std::vector<std::size_t> CoalitionStructure::block_sizes() const {
    std::vector<std::size_t> sizes(num_blocks_, 0);
    for (int lab : labels_) ++sizes[static_cast<std::size_t>(lab)];
    return sizes;
}

std::vector<std::size_t> CoalitionStructure::block_members(int label) const {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) members.push_back(i);
    }
    return members;
}

std::vector<std::size_t> CoalitionStructure::coalition_of(std::size_t cell) const {
    return block_members(labels_[cell]);
}

std::size_t CoalitionStructure::coalition_size_of(std::size_t cell) const {
    std::size_t n = 0;
    for (int lab : labels_) {
        if (lab == labels_[cell]) ++n;
    }
    return n;
}

CoalitionStructure CoalitionStructure::deviate(std::size_t cell, int target) const {
    if (target == labels_[cell])
        throw std::invalid_argument("deviation must leave the current coalition");
    if (target != kEmptyCoalition &&
        (target < 0 || target >= static_cast<int>(num_blocks_)))
        throw std::invalid_argument("deviation target is not a coalition");
    std::vector<int> labels = labels_;
    labels[cell] =
        target == kEmptyCoalition ? static_cast<int>(num_blocks_) : target;
    return CoalitionStructure(std::move(labels));
}

PartitionEnumerator::PartitionEnumerator(std::size_t L) : cells_(L) {
    if (L < 1 || L > 12)
        throw std::invalid_argument("partition enumeration supports 1 <= L <= 12");
    a_.assign(L, 0);
    b_.assign(L, 1);
    b_[0] = 0; // unused
}

bool PartitionEnumerator::next(CoalitionStructure& out) {
    if (done_) return false;
    if (first_) {
        first_ = false;
        out = CoalitionStructure(a_);
        return true;
    }
    // Find the rightmost position (>0) that can still grow, bump it, zero the
    // tail (Knuth 7.2.1.5 H, lexicographic successor of a restricted-growth
    // string).
    std::size_t i = cells_;
    while (--i > 0) {
        if (a_[i] < b_[i]) break;
    }
    if (i == 0) {
        done_ = true;
        return false;
    }
    ++a_[i];
    for (std::size_t k = i + 1; k < cells_; ++k) {
        a_[k] = 0;
        b_[k] = std::max(b_[k - 1], a_[k - 1] + 1);
    }
    out = CoalitionStructure(a_);
    return true;
}

void for_each_partition(std::size_t L,
                        const std::function<void(const CoalitionStructure&)>& fn) {
    PartitionEnumerator en(L);
    CoalitionStructure c;
    while (en.next(c)) fn(c);
}

std::uint64_t bell_number(std::size_t L) {
    // Bell triangle; plenty for the L <= 12 enumeration guard.
    std::vector<std::uint64_t> row{1};
    for (std::size_t n = 1; n < L; ++n) {
        std::vector<std::uint64_t> next(n + 1);
        next[0] = row.back();
        for (std::size_t k = 0; k < n; ++k) next[k + 1] = next[k] + row[k];
        row = std::move(next);
    }
    return row.back();
}

} // namespace pilotshare
