#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace pilotshare {

/// Sentinel target for a deviation that forms a new singleton coalition.
inline constexpr int kEmptyCoalition = -1;

/// A partition of cells {0..L-1} into pilot-sharing coalitions, stored as a
/// restricted-growth string: label(cell 0) = 0 and each new label is the
/// previous maximum plus one. Two equal partitions always have identical
/// encodings, so operator== is partition equality.
class CoalitionStructure {
public:
    CoalitionStructure() = default;

    /// Canonicalizes arbitrary labels (relabels by first appearance).
    explicit CoalitionStructure(std::vector<int> labels);

    static CoalitionStructure singletons(std::size_t L);
    static CoalitionStructure grand(std::size_t L);

    std::size_t cells() const { return labels_.size(); }
    std::size_t num_blocks() const { return num_blocks_; }
    int label_of(std::size_t cell) const { return labels_[cell]; }
    const std::vector<int>& labels() const { return labels_; }

    /// Size of each block, indexed by label.
    std::vector<std::size_t> block_sizes() const;
    /// Members of the block with the given label, ascending.
    std::vector<std::size_t> block_members(int label) const;
    /// Members of the block containing `cell` (its coalition), ascending.
    std::vector<std::size_t> coalition_of(std::size_t cell) const;
    std::size_t coalition_size_of(std::size_t cell) const;

    /// Cell `cell` leaves its block and joins the block labelled `target`
    /// (kEmptyCoalition forms a new singleton). Result is canonical; the
    /// source block shrinks and disappears if emptied. Throws
    /// std::invalid_argument if `target` is the cell's own block or is not a
    /// label of this structure.
    CoalitionStructure deviate(std::size_t cell, int target) const;

    bool operator==(const CoalitionStructure& other) const = default;

private:
    std::vector<int> labels_;
    std::size_t num_blocks_ = 0;
};

/// Streams every set partition of {0..L-1} exactly once, in lexicographic
/// restricted-growth order: the grand coalition (all zeros) first, the
/// all-singletons partition last. Guarded to 1 <= L <= 12; the count is the
/// Lth Bell number.
class PartitionEnumerator {
public:
    explicit PartitionEnumerator(std::size_t L);

    /// Writes the next partition into `out`; false once exhausted.
    bool next(CoalitionStructure& out);

private:
    std::size_t cells_;
    bool done_ = false;
    bool first_ = true;
    std::vector<int> a_; // current restricted-growth string
    std::vector<int> b_; // b[i] = 1 + max(a[0..i-1])
};

/// Convenience wrapper over PartitionEnumerator.
void for_each_partition(std::size_t L,
                        const std::function<void(const CoalitionStructure&)>& fn);

std::uint64_t bell_number(std::size_t L);

} // namespace pilotshare
