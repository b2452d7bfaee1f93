#pragma once

#include <cassert>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "hctab/cells.hpp"

namespace hctab {

// Table-area allocator. Cells are handed out bump-style from fixed-size
// blocks; addresses are stable for the lifetime of the arena (table terms
// are referenced from the heap, so nothing may ever move). The only form
// of deallocation is rewinding the most recent allocation, which is what
// the copy algorithms do when a hash-consing lookup hits.
class TableArena {
public:
    static constexpr std::uint64_t kBlockCells = 64 * 1024;

    TableArena() { add_block(); }

    Addr allocate(std::uint64_t n) {
        assert(n >= 1);
        if (n > kBlockCells) throw std::length_error("table allocation exceeds block size");
        if (offset_ + n > kBlockCells) {
            // An allocation never spans blocks; the remainder is wasted.
            ++block_;
            offset_ = 0;
            if (block_ == blocks_.size()) add_block();
        }
        Addr a = Addr::table(block_ * kBlockCells + offset_);
        offset_ += n;
        total_allocated_ += n;
        alloc_sizes_.push_back(static_cast<std::uint32_t>(n));
        return a;
    }

    // Rewinds the most recent allocation. `n` must match its size exactly
    // and no allocation may have intervened.
    void deallocate(std::uint64_t n) {
        if (alloc_sizes_.empty() || alloc_sizes_.back() != n)
            throw std::logic_error("deallocate does not match the most recent allocation");
        alloc_sizes_.pop_back();
        assert(offset_ >= n);
        offset_ -= n;
        total_allocated_ -= n;
    }

    const Cell& at(Addr a) const {
        assert(a.in_table());
        std::uint64_t i = a.index();
        assert(i / kBlockCells < blocks_.size());
        return blocks_[i / kBlockCells][i % kBlockCells];
    }

    void set(Addr a, Cell c) {
        assert(a.in_table());
        std::uint64_t i = a.index();
        assert(i / kBlockCells < blocks_.size());
        blocks_[i / kBlockCells][i % kBlockCells] = c;
    }

    // Region membership, not liveness: a rewound address still answers true.
    bool in_table(Addr a) const {
        return a.in_table() && a.index() < blocks_.size() * kBlockCells;
    }

    // Live cells, net of rollbacks.
    std::uint64_t used_cells() const { return total_allocated_; }

    // Scans every cell up to the current top, wasted gaps included.
    template <typename Fn>
    void for_each_cell(Fn&& fn) const {
        for (std::uint64_t b = 0; b <= block_ && b < blocks_.size(); ++b) {
            std::uint64_t limit = b == block_ ? offset_ : kBlockCells;
            for (std::uint64_t i = 0; i < limit; ++i) fn(blocks_[b][i]);
        }
    }

private:
    void add_block() { blocks_.push_back(std::make_unique<Cell[]>(kBlockCells)); }

    std::vector<std::unique_ptr<Cell[]>> blocks_;
    std::uint64_t block_ = 0;
    std::uint64_t offset_ = 0;
    std::uint64_t total_allocated_ = 0;
    std::vector<std::uint32_t> alloc_sizes_;
};

}  // namespace hctab
