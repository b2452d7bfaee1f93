#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "hctab/cells.hpp"

namespace hctab {

// Growable cell array for runtime terms, with a value trail: every
// destructive write records (address, old cell) so it can be undone on
// backtracking. Addresses are indices, so growth never invalidates terms.
class Heap {
public:
    using TrailMark = std::size_t;

    std::uint64_t top() const { return cells_.size(); }

    Addr allocate(std::uint64_t n) {
        Addr a = Addr::heap(cells_.size());
        cells_.resize(cells_.size() + n);
        return a;
    }

    const Cell& at(Addr a) const {
        assert(a.in_heap() && a.index() < cells_.size());
        return cells_[a.index()];
    }

    // Untrailed write; used while building fresh structure above any mark.
    void set_raw(Addr a, Cell c) {
        assert(a.in_heap() && a.index() < cells_.size());
        cells_[a.index()] = c;
    }

    // Trailed write; restorable via undo_to.
    void set(Addr a, Cell c) {
        assert(a.in_heap() && a.index() < cells_.size());
        trail_.push_back({a.index(), cells_[a.index()]});
        cells_[a.index()] = c;
    }

    TrailMark mark() const { return trail_.size(); }

    void undo_to(TrailMark m) {
        assert(m <= trail_.size());
        while (trail_.size() > m) {
            const Entry& e = trail_.back();
            cells_[e.index] = e.old;
            trail_.pop_back();
        }
    }

    // Undoes exactly one trailed write. The copier's list reversal relies on
    // popping its own entries in LIFO order.
    void undo_one() {
        assert(!trail_.empty());
        const Entry& e = trail_.back();
        cells_[e.index] = e.old;
        trail_.pop_back();
    }

    // Releases cells allocated above `top`. Callers undo the trail first;
    // nothing below may still reference the released range.
    void truncate(std::uint64_t new_top) {
        assert(new_top <= cells_.size());
        cells_.resize(new_top);
    }

    const std::vector<Cell>& raw_cells() const { return cells_; }

private:
    struct Entry {
        std::uint64_t index;
        Cell old;
    };

    std::vector<Cell> cells_;
    std::vector<Entry> trail_;
};

}  // namespace hctab
