#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "hctab/hashing.hpp"
#include "hctab/stats.hpp"
#include "hctab/terms.hpp"

namespace hctab {

inline Cell hcode_cell(HashCode c) { return Cell::integer(static_cast<std::int64_t>(c)); }
inline HashCode cell_hcode(Cell c) { return static_cast<HashCode>(c.value()); }

// The terms-table: canonicalizing storage for ground compound terms.
//
// Buckets hold a single entry directly; a second entry in the same bucket
// chains through 2-cell nodes [term, next] allocated from the arena, where
// `next` is either a Ref to another node or the final entry's term cell.
//
// Probe terms are always freshly copied blocks whose compound components are
// already interned (copying is bottom-up), so two entries are structurally
// equal exactly when their block cells are identical — entry comparison is
// O(arity) with no traversal.
class TermsTable {
public:
    TermsTable(TermStore& store, Stats& stats, bool memoized_codes,
               std::size_t initial_buckets = 256)
        : store_(store), stats_(stats), memoized_(memoized_codes) {
        buckets_.resize(initial_buckets);
    }

    // Canonicalizes a just-copied ground compound term. Returns the existing
    // copy on a hit (the caller rolls its allocation back), otherwise stores
    // and returns `t` itself.
    Cell hash_consing(Cell t, HashCode hcode) {
        assert(t.is_compound() && t.addr().in_table());
        assert(is_ground_hcode(hcode));
        Cell found;
        if (chain_lookup(t, hcode, found)) {
            ++stats_.terms_hits;
            return found;
        }
        insert(t, hcode);
        ++stats_.terms_misses;
        ++count_;
        if (count_ > buckets_.size()) expand_and_rehash();
        return t;
    }

    // Walks the bucket chain for `t`. With memoized codes the stored code is
    // compared first and the blocks only on code equality.
    bool chain_lookup(Cell t, HashCode hcode, Cell& found) const {
        for (Entry e = first_entry(bucket_of(hcode)); !e.done(); e.advance(*this)) {
            ++stats_.terms_comparisons;
            if (memoized_ && stored_hcode(e.term) != hcode) continue;
            ++stats_.terms_struct_comparisons;
            if (block_equal(t, e.term)) {
                found = e.term;
                return true;
            }
        }
        return false;
    }

    // Memoized structural hash of a table-resident compound: the cell right
    // before the term block.
    HashCode stored_hcode(Cell t) const {
        assert(memoized_ && t.is_compound() && t.addr().in_table());
        return cell_hcode(store_.table().at(t.addr() - 1));
    }

    void expand_and_rehash() {
        std::vector<std::pair<Cell, HashCode>> entries;
        entries.reserve(count_);
        for (const Slot& s : buckets_) {
            for (Entry e = first_entry(s); !e.done(); e.advance(*this)) {
                HashCode code = memoized_ ? stored_hcode(e.term)
                                          : structural_hcode(store_, e.term, &stats_);
                entries.emplace_back(e.term, code);
            }
        }
        stats_.chain_cells -= 2 * node_count_;  // old nodes become arena garbage
        node_count_ = 0;
        buckets_.assign(buckets_.size() * 2, Slot{});
        for (auto& [term, code] : entries) insert(term, code);
        ++stats_.terms_expansions;
    }

    std::size_t count() const { return count_; }
    std::size_t bucket_count() const { return buckets_.size(); }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (const Slot& s : buckets_)
            for (Entry e = first_entry(s); !e.done(); e.advance(*this)) fn(e.term);
    }

    // Full-table consistency check: every stored code must equal the
    // recomputed structural hash and every entry must sit in its bucket.
    bool audit() const {
        bool ok = true;
        std::size_t seen = 0;
        for (std::size_t i = 0; i < buckets_.size(); ++i) {
            for (Entry e = first_entry(buckets_[i]); !e.done(); e.advance(*this)) {
                ++seen;
                HashCode code = structural_hcode(store_, e.term, nullptr);
                if (memoized_ && stored_hcode(e.term) != code) ok = false;
                if (bucket_of(code) != i) ok = false;
            }
        }
        return ok && seen == count_;
    }

private:
    struct Slot {
        enum class Kind : std::uint8_t { empty, direct, node };
        Kind kind = Kind::empty;
        Cell cell;
    };

    struct Entry {
        Cell term;
        Cell next;  // Ref: chain node; compound: final entry; otherwise end
        bool last = true;

        bool done() const { return term == Cell(); }
        void next_from(const TermsTable& tt, Cell n) {
            if (n.tag() == Tag::Ref) {
                Addr a = n.addr();
                term = tt.store_.table().at(a);
                next = tt.store_.table().at(a + 1);
                last = false;
            } else if (n.is_compound()) {
                term = n;
                last = true;
            } else {
                term = Cell();
            }
        }
        void advance(const TermsTable& tt) {
            if (last) {
                term = Cell();
                return;
            }
            next_from(tt, next);
        }
    };

    Entry first_entry(const Slot& s) const {
        Entry e;
        e.term = Cell();
        if (s.kind == Slot::Kind::direct) {
            e.term = s.cell;
            e.last = true;
        } else if (s.kind == Slot::Kind::node) {
            e.next_from(*this, s.cell);
        }
        return e;
    }

    Entry first_entry(std::size_t bucket) const { return first_entry(buckets_[bucket]); }

    std::size_t bucket_of(HashCode code) const { return code & (buckets_.size() - 1); }

    bool block_equal(Cell a, Cell b) const {
        if (a.tag() != b.tag()) return false;
        if (a.tag() == Tag::Lst)
            return store_.at(a.addr()) == store_.at(b.addr()) &&
                   store_.at(a.addr() + 1) == store_.at(b.addr() + 1);
        SymbolId f = store_.functor(a);
        if (f != store_.functor(b)) return false;
        std::uint32_t n = store_.symbols().at(f).arity;
        for (std::uint32_t i = 1; i <= n; ++i)
            if (store_.at(a.addr() + i) != store_.at(b.addr() + i)) return false;
        return true;
    }

    void insert(Cell t, HashCode code) {
        Slot& s = buckets_[bucket_of(code)];
        switch (s.kind) {
            case Slot::Kind::empty:
                s.kind = Slot::Kind::direct;
                s.cell = t;
                break;
            case Slot::Kind::direct: {
                Addr node = new_node(t, s.cell);
                s.kind = Slot::Kind::node;
                s.cell = Cell::ref(node);
                break;
            }
            case Slot::Kind::node: {
                Addr node = new_node(t, s.cell);
                s.cell = Cell::ref(node);
                break;
            }
        }
    }

    Addr new_node(Cell term, Cell next) {
        Addr a = store_.table().allocate(2);
        store_.table().set(a, term);
        store_.table().set(a + 1, next);
        stats_.chain_cells += 2;
        ++node_count_;
        return a;
    }

    TermStore& store_;
    Stats& stats_;
    bool memoized_;
    std::vector<Slot> buckets_;
    std::size_t count_ = 0;
    std::size_t node_count_ = 0;
};

}  // namespace hctab
