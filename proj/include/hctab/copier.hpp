#pragma once

#include <cassert>
#include <span>
#include <utility>
#include <vector>

#include "hctab/hashcons.hpp"
#include "hctab/hashing.hpp"
#include "hctab/stats.hpp"
#include "hctab/terms.hpp"

namespace hctab {

// Term-sharing strategy for the table area, fixed per engine instance.
//   none      — every copy allocates fresh blocks.
//   hashcons  — ground compounds are canonicalized through the terms-table.
//   enhanced  — additionally each compound block carries a leading hash-code
//               cell, and table-resident sources are reused without traversal.
enum class Mode { none, hashcons, enhanced };

// Subgoal-table keying: full structural hashing, or the legacy scheme that
// keys a call on the first three elements of its first list argument.
enum class HashFlavor { full, prefix3 };

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::none: return "none";
        case Mode::hashcons: return "hashcons";
        case Mode::enhanced: return "enhanced";
    }
    return "?";
}

inline const char* to_string(HashFlavor f) {
    return f == HashFlavor::full ? "full" : "prefix3";
}

// Copies numbered terms from the heap into the table area and returns their
// structural hash codes (0 for non-ground). List spines are copied without
// recursion: the heap links are reversed in place (trailed) on the way down
// and restored one by one on the way back while codes are folded suffix
// first.
class Copier {
public:
    Copier(TermStore& store, TermsTable& terms, Mode mode, Stats& stats)
        : store_(store), terms_(terms), mode_(mode), stats_(stats) {}

    Mode mode() const { return mode_; }

    // Copies `t` (or reuses an existing copy) and stores the resulting cell
    // at `dest`, which must be a writable table cell.
    HashCode copy_term(Cell t, Addr dest) {
        auto [cell, code] = copy(t);
        store_.table().set(dest, cell);
        return code;
    }

    std::pair<Cell, HashCode> copy(Cell t) {
        t = store_.deref(t);
        ++stats_.traversal_steps;
        switch (t.tag()) {
            case Tag::Ref:
                throw TermError("copy: unbound variable (caller must number first)");
            case Tag::NumVar:
                return {t, 0};
            case Tag::Atom:
            case Tag::Int:
                return {t, atomic_hcode(store_.symbols(), t)};
            case Tag::Lst:
                return copy_list(t);
            case Tag::Str:
                return copy_struct(t);
        }
        return {t, 0};
    }

    // Copies the arguments of a numbered subgoal into dest_base..dest_base+n-1
    // and folds the per-argument codes. With `share_input` set (enhanced
    // mode), the source slot of every ground argument is redirected (trailed)
    // to its table copy so descendants and answers reuse it.
    HashCode copy_subgoal_args(std::span<const Addr> src_slots, Addr dest_base,
                               bool share_input, std::vector<HashCode>* arg_codes = nullptr) {
        HashCode sum = 1;  // fold seed; stays nonzero iff all arguments are ground
        for (std::size_t i = 0; i < src_slots.size(); ++i) {
            Cell src = store_.heap().at(src_slots[i]);
            HashCode code = copy_term(src, dest_base + i);
            if (share_input && is_ground_hcode(code)) {
                Cell copy = store_.table().at(dest_base + i);
                if (copy.is_compound()) store_.heap().set(src_slots[i], copy);
            }
            sum = seq_hcode(sum, code);
            ++stats_.hash_combines;
            if (arg_codes) arg_codes->push_back(code);
        }
        return sum;
    }

private:
    std::pair<Cell, HashCode> copy_struct(Cell t) {
        if (mode_ == Mode::enhanced && t.addr().in_table())
            return {t, terms_.stored_hcode(t)};  // reuse, tabled code, no traversal

        bool enh = mode_ == Mode::enhanced;
        std::uint32_t n = store_.arity(t);
        std::uint64_t block = n + 1 + (enh ? 1 : 0);
        Addr base = store_.table().allocate(block);
        Addr tb = enh ? base + 1 : base;
        SymbolId sym = store_.functor(t);
        store_.table().set(tb, Cell::atom(sym));
        HashCode code = symbol_hcode(store_.symbols(), sym);
        for (std::uint32_t i = 1; i <= n; ++i) {
            code = seq_hcode(code, copy_term(store_.at(t.addr() + i), tb + i));
            ++stats_.hash_combines;
        }
        if (enh) store_.table().set(base, hcode_cell(code));
        stats_.term_cells += block;
        stats_.cells_copied += block;
        return intern(Cell::structure(tb), code, block);
    }

    std::pair<Cell, HashCode> copy_list(Cell t) {
        if (mode_ == Mode::enhanced && t.addr().in_table())
            return {t, terms_.stored_hcode(t)};
        if (t.addr().in_table()) return copy_table_list(t);
        return copy_heap_list(t);
    }

    // Two-pass spine copy. Pass one reverses the heap links in place (each
    // overwrite trailed); pass two walks back toward the head, restoring the
    // current cons's link before its car is copied so shared substructure is
    // never seen in the reversed state. The trail pops leave the heap
    // bit-identical.
    std::pair<Cell, HashCode> copy_heap_list(Cell t) {
        Heap& heap = store_.heap();
        Cell rev_prev = store_.nil();  // placeholder link for the first cons
        Cell cur = t;
        Cell tail;
        std::uint64_t count = 0;
        while (true) {
            Addr b = cur.addr();
            Cell next = store_.deref(heap.at(b + 1));
            heap.set(b + 1, rev_prev);
            rev_prev = cur;
            ++count;
            bool continue_heap = next.tag() == Tag::Lst && next.addr().in_heap();
            if (!continue_heap) {
                tail = next;
                break;
            }
            cur = next;
            ++stats_.traversal_steps;
        }

        auto [cdr_cell, cdr_code] = copy(tail);
        Cell cursor = rev_prev;  // last cons
        for (std::uint64_t i = 0; i < count; ++i) {
            Addr b = cursor.addr();
            Cell toward_head = heap.at(b + 1);  // reversed link
            heap.undo_one();                    // restore original cdr first
            auto [car_cell, car_code] = copy(heap.at(b));
            auto [cons, code] = build_cons(car_cell, car_code, cdr_cell, cdr_code);
            cdr_cell = cons;
            cdr_code = code;
            cursor = toward_head;
        }
        return {cdr_cell, cdr_code};
    }

    // Table-resident spine in the non-sharing modes: read-only walk, then the
    // same suffix-first construction.
    std::pair<Cell, HashCode> copy_table_list(Cell t) {
        std::vector<Addr> spine;
        Cell cur = t;
        while (cur.tag() == Tag::Lst) {
            spine.push_back(cur.addr());
            cur = store_.deref(store_.at(cur.addr() + 1));
            ++stats_.traversal_steps;
        }
        auto [cdr_cell, cdr_code] = copy(cur);
        for (std::size_t i = spine.size(); i-- > 0;) {
            auto [car_cell, car_code] = copy(store_.at(spine[i]));
            auto [cons, code] = build_cons(car_cell, car_code, cdr_cell, cdr_code);
            cdr_cell = cons;
            cdr_code = code;
        }
        return {cdr_cell, cdr_code};
    }

    std::pair<Cell, HashCode> build_cons(Cell car, HashCode car_code, Cell cdr,
                                         HashCode cdr_code) {
        bool enh = mode_ == Mode::enhanced;
        std::uint64_t block = enh ? 3 : 2;
        Addr base = store_.table().allocate(block);
        Addr tb = enh ? base + 1 : base;
        store_.table().set(tb, car);
        store_.table().set(tb + 1, cdr);
        HashCode code = seq_hcode(car_code, cdr_code);
        ++stats_.hash_combines;
        if (enh) store_.table().set(base, hcode_cell(code));
        stats_.term_cells += block;
        stats_.cells_copied += block;
        return intern(Cell::list(tb), code, block);
    }

    std::pair<Cell, HashCode> intern(Cell t1, HashCode code, std::uint64_t block) {
        if (mode_ != Mode::none && is_ground_hcode(code)) {
            ++stats_.hashcons_calls;
            Cell t2 = terms_.hash_consing(t1, code);
            if (!(t2 == t1)) {
                store_.table().deallocate(block);
                stats_.term_cells -= block;
                return {t2, code};
            }
        }
        return {t1, code};
    }

    TermStore& store_;
    TermsTable& terms_;
    Mode mode_;
    Stats& stats_;
};

}  // namespace hctab
