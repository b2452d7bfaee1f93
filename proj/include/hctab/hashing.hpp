#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "hctab/cells.hpp"
#include "hctab/stats.hpp"
#include "hctab/symbols.hpp"
#include "hctab/terms.hpp"

namespace hctab {

// Hash-code conventions: a code of 0 always and only means "non-ground".
// All arithmetic is unsigned wraparound; a ground combination that lands on
// 0 is remapped to 1 so the sentinel stays unambiguous.

inline bool is_ground_hcode(HashCode c) { return c != 0; }

inline HashCode nonzero(HashCode c) { return c == 0 ? 1 : c; }

// Combiner for hash-consed terms: absorbs the non-ground sentinel.
inline HashCode seq_hcode(HashCode code1, HashCode code2) {
    if (code1 == 0) return 0;
    if (code2 == 0) return 0;
    return nonzero(code1 + 31 * code2 + 1);
}

// Combiner for subgoal/answer table keys: must stay usable for non-ground
// terms, so it does not absorb zero.
inline HashCode table_key_hcode(HashCode code1, HashCode code2) {
    return code1 * 33 + code2 + 1;
}

inline HashCode hash_bytes(std::string_view s) {
    HashCode h = 5381;
    for (unsigned char ch : s) h = h * 131 + ch;
    return h;
}

inline HashCode mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Hash of a functor symbol, by (name, arity) rather than by id, so codes do
// not depend on interning order.
inline HashCode symbol_hcode(const SymbolTable& syms, SymbolId id) {
    const Symbol& s = syms.at(id);
    return nonzero(hash_bytes(s.name) * 131 + s.arity);
}

inline HashCode atomic_hcode(const SymbolTable& syms, Cell t) {
    if (t.tag() == Tag::Int) return nonzero(mix64(static_cast<std::uint64_t>(t.value())));
    assert(t.tag() == Tag::Atom);
    return symbol_hcode(syms, t.symbol());
}

// Structural hash of a term, computed by pure traversal (no copying):
//   code([H|T])        = seq_hcode(code(H), code(T))
//   code(f(a1,...,an)) = fold of seq_hcode over arg codes, seeded with f/n
//   code(atomic)       = atomic_hcode; variables give 0.
// The list spine is folded iteratively, suffix first, so long lists do not
// recurse.
inline HashCode structural_hcode(const TermStore& store, Cell t, Stats* stats = nullptr) {
    t = store.deref(t);
    if (stats) ++stats->traversal_steps;
    switch (t.tag()) {
        case Tag::Ref:
        case Tag::NumVar:
            return 0;
        case Tag::Atom:
        case Tag::Int:
            return atomic_hcode(store.symbols(), t);
        case Tag::Lst: {
            std::vector<HashCode> car_codes;
            Cell cur = t;
            while (store.deref(cur).tag() == Tag::Lst) {
                cur = store.deref(cur);
                if (stats && !car_codes.empty()) ++stats->traversal_steps;
                car_codes.push_back(structural_hcode(store, store.at(cur.addr()), stats));
                cur = store.at(cur.addr() + 1);
            }
            HashCode code = structural_hcode(store, cur, stats);  // tail
            for (auto it = car_codes.rbegin(); it != car_codes.rend(); ++it) {
                code = seq_hcode(*it, code);
                if (stats) ++stats->hash_combines;
            }
            return code;
        }
        case Tag::Str: {
            HashCode code = symbol_hcode(store.symbols(), store.functor(t));
            std::uint32_t n = store.arity(t);
            for (std::uint32_t i = 1; i <= n; ++i) {
                code = seq_hcode(code, structural_hcode(store, store.at(t.addr() + i), stats));
                if (stats) ++stats->hash_combines;
            }
            return code;
        }
    }
    return 0;
}

// Legacy list hash: combines at most the first three elements, so all lists
// sharing a three-element prefix collide. Non-list input falls back to the
// full structural hash.
inline HashCode prefix3_hcode(const TermStore& store, Cell t, Stats* stats = nullptr) {
    Cell cur = store.deref(t);
    bool is_nil = cur.tag() == Tag::Atom && cur.symbol() == store.symbols().nil();
    if (cur.tag() != Tag::Lst && !is_nil) return structural_hcode(store, cur, stats);
    HashCode code = 1;
    int taken = 0;
    while (taken < 3 && cur.tag() == Tag::Lst) {
        HashCode elem = structural_hcode(store, store.at(cur.addr()), stats);
        code = table_key_hcode(code, elem);
        if (stats) ++stats->hash_combines;
        ++taken;
        cur = store.deref(store.at(cur.addr() + 1));
    }
    return code;
}

}  // namespace hctab
