#pragma once

#include <cstdint>
#include <functional>

namespace hctab {

// One tagged storage unit. Heap and table area use the identical layout,
// so a term can point freely across the two regions.
enum class Tag : std::uint8_t {
    Ref,     // reference to a cell (unbound variables are self-references)
    Atom,    // interned symbol id, arity 0
    Int,     // immediate integer
    NumVar,  // numbered variable (canonical form of tabled terms)
    Lst,     // address of a 2-cell block [car, cdr]
    Str      // address of an (arity+1)-cell block [functor, a1..an]
};

using SymbolId = std::uint32_t;
using HashCode = std::uint64_t;

// Region-qualified cell address: the top bit selects heap vs table area,
// the rest is the cell index within that region.
struct Addr {
    static constexpr std::uint64_t kTableBit = std::uint64_t{1} << 63;

    std::uint64_t bits = 0;

    static constexpr Addr heap(std::uint64_t index) { return Addr{index}; }
    static constexpr Addr table(std::uint64_t index) { return Addr{index | kTableBit}; }

    constexpr bool in_heap() const { return (bits & kTableBit) == 0; }
    constexpr bool in_table() const { return (bits & kTableBit) != 0; }
    constexpr std::uint64_t index() const { return bits & ~kTableBit; }

    constexpr Addr operator+(std::uint64_t off) const { return Addr{bits + off}; }
    constexpr Addr operator-(std::uint64_t off) const { return Addr{bits - off}; }
    constexpr bool operator==(const Addr&) const = default;
};

// `p1` of a compound term lies in the heap or in the table area; the copy
// algorithms branch on this.
inline bool is_heap_reference(Addr a) { return a.in_heap(); }

class Cell {
public:
    constexpr Cell() : tag_(Tag::Int), raw_(0) {}

    static constexpr Cell ref(Addr a) { return Cell(Tag::Ref, a.bits); }
    static constexpr Cell atom(SymbolId s) { return Cell(Tag::Atom, s); }
    static constexpr Cell integer(std::int64_t v) {
        return Cell(Tag::Int, static_cast<std::uint64_t>(v));
    }
    static constexpr Cell numvar(std::uint32_t ordinal) { return Cell(Tag::NumVar, ordinal); }
    static constexpr Cell list(Addr block) { return Cell(Tag::Lst, block.bits); }
    static constexpr Cell structure(Addr block) { return Cell(Tag::Str, block.bits); }

    constexpr Tag tag() const { return tag_; }
    constexpr bool is_compound() const { return tag_ == Tag::Lst || tag_ == Tag::Str; }
    constexpr bool is_atomic() const { return tag_ == Tag::Atom || tag_ == Tag::Int; }

    constexpr Addr addr() const { return Addr{raw_}; }                       // Ref/Lst/Str
    constexpr SymbolId symbol() const { return static_cast<SymbolId>(raw_); }  // Atom
    constexpr std::int64_t value() const { return static_cast<std::int64_t>(raw_); }  // Int
    constexpr std::uint32_t ordinal() const { return static_cast<std::uint32_t>(raw_); }  // NumVar

    constexpr std::uint64_t raw() const { return raw_; }

    constexpr bool operator==(const Cell&) const = default;

private:
    constexpr Cell(Tag t, std::uint64_t raw) : tag_(t), raw_(raw) {}

    Tag tag_;
    std::uint64_t raw_;
};

}  // namespace hctab
