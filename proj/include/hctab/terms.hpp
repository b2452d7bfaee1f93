#pragma once

#include <cassert>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hctab/arena.hpp"
#include "hctab/cells.hpp"
#include "hctab/heap.hpp"
#include "hctab/symbols.hpp"

namespace hctab {

struct TermError : std::logic_error {
    using std::logic_error::logic_error;
};

// Owns the heap, the table area and the symbol table, and implements the
// term-level operations that have to read cells from either region.
class TermStore {
public:
    SymbolTable& symbols() { return symbols_; }
    const SymbolTable& symbols() const { return symbols_; }
    Heap& heap() { return heap_; }
    const Heap& heap() const { return heap_; }
    TableArena& table() { return table_; }
    const TableArena& table() const { return table_; }

    const Cell& at(Addr a) const { return a.in_heap() ? heap_.at(a) : table_.at(a); }

    // ---- construction (heap side) ----

    Cell make_atom(std::string_view name) { return Cell::atom(symbols_.intern(name, 0)); }
    Cell make_int(std::int64_t v) { return Cell::integer(v); }
    Cell nil() const { return Cell::atom(symbols_.nil()); }

    Cell make_var() {
        Addr a = heap_.allocate(1);
        heap_.set_raw(a, Cell::ref(a));  // unbound: self-reference
        return Cell::ref(a);
    }

    Cell make_cons(Cell car, Cell cdr) {
        Addr a = heap_.allocate(2);
        heap_.set_raw(a, car);
        heap_.set_raw(a + 1, cdr);
        return Cell::list(a);
    }

    Cell make_struct(SymbolId sym, const std::vector<Cell>& args) {
        const Symbol& s = symbols_.at(sym);
        if (s.arity == 0 || s.arity != args.size())
            throw TermError("make_struct: arity mismatch for " + s.name);
        Addr a = heap_.allocate(args.size() + 1);
        heap_.set_raw(a, Cell::atom(sym));
        for (std::size_t i = 0; i < args.size(); ++i) heap_.set_raw(a + (i + 1), args[i]);
        return Cell::structure(a);
    }

    Cell make_list(const std::vector<Cell>& elems, Cell tail) {
        Cell t = tail;
        for (auto it = elems.rbegin(); it != elems.rend(); ++it) t = make_cons(*it, t);
        return t;
    }

    // ---- basic term operations ----

    Cell deref(Cell c) const {
        while (c.tag() == Tag::Ref) {
            const Cell& target = at(c.addr());
            if (target == c) return c;  // unbound
            c = target;
        }
        return c;
    }

    bool is_unbound(Cell c) const {
        c = deref(c);
        return c.tag() == Tag::Ref;
    }

    void bind(Cell var, Cell value) {
        var = deref(var);
        if (var.tag() != Tag::Ref) throw TermError("bind: not an unbound variable");
        assert(var.addr().in_heap());
        heap_.set(var.addr(), value);
    }

    // Functor symbol of an Atom or Str cell.
    SymbolId functor(Cell c) const {
        if (c.tag() == Tag::Atom) return c.symbol();
        assert(c.tag() == Tag::Str);
        return at(c.addr()).symbol();
    }

    std::uint32_t arity(Cell c) const {
        if (c.tag() == Tag::Str) return symbols_.at(functor(c)).arity;
        if (c.tag() == Tag::Lst) return 2;
        return 0;
    }

    // Numbers each distinct unbound variable in left-to-right first-occurrence
    // order, binding it (trailed) to a NumVar cell. Returns the count.
    std::uint32_t number_vars(Cell t) {
        std::uint32_t next = 0;
        std::vector<Cell> work{t};
        while (!work.empty()) {
            Cell c = deref(work.back());
            work.pop_back();
            switch (c.tag()) {
                case Tag::Ref:
                    bind(c, Cell::numvar(next++));
                    break;
                case Tag::Lst: {
                    Addr b = c.addr();
                    work.push_back(at(b + 1));
                    work.push_back(at(b));  // car handled first
                    break;
                }
                case Tag::Str: {
                    Addr b = c.addr();
                    std::uint32_t n = arity(c);
                    for (std::uint32_t i = n; i >= 1; --i) work.push_back(at(b + i));
                    break;
                }
                default:
                    break;
            }
        }
        return next;
    }

    // Structural identity cell by cell (NumVar ordinals included). With
    // `canonical` set, two distinct table-resident compounds that are both
    // marked ground compare unequal without traversal; valid only when every
    // ground compound in the table is hash-consed and `ground_known` can
    // answer from the memoized code.
    template <typename GroundKnown>
    bool equal_terms(Cell a, Cell b, bool canonical, GroundKnown&& ground_known) const {
        std::vector<std::pair<Cell, Cell>> work{{a, b}};
        while (!work.empty()) {
            auto [x, y] = work.back();
            work.pop_back();
            x = deref(x);
            y = deref(y);
            if (x == y) continue;
            if (x.tag() != y.tag()) return false;
            switch (x.tag()) {
                case Tag::Ref:  // distinct unbound variables
                case Tag::Atom:
                case Tag::Int:
                case Tag::NumVar:
                    return false;
                case Tag::Lst: {
                    if (canonical && x.addr().in_table() && y.addr().in_table() &&
                        ground_known(x) && ground_known(y))
                        return false;  // interned: same term would be same address
                    Addr bx = x.addr(), by = y.addr();
                    work.push_back({at(bx + 1), at(by + 1)});
                    work.push_back({at(bx), at(by)});
                    break;
                }
                case Tag::Str: {
                    if (functor(x) != functor(y)) return false;
                    if (canonical && x.addr().in_table() && y.addr().in_table() &&
                        ground_known(x) && ground_known(y))
                        return false;
                    std::uint32_t n = arity(x);
                    Addr bx = x.addr(), by = y.addr();
                    for (std::uint32_t i = n; i >= 1; --i) work.push_back({at(bx + i), at(by + i)});
                    break;
                }
            }
        }
        return true;
    }

    bool equal_terms(Cell a, Cell b) const {
        return equal_terms(a, b, false, [](Cell) { return false; });
    }

    // Variant test over numbered terms: plain structural identity.
    bool variant(Cell a, Cell b) const { return equal_terms(a, b); }

    bool is_ground(Cell t) const {
        std::vector<Cell> work{t};
        while (!work.empty()) {
            Cell c = deref(work.back());
            work.pop_back();
            switch (c.tag()) {
                case Tag::Ref:
                case Tag::NumVar:
                    return false;
                case Tag::Lst:
                    work.push_back(at(c.addr() + 1));
                    work.push_back(at(c.addr()));
                    break;
                case Tag::Str: {
                    std::uint32_t n = arity(c);
                    for (std::uint32_t i = n; i >= 1; --i) work.push_back(at(c.addr() + i));
                    break;
                }
                default:
                    break;
            }
        }
        return true;
    }

    bool unify(Cell a, Cell b) {
        Heap::TrailMark m = heap_.mark();
        std::vector<std::pair<Cell, Cell>> work{{a, b}};
        while (!work.empty()) {
            auto [x, y] = work.back();
            work.pop_back();
            x = deref(x);
            y = deref(y);
            if (x == y) continue;
            if (x.tag() == Tag::Ref) {
                bind(x, y);
                continue;
            }
            if (y.tag() == Tag::Ref) {
                bind(y, x);
                continue;
            }
            if (x.tag() != y.tag()) {
                heap_.undo_to(m);
                return false;
            }
            bool ok = true;
            switch (x.tag()) {
                case Tag::Atom:
                case Tag::Int:
                case Tag::NumVar:
                    ok = false;  // unequal (x == y already handled)
                    break;
                case Tag::Lst:
                    work.push_back({at(x.addr() + 1), at(y.addr() + 1)});
                    work.push_back({at(x.addr()), at(y.addr())});
                    break;
                case Tag::Str: {
                    if (functor(x) != functor(y)) {
                        ok = false;
                        break;
                    }
                    std::uint32_t n = arity(x);
                    for (std::uint32_t i = n; i >= 1; --i)
                        work.push_back({at(x.addr() + i), at(y.addr() + i)});
                    break;
                }
                default:
                    ok = false;
                    break;
            }
            if (!ok) {
                heap_.undo_to(m);
                return false;
            }
        }
        return true;
    }

    // ---- printing ----

    static bool plain_atom(const std::string& s) {
        if (s.empty()) return false;
        if (!std::islower(static_cast<unsigned char>(s[0]))) return false;
        for (char ch : s)
            if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
        return true;
    }

    void write_term(std::ostream& os, Cell t) const {
        std::unordered_map<std::uint64_t, std::uint32_t> names;
        write_term(os, t, names);
    }

    // `var_names` assigns _0, _1, ... to unbound variables in order of
    // appearance, so output does not depend on heap addresses.
    void write_term(std::ostream& os, Cell t,
                    std::unordered_map<std::uint64_t, std::uint32_t>& var_names) const {
        t = deref(t);
        switch (t.tag()) {
            case Tag::Ref: {
                auto [it, fresh] =
                    var_names.try_emplace(t.addr().bits, static_cast<std::uint32_t>(var_names.size()));
                (void)fresh;
                os << '_' << it->second;
                break;
            }
            case Tag::NumVar:
                os << '_' << t.ordinal();
                break;
            case Tag::Int:
                os << t.value();
                break;
            case Tag::Atom:
                write_atom(os, symbols_.at(t.symbol()).name);
                break;
            case Tag::Lst: {
                os << '[';
                Cell cur = t;
                bool first = true;
                while (true) {
                    cur = deref(cur);
                    if (cur.tag() == Tag::Lst) {
                        if (!first) os << ',';
                        write_term(os, at(cur.addr()), var_names);
                        first = false;
                        cur = at(cur.addr() + 1);
                    } else if (cur.tag() == Tag::Atom && cur.symbol() == symbols_.nil()) {
                        break;
                    } else {
                        os << '|';
                        write_term(os, cur, var_names);
                        break;
                    }
                }
                os << ']';
                break;
            }
            case Tag::Str: {
                write_atom(os, symbols_.at(functor(t)).name);
                os << '(';
                std::uint32_t n = arity(t);
                for (std::uint32_t i = 1; i <= n; ++i) {
                    if (i > 1) os << ',';
                    write_term(os, at(t.addr() + i), var_names);
                }
                os << ')';
                break;
            }
        }
    }

    std::string to_string(Cell t) const {
        std::ostringstream os;
        write_term(os, t);
        return os.str();
    }

private:
    static void write_atom(std::ostream& os, const std::string& name) {
        if (plain_atom(name) || name == "[]") {
            os << name;
            return;
        }
        os << '\'';
        for (char ch : name) {
            if (ch == '\'' || ch == '\\') os << '\\';
            os << ch;
        }
        os << '\'';
    }

    SymbolTable symbols_;
    Heap heap_;
    TableArena table_;
};

}  // namespace hctab
