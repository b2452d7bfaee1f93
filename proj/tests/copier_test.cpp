#include "doctest.h"

#include <set>
#include <string>

#include "hctab/copier.hpp"
#include "test_util.hpp"

using namespace hctab;
using namespace hctab::test;

namespace {

struct Fixture {
    TermStore ts;
    Stats stats;
    TermsTable terms;
    Copier copier;

    explicit Fixture(Mode mode)
        : terms(ts, stats, mode == Mode::enhanced), copier(ts, terms, mode, stats) {}

    Cell copy(Cell t) { return copier.copy(t).first; }
};

}  // namespace

TEST_CASE("numbered variables copy verbatim with code 0") {
    Fixture f(Mode::enhanced);
    Cell l = f.ts.make_cons(f.ts.make_var(), f.ts.nil());
    f.ts.number_vars(l);
    auto [copy, code] = f.copier.copy(l);
    CHECK(code == 0);
    CHECK(copy.addr().in_table());
    CHECK(f.ts.to_string(copy) == "[_0]");
    CHECK(f.ts.at(copy.addr()) == Cell::numvar(0));
}

TEST_CASE("unbound variables are a copy error") {
    Fixture f(Mode::enhanced);
    Cell l = f.ts.make_cons(f.ts.make_var(), f.ts.nil());
    CHECK_THROWS_AS(f.copier.copy(l), TermError);
}

TEST_CASE("cell accounting per mode for duplicate copies of [1,2]") {
    SUBCASE("none: fresh blocks every time") {
        Fixture f(Mode::none);
        f.copy(int_list(f.ts, {1, 2}));
        CHECK(f.stats.term_cells == 4);
        f.copy(int_list(f.ts, {1, 2}));
        CHECK(f.stats.term_cells == 8);
    }
    SUBCASE("hashcons: one copy, duplicates roll back") {
        Fixture f(Mode::hashcons);
        Cell c1 = f.copy(int_list(f.ts, {1, 2}));
        CHECK(f.stats.term_cells == 4);
        Cell c2 = f.copy(int_list(f.ts, {1, 2}));
        CHECK(f.stats.term_cells == 4);
        CHECK(c1 == c2);
        Cell suffix = f.copy(int_list(f.ts, {2}));
        CHECK(f.stats.term_cells == 4);  // [2] is the stored cdr block
        CHECK(suffix == f.ts.at(c1.addr() + 1));
    }
    SUBCASE("enhanced: one hash cell per cons") {
        Fixture f(Mode::enhanced);
        Cell c1 = f.copy(int_list(f.ts, {1, 2}));
        CHECK(f.stats.term_cells == 6);
        Cell c2 = f.copy(int_list(f.ts, {1, 2}));
        CHECK(c1 == c2);
        CHECK(f.stats.term_cells == 6);
    }
}

TEST_CASE("enhanced mode reuses table-resident terms in O(1)") {
    Fixture f(Mode::enhanced);
    Cell c1 = f.copy(int_list(f.ts, {1, 2, 3}));
    std::uint64_t steps = f.stats.traversal_steps;
    auto [c2, code] = f.copier.copy(c1);
    CHECK(c2 == c1);
    CHECK(f.stats.traversal_steps - steps == 1);
    CHECK(code == structural_hcode(f.ts, c1));
}

TEST_CASE("copied form equals source form in every mode") {
    for (Mode mode : {Mode::none, Mode::hashcons, Mode::enhanced}) {
        Fixture f(mode);
        Rng rng(17);
        for (int i = 0; i < 200; ++i) {
            std::vector<Cell> vars;
            Cell t = random_term(f.ts, rng, 3, &vars);
            f.ts.number_vars(t);
            auto [copy, code] = f.copier.copy(t);
            CHECK(f.ts.to_string(copy) == f.ts.to_string(t));
            CHECK(code == ref_hash(f.ts, t));
        }
    }
}

TEST_CASE("iterative list copy: long lists, bit-identical heap") {
    Fixture f(Mode::enhanced);
    Cell l = repeated_list(f.ts, 50000, 9);
    auto before = f.ts.heap().raw_cells();
    auto [copy, code] = f.copier.copy(l);
    CHECK(f.ts.heap().raw_cells() == before);
    CHECK(code == structural_hcode(f.ts, copy));
    CHECK(copy.addr().in_table());
}

namespace {

// Reference copier: direct recursion, canonicalizing through the same
// terms-table. Used as an oracle for the iterative spine copy.
std::pair<Cell, HashCode> recursive_copy(TermStore& ts, TermsTable& terms, Cell t) {
    t = ts.deref(t);
    switch (t.tag()) {
        case Tag::NumVar:
            return {t, 0};
        case Tag::Atom:
        case Tag::Int:
            return {t, atomic_hcode(ts.symbols(), t)};
        case Tag::Lst: {
            auto [car, car_code] = recursive_copy(ts, terms, ts.at(t.addr()));
            auto [cdr, cdr_code] = recursive_copy(ts, terms, ts.at(t.addr() + 1));
            Addr b = ts.table().allocate(2);
            ts.table().set(b, car);
            ts.table().set(b + 1, cdr);
            HashCode code = seq_hcode(car_code, cdr_code);
            Cell t1 = Cell::list(b);
            if (is_ground_hcode(code)) {
                Cell t2 = terms.hash_consing(t1, code);
                if (!(t2 == t1)) {
                    ts.table().deallocate(2);
                    t1 = t2;
                }
            }
            return {t1, code};
        }
        default:
            FAIL("unexpected tag in reference copier");
            return {t, 0};
    }
}

}  // namespace

TEST_CASE("iterative copy agrees with a recursive reference copier") {
    Fixture f(Mode::hashcons);
    Rng rng(41);
    for (int len = 0; len <= 100; len += 7) {
        std::vector<Cell> elems;
        for (int i = 0; i < len; ++i)
            elems.push_back(f.ts.make_int(static_cast<std::int64_t>(rng.below(50))));
        Cell list = f.ts.make_list(elems, f.ts.nil());
        auto [iter_cell, iter_code] = f.copier.copy(list);
        auto [rec_cell, rec_code] = recursive_copy(f.ts, f.terms, list);
        if (list.tag() == Tag::Lst) {
            CHECK(iter_cell == rec_cell);  // canonical: both land on one address
        }
        CHECK(iter_code == rec_code);
    }
}

TEST_CASE("list copy handles shared substructure") {
    Fixture f(Mode::hashcons);
    // t = [S|S] where S = [2,3]: the car is the list's own tail
    Cell s = int_list(f.ts, {2, 3});
    Cell t = f.ts.make_cons(s, s);
    auto before = f.ts.heap().raw_cells();
    auto [copy, code] = f.copier.copy(t);
    CHECK(f.ts.heap().raw_cells() == before);
    CHECK(f.ts.to_string(copy) == "[[2,3],2,3]");
    CHECK(code == ref_hash(f.ts, t));
}

TEST_CASE("improper lists copy by the same cons rules") {
    for (Mode mode : {Mode::none, Mode::hashcons, Mode::enhanced}) {
        Fixture f(mode);
        Cell t = f.ts.make_cons(f.ts.make_int(1), f.ts.make_atom("foo"));
        auto [copy, code] = f.copier.copy(t);
        CHECK(f.ts.to_string(copy) == "[1|foo]");
        CHECK(is_ground_hcode(code));
    }
}

TEST_CASE("copy through REF chains in cdr positions restores raw cells") {
    Fixture f(Mode::enhanced);
    Cell tail_var = f.ts.make_var();
    Cell l = f.ts.make_cons(f.ts.make_int(1), tail_var);
    CHECK(f.ts.unify(tail_var, int_list(f.ts, {2})));
    auto before = f.ts.heap().raw_cells();
    auto [copy, code] = f.copier.copy(l);
    CHECK(f.ts.heap().raw_cells() == before);  // REF in the cdr slot preserved
    CHECK(f.ts.to_string(copy) == "[1,2]");
    CHECK(is_ground_hcode(code));
}

TEST_CASE("copy_subgoal_args with input sharing redirects ground slots") {
    Fixture f(Mode::enhanced);
    SymbolId p1 = f.ts.symbols().intern("is_list", 1);
    Cell goal = f.ts.make_struct(p1, {int_list(f.ts, {1, 2, 3})});
    Cell original = f.ts.at(goal.addr() + 1);
    Cell control = int_list(f.ts, {1, 2, 3});

    Addr dest = f.ts.table().allocate(1);
    std::vector<Addr> slots{goal.addr() + 1};
    HashCode sum = f.copier.copy_subgoal_args(slots, dest, true);
    CHECK(is_ground_hcode(sum));

    Cell slot_now = f.ts.heap().at(goal.addr() + 1);
    CHECK(slot_now.is_compound());
    CHECK_FALSE(is_heap_reference(slot_now.addr()));          // redirected into the table
    CHECK(f.ts.equal_terms(slot_now, control));               // still the same term
    CHECK(original != slot_now);

    // redirection is trailed: undoing restores the heap argument
    f.ts.heap().undo_to(0);
    CHECK(f.ts.heap().at(goal.addr() + 1) == original);
}

TEST_CASE("non-ground arguments are not redirected but ground suffixes intern") {
    Fixture f(Mode::enhanced);
    SymbolId p1 = f.ts.symbols().intern("is_list", 1);
    Cell x = f.ts.make_var();
    Cell list = f.ts.make_cons(x, int_list(f.ts, {2, 3}));
    Cell goal = f.ts.make_struct(p1, {list});
    f.ts.number_vars(goal);
    Cell before = f.ts.heap().at(goal.addr() + 1);

    Addr dest = f.ts.table().allocate(1);
    std::vector<Addr> slots{goal.addr() + 1};
    HashCode sum = f.copier.copy_subgoal_args(slots, dest, true);
    CHECK(sum == 0);  // non-ground argument
    CHECK(f.ts.heap().at(goal.addr() + 1) == before);  // slot untouched

    std::set<std::string> interned;
    f.terms.for_each([&](Cell t) { interned.insert(f.ts.to_string(t)); });
    CHECK(interned.count("[2,3]") == 1);
    CHECK(interned.count("[3]") == 1);
}

TEST_CASE("zero-arity subgoal copy returns the fold seed") {
    Fixture f(Mode::enhanced);
    Addr dest = f.ts.table().allocate(1);
    std::uint64_t used = f.ts.table().used_cells();
    HashCode sum = f.copier.copy_subgoal_args({}, dest, true);
    CHECK(sum == 1);
    CHECK(f.ts.table().used_cells() == used);
}

TEST_CASE("copy counters never decrease") {
    Fixture f(Mode::enhanced);
    Rng rng(23);
    std::uint64_t last_steps = 0, last_combines = 0, last_copied = 0;
    for (int i = 0; i < 50; ++i) {
        Cell t = random_ground_term(f.ts, rng, 3);
        f.copier.copy(t);
        CHECK(f.stats.traversal_steps >= last_steps);
        CHECK(f.stats.hash_combines >= last_combines);
        CHECK(f.stats.cells_copied >= last_copied);
        last_steps = f.stats.traversal_steps;
        last_combines = f.stats.hash_combines;
        last_copied = f.stats.cells_copied;
    }
}
