#include "doctest.h"

#include "hctab/arena.hpp"

using namespace hctab;

TEST_CASE("allocation accounting") {
    TableArena a;
    CHECK(a.used_cells() == 0);
    Addr p = a.allocate(2);
    CHECK(a.used_cells() == 2);
    Addr q = a.allocate(3);  // enhanced-mode cons block: hash cell + car + cdr
    CHECK(a.used_cells() == 5);
    // non-overlapping ranges
    CHECK(q.index() >= p.index() + 2);
    a.allocate(2);
    a.deallocate(2);
    CHECK(a.used_cells() == 5);
}

TEST_CASE("rollback reissues the same address") {
    TableArena a;
    Addr p = a.allocate(3);
    a.deallocate(3);
    CHECK(a.used_cells() == 0);
    Addr q = a.allocate(3);
    CHECK(p == q);
}

TEST_CASE("stack discipline violations are errors") {
    TableArena a;
    CHECK_THROWS_AS(a.deallocate(2), std::logic_error);
    a.allocate(2);
    CHECK_THROWS_AS(a.deallocate(3), std::logic_error);
    a.deallocate(2);
    CHECK_THROWS_AS(a.deallocate(2), std::logic_error);
}

TEST_CASE("region membership is about regions, not liveness") {
    TableArena a;
    Addr p = a.allocate(2);
    CHECK(a.in_table(p));
    CHECK_FALSE(a.in_table(Addr::heap(0)));
    a.deallocate(2);
    CHECK(a.in_table(p));  // rewound but still table region
}

TEST_CASE("allocations never span blocks") {
    TableArena a;
    Addr first = a.allocate(TableArena::kBlockCells - 1);
    Addr second = a.allocate(2);  // does not fit the remainder
    CHECK(second.index() == TableArena::kBlockCells);  // starts at next block
    CHECK(first.index() == 0);
    CHECK(a.used_cells() == TableArena::kBlockCells + 1);
    a.set(second, Cell::integer(42));
    CHECK(a.at(second) == Cell::integer(42));
    CHECK_THROWS_AS(a.allocate(TableArena::kBlockCells + 1), std::length_error);
}

TEST_CASE("used_cells equals allocations minus rollbacks throughout") {
    TableArena a;
    std::uint64_t expected = 0;
    std::uint64_t last = 0;
    std::uint64_t seed = 99;
    for (int i = 0; i < 2000; ++i) {
        seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
        std::uint64_t n = 1 + (seed >> 33) % 7;
        a.allocate(n);
        expected += n;
        last = n;
        if ((seed >> 17) % 3 == 0) {
            a.deallocate(last);
            expected -= last;
        }
        CHECK(a.used_cells() == expected);
    }
}
