#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hctab/cells.hpp"

namespace hctab {

// A clause template: head and body terms with NumVar placeholders for the
// clause variables. Templates are instantiated with fresh heap variables at
// resolution time.
struct Clause {
    Cell head;
    std::vector<Cell> body;
    std::uint32_t var_count = 0;
};

struct Predicate {
    SymbolId sym = 0;
    bool tabled = false;
    std::vector<Clause> clauses;
};

struct TableDecl {
    std::string name;
    std::uint32_t arity = 0;
    int line = 0;
};

// One top-level program item, in source order. Load-time checks (table
// declarations must precede the predicate's clauses) depend on the order.
struct ProgramItem {
    enum class Kind { clause, table_decl };
    Kind kind;
    Clause clause;
    TableDecl decl;
};

}  // namespace hctab
