#pragma once

#include <algorithm>
#include <string>

#include "hctab/tabling.hpp"

namespace hctab {

// Builtin predicates needed by the bundled programs. Builtins are never
// tabled and every one except between/3 succeeds at most once.
inline bool Engine::is_builtin(const std::string& name, std::uint32_t arity) {
    if (arity == 0) return name == "true" || name == "fail";
    if (arity == 2) {
        static const char* ops[] = {"is", "<",  ">",   "=<",  ">=", "=:=",
                                    "=\\=", "==", "\\==", "="};
        for (const char* op : ops)
            if (name == op) return true;
        return false;
    }
    if (arity == 3) return name == "between";
    return false;
}

// Integer arithmetic over +, -, * and min/2. Unbound operands are an
// instantiation error; anything non-evaluable is a type error.
inline std::int64_t Engine::eval_arith(Cell t) {
    t = store_.deref(t);
    switch (t.tag()) {
        case Tag::Int:
            return t.value();
        case Tag::Ref:
            throw EvalError("instantiation error: unbound variable in arithmetic");
        case Tag::Str: {
            const Symbol& s = store_.symbols().at(store_.functor(t));
            if (s.arity == 2) {
                std::int64_t a = eval_arith(store_.at(t.addr() + 1));
                std::int64_t b = eval_arith(store_.at(t.addr() + 2));
                // wraparound on purpose: deterministic without UB
                auto ua = static_cast<std::uint64_t>(a), ub = static_cast<std::uint64_t>(b);
                if (s.name == "+") return static_cast<std::int64_t>(ua + ub);
                if (s.name == "-") return static_cast<std::int64_t>(ua - ub);
                if (s.name == "*") return static_cast<std::int64_t>(ua * ub);
                if (s.name == "min") return std::min(a, b);
            }
            throw EvalError("type error: evaluable expected, found " + pi_string(store_.functor(t)));
        }
        default:
            throw EvalError("type error: integer expected in arithmetic");
    }
}

inline bool Engine::eval_builtin(const std::string& name, Cell goal, Cont* k) {
    std::uint32_t arity = goal.tag() == Tag::Str ? store_.arity(goal) : 0;
    auto arg = [&](std::uint32_t i) { return store_.at(goal.addr() + i); };

    if (arity == 0) {
        if (name == "true") return advance(k);
        return false;  // fail
    }

    if (arity == 3) {  // between(Lo, Hi, X)
        std::int64_t lo = eval_arith(arg(1));
        std::int64_t hi = eval_arith(arg(2));
        Cell x = store_.deref(arg(3));
        if (x.tag() == Tag::Int) {
            if (x.value() < lo || x.value() > hi) return false;
            return advance(k);
        }
        if (x.tag() != Tag::Ref) return false;
        for (std::int64_t i = lo; i <= hi; ++i) {
            auto mark = store_.heap().mark();
            store_.bind(x, Cell::integer(i));
            if (advance(k)) return true;
            store_.heap().undo_to(mark);
        }
        return false;
    }

    if (name == "=") {
        auto mark = store_.heap().mark();
        if (store_.unify(arg(1), arg(2)) && advance(k)) return true;
        store_.heap().undo_to(mark);
        return false;
    }
    if (name == "==") return store_.equal_terms(arg(1), arg(2)) && advance(k);
    if (name == "\\==") return !store_.equal_terms(arg(1), arg(2)) && advance(k);

    if (name == "is") {
        std::int64_t v = eval_arith(arg(2));
        auto mark = store_.heap().mark();
        if (store_.unify(arg(1), Cell::integer(v)) && advance(k)) return true;
        store_.heap().undo_to(mark);
        return false;
    }

    std::int64_t a = eval_arith(arg(1));
    std::int64_t b = eval_arith(arg(2));
    bool holds = false;
    if (name == "<") holds = a < b;
    else if (name == ">") holds = a > b;
    else if (name == "=<") holds = a <= b;
    else if (name == ">=") holds = a >= b;
    else if (name == "=:=") holds = a == b;
    else if (name == "=\\=") holds = a != b;
    return holds && advance(k);
}

}  // namespace hctab
