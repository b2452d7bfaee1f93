#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "hctab/copier.hpp"
#include "hctab/hashcons.hpp"
#include "hctab/hashing.hpp"
#include "hctab/parser.hpp"
#include "hctab/program.hpp"
#include "hctab/stats.hpp"
#include "hctab/terms.hpp"

namespace hctab {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hash index over records that carry `key` and `next_bucket` members.
// Expansion re-buckets from the stored keys; terms are never traversed.
template <typename Rec>
class KeyedChains {
public:
    explicit KeyedChains(std::size_t initial) : initial_(initial) {}

    template <typename Match>
    Rec* find(HashCode key, std::uint64_t& comparisons, Match&& match) const {
        if (buckets_.empty()) return nullptr;
        for (Rec* r = buckets_[key & (buckets_.size() - 1)]; r; r = r->next_bucket) {
            ++comparisons;
            if (r->key == key && match(*r)) return r;
        }
        return nullptr;
    }

    void insert(Rec* r) {
        if (buckets_.empty()) buckets_.assign(initial_, nullptr);
        link(r);
        if (++count_ > buckets_.size()) expand();
    }

    std::size_t count() const { return count_; }
    std::size_t bucket_cells() const { return buckets_.size(); }

private:
    void link(Rec* r) {
        Rec*& head = buckets_[r->key & (buckets_.size() - 1)];
        r->next_bucket = head;
        head = r;
    }

    void expand() {
        std::vector<Rec*> all;
        all.reserve(count_);
        for (Rec* head : buckets_)
            for (Rec* r = head; r;) {
                Rec* nx = r->next_bucket;
                all.push_back(r);
                r = nx;
            }
        buckets_.assign(buckets_.size() * 2, nullptr);
        for (Rec* r : all) link(r);
    }

    std::size_t initial_;
    std::vector<Rec*> buckets_;
    std::size_t count_ = 0;
};

struct AnswerRecord {
    Addr block;  // [0][1] header, [2..2+arity) numbered argument copies
    HashCode key = 0;
    std::uint64_t ground_mask = 0;
    AnswerRecord* next_bucket = nullptr;
};

class AnswerTable {
public:
    AnswerTable() : index_(8) {}

    template <typename Match>
    AnswerRecord* find(HashCode key, std::uint64_t& comparisons, Match&& match) const {
        return index_.find(key, comparisons, match);
    }

    AnswerRecord* append(Addr block, HashCode key, std::uint64_t mask) {
        AnswerRecord& r = storage_.emplace_back();
        r.block = block;
        r.key = key;
        r.ground_mask = mask;
        index_.insert(&r);
        order_.push_back(&r);  // oldest to newest; consumed in this order
        return &r;
    }

    std::size_t count() const { return order_.size(); }
    AnswerRecord* at(std::size_t i) const { return order_[i]; }
    std::size_t bucket_cells() const { return index_.bucket_cells(); }

private:
    std::deque<AnswerRecord> storage_;
    std::vector<AnswerRecord*> order_;
    KeyedChains<AnswerRecord> index_;
};

struct SubgoalRecord {
    SymbolId sym = 0;
    std::uint32_t arity = 0;
    Addr block;  // [0]=functor cell, [1]=reserved, [2..2+arity) argument copies
    HashCode key = 0;
    std::uint64_t ground_mask = 0;

    enum class State : std::uint8_t { open, complete };
    State state = State::open;
    bool evaluating = false;
    std::uint64_t stamp = 0;  // answer revision at the end of the last clause run

    AnswerTable answers;
    SubgoalRecord* next_bucket = nullptr;

    Addr arg(std::uint32_t i) const { return block + 2 + i; }
};

enum class SubgoalRole { generator, consumer };

// One tabled-evaluation engine instance: owns the term store, the sharing
// tables and the loaded program, and runs queries with iteration-based
// (linear) tabling under the lazy consumption strategy: an answer
// registration always fails so clause resolution keeps producing; a top-most
// generator releases answers only once its evaluation reached a fixpoint and
// every subgoal it opened is complete.
class Engine {
public:
    explicit Engine(Mode mode = Mode::enhanced, HashFlavor flavor = HashFlavor::full)
        : mode_(mode),
          flavor_(flavor),
          terms_(store_, stats_, mode == Mode::enhanced),
          copier_(store_, terms_, mode, stats_),
          subgoal_index_(256) {
        load_prelude();
        program_floor_ = store_.heap().top();
    }

    TermStore& store() { return store_; }
    const Stats& stats() const { return stats_; }
    Mode mode() const { return mode_; }
    HashFlavor flavor() const { return flavor_; }
    TermsTable& terms_table() { return terms_; }

    // ---- loading ----

    void consult_text(std::string_view text) {
        auto items = hctab::parse_program(store_, text);
        for (ProgramItem& item : items) {
            if (item.kind == ProgramItem::Kind::table_decl) {
                SymbolId sym = store_.symbols().intern(item.decl.name, item.decl.arity);
                Predicate& p = preds_[sym];
                p.sym = sym;
                if (p.tabled) {
                    warnings_.push_back("duplicate table declaration for " + item.decl.name + "/" +
                                        std::to_string(item.decl.arity));
                    continue;
                }
                if (!p.clauses.empty())
                    throw LoadError("table declaration for " + item.decl.name + "/" +
                                    std::to_string(item.decl.arity) + " after its clauses");
                p.tabled = true;
            } else {
                Cell head = item.clause.head;
                SymbolId sym = head.tag() == Tag::Atom ? head.symbol() : store_.functor(head);
                Predicate& p = preds_[sym];
                p.sym = sym;
                p.clauses.push_back(std::move(item.clause));
            }
        }
        program_floor_ = store_.heap().top();
    }

    const std::vector<std::string>& warnings() const { return warnings_; }

    const Predicate* predicate(std::string_view name, std::uint32_t arity) {
        auto it = preds_.find(store_.symbols().intern(name, arity));
        return it == preds_.end() ? nullptr : &it->second;
    }

    const std::deque<SubgoalRecord>& subgoal_records() const { return records_; }

    // ---- queries ----

    struct QueryResult {
        std::vector<std::string> lines;  // one per solution, for queries with named variables
        std::uint64_t solutions = 0;
        double seconds = 0.0;
    };

    // Runs the goal text. Ground queries stop at the first proof; queries
    // with named variables enumerate every solution.
    QueryResult run_query(std::string_view goal_text) {
        auto mark = store_.heap().mark();
        auto top = store_.heap().top();
        Parser::Query q = hctab::parse_query(store_, goal_text);
        QueryResult result;
        bool enumerate = !q.vars.empty();
        auto t0 = std::chrono::steady_clock::now();
        std::function<bool()> sink = [&]() {
            ++result.solutions;
            if (!enumerate) return true;  // first proof suffices
            std::ostringstream os;
            std::unordered_map<std::uint64_t, std::uint32_t> names;
            for (std::size_t i = 0; i < q.vars.size(); ++i) {
                if (i) os << ", ";
                os << q.vars[i].first << " = ";
                store_.write_term(os, q.vars[i].second, names);
            }
            result.lines.push_back(os.str());
            return false;
        };
        solve(q.goals, sink);
        result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        last_seconds_ = result.seconds;
        store_.heap().undo_to(mark);
        store_.heap().truncate(top);
        return result;
    }

    bool solve(const std::vector<Cell>& goals, const std::function<bool()>& sink) {
        Cont terminal{nullptr, 0, nullptr, &sink};
        Cont frame{&goals, 0, &terminal, nullptr};
        return advance(&frame);
    }

    // ---- statistics ----

    std::uint64_t bucket_cells() const {
        std::uint64_t total = subgoal_index_.bucket_cells() + terms_.bucket_count();
        for (const SubgoalRecord& r : records_) total += r.answers.bucket_cells();
        return total;
    }

    std::vector<std::pair<std::string, std::string>> statistics_report() const {
        std::vector<std::pair<std::string, std::string>> kv;
        auto put = [&](const char* k, std::uint64_t v) { kv.emplace_back(k, std::to_string(v)); };
        kv.emplace_back("mode", to_string(mode_));
        kv.emplace_back("hash", to_string(flavor_));
        {
            std::ostringstream os;
            os << last_seconds_;
            kv.emplace_back("elapsed_seconds", os.str());
        }
        put("subgoals", stats_.subgoals);
        put("answers", stats_.answers);
        put("cells", store_.table().used_cells());
        put("term_cells", stats_.term_cells);
        put("chain_cells", stats_.chain_cells);
        put("record_cells", stats_.record_cells);
        put("bucket_cells", bucket_cells());
        put("cells_copied", stats_.cells_copied);
        put("traversal_steps", stats_.traversal_steps);
        put("hash_combines", stats_.hash_combines);
        put("terms_hits", stats_.terms_hits);
        put("terms_misses", stats_.terms_misses);
        put("terms_expansions", stats_.terms_expansions);
        put("comparisons", stats_.chain_comparisons());
        put("terms_comparisons", stats_.terms_comparisons);
        put("subgoal_comparisons", stats_.subgoal_comparisons);
        put("answer_comparisons", stats_.answer_comparisons);
        put("tabled_resolutions", stats_.tabled_resolutions);
        return kv;
    }

    // ---- table-primitive surface (used directly by tests) ----

    std::pair<SubgoalRecord*, SubgoalRole> subgoal_lookup_register(Cell goal) {
        goal = store_.deref(goal);
        SymbolId sym = callable_symbol(goal);
        std::uint32_t n = store_.arity(goal);

        auto mark = store_.heap().mark();
        number_goal_vars(goal);
        HashCode key = subgoal_key(sym, goal, n);
        SubgoalRecord* found =
            subgoal_index_.find(key, stats_.subgoal_comparisons, [&](SubgoalRecord& r) {
                return r.sym == sym && variant_stored_args(r.block + 2, n, goal);
            });
        if (found) {
            store_.heap().undo_to(mark);
            return {found, SubgoalRole::consumer};
        }

        Addr block = store_.table().allocate(2 + n);
        stats_.record_cells += 2 + n;
        store_.table().set(block, Cell::atom(sym));
        store_.table().set(block + 1, Cell::integer(0));
        std::vector<HashCode> arg_codes;
        std::vector<Addr> slots;
        for (std::uint32_t i = 0; i < n; ++i) slots.push_back(goal.addr() + 1 + i);
        copier_.copy_subgoal_args(slots, block + 2, /*share_input=*/false, &arg_codes);

        SubgoalRecord& rec = records_.emplace_back();
        rec.sym = sym;
        rec.arity = n;
        rec.block = block;
        rec.key = key;
        for (std::uint32_t i = 0; i < n; ++i)
            if (is_ground_hcode(arg_codes[i])) rec.ground_mask |= std::uint64_t{1} << i;
        subgoal_index_.insert(&rec);
        incomplete_records_.push_back(&rec);
        ++stats_.subgoals;

        // Numbering is undone before resolution proceeds; ground-argument
        // slots are then redirected to their table copies (trailed) so the
        // redirects survive until the caller backtracks past this call.
        store_.heap().undo_to(mark);
        if (mode_ == Mode::enhanced) {
            for (std::uint32_t i = 0; i < n; ++i) {
                Cell copy = store_.table().at(rec.arg(i));
                if (is_ground_hcode(arg_codes[i]) && copy.is_compound())
                    store_.heap().set(slots[i], copy);
            }
        }
        return {&rec, SubgoalRole::generator};
    }

    enum class AnswerOutcome { new_answer, duplicate };

    AnswerOutcome answer_lookup_register(SubgoalRecord& rec, Cell goal) {
        goal = store_.deref(goal);
        std::uint32_t n = rec.arity;
        auto mark = store_.heap().mark();
        number_goal_vars(goal);

        HashCode key = symbol_hcode(store_.symbols(), rec.sym);
        for (std::uint32_t i = 0; i < n; ++i) {
            key = table_key_hcode(key, arg_code(store_.at(goal.addr() + 1 + i)));
            ++stats_.hash_combines;
        }
        AnswerRecord* found = rec.answers.find(key, stats_.answer_comparisons, [&](AnswerRecord& a) {
            return variant_stored_args(a.block + 2, n, goal);
        });
        if (found) {
            store_.heap().undo_to(mark);
            return AnswerOutcome::duplicate;
        }

        Addr block = store_.table().allocate(2 + n);
        stats_.record_cells += 2 + n;
        store_.table().set(block, Cell::atom(rec.sym));
        store_.table().set(block + 1, Cell::integer(0));
        std::uint64_t mask = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            HashCode code = copier_.copy_term(store_.at(goal.addr() + 1 + i), block + 2 + i);
            if (is_ground_hcode(code)) mask |= std::uint64_t{1} << i;
        }
        rec.answers.append(block, key, mask);
        ++stats_.answers;
        ++answer_revision_;
        store_.heap().undo_to(mark);
        return AnswerOutcome::new_answer;
    }

private:
    struct Cont {
        const std::vector<Cell>* goals;  // nullptr marks the terminal node
        std::size_t ix;
        Cont* next;
        const std::function<bool()>* terminal;
    };

    void load_prelude() {
        consult_text(
            "range(L,H,[]) :- L > H.\n"
            "range(L,H,[L|T]) :- L =< H, L1 is L + 1, range(L1,H,T).\n");
    }

    SymbolId callable_symbol(Cell goal) const {
        if (goal.tag() == Tag::Atom) return goal.symbol();
        if (goal.tag() == Tag::Str) return store_.functor(goal);
        throw EvalError(goal.tag() == Tag::Ref ? "instantiation error: unbound goal"
                                               : "type error: callable expected");
    }

    std::string pi_string(SymbolId sym) const {
        const Symbol& s = store_.symbols().at(sym);
        return s.name + "/" + std::to_string(s.arity);
    }

    // ---- resolution core ----

    bool advance(Cont* k) {
        while (k->goals && k->ix == k->goals->size()) k = k->next;
        if (!k->goals) return (*k->terminal)();
        Cont rest{k->goals, k->ix + 1, k->next, nullptr};
        return solve_goal((*k->goals)[k->ix], &rest);
    }

    bool solve_goal(Cell goal, Cont* k) {
        goal = store_.deref(goal);
        SymbolId sym = callable_symbol(goal);
        const Symbol& s = store_.symbols().at(sym);
        if (is_builtin(s.name, s.arity)) return eval_builtin(s.name, goal, k);
        auto it = preds_.find(sym);
        if (it == preds_.end()) throw EvalError("undefined predicate " + pi_string(sym));
        if (it->second.tabled) return solve_tabled(it->second, goal, k);
        return solve_plain(it->second, goal, k);
    }

    Cell instantiate(Cell t, std::vector<Cell>& vars) {
        switch (t.tag()) {
            case Tag::NumVar: {
                Cell& v = vars[t.ordinal()];
                if (v == Cell()) v = store_.make_var();
                return v;
            }
            case Tag::Atom:
            case Tag::Int:
                return t;
            case Tag::Lst: {
                Cell car = instantiate(store_.at(t.addr()), vars);
                Cell cdr = instantiate(store_.at(t.addr() + 1), vars);
                return store_.make_cons(car, cdr);
            }
            case Tag::Str: {
                std::uint32_t n = store_.arity(t);
                std::vector<Cell> args;
                args.reserve(n);
                for (std::uint32_t i = 1; i <= n; ++i)
                    args.push_back(instantiate(store_.at(t.addr() + i), vars));
                return store_.make_struct(store_.functor(t), args);
            }
            default:
                throw TermError("clause template contains a raw reference");
        }
    }

    bool solve_plain(const Predicate& pred, Cell goal, Cont* k) {
        for (const Clause& c : pred.clauses) {
            auto mark = store_.heap().mark();
            auto top = store_.heap().top();
            std::vector<Cell> vars(c.var_count, Cell());
            Cell head = instantiate(c.head, vars);
            if (store_.unify(head, goal)) {
                std::vector<Cell> body;
                body.reserve(c.body.size());
                for (Cell g : c.body) body.push_back(instantiate(g, vars));
                Cont frame{&body, 0, k, nullptr};
                if (advance(&frame)) return true;
            }
            store_.heap().undo_to(mark);
            store_.heap().truncate(top);
        }
        return false;
    }

    // ---- tabled resolution ----

    bool solve_tabled(Predicate& pred, Cell goal, Cont* k) {
        goal = store_.deref(goal);
        auto [rec, role] = subgoal_lookup_register(goal);
        if (rec->state == SubgoalRecord::State::complete) return consume_answers(*rec, goal, k);
        if (rec->evaluating) {
            // A looping variant: consume what exists; the enclosing top-most
            // generator iterates until no round adds answers.
            loop_encountered_ = true;
            run_tainted_ = true;
            return consume_answers(*rec, goal, k);
        }
        if (role == SubgoalRole::generator || rec->stamp < answer_revision_)
            run_generator(pred, *rec);
        if (rec->state != SubgoalRecord::State::complete) run_tainted_ = true;
        return consume_answers(*rec, goal, k);
    }

    void run_generator(Predicate& pred, SubgoalRecord& rec) {
        bool top_most = eval_depth_ == 0;
        ++eval_depth_;
        rec.evaluating = true;
        bool enclosing_tainted = run_tainted_;
        run_tainted_ = false;
        while (true) {
            std::uint64_t before = answer_revision_;
            if (top_most) loop_encountered_ = false;
            run_clauses_once(pred, rec);
            if (!top_most) break;
            if (!(loop_encountered_ && answer_revision_ > before)) break;
        }
        bool tainted = run_tainted_;
        run_tainted_ = enclosing_tainted;
        rec.evaluating = false;
        --eval_depth_;
        if (top_most) {
            for (SubgoalRecord* r : incomplete_records_) r->state = SubgoalRecord::State::complete;
            incomplete_records_.clear();
        } else if (!tainted) {
            // Early completion: this run consumed no incomplete table, so the
            // answer set cannot grow in later rounds.
            rec.state = SubgoalRecord::State::complete;
        }
    }

    void run_clauses_once(Predicate& pred, SubgoalRecord& rec) {
        auto mark = store_.heap().mark();
        auto top = store_.heap().top();
        Cell goal_inst = instantiate_subgoal(rec);
        std::function<bool()> register_and_fail = [&]() {
            answer_lookup_register(rec, goal_inst);
            return false;  // lazy strategy: fail regardless so resolution continues
        };
        Cont terminal{nullptr, 0, nullptr, &register_and_fail};
        for (const Clause& c : pred.clauses) {
            ++stats_.tabled_resolutions;
            auto cmark = store_.heap().mark();
            auto ctop = store_.heap().top();
            std::vector<Cell> vars(c.var_count, Cell());
            Cell head = instantiate(c.head, vars);
            if (store_.unify(head, goal_inst)) {
                std::vector<Cell> body;
                body.reserve(c.body.size());
                for (Cell g : c.body) body.push_back(instantiate(g, vars));
                Cont frame{&body, 0, &terminal, nullptr};
                advance(&frame);
            }
            store_.heap().undo_to(cmark);
            store_.heap().truncate(ctop);
        }
        rec.stamp = answer_revision_;
        store_.heap().undo_to(mark);
        store_.heap().truncate(top);
    }

    // Canonical goal instance built from the record: ground arguments are
    // referenced in place, numbered variables become fresh heap variables.
    Cell instantiate_subgoal(SubgoalRecord& rec) {
        if (rec.arity == 0) return Cell::atom(rec.sym);
        std::unordered_map<std::uint32_t, Cell> fresh;
        std::vector<Cell> args;
        args.reserve(rec.arity);
        for (std::uint32_t i = 0; i < rec.arity; ++i) {
            Cell stored = store_.table().at(rec.arg(i));
            bool ground = (rec.ground_mask >> i) & 1;
            args.push_back(ground ? stored : instantiate_stored(stored, fresh));
        }
        return store_.make_struct(rec.sym, args);
    }

    // Heap instance of a stored (possibly non-ground) term: NumVars map to
    // shared fresh variables; ground table-resident compounds are reused by
    // reference when that is known in O(1).
    Cell instantiate_stored(Cell t, std::unordered_map<std::uint32_t, Cell>& fresh) {
        switch (t.tag()) {
            case Tag::Atom:
            case Tag::Int:
                return t;
            case Tag::NumVar: {
                auto [it, inserted] = fresh.try_emplace(t.ordinal(), Cell());
                if (inserted) it->second = store_.make_var();
                return it->second;
            }
            case Tag::Lst: {
                if (mode_ == Mode::enhanced && t.addr().in_table() &&
                    is_ground_hcode(terms_.stored_hcode(t)))
                    return t;
                Cell car = instantiate_stored(store_.at(t.addr()), fresh);
                Cell cdr = instantiate_stored(store_.at(t.addr() + 1), fresh);
                return store_.make_cons(car, cdr);
            }
            case Tag::Str: {
                if (mode_ == Mode::enhanced && t.addr().in_table() &&
                    is_ground_hcode(terms_.stored_hcode(t)))
                    return t;
                std::uint32_t n = store_.arity(t);
                std::vector<Cell> args;
                args.reserve(n);
                for (std::uint32_t i = 1; i <= n; ++i)
                    args.push_back(instantiate_stored(store_.at(t.addr() + i), fresh));
                return store_.make_struct(store_.functor(t), args);
            }
            default:
                throw TermError("stored term contains a raw reference");
        }
    }

    // Yields stored answers in insertion order against the consumer's goal.
    // Ground arguments unify by reference; zero cells are copied for them.
    bool consume_answers(SubgoalRecord& rec, Cell goal, Cont* k) {
        for (std::size_t i = 0; i < rec.answers.count(); ++i) {
            AnswerRecord* a = rec.answers.at(i);
            auto mark = store_.heap().mark();
            auto top = store_.heap().top();
            if (unify_answer(rec, *a, goal)) {
                if (advance(k)) return true;
            }
            store_.heap().undo_to(mark);
            store_.heap().truncate(top);
        }
        return false;
    }

    bool unify_answer(SubgoalRecord& rec, const AnswerRecord& a, Cell goal) {
        std::unordered_map<std::uint32_t, Cell> fresh;
        for (std::uint32_t i = 0; i < rec.arity; ++i) {
            Cell stored = store_.table().at(a.block + 2 + i);
            Cell inst =
                ((a.ground_mask >> i) & 1) ? stored : instantiate_stored(stored, fresh);
            if (!store_.unify(store_.at(goal.addr() + 1 + i), inst)) return false;
        }
        return true;
    }

    // ---- keys and variant checks ----

    // Structural code of one argument; in enhanced mode a table-resident
    // compound answers from its memoized code without traversal.
    HashCode arg_code(Cell arg) {
        arg = store_.deref(arg);
        if (mode_ == Mode::enhanced && arg.is_compound() && arg.addr().in_table()) {
            ++stats_.traversal_steps;
            return terms_.stored_hcode(arg);
        }
        return structural_hcode(store_, arg, &stats_);
    }

    HashCode subgoal_key(SymbolId sym, Cell goal, std::uint32_t n) {
        if (flavor_ == HashFlavor::prefix3) {
            for (std::uint32_t i = 0; i < n; ++i) {
                Cell arg = store_.deref(store_.at(goal.addr() + 1 + i));
                bool is_nil = arg.tag() == Tag::Atom && arg.symbol() == store_.symbols().nil();
                if (arg.tag() == Tag::Lst || is_nil) return prefix3_hcode(store_, arg, &stats_);
            }
        }
        HashCode key = symbol_hcode(store_.symbols(), sym);
        for (std::uint32_t i = 0; i < n; ++i) {
            key = table_key_hcode(key, arg_code(store_.at(goal.addr() + 1 + i)));
            ++stats_.hash_combines;
        }
        return key;
    }

    // Variant test between a numbered probe goal and a record's stored
    // arguments. In enhanced mode two distinct table-resident ground
    // compounds are unequal without traversal (they would be hash-consed to
    // one address).
    bool variant_stored_args(Addr stored_base, std::uint32_t n, Cell goal) {
        bool canonical = mode_ == Mode::enhanced;
        auto ground_known = [&](Cell c) {
            return c.addr().in_table() && is_ground_hcode(terms_.stored_hcode(c));
        };
        for (std::uint32_t i = 0; i < n; ++i) {
            Cell probe = store_.at(goal.addr() + 1 + i);
            Cell stored = store_.table().at(stored_base + i);
            if (!store_.equal_terms(probe, stored, canonical, ground_known)) return false;
        }
        return true;
    }

    // number_vars over the goal, skipping subtrees known ground in O(1) so
    // redirected arguments do not get re-traversed on every lookup.
    void number_goal_vars(Cell goal) {
        std::uint32_t next = 0;
        std::vector<Cell> work{goal};
        while (!work.empty()) {
            Cell c = store_.deref(work.back());
            work.pop_back();
            switch (c.tag()) {
                case Tag::Ref:
                    store_.bind(c, Cell::numvar(next++));
                    break;
                case Tag::Lst:
                case Tag::Str: {
                    if (mode_ == Mode::enhanced && c.addr().in_table() &&
                        is_ground_hcode(terms_.stored_hcode(c)))
                        break;
                    if (c.tag() == Tag::Lst) {
                        work.push_back(store_.at(c.addr() + 1));
                        work.push_back(store_.at(c.addr()));
                    } else {
                        std::uint32_t n = store_.arity(c);
                        for (std::uint32_t i = n; i >= 1; --i)
                            work.push_back(store_.at(c.addr() + i));
                    }
                    break;
                }
                default:
                    break;
            }
        }
    }

    // ---- builtins (definitions in builtins.hpp) ----

    static bool is_builtin(const std::string& name, std::uint32_t arity);
    bool eval_builtin(const std::string& name, Cell goal, Cont* k);
    std::int64_t eval_arith(Cell t);

    Mode mode_;
    HashFlavor flavor_;
    TermStore store_;
    Stats stats_;
    TermsTable terms_;
    Copier copier_;

    std::unordered_map<SymbolId, Predicate> preds_;
    std::vector<std::string> warnings_;
    std::uint64_t program_floor_ = 0;

    std::deque<SubgoalRecord> records_;
    KeyedChains<SubgoalRecord> subgoal_index_;
    std::vector<SubgoalRecord*> incomplete_records_;

    std::uint64_t answer_revision_ = 0;
    std::uint32_t eval_depth_ = 0;
    bool loop_encountered_ = false;
    bool run_tainted_ = false;  // the innermost running generator consumed from an incomplete table
    double last_seconds_ = 0.0;
};

}  // namespace hctab
