#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hctab/program.hpp"
#include "hctab/terms.hpp"

namespace hctab {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reader for the clause subset:
//   clauses        H.   H :- B1, ..., Bn.
//   directives     :- table name/arity.
//   terms          atoms, quoted atoms, integers, variables, f(...), [a,b|T]
//   goals          T, T relop T with relop in {is,<,>,=<,>=,=:=,=\=,==,\==,=}
//   expressions    + - * (infix, * binds tighter) and min(_,_) inside is/2
//   comments       % to end of line
class Parser {
public:
    Parser(TermStore& store, std::string_view text) : store_(store), text_(text) { advance(); }

    // Program items in source order. Clause variables become NumVar cells.
    std::vector<ProgramItem> parse_program() {
        std::vector<ProgramItem> items;
        while (tok_.kind != Token::Kind::end) {
            if (tok_.is_sym(":-")) {
                advance();
                items.push_back(parse_directive());
            } else {
                items.push_back(parse_clause());
            }
        }
        return items;
    }

    // A query: comma-separated goals with real (named) heap variables.
    struct Query {
        std::vector<Cell> goals;
        std::vector<std::pair<std::string, Cell>> vars;  // named, first occurrence order
    };

    Query parse_query() {
        Query q;
        query_vars_ = &q.vars;
        var_ordinals_.clear();
        q.goals.push_back(parse_goal());
        while (tok_.is_sym(",")) {
            advance();
            q.goals.push_back(parse_goal());
        }
        if (tok_.is_sym(".")) advance();
        expect_end();
        query_vars_ = nullptr;
        return q;
    }

private:
    struct Token {
        enum class Kind { atom, var, integer, sym, end };
        Kind kind = Kind::end;
        std::string text;
        std::int64_t ival = 0;
        int line = 1, col = 1;

        bool is_sym(std::string_view s) const { return kind == Kind::sym && text == s; }
        bool is_atom(std::string_view s) const { return kind == Kind::atom && text == s; }
    };

    // ---- tokenizer ----

    void advance() {
        prev_ = tok_;
        tok_ = next_token();
    }

    [[noreturn]] void fail(const std::string& msg) const {
        if (tok_.kind == Token::Kind::end)
            throw ParseError("syntax error at end of input: " + msg);
        throw ParseError("syntax error at line " + std::to_string(tok_.line) + ", column " +
                         std::to_string(tok_.col) + ": " + msg);
    }

    Token next_token() {
        skip_ws();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= text_.size()) {
            t.kind = Token::Kind::end;
            return t;
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_int(t, false);
        if (c == '-' && pos_ + 1 < text_.size() &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) && !after_operand()) {
            take();
            return lex_int(t, true);
        }
        if (std::islower(static_cast<unsigned char>(c))) {
            t.kind = Token::Kind::atom;
            while (pos_ < text_.size() && ident_char(text_[pos_])) t.text += take();
            return t;
        }
        if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Token::Kind::var;
            while (pos_ < text_.size() && ident_char(text_[pos_])) t.text += take();
            return t;
        }
        if (c == '\'') return lex_quoted(t);
        for (std::string_view op : {"=:=", "=\\=", "\\=="}) {
            if (text_.substr(pos_).starts_with(op)) {
                t.kind = Token::Kind::sym;
                t.text = op;
                pos_ += op.size();
                col_ += static_cast<int>(op.size());
                return t;
            }
        }
        for (std::string_view op : {":-", "?-", "=<", ">=", "=="}) {
            if (text_.substr(pos_).starts_with(op)) {
                t.kind = Token::Kind::sym;
                t.text = op;
                pos_ += 2;
                col_ += 2;
                return t;
            }
        }
        if (std::string_view("()[]|,.<>=+-*/").find(c) != std::string_view::npos) {
            t.kind = Token::Kind::sym;
            t.text = std::string(1, take());
            return t;
        }
        fail_at(t.line, t.col, std::string("unexpected character '") + c + "'");
    }

    [[noreturn]] void fail_at(int line, int col, const std::string& msg) const {
        throw ParseError("syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + msg);
    }

    Token lex_int(Token t, bool neg) {
        t.kind = Token::Kind::integer;
        std::int64_t v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            v = v * 10 + (take() - '0');
        t.ival = neg ? -v : v;
        return t;
    }

    Token lex_quoted(Token t) {
        take();  // opening quote
        t.kind = Token::Kind::atom;
        while (true) {
            if (pos_ >= text_.size()) fail_at(t.line, t.col, "unterminated quoted atom");
            char c = take();
            if (c == '\\' && pos_ < text_.size()) {
                t.text += take();
            } else if (c == '\'') {
                break;
            } else {
                t.text += c;
            }
        }
        return t;
    }

    // A '-' right after an operand is subtraction, not a sign.
    bool after_operand() const {
        switch (prev_.kind) {
            case Token::Kind::integer:
            case Token::Kind::var:
            case Token::Kind::atom:
                return true;
            case Token::Kind::sym:
                return prev_.text == ")" || prev_.text == "]";
            default:
                return false;
        }
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                take();
            } else {
                break;
            }
        }
    }

    char take() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    // ---- parser ----

    ProgramItem parse_directive() {
        if (!tok_.is_atom("table")) fail("only ':- table name/arity.' directives are supported");
        advance();
        if (tok_.kind != Token::Kind::atom) fail("predicate name expected after table");
        TableDecl decl;
        decl.name = tok_.text;
        decl.line = tok_.line;
        advance();
        if (!tok_.is_sym("/")) fail("expected '/' in table declaration");
        advance();
        if (tok_.kind != Token::Kind::integer || tok_.ival < 0) fail("arity expected");
        decl.arity = static_cast<std::uint32_t>(tok_.ival);
        advance();
        expect_dot();
        ProgramItem item;
        item.kind = ProgramItem::Kind::table_decl;
        item.decl = std::move(decl);
        return item;
    }

    ProgramItem parse_clause() {
        var_ordinals_.clear();
        next_ordinal_ = 0;
        Clause c;
        c.head = parse_goal();
        Cell h = c.head;
        if (h.tag() != Tag::Atom && h.tag() != Tag::Str) fail("clause head must be callable");
        if (tok_.is_sym(":-")) {
            advance();
            c.body.push_back(parse_goal());
            while (tok_.is_sym(",")) {
                advance();
                c.body.push_back(parse_goal());
            }
        }
        expect_dot();
        c.var_count = next_ordinal_;
        ProgramItem item;
        item.kind = ProgramItem::Kind::clause;
        item.clause = std::move(c);
        return item;
    }

    void expect_dot() {
        if (!tok_.is_sym(".")) fail("expected '.' at end of clause");
        advance();
    }

    void expect_end() {
        if (tok_.kind != Token::Kind::end) fail("trailing input after query");
    }

    Cell parse_goal() {
        Cell lhs = parse_expr();
        static constexpr std::string_view relops[] = {"<",  ">",   "=<",  ">=", "=:=",
                                                      "=\\=", "==", "\\==", "="};
        std::string op;
        if (tok_.kind == Token::Kind::sym) {
            for (auto r : relops)
                if (tok_.text == r) op = r;
        } else if (tok_.is_atom("is")) {
            op = "is";
        }
        if (op.empty()) return lhs;
        advance();
        Cell rhs = parse_expr();
        return store_.make_struct(store_.symbols().intern(op, 2), {lhs, rhs});
    }

    Cell parse_expr() {
        Cell t = parse_mul();
        while (tok_.is_sym("+") || tok_.is_sym("-")) {
            std::string op = tok_.text;
            advance();
            Cell rhs = parse_mul();
            t = store_.make_struct(store_.symbols().intern(op, 2), {t, rhs});
        }
        return t;
    }

    Cell parse_mul() {
        Cell t = parse_primary();
        while (tok_.is_sym("*")) {
            advance();
            Cell rhs = parse_primary();
            t = store_.make_struct(store_.symbols().intern("*", 2), {t, rhs});
        }
        return t;
    }

    Cell parse_primary() {
        switch (tok_.kind) {
            case Token::Kind::integer: {
                Cell c = store_.make_int(tok_.ival);
                advance();
                return c;
            }
            case Token::Kind::var: {
                Cell c = var_cell(tok_.text);
                advance();
                return c;
            }
            case Token::Kind::atom: {
                std::string name = tok_.text;
                advance();
                if (tok_.is_sym("(")) {
                    advance();
                    std::vector<Cell> args{parse_expr()};
                    while (tok_.is_sym(",")) {
                        advance();
                        args.push_back(parse_expr());
                    }
                    if (!tok_.is_sym(")")) fail("expected ')'");
                    advance();
                    SymbolId sym =
                        store_.symbols().intern(name, static_cast<std::uint32_t>(args.size()));
                    return store_.make_struct(sym, args);
                }
                return store_.make_atom(name);
            }
            case Token::Kind::sym:
                if (tok_.text == "[") return parse_list();
                if (tok_.text == "(") {
                    advance();
                    Cell t = parse_expr();
                    if (!tok_.is_sym(")")) fail("expected ')'");
                    advance();
                    return t;
                }
                fail("term expected");
            default:
                fail("term expected");
        }
    }

    Cell parse_list() {
        advance();  // '['
        if (tok_.is_sym("]")) {
            advance();
            return store_.nil();
        }
        std::vector<Cell> elems{parse_expr()};
        while (tok_.is_sym(",")) {
            advance();
            elems.push_back(parse_expr());
        }
        Cell tail = store_.nil();
        if (tok_.is_sym("|")) {
            advance();
            tail = parse_expr();
        }
        if (!tok_.is_sym("]")) fail("expected ']'");
        advance();
        return store_.make_list(elems, tail);
    }

    // Template mode numbers variables; query mode allocates real heap
    // variables and records named ones. Only a bare `_` is anonymous.
    Cell var_cell(const std::string& name) {
        if (query_vars_) {
            if (name == "_") return store_.make_var();
            auto it = var_ordinals_.find(name);
            if (it != var_ordinals_.end()) return query_var_cells_[it->second];
            var_ordinals_.emplace(name, static_cast<std::uint32_t>(query_var_cells_.size()));
            Cell v = store_.make_var();
            query_var_cells_.push_back(v);
            if (!name.starts_with('_')) query_vars_->emplace_back(name, v);
            return v;
        }
        if (name == "_") return Cell::numvar(next_ordinal_++);
        auto it = var_ordinals_.find(name);
        if (it != var_ordinals_.end()) return Cell::numvar(it->second);
        std::uint32_t ord = next_ordinal_++;
        var_ordinals_.emplace(name, ord);
        return Cell::numvar(ord);
    }

    TermStore& store_;
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_, prev_;

    std::unordered_map<std::string, std::uint32_t> var_ordinals_;
    std::uint32_t next_ordinal_ = 0;
    std::vector<std::pair<std::string, Cell>>* query_vars_ = nullptr;
    std::vector<Cell> query_var_cells_;
};

inline std::vector<ProgramItem> parse_program(TermStore& store, std::string_view text) {
    return Parser(store, text).parse_program();
}

inline Parser::Query parse_query(TermStore& store, std::string_view text) {
    return Parser(store, text).parse_query();
}

}  // namespace hctab
