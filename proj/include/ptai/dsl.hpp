// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Line-oriented model language:
//
//   clocks x y;
//   params p q;
//   bounds p in [0,1];
//   loc Name labels a,b inv { x < p, y <= p + 1 };
//   init Name;
//   edge Name -> Name action act guard { x >= 2 } reset x,y;
//
// plus optional `actions a b;` and `labels a b;` declarations. Comments start
// with '#' or '//'. Bounds are parameters joined by '+' with an optional
// integer (or n/d) tail.

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptai/classify.hpp"
#include "ptai/model.hpp"

namespace ptai {

class ParseError : public Error {
  public:
    enum class Kind { Lexical, Syntax, Semantic };

    ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + kind_name(kind) + " error: " + message),
          kind_(kind), line_(line), column_(column) {}

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t column() const { return column_; }

    static std::string kind_name(Kind k) {
        switch (k) {
        case Kind::Lexical: return "lexical";
        case Kind::Syntax: return "syntax";
        case Kind::Semantic: return "semantic";
        }
        return "?";
    }

  private:
    Kind kind_;
    std::size_t line_, column_;
};

namespace detail {

struct Token {
    enum class Kind { Ident, Number, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    std::size_t line = 1, column = 1;
};

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') ++line, col = 1;
            else ++col;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token t{Token::Kind::Punct, "", line, col};
        std::size_t len = 1;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Token::Kind::Ident;
            while (i + len < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i + len])) || src[i + len] == '_'))
                ++len;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = Token::Kind::Number;
            while (i + len < src.size() && std::isdigit(static_cast<unsigned char>(src[i + len]))) ++len;
        } else if ((c == '<' || c == '>') && i + 1 < src.size() && src[i + 1] == '=') {
            len = 2;
        } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            len = 2;
        } else if (std::string_view("{}[],;+-<>=/").find(c) == std::string_view::npos) {
            std::string shown = std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c)
                                                                            : "\\x" + std::to_string(static_cast<unsigned char>(c));
            throw ParseError(ParseError::Kind::Lexical, line, col, "unexpected character '" + shown + "'");
        }
        t.text = std::string(src.substr(i, len));
        out.push_back(std::move(t));
        advance(len);
    }
    out.push_back(Token{Token::Kind::End, "", line, col});
    return out;
}

class Parser {
  public:
    explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

    PtaModel parse() {
        while (peek().kind != Token::Kind::End) statement();
        finish();
        return std::move(model_);
    }

  private:
    using K = ParseError::Kind;

    struct PendingEdge {
        Token source, target;
        Edge edge;
    };

    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }

    [[noreturn]] void fail(K kind, const Token& at, const std::string& msg) const {
        throw ParseError(kind, at.line, at.column, msg);
    }

    static std::string shown(const Token& t) { return t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'"; }

    bool accept(std::string_view punct) {
        if (peek().kind == Token::Kind::Punct && peek().text == punct) {
            next();
            return true;
        }
        return false;
    }

    void expect(std::string_view punct) {
        if (!accept(punct)) fail(K::Syntax, peek(), "expected '" + std::string(punct) + "', found " + shown(peek()));
    }

    const Token& ident(const char* what) {
        if (peek().kind != Token::Kind::Ident) fail(K::Syntax, peek(), std::string("expected ") + what + ", found " + shown(peek()));
        return next();
    }

    bool keyword(std::string_view kw) {
        if (peek().kind == Token::Kind::Ident && peek().text == kw) {
            next();
            return true;
        }
        return false;
    }

    std::int64_t integer() {
        bool negative = accept("-");
        if (peek().kind != Token::Kind::Number) fail(K::Syntax, peek(), "expected a number, found " + shown(peek()));
        const Token& t = next();
        auto v = parse_rational(t.text);
        if (!v) fail(K::Lexical, t, "number out of range");
        return negative ? -v->numerator() : v->numerator();
    }

    Rational number() {
        const Token& t = next();
        auto v = parse_rational(t.text);
        if (!v) fail(K::Lexical, t, "number out of range");
        if (accept("/")) {
            if (peek().kind != Token::Kind::Number) fail(K::Syntax, peek(), "expected a denominator, found " + shown(peek()));
            const Token& d = next();
            auto den = parse_rational(d.text);
            if (!den || *den == 0) fail(K::Semantic, d, "invalid denominator");
            return *v / *den;
        }
        return *v;
    }

    // One or more comma- or space-separated names up to ';'.
    std::vector<Token> name_list(const char* what) {
        std::vector<Token> names{ident(what)};
        while (!accept(";")) {
            accept(",");
            names.push_back(ident(what));
        }
        return names;
    }

    void declare(std::vector<std::string>& names, const Token& t, const char* what) {
        if (std::find(names.begin(), names.end(), t.text) != names.end())
            fail(K::Semantic, t, std::string("duplicate ") + what + " '" + t.text + "'");
        names.push_back(t.text);
    }

    static std::uint32_t intern(std::vector<std::string>& names, const std::string& name) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it != names.end()) return static_cast<std::uint32_t>(it - names.begin());
        names.push_back(name);
        return static_cast<std::uint32_t>(names.size() - 1);
    }

    void statement() {
        const Token& kw = ident("a statement keyword");
        if (kw.text == "clocks") {
            for (const auto& t : name_list("a clock name")) declare(model_.clocks, t, "clock");
        } else if (kw.text == "params") {
            for (const auto& t : name_list("a parameter name")) declare(model_.params, t, "parameter");
        } else if (kw.text == "actions") {
            for (const auto& t : name_list("an action name")) declare(model_.actions, t, "action");
        } else if (kw.text == "labels") {
            for (const auto& t : name_list("a label name")) declare(model_.labels, t, "label");
        } else if (kw.text == "bounds") {
            bounds_statement();
        } else if (kw.text == "loc") {
            location_statement();
        } else if (kw.text == "init") {
            if (init_) fail(K::Semantic, kw, "duplicate init statement");
            init_ = ident("a location name");
            expect(";");
        } else if (kw.text == "edge") {
            edge_statement();
        } else {
            fail(K::Syntax, kw, "unknown statement '" + kw.text + "'");
        }
    }

    void bounds_statement() {
        const Token& p = ident("a parameter name");
        auto id = model_.find_param(p.text);
        if (!id) fail(K::Semantic, p, "undeclared parameter '" + p.text + "'");
        if (!keyword("in")) fail(K::Syntax, peek(), "expected 'in', found " + shown(peek()));
        expect("[");
        std::int64_t lo = integer();
        expect(",");
        std::int64_t hi = integer();
        expect("]");
        expect(";");
        if (lo < 0 || lo > hi) fail(K::Semantic, p, "invalid bounds for '" + p.text + "'");
        if (bounds_.count(*id)) fail(K::Semantic, p, "duplicate bounds for '" + p.text + "'");
        bounds_[*id] = {lo, hi};
        bounds_token_ = p;
    }

    void location_statement() {
        const Token& name = ident("a location name");
        if (model_.find_location(name.text)) fail(K::Semantic, name, "duplicate location '" + name.text + "'");
        Location loc{name.text, {}, {}};
        bool seen_labels = false, seen_inv = false;
        while (!accept(";")) {
            const Token& clause = ident("'labels', 'inv' or ';'");
            if (clause.text == "labels" && !seen_labels) {
                seen_labels = true;
                do {
                    LabelId l = intern(model_.labels, ident("a label name").text);
                    if (std::find(loc.labels.begin(), loc.labels.end(), l) == loc.labels.end()) loc.labels.push_back(l);
                } while (accept(","));
            } else if (clause.text == "inv" && !seen_inv) {
                seen_inv = true;
                loc.invariant = constraint();
            } else {
                fail(K::Syntax, clause, "unexpected " + shown(clause) + " in location declaration");
            }
        }
        model_.locations.push_back(std::move(loc));
    }

    void edge_statement() {
        PendingEdge pe;
        pe.source = ident("a source location");
        expect("->");
        pe.target = ident("a target location");
        bool seen_action = false, seen_guard = false, seen_reset = false;
        while (!accept(";")) {
            const Token& clause = ident("'action', 'guard', 'reset' or ';'");
            if (clause.text == "action" && !seen_action) {
                seen_action = true;
                pe.edge.action = intern(model_.actions, ident("an action name").text);
            } else if (clause.text == "guard" && !seen_guard) {
                seen_guard = true;
                pe.edge.guard = constraint();
            } else if (clause.text == "reset" && !seen_reset) {
                seen_reset = true;
                do {
                    const Token& c = ident("a clock name");
                    auto id = model_.find_clock(c.text);
                    if (!id) fail(K::Semantic, c, "undeclared clock '" + c.text + "'");
                    if (std::find(pe.edge.resets.begin(), pe.edge.resets.end(), *id) != pe.edge.resets.end())
                        fail(K::Semantic, c, "clock '" + c.text + "' reset twice");
                    pe.edge.resets.push_back(*id);
                } while (accept(","));
                std::sort(pe.edge.resets.begin(), pe.edge.resets.end());
            } else {
                fail(K::Syntax, clause, "unexpected " + shown(clause) + " in edge declaration");
            }
        }
        edges_.push_back(std::move(pe));
    }

    Constraint constraint() {
        expect("{");
        Constraint c;
        if (accept("}")) return c;
        do {
            c.inequalities.push_back(inequality());
        } while (accept(","));
        expect("}");
        return c;
    }

    Inequality inequality() {
        const Token& clock = ident("a clock name");
        auto id = model_.find_clock(clock.text);
        if (!id) fail(K::Semantic, clock, "undeclared clock '" + clock.text + "'");
        Inequality ineq{*id, Relation::Le, {}};
        const Token& rel = next();
        static const std::map<std::string, Relation> rels{
            {"<", Relation::Lt}, {"<=", Relation::Le}, {"=", Relation::Eq}, {">=", Relation::Ge}, {">", Relation::Gt}};
        auto it = rel.kind == Token::Kind::Punct ? rels.find(rel.text) : rels.end();
        if (it == rels.end()) fail(K::Syntax, rel, "expected a relation, found " + shown(rel));
        ineq.rel = it->second;
        ineq.bound = bound();
        return ineq;
    }

    LinearBound bound() {
        LinearBound b;
        bool negative = accept("-");
        for (;;) {
            const Token& t = peek();
            if (t.kind == Token::Kind::Ident) {
                if (negative) fail(K::Syntax, t, "parameters can only be added");
                next();
                auto id = model_.find_param(t.text);
                if (!id) fail(K::Semantic, t, "undeclared parameter '" + t.text + "'");
                if (std::find(b.params.begin(), b.params.end(), *id) != b.params.end())
                    fail(K::Semantic, t, "parameter '" + t.text + "' occurs twice in one bound");
                b.params.push_back(*id);
            } else if (t.kind == Token::Kind::Number) {
                Rational v = number();
                b.constant += negative ? -v : v;
            } else {
                fail(K::Syntax, t, "expected a parameter or a number, found " + shown(t));
            }
            if (accept("+")) negative = false;
            else if (accept("-")) negative = true;
            else break;
        }
        std::sort(b.params.begin(), b.params.end());
        return b;
    }

    LocationId resolve(const Token& t) {
        auto id = model_.find_location(t.text);
        if (!id) fail(K::Semantic, t, "undeclared location '" + t.text + "'");
        return *id;
    }

    void finish() {
        if (model_.locations.empty()) fail(K::Semantic, peek(), "model declares no locations");
        if (!init_) fail(K::Semantic, peek(), "missing init statement");
        model_.initial = resolve(*init_);
        for (auto& pe : edges_) {
            pe.edge.source = resolve(pe.source);
            pe.edge.target = resolve(pe.target);
            model_.edges.push_back(std::move(pe.edge));
        }
        if (!bounds_.empty()) {
            if (bounds_.size() != model_.params.size())
                fail(K::Semantic, bounds_token_, "bounds must be given for every parameter or none");
            model_.param_bounds.emplace();
            for (auto& [p, b] : bounds_) model_.param_bounds->push_back(b);
        }
        auto v = validate_model(model_);
        if (!v.ok()) fail(K::Semantic, peek(), v.errors.front());
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    PtaModel model_;
    std::optional<Token> init_;
    std::vector<PendingEdge> edges_;
    std::map<ParamId, ParamInterval> bounds_;
    Token bounds_token_;
};

} // namespace detail

inline PtaModel parse_model(std::string_view text) { return detail::Parser(text).parse(); }

inline std::string serialize(const PtaModel& model) {
    std::string out;
    auto list = [&](const char* kw, const std::vector<std::string>& names) {
        if (names.empty()) return;
        out += kw;
        for (const auto& n : names) out += " " + n;
        out += ";\n";
    };
    list("clocks", model.clocks);
    list("params", model.params);
    list("actions", model.actions);
    list("labels", model.labels);
    if (model.param_bounds)
        for (ParamId p = 0; p < model.param_bounds->size(); ++p)
            out += "bounds " + model.params[p] + " in [" + std::to_string((*model.param_bounds)[p].lower) + "," +
                   std::to_string((*model.param_bounds)[p].upper) + "];\n";
    for (const auto& loc : model.locations) {
        out += "loc " + loc.name;
        for (std::size_t i = 0; i < loc.labels.size(); ++i)
            out += (i == 0 ? " labels " : ",") + model.labels[loc.labels[i]];
        if (!loc.invariant.is_true()) out += " inv " + format_constraint(model, loc.invariant);
        out += ";\n";
    }
    out += "init " + model.locations.at(model.initial).name + ";\n";
    for (const auto& e : model.edges) {
        out += "edge " + model.locations[e.source].name + " -> " + model.locations[e.target].name;
        if (e.action) out += " action " + model.actions[*e.action];
        if (!e.guard.is_true()) out += " guard " + format_constraint(model, e.guard);
        for (std::size_t i = 0; i < e.resets.size(); ++i) out += (i == 0 ? " reset " : ",") + model.clocks[e.resets[i]];
        out += ";\n";
    }
    return out;
}

} // namespace ptai
