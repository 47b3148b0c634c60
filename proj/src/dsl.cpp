#include "tcbivar/dsl.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace tcb::dsl {

ParseError::ParseError(Pos pos, const std::string& msg)
    : std::runtime_error(fmt::format("{}:{}: parse error: {}", pos.line, pos.col, msg)), pos_(pos), msg_(msg)
{
}

SemanticError::SemanticError(Pos pos, const std::string& msg)
    : std::runtime_error(fmt::format("{}:{}: semantic error: {}", pos.line, pos.col, msg)), pos_(pos), msg_(msg)
{
}

std::string QuantityRef::str() const
{
    std::string out = quantity + "(";
    for (std::size_t i = 0; i < args.size(); ++i)
        out += (i ? "," : "") + args[i];
    return out + ")";
}

std::optional<std::uint64_t> Document::characteristic() const
{
    for (const auto& s : statements)
        if (auto* f = std::get_if<FieldDecl>(&s))
            return f->p;
    return std::nullopt;
}

std::vector<QueryStmt> Document::queries() const
{
    std::vector<QueryStmt> out;
    for (const auto& s : statements)
        if (auto* q = std::get_if<QueryStmt>(&s))
            out.push_back(*q);
    return out;
}

namespace {

enum class Tok { Ident, Int, String, Sym, End };

struct Token {
    Tok kind;
    std::string text;
    Pos pos;
};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return ident_start(c) || std::isdigit(c) || c == '\'' || c == '^'; }

std::vector<Token> lex(const std::string& text)
{
    std::vector<Token> out;
    Pos pos;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++pos.line;
                pos.col = 1;
            } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
                ++pos.col;
            }
        }
    };
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n')
                advance(1);
            continue;
        }
        const Pos start = pos;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(static_cast<unsigned char>(text[j])))
                ++j;
            out.push_back({Tok::Ident, text.substr(i, j - i), start});
            advance(j - i);
        } else if (std::isdigit(c)) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            out.push_back({Tok::Int, text.substr(i, j - i), start});
            advance(j - i);
        } else if (c == '"') {
            std::size_t j = i + 1;
            while (j < text.size() && text[j] != '"' && text[j] != '\n')
                ++j;
            if (j >= text.size() || text[j] != '"')
                throw ParseError(start, "unterminated string");
            out.push_back({Tok::String, text.substr(i + 1, j - i - 1), start});
            advance(j + 1 - i);
        } else {
            std::string two = text.substr(i, 2);
            if (two == "->" || two == "<=" || two == ">=") {
                out.push_back({Tok::Sym, two, start});
                advance(2);
            } else if (std::string("()[]{},=:*/+-;").find(static_cast<char>(c)) != std::string::npos) {
                out.push_back({Tok::Sym, std::string(1, static_cast<char>(c)), start});
                advance(1);
            } else {
                throw ParseError(start, fmt::format("unexpected character '{}'", static_cast<char>(c)));
            }
        }
    }
    out.push_back({Tok::End, "", pos});
    return out;
}

const std::set<std::string>& quantity_names()
{
    static const std::set<std::string> names = {"TC", "TCH", "sec", "secat", "cat", "D", "catdelta", "sync"};
    return names;
}

const std::set<std::string>& space_flags()
{
    static const std::set<std::string> names = {"h_group", "not_h_group", "not_normal", "not_path_connected",
                                                "not_anr"};
    return names;
}

const std::set<std::string>& map_flags()
{
    static const std::set<std::string> names = {"fibration",      "surjective",       "nullhomotopic",
                                                "not_nullhomotopic", "strict_section", "homotopy_section",
                                                "right_homotopy_inverse", "identity", "inclusion",
                                                "retraction"};
    return names;
}

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(lex(text)) {}

    Document document()
    {
        Document doc;
        while (peek().kind != Tok::End)
            doc.statements.push_back(statement());
        return doc;
    }

    QuantityRef lone_quantity()
    {
        QuantityRef q = quantity_ref();
        if (peek().kind != Tok::End)
            throw ParseError(peek().pos, fmt::format("unexpected '{}' after quantity", peek().text));
        return q;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(i_ + ahead, toks_.size() - 1)]; }
    Token next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

    bool accept(const std::string& sym)
    {
        if (peek().kind == Tok::Sym && peek().text == sym) {
            ++i_;
            return true;
        }
        return false;
    }

    static std::string show(const Token& t)
    {
        switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::String: return fmt::format("\"{}\"", t.text);
        default: return fmt::format("'{}'", t.text);
        }
    }

    void expect(const std::string& sym)
    {
        if (!accept(sym))
            throw ParseError(peek().pos, fmt::format("expected '{}' but found {}", sym, show(peek())));
    }

    std::string ident(const char* what = "identifier")
    {
        if (peek().kind != Tok::Ident)
            throw ParseError(peek().pos, fmt::format("expected {} but found {}", what, show(peek())));
        return next().text;
    }

    std::int64_t integer(bool allow_sign = true)
    {
        bool neg = false;
        if (allow_sign && accept("-"))
            neg = true;
        if (peek().kind != Tok::Int)
            throw ParseError(peek().pos, fmt::format("expected an integer but found {}", show(peek())));
        Token t = next();
        if (t.text.size() > 15)
            throw ParseError(t.pos, fmt::format("integer {} is too large", t.text));
        std::int64_t v = std::stoll(t.text);
        return neg ? -v : v;
    }

    std::vector<std::int64_t> int_list(const std::string& close)
    {
        std::vector<std::int64_t> out;
        if (peek().kind == Tok::Sym && peek().text == close)
            return out;
        do {
            out.push_back(integer());
        } while (accept(","));
        return out;
    }

    std::vector<std::string> flag_list()
    {
        std::vector<std::string> out;
        if (!accept("["))
            return out;
        if (accept("]"))
            return out;
        do {
            out.push_back(ident("flag"));
        } while (accept(","));
        expect("]");
        return out;
    }

    QuantityRef quantity_ref()
    {
        const Pos at = peek().pos;
        QuantityRef q;
        q.quantity = ident("quantity");
        if (!quantity_names().count(q.quantity))
            throw ParseError(at, fmt::format("unknown quantity '{}'", q.quantity));
        expect("(");
        q.args.push_back(ident());
        if (accept(","))
            q.args.push_back(ident());
        expect(")");
        return q;
    }

    std::string label()
    {
        if (peek().kind == Tok::Ident || peek().kind == Tok::String)
            return next().text;
        if (peek().kind == Tok::Int && peek().text == "1") {
            next();
            return "1";
        }
        throw ParseError(peek().pos, fmt::format("expected a basis label but found {}", show(peek())));
    }

    LinearTerm term()
    {
        LinearTerm t;
        if (peek().kind != Tok::Int) {
            t.label = label();
            return t;
        }
        t.num = integer(false);
        if (accept("/")) {
            const Pos at = peek().pos;
            t.den = integer(false);
            if (t.den == 0)
                throw ParseError(at, "zero denominator");
        }
        if (accept("*") || peek().kind == Tok::Ident || peek().kind == Tok::String)
            t.label = label();
        else
            t.label = "1";
        return t;
    }

    std::vector<LinearTerm> combo()
    {
        std::vector<LinearTerm> out;
        bool neg = accept("-");
        while (true) {
            LinearTerm t = term();
            if (neg)
                t.num = -t.num;
            if (t.num != 0)
                out.push_back(t);
            if (accept("+"))
                neg = false;
            else if (accept("-"))
                neg = true;
            else
                return out;
        }
    }

    Statement statement()
    {
        const Token kw = peek();
        if (kw.kind != Tok::Ident)
            throw ParseError(kw.pos, fmt::format("expected a statement but found {}", show(kw)));
        next();
        if (kw.text == "field") {
            FieldDecl d{kw.pos, 0};
            const Token t = peek();
            std::string name = ident("field name");
            if (name == "Q")
                return d;
            if (name != "Fp")
                throw ParseError(t.pos, fmt::format("expected 'Q' or 'Fp' but found '{}'", name));
            d.p = static_cast<std::uint64_t>(integer(false));
            return d;
        }
        if (kw.text == "space") {
            SpaceDecl d;
            d.pos = kw.pos;
            d.id = ident();
            expect("=");
            const Token k = peek();
            d.kind = ident("space kind");
            if (d.kind == "sphere" || d.kind == "torus" || d.kind == "wedge_circles") {
                expect("(");
                d.n = integer();
                expect(")");
            } else if (d.kind == "pathspace") {
                expect("(");
                d.refs.push_back(ident());
                expect(")");
            } else if (d.kind == "product") {
                expect("(");
                d.refs.push_back(ident());
                expect(",");
                d.refs.push_back(ident());
                expect(")");
            } else if (d.kind != "contractible" && d.kind != "point") {
                throw ParseError(k.pos, fmt::format("unknown space kind '{}'", d.kind));
            }
            d.flags = flag_list();
            return d;
        }
        if (kw.text == "map") {
            MapDecl d;
            d.pos = kw.pos;
            d.id = ident();
            expect(":");
            d.domain = ident();
            expect("->");
            d.codomain = ident();
            expect("=");
            const Token k = peek();
            d.kind = ident("map kind");
            if (d.kind == "degree" || d.kind == "projection") {
                expect("(");
                d.ints.push_back(integer());
                expect(")");
            } else if (d.kind == "powers") {
                expect("(");
                d.ints = int_list(")");
                if (accept(";"))
                    d.permutation = int_list(")");
                expect(")");
            } else if (d.kind == "inclusion") {
                if (accept("(")) {
                    d.ints.push_back(integer());
                    expect(")");
                }
            } else if (d.kind == "constant") {
                if (accept("(")) {
                    d.point = label();
                    expect(")");
                }
            } else if (d.kind == "on_basis") {
                expect("{");
                if (!accept("}")) {
                    do {
                        BasisImage bi;
                        bi.label = label();
                        expect("->");
                        bi.terms = combo();
                        d.images.push_back(std::move(bi));
                    } while (accept(","));
                    expect("}");
                }
            } else if (d.kind != "identity" && d.kind != "path_fibration") {
                throw ParseError(k.pos, fmt::format("unknown map kind '{}'", d.kind));
            }
            d.flags = flag_list();
            return d;
        }
        if (kw.text == "pair") {
            PairDecl d;
            d.pos = kw.pos;
            d.id = ident();
            expect("=");
            expect("(");
            d.f = ident();
            expect(",");
            d.g = ident();
            expect(")");
            return d;
        }
        if (kw.text == "assert") {
            AssertStmt a;
            a.pos = kw.pos;
            a.target = quantity_ref();
            if (accept("<="))
                a.op = "<=";
            else if (accept(">="))
                a.op = ">=";
            else if (accept("="))
                a.op = "=";
            else
                throw ParseError(peek().pos, fmt::format("expected '<=', '>=' or '=' but found {}", show(peek())));
            if (peek().kind == Tok::Ident && peek().text == "inf") {
                next();
                a.value = ExtNat::inf();
            } else {
                std::int64_t v = integer();
                if (v < 0)
                    throw ParseError(a.pos, "asserted values must be natural numbers or inf");
                a.value = static_cast<std::uint64_t>(v);
            }
            return a;
        }
        if (kw.text == "relate") {
            RelateStmt r;
            r.pos = kw.pos;
            r.kind = ident("relation");
            expect("(");
            do {
                r.args.push_back(ident());
            } while (accept(","));
            expect(")");
            return r;
        }
        if (kw.text == "query") {
            QueryStmt q;
            q.pos = kw.pos;
            const Token k = peek();
            q.kind = ident("query kind");
            if (q.kind == "lcp")
                q.pair = ident();
            else if (q.kind == "bounds" || q.kind == "explain")
                q.target = quantity_ref();
            else if (q.kind != "facts")
                throw ParseError(k.pos, fmt::format("unknown query '{}'", q.kind));
            return q;
        }
        throw ParseError(kw.pos, fmt::format("unknown statement '{}'", kw.text));
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

enum class IdKind { Space, Map, Pair };

class Resolver {
public:
    void run(const Document& doc)
    {
        bool other_seen = false;
        bool field_seen = false;
        for (const auto& st : doc.statements) {
            std::visit([&](const auto& s) { check(s, field_seen, other_seen); }, st);
        }
    }

private:
    void declare(Pos pos, const std::string& id, IdKind kind)
    {
        if (!ids_.emplace(id, kind).second)
            throw SemanticError(pos, fmt::format("'{}' is already declared", id));
    }

    void need(Pos pos, const std::string& id, IdKind kind) const
    {
        static const char* names[] = {"space", "map", "pair"};
        auto it = ids_.find(id);
        if (it == ids_.end())
            throw SemanticError(pos, fmt::format("undeclared identifier '{}'", id));
        if (it->second != kind)
            throw SemanticError(pos, fmt::format("'{}' is not a {}", id, names[static_cast<int>(kind)]));
    }

    void quantity(Pos pos, const QuantityRef& q) const
    {
        if (q.args.size() == 2) {
            need(pos, q.args[0], IdKind::Map);
            need(pos, q.args[1], IdKind::Map);
            return;
        }
        if (!ids_.count(q.args[0]))
            throw SemanticError(pos, fmt::format("undeclared identifier '{}'", q.args[0]));
    }

    void check(const FieldDecl& d, bool& field_seen, bool other_seen)
    {
        if (field_seen)
            throw SemanticError(d.pos, "field declared twice");
        if (other_seen)
            throw SemanticError(d.pos, "the field must be declared before anything else");
        if (d.p != 0 && !is_prime(d.p))
            throw SemanticError(d.pos, fmt::format("{} is not prime", d.p));
        field_seen = true;
    }

    void check(const SpaceDecl& d, bool&, bool& other_seen)
    {
        other_seen = true;
        for (const auto& r : d.refs)
            need(d.pos, r, IdKind::Space);
        for (const auto& f : d.flags)
            if (!space_flags().count(f))
                throw SemanticError(d.pos, fmt::format("unknown space flag '{}'", f));
        declare(d.pos, d.id, IdKind::Space);
    }

    void check(const MapDecl& d, bool&, bool& other_seen)
    {
        other_seen = true;
        need(d.pos, d.domain, IdKind::Space);
        need(d.pos, d.codomain, IdKind::Space);
        for (const auto& f : d.flags)
            if (!map_flags().count(f))
                throw SemanticError(d.pos, fmt::format("unknown map flag '{}'", f));
        declare(d.pos, d.id, IdKind::Map);
    }

    void check(const PairDecl& d, bool&, bool& other_seen)
    {
        other_seen = true;
        need(d.pos, d.f, IdKind::Map);
        need(d.pos, d.g, IdKind::Map);
        declare(d.pos, d.id, IdKind::Pair);
    }

    void check(const AssertStmt& a, bool&, bool& other_seen)
    {
        other_seen = true;
        quantity(a.pos, a.target);
    }

    void check(const RelateStmt& r, bool&, bool& other_seen)
    {
        other_seen = true;
        static const std::map<std::string, std::size_t> arity = {{"homotopic", 2},
                                                                 {"fibrewise_equivalent", 2},
                                                                 {"disjoint_images", 2},
                                                                 {"composition", 3},
                                                                 {"product", 3}};
        auto it = arity.find(r.kind);
        if (it == arity.end())
            throw SemanticError(r.pos, fmt::format("unknown relation '{}'", r.kind));
        if (r.args.size() != it->second)
            throw SemanticError(r.pos,
                                fmt::format("{} takes {} maps, got {}", r.kind, it->second, r.args.size()));
        for (const auto& a : r.args)
            need(r.pos, a, IdKind::Map);
    }

    void check(const QueryStmt& q, bool&, bool& other_seen)
    {
        other_seen = true;
        if (q.kind == "lcp")
            need(q.pos, q.pair, IdKind::Pair);
        else if (q.target)
            quantity(q.pos, *q.target);
    }

    std::map<std::string, IdKind> ids_;
};

bool bare_label(const std::string& s)
{
    if (s == "1")
        return true;
    if (s.empty() || !ident_start(static_cast<unsigned char>(s[0])))
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return ident_char(static_cast<unsigned char>(c)); });
}

std::string show_label(const std::string& s) { return bare_label(s) ? s : "\"" + s + "\""; }

std::string show_combo(const std::vector<LinearTerm>& terms)
{
    if (terms.empty())
        return "0";
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        LinearTerm t = terms[i];
        if (t.den < 0) {
            t.den = -t.den;
            t.num = -t.num;
        }
        const bool neg = t.num < 0;
        const std::int64_t mag = neg ? -t.num : t.num;
        if (i == 0)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        std::string coef = t.den == 1 ? std::to_string(mag) : fmt::format("{}/{}", mag, t.den);
        if (t.label == "1")
            out += coef;
        else if (mag == 1 && t.den == 1)
            out += show_label(t.label);
        else
            out += coef + "*" + show_label(t.label);
    }
    return out;
}

std::string show_flags(const std::vector<std::string>& flags)
{
    if (flags.empty())
        return "";
    std::string out = " [";
    for (std::size_t i = 0; i < flags.size(); ++i)
        out += (i ? ", " : "") + flags[i];
    return out + "]";
}

std::string join_ints(const std::vector<std::int64_t>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? ", " : "") + std::to_string(v[i]);
    return out;
}

struct Printer {
    std::string operator()(const FieldDecl& d) const
    {
        return d.p == 0 ? "field Q" : fmt::format("field Fp {}", d.p);
    }
    std::string operator()(const SpaceDecl& d) const
    {
        std::string e = d.kind;
        if (d.kind == "sphere" || d.kind == "torus" || d.kind == "wedge_circles")
            e += fmt::format("({})", d.n);
        else if (d.kind == "pathspace")
            e += fmt::format("({})", d.refs.at(0));
        else if (d.kind == "product")
            e += fmt::format("({}, {})", d.refs.at(0), d.refs.at(1));
        return fmt::format("space {} = {}{}", d.id, e, show_flags(d.flags));
    }
    std::string operator()(const MapDecl& d) const
    {
        std::string e = d.kind;
        if (d.kind == "degree" || d.kind == "projection" || (d.kind == "inclusion" && !d.ints.empty()))
            e += fmt::format("({})", d.ints.at(0));
        else if (d.kind == "powers")
            e += "(" + join_ints(d.ints) + (d.permutation.empty() ? "" : "; " + join_ints(d.permutation)) + ")";
        else if (d.kind == "constant" && !d.point.empty())
            e += "(" + show_label(d.point) + ")";
        else if (d.kind == "on_basis") {
            e += "{";
            for (std::size_t i = 0; i < d.images.size(); ++i)
                e += (i ? ", " : "") + show_label(d.images[i].label) + " -> " + show_combo(d.images[i].terms);
            e += "}";
        }
        return fmt::format("map {} : {} -> {} = {}{}", d.id, d.domain, d.codomain, e, show_flags(d.flags));
    }
    std::string operator()(const PairDecl& d) const { return fmt::format("pair {} = ({}, {})", d.id, d.f, d.g); }
    std::string operator()(const AssertStmt& a) const
    {
        return fmt::format("assert {} {} {}", a.target.str(), a.op, a.value.str());
    }
    std::string operator()(const RelateStmt& r) const
    {
        std::string out = "relate " + r.kind + "(";
        for (std::size_t i = 0; i < r.args.size(); ++i)
            out += (i ? ", " : "") + r.args[i];
        return out + ")";
    }
    std::string operator()(const QueryStmt& q) const
    {
        if (q.kind == "lcp")
            return "query lcp " + q.pair;
        if (q.target)
            return fmt::format("query {} {}", q.kind, q.target->str());
        return "query " + q.kind;
    }
};

}  // namespace

Document parse(const std::string& text)
{
    Parser p(text);
    Document doc = p.document();
    Resolver().run(doc);
    return doc;
}

QuantityRef parse_quantity_ref(const std::string& text)
{
    Parser p(text);
    return p.lone_quantity();
}

std::string print(const Document& doc)
{
    std::string out;
    for (const auto& s : doc.statements)
        out += std::visit(Printer{}, s) + "\n";
    return out;
}

}  // namespace tcb::dsl
