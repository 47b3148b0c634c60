#pragma once

#include "tcbivar/catalog.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tcb::dsl {

struct Pos {
    int line = 1, col = 1;

    // positions never take part in AST equality
    friend bool operator==(const Pos&, const Pos&) { return true; }
};

/// Lexical and syntax errors.
class ParseError : public std::runtime_error {
public:
    ParseError(Pos pos, const std::string& msg);
    Pos pos() const { return pos_; }
    const std::string& message() const { return msg_; }

private:
    Pos pos_;
    std::string msg_;
};

/// Well-formed input that does not make sense: undeclared identifiers,
/// non-prime characteristic, maps the catalog cannot build, ...
class SemanticError : public std::runtime_error {
public:
    SemanticError(Pos pos, const std::string& msg);
    Pos pos() const { return pos_; }
    const std::string& message() const { return msg_; }

private:
    Pos pos_;
    std::string msg_;
};

struct QuantityRef {
    std::string quantity;  // "TC", "TCH", "sec", "secat", "cat", "D", "catdelta", "sync"
    std::vector<std::string> args;

    /// "TC(f,g)"
    std::string str() const;
    friend bool operator==(const QuantityRef&, const QuantityRef&) = default;
};

struct FieldDecl {
    Pos pos;
    std::uint64_t p = 0;  // 0 for Q
    friend bool operator==(const FieldDecl&, const FieldDecl&) = default;
};

struct SpaceDecl {
    Pos pos;
    std::string id;
    std::string kind;  // sphere, torus, contractible, point, wedge_circles, pathspace, product
    std::int64_t n = 0;
    std::vector<std::string> refs;
    std::vector<std::string> flags;
    friend bool operator==(const SpaceDecl&, const SpaceDecl&) = default;
};

struct MapDecl {
    Pos pos;
    std::string id, domain, codomain;
    std::string kind;  // identity, constant, degree, powers, projection, inclusion, path_fibration, on_basis
    std::vector<std::int64_t> ints;
    std::vector<std::int64_t> permutation;
    std::string point;
    std::vector<BasisImage> images;
    std::vector<std::string> flags;
    friend bool operator==(const MapDecl&, const MapDecl&) = default;
};

struct PairDecl {
    Pos pos;
    std::string id, f, g;
    friend bool operator==(const PairDecl&, const PairDecl&) = default;
};

struct AssertStmt {
    Pos pos;
    QuantityRef target;
    std::string op;  // "<=", ">=", "="
    ExtNat value;
    friend bool operator==(const AssertStmt&, const AssertStmt&) = default;
};

struct RelateStmt {
    Pos pos;
    std::string kind;  // homotopic, fibrewise_equivalent, disjoint_images, composition, product
    std::vector<std::string> args;
    friend bool operator==(const RelateStmt&, const RelateStmt&) = default;
};

struct QueryStmt {
    Pos pos;
    std::string kind;  // lcp, bounds, explain, facts
    std::string pair;  // lcp
    std::optional<QuantityRef> target;  // bounds, explain
    friend bool operator==(const QueryStmt&, const QueryStmt&) = default;
};

using Statement = std::variant<FieldDecl, SpaceDecl, MapDecl, PairDecl, AssertStmt, RelateStmt, QueryStmt>;

struct Document {
    std::vector<Statement> statements;

    std::optional<std::uint64_t> characteristic() const;
    std::vector<QueryStmt> queries() const;
    friend bool operator==(const Document&, const Document&) = default;
};

/// Parses and resolves names. Throws ParseError or SemanticError.
Document parse(const std::string& text);

/// Parses a bare quantity reference such as "TC(f, g)".
QuantityRef parse_quantity_ref(const std::string& text);

/// Canonical form: one statement per line, single spaces, no comments.
std::string print(const Document& doc);

}  // namespace tcb::dsl
