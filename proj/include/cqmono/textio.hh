#pragma once

#include <cqmono/model.hh>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cqmono
{
    /// A schema, its named queries, and assert lines naming statements.
    struct Document
    {
        Schema schema;
        std::map<std::string, Query> queries;
        std::vector<std::pair<std::string, std::string>> statements;

        /// Looks up a query by name; throws Error if it is not declared.
        auto query(std::string_view name) const -> const Query &;
        auto statement(std::string_view lhs, std::string_view rhs) const -> ContainmentStatement;

        friend auto operator==(const Document &, const Document &) -> bool = default;
    };

    enum class ParseErrorKind
    {
        Syntax,
        Validation,
        DuplicateName,
        DuplicateAttribute,
        ReservedSymbol,
        UndeclaredQuery,
        SchemeMismatch
    };

    class ParseError : public Error
    {
        private:
            ParseErrorKind _kind;
            std::size_t _line, _column;
            std::string _what;
            std::optional<ValidationError> _validation;

        public:
            ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, std::string what,
                std::optional<ValidationError> validation = std::nullopt);

            auto kind() const -> ParseErrorKind { return _kind; }
            auto line() const -> std::size_t { return _line; }
            auto column() const -> std::size_t { return _column; }
            /// For syntax errors, what was expected; otherwise the problem.
            auto what_expected() const -> const std::string & { return _what; }
            auto validation() const -> const std::optional<ValidationError> & { return _validation; }
    };

    auto parse_document(std::string_view text) -> Document;

    /// One fact per nonblank line, validated as a nonempty instance over s.
    auto parse_instance(std::string_view text, const Schema & s) -> FactSet;

    auto serialize(const Schema & s) -> std::string;
    auto serialize(const Atom & a) -> std::string;
    auto serialize(const Query & q) -> std::string;
    auto serialize(const Document & d) -> std::string;
    /// One fact per line.
    auto serialize(const FactSet & fs) -> std::string;
    auto serialize(const ResultTuple & t) -> std::string;
    /// One tuple per line, sorted; "<empty>" for the empty set.
    auto serialize(const ResultSet & r) -> std::string;

    auto read_file(const std::string & path) -> std::string;
}
