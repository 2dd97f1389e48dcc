#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cqmono
{
    class Error : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    namespace detail
    {
        // Returns a pointer to the pooled copy of name. Pointers stay valid for the
        // lifetime of the process; the pool is safe to use from several threads.
        auto intern(std::string_view name) -> const std::string *;
    }

    /// An identifier compared by name. Copies are a single pointer.
    template <typename Tag_>
    class Interned
    {
        private:
            const std::string * _name;

        public:
            explicit Interned(std::string_view name) :
                _name(detail::intern(name))
            {
            }

            auto name() const -> const std::string &
            {
                return *_name;
            }

            friend auto operator==(const Interned & a, const Interned & b) -> bool
            {
                return a._name == b._name;
            }

            friend auto operator<=>(const Interned & a, const Interned & b) -> std::strong_ordering
            {
                if (a._name == b._name)
                    return std::strong_ordering::equal;
                return *a._name <=> *b._name;
            }

            auto hash() const -> std::size_t
            {
                return std::hash<const std::string *>{}(_name);
            }
    };

    struct SymbolTag;
    struct RelationTag;

    /// Variables and data elements share one type: a query body can be read as an instance.
    using Symbol = Interned<SymbolTag>;
    using Relation = Interned<RelationTag>;

    auto is_identifier(std::string_view text) -> bool;

    /// True for names of the form _f<digits>, which are reserved for generated symbols.
    auto is_reserved_symbol_name(std::string_view text) -> bool;
}

template <typename Tag_>
struct std::hash<cqmono::Interned<Tag_>>
{
    auto operator()(const cqmono::Interned<Tag_> & s) const noexcept -> std::size_t
    {
        return s.hash();
    }
};

namespace cqmono
{
    using SymbolSet = std::set<Symbol>;

    /// Relation names with arities. Never empty.
    class Schema
    {
        private:
            std::map<Relation, std::size_t> _arities;

        public:
            explicit Schema(std::map<Relation, std::size_t> arities);
            Schema(std::initializer_list<std::pair<std::string_view, std::size_t>> arities);

            auto arity(const Relation & r) const -> std::optional<std::size_t>;
            auto relations() const -> const std::map<Relation, std::size_t> & { return _arities; }
            auto size() const -> std::size_t { return _arities.size(); }

            friend auto operator==(const Schema &, const Schema &) -> bool = default;
    };

    /// R(v1,...,vn). The same type is used for query atoms and instance facts.
    struct Atom
    {
        Relation relation;
        std::vector<Symbol> args;

        friend auto operator==(const Atom &, const Atom &) -> bool = default;
        friend auto operator<=>(const Atom &, const Atom &) = default;
    };

    auto make_atom(std::string_view relation, std::initializer_list<std::string_view> args) -> Atom;

    /// A finite set of atoms, kept sorted by relation then arguments. May be empty; instances
    /// crossing an external boundary are checked with validate_instance.
    class FactSet
    {
        private:
            std::vector<Atom> _facts;

        public:
            FactSet() = default;
            explicit FactSet(std::vector<Atom> facts);
            FactSet(std::initializer_list<Atom> facts);

            auto begin() const { return _facts.begin(); }
            auto end() const { return _facts.end(); }
            auto size() const -> std::size_t { return _facts.size(); }
            auto empty() const -> bool { return _facts.empty(); }
            auto facts() const -> const std::vector<Atom> & { return _facts; }
            auto operator[](std::size_t i) const -> const Atom & { return _facts[i]; }

            auto contains(const Atom & a) const -> bool;
            auto is_subset_of(const FactSet & other) const -> bool;

            auto with(const Atom & a) const -> FactSet;
            auto without(const Atom & a) const -> FactSet;
            auto united(const FactSet & other) const -> FactSet;

            friend auto operator==(const FactSet &, const FactSet &) -> bool = default;
            friend auto operator<=>(const FactSet &, const FactSet &) = default;
    };

    /// Named-perspective head: attribute -> variable, kept sorted by attribute name.
    class Head
    {
        public:
            using Entry = std::pair<std::string, Symbol>;

        private:
            std::vector<Entry> _entries;

        public:
            Head() = default;

            /// Throws Error if an attribute occurs twice.
            explicit Head(std::vector<Entry> entries);

            auto entries() const -> const std::vector<Entry> & { return _entries; }
            auto empty() const -> bool { return _entries.empty(); }
            auto size() const -> std::size_t { return _entries.size(); }
            auto attributes() const -> std::set<std::string>;
            auto variables() const -> SymbolSet;
            auto lookup(std::string_view attribute) const -> std::optional<Symbol>;

            friend auto operator==(const Head &, const Head &) -> bool = default;
    };

    struct Query
    {
        std::string name;
        Head head;
        FactSet body;

        friend auto operator==(const Query &, const Query &) -> bool = default;

        /// Head variables that do not occur in the body.
        auto unsafe_variables() const -> SymbolSet;
        auto variables() const -> SymbolSet;
        auto result_scheme() const -> std::set<std::string> { return head.attributes(); }
    };

    class SchemeMismatch : public Error
    {
        public:
            explicit SchemeMismatch(const std::string & lhs, const std::string & rhs);
    };

    /// lhs <= rhs over queries with the same result scheme.
    class ContainmentStatement
    {
        private:
            Query _lhs, _rhs;

        public:
            /// Throws SchemeMismatch unless both heads have the same attribute set.
            ContainmentStatement(Query lhs, Query rhs);

            auto lhs() const -> const Query & { return _lhs; }
            auto rhs() const -> const Query & { return _rhs; }

            friend auto operator==(const ContainmentStatement &, const ContainmentStatement &) -> bool = default;
    };

    /// A tuple over a result scheme, sorted by attribute. The empty tuple is ().
    struct ResultTuple
    {
        std::vector<std::pair<std::string, Symbol>> entries;

        friend auto operator==(const ResultTuple &, const ResultTuple &) -> bool = default;
        friend auto operator<=>(const ResultTuple &, const ResultTuple &) = default;
    };

    using ResultSet = std::set<ResultTuple>;

    struct Homomorphism
    {
        std::map<Symbol, Symbol> assignment;

        auto operator()(const Symbol & s) const -> std::optional<Symbol>;
        auto apply(const Atom & a) const -> Atom;
        auto apply(const FactSet & fs) const -> FactSet;
        auto apply(const Head & h) const -> ResultTuple;

        friend auto operator==(const Homomorphism &, const Homomorphism &) -> bool = default;
    };

    enum class ValidationCode
    {
        EmptyInstance,
        UnknownRelation,
        ArityMismatch
    };

    struct ValidationError
    {
        ValidationCode code;
        std::string relation;
        std::size_t expected = 0;
        std::size_t got = 0;

        auto message() const -> std::string;

        friend auto operator==(const ValidationError &, const ValidationError &) -> bool = default;
    };

    class InvalidInput : public Error
    {
        private:
            ValidationError _detail;

        public:
            explicit InvalidInput(ValidationError detail);
            auto detail() const -> const ValidationError & { return _detail; }
    };

    auto active_domain(const FactSet & fs) -> SymbolSet;

    /// Every atom's relation is declared and has the declared arity. Empty sets pass.
    auto validate_atoms(const Schema & s, const FactSet & fs) -> std::optional<ValidationError>;

    /// As validate_atoms, and additionally rejects the empty set.
    auto validate_instance(const Schema & s, const FactSet & fs) -> std::optional<ValidationError>;

    auto validate_query(const Schema & s, const Query & q) -> std::optional<ValidationError>;

    /// One fact R(a,...,a) per relation of the schema.
    auto build_z(const Schema & s, const Symbol & a) -> FactSet;

    /// The n smallest symbols _f0, _f1, ... not in avoid.
    auto fresh_symbols(std::size_t n, const SymbolSet & avoid) -> std::vector<Symbol>;

    /// relation(y1,...,yn) with pairwise-distinct symbols outside avoid.
    auto fresh_fact(const Relation & relation, std::size_t arity, const SymbolSet & avoid) -> Atom;
}
