#include <cqmono/model.hh>

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <unordered_set>

using std::optional;
using std::size_t;
using std::string;
using std::string_view;
using std::vector;

namespace cqmono
{
    auto detail::intern(string_view name) -> const string *
    {
        static std::unordered_set<string> pool;
        static std::shared_mutex mutex;

        string key{name};
        {
            std::shared_lock lock{mutex};
            if (auto it = pool.find(key); it != pool.end())
                return &*it;
        }
        std::unique_lock lock{mutex};
        return &*pool.insert(std::move(key)).first;
    }

    auto is_identifier(string_view text) -> bool
    {
        if (text.empty())
            return false;
        auto head = [] (char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
        auto tail = [&] (char c) { return head(c) || (c >= '0' && c <= '9'); };
        return head(text.front()) && std::all_of(text.begin() + 1, text.end(), tail);
    }

    auto is_reserved_symbol_name(string_view text) -> bool
    {
        return text.size() > 2 && text.starts_with("_f")
            && std::all_of(text.begin() + 2, text.end(), [] (char c) { return c >= '0' && c <= '9'; });
    }

    Schema::Schema(std::map<Relation, size_t> arities) :
        _arities(std::move(arities))
    {
        if (_arities.empty())
            throw Error{"schema must declare at least one relation"};
    }

    Schema::Schema(std::initializer_list<std::pair<string_view, size_t>> arities)
    {
        for (auto & [name, arity] : arities)
            if (! _arities.emplace(Relation{name}, arity).second)
                throw Error{"relation '" + string{name} + "' declared twice"};
        if (_arities.empty())
            throw Error{"schema must declare at least one relation"};
    }

    auto Schema::arity(const Relation & r) const -> optional<size_t>
    {
        if (auto it = _arities.find(r); it != _arities.end())
            return it->second;
        return std::nullopt;
    }

    auto make_atom(string_view relation, std::initializer_list<string_view> args) -> Atom
    {
        Atom result{Relation{relation}, {}};
        for (auto & a : args)
            result.args.emplace_back(a);
        return result;
    }

    FactSet::FactSet(vector<Atom> facts) :
        _facts(std::move(facts))
    {
        std::sort(_facts.begin(), _facts.end());
        _facts.erase(std::unique(_facts.begin(), _facts.end()), _facts.end());
    }

    FactSet::FactSet(std::initializer_list<Atom> facts) :
        FactSet(vector<Atom>(facts))
    {
    }

    auto FactSet::contains(const Atom & a) const -> bool
    {
        return std::binary_search(_facts.begin(), _facts.end(), a);
    }

    auto FactSet::is_subset_of(const FactSet & other) const -> bool
    {
        return std::includes(other._facts.begin(), other._facts.end(), _facts.begin(), _facts.end());
    }

    auto FactSet::with(const Atom & a) const -> FactSet
    {
        auto facts = _facts;
        facts.push_back(a);
        return FactSet{std::move(facts)};
    }

    auto FactSet::without(const Atom & a) const -> FactSet
    {
        FactSet result;
        result._facts.reserve(_facts.size());
        std::copy_if(_facts.begin(), _facts.end(), std::back_inserter(result._facts), [&] (const Atom & f) { return f != a; });
        return result;
    }

    auto FactSet::united(const FactSet & other) const -> FactSet
    {
        FactSet result;
        std::set_union(_facts.begin(), _facts.end(), other._facts.begin(), other._facts.end(), std::back_inserter(result._facts));
        return result;
    }

    Head::Head(vector<Entry> entries) :
        _entries(std::move(entries))
    {
        std::sort(_entries.begin(), _entries.end(), [] (const Entry & a, const Entry & b) { return a.first < b.first; });
        for (size_t i = 1 ; i < _entries.size() ; ++i)
            if (_entries[i - 1].first == _entries[i].first)
                throw Error{"attribute '" + _entries[i].first + "' occurs twice in head"};
    }

    auto Head::attributes() const -> std::set<string>
    {
        std::set<string> result;
        for (auto & [attr, _] : _entries)
            result.insert(attr);
        return result;
    }

    auto Head::variables() const -> SymbolSet
    {
        SymbolSet result;
        for (auto & [_, var] : _entries)
            result.insert(var);
        return result;
    }

    auto Head::lookup(string_view attribute) const -> optional<Symbol>
    {
        for (auto & [attr, var] : _entries)
            if (attr == attribute)
                return var;
        return std::nullopt;
    }

    auto Query::unsafe_variables() const -> SymbolSet
    {
        auto in_body = active_domain(body);
        SymbolSet result;
        for (auto & v : head.variables())
            if (! in_body.contains(v))
                result.insert(v);
        return result;
    }

    auto Query::variables() const -> SymbolSet
    {
        auto result = active_domain(body);
        result.merge(head.variables());
        return result;
    }

    namespace
    {
        auto describe_scheme(const Query & q) -> string
        {
            string result = "{";
            bool first = true;
            for (auto & a : q.result_scheme()) {
                if (! first)
                    result += ",";
                result += a;
                first = false;
            }
            return result + "}";
        }
    }

    SchemeMismatch::SchemeMismatch(const string & lhs, const string & rhs) :
        Error("result schemes differ: " + lhs + " vs " + rhs)
    {
    }

    ContainmentStatement::ContainmentStatement(Query lhs, Query rhs) :
        _lhs(std::move(lhs)),
        _rhs(std::move(rhs))
    {
        if (_lhs.result_scheme() != _rhs.result_scheme())
            throw SchemeMismatch{describe_scheme(_lhs), describe_scheme(_rhs)};
    }

    auto Homomorphism::operator()(const Symbol & s) const -> optional<Symbol>
    {
        if (auto it = assignment.find(s); it != assignment.end())
            return it->second;
        return std::nullopt;
    }

    auto Homomorphism::apply(const Atom & a) const -> Atom
    {
        Atom result{a.relation, {}};
        result.args.reserve(a.args.size());
        for (auto & v : a.args)
            result.args.push_back(operator()(v).value_or(v));
        return result;
    }

    auto Homomorphism::apply(const FactSet & fs) const -> FactSet
    {
        vector<Atom> facts;
        facts.reserve(fs.size());
        for (auto & f : fs)
            facts.push_back(apply(f));
        return FactSet{std::move(facts)};
    }

    auto Homomorphism::apply(const Head & h) const -> ResultTuple
    {
        ResultTuple result;
        for (auto & [attr, var] : h.entries())
            result.entries.emplace_back(attr, operator()(var).value_or(var));
        return result;
    }

    auto ValidationError::message() const -> string
    {
        switch (code) {
            case ValidationCode::EmptyInstance:
                return "instance is empty";
            case ValidationCode::UnknownRelation:
                return "unknown relation '" + relation + "'";
            case ValidationCode::ArityMismatch:
                return "relation '" + relation + "' has arity " + std::to_string(expected) + " but is used with "
                    + std::to_string(got) + " argument" + (got == 1 ? "" : "s");
        }
        return "invalid input";
    }

    InvalidInput::InvalidInput(ValidationError detail) :
        Error(detail.message()),
        _detail(std::move(detail))
    {
    }

    auto active_domain(const FactSet & fs) -> SymbolSet
    {
        SymbolSet result;
        for (auto & f : fs)
            result.insert(f.args.begin(), f.args.end());
        return result;
    }

    auto validate_atoms(const Schema & s, const FactSet & fs) -> optional<ValidationError>
    {
        for (auto & f : fs) {
            auto arity = s.arity(f.relation);
            if (! arity)
                return ValidationError{ValidationCode::UnknownRelation, f.relation.name()};
            if (*arity != f.args.size())
                return ValidationError{ValidationCode::ArityMismatch, f.relation.name(), *arity, f.args.size()};
        }
        return std::nullopt;
    }

    auto validate_instance(const Schema & s, const FactSet & fs) -> optional<ValidationError>
    {
        if (fs.empty())
            return ValidationError{ValidationCode::EmptyInstance, ""};
        return validate_atoms(s, fs);
    }

    auto validate_query(const Schema & s, const Query & q) -> optional<ValidationError>
    {
        return validate_atoms(s, q.body);
    }

    auto build_z(const Schema & s, const Symbol & a) -> FactSet
    {
        vector<Atom> facts;
        for (auto & [r, arity] : s.relations())
            facts.push_back(Atom{r, vector<Symbol>(arity, a)});
        return FactSet{std::move(facts)};
    }

    auto fresh_symbols(size_t n, const SymbolSet & avoid) -> vector<Symbol>
    {
        vector<Symbol> result;
        result.reserve(n);
        for (size_t i = 0 ; result.size() < n ; ++i) {
            Symbol candidate{"_f" + std::to_string(i)};
            if (! avoid.contains(candidate))
                result.push_back(candidate);
        }
        return result;
    }

    auto fresh_fact(const Relation & relation, size_t arity, const SymbolSet & avoid) -> Atom
    {
        return Atom{relation, fresh_symbols(arity, avoid)};
    }
}
