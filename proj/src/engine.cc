#include <cqmono/engine.hh>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <unordered_map>

using std::optional;
using std::size_t;
using std::uint32_t;
using std::uint64_t;
using std::vector;

namespace cqmono
{
    namespace
    {
        class Bits
        {
            private:
                vector<uint64_t> _words;

            public:
                Bits() = default;

                explicit Bits(size_t n, bool full = false) :
                    _words((n + 63) / 64, full ? ~uint64_t{0} : 0)
                {
                    if (full && n % 64)
                        _words.back() = (uint64_t{1} << (n % 64)) - 1;
                }

                auto set(size_t i) -> void { _words[i / 64] |= uint64_t{1} << (i % 64); }
                auto test(size_t i) const -> bool { return (_words[i / 64] >> (i % 64)) & 1; }

                auto intersect_with(const Bits & other) -> void
                {
                    for (size_t w = 0 ; w < _words.size() ; ++w)
                        _words[w] &= other._words[w];
                }

                auto count() const -> size_t
                {
                    size_t result = 0;
                    for (auto w : _words)
                        result += std::popcount(w);
                    return result;
                }

                auto none() const -> bool
                {
                    return std::all_of(_words.begin(), _words.end(), [] (uint64_t w) { return w == 0; });
                }

                template <typename F_>
                auto for_each(F_ && f) const -> void
                {
                    for (size_t w = 0 ; w < _words.size() ; ++w)
                        for (uint64_t bits = _words[w] ; bits ; bits &= bits - 1)
                            f(w * 64 + std::countr_zero(bits));
                }
        };

        struct RelationIndex
        {
            size_t arity = 0;
            vector<vector<uint32_t>> tuples;
            // by_position[p][value] lists the tuples holding value at position p
            vector<vector<vector<uint32_t>>> by_position;
        };

        // The structure being mapped into, with symbols renumbered densely in name order.
        struct Target
        {
            vector<Symbol> values;
            std::unordered_map<Symbol, uint32_t> ids;
            std::unordered_map<Relation, RelationIndex> relations;

            Target(const FactSet & facts, const SymbolSet & extra_domain)
            {
                auto domain = active_domain(facts);
                domain.insert(extra_domain.begin(), extra_domain.end());
                values.assign(domain.begin(), domain.end());
                for (uint32_t i = 0 ; i < values.size() ; ++i)
                    ids.emplace(values[i], i);

                for (auto & f : facts) {
                    auto & rel = relations[f.relation];
                    if (rel.tuples.empty()) {
                        rel.arity = f.args.size();
                        rel.by_position.assign(rel.arity, vector<vector<uint32_t>>(values.size()));
                    }
                    vector<uint32_t> tuple;
                    tuple.reserve(f.args.size());
                    for (auto & a : f.args)
                        tuple.push_back(ids.at(a));
                    for (size_t p = 0 ; p < tuple.size() ; ++p)
                        rel.by_position[p][tuple[p]].push_back(rel.tuples.size());
                    rel.tuples.push_back(std::move(tuple));
                }
            }

            auto find(const Symbol & s) const -> optional<uint32_t>
            {
                if (auto it = ids.find(s); it != ids.end())
                    return it->second;
                return std::nullopt;
            }
        };

        struct BodyAtom
        {
            const RelationIndex * relation;
            vector<uint32_t> vars;
        };

        constexpr uint32_t unassigned = ~uint32_t{0};

        // Backtracking over body variables: most constrained variable first, forward checking
        // against the per-position indexes of the target.
        class Searcher
        {
            private:
                const Target & _target;
                EvalBudget _budget;
                size_t _steps = 0;

                vector<Symbol> _vars;
                vector<BodyAtom> _atoms;
                vector<vector<size_t>> _atoms_of_var;
                vector<uint32_t> _assignment;
                vector<Bits> _domains;
                bool _impossible = false;

                auto support(const BodyAtom & atom, vector<Bits> & supports, bool & any) const -> void
                {
                    const auto & rel = *atom.relation;
                    const vector<uint32_t> * candidates = nullptr;
                    for (size_t p = 0 ; p < atom.vars.size() ; ++p) {
                        auto value = _assignment[atom.vars[p]];
                        if (value != unassigned) {
                            auto & list = rel.by_position[p][value];
                            if (! candidates || list.size() < candidates->size())
                                candidates = &list;
                        }
                    }

                    auto consider = [&] (const vector<uint32_t> & tuple) {
                        for (size_t p = 0 ; p < atom.vars.size() ; ++p) {
                            auto value = _assignment[atom.vars[p]];
                            if (value != unassigned && value != tuple[p])
                                return;
                            // a repeated unassigned variable must see equal values
                            for (size_t q = 0 ; q < p ; ++q)
                                if (atom.vars[q] == atom.vars[p] && tuple[q] != tuple[p])
                                    return;
                        }
                        any = true;
                        for (size_t p = 0 ; p < atom.vars.size() ; ++p)
                            if (_assignment[atom.vars[p]] == unassigned)
                                supports[p].set(tuple[p]);
                    };

                    if (candidates)
                        for (auto t : *candidates)
                            consider(rel.tuples[t]);
                    else
                        for (auto & t : rel.tuples)
                            consider(t);
                }

                auto propagate(size_t atom_index) -> bool
                {
                    auto & atom = _atoms[atom_index];
                    vector<Bits> supports(atom.vars.size(), Bits{_target.values.size()});
                    bool any = false;
                    support(atom, supports, any);
                    if (! any)
                        return false;
                    for (size_t p = 0 ; p < atom.vars.size() ; ++p) {
                        auto v = atom.vars[p];
                        if (_assignment[v] == unassigned) {
                            _domains[v].intersect_with(supports[p]);
                            if (_domains[v].none())
                                return false;
                        }
                    }
                    return true;
                }

                auto choose(const vector<bool> & active) const -> optional<uint32_t>
                {
                    optional<uint32_t> best;
                    size_t best_size = 0, best_degree = 0;
                    for (uint32_t v = 0 ; v < _vars.size() ; ++v) {
                        if (! active[v] || _assignment[v] != unassigned)
                            continue;
                        auto size = _domains[v].count();
                        auto degree = _atoms_of_var[v].size();
                        if (! best || size < best_size || (size == best_size && degree > best_degree)) {
                            best = v;
                            best_size = size;
                            best_degree = degree;
                        }
                    }
                    return best;
                }

            public:
                Searcher(const FactSet & body, const Target & target, const EvalBudget & budget) :
                    _target(target),
                    _budget(budget)
                {
                    auto vars = active_domain(body);
                    _vars.assign(vars.begin(), vars.end());
                    std::unordered_map<Symbol, uint32_t> var_ids;
                    for (uint32_t i = 0 ; i < _vars.size() ; ++i)
                        var_ids.emplace(_vars[i], i);

                    _atoms_of_var.resize(_vars.size());
                    for (auto & a : body) {
                        auto rel = target.relations.find(a.relation);
                        if (rel == target.relations.end() || rel->second.arity != a.args.size()) {
                            _impossible = true;
                            continue;
                        }
                        BodyAtom atom{&rel->second, {}};
                        for (auto & v : a.args)
                            atom.vars.push_back(var_ids.at(v));
                        for (auto v : atom.vars)
                            if (_atoms_of_var[v].empty() || _atoms_of_var[v].back() != _atoms.size())
                                _atoms_of_var[v].push_back(_atoms.size());
                        _atoms.push_back(std::move(atom));
                    }

                    _assignment.assign(_vars.size(), unassigned);
                    _domains.assign(_vars.size(), Bits{target.values.size(), true});
                }

                auto variables() const -> const vector<Symbol> & { return _vars; }

                auto index_of(const Symbol & s) const -> optional<uint32_t>
                {
                    auto it = std::lower_bound(_vars.begin(), _vars.end(), s);
                    if (it != _vars.end() && *it == s)
                        return it - _vars.begin();
                    return std::nullopt;
                }

                // Fixes variables before search and establishes initial consistency. False
                // means no homomorphism exists.
                auto initialise(const vector<std::pair<uint32_t, uint32_t>> & pinned) -> bool
                {
                    if (_impossible)
                        return false;
                    for (auto [v, value] : pinned) {
                        if (_assignment[v] != unassigned && _assignment[v] != value)
                            return false;
                        _assignment[v] = value;
                    }
                    for (size_t a = 0 ; a < _atoms.size() ; ++a)
                        if (! propagate(a))
                            return false;
                    return true;
                }

                auto value(uint32_t v) const -> uint32_t { return _assignment[v]; }

                // Assigns every active variable. on_complete returns true to stop the search;
                // the assignment is then left in place.
                auto solve(const vector<bool> & active, const std::function<bool ()> & on_complete) -> bool
                {
                    auto var = choose(active);
                    if (! var)
                        return on_complete();

                    bool stop = false;
                    auto domain = _domains[*var];
                    domain.for_each([&] (size_t value) {
                        if (stop)
                            return;
                        if (_budget.max_steps && ++_steps > *_budget.max_steps)
                            throw BudgetExceeded{"homomorphism search exceeded " + std::to_string(*_budget.max_steps) + " steps"};

                        auto saved = _domains;
                        _assignment[*var] = value;
                        bool ok = true;
                        for (auto a : _atoms_of_var[*var])
                            if (! propagate(a)) {
                                ok = false;
                                break;
                            }
                        if (ok && solve(active, on_complete)) {
                            stop = true;
                            return;
                        }
                        _assignment[*var] = unassigned;
                        _domains = std::move(saved);
                    });
                    return stop;
                }

                auto snapshot() const { return std::pair{_assignment, _domains}; }

                auto restore(std::pair<vector<uint32_t>, vector<Bits>> state) -> void
                {
                    _assignment = std::move(state.first);
                    _domains = std::move(state.second);
                }
        };

        auto product_over(const vector<Symbol> & unsafe, const vector<Symbol> & domain, ResultTuple base,
            const Head & head, ResultSet & out, const EvalBudget & budget) -> void
        {
            vector<size_t> choice(unsafe.size(), 0);
            if (! unsafe.empty() && domain.empty())
                return;
            while (true) {
                ResultTuple t = base;
                for (auto & [attr, var] : head.entries()) {
                    auto u = std::lower_bound(unsafe.begin(), unsafe.end(), var);
                    if (u != unsafe.end() && *u == var)
                        t.entries.emplace_back(attr, domain[choice[u - unsafe.begin()]]);
                }
                std::sort(t.entries.begin(), t.entries.end());
                out.insert(std::move(t));
                if (budget.max_results && out.size() > *budget.max_results)
                    throw BudgetExceeded{"evaluation produced more than " + std::to_string(*budget.max_results) + " results"};

                size_t i = 0;
                for ( ; i < choice.size() ; ++i) {
                    if (++choice[i] < domain.size())
                        break;
                    choice[i] = 0;
                }
                if (i == choice.size())
                    return;
            }
        }

        auto find_homomorphism_over(const FactSet & body, const Target & target, const Homomorphism & pinned,
            const EvalBudget & budget) -> optional<Homomorphism>
        {
            Searcher searcher{body, target, budget};
            vector<std::pair<uint32_t, uint32_t>> fixed;
            for (auto & [from, to] : pinned.assignment) {
                auto v = searcher.index_of(from);
                if (! v)
                    continue;
                auto value = target.find(to);
                if (! value)
                    return std::nullopt;
                fixed.emplace_back(*v, *value);
            }
            if (! searcher.initialise(fixed))
                return std::nullopt;

            vector<bool> all(searcher.variables().size(), true);
            if (! searcher.solve(all, [] { return true; }))
                return std::nullopt;

            Homomorphism result = pinned;
            for (uint32_t v = 0 ; v < searcher.variables().size() ; ++v)
                result.assignment.insert_or_assign(searcher.variables()[v], target.values[searcher.value(v)]);
            return result;
        }

        auto evaluate_target(const Query & q, const Target & target, const EvalBudget & budget) -> ResultSet
        {
            ResultSet results;
            Searcher searcher{q.body, target, budget};
            if (! searcher.initialise({}))
                return results;

            auto & vars = searcher.variables();
            vector<bool> in_head(vars.size(), false), rest(vars.size(), false);
            vector<Symbol> unsafe;
            for (auto & var : q.head.variables()) {
                if (auto v = searcher.index_of(var))
                    in_head[*v] = true;
                else
                    unsafe.push_back(var);
            }
            for (size_t v = 0 ; v < vars.size() ; ++v)
                rest[v] = ! in_head[v];

            // Enumerate distinct assignments to head variables, then ask only whether the
            // remaining variables can be extended.
            searcher.solve(in_head, [&] {
                auto state = searcher.snapshot();
                bool extends = searcher.solve(rest, [] { return true; });
                searcher.restore(std::move(state));
                if (extends) {
                    ResultTuple base;
                    for (auto & [attr, var] : q.head.entries())
                        if (auto v = searcher.index_of(var))
                            base.entries.emplace_back(attr, target.values[searcher.value(*v)]);
                    product_over(unsafe, target.values, std::move(base), q.head, results, budget);
                }
                return false;
            });
            return results;
        }
    }

    auto find_homomorphism(const FactSet & body, const FactSet & target, const Homomorphism & pinned,
        const EvalBudget & budget) -> optional<Homomorphism>
    {
        return find_homomorphism_over(body, Target{target, {}}, pinned, budget);
    }

    auto evaluate(const Query & q, const FactSet & i, const EvalBudget & budget) -> ResultSet
    {
        return evaluate_target(q, Target{i, {}}, budget);
    }

    auto evaluate_over_domain(const Query & q, const FactSet & facts, const SymbolSet & extra_domain,
        const EvalBudget & budget) -> ResultSet
    {
        return evaluate_target(q, Target{facts, extra_domain}, budget);
    }

    auto is_nonempty(const Query & q, const FactSet & i, const EvalBudget & budget) -> bool
    {
        if (! q.unsafe_variables().empty() && active_domain(i).empty())
            return false;
        return find_homomorphism(q.body, i, {}, budget).has_value();
    }

    auto canonical_head(const Query & q) -> ResultTuple
    {
        ResultTuple result;
        for (auto & [attr, var] : q.head.entries())
            result.entries.emplace_back(attr, var);
        return result;
    }

    auto contains(const Query & q1, const Query & q2) -> bool
    {
        ContainmentStatement checked{q1, q2};

        // Pin q2's head onto q1's head, then map the body of q2 into the canonical database.
        Homomorphism pinned;
        for (auto & [attr, var] : q2.head.entries()) {
            auto target = *q1.head.lookup(attr);
            auto [it, inserted] = pinned.assignment.emplace(var, target);
            if (! inserted && it->second != target)
                return false;
        }
        return find_homomorphism_over(q2.body, Target{q1.body, q1.head.variables()}, pinned, {}).has_value();
    }

    auto equivalent(const Query & q1, const Query & q2) -> bool
    {
        return contains(q1, q2) && contains(q2, q1);
    }

    namespace
    {
        auto refutes(const Query & q1, const Query & q2, const FactSet & instance) -> bool
        {
            auto r1 = evaluate(q1, instance), r2 = evaluate(q2, instance);
            return ! std::includes(r2.begin(), r2.end(), r1.begin(), r1.end());
        }
    }

    auto containment_counterexample(const Schema & s, const Query & q1, const Query & q2) -> optional<FactSet>
    {
        ContainmentStatement checked{q1, q2};

        auto unsafe = q1.unsafe_variables();
        if (q1.body.empty() && unsafe.empty()) {
            for (auto & [r, arity] : s.relations()) {
                FactSet candidate{fresh_fact(r, arity, q1.variables())};
                if (refutes(q1, q2, candidate))
                    return candidate;
            }
            return std::nullopt;
        }

        if (unsafe.empty())
            return refutes(q1, q2, q1.body) ? optional{q1.body} : std::nullopt;

        // Each unsafe head variable needs some fact to sit in; try every relation/position.
        vector<std::pair<Relation, size_t>> slots;
        for (auto & [r, arity] : s.relations())
            for (size_t p = 0 ; p < arity ; ++p)
                slots.emplace_back(r, p);
        if (slots.empty())
            return std::nullopt;

        vector<Symbol> unsafe_list(unsafe.begin(), unsafe.end());
        vector<size_t> choice(unsafe_list.size(), 0);
        while (true) {
            auto avoid = q1.variables();
            auto facts = q1.body;
            for (size_t i = 0 ; i < unsafe_list.size() ; ++i) {
                auto & [r, position] = slots[choice[i]];
                auto fact = fresh_fact(r, *s.arity(r), avoid);
                avoid.insert(fact.args.begin(), fact.args.end());
                fact.args[position] = unsafe_list[i];
                facts = facts.with(fact);
            }
            if (refutes(q1, q2, facts))
                return facts;

            size_t i = 0;
            for ( ; i < choice.size() ; ++i) {
                if (++choice[i] < slots.size())
                    break;
                choice[i] = 0;
            }
            if (i == choice.size())
                return std::nullopt;
        }
    }

    auto is_redundant_atom(const Query & q, const Atom & a) -> bool
    {
        if (! q.body.contains(a))
            throw AtomNotInBody{"atom is not in the body of query '" + q.name + "'"};
        Query smaller{q.name, q.head, q.body.without(a)};
        return contains(smaller, q);
    }

    auto minimize(const Query & q) -> Query
    {
        Query result = q;
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto a = result.body.facts().rbegin() ; a != result.body.facts().rend() ; ++a) {
                if (is_redundant_atom(result, *a)) {
                    result.body = result.body.without(*a);
                    changed = true;
                    break;
                }
            }
        }
        return result;
    }
}
