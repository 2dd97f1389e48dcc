#pragma once

// Exhaustive reference implementations used only by tests. They enumerate every assignment
// of variables to domain elements and share no code with the engine's search.

#include <cqmono/model.hh>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace cqmono::testing
{
    template <typename F_>
    auto for_each_assignment(const std::vector<Symbol> & vars, const std::vector<Symbol> & domain, F_ && f) -> void
    {
        if (! vars.empty() && domain.empty())
            return;
        std::vector<std::size_t> digits(vars.size(), 0);
        while (true) {
            Homomorphism h;
            for (std::size_t i = 0 ; i < vars.size() ; ++i)
                h.assignment.insert_or_assign(vars[i], domain[digits[i]]);
            if (! f(h))
                return;
            std::size_t i = 0;
            for ( ; i < digits.size() ; ++i) {
                if (++digits[i] < domain.size())
                    break;
                digits[i] = 0;
            }
            if (i == digits.size())
                return;
        }
    }

    inline auto maps_into(const Homomorphism & h, const FactSet & body, const FactSet & target) -> bool
    {
        return std::all_of(body.begin(), body.end(), [&] (const Atom & a) { return target.contains(h.apply(a)); });
    }

    inline auto brute_homomorphisms(const FactSet & body, const FactSet & target) -> std::vector<Homomorphism>
    {
        auto vs = active_domain(body), ds = active_domain(target);
        std::vector<Symbol> vars(vs.begin(), vs.end()), domain(ds.begin(), ds.end());
        std::vector<Homomorphism> result;
        for_each_assignment(vars, domain, [&] (const Homomorphism & h) {
            if (maps_into(h, body, target))
                result.push_back(h);
            return true;
        });
        return result;
    }

    inline auto brute_evaluate(const Query & q, const FactSet & i, const SymbolSet & extra = {}) -> ResultSet
    {
        auto vs = q.variables();
        auto ds = active_domain(i);
        ds.insert(extra.begin(), extra.end());
        std::vector<Symbol> vars(vs.begin(), vs.end()), domain(ds.begin(), ds.end());
        ResultSet result;
        for_each_assignment(vars, domain, [&] (const Homomorphism & h) {
            if (maps_into(h, q.body, i))
                result.insert(h.apply(q.head));
            return true;
        });
        return result;
    }

    inline auto brute_truth(const ContainmentStatement & st, const FactSet & i) -> bool
    {
        auto r1 = brute_evaluate(st.lhs(), i), r2 = brute_evaluate(st.rhs(), i);
        return std::includes(r2.begin(), r2.end(), r1.begin(), r1.end());
    }

    // Containment straight from the definition's canonical database: H_q1 among the results
    // of q2 over B_q1, with q1's head variables in the domain.
    inline auto brute_contains(const Query & q1, const Query & q2) -> bool
    {
        ResultTuple h1;
        for (auto & [attr, var] : q1.head.entries())
            h1.entries.emplace_back(attr, var);
        return brute_evaluate(q2, q1.body, q1.head.variables()).contains(h1);
    }
}
