#pragma once

#include <cqmono/model.hh>

#include <cstddef>
#include <optional>

namespace cqmono
{
    /// Limits for a single search. Unset fields mean unlimited.
    struct EvalBudget
    {
        std::optional<std::size_t> max_results;
        std::optional<std::size_t> max_steps;
    };

    class BudgetExceeded : public Error
    {
        public:
            using Error::Error;
    };

    class AtomNotInBody : public Error
    {
        public:
            using Error::Error;
    };

    /// Some extension f of pinned with f(body) a subset of target, or nullopt if there is
    /// none. Pinned entries for symbols outside body are carried through unchanged.
    auto find_homomorphism(const FactSet & body, const FactSet & target, const Homomorphism & pinned = {},
        const EvalBudget & budget = {}) -> std::optional<Homomorphism>;

    /// Q(I): every f o H_Q for homomorphisms f from q into i. Head variables missing from the
    /// body range over the active domain of i.
    auto evaluate(const Query & q, const FactSet & i, const EvalBudget & budget = {}) -> ResultSet;

    /// As evaluate, but over a structure whose domain is active_domain(facts) plus extra_domain.
    /// With extra_domain holding a query's head variables this is that query's canonical database.
    auto evaluate_over_domain(const Query & q, const FactSet & facts, const SymbolSet & extra_domain,
        const EvalBudget & budget = {}) -> ResultSet;

    /// Q(I) is nonempty. Cheaper than evaluate for boolean use.
    auto is_nonempty(const Query & q, const FactSet & i, const EvalBudget & budget = {}) -> bool;

    /// H_Q read as a tuple, with its variables as data elements.
    auto canonical_head(const Query & q) -> ResultTuple;

    /// q1 is contained in q2 on every instance: H_q1 is in q2 evaluated over the canonical
    /// database of q1. Throws SchemeMismatch if the result schemes differ.
    auto contains(const Query & q1, const Query & q2) -> bool;

    auto equivalent(const Query & q1, const Query & q2) -> bool;

    /// A nonempty instance over s on which q1(I) is not a subset of q2(I), built from the
    /// canonical database of q1. When q1 is unsafe or has an empty body the canonical database
    /// is completed with fresh facts; the first completion that refutes is returned.
    auto containment_counterexample(const Schema & s, const Query & q1, const Query & q2) -> std::optional<FactSet>;

    /// Removing a leaves a query equivalent to q. Throws AtomNotInBody.
    auto is_redundant_atom(const Query & q, const Atom & a) -> bool;

    /// Drops redundant atoms one at a time, largest first, until none is left.
    auto minimize(const Query & q) -> Query;
}
