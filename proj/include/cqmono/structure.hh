#pragma once

#include <cqmono/model.hh>

#include <vector>

namespace cqmono
{
    /// Maximal connected subsets of a fact set, ordered by their smallest fact. Components are
    /// pairwise domain-disjoint and their union is the input.
    struct ComponentPartition
    {
        std::vector<FactSet> components;

        auto size() const -> std::size_t { return components.size(); }
    };

    /// Facts are linked when they share a symbol. A zero-arity fact is a component on its own.
    auto components(const FactSet & fs) -> ComponentPartition;

    /// Exactly one component. The empty set is not connected.
    auto is_connected(const FactSet & fs) -> bool;

    /// Connected body and no unsafe head variables, which is sufficient for
    /// Q(I u J) = Q(I) u Q(J) on domain-disjoint I, J.
    auto is_additive_syntactic(const Query & q) -> bool;
}
