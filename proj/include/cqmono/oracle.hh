#pragma once

#include <cqmono/model.hh>

#include <cstdint>
#include <optional>
#include <vector>

namespace cqmono
{
    /// Limits for brute-force enumeration over the symbols d1..d<domain_size>.
    struct Bounds
    {
        std::size_t domain_size = 3;
        std::size_t max_facts = 6;
        /// Largest fact universe the enumerator accepts.
        std::size_t fact_cap = 24;

        friend auto operator==(const Bounds &, const Bounds &) -> bool = default;
    };

    class BoundsTooLarge : public Error
    {
        public:
            using Error::Error;
    };

    /// I is a subset of J, the statement holds on I and fails on J.
    struct WitnessPair
    {
        FactSet smaller;
        FactSet larger;

        friend auto operator==(const WitnessPair &, const WitnessPair &) -> bool = default;
    };

    /// Every fact over the bounded domain, sorted. Throws BoundsTooLarge past the cap.
    auto fact_universe(const Schema & s, const Bounds & b) -> std::vector<Atom>;

    /// Nonempty subsets of the fact universe with at most max_facts facts, in ascending
    /// bitmask order (bit i is fact i of the universe).
    class InstanceEnumeration
    {
        private:
            std::vector<Atom> _universe;
            std::size_t _max_facts;
            std::uint64_t _next = 1;

        public:
            InstanceEnumeration(const Schema & s, const Bounds & b);

            auto universe() const -> const std::vector<Atom> & { return _universe; }
            auto instance(std::uint64_t mask) const -> FactSet;

            /// The next mask in order, or nullopt once exhausted.
            auto next_mask() -> std::optional<std::uint64_t>;
            auto next() -> std::optional<FactSet>;
    };

    auto enumerate_instances(const Schema & s, const Bounds & b) -> std::vector<FactSet>;

    /// Closed-form count of what InstanceEnumeration emits.
    auto count_instances(const Schema & s, const Bounds & b) -> std::uint64_t;

    /// Q1(I) is a subset of Q2(I). Throws InvalidInput on an empty instance.
    auto statement_truth(const ContainmentStatement & st, const FactSet & i) -> bool;

    /// First instance in enumeration order on which the statement is false.
    auto find_statement_counterexample(const Schema & s, const ContainmentStatement & st, const Bounds & b)
        -> std::optional<FactSet>;

    /// First J in enumeration order, paired with its first proper nonempty subset I, such that
    /// the statement holds on I but not on J.
    auto find_monotonicity_counterexample(const Schema & s, const ContainmentStatement & st, const Bounds & b)
        -> std::optional<WitnessPair>;

    /// First instance on which the statement's truth differs from nonemptiness of compiled.
    auto check_compiled_equivalence(const Schema & s, const ContainmentStatement & st, const Query & compiled,
        const Bounds & b) -> std::optional<FactSet>;

    /// Checks a witness directly: I is a nonempty subset of J, true on I, false on J.
    auto witness_is_valid(const ContainmentStatement & st, const WitnessPair & w) -> bool;
}
