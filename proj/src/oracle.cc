#include <cqmono/oracle.hh>
#include <cqmono/engine.hh>

#include <algorithm>
#include <bit>
#include <unordered_map>

using std::optional;
using std::size_t;
using std::uint64_t;
using std::vector;

namespace cqmono
{
    namespace
    {
        auto universe_size(const Schema & s, const Bounds & b) -> optional<uint64_t>
        {
            uint64_t total = 0;
            for (auto & [_, arity] : s.relations()) {
                uint64_t n = 1;
                for (size_t i = 0 ; i < arity ; ++i) {
                    n *= b.domain_size;
                    if (n > b.fact_cap)
                        return std::nullopt;
                }
                total += n;
                if (total > b.fact_cap)
                    return std::nullopt;
            }
            return total;
        }

        auto check_bounds(const Schema & s, const Bounds & b) -> size_t
        {
            if (b.domain_size < 1 || b.max_facts < 1)
                throw Error{"bounds must allow at least one symbol and one fact"};
            if (b.fact_cap > 63)
                throw BoundsTooLarge{"fact cap above 63 is not supported"};
            auto n = universe_size(s, b);
            if (! n)
                throw BoundsTooLarge{"fact universe exceeds the cap of " + std::to_string(b.fact_cap) + " facts"};
            return *n;
        }

        auto boolean_truth(const ContainmentStatement & st, const FactSet & i) -> bool
        {
            if (st.lhs().head.empty())
                return ! is_nonempty(st.lhs(), i) || is_nonempty(st.rhs(), i);
            auto r1 = evaluate(st.lhs(), i);
            if (r1.empty())
                return true;
            auto r2 = evaluate(st.rhs(), i);
            return std::includes(r2.begin(), r2.end(), r1.begin(), r1.end());
        }

        // Truth values by mask; dense for small universes.
        class TruthTable
        {
            private:
                vector<signed char> _dense;
                std::unordered_map<uint64_t, bool> _sparse;

            public:
                explicit TruthTable(size_t universe)
                {
                    if (universe <= 24)
                        _dense.assign(size_t{1} << universe, -1);
                }

                auto set(uint64_t mask, bool value) -> void
                {
                    if (_dense.empty())
                        _sparse.emplace(mask, value);
                    else
                        _dense[mask] = value;
                }

                auto get(uint64_t mask) const -> signed char
                {
                    if (! _dense.empty())
                        return _dense[mask];
                    auto it = _sparse.find(mask);
                    return it == _sparse.end() ? -1 : it->second;
                }
        };
    }

    auto fact_universe(const Schema & s, const Bounds & b) -> vector<Atom>
    {
        check_bounds(s, b);
        vector<Symbol> domain;
        for (size_t i = 1 ; i <= b.domain_size ; ++i)
            domain.emplace_back("d" + std::to_string(i));

        vector<Atom> result;
        for (auto & [r, arity] : s.relations()) {
            vector<size_t> digits(arity, 0);
            while (true) {
                Atom fact{r, {}};
                for (auto d : digits)
                    fact.args.push_back(domain[d]);
                result.push_back(std::move(fact));

                size_t i = arity;
                while (i > 0 && ++digits[i - 1] == b.domain_size)
                    digits[--i] = 0;
                if (i == 0)
                    break;
            }
        }
        std::sort(result.begin(), result.end());
        return result;
    }

    InstanceEnumeration::InstanceEnumeration(const Schema & s, const Bounds & b) :
        _universe(fact_universe(s, b)),
        _max_facts(b.max_facts)
    {
    }

    auto InstanceEnumeration::instance(uint64_t mask) const -> FactSet
    {
        vector<Atom> facts;
        for (uint64_t bits = mask ; bits ; bits &= bits - 1)
            facts.push_back(_universe[std::countr_zero(bits)]);
        return FactSet{std::move(facts)};
    }

    auto InstanceEnumeration::next_mask() -> optional<uint64_t>
    {
        const uint64_t end = uint64_t{1} << _universe.size();
        // adding the lowest set bit skips only masks with even more bits
        while (_next < end && static_cast<size_t>(std::popcount(_next)) > _max_facts)
            _next += _next & (~_next + 1);
        if (_next >= end)
            return std::nullopt;
        return _next++;
    }

    auto InstanceEnumeration::next() -> optional<FactSet>
    {
        if (auto mask = next_mask())
            return instance(*mask);
        return std::nullopt;
    }

    auto enumerate_instances(const Schema & s, const Bounds & b) -> vector<FactSet>
    {
        vector<FactSet> result;
        InstanceEnumeration e{s, b};
        while (auto i = e.next())
            result.push_back(std::move(*i));
        return result;
    }

    auto count_instances(const Schema & s, const Bounds & b) -> uint64_t
    {
        auto n = check_bounds(s, b);
        uint64_t total = 0, choose = 1;
        for (uint64_t k = 1 ; k <= std::min<uint64_t>(n, b.max_facts) ; ++k) {
            choose = choose * (n - k + 1) / k;
            total += choose;
        }
        return total;
    }

    auto statement_truth(const ContainmentStatement & st, const FactSet & i) -> bool
    {
        if (i.empty())
            throw InvalidInput{ValidationError{ValidationCode::EmptyInstance, ""}};
        return boolean_truth(st, i);
    }

    auto find_statement_counterexample(const Schema & s, const ContainmentStatement & st, const Bounds & b)
        -> optional<FactSet>
    {
        InstanceEnumeration e{s, b};
        while (auto i = e.next())
            if (! boolean_truth(st, *i))
                return i;
        return std::nullopt;
    }

    auto find_monotonicity_counterexample(const Schema & s, const ContainmentStatement & st, const Bounds & b)
        -> optional<WitnessPair>
    {
        InstanceEnumeration e{s, b};
        TruthTable truth{e.universe().size()};

        // every proper subset of a mask precedes it, so its truth is already known
        while (auto mask = e.next_mask()) {
            bool holds = boolean_truth(st, e.instance(*mask));
            truth.set(*mask, holds);
            if (holds)
                continue;
            for (uint64_t sub = (0 - *mask) & *mask ; sub != *mask ; sub = (sub - *mask) & *mask)
                if (truth.get(sub) == 1)
                    return WitnessPair{e.instance(sub), e.instance(*mask)};
        }
        return std::nullopt;
    }

    auto check_compiled_equivalence(const Schema & s, const ContainmentStatement & st, const Query & compiled,
        const Bounds & b) -> optional<FactSet>
    {
        if (! compiled.head.empty())
            throw Error{"compiled query must have an empty head"};
        InstanceEnumeration e{s, b};
        while (auto i = e.next())
            if (boolean_truth(st, *i) != is_nonempty(compiled, *i))
                return i;
        return std::nullopt;
    }

    auto witness_is_valid(const ContainmentStatement & st, const WitnessPair & w) -> bool
    {
        return ! w.smaller.empty() && w.smaller.is_subset_of(w.larger)
            && boolean_truth(st, w.smaller) && ! boolean_truth(st, w.larger);
    }
}
