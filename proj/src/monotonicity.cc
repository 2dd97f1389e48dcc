#include <cqmono/monotonicity.hh>
#include <cqmono/engine.hh>
#include <cqmono/structure.hh>

#include <algorithm>
#include <set>

using std::optional;
using std::size_t;
using std::string_view;
using std::vector;

namespace cqmono
{
    auto to_string(Mode m) -> string_view
    {
        switch (m) {
            case Mode::Strict: return "strict";
            case Mode::Paper: return "paper";
        }
        return "?";
    }

    auto to_string(VerdictKind k) -> string_view
    {
        switch (k) {
            case VerdictKind::Monotone: return "Monotone";
            case VerdictKind::NotMonotone: return "NotMonotone";
            case VerdictKind::RefutedViaHeadLemma: return "RefutedViaHeadLemma";
            case VerdictKind::BoundedMonotone: return "BoundedMonotone";
        }
        return "?";
    }

    auto to_string(Branch b) -> string_view
    {
        switch (b) {
            case Branch::EmptyLhs: return "empty-lhs";
            case Branch::Contained: return "contained";
            case Branch::MultiAtomLhs: return "multi-atom-lhs";
            case Branch::RepeatedVariable: return "repeated-variable";
            case Branch::SingleRelation: return "single-relation";
            case Branch::TwoRelationPartition: return "two-relation-partition";
            case Branch::TwoRelationUnmapped: return "two-relation-unmapped";
            case Branch::ThreeOrMoreRelations: return "three-or-more-relations";
            case Branch::PaperAccept: return "paper-accept";
            case Branch::PaperReject: return "paper-reject";
            case Branch::HeadStripped: return "head-stripped";
            case Branch::OracleRefuted: return "oracle-refuted";
            case Branch::OracleBounded: return "oracle-bounded";
        }
        return "?";
    }

    namespace
    {
        auto require_empty_heads(const ContainmentStatement & st) -> void
        {
            if (! st.lhs().head.empty() || ! st.rhs().head.empty())
                throw HeadsNotEmpty{};
        }

        auto maps_into(const FactSet & from, const FactSet & into) -> bool
        {
            return find_homomorphism(from, into).has_value();
        }

        auto has_repeated_variable(const Atom & a) -> bool
        {
            std::set<Symbol> seen(a.args.begin(), a.args.end());
            return seen.size() != a.args.size();
        }

        auto monotone(Branch branch, FactSet body) -> Verdict
        {
            return Verdict{.kind = VerdictKind::Monotone, .branch = branch, .compiled_body = std::move(body)};
        }

        auto not_monotone(const ContainmentStatement & st, Branch branch, FactSet smaller, FactSet larger) -> Verdict
        {
            WitnessPair w{std::move(smaller), std::move(larger)};
            if (! witness_is_valid(st, w))
                throw InternalCertificateInvalid{"witness for branch " + std::string{to_string(branch)} + " does not validate"};
            return Verdict{.kind = VerdictKind::NotMonotone, .branch = branch, .witness = std::move(w)};
        }

        auto decide_single_atom(const Schema & s, const ContainmentStatement & st, const Query & lhs) -> Verdict
        {
            const auto & atom = lhs.body[0];
            auto avoid = lhs.variables();

            if (has_repeated_variable(atom)) {
                FactSet fresh{fresh_fact(atom.relation, atom.args.size(), avoid)};
                return not_monotone(st, Branch::RepeatedVariable, fresh, fresh.united(lhs.body));
            }

            auto parts = components(st.rhs().body);

            if (s.size() == 1)
                return monotone(Branch::SingleRelation, st.rhs().body);

            if (s.size() == 2) {
                auto other = std::find_if(s.relations().begin(), s.relations().end(),
                    [&] (auto & entry) { return entry.first != atom.relation; });
                FactSet fresh{fresh_fact(other->first, other->second, avoid)};

                CompilePartition partition;
                for (auto & c : parts.components) {
                    if (maps_into(c, lhs.body))
                        partition.maps_into_lhs.push_back(c);
                    else if (maps_into(c, fresh))
                        partition.maps_into_fresh.push_back(c);
                    else
                        return not_monotone(st, Branch::TwoRelationUnmapped, fresh, fresh.united(lhs.body));
                }

                FactSet compiled;
                for (auto & c : partition.maps_into_fresh)
                    compiled = compiled.united(c);
                auto result = monotone(Branch::TwoRelationPartition, std::move(compiled));
                result.partition = std::move(partition);
                return result;
            }

            // some component fails to map into the lhs body since containment failed
            auto unmapped = std::find_if(parts.components.begin(), parts.components.end(),
                [&] (const FactSet & c) { return ! maps_into(c, lhs.body); });
            if (unmapped == parts.components.end())
                throw InternalCertificateInvalid{"no unmapped component although containment failed"};
            auto t = (*unmapped)[0].relation;
            auto third = std::find_if(s.relations().begin(), s.relations().end(),
                [&] (auto & entry) { return entry.first != atom.relation && entry.first != t; });
            FactSet fresh{fresh_fact(third->first, third->second, avoid)};
            return not_monotone(st, Branch::ThreeOrMoreRelations, fresh, fresh.united(lhs.body));
        }
    }

    auto strip_heads(const ContainmentStatement & st) -> ContainmentStatement
    {
        return ContainmentStatement{
            Query{st.lhs().name, Head{}, st.lhs().body},
            Query{st.rhs().name, Head{}, st.rhs().body}};
    }

    auto decide_boolean_strict(const Schema & s, const ContainmentStatement & st) -> Verdict
    {
        require_empty_heads(st);

        auto lhs = minimize(st.lhs());
        auto verdict = [&] () -> Verdict {
            if (lhs.body.empty())
                return monotone(Branch::EmptyLhs, st.rhs().body);
            if (contains(lhs, st.rhs()))
                return monotone(Branch::Contained, FactSet{});
            if (lhs.body.size() >= 2) {
                // minimality means lhs has no match in any proper subset of its body
                auto smaller = lhs.body.without(lhs.body[lhs.body.size() - 1]);
                return not_monotone(st, Branch::MultiAtomLhs, smaller, lhs.body);
            }
            return decide_single_atom(s, st, lhs);
        }();
        verdict.minimized_lhs = std::move(lhs);
        return verdict;
    }

    auto decide_boolean_paper(const Schema & s, const ContainmentStatement & st) -> bool
    {
        require_empty_heads(st);

        const auto & lhs = st.lhs();
        if (lhs.body.empty())
            return true;
        if (contains(lhs, st.rhs()))
            return true;
        if (s.size() > 2)
            return false;
        return std::any_of(lhs.body.begin(), lhs.body.end(), [&] (const Atom & a) {
            return ! has_repeated_variable(a) && contains(Query{lhs.name, Head{}, FactSet{a}}, lhs);
        });
    }

    auto compile_to_nonemptiness(const Schema & s, const ContainmentStatement & st) -> Query
    {
        auto stripped = strip_heads(st);
        auto verdict = decide_boolean_strict(s, stripped);
        if (verdict.kind != VerdictKind::Monotone)
            throw NotMonotoneInput{"statement " + st.lhs().name + " <= " + st.rhs().name + " is not monotone"};
        return Query{"compiled", Head{}, *verdict.compiled_body};
    }

    auto analyze(const Schema & s, const ContainmentStatement & st, const Bounds & bounds, Mode mode) -> Verdict
    {
        auto decide = [&] (const ContainmentStatement & boolean) -> Verdict {
            if (mode == Mode::Strict)
                return decide_boolean_strict(s, boolean);
            bool accepted = decide_boolean_paper(s, boolean);
            return Verdict{
                .kind = accepted ? VerdictKind::Monotone : VerdictKind::NotMonotone,
                .branch = accepted ? Branch::PaperAccept : Branch::PaperReject};
        };

        if (st.lhs().head.empty()) {
            auto result = decide(st);
            result.mode = mode;
            return result;
        }

        auto inner = decide(strip_heads(st));
        Verdict result{.kind = VerdictKind::BoundedMonotone, .branch = Branch::OracleBounded, .mode = mode};
        result.bounds = bounds;
        result.minimized_lhs = inner.minimized_lhs;

        if (inner.kind == VerdictKind::NotMonotone) {
            result.kind = VerdictKind::RefutedViaHeadLemma;
            result.branch = Branch::HeadStripped;
            result.stripped_witness = inner.witness;
        }
        else {
            result.compiled_body = inner.compiled_body;
            result.partition = inner.partition;
        }

        if (auto direct = find_monotonicity_counterexample(s, st, bounds)) {
            result.kind = VerdictKind::NotMonotone;
            result.branch = Branch::OracleRefuted;
            result.witness = std::move(direct);
            result.compiled_body.reset();
            result.partition.reset();
        }
        return result;
    }
}
