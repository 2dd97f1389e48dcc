#pragma once

#include <cqmono/model.hh>
#include <cqmono/oracle.hh>

#include <optional>
#include <string_view>
#include <vector>

namespace cqmono
{
    enum class Mode
    {
        /// Case analysis with the component-partition condition for two-relation schemas.
        Strict,
        /// The published nondeterministic algorithm, determinised by trying every atom.
        Paper
    };

    enum class VerdictKind
    {
        Monotone,
        NotMonotone,
        /// The head-stripped statement is not monotone, hence neither is the original.
        RefutedViaHeadLemma,
        /// The head-stripped statement is monotone and the oracle found no counterexample.
        BoundedMonotone
    };

    /// Which step of the decision produced the verdict.
    enum class Branch
    {
        EmptyLhs,
        Contained,
        MultiAtomLhs,
        RepeatedVariable,
        SingleRelation,
        TwoRelationPartition,
        TwoRelationUnmapped,
        ThreeOrMoreRelations,
        PaperAccept,
        PaperReject,
        HeadStripped,
        OracleRefuted,
        OracleBounded
    };

    auto to_string(Mode m) -> std::string_view;
    auto to_string(VerdictKind k) -> std::string_view;
    auto to_string(Branch b) -> std::string_view;

    /// Components of the rhs body for a two-relation schema, split by where they map.
    struct CompilePartition
    {
        /// Components mapping into the fresh fact over the other relation; kept in the compiled body.
        std::vector<FactSet> maps_into_fresh;
        /// Components mapping into the minimised lhs body; implied by it and dropped.
        std::vector<FactSet> maps_into_lhs;
    };

    struct Verdict
    {
        VerdictKind kind;
        Branch branch;
        Mode mode = Mode::Strict;

        /// Monotone (strict), or BoundedMonotone: the statement is equivalent to ()<-compiled_body being nonempty.
        std::optional<FactSet> compiled_body = {};
        /// NotMonotone: a witness for the statement that was analysed.
        std::optional<WitnessPair> witness = {};
        /// RefutedViaHeadLemma, or NotMonotone reached through head stripping: witness for the stripped statement.
        std::optional<WitnessPair> stripped_witness = {};
        std::optional<CompilePartition> partition = {};
        std::optional<Query> minimized_lhs = {};
        /// Set whenever the oracle was consulted.
        std::optional<Bounds> bounds = {};

        auto monotone() const -> bool { return kind == VerdictKind::Monotone || kind == VerdictKind::BoundedMonotone; }
    };

    class HeadsNotEmpty : public Error
    {
        public:
            HeadsNotEmpty() : Error("statement has nonempty heads; strip them first") { }
    };

    class InternalCertificateInvalid : public Error
    {
        public:
            using Error::Error;
    };

    class NotMonotoneInput : public Error
    {
        public:
            using Error::Error;
    };

    /// Both heads replaced by (), bodies unchanged.
    auto strip_heads(const ContainmentStatement & st) -> ContainmentStatement;

    /// Exact decision for statements with empty heads; every verdict carries a certificate
    /// (compiled body or witness pair). Throws HeadsNotEmpty.
    auto decide_boolean_strict(const Schema & s, const ContainmentStatement & st) -> Verdict;

    /// Acceptance bit of the published algorithm. Throws HeadsNotEmpty.
    auto decide_boolean_paper(const Schema & s, const ContainmentStatement & st) -> bool;

    /// ()<-B with nonemptiness equivalent to the statement. Heads are stripped first if present.
    /// Throws NotMonotoneInput unless the strict decision is Monotone.
    auto compile_to_nonemptiness(const Schema & s, const ContainmentStatement & st) -> Query;

    /// Full analysis for any statement. Headed statements go through head stripping and the
    /// oracle, so they are never reported plain Monotone.
    auto analyze(const Schema & s, const ContainmentStatement & st, const Bounds & bounds, Mode mode) -> Verdict;
}
