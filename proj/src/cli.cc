#include <cqmono/cli.hh>
#include <cqmono/engine.hh>
#include <cqmono/monotonicity.hh>
#include <cqmono/oracle.hh>
#include <cqmono/structure.hh>
#include <cqmono/textio.hh>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <functional>
#include <ostream>

using nlohmann::json;
using std::optional;
using std::string;
using std::vector;

namespace cqmono::cli
{
    namespace
    {
        struct Options
        {
            bool json_output = false;
            bool stable = false;
            string document;
            string query, other, instance;
            string lhs, rhs;
            string mode = "strict";
            std::size_t domain = 3, max_facts = 6, fact_cap = 24;
            optional<std::size_t> max_steps, max_results;
            bool count = false;
        };

        auto facts_json(const FactSet & fs) -> json
        {
            json result = json::array();
            for (auto & f : fs)
                result.push_back(serialize(f));
            return result;
        }

        auto witness_json(const optional<WitnessPair> & w) -> json
        {
            if (! w)
                return nullptr;
            return json{{"I", facts_json(w->smaller)}, {"J", facts_json(w->larger)}};
        }

        auto bounds_json(const Bounds & b) -> json
        {
            return json{{"domain", b.domain_size}, {"max_facts", b.max_facts}, {"fact_cap", b.fact_cap}};
        }

        auto indented(const FactSet & fs) -> string
        {
            string result;
            for (auto & f : fs)
                result += "  " + serialize(f) + "\n";
            return result;
        }

        auto compiled_query(const FactSet & body) -> Query
        {
            return Query{"compiled", Head{}, body};
        }

        class Runner
        {
            private:
                const Options & _opts;
                std::ostream & _out;
                std::chrono::steady_clock::time_point _start = std::chrono::steady_clock::now();

                auto bounds() const -> Bounds
                {
                    return Bounds{_opts.domain, _opts.max_facts, _opts.fact_cap};
                }

                auto budget() const -> EvalBudget
                {
                    return EvalBudget{_opts.max_results, _opts.max_steps};
                }

                auto mode() const -> Mode
                {
                    return _opts.mode == "paper" ? Mode::Paper : Mode::Strict;
                }

                auto emit(json report) -> void
                {
                    if (! _opts.stable)
                        report["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - _start).count();
                    _out << report.dump(2) << "\n";
                }

                auto verdict_text(const ContainmentStatement & st, const Verdict & v) -> string
                {
                    string text = "statement: " + st.lhs().name + " <= " + st.rhs().name + "\n";
                    text += "mode: " + string{to_string(v.mode)} + "\n";
                    text += "verdict: " + string{to_string(v.kind)} + "\n";
                    text += "branch: " + string{to_string(v.branch)} + "\n";
                    if (v.compiled_body)
                        text += "compiled: " + serialize(compiled_query(*v.compiled_body)) + "\n";
                    if (v.witness)
                        text += "witness.I:\n" + indented(v.witness->smaller) + "witness.J:\n" + indented(v.witness->larger);
                    if (v.stripped_witness)
                        text += "stripped.witness.I:\n" + indented(v.stripped_witness->smaller)
                            + "stripped.witness.J:\n" + indented(v.stripped_witness->larger);
                    if (v.bounds)
                        text += "bounds: domain=" + std::to_string(v.bounds->domain_size) + " max_facts="
                            + std::to_string(v.bounds->max_facts) + "\n";
                    if (! v.compiled_body && ! v.witness && ! v.stripped_witness)
                        text += "certificate: none (paper mode reports the acceptance bit only)\n";
                    return text;
                }

                auto verdict_json(const ContainmentStatement & st, const Verdict & v) -> json
                {
                    string certificate = v.witness ? "witness" : v.compiled_body ? "compiled" : v.stripped_witness ? "stripped-witness" : "none";
                    return json{
                        {"lhs", st.lhs().name},
                        {"rhs", st.rhs().name},
                        {"mode", to_string(v.mode)},
                        {"verdict", to_string(v.kind)},
                        {"branch", to_string(v.branch)},
                        {"certificate", certificate},
                        {"witness", witness_json(v.witness)},
                        {"stripped_witness", witness_json(v.stripped_witness)},
                        {"compiled", v.compiled_body ? json(serialize(compiled_query(*v.compiled_body))) : json(nullptr)},
                        {"bounds", v.bounds ? bounds_json(*v.bounds) : json(nullptr)}};
                }

            public:
                Runner(const Options & opts, std::ostream & out) :
                    _opts(opts),
                    _out(out)
                {
                }

                auto eval(const Document & doc) -> int
                {
                    auto & q = doc.query(_opts.query);
                    auto instance = parse_instance(read_file(_opts.instance), doc.schema);
                    auto results = evaluate(q, instance, budget());
                    if (_opts.json_output) {
                        json rows = json::array();
                        for (auto & t : results) {
                            json row = json::object();
                            for (auto & [attr, value] : t.entries)
                                row[attr] = value.name();
                            rows.push_back(row);
                        }
                        emit(json{{"command", "eval"}, {"query", q.name}, {"results", rows}});
                    }
                    else
                        _out << serialize(results);
                    return affirmative;
                }

                auto contains(const Document & doc) -> int
                {
                    auto & q1 = doc.query(_opts.query);
                    auto & q2 = doc.query(_opts.other);
                    bool result = cqmono::contains(q1, q2);
                    optional<FactSet> counterexample;
                    if (! result)
                        counterexample = containment_counterexample(doc.schema, q1, q2);

                    if (_opts.json_output)
                        emit(json{{"command", "contains"}, {"lhs", q1.name}, {"rhs", q2.name},
                            {"verdict", result ? "contained" : "not-contained"},
                            {"certificate", counterexample ? facts_json(*counterexample) : json(nullptr)}});
                    else {
                        _out << "contained: " << (result ? "true" : "false") << "\n";
                        if (counterexample)
                            _out << "counterexample:\n" << indented(*counterexample);
                    }
                    return result ? affirmative : negative;
                }

                auto minimize(const Document & doc) -> int
                {
                    auto q = cqmono::minimize(doc.query(_opts.query));
                    if (_opts.json_output)
                        emit(json{{"command", "minimize"}, {"query", q.name}, {"minimized", serialize(q)}});
                    else
                        _out << serialize(q) << "\n";
                    return affirmative;
                }

                auto components(const Document & doc) -> int
                {
                    auto & q = doc.query(_opts.query);
                    auto parts = cqmono::components(q.body);
                    if (_opts.json_output) {
                        json list = json::array();
                        for (auto & c : parts.components)
                            list.push_back(facts_json(c));
                        emit(json{{"command", "components"}, {"query", q.name}, {"components", list},
                            {"connected", is_connected(q.body)}});
                    }
                    else {
                        for (std::size_t i = 0 ; i < parts.size() ; ++i) {
                            _out << "component " << i + 1 << ":";
                            for (auto & f : parts.components[i])
                                _out << " " << serialize(f);
                            _out << "\n";
                        }
                        _out << "connected: " << (is_connected(q.body) ? "true" : "false") << "\n";
                    }
                    return affirmative;
                }

                auto monotone(const Document & doc) -> int
                {
                    auto st = doc.statement(_opts.lhs, _opts.rhs);
                    auto v = analyze(doc.schema, st, bounds(), mode());
                    if (_opts.json_output) {
                        auto report = verdict_json(st, v);
                        report["command"] = "monotone";
                        emit(report);
                    }
                    else
                        _out << verdict_text(st, v);
                    return v.monotone() ? affirmative : negative;
                }

                auto compile(const Document & doc) -> int
                {
                    auto st = doc.statement(_opts.lhs, _opts.rhs);
                    auto v = analyze(doc.schema, st, bounds(), Mode::Strict);
                    if (! v.monotone()) {
                        if (_opts.json_output) {
                            auto report = verdict_json(st, v);
                            report["command"] = "compile";
                            emit(report);
                        }
                        else
                            _out << verdict_text(st, v);
                        return negative;
                    }

                    auto q = compile_to_nonemptiness(doc.schema, st);
                    if (_opts.json_output) {
                        auto report = verdict_json(st, v);
                        report["command"] = "compile";
                        report["compiled"] = serialize(q);
                        emit(report);
                    }
                    else
                        _out << serialize(q) << "\n";
                    return affirmative;
                }

                auto verify(const Document & doc) -> int
                {
                    auto st = doc.statement(_opts.lhs, _opts.rhs);
                    auto b = bounds();
                    auto strict = analyze(doc.schema, st, b, Mode::Strict);
                    auto paper = analyze(doc.schema, st, b, Mode::Paper);
                    auto found = find_monotonicity_counterexample(doc.schema, st, b);

                    auto agreement = [&] (const Verdict & v) -> string {
                        if (v.monotone())
                            return found ? "disagree" : "agree";
                        return found ? "agree" : "unconfirmed";
                    };
                    auto strict_agreement = agreement(strict), paper_agreement = agreement(paper);
                    bool modes_agree = strict.monotone() == paper.monotone();

                    string compiled_check = "n/a";
                    optional<FactSet> mismatch;
                    if (strict.compiled_body) {
                        mismatch = check_compiled_equivalence(doc.schema, st, compiled_query(*strict.compiled_body), b);
                        compiled_check = mismatch ? "failed" : "passed";
                    }

                    bool discrepancy = strict_agreement == "disagree" || paper_agreement == "disagree"
                        || ! modes_agree || mismatch;

                    if (_opts.json_output) {
                        emit(json{
                            {"command", "verify"},
                            {"lhs", st.lhs().name},
                            {"rhs", st.rhs().name},
                            {"bounds", bounds_json(b)},
                            {"strict", verdict_json(st, strict)},
                            {"paper", verdict_json(st, paper)},
                            {"oracle", json{{"counterexample", found.has_value()}, {"witness", witness_json(found)}}},
                            {"strict_vs_oracle", strict_agreement},
                            {"paper_vs_oracle", paper_agreement},
                            {"modes", modes_agree ? "agree" : "disagree"},
                            {"compiled_check", compiled_check},
                            {"compiled_mismatch", mismatch ? facts_json(*mismatch) : json(nullptr)},
                            {"verdict", discrepancy ? "discrepancy" : "consistent"}});
                    }
                    else {
                        _out << "statement: " << st.lhs().name << " <= " << st.rhs().name << "\n";
                        _out << "bounds: domain=" << b.domain_size << " max_facts=" << b.max_facts << "\n";
                        _out << "strict: " << to_string(strict.kind) << " (" << to_string(strict.branch) << ")\n";
                        _out << "paper: " << to_string(paper.kind) << " (" << to_string(paper.branch) << ")\n";
                        _out << "oracle: " << (found ? "counterexample found" : "no counterexample within bounds") << "\n";
                        if (found)
                            _out << "oracle.witness.I:\n" << indented(found->smaller) << "oracle.witness.J:\n" << indented(found->larger);
                        _out << "strict_vs_oracle: " << strict_agreement << "\n";
                        _out << "paper_vs_oracle: " << paper_agreement << "\n";
                        _out << "modes: " << (modes_agree ? "agree" : "disagree") << "\n";
                        _out << "compiled_check: " << compiled_check << "\n";
                        if (mismatch)
                            _out << "compiled_mismatch:\n" << indented(*mismatch);
                        _out << "result: " << (discrepancy ? "discrepancy" : "consistent") << "\n";
                    }
                    return discrepancy ? negative : affirmative;
                }

                auto enumerate(const Document & doc) -> int
                {
                    InstanceEnumeration e{doc.schema, bounds()};
                    std::uint64_t count = 0;
                    vector<FactSet> listed;
                    while (auto i = e.next()) {
                        ++count;
                        if (! _opts.count)
                            listed.push_back(std::move(*i));
                    }

                    if (_opts.json_output) {
                        json report{{"command", "enumerate"}, {"bounds", bounds_json(bounds())}, {"count", count}};
                        if (! _opts.count) {
                            json all = json::array();
                            for (auto & i : listed)
                                all.push_back(facts_json(i));
                            report["instances"] = all;
                        }
                        emit(report);
                    }
                    else if (_opts.count)
                        _out << count << "\n";
                    else
                        for (std::size_t k = 0 ; k < listed.size() ; ++k)
                            _out << (k ? "---\n" : "") << serialize(listed[k]);
                    return affirmative;
                }
        };
    }

    auto run(const vector<string> & args, std::ostream & out, std::ostream & err) -> int
    {
        CLI::App app{"Conjunctive query containment and monotonicity analysis"};
        app.require_subcommand(1);
        app.fallthrough();
        Options opts;
        app.add_flag("--json", opts.json_output, "Structured output");
        app.add_flag("--stable", opts.stable, "Omit timing from structured output");

        auto document_option = [&] (CLI::App * sub) {
            sub->add_option("-d,--document", opts.document, "Document file")->required();
        };
        auto bounds_options = [&] (CLI::App * sub) {
            sub->add_option("--domain", opts.domain, "Oracle domain size")->check(CLI::PositiveNumber);
            sub->add_option("--max-facts", opts.max_facts, "Oracle maximum facts per instance")->check(CLI::PositiveNumber);
            sub->add_option("--fact-cap", opts.fact_cap, "Largest fact universe the oracle accepts");
        };
        auto statement_options = [&] (CLI::App * sub) {
            sub->add_option("--lhs", opts.lhs, "Left-hand query name")->required();
            sub->add_option("--rhs", opts.rhs, "Right-hand query name")->required();
        };

        auto eval = app.add_subcommand("eval", "Evaluate a query on an instance");
        document_option(eval);
        eval->add_option("-q,--query", opts.query)->required();
        eval->add_option("-i,--instance", opts.instance)->required();
        eval->add_option("--max-steps", opts.max_steps, "Backtracking step budget");
        eval->add_option("--max-results", opts.max_results, "Result count budget");

        auto contains = app.add_subcommand("contains", "Decide whether one query is contained in another");
        document_option(contains);
        contains->add_option("-q,--query", opts.query)->required();
        contains->add_option("-r,--rhs", opts.other)->required();

        auto minimize = app.add_subcommand("minimize", "Remove redundant body atoms");
        document_option(minimize);
        minimize->add_option("-q,--query", opts.query)->required();

        auto components = app.add_subcommand("components", "List connected components of a query body");
        document_option(components);
        components->add_option("-q,--query", opts.query)->required();

        auto monotone = app.add_subcommand("monotone", "Decide monotonicity of a containment statement");
        document_option(monotone);
        statement_options(monotone);
        monotone->add_option("--mode", opts.mode)->check(CLI::IsMember({"strict", "paper"}));
        bounds_options(monotone);

        auto compile = app.add_subcommand("compile", "Compile a monotone statement to a nonemptiness query");
        document_option(compile);
        statement_options(compile);
        bounds_options(compile);

        auto verify = app.add_subcommand("verify", "Cross-check both deciders against the oracle");
        document_option(verify);
        statement_options(verify);
        bounds_options(verify);

        auto enumerate = app.add_subcommand("enumerate", "Enumerate bounded instances of the schema");
        document_option(enumerate);
        bounds_options(enumerate);
        enumerate->add_flag("--count", opts.count, "Print only the number of instances");

        try {
            vector<string> reversed(args.rbegin(), args.rend());
            app.parse(reversed);
        }
        catch (const CLI::ParseError & e) {
            auto code = app.exit(e, out, err);
            return code == 0 ? affirmative : usage_error;
        }

        try {
            auto doc = parse_document(read_file(opts.document));
            Runner runner{opts, out};
            vector<std::pair<CLI::App *, std::function<int ()>>> commands{
                {eval, [&] { return runner.eval(doc); }},
                {contains, [&] { return runner.contains(doc); }},
                {minimize, [&] { return runner.minimize(doc); }},
                {components, [&] { return runner.components(doc); }},
                {monotone, [&] { return runner.monotone(doc); }},
                {compile, [&] { return runner.compile(doc); }},
                {verify, [&] { return runner.verify(doc); }},
                {enumerate, [&] { return runner.enumerate(doc); }}};
            for (auto & [sub, action] : commands)
                if (sub->parsed())
                    return action();
            return usage_error;
        }
        catch (const BudgetExceeded & e) {
            err << "budget exceeded: " << e.what() << "\n";
            return resource_limit;
        }
        catch (const BoundsTooLarge & e) {
            err << "bounds too large: " << e.what() << "\n";
            return resource_limit;
        }
        catch (const ParseError & e) {
            err << "parse error: " << e.what() << "\n";
            return usage_error;
        }
        catch (const Error & e) {
            err << "error: " << e.what() << "\n";
            return usage_error;
        }
    }
}
