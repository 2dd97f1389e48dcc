#include <cqmono/engine.hh>
#include <cqmono/oracle.hh>
#include <cqmono/structure.hh>
#include <cqmono/textio.hh>

#include "support/generators.hh"

#include <gtest/gtest.h>

using namespace cqmono;

TEST(Components, Examples)
{
    FactSet two{make_atom("R", {"x", "y"}), make_atom("T", {"z"})};
    auto p = components(two);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p.components[0], FactSet{make_atom("R", {"x", "y"})});
    EXPECT_EQ(p.components[1], FactSet{make_atom("T", {"z"})});

    FactSet chain{make_atom("R", {"x", "y"}), make_atom("R", {"y", "z"})};
    EXPECT_EQ(components(chain).size(), 1u);
    EXPECT_TRUE(is_connected(chain));

    EXPECT_EQ(components(FactSet{}).size(), 0u);
    EXPECT_FALSE(is_connected(FactSet{}));
}

TEST(Components, ZeroArityFactsStandAlone)
{
    FactSet fs{make_atom("Z", {}), make_atom("R", {"x", "y"}), make_atom("W", {})};
    EXPECT_EQ(components(fs).size(), 3u);
    EXPECT_TRUE(is_connected(FactSet{make_atom("Z", {})}));
}

TEST(Components, PartitionInvariants)
{
    std::mt19937 rng{21};
    Schema s{{"R", 2}, {"T", 1}, {"Z", 0}, {"W", 3}};
    for (int n = 0 ; n < 500 ; ++n) {
        auto fs = cqmono::testing::random_instance(rng, s, 6, 6);
        auto p = components(fs);

        FactSet all;
        for (std::size_t i = 0 ; i < p.size() ; ++i) {
            EXPECT_FALSE(p.components[i].empty());
            EXPECT_TRUE(is_connected(p.components[i]));
            all = all.united(p.components[i]);
            if (i > 0) {
                EXPECT_LT(p.components[i - 1][0], p.components[i][0]);
            }
            for (std::size_t j = i + 1 ; j < p.size() ; ++j) {
                auto a = active_domain(p.components[i]), b = active_domain(p.components[j]);
                for (auto & x : a)
                    EXPECT_FALSE(b.contains(x));
            }
        }
        EXPECT_EQ(all, fs);
        EXPECT_EQ(components(fs).components, p.components);
    }
}

TEST(Additivity, SyntacticExamples)
{
    auto doc = parse_document(
        "schema R/2, T/1. "
        "query Conn(A=x) :- R(x,y), T(y). "
        "query Split(A=x) :- R(x,y), T(z). "
        "query Top() :- true. "
        "query Unsafe(A=x, B=w) :- R(x,y).");
    EXPECT_TRUE(is_additive_syntactic(doc.query("Conn")));
    EXPECT_FALSE(is_additive_syntactic(doc.query("Split")));
    EXPECT_FALSE(is_additive_syntactic(doc.query("Top")));
    EXPECT_FALSE(is_additive_syntactic(doc.query("Unsafe")));
}

TEST(Additivity, HoldsOnDomainDisjointEnumeratedPairs)
{
    Schema s{{"R", 2}, {"T", 1}};
    std::mt19937 rng{22};
    // instances over d1,d2 and the same instances renamed to e1,e2 are domain-disjoint
    auto rename = [] (const FactSet & fs) {
        std::vector<Atom> out;
        for (auto a : fs) {
            for (auto & x : a.args)
                x = Symbol{"e" + std::string{x.name()}.substr(1)};
            out.push_back(std::move(a));
        }
        return FactSet{std::move(out)};
    };
    auto instances = enumerate_instances(s, Bounds{2, 2});
    int checked = 0;
    for (int n = 0 ; n < 100 ; ++n) {
        auto q = cqmono::testing::random_query(rng, s, {3, 3, 2, 1}, cqmono::testing::random_attributes(rng, 2), "Q", "v");
        if (! is_additive_syntactic(q))
            continue;
        ++checked;
        for (std::size_t k = 0 ; k < instances.size() ; k += 7) {
            auto & i = instances[k];
            auto j = rename(instances[(k * 5 + 3) % instances.size()]);
            auto separate = evaluate(q, i);
            separate.merge(evaluate(q, j));
            EXPECT_EQ(evaluate(q, i.united(j)), separate) << serialize(q);
        }
    }
    EXPECT_GT(checked, 10);
}
