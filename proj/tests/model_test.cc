#include <cqmono/model.hh>

#include "support/generators.hh"

#include <gtest/gtest.h>

using namespace cqmono;

namespace
{
    auto syms(std::initializer_list<std::string_view> names) -> SymbolSet
    {
        SymbolSet result;
        for (auto & n : names)
            result.emplace(n);
        return result;
    }
}

TEST(Symbol, EqualityIsByName)
{
    Symbol a{"Paris"}, b{std::string{"Par"} + "is"};
    EXPECT_EQ(a, b);
    EXPECT_NE(a, Symbol{"Rome"});
    EXPECT_LT(Symbol{"Brussels"}, Symbol{"Paris"});
}

TEST(Symbol, IdentifierPattern)
{
    EXPECT_TRUE(is_identifier("x"));
    EXPECT_TRUE(is_identifier("_y2"));
    EXPECT_FALSE(is_identifier("2y"));
    EXPECT_FALSE(is_identifier(""));
    EXPECT_FALSE(is_identifier("a-b"));
    EXPECT_TRUE(is_reserved_symbol_name("_f0"));
    EXPECT_TRUE(is_reserved_symbol_name("_f17"));
    EXPECT_FALSE(is_reserved_symbol_name("_f"));
    EXPECT_FALSE(is_reserved_symbol_name("_fx"));
    EXPECT_FALSE(is_reserved_symbol_name("f0"));
}

TEST(Schema, RejectsEmptyAndDuplicates)
{
    EXPECT_THROW((Schema{std::map<Relation, std::size_t>{}}), Error);
    EXPECT_THROW((Schema{{"R", 2}, {"R", 1}}), Error);
    Schema s{{"R", 2}, {"T", 1}};
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(s.arity(Relation{"R"}), 2u);
    EXPECT_FALSE(s.arity(Relation{"S"}));
}

TEST(FactSet, SetSemantics)
{
    FactSet a{make_atom("R", {"a", "b"}), make_atom("T", {"b"}), make_atom("R", {"a", "b"})};
    FactSet b{make_atom("T", {"b"}), make_atom("R", {"a", "b"})};
    EXPECT_EQ(a.size(), 2u);
    EXPECT_EQ(a, b);
    EXPECT_TRUE(a.contains(make_atom("T", {"b"})));
    EXPECT_TRUE(FactSet{make_atom("T", {"b"})}.is_subset_of(a));
    EXPECT_EQ(a.without(make_atom("T", {"b"})), FactSet{make_atom("R", {"a", "b"})});
}

TEST(ActiveDomain, Examples)
{
    EXPECT_EQ(active_domain(FactSet{make_atom("Flights", {"Paris", "Brussels"})}), syms({"Paris", "Brussels"}));
    EXPECT_EQ(active_domain(FactSet{}), SymbolSet{});
    EXPECT_EQ(active_domain(FactSet{make_atom("R", {"a", "b"}), make_atom("T", {"b"})}), syms({"a", "b"}));
    EXPECT_EQ(active_domain(FactSet{make_atom("R", {})}), SymbolSet{});
}

TEST(ActiveDomain, DistributesOverUnion)
{
    std::mt19937 rng{11};
    Schema s{{"R", 2}, {"T", 1}, {"Z", 0}};
    for (int i = 0 ; i < 200 ; ++i) {
        auto a = cqmono::testing::random_instance(rng, s, 4, 4), b = cqmono::testing::random_instance(rng, s, 4, 4);
        auto expected = active_domain(a);
        expected.merge(active_domain(b));
        EXPECT_EQ(active_domain(a.united(b)), expected);
    }
}

TEST(ValidateInstance, Examples)
{
    Schema s{{"R", 2}};
    EXPECT_FALSE(validate_instance(s, FactSet{make_atom("R", {"a", "b"})}));

    auto empty = validate_instance(s, FactSet{});
    ASSERT_TRUE(empty);
    EXPECT_EQ(empty->code, ValidationCode::EmptyInstance);

    auto arity = validate_instance(s, FactSet{make_atom("R", {"a"})});
    ASSERT_TRUE(arity);
    EXPECT_EQ(*arity, (ValidationError{ValidationCode::ArityMismatch, "R", 2, 1}));

    auto unknown = validate_instance(s, FactSet{make_atom("S", {"a"})});
    ASSERT_TRUE(unknown);
    EXPECT_EQ(unknown->code, ValidationCode::UnknownRelation);
    EXPECT_EQ(unknown->relation, "S");
}

TEST(ValidateQuery, EmptyBodyIsFine)
{
    Schema s{{"R", 2}};
    EXPECT_FALSE(validate_query(s, Query{"Q", Head{}, FactSet{}}));
    EXPECT_TRUE(validate_query(s, Query{"Q", Head{}, FactSet{make_atom("R", {"x"})}}));
}

TEST(BuildZ, Examples)
{
    Symbol a{"a"};
    EXPECT_EQ(build_z(Schema{{"R", 2}, {"T", 1}}, a), (FactSet{make_atom("R", {"a", "a"}), make_atom("T", {"a"})}));
    EXPECT_EQ(build_z(Schema{{"R", 0}}, a), FactSet{make_atom("R", {})});
}

TEST(BuildZ, OneFactPerRelationOverASingleSymbol)
{
    std::mt19937 rng{5};
    for (int i = 0 ; i < 100 ; ++i) {
        auto s = cqmono::testing::random_schema(rng, 4, 3);
        auto z = build_z(s, Symbol{"a"});
        EXPECT_EQ(z.size(), s.size());
        EXPECT_EQ(active_domain(z), syms({"a"}));
    }
}

TEST(FreshFact, Examples)
{
    auto t = fresh_fact(Relation{"T"}, 2, syms({"x"}));
    ASSERT_EQ(t.args.size(), 2u);
    EXPECT_NE(t.args[0], t.args[1]);
    EXPECT_NE(t.args[0], Symbol{"x"});
    EXPECT_NE(t.args[1], Symbol{"x"});

    EXPECT_EQ(fresh_fact(Relation{"S"}, 0, {}), make_atom("S", {}));
    EXPECT_EQ(fresh_fact(Relation{"R"}, 3, syms({"a", "b"})), make_atom("R", {"_f0", "_f1", "_f2"}));
}

TEST(FreshFact, AvoidsGivenSymbols)
{
    auto avoid = syms({"_f0", "_f2", "y"});
    auto f = fresh_fact(Relation{"R"}, 4, avoid);
    SymbolSet seen;
    for (auto & a : f.args) {
        EXPECT_FALSE(avoid.contains(a));
        EXPECT_TRUE(seen.insert(a).second);
    }
}

TEST(Head, RejectsDuplicateAttributes)
{
    EXPECT_THROW((Head{{{"A", Symbol{"x"}}, {"A", Symbol{"y"}}}}), Error);
    Head h{{{"B", Symbol{"y"}}, {"A", Symbol{"x"}}}};
    EXPECT_EQ(h.entries().front().first, "A");
    EXPECT_EQ(h.lookup("B"), Symbol{"y"});
}

TEST(Query, UnsafeVariables)
{
    Query q{"Q", Head{{{"A", Symbol{"x"}}, {"B", Symbol{"w"}}}}, FactSet{make_atom("R", {"x", "y"})}};
    EXPECT_EQ(q.unsafe_variables(), syms({"w"}));
    EXPECT_EQ(q.variables(), syms({"w", "x", "y"}));
}

TEST(ContainmentStatement, RequiresEqualSchemes)
{
    Query a{"A", Head{{{"A", Symbol{"x"}}}}, FactSet{}};
    Query b{"B", Head{{{"B", Symbol{"x"}}}}, FactSet{}};
    Query c{"C", Head{{{"A", Symbol{"z"}}}}, FactSet{make_atom("R", {"z"})}};
    EXPECT_THROW((ContainmentStatement{a, b}), SchemeMismatch);
    EXPECT_NO_THROW((ContainmentStatement{a, c}));
}
