#include "support/oracles.hpp"

#include <tcsp/error.hpp>
#include <tcsp/formulas.hpp>
#include <tcsp/solvers.hpp>

#include <doctest.h>

#include <random>

using namespace tcsp;

namespace {

const Signature graph{{"E", 2}};

} // namespace

TEST_CASE("instance builders intern variables in first-occurrence order")
{
    Instance inst(graph);
    inst.rel("E", {"y", "x"}).eq("x", "z").neq("y", "z");
    CHECK(inst.variables() == std::vector<std::string>{"y", "x", "z"});
    CHECK(inst.atoms().size() == 3);
    CHECK(inst.has_equalities());
    CHECK(inst.has_disequalities());
    CHECK_FALSE(inst.has_bot());
    CHECK(validate(inst) == Validity::WellFormed);
    inst.bot();
    CHECK(validate(inst) == Validity::ContainsBot);
}

TEST_CASE("validate rejects bad atoms")
{
    Instance wrong_arity(graph);
    wrong_arity.add(RelAtom{0, {0}});
    wrong_arity.variable("x");
    CHECK_THROWS_AS(validate(wrong_arity), Error);

    Instance unknown_symbol(graph);
    unknown_symbol.variable("x");
    unknown_symbol.add(RelAtom{3, {0, 0}});
    CHECK_THROWS_AS(validate(unknown_symbol), Error);

    Instance bad_var(graph);
    bad_var.variable("x");
    bad_var.add(EqAtom{0, 4});
    CHECK_THROWS_AS(validate(bad_var), Error);

    Instance by_name(graph);
    CHECK_THROWS_AS(by_name.rel("F", {"x", "y"}), Error);
}

TEST_CASE("contract_equalities: E(x,y), y=z gives E(x,y) over two variables")
{
    Instance inst(graph);
    inst.rel("E", {"x", "y"}).eq("y", "z");
    const Contraction c = contract_equalities(inst);
    CHECK(c.instance.variable_count() == 2);
    CHECK(c.representative == std::vector<VarId>{0, 1, 1});
    REQUIRE(c.instance.atoms().size() == 1);
    CHECK(std::get<RelAtom>(c.instance.atoms()[0]) == RelAtom{0, {0, 1}});
    CHECK(sampling_index(inst) == 2);
}

TEST_CASE("contract_equalities: x=y, x!=y gives Bot")
{
    Instance inst(graph);
    inst.eq("x", "y").neq("x", "y");
    const Contraction c = contract_equalities(inst);
    REQUIRE(c.instance.atoms().size() == 1);
    CHECK(std::holds_alternative<BotAtom>(c.instance.atoms()[0]));
}

TEST_CASE("contract_equalities keeps the earliest variable of each class")
{
    Instance inst(graph);
    inst.variable("a");
    inst.rel("E", {"b", "c"}).eq("c", "a").eq("d", "b").neq("a", "d");
    const Contraction c = contract_equalities(inst);
    CHECK(c.instance.variables() == std::vector<std::string>{"a", "b"});
    CHECK(c.representative == std::vector<VarId>{0, 1, 0, 1});
    CHECK(c.instance.atoms().size() == 2);
    CHECK(std::get<RelAtom>(c.instance.atoms()[0]) == RelAtom{0, {1, 0}});
    CHECK(std::get<NeqAtom>(c.instance.atoms()[1]) == NeqAtom{0, 1});
}

TEST_CASE("contract_equalities: an isolated declared variable survives")
{
    Instance inst(graph);
    inst.variable("lonely");
    inst.rel("E", {"x", "x"});
    const Contraction c = contract_equalities(inst);
    CHECK(c.instance.variable_count() == 2);
    CHECK(sampling_index(inst) == 2);
}

TEST_CASE("canonical_database")
{
    Instance inst(graph);
    inst.rel("E", {"x", "y"}).rel("E", {"y", "x"}).rel("E", {"x", "y"});
    const Structure d = canonical_database(inst);
    CHECK(d.domain_size() == 2);
    CHECK(d.relation("E").tuples() == std::vector<Tuple>{{0, 1}, {1, 0}});
    CHECK(d.labels() == std::vector<std::string>{"x", "y"});

    Instance with_eq(graph);
    with_eq.eq("x", "y");
    CHECK_THROWS_AS(canonical_database(with_eq), Error);
    Instance with_bot(graph);
    with_bot.bot();
    CHECK_THROWS_AS(canonical_database(with_bot), Error);
}

TEST_CASE("instance_of reads a structure back")
{
    const Structure s(graph, 3, {Relation::from_tuples(2, {{0, 1}, {2, 2}})});
    const Instance inst = instance_of(s);
    CHECK(inst.variable_count() == 3);
    CHECK(inst.atoms().size() == 2);
    CHECK(canonical_database(inst).relation("E") == s.relation("E"));
}

TEST_CASE("property: contraction preserves satisfiability in every target")
{
    std::mt19937_64 rng(3);
    const Signature sig{{"E", 2}, {"U", 1}};
    const std::vector<Structure> targets{
        Structure(sig, 3, {Relation::from_tuples(2, {{0, 1}, {1, 2}, {2, 0}}), Relation::from_tuples(1, {{0}})}),
        Structure(sig, 2, {Relation::from_tuples(2, {{0, 1}, {1, 0}}), Relation::from_tuples(1, {{0}, {1}})}),
        Structure(sig, 3, {Relation::from_tuples(2, {{0, 0}, {0, 1}, {1, 2}}), Relation::from_tuples(1, {{2}})}),
    };
    for (int round = 0; round < 600; ++round) {
        const Instance inst = oracle::random_instance(rng, sig, 5, 6, true, true);
        const Contraction c = contract_equalities(inst);
        CHECK_FALSE(c.instance.has_equalities());
        REQUIRE(c.representative.size() == inst.variable_count());
        for (const auto& t : targets) {
            const bool before = oracle::brute_force_satisfiable(inst, t);
            CHECK(oracle::brute_force_satisfiable(c.instance, t) == before);
            // The witness of the contracted instance lifts back through representative.
            if (before && !c.instance.has_bot()) {
                std::vector<Element> values(c.instance.variable_count(), 0);
                bool found = false;
                const std::size_t n = values.size();
                for (;;) {
                    if (oracle::satisfies(c.instance, t, values)) {
                        found = true;
                        break;
                    }
                    std::size_t i = n;
                    while (i > 0 && ++values[i - 1] == t.domain_size()) {
                        values[i - 1] = 0;
                        --i;
                    }
                    if (i == 0)
                        break;
                }
                REQUIRE(found);
                std::vector<Element> lifted;
                for (auto r : c.representative)
                    lifted.push_back(values[r]);
                CHECK(oracle::satisfies(inst, t, lifted));
            }
        }
    }
}

TEST_CASE("property: canonical database maps into exactly the satisfying targets")
{
    std::mt19937_64 rng(5);
    const Signature sig{{"E", 2}};
    const Structure triangle(sig, 3, {Relation::from_tuples(2, {{0, 1}, {1, 2}, {2, 0}})});
    for (int round = 0; round < 200; ++round) {
        const Instance inst = oracle::random_instance(rng, sig, 4, 5, false, false);
        const Structure d = canonical_database(inst);
        CHECK(d.domain_size() == inst.variable_count());
        const bool sat = oracle::brute_force_satisfiable(inst, triangle);
        // Homomorphisms D -> triangle are exactly satisfying assignments.
        const Instance back = instance_of(d);
        CHECK(oracle::brute_force_satisfiable(back, triangle) == sat);
    }
}
