// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "support/oracles.hpp"

#include <tcsp/error.hpp>
#include <tcsp/polymorphisms.hpp>
#include <tcsp/sampling.hpp>
#include <tcsp/solvers.hpp>
#include <tcsp/text_io.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>

using namespace tcsp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int number, const Outcome& o, double seconds)
{
    std::printf("criterion %d: %s  %s (%.2f s)\n", number, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!o.pass)
        ++failures;
}

// A limit of 0 means the criterion has no time bound.
template <class F>
void run(int number, double limit_seconds, F&& criterion)
{
    const auto start = Clock::now();
    Outcome o;
    try {
        o = criterion();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = seconds_since(start);
    if (o.pass && limit_seconds > 0 && elapsed >= limit_seconds) {
        o.pass = false;
        o.detail += " [over the " + std::to_string(static_cast<int>(limit_seconds)) + " s limit]";
    }
    report(number, o, elapsed);
}

// Corpus shared by criteria 2 and 7.
struct Corpus {
    std::vector<Instance> plain; // Rel and Eq atoms only
    std::vector<Instance> with_neq;
};

Corpus robot_corpus()
{
    const Signature sig = oracle::robot_signature();
    Corpus corpus;
    oracle::for_each_subset(oracle::all_atoms(sig, 3, true, false), 3,
        [&](const std::vector<Atom>& atoms) { corpus.plain.push_back(oracle::instance_from(sig, atoms)); });
    oracle::for_each_subset(oracle::all_atoms(sig, 3, true, true), 3, [&](const std::vector<Atom>& atoms) {
        if (std::any_of(atoms.begin(), atoms.end(), [](const Atom& a) { return std::holds_alternative<NeqAtom>(a); }))
            corpus.with_neq.push_back(oracle::instance_from(sig, atoms));
    });
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 500; ++i)
        corpus.plain.push_back(oracle::random_instance(rng, sig, 6, 8, true, false));
    for (int i = 0; i < 500; ++i)
        corpus.with_neq.push_back(oracle::random_instance(rng, sig, 6, 8, true, true));
    return corpus;
}

Outcome criterion1()
{
    const auto family = oracle::robot_family();
    for (std::size_t n = 1; n <= 16; ++n) {
        const std::size_t size = family_size(family, n);
        if (size != n * 2 * n)
            return {false, "n=" + std::to_string(n) + ": size " + std::to_string(size)};
    }
    return {true, "family_size = n*2n for n = 1..16"};
}

Outcome criterion2(const Corpus& corpus)
{
    const auto family = oracle::robot_family();
    std::size_t checked = 0, sat = 0;
    for (const auto* part : {&corpus.plain, &corpus.with_neq})
        for (const auto& inst : *part) {
            const bool expected = oracle::robot_satisfiable(inst);
            if (solve_via_sampling(family, inst).satisfiable != expected)
                return {false, "disagreement on: " + format_instance(inst)};
            ++checked;
            sat += expected ? 1 : 0;
        }
    return {true, std::to_string(checked) + " instances (" + std::to_string(sat) + " satisfiable), 0 disagreements"};
}

Outcome criterion3()
{
    std::ostringstream detail;
    bool pass = true;
    for (const auto& family :
        {dense_order_sampling(), colored_partition_sampling(2), successor_sampling(), alternating_cycles_sampling()}) {
        const auto r = verify_equality_matching(family, 3, 3, 2);
        detail << family.name() << " " << r.checked << (r.ok ? " ok; " : " COUNTEREXAMPLE; ");
        if (!r.ok) {
            pass = false;
            detail << "[" << format_instance(r.counterexample->instance) << "] ";
        }
    }
    return {pass, detail.str()};
}

Outcome criterion4()
{
    const auto family = succ2col_sampling();
    for (std::size_t n = 1; n <= 10; ++n) {
        const Structure& s = family.generate(n)->front();
        const std::size_t size = s.domain_size();
        if (size != (std::size_t{1} << n))
            return {false, "n=" + std::to_string(n) + ": size " + std::to_string(size)};
        std::vector<std::optional<Element>> next(size);
        for (auto t : s.relation("succ"))
            next[t[0]] = t[1];
        std::vector<int> start_of(size, -1);
        for (Element a = 0; a < size; ++a) {
            std::size_t word = 0;
            Element e = a;
            bool chain = true;
            for (std::size_t i = 0; i < n; ++i) {
                const bool p0 = s.relation("p0").contains({e});
                const bool p1 = s.relation("p1").contains({e});
                if (p0 == p1)
                    return {false, "element without exactly one colour"};
                word = 2 * word + (p1 ? 1 : 0);
                if (i + 1 < n) {
                    if (!next[e]) {
                        chain = false;
                        break;
                    }
                    e = *next[e];
                }
            }
            if (!chain)
                continue;
            if (start_of[word] != -1)
                return {false, "word realised twice at n=" + std::to_string(n)};
            start_of[word] = static_cast<int>(a);
        }
        if (std::count(start_of.begin(), start_of.end(), -1) != 0)
            return {false, "some word missing at n=" + std::to_string(n)};
    }
    return {true, "2^n elements, all 2^n words at distinct starts, n = 1..10"};
}

Outcome criterion5()
{
    const auto family = alternating_cycles_sampling();
    for (std::size_t n = 1; n <= 20; ++n)
        if (family_size(family, n) > 3 * n * n)
            return {false, "n=" + std::to_string(n) + ": size " + std::to_string(family_size(family, n))};
    for (std::size_t n = 1; n <= 12; ++n) {
        const Structure& s = family.generate(n)->front();
        const auto f = majority_eq_operation(s.domain_size());
        if (!check_polymorphism(f, s) || !is_near_unanimity(f))
            return {false, "majority_eq fails at n=" + std::to_string(n)};
    }
    std::mt19937_64 rng(5);
    std::size_t sat = 0;
    for (int i = 0; i < 500; ++i) {
        const Instance inst = oracle::random_instance(rng, family.signature(), 6, 7, true, false);
        const auto samples = family.generate(sampling_index(inst));
        for (const auto& s : *samples) {
            const bool hom = hom_search(inst, s).satisfiable;
            const bool pc = establish_23_consistency(inst, s) == Consistency::Consistent;
            if (hom != pc)
                return {false, "(2,3)-consistency disagrees on: " + format_instance(inst)};
            sat += hom ? 1 : 0;
        }
    }
    return {true, "size <= 3n^2 (n <= 20); majority_eq NU polymorphism (n <= 12); 500 instances (" +
                      std::to_string(sat) + " satisfiable), 0 disagreements"};
}

Outcome criterion6()
{
    const auto family = dense_order_sampling(
        {order_relation("lt"), {"min3", 3, parse_formula("(x1=x2 & !(x3<x2)) | (x1=x3 & !(x2<x3))")}});
    const auto pool = oracle::all_atoms(family.signature(), 3, true, false);
    std::size_t checked = 0;
    for (std::size_t n = 1; n <= 4; ++n) {
        const Structure& s = family.generate(n)->front();
        for (std::size_t k = 1; k <= 3; ++k)
            if (!find_totally_symmetric_polymorphism(s, k))
                return {false, "no totally symmetric polymorphism of arity " + std::to_string(k)};
        std::string bad;
        oracle::for_each_subset(pool, 3, [&](const std::vector<Atom>& atoms) {
            if (!bad.empty())
                return;
            const Instance inst = oracle::instance_from(family.signature(), atoms);
            if (arc_consistency(inst, s).has_value() != hom_search(inst, s).satisfiable)
                bad = format_instance(inst);
            ++checked;
        });
        if (!bad.empty())
            return {false, "AC and search disagree at n=" + std::to_string(n) + " on: " + bad};
    }
    const Signature graph{{"E", 2}};
    const Structure k2(graph, 2, {Relation::from_tuples(2, {{0, 1}, {1, 0}})});
    Instance triangle(graph);
    triangle.rel("E", {"a", "b"}).rel("E", {"b", "c"}).rel("E", {"c", "a"});
    const bool ac = arc_consistency(triangle, k2).has_value();
    const bool hom = hom_search(triangle, k2).satisfiable;
    const bool ts = find_totally_symmetric_polymorphism(k2, 2).has_value();
    if (!ac || hom || ts)
        return {false, "negative control: ac=" + std::to_string(ac) + " hom=" + std::to_string(hom) +
                           " ts2=" + std::to_string(ts)};
    return {true, std::to_string(checked) + " instances agree; triangle/K2: AC passes, search rejects, no TS arity 2"};
}

Outcome criterion7(const Corpus& corpus)
{
    const auto family = oracle::robot_family();
    std::size_t checked = 0;
    for (const auto& inst : corpus.plain) {
        if (solve_ac_over_sampling(family, inst).satisfiable != solve_via_sampling(family, inst).satisfiable)
            return {false, "AC pipeline disagrees on: " + format_instance(inst)};
        ++checked;
    }
    return {true, std::to_string(checked) + " Neq-free instances, 0 disagreements"};
}

Outcome criterion8()
{
    const auto theory = no_jhp_sampling();
    const auto generic = sampling_from_decider("generic", theory.signature(), theory.decider(), 2);
    // Independent count: one variable, atoms O, P, Q, I(x,x). I(x,x) is
    // unsatisfiable, P and Q together are unsatisfiable.
    enum { O, P, Q, I };
    using Content = std::vector<std::vector<Tuple>>;
    std::set<Content> expected;
    for (unsigned mask = 0; mask < 16; ++mask) {
        if ((mask >> I & 1) || ((mask >> P & 1) && (mask >> Q & 1)))
            continue;
        Content rels;
        for (int r = 0; r < 3; ++r)
            rels.push_back(mask >> r & 1 ? std::vector<Tuple>{{0}} : std::vector<Tuple>{});
        rels.push_back({});
        expected.insert(rels);
    }
    const auto samples = generic.generate(1);
    std::set<Content> got;
    for (const auto& s : *samples) {
        if (s.domain_size() != 1)
            return {false, "sample of size " + std::to_string(s.domain_size())};
        Content rels;
        for (const auto& r : s.relations())
            rels.push_back(r.tuples());
        got.insert(rels);
    }
    if (samples->size() != expected.size() || got != expected)
        return {false, std::to_string(samples->size()) + " samples, expected " + std::to_string(expected.size())};

    std::vector<Atom> pool{RelAtom{O, {0}}, RelAtom{P, {0}}, RelAtom{Q, {0}}, RelAtom{I, {0, 0}}, EqAtom{0, 0}};
    std::size_t checked = 0;
    std::string bad;
    oracle::for_each_subset(pool, pool.size(), [&](const std::vector<Atom>& atoms) {
        Instance inst = oracle::instance_from(theory.signature(), atoms);
        if (inst.variable_count() == 0)
            inst.variable("x1");
        if (solve_via_sampling(generic, inst).satisfiable != theory.decide(inst))
            bad = format_instance(inst);
        ++checked;
    });
    if (!bad.empty())
        return {false, "verdict differs on: " + bad};
    return {true, std::to_string(samples->size()) + " canonical databases; " + std::to_string(checked) +
                      " one-variable instances agree"};
}

// Planted robot instance over exactly n variables: a hidden placement of the
// variables (rank, colour), atoms true in it, and for unsatisfiable draws one
// contradiction (an lt-cycle or a two-coloured variable).
Instance planted_instance(std::mt19937_64& rng, std::size_t n, bool satisfiable)
{
    const Signature sig = oracle::robot_signature();
    std::uniform_int_distribution<std::size_t> rank_dist(0, n - 1);
    std::vector<std::size_t> rank(n);
    std::vector<int> colour_of_rank(n);
    for (auto& c : colour_of_rank)
        c = static_cast<int>(rng() % 2);
    for (auto& r : rank)
        r = rank_dist(rng);
    std::vector<Atom> atoms;
    std::uniform_int_distribution<VarId> var(0, n - 1);
    for (VarId v = 0; v < n; ++v)
        atoms.push_back(RelAtom{colour_of_rank[rank[v]] == 0 ? std::size_t{2} : std::size_t{3}, {v}});
    for (std::size_t made = 0; made < 2 * n;) {
        const VarId a = var(rng), b = var(rng), c = var(rng);
        if (rng() % 3 == 0) {
            if (rank[a] == std::min(rank[b], rank[c])) {
                atoms.push_back(RelAtom{1, {a, b, c}});
                ++made;
            }
        } else if (rank[a] < rank[b]) {
            atoms.push_back(RelAtom{0, {a, b}});
            ++made;
        }
    }
    if (!satisfiable) {
        const VarId a = var(rng);
        if (rng() % 2 == 0) {
            VarId b = var(rng);
            while (b == a)
                b = var(rng);
            atoms.push_back(RelAtom{0, {a, b}});
            atoms.push_back(RelAtom{0, {b, a}});
        } else {
            atoms.push_back(RelAtom{2, {a}});
            atoms.push_back(RelAtom{3, {a}});
        }
    }
    std::shuffle(atoms.begin(), atoms.end(), rng);
    Instance inst(sig);
    for (VarId v = 0; v < n; ++v)
        inst.variable("x" + std::to_string(v + 1));
    for (auto& a : atoms)
        inst.add(a);
    return inst;
}

Outcome criterion9()
{
    const auto family = oracle::robot_family();
    const std::vector<std::size_t> sizes{4, 8, 16, 32};
    std::vector<double> mean_ms;
    std::ostringstream detail;
    std::mt19937_64 rng(99);
    for (std::size_t n : sizes) {
        std::vector<Instance> batch;
        std::vector<bool> planted_sat;
        for (int i = 0; i < 20; ++i) {
            planted_sat.push_back(i % 5 < 3);
            batch.push_back(planted_instance(rng, n, planted_sat.back()));
        }
        // Warm the sample cache and the target index.
        for (const auto& inst : batch)
            if (sampling_index(inst) != n)
                return {false, "planted instance has " + std::to_string(sampling_index(inst)) + " variables"};
        (void)solve_via_sampling(family, batch.front());
        const auto start = Clock::now();
        for (std::size_t i = 0; i < batch.size(); ++i)
            if (solve_via_sampling(family, batch[i]).satisfiable != planted_sat[i])
                return {false, "wrong verdict at n=" + std::to_string(n)};
        mean_ms.push_back(1000.0 * seconds_since(start) / static_cast<double>(batch.size()));
        detail << "n=" << n << ": " << mean_ms.back() << " ms; ";
    }
    bool pass = true;
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        const double slope = std::log(std::max(mean_ms[i], 1e-3) / std::max(mean_ms[i - 1], 1e-3)) /
                             std::log(static_cast<double>(sizes[i]) / static_cast<double>(sizes[i - 1]));
        detail << "slope " << sizes[i - 1] << "->" << sizes[i] << " = " << slope << "; ";
        pass = pass && slope <= 3.5;
    }
    return {pass, detail.str()};
}

} // namespace

// Without arguments every criterion runs; otherwise only the listed numbers.
int main(int argc, char** argv)
{
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));
    auto wanted = [&](int n) { return selected.empty() || selected.count(n) > 0; };
    const auto total = Clock::now();
    if (wanted(1))
        run(1, 1, criterion1);
    Corpus corpus;
    if (wanted(2) || wanted(7))
        corpus = robot_corpus();
    if (wanted(2))
        run(2, 60, [&] { return criterion2(corpus); });
    if (wanted(3))
        run(3, 0, criterion3);
    if (wanted(4))
        run(4, 10, criterion4);
    if (wanted(5))
        run(5, 0, criterion5);
    if (wanted(6))
        run(6, 0, criterion6);
    if (wanted(7))
        run(7, 0, [&] { return criterion7(corpus); });
    if (wanted(8))
        run(8, 0, criterion8);
    if (wanted(9))
        run(9, 120, criterion9);
    std::printf("total: %.2f s, %d failed\n", seconds_since(total), failures);
    return failures == 0 ? 0 : 1;
}
