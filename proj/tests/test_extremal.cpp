#include <random>
#include <set>
#include <sstream>

#include "closure/extremal.hpp"
#include "closure/linalg.hpp"
#include "closure/oracle.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace closure;

namespace {

using StrSet = std::set<std::string>;

std::string show(const StrSet& s) {
    std::string out;
    for (const auto& x : s) out += x + " ";
    return out;
}

StrSet as_set(const std::vector<BitVector>& v) {
    StrSet out;
    for (const auto& x : v) out.insert(x.to_string());
    return out;
}

StrSet drain(SolutionStream& s, bool* duplicate = nullptr) {
    StrSet out;
    BitVector v;
    while (s.next(v))
        if (!out.insert(v.to_string()).second && duplicate) *duplicate = true;
    return out;
}

// Quadratic scan, kept separate from the library filter.
StrSet naive_extremal(const std::vector<BitVector>& all, Side side, bool drop_constants = true) {
    StrSet out;
    for (const auto& v : all) {
        if (drop_constants && (v.none() || v.all())) continue;
        bool beaten = false;
        for (const auto& w : all) {
            if (w == v || (drop_constants && (w.none() || w.all()))) continue;
            if (side == Side::Max ? v.is_subset_of(w) : w.is_subset_of(v)) beaten = true;
        }
        if (!beaten) out.insert(v.to_string());
    }
    return out;
}

StrSet oracle_extremal(CloneId c, const Relation& r, Side side) { return naive_extremal(saturate_clone(r, c).rows(), side); }

bool independent(const BitVector& s, const std::vector<BitVector>& edges) {
    for (const auto& e : edges)
        if (e.is_subset_of(s)) return false;
    return true;
}

StrSet brute_mis(std::size_t n, const std::vector<BitVector>& edges) {
    std::vector<BitVector> ind;
    for (const auto& v : testgen::all_vectors(n))
        if (independent(v, edges)) ind.push_back(v);
    return naive_extremal(ind, Side::Max, false);
}

Hypergraph random_hypergraph(std::mt19937_64& rng, std::size_t n, std::size_t kmax, std::size_t emax, bool regular) {
    std::uniform_int_distribution<std::size_t> kd(1, kmax), ed(0, emax);
    Hypergraph h;
    h.n = n;
    std::set<std::vector<std::size_t>> seen;
    const std::size_t k_fixed = kd(rng);
    for (std::size_t t = ed(rng); t > 0; --t) {
        std::size_t k = std::min(regular ? k_fixed : kd(rng), n);
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i + 1;
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(k);
        IndexSet e(n, idx);
        if (seen.insert(e.members()).second) h.edges.push_back(e);
    }
    return h;
}

std::vector<BitVector> edge_masks(const Hypergraph& h) {
    std::vector<BitVector> out;
    for (const auto& e : h.edges) {
        BitVector m(h.n);
        for (std::size_t i : e.members()) m.set(i - 1);
        out.push_back(m);
    }
    return out;
}

const CloneId E2{CloneTag::E2, 0}, M2{CloneTag::M2, 0}, D2{CloneTag::D2, 0};

}  // namespace

TEST_CASE("closed-form extremal examples") {
    CHECK(as_set(max_min_trivial(E2, Relation::from_strings({"0010", "1001", "0101"}), Side::Max)) == StrSet{"0010", "1001", "0101"});
    CHECK(as_set(max_min_trivial(M2, Relation::from_strings({"1101", "0110", "1010"}), Side::Min)) == StrSet{"1000", "0100", "0010"});
    CHECK_THROWS_AS(max_min_trivial(D2, Relation::from_strings({"10"}), Side::Max), InvalidArgument);
}

TEST_CASE("majority clones through 2CNF and graph MIS") {
    Relation r = Relation::from_strings({"110", "011", "101"});
    auto mx = max_models_maj(D2, r, Side::Max);
    CHECK(drain(*mx) == StrSet{"110", "011", "101"});
    auto mn = max_models_maj(D2, r, Side::Min);
    CHECK(drain(*mn) == StrSet{"110", "011", "101"});
    CHECK_THROWS_AS(max_models_maj(E2, r, Side::Max), InvalidArgument);
}

TEST_CASE("graph MIS enumeration") {
    Graph tri{3, {{0, 1}, {1, 2}, {0, 2}}};
    auto s = graph_mis_enum(tri);
    CHECK(drain(*s) == StrSet{"100", "010", "001"});
    auto e = graph_mis_enum(Graph{3, {}});
    CHECK(drain(*e) == StrSet{"111"});
    auto z = graph_mis_enum(Graph{0, {}});
    CHECK(drain(*z).size() == 1);
    CHECK_THROWS_AS(graph_mis_enum(Graph{2, {{0, 0}}}), InvalidArgument);
    CHECK_THROWS_AS(graph_mis_enum(Graph{2, {{0, 1}, {1, 0}}}), InvalidArgument);

    std::mt19937_64 rng(11);
    for (int t = 0; t < 60; ++t) {
        std::size_t n = 1 + rng() % 10;
        Graph g{n, {}};
        std::vector<BitVector> edges;
        std::bernoulli_distribution p(0.1 + 0.05 * (t % 10));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (p(rng)) {
                    g.edges.emplace_back(a, b);
                    BitVector m(n);
                    m.set(a);
                    m.set(b);
                    edges.push_back(m);
                }
        bool dup = false;
        auto stream = graph_mis_enum(g);
        CHECK(drain(*stream, &dup) == brute_mis(n, edges));
        CHECK_FALSE(dup);
        CHECK(stream->stats().polynomial_delay);
        CHECK(stream->stats().max_delay_ticks <= 8 * (n + 1) * (n + 1) * (n + 1));
    }
}

TEST_CASE("hypergraph MIS enumeration") {
    Hypergraph one{3, {IndexSet(3, {1, 2, 3})}};
    auto s = hypergraph_mis_enum(one);
    CHECK(drain(*s) == StrSet{"110", "101", "011"});
    CHECK_FALSE(s->stats().polynomial_delay);
    auto none = hypergraph_mis_enum(Hypergraph{4, {}});
    CHECK(drain(*none) == StrSet{"1111"});

    std::mt19937_64 rng(12);
    for (int t = 0; t < 80; ++t) {
        std::size_t n = 1 + rng() % 10;
        Hypergraph h = random_hypergraph(rng, n, 4, 12, false);
        bool dup = false;
        auto stream = hypergraph_mis_enum(h);
        CHECK(drain(*stream, &dup) == brute_mis(n, edge_masks(h)));
        CHECK_FALSE(dup);
    }
}

TEST_CASE("hypergraph of a relation and back") {
    Hypergraph h = closure_to_hypergraph(Relation::from_strings({"110", "011"}), 2);
    REQUIRE(h.edges.size() == 1);
    CHECK(h.edges[0] == IndexSet(3, {1, 3}));
    CHECK_THROWS_AS(closure_to_hypergraph(Relation::from_strings({"11"}), 3), InvalidArgument);

    // one k-edge: members are the vectors not dominating it
    for (std::size_t k = 2; k <= 3; ++k) {
        const std::size_t n = k + 2;
        std::vector<std::size_t> e;
        for (std::size_t i = 1; i <= k; ++i) e.push_back(i);
        Relation u = hypergraph_to_closure(Hypergraph{n, {IndexSet(n, e)}});
        BitVector edge(n);
        for (std::size_t i = 0; i < k; ++i) edge.set(i);
        StrSet expect;
        for (const auto& v : testgen::all_vectors(n))
            if (!edge.is_subset_of(v)) expect.insert(v.to_string());
        for (CloneId c : {CloneId::s10k(k), CloneId::s12k(k)}) {
            auto rows = saturate_clone(u, c).to_strings();
            CHECK(StrSet(rows.begin(), rows.end()) == expect);
        }
    }

    std::mt19937_64 rng(13);
    for (int t = 0; t < 30; ++t) {
        std::size_t n = 3 + rng() % 4;
        Hypergraph g = random_hypergraph(rng, n, 3, 6, true);
        if (g.edges.empty() || g.dimension() < 2) continue;
        const std::size_t k = g.dimension();
        Relation u = hypergraph_to_closure(g);
        StrSet expect;
        for (const auto& v : testgen::all_vectors(n))
            if (independent(v, edge_masks(g))) expect.insert(v.to_string());
        std::ostringstream desc;
        write_hypergraph(desc, g);
        INFO(desc.str());
        for (CloneId c : {CloneId::s10k(k), CloneId::s12k(k)}) {
            auto rows = saturate_clone(u, c).to_strings();
            CHECK(show(StrSet(rows.begin(), rows.end())) == show(expect));
        }
    }
    Hypergraph mixed{3, {IndexSet(3, {1, 2}), IndexSet(3, {1, 2, 3})}};
    CHECK_THROWS_AS(hypergraph_to_closure(mixed), InvalidArgument);
}

TEST_CASE("maxima of S10^k and S12^k match the hypergraph") {
    std::mt19937_64 rng(14);
    for (std::size_t k = 2; k <= 5; ++k)
        for (int t = 0; t < 12; ++t) {
            Relation r = testgen::random_instance(rng, k, 7, 5);
            auto mis = hypergraph_mis_enum(closure_to_hypergraph(r, k));
            StrSet h = drain(*mis);
            StrSet a = naive_extremal(saturate_clone(r, CloneId::s10k(k)).rows(), Side::Max, false);
            StrSet b = naive_extremal(saturate_clone(r, CloneId::s12k(k)).rows(), Side::Max, false);
            CHECK(a == b);
            CHECK(b == h);
        }
}

TEST_CASE("L0 circuits and the binary matroid") {
    CHECK(as_set(min_l0(Relation::from_strings({"110", "011"}))) == StrSet{"110", "011", "101"});
    CHECK(as_set(min_l0(Relation::from_strings({"100"}))) == StrSet{"100"});
    CHECK_THROWS_AS(min_l0(Relation(3)), InvalidArgument);
    CHECK_THROWS_AS(min_l0(Relation::from_strings({"1000000", "0100000", "0010000", "0001000"}), SaturationBudget{8, 100}), BudgetExhausted);
    CHECK(as_set(min_l2(Relation::from_strings({"110", "011"}))) == StrSet{"110", "011"});
    CHECK(as_set(max_l0(Relation::from_strings({"110", "011"}))) == StrSet{"110", "011", "101"});

    std::mt19937_64 rng(15);
    for (int t = 0; t < 40; ++t) {
        Relation r = testgen::random_instance(rng, 1, 8, 5);
        auto m = to_binary_matroid(r);
        Gf2Basis span(r.width());
        for (const auto& v : r.rows()) span.insert(v);
        // kernel of m == span(r): same dimension and span inside the kernel
        Gf2Basis rows_m(r.width());
        for (const auto& v : m) rows_m.insert(v);
        CHECK(rows_m.rank() + span.rank() == r.width());
        for (const auto& v : r.rows())
            for (const auto& c : m) CHECK((v & c).count() % 2 == 0);
    }
}

TEST_CASE("extremal elements agree with the filtered oracle") {
    std::mt19937_64 rng(16);
    for (CloneId c : testgen::sweep_clones())
        for (int t = 0; t < 12; ++t) {
            Relation r = testgen::random_instance(rng, 1, 7, 5);
            for (Side side : {Side::Max, Side::Min}) {
                bool dup = false;
                auto s = extremal(c, r, side);
                INFO(c.name() << (side == Side::Max ? " max" : " min"));
                std::string rows;
                for (const auto& x : r.to_strings()) rows += x + " ";
                INFO("rows " << rows);
                CHECK(show(drain(*s, &dup)) == show(oracle_extremal(c, r, side)));
                CHECK_FALSE(dup);
            }
        }
    auto e = extremal(E2, Relation(3), Side::Max);
    CHECK(drain(*e).empty());
}

TEST_CASE("hypergraph text format") {
    std::istringstream in("# comment\n4 2\n1 2\n2 3 4\n");
    Hypergraph h = read_hypergraph(in);
    CHECK(h.n == 4);
    CHECK(h.dimension() == 3);
    std::ostringstream out;
    write_hypergraph(out, h);
    CHECK(out.str() == "4 2\n1 2\n2 3 4\n");
    std::istringstream bad("3 1\n1 5\n");
    try {
        read_hypergraph(bad);
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream dup("3 2\n1 2\n2 1\n");
    CHECK_THROWS_AS(read_hypergraph(dup), FormatError);
}
