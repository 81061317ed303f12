#include <random>
#include <set>

#include "closure/enumerate.hpp"
#include "closure/oracle.hpp"
#include "closure/udclosure.hpp"
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

StrSet drain(SolutionStream& s, bool* duplicate = nullptr) {
    StrSet out;
    BitVector v;
    while (s.next(v))
        if (!out.insert(v.to_string()).second && duplicate) *duplicate = true;
    return out;
}

StrSet oracle(CloneId c, const Relation& r, const UDSpec& ud) {
    auto rows = saturate(r, clone_base(c), &ud).to_strings();
    return {rows.begin(), rows.end()};
}

UDSpec random_ud(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::size_t> up, down;
    std::uniform_int_distribution<int> pick(0, 3);
    for (std::size_t i = 1; i <= n; ++i) {
        int x = pick(rng);
        if (x == 0) up.push_back(i);
        if (x == 1) down.push_back(i);
    }
    return {IndexSet(n, up), IndexSet(n, down)};
}

std::vector<CloneId> ud_clones() {
    std::vector<CloneId> out;
    for (CloneId c : testgen::sweep_clones())
        if (c.tag != CloneTag::S10K && c.tag != CloneTag::S12K) out.push_back(c);
    for (std::size_t k = 2; k <= 4; ++k) {
        out.push_back(CloneId::s10k(k));
        out.push_back(CloneId::s12k(k));
    }
    return out;
}

}  // namespace

TEST_CASE("up/down closure examples") {
    const CloneId i2{CloneTag::I2, 0}, l0{CloneTag::L0, 0};
    auto s = enum_ud(i2, Relation::from_strings({"10"}), UDSpec{IndexSet(2, {2}), {}});
    CHECK(drain(*s) == StrSet{"10", "11"});

    Relation r = Relation::from_strings({"110", "011"});
    UDSpec up1{IndexSet(3, {1}), {}};
    auto l = enum_ud(l0, r, up1);
    CHECK(drain(*l) == oracle(l0, r, up1));

    auto plain = enum_ud(CloneId{CloneTag::E2, 0}, r, UDSpec{});
    auto ref = enumerate(CloneId{CloneTag::E2, 0}, r);
    CHECK(drain(*plain) == drain(*ref));

    UDSpec clash{IndexSet(3, {1}), IndexSet(3, {1})};
    CHECK_THROWS_AS(enum_ud(l0, r, clash), InvalidArgument);
    CHECK_THROWS_AS(member_ud(l0, r, clash, BitVector(3)), InvalidArgument);
}

TEST_CASE("DNF of a relation with up/down maps") {
    Relation r = Relation::from_strings({"10", "01"});
    auto terms = ud_dnf(r, UDSpec{IndexSet(2, {1}), {}});
    REQUIRE(terms.size() == 2);
    CHECK(terms[0] == DNFClause{Literal{0, true}, Literal{1, false}});
    CHECK(terms[1] == DNFClause{Literal{1, true}});
}

TEST_CASE("up/down closures agree with the extended oracle") {
    std::mt19937_64 rng(21);
    for (CloneId c : ud_clones())
        for (int t = 0; t < 25; ++t) {
            Relation r = testgen::random_instance(rng, 1, 7, 5);
            UDSpec ud = random_ud(rng, r.width());
            StrSet expect = oracle(c, r, ud);
            std::string rows;
            for (const auto& x : r.to_strings()) rows += x + " ";
            INFO(c.name() << " rows " << rows << " up " << ud.up.members().size() << " down " << ud.down.members().size());
            bool dup = false;
            auto s = enum_ud(c, r, ud);
            StrSet got = drain(*s, &dup);
            CHECK(show(got) == show(expect));
            CHECK_FALSE(dup);
            // contains the plain closure
            auto plain = enumerate(c, r);
            for (const auto& v : drain(*plain)) CHECK(got.count(v));
            if (r.width() <= 6)
                for (const auto& v : testgen::all_vectors(r.width())) CHECK(member_ud(c, r, ud, v) == (expect.count(v.to_string()) > 0));
        }
}

TEST_CASE("S10 instance with up/down maps has the same closure") {
    std::mt19937_64 rng(22);
    const CloneId s10{CloneTag::S10, 0};
    for (int t = 0; t < 60; ++t) {
        Relation r = testgen::random_instance(rng, 1, 6, 4);
        UDSpec ud = random_ud(rng, r.width());
        auto plain = saturate_clone(ud_s10_instance(r, ud), s10).to_strings();
        CHECK(StrSet(plain.begin(), plain.end()) == oracle(s10, r, ud));
    }
}
