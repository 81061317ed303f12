#include <random>

#include "closure/membership.hpp"
#include "closure/oracle.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace closure;

TEST_CASE("membership agrees with saturation on every vector") {
    std::mt19937_64 rng(17);
    for (CloneId c : testgen::sweep_clones()) {
        CAPTURE(c.name());
        for (int it = 0; it < 12; ++it) {
            Relation r = testgen::random_instance(rng, 1, 6, 5);
            CAPTURE(r.to_strings());
            Relation cl = saturate_clone(r, c);
            auto dec = make_decider(c, r);
            for (const auto& v : testgen::all_vectors(r.width())) {
                CAPTURE(v.to_string());
                CHECK(dec->contains(v) == cl.contains(v));
            }
        }
    }
}

TEST_CASE("window closed forms match saturation of the pattern set") {
    for (CloneId c : testgen::sweep_clones()) {
        if (window_size(c) == 0 || c.tag == CloneTag::M2 || c.tag == CloneTag::BF || c.tag == CloneTag::R || c.tag == CloneTag::R0)
            continue;
        std::mt19937_64 rng(3);
        for (std::size_t k = 1; k <= window_size(c); ++k) {
            const std::size_t codes = std::size_t{1} << k;
            const bool exhaustive = k <= 3;
            const std::size_t trials = exhaustive ? (std::size_t{1} << codes) - 1 : 300;
            for (std::size_t trial = 0; trial < trials; ++trial) {
                std::uint64_t present = exhaustive ? trial + 1 : (rng() & ((std::uint64_t{1} << codes) - 1)) | 1U;
                if (codes == 64) present = rng() | 1U;
                std::vector<BitVector> rows;
                for (std::size_t t = 0; t < codes; ++t)
                    if ((present >> t) & 1U) {
                        BitVector v(k);
                        for (std::size_t p = 0; p < k; ++p)
                            if ((t >> (k - 1 - p)) & 1U) v.set(p);
                        rows.push_back(v);
                    }
                Relation cl = saturate_clone(Relation(k, rows), c);
                std::uint64_t expect = 0;
                for (const auto& v : cl.rows()) {
                    std::size_t t = 0;
                    for (std::size_t p = 0; p < k; ++p) t = (t << 1) | v.test(p);
                    expect |= std::uint64_t{1} << t;
                }
                CAPTURE(c.name());
                CAPTURE(present);
                CHECK(window_closure_mask(c, k, present) == expect);
            }
        }
    }
}

TEST_CASE("empty relation has an empty closure") {
    Relation r(3);
    CHECK_FALSE(member(CloneId{CloneTag::BF, 0}, r, BitVector(3)));
    CHECK_FALSE(extension(CloneId{CloneTag::E2, 0}, r, BitVector(1)));
}

TEST_CASE("extension is membership in the prefix projection") {
    std::mt19937_64 rng(5);
    for (CloneId c : testgen::sweep_clones()) {
        for (int it = 0; it < 4; ++it) {
            Relation r = testgen::random_instance(rng, 2, 6, 4);
            Relation cl = saturate_clone(r, c);
            for (std::size_t l = 0; l <= r.width(); ++l) {
                Relation p = project(cl, IndexSet::range(r.width(), 1, l));
                for (const auto& v : testgen::all_vectors(l)) CHECK(extension(c, r, v) == p.contains(v));
            }
        }
    }
}

TEST_CASE("width mismatch is rejected") {
    Relation r = Relation::from_strings({"01", "10"});
    CHECK_THROWS_AS(member(CloneId{CloneTag::E2, 0}, r, BitVector(3)), InvalidArgument);
}

TEST_CASE("worked membership examples") {
    Relation a = Relation::from_strings({"0010", "1001", "0101"});
    CHECK(member_e2(a, BitVector::from_string("0001")));
    CHECK_FALSE(member_e2(a, BitVector::from_string("1000")));
    CHECK(extension(CloneId{CloneTag::E2, 0}, a, BitVector::from_string("00")));

    Relation b = Relation::from_strings({"110", "011"});
    CHECK(member_l0(b, BitVector::from_string("101")));
    CHECK_FALSE(member_l0(b, BitVector::from_string("100")));
    CHECK(member_l0(b, BitVector::from_string("000")));
    CHECK(member_l2(b, BitVector::from_string("110")));
    CHECK_FALSE(member_l2(b, BitVector::from_string("101")));
    CHECK(member_s10(b, BitVector::from_string("010")));
    CHECK_FALSE(member_s10(b, BitVector::from_string("111")));

    Relation c = Relation::from_strings({"1101", "0110", "1010"});
    auto atoms = atoms_m2(c);
    CHECK(atoms[0]->to_string() == "1000");
    CHECK(atoms[1]->to_string() == "0100");
    CHECK(atoms[2]->to_string() == "0010");
    CHECK(atoms[3]->to_string() == "1101");
    CHECK(member_m2(c, BitVector::from_string("1110")));
    CHECK_FALSE(member_m2(c, BitVector::from_string("0001")));

    auto bf = atoms_bf(b);
    CHECK(bf[0].to_string() == "100");
    CHECK(bf[1].to_string() == "010");
    CHECK(bf[2].to_string() == "001");

    Relation d = Relation::from_strings({"110", "011", "101"});
    CHECK(member_pairwise(CloneId{CloneTag::D2, 0}, d, BitVector::from_string("111")));
    CHECK_FALSE(member_pairwise(CloneId{CloneTag::D2, 0}, d, BitVector::from_string("000")));
    CHECK_FALSE(member_i2(Relation::from_strings({"10", "01"}), BitVector::from_string("11")));
}

TEST_CASE("bf atoms are disjoint or equal") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 50; ++it) {
        Relation r = testgen::random_instance(rng, 1, 10, 5);
        auto atoms = atoms_bf(r);
        for (const auto& x : atoms)
            for (const auto& y : atoms) CHECK((x == y || !x.intersects(y)));
    }
}

TEST_CASE("projections of members are extensible") {
    std::mt19937_64 rng(29);
    for (CloneId c : testgen::sweep_clones()) {
        Relation r = testgen::random_instance(rng, 3, 7, 5);
        auto dec = make_decider(c, r);
        for (const auto& v : testgen::all_vectors(r.width())) {
            if (!dec->contains(v)) continue;
            for (std::size_t l = 0; l <= r.width(); ++l) {
                BitVector p(l);
                for (std::size_t i = 0; i < l; ++i) p.assign(i, v.test(i));
                CHECK(extension(c, r, p));
            }
        }
    }
}
