#include <gtest/gtest.h>

#include "generators.hpp"
#include "harness.hpp"
#include "mlg/canonical.hpp"
#include "mlg/pretty.hpp"

using namespace mlg;

namespace {

std::shared_ptr<const Globals> coord_globals() {
    static const auto globals = make_globals(harness::linked("chan a : nat\nchan b : nat\nchan c : chan nat\nsystem = 0\n"));
    return globals;
}

Configuration config(const ProcTermPtr& p) { return initial_configuration(coord_globals(), p, 0); }

CanonicalState key(std::string_view text) {
    static const ParseScope scope = scope_of(harness::linked("chan a : nat\nchan b : nat\nchan c : chan nat\n"));
    return canonicalize(config(harness::proc(text, &scope)));
}

void expect_law(gen::Rng& rng, gen::Law law, int rounds) {
    for (int i = 0; i < rounds; ++i) {
        ProcTermPtr p = gen::coordination_term(rng, gen::uniform(rng, 2, 7));
        ProcTermPtr q = gen::apply_law(rng, p, law);
        Configuration cp = config(p);
        Configuration cq = config(q);
        ASSERT_EQ(canonicalize(cp), canonicalize(cq)) << pretty(*p) << "\n  vs\n" << pretty(*q);
        ASSERT_EQ(canonical_redex_labels(cp), canonical_redex_labels(cq)) << pretty(*p) << "\n  vs\n" << pretty(*q);
    }
}

}  // namespace

TEST(Canonical, Examples) {
    EXPECT_EQ(key("a!(1).0 | 0"), key("a!(1).0"));
    EXPECT_EQ(key("a!(1).0 | b?(x).0"), key("b?(x).0 | a!(1).0"));
    EXPECT_EQ(key("new r : nat in r?(x).0"), key("new s : nat in s?(x).0"));
    EXPECT_EQ(key("a?(x).b!(x).0"), key("a?(y).b!(y).0"));
    EXPECT_EQ(key("a!(1).0 + b!(2).0"), key("b!(2).0 + a!(1).0"));
    EXPECT_EQ(key("(a!(1).0 | b!(2).0) | a?(x).0"), key("a!(1).0 | (b!(2).0 | a?(x).0)"));
}

TEST(Canonical, DistinguishesDifferentSystems) {
    EXPECT_NE(key("a!(1).0"), key("a!(2).0"));
    EXPECT_NE(key("a!(1).0"), key("b!(1).0"));
    EXPECT_NE(key("a!(1).0 | a!(1).0"), key("a!(1).0"));
    EXPECT_NE(key("new r : nat in (r!(1).0 | r?(x).0)"), key("(new r : nat in r!(1).0) | (new s : nat in s?(x).0)"));
    EXPECT_NE(key("a?(x).b!(x).0"), key("a?(x).b!(1).0"));
    EXPECT_NE(key("c?(x).x!(1).0"), key("c?(x).a!(1).0"));
}

TEST(Canonical, SharedRestrictionsAcrossMembers) {
    EXPECT_EQ(key("new r : nat in new s : nat in (r!(1).0 | s?(x).0 | r?(y).0)"),
              key("new s : nat in new r : nat in (s?(y).0 | r?(x).0 | r!(1).0)"));
    EXPECT_NE(key("new r : nat in new s : nat in (r!(1).0 | s?(x).0)"),
              key("new r : nat in (r!(1).0 | r?(x).0)"));
}

TEST(Canonical, StoreIsPartOfTheState) {
    Program p = harness::linked("chan o : {a : nat}\nsystem = o!([a = 1]).0 | o?(x).0\n");
    Program q = harness::linked("chan o : {a : nat}\nsystem = o!([a = 2]).0 | o?(x).0\n");
    Configuration cp = initial_configuration(p);
    Configuration cq = initial_configuration(q);
    EXPECT_NE(canonicalize(cp), canonicalize(cq));
    step(cp, enabled_redexes(cp).at(0));
    step(cq, enabled_redexes(cq).at(0));
    EXPECT_NE(canonicalize(cp), canonicalize(cq));
}

TEST(Canonical, CountersDoNotMatter) {
    Program p = harness::linked("chan a : nat\nsystem = a!(1).0 | a?(x).0 | a!(1).0 | a?(y).0\n");
    Configuration left = initial_configuration(p, 1);
    Configuration right = initial_configuration(p, 2);
    auto rs = enabled_redexes(left);
    step(left, rs.front());
    step(right, rs.back());
    EXPECT_EQ(canonicalize(left), canonicalize(right));
}

TEST(CongruenceLaws, Unit) {
    gen::Rng rng(51);
    expect_law(rng, gen::Law::unit, 500);
}

TEST(CongruenceLaws, Commutativity) {
    gen::Rng rng(52);
    expect_law(rng, gen::Law::commute, 500);
}

TEST(CongruenceLaws, Associativity) {
    gen::Rng rng(53);
    expect_law(rng, gen::Law::associate, 500);
}

TEST(CongruenceLaws, Alpha) {
    gen::Rng rng(54);
    expect_law(rng, gen::Law::alpha, 500);
}

TEST(CongruenceLaws, Stacked) {
    gen::Rng rng(55);
    for (int i = 0; i < 300; ++i) {
        ProcTermPtr p = gen::coordination_term(rng, gen::uniform(rng, 3, 7));
        ProcTermPtr q = p;
        for (int k = 0; k < 6; ++k) q = gen::apply_law(rng, q, static_cast<gen::Law>(gen::uniform(rng, 0, 3)));
        ASSERT_EQ(canonicalize(config(p)), canonicalize(config(q))) << pretty(*p) << "\n  vs\n" << pretty(*q);
    }
}

TEST(CongruenceLaws, HoldAfterReduction) {
    // congruent systems stay congruent after matching steps
    gen::Rng rng(56);
    for (int i = 0; i < 200; ++i) {
        ProcTermPtr p = gen::coordination_term(rng, gen::uniform(rng, 3, 7));
        ProcTermPtr q = gen::apply_law(rng, gen::apply_law(rng, p, gen::Law::commute), gen::Law::alpha);
        Configuration cp = config(p);
        Configuration cq = config(q);
        for (int s = 0; s < 4; ++s) {
            auto rp = enabled_redexes(cp);
            if (rp.empty()) break;
            Redex r = rp[static_cast<std::size_t>(gen::uniform(rng, 0, int(rp.size()) - 1))];
            Configuration next = cp;
            step(next, r);
            CanonicalState target = canonicalize(next);
            bool matched = false;
            for (const Redex& candidate : enabled_redexes(cq)) {
                Configuration trial = cq;
                step(trial, candidate);
                if (canonicalize(trial) == target) {
                    cq = std::move(trial);
                    matched = true;
                    break;
                }
            }
            ASSERT_TRUE(matched) << pretty(*p) << "\n  vs\n" << pretty(*q);
            cp = std::move(next);
        }
    }
}

TEST(Canonical, Idempotence) {
    gen::Rng rng(57);
    for (int i = 0; i < 500; ++i) {
        ProcTermPtr p = gen::coordination_term(rng, gen::uniform(rng, 2, 7));
        Configuration c = config(p);
        for (int s = gen::uniform(rng, 0, 3); s > 0; --s) {
            auto rs = enabled_redexes(c);
            if (rs.empty()) break;
            step(c, rs[uniform_index(c.rng_state, rs.size())]);
        }
        Configuration rep = canonical_representative(c);
        ASSERT_EQ(canonicalize(rep), canonicalize(c)) << pretty(*p);
        ASSERT_EQ(canonicalize(canonical_representative(rep)), canonicalize(c));
        ASSERT_EQ(canonical_redex_labels(rep), canonical_redex_labels(c));
        ASSERT_TRUE(check_invariants(rep).empty()) << pretty(*p) << "\n" << check_invariants(rep).front();
    }
}
