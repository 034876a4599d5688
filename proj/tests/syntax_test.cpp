#include <gtest/gtest.h>

#include "generators.hpp"
#include "harness.hpp"
#include "mlg/parser.hpp"
#include "mlg/pretty.hpp"
#include "mlg/prelude.hpp"

using namespace mlg;

namespace {

DiagKind first_kind(const std::vector<Diagnostic>& diags) {
    EXPECT_FALSE(diags.empty());
    return diags.empty() ? DiagKind::runtime : diags.front().kind;
}

bool spans_inside(const std::vector<Diagnostic>& diags, std::string_view text) {
    for (const Diagnostic& d : diags) {
        if (d.span.begin.offset > d.span.end.offset || d.span.end.offset > text.size()) return false;
    }
    return true;
}

}  // namespace

TEST(Parser, ZeroIsZero) {
    CompExprPtr e = harness::comp("z");
    EXPECT_TRUE(std::holds_alternative<CompExpr::Zero>(e->node));
}

TEST(Parser, ObjectLiteralHasThreeFields) {
    auto r = parse_data_expr("[size = z, creation = t, permissions = p]");
    ASSERT_TRUE(r.ok());
    const auto& make = std::get<DataExpr::MakeObject>((*r.value)->node);
    ASSERT_EQ(make.fields.size(), 3u);
    EXPECT_EQ(make.fields[0].label.text, "size");
    EXPECT_EQ(make.fields[1].label.text, "creation");
    EXPECT_EQ(make.fields[2].label.text, "permissions");
    EXPECT_EQ(make.fields[0].value, ast::zero());
    EXPECT_EQ(make.fields[1].value, ast::var("t"));
}

TEST(Parser, WriteThenReserve) {
    ProcTermPtr p = harness::proc("write?(n) . reserve!(blockCount n) . 0");
    ProcTermPtr expected =
        ast::prefix(ast::receive("write", "n"),
                    ast::prefix(ast::send("reserve", ast::comp_payload(ast::app(ast::var("blockCount"), ast::var("n")))),
                                ast::nil()));
    EXPECT_EQ(p, expected);
}

TEST(Parser, Precedence) {
    EXPECT_EQ(harness::proc("a!(z).0 + b?(x).0 | 0"),
              ast::par(ast::sum(ast::prefix(ast::send("a", ast::comp_payload(ast::zero())), ast::nil()),
                                ast::prefix(ast::receive("b", "x"), ast::nil())),
                       ast::nil()));
    EXPECT_EQ(harness::comp("f a b"), ast::app(ast::app(ast::var("f"), ast::var("a")), ast::var("b")));
    EXPECT_EQ(harness::comp("f (g a)"), ast::app(ast::var("f"), ast::app(ast::var("g"), ast::var("a"))));
    EXPECT_EQ(harness::comp("o.size"), ast::sel(ast::var("o"), "size"));
}

TEST(Parser, NumeralsAreCompact) {
    CompExprPtr e = harness::comp("123456789012345678901234567890");
    const auto* n = std::get_if<CompExpr::Num>(&e->node);
    ASSERT_NE(n, nullptr);
    EXPECT_EQ(n->value, Natural("123456789012345678901234567890"));
}

TEST(Parser, CommentsAreIgnored) {
    auto r = parse_program("-- header\nchan c : nat -- trailing\nsystem = c!(z).0 | c?(x).0\n");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.value->items.size(), 1u);
}

TEST(Parser, ChannelPayloadsAreResolvedInPrograms) {
    auto r = parse_program("chan a : chan nat\nchan c : nat\nsystem = a!(c).0 | a?(x).x!(z).0\n");
    ASSERT_TRUE(r.ok());
    const auto& par = std::get<ProcTerm::Par>(r.value->system->node);
    const auto& send = std::get<ProcAction::Send>(std::get<ProcTerm::Prefix>(par.left->node).action->node);
    EXPECT_TRUE(std::holds_alternative<Payload::ChanName>(send.payload.node));
    const auto& recv = std::get<ProcAction::Receive>(std::get<ProcTerm::Prefix>(par.right->node).action->node);
    EXPECT_EQ(recv.binder.kind, NameKind::channel);
}

TEST(Diagnostics, Lexical) {
    std::string text = "system = c#!(z).0";
    auto r = parse_program(text);
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(first_kind(r.diagnostics), DiagKind::lexical);
    EXPECT_TRUE(spans_inside(r.diagnostics, text));
}

TEST(Diagnostics, Syntax) {
    std::string text = "def f = fun (x : nat\n";
    auto r = parse_program(text);
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(first_kind(r.diagnostics), DiagKind::syntax);
    EXPECT_TRUE(spans_inside(r.diagnostics, text));
}

TEST(Diagnostics, DuplicateDefinition) {
    std::string text = "def one = 1\ndef one = 2\n";
    auto r = parse_program(text);
    EXPECT_FALSE(r.ok());
    ASSERT_EQ(first_kind(r.diagnostics), DiagKind::duplicate_definition);
    EXPECT_EQ(r.diagnostics.front().span.begin.line, 2u);
}

TEST(Diagnostics, UnboundName) {
    std::string text = "def two = succ(one)\n";
    auto r = parse_program(text);
    EXPECT_FALSE(r.ok());
    ASSERT_EQ(first_kind(r.diagnostics), DiagKind::unbound_name);
    EXPECT_EQ(r.diagnostics.front().span.begin.col, 16u);
}

TEST(Diagnostics, UseBeforeDefinition) {
    auto r = parse_program("def a = b\ndef b = 1\n");
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(first_kind(r.diagnostics), DiagKind::unbound_name);
}

TEST(Diagnostics, DuplicateLabel) {
    auto r = parse_data_expr("[a = z, a = z]");
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(first_kind(r.diagnostics), DiagKind::duplicate_label);
    auto u = parse_data_expr("o.[a <= z, a <= 1]");
    EXPECT_EQ(first_kind(u.diagnostics), DiagKind::duplicate_label);
}

TEST(Diagnostics, EmptyUpdate) {
    auto r = parse_data_expr("o.[]");
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(first_kind(r.diagnostics), DiagKind::empty_update);
}

TEST(Diagnostics, RecBindersMustDiffer) {
    auto r = parse_comp_expr("rec z { z -> z | succ(x) with x -> x }");
    EXPECT_FALSE(r.ok());
}

TEST(Diagnostics, SpansStayInsideInput) {
    gen::Rng rng(7);
    const std::string alphabet = "ab!?().|+[]=<-> 0zc\n#fun:{}";
    for (int i = 0; i < 500; ++i) {
        std::string text;
        int len = gen::uniform(rng, 0, 40);
        for (int k = 0; k < len; ++k) text += alphabet[static_cast<std::size_t>(gen::uniform(rng, 0, int(alphabet.size()) - 1))];
        auto r = parse_program(text);
        EXPECT_TRUE(spans_inside(r.diagnostics, text)) << text;
    }
}

TEST(Pretty, Basics) {
    EXPECT_EQ(pretty(*ast::zero()), "z");
    EXPECT_EQ(pretty(*ast::par(ast::nil(), ast::nil())), "0 | 0");
}

TEST(Pretty, PreludeAddRoundTrips) {
    const Prelude& p = harness::prelude().prelude;
    for (const Item& item : p.program.items) {
        const auto* def = std::get_if<CompDef>(&item);
        if (!def || def->name.text != "add") continue;
        std::string text = pretty(*def->expr);
        EXPECT_NE(text.find("rec"), std::string::npos);
        auto back = parse_comp_expr(text);
        ASSERT_TRUE(back.ok()) << text;
        EXPECT_EQ(*back.value, def->expr);
        return;
    }
    FAIL() << "add missing from prelude";
}

TEST(RoundTrip, CompExpressions) {
    gen::Rng rng(1);
    for (int i = 0; i < 2000; ++i) {
        CompExprPtr e = gen::any_comp(rng, gen::uniform(rng, 1, 8));
        std::string text = pretty(*e);
        auto back = parse_comp_expr(text);
        ASSERT_TRUE(back.ok()) << text;
        ASSERT_EQ(*back.value, e) << text << "\nreprinted: " << pretty(**back.value);
    }
}

TEST(RoundTrip, TypesAndSorts) {
    gen::Rng rng(2);
    for (int i = 0; i < 1000; ++i) {
        CompTypePtr t = gen::any_type(rng, gen::uniform(rng, 1, 6));
        auto back = parse_comp_type(pretty(*t));
        ASSERT_TRUE(back.ok()) << pretty(*t);
        ASSERT_EQ(*back.value, t) << pretty(*t);
        ChannelSortPtr s = gen::any_sort(rng, gen::uniform(rng, 1, 6));
        auto sback = parse_channel_sort(pretty(*s));
        ASSERT_TRUE(sback.ok()) << pretty(*s);
        ASSERT_EQ(*sback.value, s) << pretty(*s);
    }
}

TEST(RoundTrip, DataExpressions) {
    gen::Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        DataExprPtr d = gen::any_data(rng, gen::uniform(rng, 2, 8));
        auto back = parse_data_expr(pretty(*d));
        ASSERT_TRUE(back.ok()) << pretty(*d);
        ASSERT_EQ(*back.value, d) << pretty(*d);
    }
}

TEST(RoundTrip, ProcessTerms) {
    gen::Rng rng(4);
    for (int i = 0; i < 2000; ++i) {
        ProcTermPtr p = gen::any_proc(rng, gen::uniform(rng, 1, 8));
        std::string text = pretty(*p);
        auto back = parse_proc_term(text);
        ASSERT_TRUE(back.ok()) << text;
        ASSERT_EQ(*back.value, p) << text << "\nreprinted: " << pretty(**back.value);
    }
}

TEST(RoundTrip, Programs) {
    gen::Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        Program p = gen::any_program(rng, gen::uniform(rng, 2, 8));
        std::string text = pretty(p);
        auto back = parse_program(text);
        ASSERT_TRUE(back.ok()) << text << "\n" << (back.diagnostics.empty() ? "" : back.diagnostics[0].message);
        ASSERT_EQ(*back.value, p) << text << "\nreprinted:\n" << pretty(*back.value);
    }
}

TEST(RoundTrip, ShippedSources) {
    for (std::string_view src : {prelude_source(), filesystem_demo_source()}) {
        auto first = parse_program(src, src == prelude_source() ? nullptr : &harness::prelude().prelude.scope);
        ASSERT_TRUE(first.ok());
        std::string text = pretty(*first.value);
        auto second = parse_program(text, src == prelude_source() ? nullptr : &harness::prelude().prelude.scope);
        ASSERT_TRUE(second.ok()) << text;
        EXPECT_EQ(*second.value, *first.value);
        EXPECT_EQ(pretty(*second.value), text);
    }
}
