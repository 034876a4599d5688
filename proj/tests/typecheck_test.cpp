#include <gtest/gtest.h>

#include "generators.hpp"
#include "harness.hpp"
#include "mlg/parser.hpp"
#include "mlg/pretty.hpp"
#include "mlg/typecheck.hpp"

using namespace mlg;

namespace {

CompTypePtr nat() { return nat_type(); }
CompTypePtr arrow(CompTypePtr a, CompTypePtr b) { return arrow_type(std::move(a), std::move(b)); }

CompTypePtr file_type() {
    return obj_type(Signature{{"size", nat()}, {"creation", nat()}, {"permissions", nat()}});
}

CompTypePtr infer_ok(const TypeEnv& env, std::string_view text) {
    auto r = infer_comp(env, *harness::comp(text));
    EXPECT_TRUE(r.ok()) << text << ": " << (r.diagnostics.empty() ? "" : r.diagnostics[0].message);
    return r.value.value_or(CompTypePtr{});
}

DiagKind infer_fails(const TypeEnv& env, std::string_view text) {
    auto r = infer_comp(env, *harness::comp(text));
    EXPECT_FALSE(r.ok()) << text;
    return r.diagnostics.empty() ? DiagKind::syntax : r.diagnostics.front().kind;
}

std::vector<Diagnostic> check_text(const TypeEnv& env, std::string_view text) {
    return check_proc(env, *harness::proc(text));
}

TypeEnv fs_env() {
    return TypeEnv{}
        .with_chan("write", nat_sort())
        .with_chan("reserve", nat_sort())
        .with_comp("blockCount", arrow(nat(), nat()));
}

}  // namespace

TEST(Infer, Basics) {
    EXPECT_EQ(infer_ok({}, "z"), nat());
    EXPECT_EQ(infer_ok({}, "7"), nat());
    EXPECT_EQ(infer_ok({}, "fun (x : nat) x"), arrow(nat(), nat()));
    EXPECT_EQ(infer_ok({}, "(fun (f : nat -> nat) f 3) (fun (x : nat) succ(x))"), nat());
}

TEST(Infer, PreludeAdd) {
    CompTypePtr t = infer_ok({}, "fun (x : nat) fun (y : nat) rec x { z -> y | succ(_) with r -> succ(r) }");
    EXPECT_EQ(t, arrow(nat(), arrow(nat(), nat())));
}

TEST(Infer, FieldSelection) {
    TypeEnv env = TypeEnv{}.with_comp("f", file_type());
    EXPECT_EQ(infer_ok(env, "f.size"), nat());
    EXPECT_EQ(infer_fails(env, "f.owner"), DiagKind::missing_label);
    EXPECT_EQ(infer_fails({}, "(fun (x : nat) x.size) 1"), DiagKind::not_an_object);
}

TEST(Infer, Errors) {
    EXPECT_EQ(infer_fails({}, "y"), DiagKind::unbound_name);
    EXPECT_EQ(infer_fails({}, "z z"), DiagKind::not_a_function);
    EXPECT_EQ(infer_fails({}, "(fun (x : nat -> nat) x) 1"), DiagKind::type_mismatch);
    EXPECT_EQ(infer_fails({}, "rec 1 { z -> z | succ(k) with r -> fun (x : nat) x }"), DiagKind::rec_branch_mismatch);
    EXPECT_EQ(infer_fails({}, "rec (fun (x : nat) x) { z -> z | succ(k) with r -> r }"), DiagKind::type_mismatch);
}

TEST(Infer, DiagnosticsCarrySpans) {
    std::string text = "fun (x : nat) succ(missing)";
    auto r = infer_comp({}, *harness::comp(text));
    ASSERT_FALSE(r.ok());
    const Span& s = r.diagnostics.front().span;
    EXPECT_EQ(text.substr(s.begin.offset, s.end.offset - s.begin.offset), "missing");
}

TEST(CheckData, FileLiteral) {
    TypeEnv env = TypeEnv{}.with_comp("t", nat()).with_comp("p", nat());
    auto r = check_data(env, **parse_data_expr("[size = z, creation = t, permissions = p]").value);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(*r.value, file_type());
}

TEST(CheckData, FileUpdate) {
    TypeEnv env = TypeEnv{}
                      .with_comp("f", file_type())
                      .with_comp("s", nat())
                      .with_comp("q", nat())
                      .with_comp("two", nat())
                      .with_comp("mul", arrow(nat(), arrow(nat(), nat())));
    auto r = check_data(env, **parse_data_expr("f.[size <= mul s two, permissions <= q]").value);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(*r.value, file_type());
}

TEST(CheckData, Errors) {
    TypeEnv env = TypeEnv{}.with_comp("f", file_type());
    auto label = check_data(env, **parse_data_expr("f.[owner <= 1]").value);
    ASSERT_FALSE(label.ok());
    EXPECT_EQ(label.diagnostics.front().kind, DiagKind::missing_label);
    auto type = check_data(env, **parse_data_expr("f.[size <= fun (x : nat) x]").value);
    ASSERT_FALSE(type.ok());
    EXPECT_EQ(type.diagnostics.front().kind, DiagKind::type_mismatch);
    auto init = check_data(env, **parse_data_expr("[a = undefined]").value);
    EXPECT_FALSE(init.ok());
    auto dup = check_data(env, *ast::make_object({{"a", ast::zero()}, {"a", ast::zero()}}));
    ASSERT_FALSE(dup.ok());
    EXPECT_EQ(dup.diagnostics.front().kind, DiagKind::duplicate_label);
}

TEST(CheckProc, Examples) {
    EXPECT_TRUE(check_text(fs_env(), "write?(n) . reserve!(blockCount n) . 0").empty());
    EXPECT_TRUE(check_text({}, "0").empty());
    TypeEnv env = TypeEnv{}.with_chan("c", chan_sort(nat_sort()));
    auto diags = check_text(env, "c!(z).0");
    ASSERT_FALSE(diags.empty());
    EXPECT_EQ(diags.front().kind, DiagKind::payload_sort_mismatch);
}

TEST(CheckProc, ReceiveBindsAtSort) {
    TypeEnv env = TypeEnv{}.with_chan("a", chan_sort(nat_sort())).with_chan("b", nat_sort());
    EXPECT_TRUE(check_text(env, "a?(x).x!(z).0").empty());
    EXPECT_FALSE(check_text(env, "b?(x).x!(z).0").empty());
    TypeEnv objs = TypeEnv{}.with_chan("files", sort_for_type(file_type())).with_chan("sizes", nat_sort());
    EXPECT_TRUE(check_text(objs, "files?(f).sizes!(f.size).0").empty());
    EXPECT_TRUE(check_text(objs, "files!([size = z, creation = 1, permissions = 2]).0").empty());
    EXPECT_FALSE(check_text(objs, "files!([size = z]).0").empty());
}

TEST(CheckProc, Errors) {
    TypeEnv env = TypeEnv{}.with_chan("c", nat_sort()).with_chan("d", chan_sort(nat_sort()));
    auto unsorted = check_proc(env, *ast::prefix(ast::send("nowhere", ast::comp_payload(ast::zero())), ast::nil()));
    ASSERT_FALSE(unsorted.empty());
    EXPECT_EQ(unsorted.front().kind, DiagKind::unsorted_channel);

    auto scope = ParseScope{{"c", NameInfo{NameKind::channel, nat_sort()}}, {"d", NameInfo{NameKind::channel, chan_sort(nat_sort())}}};
    auto category = check_proc(env, *harness::proc("[c = z] c!(z).0", &scope));
    ASSERT_FALSE(category.empty());
    EXPECT_EQ(category.front().kind, DiagKind::match_category);

    auto closures = check_text(env, "[fun (x : nat) x = fun (x : nat) x] c!(z).0");
    ASSERT_FALSE(closures.empty());
    EXPECT_EQ(closures.front().kind, DiagKind::match_category);

    auto guarded = check_proc(env, *ast::sum(ast::par(ast::nil(), ast::nil()), ast::nil()));
    ASSERT_FALSE(guarded.empty());
    EXPECT_EQ(guarded.front().kind, DiagKind::unguarded_sum);

    auto repl = check_proc(env, *harness::proc("!c?(x).0"), CheckOptions{false});
    ASSERT_FALSE(repl.empty());
    EXPECT_EQ(repl.front().kind, DiagKind::replication_disabled);
}

TEST(CheckProc, RestrictionIntroducesSort) {
    EXPECT_TRUE(check_text({}, "new c : nat in (c!(1).0 | c?(x).0)").empty());
    EXPECT_FALSE(check_text({}, "new c : chan nat in c!(1).0").empty());
}

TEST(CheckProgram, DemoPrograms) {
    for (const char* name : {"filesystem.mlg", "deadlock_recv.mlg", "atomicity.mlg"}) {
        Frontend fe = load_program(harness::read_file(harness::program_path(name)));
        EXPECT_TRUE(fe.ok()) << name << ": " << (fe.diagnostics.empty() ? "" : fe.diagnostics[0].message);
    }
}

TEST(Properties, Uniqueness) {
    gen::Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        gen::TypedTerm t = gen::typed_term(rng);
        auto a = infer_comp({}, *t.expr);
        auto b = infer_comp({}, *t.expr);
        ASSERT_TRUE(a.ok()) << pretty(*t.expr);
        ASSERT_TRUE(b.ok());
        EXPECT_EQ(*a.value, *b.value);
        EXPECT_EQ(*a.value, t.type) << pretty(*t.expr);
    }
}

TEST(Properties, Weakening) {
    gen::Rng rng(12);
    TypeEnv base = TypeEnv{}.with_comp("x", nat()).with_comp("f", arrow(nat(), nat())).with_comp("n", nat());
    for (int i = 0; i < 2000; ++i) {
        CompExprPtr e = i % 2 ? gen::typed_term(rng).expr : gen::any_comp(rng, gen::uniform(rng, 1, 6));
        TypeEnv wider = base.with_comp("unused" + std::to_string(i), gen::any_type(rng, 3));
        auto a = infer_comp(base, *e);
        auto b = infer_comp(wider, *e);
        ASSERT_EQ(a.ok(), b.ok()) << pretty(*e);
        if (a.ok()) {
            EXPECT_EQ(*a.value, *b.value);
        } else {
            ASSERT_EQ(a.diagnostics.size(), b.diagnostics.size());
            EXPECT_EQ(a.diagnostics.front().kind, b.diagnostics.front().kind);
        }
    }
}

TEST(Properties, WeakeningForProcesses) {
    gen::Rng rng(13);
    TypeEnv base = TypeEnv{}.with_chan("a", nat_sort()).with_chan("b", nat_sort()).with_chan("c", chan_sort(nat_sort()));
    TypeEnv wider = base.with_comp("spare", nat()).with_chan("spare_chan", nat_sort());
    for (int i = 0; i < 1000; ++i) {
        ProcTermPtr p = gen::coordination_term(rng, gen::uniform(rng, 1, 6));
        auto a = check_proc(base, *p);
        EXPECT_TRUE(a.empty()) << pretty(*p) << ": " << a.front().message;
        EXPECT_EQ(a.size(), check_proc(wider, *p).size());
    }
}
