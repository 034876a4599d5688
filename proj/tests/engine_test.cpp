#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "generators.hpp"
#include "harness.hpp"
#include "mlg/engine.hpp"
#include "mlg/pretty.hpp"

using namespace mlg;

namespace {

Configuration config_of(std::string_view text, std::uint64_t seed = 0) {
    return initial_configuration(harness::linked(text), seed);
}

ChannelId channel_named(const Configuration& c, const std::string& name) {
    for (const auto& [id, scope] : c.channels) {
        if (scope.name == name) return id;
    }
    ADD_FAILURE() << "no channel " << name;
    return 0;
}

std::vector<std::string> comm_lines(const std::vector<TraceEvent>& trace) {
    std::vector<std::string> out;
    for (const TraceEvent& e : trace) {
        if (e.kind == EventKind::comm) out.push_back(e.chan + " " + e.payload);
    }
    return out;
}

std::size_t index_of(const std::vector<std::string>& v, const std::string& s) {
    return static_cast<std::size_t>(std::find(v.begin(), v.end(), s) - v.begin());
}

const char* kCoordDecls = "chan a : nat\nchan b : nat\nchan c : chan nat\n";

}  // namespace

TEST(Enabled, WriteMeetsFileSystem) {
    Configuration c = config_of("chan write : nat\nchan reserve : nat\n"
                                "system = write!(10).0 | write?(n).reserve!(blockCount n).0\n");
    auto rs = enabled_redexes(c);
    ASSERT_EQ(rs.size(), 1u);
    EXPECT_EQ(rs[0].kind, Redex::Kind::comm);
    EXPECT_EQ(rs[0].chan, channel_named(c, "write"));
}

TEST(Enabled, NilHasNothing) {
    Configuration c = config_of("system = 0\n");
    EXPECT_TRUE(c.all_nil());
    EXPECT_TRUE(enabled_redexes(c).empty());
}

TEST(Enabled, MatchGuards) {
    EXPECT_EQ(enabled_redexes(config_of("chan c : nat\nsystem = [z = z] c!(z).0 | c?(x).0\n")).size(), 1u);
    EXPECT_TRUE(enabled_redexes(config_of("chan c : nat\nsystem = [z = 1] c!(z).0 | c?(x).0\n")).empty());
    EXPECT_EQ(enabled_redexes(config_of("chan c : nat\nsystem = c!(2).0 | [add 1 1 = 2] c?(x).0\n")).size(), 1u);
}

TEST(Enabled, SumCannotTalkToItself) {
    EXPECT_TRUE(enabled_redexes(config_of("chan c : nat\nsystem = c!(z).0 + c?(x).0\n")).empty());
}

TEST(Enabled, CanonicalOrder) {
    Configuration c = config_of("chan a : nat\nchan b : nat\n"
                                "system = a?(x).0 + b?(x).0 | b!(1).0 | a!(2).0 | a!(3).0\n");
    auto rs = enabled_redexes(c);
    ASSERT_EQ(rs.size(), 3u);
    for (std::size_t i = 1; i < rs.size(); ++i) {
        EXPECT_TRUE(std::tie(rs[i - 1].sender, rs[i - 1].receiver, rs[i - 1].chan) <
                    std::tie(rs[i].sender, rs[i].receiver, rs[i].chan));
    }
}

TEST(Step, PayloadIsEvaluatedAtCommTime) {
    Configuration c = config_of("chan write : nat\nchan reserve : nat\n"
                                "system = write!(10).0 | write?(n).reserve!(blockCount n).0 | reserve?(k).0\n");
    step(c, enabled_redexes(c).at(0));
    auto rs = enabled_redexes(c);
    ASSERT_EQ(rs.size(), 1u);
    EXPECT_EQ(rs[0].chan, channel_named(c, "reserve"));
    step(c, rs[0]);
    EXPECT_EQ(comm_lines(c.trace), (std::vector<std::string>{"write 10", "reserve 3"}));
    EXPECT_TRUE(c.all_nil());
    EXPECT_EQ(c.step_count, 2u);
}

TEST(Step, NameMobility) {
    Configuration c = config_of("chan a : chan nat\nchan c : nat\nsystem = a!(c).0 | a?(x).x!(z).0 | c?(y).0\n");
    step(c, enabled_redexes(c).at(0));
    auto rs = enabled_redexes(c);
    ASSERT_EQ(rs.size(), 1u);
    EXPECT_EQ(rs[0].chan, channel_named(c, "c"));
    const Process* sender = find_process(c, rs[0].sender.pid);
    ASSERT_NE(sender, nullptr);
    EXPECT_EQ(pretty(*sender->term), "x!(z) . 0");
    const Value* x = sender->env.lookup("x");
    ASSERT_NE(x, nullptr);
    EXPECT_EQ(x->as_chan()->id, channel_named(c, "c"));
}

TEST(Step, ScopeExtrusion) {
    Configuration c = config_of("chan a : chan nat\nsystem = new r : nat in (a!(r).0 | r?(x).0) | a?(y).y!(1).0\n");
    step(c, enabled_redexes(c).at(0));
    ChannelId r = channel_named(c, "r");
    EXPECT_TRUE(c.channels.at(r).extruded);
    auto rs = enabled_redexes(c);
    ASSERT_EQ(rs.size(), 1u);
    EXPECT_EQ(rs[0].chan, r);
    step(c, rs[0]);
    EXPECT_TRUE(c.all_nil());
}

TEST(Step, RestrictedNamesAreFresh) {
    Configuration c = config_of("proc P = new r : nat in (r!(1).0 | r?(x).0)\nsystem = P | P\n");
    std::set<ChannelId> restricted;
    for (const auto& [id, scope] : c.channels) {
        if (!scope.global) restricted.insert(id);
    }
    EXPECT_EQ(restricted.size(), 2u);
    // the two copies cannot talk to each other
    EXPECT_EQ(enabled_redexes(c).size(), 2u);
}

TEST(Step, SumCommitDiscardsTheOtherBranch) {
    Configuration c = config_of("chan c : nat\nchan d : nat\nsystem = c!(1).0 + d!(2).0 | c?(x).0 | d?(y).0\n");
    auto rs = enabled_redexes(c);
    ASSERT_EQ(rs.size(), 2u);
    step(c, rs[0]);
    EXPECT_TRUE(enabled_redexes(c).empty());
    EXPECT_EQ(c.soup.size(), 1u);
}

TEST(Step, ReplicationSpawnsACopy) {
    Configuration c = config_of("chan c : nat\nsystem = !c?(x).0 | c!(1).0\n");
    auto rs = enabled_redexes(c);
    ASSERT_EQ(rs.size(), 1u);
    ASSERT_EQ(rs[0].kind, Redex::Kind::spawn);
    std::size_t before = c.soup.size();
    step(c, rs[0]);
    EXPECT_EQ(c.soup.size(), before + 1);
    EXPECT_EQ(c.trace.back().kind, EventKind::spawn);
    // the copy is idle until it communicates, so no second spawn
    rs = enabled_redexes(c);
    ASSERT_EQ(rs.size(), 1u);
    EXPECT_EQ(rs[0].kind, Redex::Kind::comm);
}

TEST(Step, UselessReplicationIsNotUnfolded) {
    Configuration c = config_of("chan c : nat\nchan d : nat\nsystem = !c?(x).0 | d!(1).0\n");
    EXPECT_TRUE(enabled_redexes(c).empty());
}

TEST(Step, StaleRedexFaults) {
    Configuration c = config_of("chan c : nat\nsystem = c!(1).0 | c?(x).0\n");
    Redex r = enabled_redexes(c).at(0);
    Configuration copy = c;
    step(c, r);
    EXPECT_THROW(step(c, r), DiagnosticError);
    EXPECT_THROW(step(copy, comm_redex(Endpoint{99, {}}, r.receiver, r.chan)), DiagnosticError);
    EXPECT_THROW(step(copy, spawn_redex(0)), DiagnosticError);
}

TEST(Step, ObjectsTravelByReference) {
    Configuration c = config_of("chan files : {size : nat}\nchan done : nat\n"
                                "system = files!([size = 1]).0 | files?(f).done!(f.size).0 | done?(n).0\n");
    step(c, enabled_redexes(c).at(0));
    ASSERT_EQ(c.store.objects().size(), 1u);
    step(c, enabled_redexes(c).at(0));
    EXPECT_EQ(comm_lines(c.trace).back(), "done 1");
    bool saw_update = false;
    for (const TraceEvent& e : c.trace) saw_update |= e.kind == EventKind::update;
    EXPECT_TRUE(saw_update);
}

TEST(Run, Verdicts) {
    EXPECT_EQ(run(harness::linked("system = 0\n"), 0, 100).verdict, Verdict::terminated);
    EXPECT_EQ(run(harness::linked("system = 0\n"), 0, 100).final.step_count, 0u);
    RunResult d = run(harness::linked("system = new c : nat in c?(x).0\n"), 0, 100);
    EXPECT_EQ(d.verdict, Verdict::deadlock);
    EXPECT_EQ(d.final.step_count, 0u);
    EXPECT_EQ(d.final.trace.back().kind, EventKind::deadlock);
    RunResult l = run(harness::linked("chan c : nat\nsystem = !c!(1).0 | !c?(x).0\n"), 0, 25);
    EXPECT_EQ(l.verdict, Verdict::step_limit);
    EXPECT_EQ(l.final.step_count, 25u);
}

TEST(Run, FileSystemDemo) {
    Program p = harness::linked(harness::read_file(harness::program_path("filesystem.mlg")));
    RunResult r = run(p, 42, 1000);
    ASSERT_EQ(r.verdict, Verdict::terminated);
    auto comms = comm_lines(r.final.trace);
    std::size_t w = index_of(comms, "write 10");
    std::size_t s = index_of(comms, "reserve 3");
    ASSERT_LT(w, comms.size());
    ASSERT_LT(s, comms.size());
    EXPECT_LT(w, s);
}

TEST(Run, FileSystemIsDeterminate) {
    Program p = harness::linked(harness::read_file(harness::program_path("filesystem.mlg")));
    std::multiset<std::string> first;
    std::string store;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        RunResult r = run(p, seed, 1000);
        ASSERT_EQ(r.verdict, Verdict::terminated);
        auto lines = comm_lines(r.final.trace);
        std::multiset<std::string> ms(lines.begin(), lines.end());
        std::string objs;
        for (const auto& [id, obj] : r.final.store.objects()) objs += render_object(obj);
        if (seed == 0) {
            first = ms;
            store = objs;
        }
        EXPECT_EQ(ms, first) << "seed " << seed;
        EXPECT_EQ(objs, store) << "seed " << seed;
    }
}

TEST(Run, SameSeedSameTrace) {
    Program p = harness::linked(std::string(kCoordDecls) + "system = a!(1).0 | a?(x).b!(x).0 | b?(y).0 | a!(2).0 | a?(w).0 | !c?(d).d!(3).0 | c!(b).0\n");
    for (std::uint64_t seed : {0u, 1u, 99u}) {
        RunResult x = run(p, seed, 100);
        RunResult y = run(p, seed, 100);
        EXPECT_EQ(trace_text(x.final.trace), trace_text(y.final.trace));
        EXPECT_EQ(trace_records(x.final.trace), trace_records(y.final.trace));
    }
}

TEST(Run, SchedulerExploresDifferentOrders) {
    Program p = harness::linked("chan a : nat\nsystem = a!(1).0 | a!(2).0 | a?(x).0 | a?(y).0\n");
    std::set<std::string> traces;
    for (std::uint64_t seed = 0; seed < 20; ++seed) traces.insert(trace_text(run(p, seed, 100).final.trace));
    EXPECT_GT(traces.size(), 1u);
}

TEST(Trace, RecordsHaveStableFields) {
    Program p = harness::linked(harness::read_file(harness::program_path("filesystem.mlg")));
    RunResult r = run(p, 42, 1000);
    std::istringstream in(trace_records(r.final.trace));
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        for (const char* key : {"step", "kind", "pids", "chan", "payload", "storeDelta"}) {
            EXPECT_TRUE(j.contains(key)) << key << " in " << line;
        }
        ++n;
    }
    EXPECT_EQ(n, r.final.trace.size());
}

TEST(Trace, TextFormat) {
    RunResult r = run(harness::linked("chan c : nat\nsystem = c!(add 1 1).0 | c?(x).0\n"), 0, 10);
    std::string text = trace_text(r.final.trace);
    EXPECT_NE(text.find("#1 comm c p0 -> p1 payload=2"), std::string::npos) << text;
    EXPECT_NE(text.find("terminated"), std::string::npos) << text;
}

TEST(Invariants, HoldAfterEveryStep) {
    gen::Rng rng(41);
    for (int i = 0; i < 300; ++i) {
        ProcTermPtr term = gen::coordination_term(rng, gen::uniform(rng, 2, 7));
        Program p = harness::linked(std::string(kCoordDecls) + "system = " + pretty(*term) + "\n");
        Configuration c = initial_configuration(p, static_cast<std::uint64_t>(i));
        ASSERT_TRUE(check_invariants(c).empty()) << pretty(*term);
        for (int s = 0; s < 30; ++s) {
            auto rs = enabled_redexes(c);
            if (rs.empty()) break;
            step(c, rs[uniform_index(c.rng_state, rs.size())]);
            auto bad = check_invariants(c);
            ASSERT_TRUE(bad.empty()) << pretty(*term) << "\n" << bad.front();
            for (const TraceEvent& e : c.trace) {
                if (e.kind != EventKind::comm) continue;
                // payloads on nat channels are numerals, on c they are channels
                bool numeric = !e.payload.empty() && std::all_of(e.payload.begin(), e.payload.end(), ::isdigit);
                EXPECT_EQ(numeric, e.chan != "c") << e.chan << " " << e.payload;
            }
        }
    }
}
