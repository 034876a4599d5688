#include "mlg/pretty.hpp"

namespace mlg {

namespace {

// Computation precedence: 0 = full expression (fun extends right),
// 1 = application, 2 = postfix/atom.
void comp(std::string& out, const CompExpr& e, int level);

void type(std::string& out, const CompType& t, bool as_domain) {
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, CompType::Nat>) {
                out += "nat";
            } else if constexpr (std::is_same_v<N, CompType::Arrow>) {
                if (as_domain) out += '(';
                type(out, *n.domain, true);
                out += " -> ";
                type(out, *n.codomain, false);
                if (as_domain) out += ')';
            } else {
                out += '{';
                bool first = true;
                for (const auto& [l, t] : n.fields) {
                    if (!first) out += ", ";
                    first = false;
                    out += l;
                    out += " : ";
                    type(out, *t, false);
                }
                out += '}';
            }
        },
        t.node);
}

void sort(std::string& out, const ChannelSort& s) {
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, ChannelSort::CarriesChan>) {
                out += "chan ";
                sort(out, *n.inner);
            } else if constexpr (std::is_same_v<N, ChannelSort::CarriesNat>) {
                out += "nat";
            } else if constexpr (std::is_same_v<N, ChannelSort::CarriesFn>) {
                type(out, *n.type, false);
            } else {
                type(out, *obj_type(n.signature), false);
            }
        },
        s.node);
}

void comp(std::string& out, const CompExpr& e, int level) {
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, CompExpr::Var>) {
                out += n.name.text;
            } else if constexpr (std::is_same_v<N, CompExpr::Zero>) {
                out += 'z';
            } else if constexpr (std::is_same_v<N, CompExpr::Num>) {
                out += n.value.str();
            } else if constexpr (std::is_same_v<N, CompExpr::Succ>) {
                out += "succ(";
                comp(out, *n.arg, 0);
                out += ')';
            } else if constexpr (std::is_same_v<N, CompExpr::Rec>) {
                out += "rec ";
                comp(out, *n.scrutinee, 1);
                out += " { z -> ";
                comp(out, *n.zero_branch, 0);
                out += " | succ(";
                out += n.succ_binder.text;
                out += ") with ";
                out += n.rec_binder.text;
                out += " -> ";
                comp(out, *n.succ_branch, 0);
                out += " }";
            } else if constexpr (std::is_same_v<N, CompExpr::Lambda>) {
                if (level > 0) out += '(';
                out += "fun (";
                out += n.param.text;
                out += " : ";
                type(out, *n.param_type, false);
                out += ") ";
                comp(out, *n.body, 0);
                if (level > 0) out += ')';
            } else if constexpr (std::is_same_v<N, CompExpr::App>) {
                if (level > 1) out += '(';
                comp(out, *n.fn, 1);
                out += ' ';
                comp(out, *n.arg, 2);
                if (level > 1) out += ')';
            } else {
                comp(out, *n.subject, 2);
                out += '.';
                out += n.label.text;
            }
        },
        e.node);
}

void fields(std::string& out, const std::vector<FieldInit>& fs, std::string_view bind) {
    out += '[';
    bool first = true;
    for (const auto& f : fs) {
        if (!first) out += ", ";
        first = false;
        out += f.label.text;
        out += bind;
        comp(out, *f.value, 0);
    }
    out += ']';
}

void data(std::string& out, const DataExpr& d) {
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, DataExpr::MakeObject>) {
                fields(out, n.fields, " = ");
            } else {
                comp(out, *n.target, 2);
                out += '.';
                fields(out, n.updates, " <= ");
            }
        },
        d.node);
}

void payload(std::string& out, const Payload& p) {
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Payload::ChanName>) {
                out += n.name.text;
            } else if constexpr (std::is_same_v<N, Payload::Comp>) {
                comp(out, *n.expr, 0);
            } else {
                data(out, *n.expr);
            }
        },
        p.node);
}

void action(std::string& out, const ProcAction& a) {
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, ProcAction::Send>) {
                out += n.chan.text;
                out += "!(";
                payload(out, n.payload);
                out += ')';
            } else if constexpr (std::is_same_v<N, ProcAction::Receive>) {
                out += n.chan.text;
                out += "?(";
                out += n.binder.text;
                out += ')';
            } else {
                out += '[';
                payload(out, n.left);
                out += " = ";
                payload(out, n.right);
                out += "] ";
                action(out, *n.inner);
            }
        },
        a.node);
}

// Process precedence: 0 = parallel, 1 = sum, 2 = unary. `rightmost` is
// false when more input follows at the same nesting, in which case a
// restriction (whose body extends right) must be parenthesised.
void proc(std::string& out, const ProcTerm& p, int level, bool rightmost) {
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, ProcTerm::Nil>) {
                out += '0';
            } else if constexpr (std::is_same_v<N, ProcTerm::Prefix>) {
                action(out, *n.action);
                out += " . ";
                proc(out, *n.continuation, 2, rightmost);
            } else if constexpr (std::is_same_v<N, ProcTerm::Sum>) {
                bool parens = level > 1;
                if (parens) out += '(';
                proc(out, *n.left, 1, false);
                out += " + ";
                proc(out, *n.right, 2, parens || rightmost);
                if (parens) out += ')';
            } else if constexpr (std::is_same_v<N, ProcTerm::Par>) {
                bool parens = level > 0;
                if (parens) out += '(';
                proc(out, *n.left, 0, false);
                out += " | ";
                proc(out, *n.right, 1, parens || rightmost);
                if (parens) out += ')';
            } else if constexpr (std::is_same_v<N, ProcTerm::Restrict>) {
                if (!rightmost) out += '(';
                out += "new ";
                out += n.chan.text;
                out += " : ";
                sort(out, *n.sort);
                out += " in ";
                proc(out, *n.body, 0, true);
                if (!rightmost) out += ')';
            } else if constexpr (std::is_same_v<N, ProcTerm::Repl>) {
                out += '!';
                proc(out, *n.body, 2, rightmost);
            } else {
                out += n.name.text;
            }
        },
        p.node);
}

}  // namespace

std::string pretty(const CompType& t) {
    std::string out;
    type(out, t, false);
    return out;
}

std::string pretty(const ChannelSort& s) {
    std::string out;
    sort(out, s);
    return out;
}

std::string pretty(const CompExpr& e) {
    std::string out;
    comp(out, e, 0);
    return out;
}

std::string pretty(const DataExpr& d) {
    std::string out;
    data(out, d);
    return out;
}

std::string pretty(const Payload& p) {
    std::string out;
    payload(out, p);
    return out;
}

std::string pretty(const ProcAction& a) {
    std::string out;
    action(out, a);
    return out;
}

std::string pretty(const ProcTerm& p) {
    std::string out;
    proc(out, p, 0, true);
    return out;
}

std::string pretty(const Item& item) {
    return std::visit(
        [](const auto& i) -> std::string {
            using I = std::decay_t<decltype(i)>;
            if constexpr (std::is_same_v<I, CompDef>) {
                return "def " + i.name.text + " = " + pretty(*i.expr);
            } else if constexpr (std::is_same_v<I, ChanDecl>) {
                return "chan " + i.name.text + " : " + pretty(*i.sort);
            } else {
                return "proc " + i.name.text + " = " + pretty(*i.body);
            }
        },
        item);
}

std::string pretty(const Program& program) {
    std::string out;
    for (const Item& it : program.items) {
        out += pretty(it);
        out += '\n';
    }
    if (program.system) {
        out += "system = ";
        out += pretty(*program.system);
        out += '\n';
    }
    return out;
}

}  // namespace mlg
