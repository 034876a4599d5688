#include "mlg/syntax.hpp"

#include <array>
#include <cctype>

namespace mlg {

namespace {

constexpr std::array kKeywords = {"z",    "succ", "rec",  "with",   "fun", "nat",
                                  "chan", "def",  "proc", "system", "new", "in"};

}  // namespace

bool is_keyword(std::string_view text) {
    for (const char* k : kKeywords) {
        if (text == k) return true;
    }
    return false;
}

bool is_identifier(std::string_view text) {
    if (text.empty()) return false;
    auto head = static_cast<unsigned char>(text.front());
    if (!(std::isalpha(head) || head == '_')) return false;
    for (char c : text.substr(1)) {
        auto u = static_cast<unsigned char>(c);
        if (!(std::isalnum(u) || u == '_')) return false;
    }
    return true;
}

CompTypePtr nat_type() {
    static const CompTypePtr nat = CompTypePtr::make(CompType::Nat{});
    return nat;
}

CompTypePtr arrow_type(CompTypePtr domain, CompTypePtr codomain) {
    return CompTypePtr::make(CompType::Arrow{std::move(domain), std::move(codomain)});
}

CompTypePtr obj_type(Signature fields) {
    return CompTypePtr::make(CompType::Obj{std::move(fields)});
}

ChannelSortPtr chan_sort(ChannelSortPtr inner) {
    return ChannelSortPtr::make(ChannelSort::CarriesChan{std::move(inner)});
}

ChannelSortPtr nat_sort() {
    static const ChannelSortPtr nat = ChannelSortPtr::make(ChannelSort::CarriesNat{});
    return nat;
}

ChannelSortPtr sort_for_type(const CompTypePtr& type) {
    if (std::holds_alternative<CompType::Nat>(type->node)) return nat_sort();
    if (const auto* obj = std::get_if<CompType::Obj>(&type->node)) {
        return ChannelSortPtr::make(ChannelSort::CarriesObj{obj->fields});
    }
    return ChannelSortPtr::make(ChannelSort::CarriesFn{type});
}

CompTypePtr carried_type(const ChannelSort& sort) {
    return std::visit(
        [](const auto& s) -> CompTypePtr {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ChannelSort::CarriesChan>) {
                return {};
            } else if constexpr (std::is_same_v<S, ChannelSort::CarriesNat>) {
                return nat_type();
            } else if constexpr (std::is_same_v<S, ChannelSort::CarriesFn>) {
                return s.type;
            } else {
                return obj_type(s.signature);
            }
        },
        sort.node);
}

bool is_guarded(const ProcTerm& p) {
    if (std::holds_alternative<ProcTerm::Nil>(p.node)) return true;
    if (std::holds_alternative<ProcTerm::Prefix>(p.node)) return true;
    if (const auto* s = std::get_if<ProcTerm::Sum>(&p.node)) {
        return is_guarded(*s->left) && is_guarded(*s->right);
    }
    return false;
}

bool uses_replication(const ProcTerm& p) {
    return std::visit(
        [](const auto& n) -> bool {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, ProcTerm::Repl>) {
                return true;
            } else if constexpr (std::is_same_v<N, ProcTerm::Prefix>) {
                return uses_replication(*n.continuation);
            } else if constexpr (std::is_same_v<N, ProcTerm::Sum> ||
                                 std::is_same_v<N, ProcTerm::Par>) {
                return uses_replication(*n.left) || uses_replication(*n.right);
            } else if constexpr (std::is_same_v<N, ProcTerm::Restrict>) {
                return uses_replication(*n.body);
            } else {
                return false;
            }
        },
        p.node);
}

const Name& item_name(const Item& item) {
    return std::visit([](const auto& i) -> const Name& { return i.name; }, item);
}

Program link(const Program& base, const Program& program) {
    Program out;
    out.items = base.items;
    out.items.insert(out.items.end(), program.items.begin(), program.items.end());
    out.system = program.system;
    return out;
}

namespace ast {

Name var_name(std::string text) { return Name{std::move(text), NameKind::variable, {}}; }
Name chan_name(std::string text) { return Name{std::move(text), NameKind::channel, {}}; }
Name label(std::string text) { return Name{std::move(text), NameKind::label, {}}; }

CompExprPtr var(std::string name) {
    return CompExprPtr::make(CompExpr::Var{var_name(std::move(name))}, Span{});
}
CompExprPtr zero() { return CompExprPtr::make(CompExpr::Zero{}, Span{}); }
CompExprPtr num(Natural n) { return CompExprPtr::make(CompExpr::Num{std::move(n)}, Span{}); }
CompExprPtr succ(CompExprPtr e) { return CompExprPtr::make(CompExpr::Succ{std::move(e)}, Span{}); }

CompExprPtr rec(CompExprPtr scrutinee, CompExprPtr zero_branch, std::string succ_binder,
                std::string rec_binder, CompExprPtr succ_branch) {
    return CompExprPtr::make(
        CompExpr::Rec{std::move(scrutinee), std::move(zero_branch), var_name(std::move(succ_binder)),
                      var_name(std::move(rec_binder)), std::move(succ_branch)},
        Span{});
}

CompExprPtr lam(std::string param, CompTypePtr type, CompExprPtr body) {
    return CompExprPtr::make(
        CompExpr::Lambda{var_name(std::move(param)), std::move(type), std::move(body)}, Span{});
}

CompExprPtr app(CompExprPtr fn, CompExprPtr arg) {
    return CompExprPtr::make(CompExpr::App{std::move(fn), std::move(arg)}, Span{});
}

CompExprPtr app(CompExprPtr fn, std::initializer_list<CompExprPtr> args) {
    for (const auto& a : args) fn = app(std::move(fn), a);
    return fn;
}

CompExprPtr sel(CompExprPtr subject, std::string l) {
    return CompExprPtr::make(CompExpr::FieldSel{std::move(subject), label(std::move(l))}, Span{});
}

namespace {
std::vector<FieldInit> inits(std::vector<std::pair<std::string, CompExprPtr>> fields) {
    std::vector<FieldInit> out;
    out.reserve(fields.size());
    for (auto& [l, e] : fields) out.push_back(FieldInit{label(l), std::move(e)});
    return out;
}
}  // namespace

DataExprPtr make_object(std::vector<std::pair<std::string, CompExprPtr>> fields) {
    return DataExprPtr::make(DataExpr::MakeObject{inits(std::move(fields))}, Span{});
}

DataExprPtr update_object(CompExprPtr target,
                          std::vector<std::pair<std::string, CompExprPtr>> updates) {
    return DataExprPtr::make(DataExpr::UpdateObject{std::move(target), inits(std::move(updates))},
                             Span{});
}

Payload chan_payload(std::string name) {
    return Payload{Payload::ChanName{chan_name(std::move(name))}, {}};
}
Payload comp_payload(CompExprPtr e) { return Payload{Payload::Comp{std::move(e)}, {}}; }
Payload data_payload(DataExprPtr d) { return Payload{Payload::Data{std::move(d)}, {}}; }

ProcActionPtr send(std::string chan, Payload payload) {
    return ProcActionPtr::make(ProcAction::Send{chan_name(std::move(chan)), std::move(payload)},
                               Span{});
}

ProcActionPtr receive(std::string chan, std::string binder, NameKind binder_kind) {
    return ProcActionPtr::make(
        ProcAction::Receive{chan_name(std::move(chan)), Name{std::move(binder), binder_kind, {}}},
        Span{});
}

ProcActionPtr match(Payload left, Payload right, ProcActionPtr inner) {
    return ProcActionPtr::make(ProcAction::Match{std::move(left), std::move(right), std::move(inner)},
                               Span{});
}

ProcTermPtr nil() { return ProcTermPtr::make(ProcTerm::Nil{}, Span{}); }

ProcTermPtr prefix(ProcActionPtr action, ProcTermPtr continuation) {
    return ProcTermPtr::make(ProcTerm::Prefix{std::move(action), std::move(continuation)}, Span{});
}

ProcTermPtr sum(ProcTermPtr left, ProcTermPtr right) {
    return ProcTermPtr::make(ProcTerm::Sum{std::move(left), std::move(right)}, Span{});
}

ProcTermPtr par(ProcTermPtr left, ProcTermPtr right) {
    return ProcTermPtr::make(ProcTerm::Par{std::move(left), std::move(right)}, Span{});
}

ProcTermPtr par(std::vector<ProcTermPtr> parts) {
    if (parts.empty()) return nil();
    ProcTermPtr out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) out = par(out, parts[i]);
    return out;
}

ProcTermPtr restrict(std::string chan, ChannelSortPtr sort, ProcTermPtr body) {
    return ProcTermPtr::make(
        ProcTerm::Restrict{chan_name(std::move(chan)), std::move(sort), std::move(body)}, Span{});
}

ProcTermPtr repl(ProcTermPtr body) {
    return ProcTermPtr::make(ProcTerm::Repl{std::move(body)}, Span{});
}

ProcTermPtr call(std::string name) {
    return ProcTermPtr::make(ProcTerm::Call{Name{std::move(name), NameKind::process, {}}}, Span{});
}

}  // namespace ast

}  // namespace mlg
