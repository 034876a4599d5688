#pragma once

// Abstract syntax for the three cores: computation (System T with field
// selection), data (object literals and atomic updates) and coordination
// (pi-calculus with value-carrying channels).
//
// Nodes are immutable and shared through Rc<T>; equality is structural and
// ignores source spans.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mlg/natural.hpp"
#include "mlg/source.hpp"

namespace mlg {

/// Shared immutable node handle with deep (structural) equality.
template <class T>
class Rc {
   public:
    Rc() = default;
    Rc(std::shared_ptr<const T> p) : p_(std::move(p)) {}

    template <class... Args>
    static Rc make(Args&&... args) {
        return Rc(std::make_shared<const T>(T{std::forward<Args>(args)...}));
    }

    const T& operator*() const { return *p_; }
    const T* operator->() const { return p_.get(); }
    const T* get() const { return p_.get(); }
    explicit operator bool() const { return static_cast<bool>(p_); }

    friend bool operator==(const Rc& a, const Rc& b) {
        if (a.p_ == b.p_) return true;
        if (!a.p_ || !b.p_) return false;
        return *a.p_ == *b.p_;
    }

   private:
    std::shared_ptr<const T> p_;
};

enum class NameKind { variable, label, channel, process };

struct Name {
    std::string text;
    NameKind kind = NameKind::variable;
    Span span;

    friend bool operator==(const Name& a, const Name& b) {
        return a.text == b.text && a.kind == b.kind;
    }
};

bool is_identifier(std::string_view text);
bool is_keyword(std::string_view text);

// ---------------------------------------------------------------- types

struct CompType;
using CompTypePtr = Rc<CompType>;
using Signature = std::map<std::string, CompTypePtr>;

struct CompType {
    struct Nat {
        bool operator==(const Nat&) const = default;
    };
    struct Arrow {
        CompTypePtr domain;
        CompTypePtr codomain;
        bool operator==(const Arrow&) const = default;
    };
    struct Obj {
        Signature fields;
        bool operator==(const Obj&) const = default;
    };

    std::variant<Nat, Arrow, Obj> node;

    bool operator==(const CompType&) const = default;
};

CompTypePtr nat_type();
CompTypePtr arrow_type(CompTypePtr domain, CompTypePtr codomain);
CompTypePtr obj_type(Signature fields);

struct ChannelSort;
using ChannelSortPtr = Rc<ChannelSort>;

struct ChannelSort {
    struct CarriesChan {
        ChannelSortPtr inner;
        bool operator==(const CarriesChan&) const = default;
    };
    struct CarriesNat {
        bool operator==(const CarriesNat&) const = default;
    };
    struct CarriesFn {
        CompTypePtr type;
        bool operator==(const CarriesFn&) const = default;
    };
    struct CarriesObj {
        Signature signature;
        bool operator==(const CarriesObj&) const = default;
    };

    std::variant<CarriesChan, CarriesNat, CarriesFn, CarriesObj> node;

    bool operator==(const ChannelSort&) const = default;
};

ChannelSortPtr chan_sort(ChannelSortPtr inner);
ChannelSortPtr nat_sort();
/// Sort of a channel carrying values of `type`; nat maps to CarriesNat,
/// objects to CarriesObj, arrows to CarriesFn.
ChannelSortPtr sort_for_type(const CompTypePtr& type);
/// Computation type of the values a non-channel sort carries; null for
/// CarriesChan.
CompTypePtr carried_type(const ChannelSort& sort);

// ----------------------------------------------------- computation core

struct CompExpr;
using CompExprPtr = Rc<CompExpr>;

struct CompExpr {
    struct Var {
        Name name;
        bool operator==(const Var&) const = default;
    };
    struct Zero {
        bool operator==(const Zero&) const = default;
    };
    /// Decimal literal; denotes succ^n(z).
    struct Num {
        Natural value;
        bool operator==(const Num&) const = default;
    };
    struct Succ {
        CompExprPtr arg;
        bool operator==(const Succ&) const = default;
    };
    struct Rec {
        CompExprPtr scrutinee;
        CompExprPtr zero_branch;
        Name succ_binder;
        Name rec_binder;
        CompExprPtr succ_branch;
        bool operator==(const Rec&) const = default;
    };
    struct Lambda {
        Name param;
        CompTypePtr param_type;
        CompExprPtr body;
        bool operator==(const Lambda&) const = default;
    };
    struct App {
        CompExprPtr fn;
        CompExprPtr arg;
        bool operator==(const App&) const = default;
    };
    struct FieldSel {
        CompExprPtr subject;
        Name label;
        bool operator==(const FieldSel&) const = default;
    };

    using Node = std::variant<Var, Zero, Num, Succ, Rec, Lambda, App, FieldSel>;
    Node node;
    Span span;

    friend bool operator==(const CompExpr& a, const CompExpr& b) {
        return a.node == b.node;
    }
};

// ------------------------------------------------------------ data core

struct FieldInit {
    Name label;
    CompExprPtr value;
    bool operator==(const FieldInit&) const = default;
};

struct DataExpr;
using DataExprPtr = Rc<DataExpr>;

struct DataExpr {
    struct MakeObject {
        std::vector<FieldInit> fields;
        bool operator==(const MakeObject&) const = default;
    };
    struct UpdateObject {
        CompExprPtr target;
        std::vector<FieldInit> updates;
        bool operator==(const UpdateObject&) const = default;
    };

    std::variant<MakeObject, UpdateObject> node;
    Span span;

    friend bool operator==(const DataExpr& a, const DataExpr& b) {
        return a.node == b.node;
    }
};

// ---------------------------------------------------- coordination core

struct Payload {
    struct ChanName {
        Name name;
        bool operator==(const ChanName&) const = default;
    };
    struct Comp {
        CompExprPtr expr;
        bool operator==(const Comp&) const = default;
    };
    struct Data {
        DataExprPtr expr;
        bool operator==(const Data&) const = default;
    };

    std::variant<ChanName, Comp, Data> node;
    Span span;

    friend bool operator==(const Payload& a, const Payload& b) {
        return a.node == b.node;
    }
};

struct ProcAction;
using ProcActionPtr = Rc<ProcAction>;

struct ProcAction {
    struct Send {
        Name chan;
        Payload payload;
        bool operator==(const Send&) const = default;
    };
    struct Receive {
        Name chan;
        Name binder;
        bool operator==(const Receive&) const = default;
    };
    struct Match {
        Payload left;
        Payload right;
        ProcActionPtr inner;
        bool operator==(const Match&) const = default;
    };

    std::variant<Send, Receive, Match> node;
    Span span;

    friend bool operator==(const ProcAction& a, const ProcAction& b) {
        return a.node == b.node;
    }
};

struct ProcTerm;
using ProcTermPtr = Rc<ProcTerm>;

struct ProcTerm {
    struct Nil {
        bool operator==(const Nil&) const = default;
    };
    struct Prefix {
        ProcActionPtr action;
        ProcTermPtr continuation;
        bool operator==(const Prefix&) const = default;
    };
    struct Sum {
        ProcTermPtr left;
        ProcTermPtr right;
        bool operator==(const Sum&) const = default;
    };
    struct Par {
        ProcTermPtr left;
        ProcTermPtr right;
        bool operator==(const Par&) const = default;
    };
    struct Restrict {
        Name chan;
        ChannelSortPtr sort;
        ProcTermPtr body;
        bool operator==(const Restrict&) const = default;
    };
    struct Repl {
        ProcTermPtr body;
        bool operator==(const Repl&) const = default;
    };
    /// Reference to a named process definition.
    struct Call {
        Name name;
        bool operator==(const Call&) const = default;
    };

    using Node = std::variant<Nil, Prefix, Sum, Par, Restrict, Repl, Call>;
    Node node;
    Span span;

    friend bool operator==(const ProcTerm& a, const ProcTerm& b) {
        return a.node == b.node;
    }
};

/// Sum operands must be Nil, a prefix, or a sum of such.
bool is_guarded(const ProcTerm& p);
bool uses_replication(const ProcTerm& p);

// -------------------------------------------------------------- program

struct CompDef {
    Name name;
    CompExprPtr expr;
    bool operator==(const CompDef&) const = default;
};

struct ChanDecl {
    Name name;
    ChannelSortPtr sort;
    bool operator==(const ChanDecl&) const = default;
};

struct ProcDef {
    Name name;
    ProcTermPtr body;
    bool operator==(const ProcDef&) const = default;
};

using Item = std::variant<CompDef, ChanDecl, ProcDef>;

const Name& item_name(const Item& item);

struct Program {
    std::vector<Item> items;
    ProcTermPtr system;  // null when the source has no `system =` entry

    friend bool operator==(const Program& a, const Program& b) {
        return a.items == b.items && a.system == b.system;
    }
};

/// Concatenates `base` (e.g. the prelude) in front of `program`; the
/// system entry comes from `program`.
Program link(const Program& base, const Program& program);

// ------------------------------------------------------ node builders

namespace ast {

Name var_name(std::string text);
Name chan_name(std::string text);
Name label(std::string text);

CompExprPtr var(std::string name);
CompExprPtr zero();
CompExprPtr num(Natural n);
CompExprPtr succ(CompExprPtr e);
CompExprPtr rec(CompExprPtr scrutinee, CompExprPtr zero_branch, std::string succ_binder,
                std::string rec_binder, CompExprPtr succ_branch);
CompExprPtr lam(std::string param, CompTypePtr type, CompExprPtr body);
CompExprPtr app(CompExprPtr fn, CompExprPtr arg);
CompExprPtr app(CompExprPtr fn, std::initializer_list<CompExprPtr> args);
CompExprPtr sel(CompExprPtr subject, std::string label);

DataExprPtr make_object(std::vector<std::pair<std::string, CompExprPtr>> fields);
DataExprPtr update_object(CompExprPtr target,
                          std::vector<std::pair<std::string, CompExprPtr>> updates);

Payload chan_payload(std::string name);
Payload comp_payload(CompExprPtr e);
Payload data_payload(DataExprPtr d);

ProcActionPtr send(std::string chan, Payload payload);
ProcActionPtr receive(std::string chan, std::string binder, NameKind binder_kind = NameKind::variable);
ProcActionPtr match(Payload left, Payload right, ProcActionPtr inner);

ProcTermPtr nil();
ProcTermPtr prefix(ProcActionPtr action, ProcTermPtr continuation);
ProcTermPtr sum(ProcTermPtr left, ProcTermPtr right);
ProcTermPtr par(ProcTermPtr left, ProcTermPtr right);
ProcTermPtr par(std::vector<ProcTermPtr> parts);
ProcTermPtr restrict(std::string chan, ChannelSortPtr sort, ProcTermPtr body);
ProcTermPtr repl(ProcTermPtr body);
ProcTermPtr call(std::string name);

}  // namespace ast

}  // namespace mlg
