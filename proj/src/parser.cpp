#include "mlg/parser.hpp"

#include <cctype>
#include <functional>
#include <set>
#include <utility>

namespace mlg {

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok {
    ident,
    number,
    kw_z,
    kw_succ,
    kw_rec,
    kw_with,
    kw_fun,
    kw_nat,
    kw_chan,
    kw_def,
    kw_proc,
    kw_system,
    kw_new,
    kw_in,
    lparen,
    rparen,
    lbrace,
    rbrace,
    lbracket,
    rbracket,
    comma,
    dot,
    colon,
    equals,
    larrow,  // <=
    arrow,   // ->
    bar,
    plus,
    bang,
    question,
    end,
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    Span span;
};

std::string_view describe(Tok t) {
    switch (t) {
        case Tok::ident: return "identifier";
        case Tok::number: return "number";
        case Tok::kw_z: return "'z'";
        case Tok::kw_succ: return "'succ'";
        case Tok::kw_rec: return "'rec'";
        case Tok::kw_with: return "'with'";
        case Tok::kw_fun: return "'fun'";
        case Tok::kw_nat: return "'nat'";
        case Tok::kw_chan: return "'chan'";
        case Tok::kw_def: return "'def'";
        case Tok::kw_proc: return "'proc'";
        case Tok::kw_system: return "'system'";
        case Tok::kw_new: return "'new'";
        case Tok::kw_in: return "'in'";
        case Tok::lparen: return "'('";
        case Tok::rparen: return "')'";
        case Tok::lbrace: return "'{'";
        case Tok::rbrace: return "'}'";
        case Tok::lbracket: return "'['";
        case Tok::rbracket: return "']'";
        case Tok::comma: return "','";
        case Tok::dot: return "'.'";
        case Tok::colon: return "':'";
        case Tok::equals: return "'='";
        case Tok::larrow: return "'<='";
        case Tok::arrow: return "'->'";
        case Tok::bar: return "'|'";
        case Tok::plus: return "'+'";
        case Tok::bang: return "'!'";
        case Tok::question: return "'?'";
        case Tok::end: return "end of input";
    }
    return "token";
}

Tok keyword_or_ident(std::string_view word) {
    static const std::map<std::string_view, Tok> kw = {
        {"z", Tok::kw_z},       {"succ", Tok::kw_succ},     {"rec", Tok::kw_rec},
        {"with", Tok::kw_with}, {"fun", Tok::kw_fun},       {"nat", Tok::kw_nat},
        {"chan", Tok::kw_chan}, {"def", Tok::kw_def},       {"proc", Tok::kw_proc},
        {"system", Tok::kw_system}, {"new", Tok::kw_new},   {"in", Tok::kw_in},
    };
    auto it = kw.find(word);
    return it == kw.end() ? Tok::ident : it->second;
}

class Lexer {
   public:
    Lexer(std::string_view src, std::vector<Diagnostic>& diags) : src_(src), diags_(diags) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            if (at_end()) break;
            SourcePos start = pos_;
            char c = peek();
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string word;
                while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
                    word += advance();
                }
                Tok kind = keyword_or_ident(word);
                out.push_back(Token{kind, std::move(word), Span{start, pos_}});
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::string digits;
                while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
                out.push_back(Token{Tok::number, std::move(digits), Span{start, pos_}});
                continue;
            }
            Tok kind = Tok::end;
            advance();
            switch (c) {
                case '(': kind = Tok::lparen; break;
                case ')': kind = Tok::rparen; break;
                case '{': kind = Tok::lbrace; break;
                case '}': kind = Tok::rbrace; break;
                case '[': kind = Tok::lbracket; break;
                case ']': kind = Tok::rbracket; break;
                case ',': kind = Tok::comma; break;
                case '.': kind = Tok::dot; break;
                case ':': kind = Tok::colon; break;
                case '=': kind = Tok::equals; break;
                case '|': kind = Tok::bar; break;
                case '+': kind = Tok::plus; break;
                case '!': kind = Tok::bang; break;
                case '?': kind = Tok::question; break;
                case '<':
                    if (!at_end() && peek() == '=') {
                        advance();
                        kind = Tok::larrow;
                    }
                    break;
                case '-':
                    if (!at_end() && peek() == '>') {
                        advance();
                        kind = Tok::arrow;
                    }
                    break;
                default: break;
            }
            if (kind == Tok::end) {
                // swallow the remaining bytes of a multibyte UTF-8 sequence
                while (!at_end() && (static_cast<unsigned char>(peek()) & 0xC0) == 0x80) advance();
                std::string shown(1, c);
                if (static_cast<unsigned char>(c) >= 0x80 || !std::isprint(static_cast<unsigned char>(c))) {
                    shown = "non-ASCII or control character";
                } else {
                    shown = "'" + shown + "'";
                }
                diags_.push_back(Diagnostic{DiagKind::lexical, Severity::error, Span{start, pos_},
                                            "unexpected character " + shown});
                continue;
            }
            out.push_back(Token{kind, std::string(src_.substr(start.offset, pos_.offset - start.offset)),
                                Span{start, pos_}});
        }
        out.push_back(Token{Tok::end, "", Span{pos_, pos_}});
        return out;
    }

   private:
    bool at_end() const { return pos_.offset >= src_.size(); }
    char peek() const { return src_[pos_.offset]; }

    char advance() {
        char c = src_[pos_.offset++];
        if (c == '\n') {
            ++pos_.line;
            pos_.col = 1;
        } else {
            ++pos_.col;
        }
        return c;
    }

    void skip_trivia() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '-' && pos_.offset + 1 < src_.size() && src_[pos_.offset + 1] == '-') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::vector<Diagnostic>& diags_;
    SourcePos pos_;
};

// --------------------------------------------------------------- parser

struct SyntaxError {
    Diagnostic diag;
};

class Parser {
   public:
    Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags)
        : toks_(std::move(toks)), diags_(diags) {}

    bool at_end() const { return peek().kind == Tok::end; }

    void expect_end() {
        if (!at_end()) fail("unexpected " + std::string(describe(peek().kind)) + " after expression");
    }

    Program program() {
        Program prog;
        while (!at_end()) {
            try {
                item(prog);
            } catch (const SyntaxError& e) {
                diags_.push_back(e.diag);
                recover();
            }
        }
        return prog;
    }

    // ------------------------------------------------------ types/sorts

    CompTypePtr type() {
        CompTypePtr lhs = type_atom();
        if (accept(Tok::arrow)) return arrow_type(lhs, type());
        return lhs;
    }

    ChannelSortPtr sort() {
        if (accept(Tok::kw_chan)) return chan_sort(sort());
        return sort_for_type(type());
    }

    // ------------------------------------------------------ computation

    CompExprPtr expr() {
        if (peek().kind == Tok::kw_fun) {
            SourcePos start = advance().span.begin;
            expect(Tok::lparen);
            Name param = ident(NameKind::variable);
            expect(Tok::colon);
            CompTypePtr t = type();
            expect(Tok::rparen);
            CompExprPtr body = expr();
            return make_comp(CompExpr::Lambda{std::move(param), t, body}, start);
        }
        return app();
    }

    // ------------------------------------------------------------- data

    DataExprPtr data() {
        if (peek().kind == Tok::lbracket) return object_literal();
        SourcePos start = peek().span.begin;
        CompExprPtr target = postfix();
        if (!(peek().kind == Tok::dot && peek(1).kind == Tok::lbracket)) {
            fail("expected an object literal '[...]' or an update 'o.[...]'");
        }
        advance();
        return update_tail(target, start);
    }

    // ----------------------------------------------------- coordination

    ProcTermPtr proc() {
        SourcePos start = peek().span.begin;
        ProcTermPtr lhs = sum_term();
        while (accept(Tok::bar)) {
            ProcTermPtr rhs = sum_term();
            lhs = make_proc(ProcTerm::Par{lhs, rhs}, start);
        }
        return lhs;
    }

   private:
    // ----------------------------------------------------------- tokens

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }

    const Token& advance() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        last_end_ = t.span.end;
        return t;
    }

    bool accept(Tok kind) {
        if (peek().kind != kind) return false;
        advance();
        return true;
    }

    const Token& expect(Tok kind) {
        if (peek().kind != kind) {
            fail("expected " + std::string(describe(kind)) + ", found " + found());
        }
        return advance();
    }

    std::string found() const {
        const Token& t = peek();
        if (t.kind == Tok::end) return "end of input";
        return "'" + t.text + "'";
    }

    [[noreturn]] void fail(std::string message) const {
        throw SyntaxError{Diagnostic{DiagKind::syntax, Severity::error, peek().span, std::move(message)}};
    }

    void report(DiagKind kind, Span span, std::string message) {
        diags_.push_back(Diagnostic{kind, Severity::error, span, std::move(message)});
    }

    Span span_from(SourcePos start) const { return Span{start, last_end_}; }

    CompExprPtr make_comp(CompExpr::Node node, SourcePos start) const {
        return CompExprPtr::make(std::move(node), span_from(start));
    }

    ProcTermPtr make_proc(ProcTerm::Node node, SourcePos start) const {
        return ProcTermPtr::make(std::move(node), span_from(start));
    }

    Name ident(NameKind kind) {
        const Token& t = peek();
        if (t.kind != Tok::ident) {
            if (t.kind != Tok::end && t.kind != Tok::number && is_keyword(t.text)) {
                fail("'" + t.text + "' is a reserved word and cannot be used as a name");
            }
            fail("expected identifier, found " + found());
        }
        advance();
        return Name{t.text, kind, t.span};
    }

    void recover() {
        // always make progress, then resynchronise on the next item keyword
        advance();
        while (!at_end()) {
            Tok k = peek().kind;
            if (k == Tok::kw_def || k == Tok::kw_proc || k == Tok::kw_system) return;
            if (k == Tok::kw_chan && (pos_ == 0 || (toks_[pos_ - 1].kind != Tok::colon &&
                                                     toks_[pos_ - 1].kind != Tok::kw_chan))) {
                return;
            }
            advance();
        }
    }

    // ------------------------------------------------------------ items

    void item(Program& prog) {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::kw_def: {
                advance();
                Name name = ident(NameKind::variable);
                expect(Tok::equals);
                CompExprPtr e = expr();
                prog.items.emplace_back(CompDef{std::move(name), e});
                return;
            }
            case Tok::kw_chan: {
                advance();
                Name name = ident(NameKind::channel);
                expect(Tok::colon);
                ChannelSortPtr s = sort();
                prog.items.emplace_back(ChanDecl{std::move(name), s});
                return;
            }
            case Tok::kw_proc: {
                advance();
                Name name = ident(NameKind::process);
                expect(Tok::equals);
                ProcTermPtr body = proc();
                prog.items.emplace_back(ProcDef{std::move(name), body});
                return;
            }
            case Tok::kw_system: {
                Span at = advance().span;
                expect(Tok::equals);
                ProcTermPtr body = proc();
                if (prog.system) {
                    report(DiagKind::duplicate_definition, at, "duplicate 'system' entry");
                } else {
                    prog.system = body;
                }
                return;
            }
            default:
                fail("expected 'def', 'chan', 'proc' or 'system', found " + found());
        }
    }

    CompTypePtr type_atom() {
        if (accept(Tok::kw_nat)) return nat_type();
        if (accept(Tok::lparen)) {
            CompTypePtr t = type();
            expect(Tok::rparen);
            return t;
        }
        if (peek().kind == Tok::lbrace) {
            advance();
            Signature sig;
            if (peek().kind == Tok::rbrace) fail("object types need at least one field");
            do {
                Name l = ident(NameKind::label);
                expect(Tok::colon);
                CompTypePtr t = type();
                if (!sig.emplace(l.text, t).second) {
                    report(DiagKind::duplicate_label, l.span, "duplicate field label '" + l.text + "'");
                }
            } while (accept(Tok::comma));
            expect(Tok::rbrace);
            return obj_type(std::move(sig));
        }
        fail("expected a type, found " + found());
    }

    static bool starts_atom(Tok k) {
        return k == Tok::ident || k == Tok::number || k == Tok::kw_z || k == Tok::kw_succ ||
               k == Tok::kw_rec || k == Tok::lparen;
    }

    CompExprPtr app() {
        SourcePos start = peek().span.begin;
        CompExprPtr fn = postfix();
        while (starts_atom(peek().kind)) {
            CompExprPtr arg = postfix();
            fn = make_comp(CompExpr::App{fn, arg}, start);
        }
        return fn;
    }

    CompExprPtr postfix() {
        SourcePos start = peek().span.begin;
        CompExprPtr e = atom();
        while (peek().kind == Tok::dot && peek(1).kind == Tok::ident) {
            advance();
            Name l = ident(NameKind::label);
            e = make_comp(CompExpr::FieldSel{e, std::move(l)}, start);
        }
        return e;
    }

    CompExprPtr atom() {
        const Token& t = peek();
        SourcePos start = t.span.begin;
        switch (t.kind) {
            case Tok::ident: {
                Name n = ident(NameKind::variable);
                return make_comp(CompExpr::Var{std::move(n)}, start);
            }
            case Tok::number: {
                Natural value(advance().text);
                return make_comp(CompExpr::Num{std::move(value)}, start);
            }
            case Tok::kw_z:
                advance();
                return make_comp(CompExpr::Zero{}, start);
            case Tok::kw_succ: {
                advance();
                expect(Tok::lparen);
                CompExprPtr arg = expr();
                expect(Tok::rparen);
                return make_comp(CompExpr::Succ{arg}, start);
            }
            case Tok::kw_rec: {
                advance();
                CompExprPtr scrutinee = app();
                expect(Tok::lbrace);
                expect(Tok::kw_z);
                expect(Tok::arrow);
                CompExprPtr zero_branch = expr();
                expect(Tok::bar);
                expect(Tok::kw_succ);
                expect(Tok::lparen);
                Name x = ident(NameKind::variable);
                expect(Tok::rparen);
                expect(Tok::kw_with);
                Name y = ident(NameKind::variable);
                expect(Tok::arrow);
                CompExprPtr succ_branch = expr();
                expect(Tok::rbrace);
                if (x.text == y.text) {
                    report(DiagKind::syntax, y.span,
                           "recursor binders must differ: '" + x.text + "' is used for both");
                }
                return make_comp(CompExpr::Rec{scrutinee, zero_branch, std::move(x), std::move(y),
                                               succ_branch},
                                 start);
            }
            case Tok::lparen: {
                advance();
                CompExprPtr e = expr();
                expect(Tok::rparen);
                return e;
            }
            case Tok::lbracket:
                fail("object literals are data expressions and may only appear as channel payloads");
            default:
                fail("expected an expression, found " + found());
        }
    }

    std::vector<FieldInit> field_list(Tok binder, DiagKind empty_kind, std::string_view what) {
        std::vector<FieldInit> out;
        std::set<std::string> seen;
        if (peek().kind == Tok::rbracket) {
            Span at = peek().span;
            if (empty_kind == DiagKind::syntax) fail(std::string(what));
            report(empty_kind, at, std::string(what));
            advance();
            return out;
        }
        do {
            Name l = ident(NameKind::label);
            expect(binder);
            CompExprPtr e = expr();
            if (!seen.insert(l.text).second) {
                report(DiagKind::duplicate_label, l.span, "duplicate field label '" + l.text + "'");
            }
            out.push_back(FieldInit{std::move(l), e});
        } while (accept(Tok::comma));
        expect(Tok::rbracket);
        return out;
    }

    DataExprPtr object_literal() {
        SourcePos start = expect(Tok::lbracket).span.begin;
        auto fields = field_list(Tok::equals, DiagKind::syntax, "object literals need at least one field");
        return DataExprPtr::make(DataExpr::MakeObject{std::move(fields)}, span_from(start));
    }

    DataExprPtr update_tail(CompExprPtr target, SourcePos start) {
        expect(Tok::lbracket);
        auto updates =
            field_list(Tok::larrow, DiagKind::empty_update, "object updates need at least one field");
        return DataExprPtr::make(DataExpr::UpdateObject{std::move(target), std::move(updates)},
                                 span_from(start));
    }

    Payload payload() {
        SourcePos start = peek().span.begin;
        if (peek().kind == Tok::lbracket) {
            DataExprPtr d = object_literal();
            return Payload{Payload::Data{d}, span_from(start)};
        }
        CompExprPtr e = expr();
        if (peek().kind == Tok::dot && peek(1).kind == Tok::lbracket) {
            advance();
            DataExprPtr d = update_tail(e, start);
            return Payload{Payload::Data{d}, span_from(start)};
        }
        return Payload{Payload::Comp{e}, span_from(start)};
    }

    ProcActionPtr action() {
        SourcePos start = peek().span.begin;
        if (accept(Tok::lbracket)) {
            Payload lhs = payload();
            expect(Tok::equals);
            Payload rhs = payload();
            expect(Tok::rbracket);
            ProcActionPtr inner = action();
            return ProcActionPtr::make(ProcAction::Match{std::move(lhs), std::move(rhs), inner},
                                       span_from(start));
        }
        Name chan = ident(NameKind::channel);
        if (accept(Tok::bang)) {
            expect(Tok::lparen);
            Payload p = payload();
            expect(Tok::rparen);
            return ProcActionPtr::make(ProcAction::Send{std::move(chan), std::move(p)}, span_from(start));
        }
        if (accept(Tok::question)) {
            expect(Tok::lparen);
            Name binder = ident(NameKind::variable);
            expect(Tok::rparen);
            return ProcActionPtr::make(ProcAction::Receive{std::move(chan), std::move(binder)},
                                       span_from(start));
        }
        fail("expected '!' or '?' after channel '" + chan.text + "'");
    }

    ProcTermPtr sum_term() {
        SourcePos start = peek().span.begin;
        ProcTermPtr lhs = unary();
        while (accept(Tok::plus)) {
            ProcTermPtr rhs = unary();
            lhs = make_proc(ProcTerm::Sum{lhs, rhs}, start);
        }
        return lhs;
    }

    ProcTermPtr unary() {
        const Token& t = peek();
        SourcePos start = t.span.begin;
        switch (t.kind) {
            case Tok::number:
                if (t.text != "0") fail("expected a process, found number '" + t.text + "'");
                advance();
                return make_proc(ProcTerm::Nil{}, start);
            case Tok::lparen: {
                advance();
                ProcTermPtr p = proc();
                expect(Tok::rparen);
                return p;
            }
            case Tok::bang: {
                advance();
                ProcTermPtr body = unary();
                return make_proc(ProcTerm::Repl{body}, start);
            }
            case Tok::kw_new: {
                advance();
                Name c = ident(NameKind::channel);
                expect(Tok::colon);
                ChannelSortPtr s = sort();
                expect(Tok::kw_in);
                ProcTermPtr body = proc();
                return make_proc(ProcTerm::Restrict{std::move(c), s, body}, start);
            }
            case Tok::lbracket:
                return prefixed(start);
            case Tok::ident:
                if (peek(1).kind == Tok::bang || peek(1).kind == Tok::question) return prefixed(start);
                {
                    Name n = ident(NameKind::process);
                    return make_proc(ProcTerm::Call{std::move(n)}, start);
                }
            default:
                fail("expected a process, found " + found());
        }
    }

    ProcTermPtr prefixed(SourcePos start) {
        ProcActionPtr a = action();
        expect(Tok::dot);
        ProcTermPtr cont = unary();
        return make_proc(ProcTerm::Prefix{a, cont}, start);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    SourcePos last_end_;
    std::vector<Diagnostic>& diags_;
};

// ------------------------------------------------------------- resolver

class Resolver {
   public:
    explicit Resolver(std::vector<Diagnostic>& diags) : diags_(diags) {}

    Program program(const Program& raw, ParseScope globals) {
        Program out;
        for (const Item& it : raw.items) {
            const Name& n = item_name(it);
            if (globals.count(n.text)) {
                report(DiagKind::duplicate_definition, n.span, "duplicate definition of '" + n.text + "'");
            }
            std::visit(
                [&](const auto& i) {
                    using I = std::decay_t<decltype(i)>;
                    if constexpr (std::is_same_v<I, CompDef>) {
                        out.items.emplace_back(CompDef{i.name, comp(i.expr, globals)});
                        globals[i.name.text] = NameInfo{NameKind::variable, {}};
                    } else if constexpr (std::is_same_v<I, ChanDecl>) {
                        out.items.emplace_back(i);
                        globals[i.name.text] = NameInfo{NameKind::channel, i.sort};
                    } else {
                        out.items.emplace_back(ProcDef{i.name, proc(i.body, globals)});
                        globals[i.name.text] = NameInfo{NameKind::process, {}};
                    }
                },
                it);
        }
        if (raw.system) out.system = proc(raw.system, globals);
        return out;
    }

    CompExprPtr comp(const CompExprPtr& e, const ParseScope& scope) {
        std::visit(
            [&](const auto& n) {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, CompExpr::Var>) {
                    require(n.name, scope);
                } else if constexpr (std::is_same_v<N, CompExpr::Succ>) {
                    comp(n.arg, scope);
                } else if constexpr (std::is_same_v<N, CompExpr::Rec>) {
                    comp(n.scrutinee, scope);
                    comp(n.zero_branch, scope);
                    ParseScope inner = scope;
                    inner[n.succ_binder.text] = NameInfo{NameKind::variable, {}};
                    inner[n.rec_binder.text] = NameInfo{NameKind::variable, {}};
                    comp(n.succ_branch, inner);
                } else if constexpr (std::is_same_v<N, CompExpr::Lambda>) {
                    ParseScope inner = scope;
                    inner[n.param.text] = NameInfo{NameKind::variable, {}};
                    comp(n.body, inner);
                } else if constexpr (std::is_same_v<N, CompExpr::App>) {
                    comp(n.fn, scope);
                    comp(n.arg, scope);
                } else if constexpr (std::is_same_v<N, CompExpr::FieldSel>) {
                    comp(n.subject, scope);
                }
            },
            e->node);
        return e;
    }

    DataExprPtr data(const DataExprPtr& d, const ParseScope& scope) {
        std::visit(
            [&](const auto& n) {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, DataExpr::UpdateObject>) {
                    comp(n.target, scope);
                    for (const auto& f : n.updates) comp(f.value, scope);
                } else {
                    for (const auto& f : n.fields) comp(f.value, scope);
                }
            },
            d->node);
        return d;
    }

    Payload payload(const Payload& p, const ParseScope& scope) {
        if (const auto* c = std::get_if<Payload::Comp>(&p.node)) {
            if (const auto* v = std::get_if<CompExpr::Var>(&c->expr->node)) {
                auto it = scope.find(v->name.text);
                if (it != scope.end() && it->second.kind == NameKind::channel) {
                    Name n = v->name;
                    n.kind = NameKind::channel;
                    return Payload{Payload::ChanName{std::move(n)}, p.span};
                }
            }
            comp(c->expr, scope);
            return p;
        }
        if (const auto* d = std::get_if<Payload::Data>(&p.node)) {
            data(d->expr, scope);
            return p;
        }
        require(std::get<Payload::ChanName>(p.node).name, scope);
        return p;
    }

    /// Returns the resolved action and the scope its continuation sees.
    std::pair<ProcActionPtr, ParseScope> action(const ProcActionPtr& a, const ParseScope& scope) {
        return std::visit(
            [&](const auto& n) -> std::pair<ProcActionPtr, ParseScope> {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, ProcAction::Send>) {
                    require(n.chan, scope);
                    auto out = ProcActionPtr::make(ProcAction::Send{n.chan, payload(n.payload, scope)}, a->span);
                    return {out, scope};
                } else if constexpr (std::is_same_v<N, ProcAction::Receive>) {
                    const NameInfo* ch = require(n.chan, scope);
                    Name binder = n.binder;
                    NameInfo info{NameKind::variable, {}};
                    if (ch && ch->kind == NameKind::channel && ch->sort) {
                        if (const auto* cc = std::get_if<ChannelSort::CarriesChan>(&ch->sort->node)) {
                            info = NameInfo{NameKind::channel, cc->inner};
                        }
                    }
                    binder.kind = info.kind;
                    ParseScope inner = scope;
                    inner[binder.text] = info;
                    auto out = ProcActionPtr::make(ProcAction::Receive{n.chan, std::move(binder)}, a->span);
                    return {out, std::move(inner)};
                } else {
                    Payload lhs = payload(n.left, scope);
                    Payload rhs = payload(n.right, scope);
                    auto [inner, next] = action(n.inner, scope);
                    auto out = ProcActionPtr::make(ProcAction::Match{std::move(lhs), std::move(rhs), inner},
                                                   a->span);
                    return {out, std::move(next)};
                }
            },
            a->node);
    }

    ProcTermPtr proc(const ProcTermPtr& p, const ParseScope& scope) {
        return std::visit(
            [&](const auto& n) -> ProcTermPtr {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, ProcTerm::Nil>) {
                    return p;
                } else if constexpr (std::is_same_v<N, ProcTerm::Prefix>) {
                    auto [act, inner] = action(n.action, scope);
                    return ProcTermPtr::make(ProcTerm::Prefix{act, proc(n.continuation, inner)}, p->span);
                } else if constexpr (std::is_same_v<N, ProcTerm::Sum>) {
                    return ProcTermPtr::make(ProcTerm::Sum{proc(n.left, scope), proc(n.right, scope)},
                                             p->span);
                } else if constexpr (std::is_same_v<N, ProcTerm::Par>) {
                    return ProcTermPtr::make(ProcTerm::Par{proc(n.left, scope), proc(n.right, scope)},
                                             p->span);
                } else if constexpr (std::is_same_v<N, ProcTerm::Restrict>) {
                    ParseScope inner = scope;
                    inner[n.chan.text] = NameInfo{NameKind::channel, n.sort};
                    return ProcTermPtr::make(ProcTerm::Restrict{n.chan, n.sort, proc(n.body, inner)},
                                             p->span);
                } else if constexpr (std::is_same_v<N, ProcTerm::Repl>) {
                    return ProcTermPtr::make(ProcTerm::Repl{proc(n.body, scope)}, p->span);
                } else {
                    const NameInfo* info = require(n.name, scope);
                    if (info && info->kind != NameKind::process) {
                        report(DiagKind::unbound_name, n.name.span,
                               "'" + n.name.text + "' is not a process definition");
                    }
                    return p;
                }
            },
            p->node);
    }

   private:
    const NameInfo* require(const Name& n, const ParseScope& scope) {
        auto it = scope.find(n.text);
        if (it == scope.end()) {
            report(DiagKind::unbound_name, n.span, "unbound name '" + n.text + "'");
            return nullptr;
        }
        return &it->second;
    }

    void report(DiagKind kind, Span span, std::string message) {
        diags_.push_back(Diagnostic{kind, Severity::error, span, std::move(message)});
    }

    std::vector<Diagnostic>& diags_;
};

template <class T, class F>
ParseResult<T> parse_fragment(std::string_view text, F&& body) {
    ParseResult<T> result;
    std::vector<Token> toks = Lexer(text, result.diagnostics).run();
    Parser parser(std::move(toks), result.diagnostics);
    try {
        T value = body(parser, result.diagnostics);
        parser.expect_end();
        result.value = std::move(value);
    } catch (const SyntaxError& e) {
        result.diagnostics.push_back(e.diag);
    }
    return result;
}

}  // namespace

ParseScope scope_of(const Program& program) {
    ParseScope scope;
    for (const Item& it : program.items) {
        std::visit(
            [&](const auto& i) {
                using I = std::decay_t<decltype(i)>;
                if constexpr (std::is_same_v<I, CompDef>) {
                    scope[i.name.text] = NameInfo{NameKind::variable, {}};
                } else if constexpr (std::is_same_v<I, ChanDecl>) {
                    scope[i.name.text] = NameInfo{NameKind::channel, i.sort};
                } else {
                    scope[i.name.text] = NameInfo{NameKind::process, {}};
                }
            },
            it);
    }
    return scope;
}

ParseResult<Program> parse_program(std::string_view text, const ParseScope* outer) {
    ParseResult<Program> result;
    std::vector<Token> toks = Lexer(text, result.diagnostics).run();
    Parser parser(std::move(toks), result.diagnostics);
    Program raw = parser.program();
    Resolver resolver(result.diagnostics);
    result.value = resolver.program(raw, outer ? *outer : ParseScope{});
    return result;
}

ParseResult<CompExprPtr> parse_comp_expr(std::string_view text, const ParseScope* scope) {
    return parse_fragment<CompExprPtr>(text, [&](Parser& p, std::vector<Diagnostic>& diags) {
        CompExprPtr e = p.expr();
        p.expect_end();
        if (scope) Resolver(diags).comp(e, *scope);
        return e;
    });
}

ParseResult<DataExprPtr> parse_data_expr(std::string_view text, const ParseScope* scope) {
    return parse_fragment<DataExprPtr>(text, [&](Parser& p, std::vector<Diagnostic>& diags) {
        DataExprPtr d = p.data();
        p.expect_end();
        if (scope) Resolver(diags).data(d, *scope);
        return d;
    });
}

ParseResult<ProcTermPtr> parse_proc_term(std::string_view text, const ParseScope* scope) {
    return parse_fragment<ProcTermPtr>(text, [&](Parser& p, std::vector<Diagnostic>& diags) {
        ProcTermPtr t = p.proc();
        p.expect_end();
        if (scope) t = Resolver(diags).proc(t, *scope);
        return t;
    });
}

ParseResult<CompTypePtr> parse_comp_type(std::string_view text) {
    return parse_fragment<CompTypePtr>(text, [](Parser& p, std::vector<Diagnostic>&) { return p.type(); });
}

ParseResult<ChannelSortPtr> parse_channel_sort(std::string_view text) {
    return parse_fragment<ChannelSortPtr>(text, [](Parser& p, std::vector<Diagnostic>&) { return p.sort(); });
}

}  // namespace mlg
