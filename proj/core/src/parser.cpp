#include "scb/parser.hpp"

#include "scb/lexer.hpp"

#include <set>
#include <unordered_set>

namespace scb {

namespace {

const std::unordered_set<std::string> kReserved = {
    "const", "type", "enum", "node", "function", "returns",
    "var", "let", "tel", "activate", "if", "then", "else",
    "automaton", "initial", "state", "unless", "restart",
    "fby", "make", "case", "of", "and", "or", "not", "mod",
    "true", "false", "default",
};

class Parser {
public:
    explicit Parser(std::string_view source) {
        auto lexed = lex(source);
        tokens_ = std::move(lexed.tokens);
        program_.pragmas = std::move(lexed.pragmas);
    }

    ScadeProgram run() {
        while (!at_eof()) {
            if (accept_kw("const")) {
                parse_const_block();
            } else if (accept_kw("type")) {
                parse_type_block();
            } else if (peek_kw("node") || peek_kw("function")) {
                parse_node();
            } else {
                fail("expected 'const', 'type', 'node' or 'function'");
            }
        }
        check_unique_toplevel();
        return std::move(program_);
    }

private:
    std::vector<Token> tokens_;
    size_t at_ = 0;
    ScadeProgram program_;

    const Token& cur() const { return tokens_[at_]; }
    const Token& peek(size_t n = 1) const {
        return tokens_[std::min(at_ + n, tokens_.size() - 1)];
    }
    bool at_eof() const { return cur().kind == TokKind::Eof; }

    [[noreturn]] void fail(const std::string& expected) const {
        std::string got = cur().kind == TokKind::Eof ? "end of input" : "'" + cur().text + "'";
        throw FrontendError(cur().pos, "syntax error: expected " + expected + ", got " + got);
    }

    Token take() { return tokens_[at_++]; }

    bool peek_is(TokKind k) const { return cur().kind == k; }
    bool peek_kw(const std::string& kw) const {
        return cur().kind == TokKind::Ident && cur().text == kw;
    }

    bool accept(TokKind k) {
        if (peek_is(k)) {
            ++at_;
            return true;
        }
        return false;
    }
    bool accept_kw(const std::string& kw) {
        if (peek_kw(kw)) {
            ++at_;
            return true;
        }
        return false;
    }

    Token expect(TokKind k, const std::string& what) {
        if (!peek_is(k))
            fail(what);
        return take();
    }
    void expect_kw(const std::string& kw) {
        if (!peek_kw(kw))
            fail("'" + kw + "'");
        ++at_;
    }

    std::string expect_name(const std::string& what) {
        if (cur().kind != TokKind::Ident)
            fail(what);
        if (kReserved.count(cur().text))
            throw FrontendError(cur().pos, "reserved word '" + cur().text + "' used as " + what);
        return take().text;
    }

    // `..` in `returns .. ;`
    void expect_dots() {
        expect(TokKind::Dot, "'..'");
        expect(TokKind::Dot, "'..'");
    }

    // ---- declarations ----------------------------------------------------

    void parse_const_block() {
        do {
            ConstDecl decl;
            decl.pos = cur().pos;
            decl.name = expect_name("constant name");
            expect(TokKind::Colon, "':'");
            decl.type = parse_type_expr();
            expect(TokKind::Eq, "'='");
            decl.value = parse_literal();
            expect(TokKind::Semi, "';'");
            program_.consts.push_back(std::move(decl));
        } while (cur().kind == TokKind::Ident && !is_toplevel_kw());
    }

    void parse_type_block() {
        do {
            TypeDecl decl;
            decl.pos = cur().pos;
            decl.name = expect_name("type name");
            expect(TokKind::Eq, "'='");
            if (accept_kw("enum")) {
                auto t = std::make_shared<TypeExpr>();
                t->kind = TypeExpr::Kind::Enum;
                t->name = decl.name;
                t->pos = decl.pos;
                expect(TokKind::LBrace, "'{'");
                t->members.push_back(expect_name("enum member"));
                while (accept(TokKind::Comma))
                    t->members.push_back(expect_name("enum member"));
                expect(TokKind::RBrace, "'}'");
                decl.type = t;
            } else {
                decl.type = parse_type_expr();
                if (decl.type->kind == TypeExpr::Kind::Struct)
                    decl.type->name = decl.name;
            }
            expect(TokKind::Semi, "';'");
            program_.types.push_back(std::move(decl));
        } while (cur().kind == TokKind::Ident && !is_toplevel_kw());
    }

    bool is_toplevel_kw() const {
        return peek_kw("const") || peek_kw("type") || peek_kw("node") || peek_kw("function");
    }

    TypePtr parse_type_expr() {
        TypePtr t = parse_prim_type();
        while (accept(TokKind::Caret)) {
            auto arr = std::make_shared<TypeExpr>();
            arr->kind = TypeExpr::Kind::Array;
            arr->elem = t;
            arr->pos = t->pos;
            if (peek_is(TokKind::Int)) {
                arr->size = take().int_val;
            } else {
                arr->size_name = expect_name("array size");
            }
            t = arr;
        }
        return t;
    }

    TypePtr parse_prim_type() {
        auto t = std::make_shared<TypeExpr>();
        t->pos = cur().pos;
        if (accept(TokKind::LBrace)) {
            t->kind = TypeExpr::Kind::Struct;
            do {
                std::string fname = expect_name("field name");
                expect(TokKind::Colon, "':'");
                t->fields.emplace_back(fname, parse_type_expr());
            } while (accept(TokKind::Comma));
            expect(TokKind::RBrace, "'}'");
            return t;
        }
        if (cur().kind != TokKind::Ident)
            fail("type");
        std::string name = cur().text;
        if (auto base = base_type_from_name(name)) {
            ++at_;
            t->kind = TypeExpr::Kind::Base;
            t->base = *base;
            return t;
        }
        t->kind = TypeExpr::Kind::Named;
        t->name = expect_name("type name");
        return t;
    }

    // ---- nodes -----------------------------------------------------------

    void parse_node() {
        NodeDecl node;
        node.pos = cur().pos;
        node.is_function = peek_kw("function");
        ++at_; // node | function
        node.name = expect_name("node name");
        expect(TokKind::LParen, "'('");
        node.inputs = parse_params();
        expect(TokKind::RParen, "')'");
        expect_kw("returns");
        expect(TokKind::LParen, "'('");
        node.outputs = parse_params();
        expect(TokKind::RParen, "')'");
        if (accept(TokKind::Semi)) {
            program_.nodes.push_back(std::move(node));
            return; // declaration without a body
        }
        if (peek_kw("var"))
            node.locals = parse_var_section();
        expect_kw("let");
        while (!peek_kw("tel"))
            node.body.push_back(parse_body_item());
        expect_kw("tel");
        program_.nodes.push_back(std::move(node));
    }

    std::vector<VarDecl> parse_params() {
        std::vector<VarDecl> out;
        if (peek_is(TokKind::RParen))
            return out;
        do {
            VarDecl v;
            v.pos = cur().pos;
            v.name = expect_name("parameter name");
            expect(TokKind::Colon, "':'");
            v.type = parse_type_expr();
            out.push_back(std::move(v));
        } while (accept(TokKind::Semi));
        return out;
    }

    std::vector<VarDecl> parse_var_section() {
        expect_kw("var");
        std::vector<VarDecl> out;
        while (!peek_kw("let")) {
            VarDecl v;
            v.pos = cur().pos;
            v.name = expect_name("variable name");
            expect(TokKind::Colon, "':'");
            v.type = parse_type_expr();
            expect(TokKind::Semi, "';'");
            out.push_back(std::move(v));
        }
        return out;
    }

    BodyItemPtr parse_body_item() {
        auto item = std::make_unique<BodyItem>();
        item->pos = cur().pos;
        if (peek_kw("automaton")) {
            item->kind = BodyItem::Kind::StateMachine;
            item->machine = parse_automaton();
        } else if (peek_kw("activate")) {
            item->kind = BodyItem::Kind::ActivateIf;
            item->activate = parse_activate();
        } else {
            item->kind = BodyItem::Kind::Equation;
            item->equation = parse_equation();
        }
        return item;
    }

    Equation parse_equation() {
        Equation eq;
        eq.pos = cur().pos;
        eq.lhs.push_back(expect_name("identifier"));
        while (accept(TokKind::Comma))
            eq.lhs.push_back(expect_name("identifier"));
        expect(TokKind::Eq, "'='");
        eq.rhs = parse_expr();
        expect(TokKind::Semi, "';'");
        return eq;
    }

    ActivateIf parse_activate() {
        expect_kw("activate");
        ActivateIf act;
        act.name = expect_name("block name");
        expect_kw("if");
        expect(TokKind::LParen, "'('");
        act.condition = parse_expr();
        expect(TokKind::RParen, "')'");
        expect_kw("then");
        parse_branch(act.then_locals, act.then_items);
        expect_kw("else");
        parse_branch(act.else_locals, act.else_items);
        expect_kw("returns");
        expect_dots();
        expect(TokKind::Semi, "';'");
        return act;
    }

    void parse_branch(std::vector<VarDecl>& locals, std::vector<BodyItemPtr>& items) {
        if (peek_kw("activate")) {
            // nested conditional block as the whole branch
            auto item = std::make_unique<BodyItem>();
            item->pos = cur().pos;
            item->kind = BodyItem::Kind::ActivateIf;
            item->activate = parse_activate();
            items.push_back(std::move(item));
            return;
        }
        if (peek_kw("var"))
            locals = parse_var_section();
        expect_kw("let");
        while (!peek_kw("tel"))
            items.push_back(parse_body_item());
        expect_kw("tel");
    }

    StateMachine parse_automaton() {
        expect_kw("automaton");
        StateMachine m;
        m.pos = cur().pos;
        m.name = expect_name("state machine name");
        while (peek_kw("initial") || peek_kw("state"))
            m.states.push_back(parse_state());
        expect_kw("returns");
        expect_dots();
        expect(TokKind::Semi, "';'");
        if (m.states.empty())
            throw FrontendError(m.pos, "state machine '" + m.name + "' has no states");
        return m;
    }

    StateDecl parse_state() {
        StateDecl s;
        s.pos = cur().pos;
        s.is_initial = accept_kw("initial");
        expect_kw("state");
        s.name = expect_name("state name");
        if (accept_kw("unless")) {
            while (peek_kw("if")) {
                Transition t;
                t.pos = cur().pos;
                expect_kw("if");
                t.condition = parse_expr();
                expect_kw("restart");
                t.target = expect_name("target state");
                expect(TokKind::Semi, "';'");
                s.transitions.push_back(std::move(t));
            }
            if (s.transitions.empty())
                fail("transition after 'unless'");
        }
        if (peek_kw("var") || peek_kw("let")) {
            if (peek_kw("var"))
                s.locals = parse_var_section();
            expect_kw("let");
            while (!peek_kw("tel"))
                s.body.push_back(parse_body_item());
            expect_kw("tel");
        }
        return s;
    }

    // ---- expressions -----------------------------------------------------

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        auto lhs = parse_and();
        while (peek_kw("or")) {
            auto pos = take().pos;
            lhs = make_binary(BinaryOp::Or, std::move(lhs), parse_and(), pos);
        }
        return lhs;
    }

    ExprPtr parse_and() {
        auto lhs = parse_not();
        while (peek_kw("and")) {
            auto pos = take().pos;
            lhs = make_binary(BinaryOp::And, std::move(lhs), parse_not(), pos);
        }
        return lhs;
    }

    ExprPtr parse_not() {
        if (peek_kw("not")) {
            auto pos = take().pos;
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Unary;
            e->unary_op = UnaryOp::Not;
            e->pos = pos;
            e->args.push_back(parse_not());
            return e;
        }
        return parse_cmp();
    }

    ExprPtr parse_cmp() {
        auto lhs = parse_add();
        BinaryOp op;
        switch (cur().kind) {
        case TokKind::Eq: op = BinaryOp::Eq; break;
        case TokKind::Ne: op = BinaryOp::Ne; break;
        case TokKind::Lt: op = BinaryOp::Lt; break;
        case TokKind::Le: op = BinaryOp::Le; break;
        case TokKind::Gt: op = BinaryOp::Gt; break;
        case TokKind::Ge: op = BinaryOp::Ge; break;
        default: return lhs;
        }
        auto pos = take().pos;
        return make_binary(op, std::move(lhs), parse_add(), pos);
    }

    ExprPtr parse_add() {
        auto lhs = parse_mul();
        while (peek_is(TokKind::Plus) || peek_is(TokKind::Minus)) {
            BinaryOp op = peek_is(TokKind::Plus) ? BinaryOp::Add : BinaryOp::Sub;
            auto pos = take().pos;
            lhs = make_binary(op, std::move(lhs), parse_mul(), pos);
        }
        return lhs;
    }

    ExprPtr parse_mul() {
        auto lhs = parse_unary();
        while (peek_is(TokKind::Star) || peek_is(TokKind::Slash) || peek_kw("mod")) {
            BinaryOp op = peek_is(TokKind::Star) ? BinaryOp::Mul
                        : peek_is(TokKind::Slash) ? BinaryOp::Div
                                                  : BinaryOp::Mod;
            auto pos = take().pos;
            lhs = make_binary(op, std::move(lhs), parse_unary(), pos);
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (peek_is(TokKind::Minus)) {
            auto pos = take().pos;
            if (peek_is(TokKind::Int)) {
                auto lit = make_int_lit(-take().int_val, pos);
                return parse_postfix_ops(std::move(lit));
            }
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Unary;
            e->unary_op = UnaryOp::Neg;
            e->pos = pos;
            e->args.push_back(parse_unary());
            return e;
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() { return parse_postfix_ops(parse_atom()); }

    ExprPtr parse_postfix_ops(ExprPtr e) {
        for (;;) {
            if (accept(TokKind::LBracket)) {
                auto idx = std::make_unique<Expr>();
                idx->kind = Expr::Kind::ArrayIndex;
                idx->pos = e->pos;
                idx->args.push_back(std::move(e));
                idx->args.push_back(parse_expr());
                expect(TokKind::RBracket, "']'");
                e = std::move(idx);
            } else if (peek_is(TokKind::Dot) && peek(1).kind == TokKind::Ident) {
                ++at_;
                auto fa = std::make_unique<Expr>();
                fa->kind = Expr::Kind::FieldAccess;
                fa->pos = e->pos;
                fa->name = expect_name("field name");
                fa->args.push_back(std::move(e));
                e = std::move(fa);
            } else {
                return e;
            }
        }
    }

    bool peek_hof_app() const {
        // '(' variant [INT] op '<<'
        if (!peek_is(TokKind::LParen) || peek(1).kind != TokKind::Ident)
            return false;
        if (!hof_variant_from_name(peek(1).text))
            return false;
        size_t k = 2;
        if (peek(k).kind == TokKind::Int)
            ++k;
        return peek(k).kind == TokKind::Ident && peek(k + 1).kind == TokKind::LShift;
    }

    ExprPtr parse_atom() {
        SourcePos pos = cur().pos;
        if (peek_is(TokKind::Int))
            return make_int_lit(take().int_val, pos);
        if (peek_kw("true")) { ++at_; return make_bool_lit(true, pos); }
        if (peek_kw("false")) { ++at_; return make_bool_lit(false, pos); }

        if (peek_kw("if")) {
            ++at_;
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::IfThenElse;
            e->pos = pos;
            e->args.push_back(parse_expr());
            expect_kw("then");
            e->args.push_back(parse_expr());
            expect_kw("else");
            e->args.push_back(parse_expr());
            return e;
        }

        if (peek_kw("fby")) {
            ++at_;
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Fby;
            e->pos = pos;
            expect(TokKind::LParen, "'('");
            e->fby_input = parse_expr();
            expect(TokKind::Semi, "';'");
            if (peek_is(TokKind::Int))
                e->fby_depth = take().int_val;
            else
                e->fby_depth_name = expect_name("delay depth");
            expect(TokKind::Semi, "';'");
            e->fby_init = parse_literal();
            expect(TokKind::RParen, "')'");
            return e;
        }

        if (peek_hof_app())
            return parse_hof();

        if (peek_is(TokKind::LParen) && peek(1).kind == TokKind::Ident && peek(1).text == "make") {
            at_ += 2;
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::StructMake;
            e->pos = pos;
            e->name = expect_name("struct type name");
            expect(TokKind::RParen, "')'");
            expect(TokKind::LParen, "'('");
            e->args = parse_arg_list();
            expect(TokKind::RParen, "')'");
            return e;
        }

        if (peek_is(TokKind::LParen) && peek(1).kind == TokKind::Ident && peek(1).text == "case") {
            at_ += 2;
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::CaseOf;
            e->pos = pos;
            e->scrutinee = parse_expr();
            expect_kw("of");
            while (accept(TokKind::Bar)) {
                CaseArm arm;
                if (accept(TokKind::Underscore)) {
                    arm.pattern = nullptr;
                } else {
                    arm.pattern = parse_literal();
                }
                expect(TokKind::Colon, "':'");
                arm.value = parse_expr();
                e->case_arms.push_back(std::move(arm));
            }
            expect(TokKind::RParen, "')'");
            if (e->case_arms.empty())
                throw FrontendError(pos, "case expression has no arms");
            return e;
        }

        if (accept(TokKind::LParen)) {
            auto e = parse_expr();
            expect(TokKind::RParen, "')'");
            return e;
        }

        if (cur().kind == TokKind::Ident) {
            if (kReserved.count(cur().text))
                fail("expression");
            std::string name = take().text;
            if (accept(TokKind::LParen)) {
                auto call = std::make_unique<Expr>();
                call->kind = Expr::Kind::Call;
                call->pos = pos;
                call->name = std::move(name);
                call->args = parse_arg_list();
                expect(TokKind::RParen, "')'");
                return call;
            }
            return make_var_ref(std::move(name), pos);
        }
        fail("expression");
    }

    ExprPtr parse_hof() {
        SourcePos pos = cur().pos;
        expect(TokKind::LParen, "'('");
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::HigherOrder;
        e->pos = pos;
        e->hof_variant = *hof_variant_from_name(take().text);
        if (peek_is(TokKind::Int))
            e->hof_acc_count = (int)take().int_val;
        e->hof_op = expect_name("operator name");
        expect(TokKind::LShift, "'<<'");
        if (peek_is(TokKind::Int))
            e->hof_size = take().int_val;
        else
            e->hof_size_name = expect_name("iteration size");
        expect(TokKind::RShift, "'>>'");
        if (accept_kw("if"))
            e->hof_init_cond = parse_expr();
        if (accept_kw("default")) {
            expect(TokKind::LParen, "'('");
            e->hof_defaults = parse_arg_list();
            expect(TokKind::RParen, "')'");
        }
        expect(TokKind::RParen, "')'");
        expect(TokKind::LParen, "'('");
        // accumulator seeds (if any) come first; the typechecker splits them
        // off once the operator's signature is known
        e->hof_arrays = parse_arg_list();
        expect(TokKind::RParen, "')'");
        return e;
    }

    std::vector<ExprPtr> parse_arg_list() {
        std::vector<ExprPtr> out;
        if (peek_is(TokKind::RParen))
            return out;
        out.push_back(parse_expr());
        while (accept(TokKind::Comma))
            out.push_back(parse_expr());
        return out;
    }

    ExprPtr parse_literal() {
        SourcePos pos = cur().pos;
        if (peek_is(TokKind::Int))
            return make_int_lit(take().int_val, pos);
        if (peek_is(TokKind::Minus) && peek(1).kind == TokKind::Int) {
            ++at_;
            return make_int_lit(-take().int_val, pos);
        }
        if (peek_kw("true")) { ++at_; return make_bool_lit(true, pos); }
        if (peek_kw("false")) { ++at_; return make_bool_lit(false, pos); }
        if (cur().kind == TokKind::Ident && !kReserved.count(cur().text))
            return make_var_ref(take().text, pos); // constant or enum member
        fail("literal");
    }

    static ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::Binary;
        e->binary_op = op;
        e->pos = pos;
        e->args.push_back(std::move(lhs));
        e->args.push_back(std::move(rhs));
        return e;
    }

    void check_unique_toplevel() {
        std::set<std::string> seen;
        auto check = [&](const std::string& name, SourcePos pos) {
            if (!seen.insert(name).second)
                throw FrontendError(pos, "duplicate declaration of '" + name + "'");
        };
        for (const auto& t : program_.types) {
            check(t.name, t.pos);
            if (t.type->kind == TypeExpr::Kind::Enum)
                for (const auto& m : t.type->members)
                    check(m, t.pos); // enum members share the global namespace
        }
        for (const auto& c : program_.consts)
            check(c.name, c.pos);
        for (const auto& n : program_.nodes)
            check(n.name, n.pos);
    }
};

} // namespace

ScadeProgram parse_program(std::string_view source) {
    return Parser(source).run();
}

} // namespace scb
