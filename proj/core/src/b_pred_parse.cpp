#include "scb/b_pred_parse.hpp"

#include "scb/diag.hpp"

#include <cctype>
#include <vector>

namespace scb {

namespace {

struct Tok {
    enum class Kind { Ident, Int, Sym, End } kind = Kind::End;
    std::string text;
    long long value = 0;
};

std::vector<Tok> tokenize(std::string_view s) {
    std::vector<Tok> out;
    size_t i = 0;
    auto sym = [&](std::string text) { out.push_back({Tok::Kind::Sym, std::move(text), 0}); };
    while (i < s.size()) {
        unsigned char c = s[i];
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (std::isalpha(c) || c == '_') {
            size_t j = i;
            while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_'))
                ++j;
            out.push_back({Tok::Kind::Ident, std::string(s.substr(i, j - i)), 0});
            i = j;
            continue;
        }
        if (std::isdigit(c)) {
            size_t j = i;
            while (j < s.size() && std::isdigit((unsigned char)s[j]))
                ++j;
            Tok t{Tok::Kind::Int, std::string(s.substr(i, j - i)), 0};
            t.value = std::stoll(t.text);
            out.push_back(std::move(t));
            i = j;
            continue;
        }
        auto two = s.substr(i, 2);
        if (two == "=>" || two == "/=" || two == "<=" || two == ">=" || two == "..") {
            sym(std::string(two));
            i += 2;
            continue;
        }
        switch (c) {
        case '&': case '(': case ')': case '=': case '<': case '>':
        case ':': case '+': case '-': case '*': case '/': case ',':
            sym(std::string(1, (char)c));
            ++i;
            continue;
        default:
            throw TranslateError("invariant pragma: unexpected character '" +
                                 std::string(1, (char)c) + "'");
        }
    }
    out.push_back({});
    return out;
}

class PredParser {
public:
    explicit PredParser(std::string_view text) : toks_(tokenize(text)) {}

    BPredPtr run() {
        auto p = parse_pred();
        if (!at_end())
            fail("trailing input after predicate");
        return p;
    }

private:
    std::vector<Tok> toks_;
    size_t at_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw TranslateError("invariant pragma: " + msg);
    }

    const Tok& cur() const { return toks_[at_]; }
    bool at_end() const { return cur().kind == Tok::Kind::End; }
    bool peek_sym(const std::string& s) const {
        return cur().kind == Tok::Kind::Sym && cur().text == s;
    }
    bool peek_word(const std::string& s) const {
        return cur().kind == Tok::Kind::Ident && cur().text == s;
    }
    bool accept_sym(const std::string& s) {
        if (peek_sym(s)) {
            ++at_;
            return true;
        }
        return false;
    }
    bool accept_word(const std::string& s) {
        if (peek_word(s)) {
            ++at_;
            return true;
        }
        return false;
    }
    void expect_sym(const std::string& s) {
        if (!accept_sym(s))
            fail("expected '" + s + "'");
    }

    BPredPtr parse_pred() { return parse_implication(); }

    BPredPtr parse_implication() {
        auto lhs = parse_disjunction();
        if (accept_sym("=>"))
            return b_implies(std::move(lhs), parse_implication());
        return lhs;
    }

    BPredPtr parse_disjunction() {
        auto lhs = parse_conjunction();
        while (accept_word("or"))
            lhs = [&] {
                auto p = std::make_unique<BPred>();
                p->kind = BPred::Kind::Or;
                p->preds.push_back(std::move(lhs));
                p->preds.push_back(parse_conjunction());
                return p;
            }();
        return lhs;
    }

    BPredPtr parse_conjunction() {
        auto lhs = parse_negation();
        while (accept_sym("&"))
            lhs = b_and(std::move(lhs), parse_negation());
        return lhs;
    }

    BPredPtr parse_negation() {
        if (accept_word("not")) {
            expect_sym("(");
            auto inner = parse_pred();
            expect_sym(")");
            return b_not(std::move(inner));
        }
        return parse_atom();
    }

    BPredPtr parse_atom() {
        // a comparison whose left side may be parenthesized arithmetic, or a
        // parenthesized predicate; try the comparison first and backtrack
        size_t save = at_;
        try {
            return parse_comparison();
        } catch (const TranslateError&) {
            at_ = save;
        }
        expect_sym("(");
        auto inner = parse_pred();
        expect_sym(")");
        return inner;
    }

    BPredPtr parse_comparison() {
        auto lhs = parse_expr();
        if (accept_sym(":")) {
            auto domain = parse_domain();
            return b_member(std::move(lhs), std::move(domain));
        }
        BCmpOp op;
        if (accept_sym("=")) op = BCmpOp::Eq;
        else if (accept_sym("/=")) op = BCmpOp::Ne;
        else if (accept_sym("<=")) op = BCmpOp::Le;
        else if (accept_sym(">=")) op = BCmpOp::Ge;
        else if (accept_sym("<")) op = BCmpOp::Lt;
        else if (accept_sym(">")) op = BCmpOp::Gt;
        else fail("expected a comparison operator");
        return b_compare(op, std::move(lhs), parse_expr());
    }

    BDomainPtr parse_domain() {
        size_t save = at_;
        // interval a..b
        try {
            auto lo = parse_expr();
            if (accept_sym(".."))
                return b_domain_interval(std::move(lo), parse_expr());
        } catch (const TranslateError&) {
        }
        at_ = save;
        if (cur().kind != Tok::Kind::Ident)
            fail("expected a set name or interval");
        auto d = b_domain_name(cur().text);
        ++at_;
        return d;
    }

    BExprPtr parse_expr() {
        auto lhs = parse_term();
        for (;;) {
            if (accept_sym("+"))
                lhs = b_binary(BBinOp::Add, std::move(lhs), parse_term());
            else if (accept_sym("-"))
                lhs = b_binary(BBinOp::Sub, std::move(lhs), parse_term());
            else
                return lhs;
        }
    }

    BExprPtr parse_term() {
        auto lhs = parse_primary();
        for (;;) {
            if (accept_sym("*"))
                lhs = b_binary(BBinOp::Mul, std::move(lhs), parse_primary());
            else if (accept_sym("/"))
                lhs = b_binary(BBinOp::Div, std::move(lhs), parse_primary());
            else if (accept_word("mod"))
                lhs = b_binary(BBinOp::Mod, std::move(lhs), parse_primary());
            else
                return lhs;
        }
    }

    BExprPtr parse_primary() {
        if (cur().kind == Tok::Kind::Int) {
            auto e = b_int(cur().value);
            ++at_;
            return e;
        }
        if (accept_sym("-"))
            return b_binary(BBinOp::Sub, b_int(0), parse_primary());
        if (accept_word("TRUE"))
            return b_bool(true);
        if (accept_word("FALSE"))
            return b_bool(false);
        if (cur().kind == Tok::Kind::Ident) {
            std::string name = cur().text;
            ++at_;
            if (accept_sym("(")) {
                auto idx = parse_expr();
                expect_sym(")");
                return b_apply(std::move(name), std::move(idx));
            }
            return b_ref(std::move(name));
        }
        if (accept_sym("(")) {
            auto inner = parse_expr();
            expect_sym(")");
            return inner;
        }
        fail("expected an expression");
    }
};

} // namespace

BPredPtr parse_b_predicate(std::string_view text) {
    return PredParser(text).run();
}

} // namespace scb
