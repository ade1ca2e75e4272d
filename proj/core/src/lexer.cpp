#include "scb/lexer.hpp"

#include <cctype>

namespace scb {

namespace {

bool ident_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
bool ident_char(char c) { return std::isalnum((unsigned char)c) || c == '_'; }

} // namespace

LexOutput lex(std::string_view src) {
    LexOutput out;
    size_t i = 0;
    int line = 1, col = 1;

    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto push = [&](TokKind kind, std::string text, SourcePos pos, long long v = 0) {
        out.tokens.push_back(Token{kind, std::move(text), v, pos});
    };

    while (i < src.size()) {
        char c = src[i];
        SourcePos pos{line, col};
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            size_t end = src.find('\n', i);
            std::string_view comment = src.substr(i, end == std::string_view::npos ? src.size() - i : end - i);
            if (comment.rfind("--@", 0) == 0) {
                std::string_view body = comment.substr(3);
                size_t sp = body.find_first_of(" \t");
                Pragma p;
                p.pos = pos;
                if (sp == std::string_view::npos) {
                    p.key = std::string(body);
                } else {
                    p.key = std::string(body.substr(0, sp));
                    size_t vstart = body.find_first_not_of(" \t", sp);
                    if (vstart != std::string_view::npos)
                        p.value = std::string(body.substr(vstart));
                    while (!p.value.empty() && (p.value.back() == ' ' || p.value.back() == '\t'))
                        p.value.pop_back();
                }
                out.pragmas.push_back(std::move(p));
            }
            advance(comment.size());
            continue;
        }
        if (std::isdigit((unsigned char)c)) {
            size_t j = i;
            while (j < src.size() && std::isdigit((unsigned char)src[j]))
                ++j;
            std::string text(src.substr(i, j - i));
            long long v = 0;
            try {
                v = std::stoll(text);
            } catch (const std::out_of_range&) {
                throw FrontendError(pos, "integer literal out of range: " + text);
            }
            push(TokKind::Int, text, pos, v);
            advance(j - i);
            continue;
        }
        if (ident_start(c)) {
            size_t j = i;
            while (j < src.size() && ident_char(src[j]))
                ++j;
            std::string text(src.substr(i, j - i));
            if (text == "_")
                push(TokKind::Underscore, text, pos);
            else
                push(TokKind::Ident, text, pos);
            advance(j - i);
            continue;
        }

        auto two = src.substr(i, 2);
        if (two == "<<") { push(TokKind::LShift, "<<", pos); advance(2); continue; }
        if (two == ">>") { push(TokKind::RShift, ">>", pos); advance(2); continue; }
        if (two == "<>") { push(TokKind::Ne, "<>", pos); advance(2); continue; }
        if (two == "<=") { push(TokKind::Le, "<=", pos); advance(2); continue; }
        if (two == ">=") { push(TokKind::Ge, ">=", pos); advance(2); continue; }

        switch (c) {
        case '(': push(TokKind::LParen, "(", pos); break;
        case ')': push(TokKind::RParen, ")", pos); break;
        case '{': push(TokKind::LBrace, "{", pos); break;
        case '}': push(TokKind::RBrace, "}", pos); break;
        case '[': push(TokKind::LBracket, "[", pos); break;
        case ']': push(TokKind::RBracket, "]", pos); break;
        case ',': push(TokKind::Comma, ",", pos); break;
        case ';': push(TokKind::Semi, ";", pos); break;
        case ':': push(TokKind::Colon, ":", pos); break;
        case '.': push(TokKind::Dot, ".", pos); break;
        case '|': push(TokKind::Bar, "|", pos); break;
        case '+': push(TokKind::Plus, "+", pos); break;
        case '-': push(TokKind::Minus, "-", pos); break;
        case '*': push(TokKind::Star, "*", pos); break;
        case '/': push(TokKind::Slash, "/", pos); break;
        case '=': push(TokKind::Eq, "=", pos); break;
        case '<': push(TokKind::Lt, "<", pos); break;
        case '>': push(TokKind::Gt, ">", pos); break;
        case '^': push(TokKind::Caret, "^", pos); break;
        default:
            throw FrontendError(pos, std::string("unexpected character '") + c + "'");
        }
        advance(1);
    }
    out.tokens.push_back(Token{TokKind::Eof, "", 0, SourcePos{line, col}});
    return out;
}

} // namespace scb
