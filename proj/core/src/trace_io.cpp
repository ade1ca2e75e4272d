#include "scb/trace_io.hpp"

#include "scb/typecheck.hpp"

#include <cctype>

namespace scb {

namespace {

class ValueParser {
public:
    ValueParser(std::string_view text, int line, const TypeExpr& type)
        : text_(text), line_(line) {
        value_ = parse(type);
        if (at_ != text_.size())
            fail("trailing characters after value");
    }

    Value take() { return std::move(value_); }

private:
    std::string_view text_;
    size_t at_ = 0;
    int line_;
    Value value_;

    [[noreturn]] void fail(const std::string& msg) const {
        throw FrontendError(SourcePos{line_, (int)at_ + 1}, "trace: " + msg);
    }

    char peek() const { return at_ < text_.size() ? text_[at_] : '\0'; }

    Value parse(const TypeExpr& type) {
        switch (type.kind) {
        case TypeExpr::Kind::Base: {
            if (type.base == BaseType::Bool) {
                if (text_.compare(at_, 4, "true") == 0) {
                    at_ += 4;
                    return Value::make_bool(true);
                }
                if (text_.compare(at_, 5, "false") == 0) {
                    at_ += 5;
                    return Value::make_bool(false);
                }
                fail("expected true or false");
            }
            bool neg = peek() == '-';
            if (neg)
                ++at_;
            if (!std::isdigit((unsigned char)peek()))
                fail("expected an integer");
            long long v = 0;
            while (std::isdigit((unsigned char)peek())) {
                v = v * 10 + (text_[at_] - '0');
                ++at_;
            }
            if (neg)
                v = -v;
            long long lo, hi;
            base_type_range(type.base, lo, hi);
            if (v < lo || v > hi)
                fail("value " + std::to_string(v) + " outside " + std::to_string(lo) + ".." +
                     std::to_string(hi));
            return Value::make_int(v, lo, hi);
        }
        case TypeExpr::Kind::Enum: {
            size_t start = at_;
            while (std::isalnum((unsigned char)peek()) || peek() == '_')
                ++at_;
            std::string member(text_.substr(start, at_ - start));
            for (const auto& m : type.members)
                if (m == member)
                    return Value::make_enum(type.name, member);
            fail("'" + member + "' is not a member of " + type.name);
        }
        case TypeExpr::Kind::Array: {
            if (peek() != '[')
                fail("expected '['");
            ++at_;
            std::vector<Value> cells;
            for (long long i = 0; i < type.size; ++i) {
                if (i && peek() == ',')
                    ++at_;
                cells.push_back(parse(*type.elem));
            }
            if (peek() != ']')
                fail("expected ']' after " + std::to_string(type.size) + " cells");
            ++at_;
            return Value::make_array(std::move(cells));
        }
        case TypeExpr::Kind::Struct: {
            if (peek() != '{')
                fail("expected '{'");
            ++at_;
            std::vector<std::pair<std::string, Value>> fields;
            for (size_t i = 0; i < type.fields.size(); ++i) {
                if (i && peek() == ',')
                    ++at_;
                const auto& [fname, ftype] = type.fields[i];
                if (text_.compare(at_, fname.size(), fname) != 0)
                    fail("expected field '" + fname + "'");
                at_ += fname.size();
                if (peek() != ':')
                    fail("expected ':'");
                ++at_;
                fields.emplace_back(fname, parse(*ftype));
            }
            if (peek() != '}')
                fail("expected '}'");
            ++at_;
            return Value::make_record(std::move(fields));
        }
        case TypeExpr::Kind::Named:
            break;
        }
        fail("unresolved input type");
    }
};

} // namespace

Trace parse_trace_text(std::string_view text, const NodeDecl& node, std::string provenance) {
    Trace trace;
    trace.provenance = std::move(provenance);
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos
                                                                               : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || line[first] == '#')
            continue;

        CycleInputs cycle;
        size_t i = first;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
                ++i;
            if (i >= line.size())
                break;
            size_t eq = line.find('=', i);
            if (eq == std::string_view::npos)
                throw FrontendError(SourcePos{line_no, (int)i + 1}, "trace: expected name=value");
            std::string name(line.substr(i, eq - i));
            size_t vend = line.find(' ', eq + 1);
            if (vend == std::string_view::npos)
                vend = line.size();
            std::string_view vtext = line.substr(eq + 1, vend - eq - 1);
            const VarDecl* input = nullptr;
            for (const auto& in : node.inputs)
                if (in.name == name)
                    input = &in;
            if (!input)
                throw FrontendError(SourcePos{line_no, (int)i + 1},
                                    "trace: '" + name + "' is not an input of " + node.name);
            cycle[name] = ValueParser(vtext, line_no, *input->type).take();
            i = vend;
        }
        for (const auto& in : node.inputs)
            if (!cycle.count(in.name))
                throw FrontendError(SourcePos{line_no, 1},
                                    "trace: cycle is missing input '" + in.name + "'");
        trace.cycles.push_back(std::move(cycle));
    }
    return trace;
}

std::string format_pairs(const std::vector<std::pair<std::string, Value>>& pairs) {
    std::string out;
    for (size_t i = 0; i < pairs.size(); ++i) {
        if (i)
            out += " ";
        out += pairs[i].first + "=" + pairs[i].second.to_text();
    }
    return out;
}

} // namespace scb
