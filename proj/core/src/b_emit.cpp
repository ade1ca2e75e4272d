#include "scb/b_emit.hpp"

#include <sstream>

namespace scb {

namespace {

struct Spelling {
    const char* conj;
    const char* implies;
    const char* member;
    const char* total_fun;
    const char* maplet;
    const char* forall;
    const char* outputs_arrow;
    const char* ne;
    const char* le;
    const char* ge;
};

const Spelling kAscii{"&", "=>", ":", "-->", "|->", "!", "<--", "/=", "<=", ">="};
const Spelling kUnicode{"∧", "⇒", "∈", "→",
                        "↦", "∀", "←", "≠", "≤", "≥"};

class Emitter {
public:
    explicit Emitter(BFlavor flavor)
        : sp_(flavor == BFlavor::Ascii ? kAscii : kUnicode) {}

    std::string machine(const BMachine& m) {
        os_ << "MACHINE\n    " << m.name << "\n";
        if (!m.sets.empty()) {
            os_ << "\nSETS\n";
            for (size_t i = 0; i < m.sets.size(); ++i) {
                os_ << "    " << m.sets[i].name << " = {";
                for (size_t j = 0; j < m.sets[i].members.size(); ++j)
                    os_ << (j ? ", " : "") << m.sets[i].members[j];
                os_ << "}" << (i + 1 < m.sets.size() ? ";" : "") << "\n";
            }
        }
        if (!m.constants.empty()) {
            os_ << "\nCONSTANTS\n";
            for (size_t i = 0; i < m.constants.size(); ++i)
                os_ << "    " << m.constants[i] << (i + 1 < m.constants.size() ? "," : "")
                    << "\n";
        }
        if (!m.properties.empty()) {
            os_ << "\nPROPERTIES\n";
            for (size_t i = 0; i < m.properties.size(); ++i) {
                const auto& p = m.properties[i];
                os_ << "    " << p.name << " = ";
                if (p.value)
                    os_ << expr(*p.value);
                else
                    os_ << domain(*p.domain);
                os_ << (i + 1 < m.properties.size() ? std::string(" ") + sp_.conj : "") << "\n";
            }
        }
        if (!m.variables.empty()) {
            os_ << "\nVARIABLES\n";
            for (size_t i = 0; i < m.variables.size(); ++i)
                os_ << "    " << m.variables[i] << (i + 1 < m.variables.size() ? "," : "")
                    << "\n";
        }
        if (!m.invariant.empty()) {
            os_ << "\nINVARIANT\n";
            for (size_t i = 0; i < m.invariant.size(); ++i)
                os_ << "    " << pred(*m.invariant[i], 4)
                    << (i + 1 < m.invariant.size() ? std::string(" ") + sp_.conj : "") << "\n";
        }
        if (m.initialisation) {
            os_ << "\nINITIALISATION\n";
            subst(*m.initialisation, 1);
            os_ << "\n";
        }
        if (!m.operations.empty()) {
            os_ << "\nOPERATIONS\n";
            for (size_t i = 0; i < m.operations.size(); ++i) {
                operation(m.operations[i]);
                os_ << (i + 1 < m.operations.size() ? ";\n\n" : "\n");
            }
        }
        os_ << "\nEND\n";
        return os_.str();
    }

    std::string expr(const BExpr& e) { return expr_prec(e, 0); }

    std::string pred(const BPred& p, int min_prec) {
        switch (p.kind) {
        case BPred::Kind::And:
            return wrap(min_prec, 3,
                        pred(*p.preds[0], 3) + " " + sp_.conj + " " + pred(*p.preds[1], 4));
        case BPred::Kind::Or:
            return wrap(min_prec, 2, pred(*p.preds[0], 2) + " or " + pred(*p.preds[1], 3));
        case BPred::Kind::Implies:
            return wrap(min_prec, 1,
                        pred(*p.preds[0], 2) + " " + sp_.implies + " " + pred(*p.preds[1], 1));
        case BPred::Kind::Not:
            return "not(" + pred(*p.preds[0], 0) + ")";
        case BPred::Kind::Compare:
            return expr_prec(*p.lhs, 4) + " " + cmp(p.cmp) + " " + expr_prec(*p.rhs, 4);
        case BPred::Kind::Member:
            return expr_prec(*p.elem, 4) + " " + sp_.member + " " + domain(*p.domain);
        case BPred::Kind::Forall: {
            std::string range = p.var + " " + sp_.member + " " + expr_prec(*p.lo, 7) + ".." +
                                expr_prec(*p.hi, 7);
            std::string head =
                p.guard ? "(" + range + " " + sp_.conj + " " + pred(*p.guard, 4) + ")" : range;
            return std::string(sp_.forall) + p.var + ".(" + head + " " + sp_.implies + " " +
                   pred(*p.body, 1) + ")";
        }
        }
        return "?";
    }

    void subst(const BSubst& s, int indent) {
        std::string pad(indent * 4, ' ');
        switch (s.kind) {
        case BSubst::Kind::Assign: {
            os_ << pad;
            for (size_t i = 0; i < s.lvalues.size(); ++i)
                os_ << (i ? ", " : "") << lvalue(s.lvalues[i]);
            os_ << " := ";
            for (size_t i = 0; i < s.exprs.size(); ++i)
                os_ << (i ? ", " : "") << expr(*s.exprs[i]);
            return;
        }
        case BSubst::Kind::If: {
            for (size_t i = 0; i < s.branches.size(); ++i) {
                os_ << pad << (i == 0 ? "IF " : "ELSIF ") << pred(*s.branches[i].cond, 0)
                    << " THEN\n";
                subst(*s.branches[i].body, indent + 1);
                os_ << "\n";
            }
            if (s.else_sub) {
                os_ << pad << "ELSE\n";
                subst(*s.else_sub, indent + 1);
                os_ << "\n";
            }
            os_ << pad << "END";
            return;
        }
        case BSubst::Kind::Case: {
            os_ << pad << "CASE " << expr(*s.scrutinee) << " OF\n";
            for (size_t i = 0; i < s.arms.size(); ++i) {
                os_ << pad << "    " << (i == 0 ? "EITHER " : "OR ");
                for (size_t j = 0; j < s.arms[i].labels.size(); ++j)
                    os_ << (j ? ", " : "") << expr(*s.arms[i].labels[j]);
                os_ << " THEN\n";
                subst(*s.arms[i].body, indent + 2);
                os_ << "\n";
            }
            if (s.else_sub) {
                os_ << pad << "    ELSE\n";
                subst(*s.else_sub, indent + 2);
                os_ << "\n";
            }
            os_ << pad << "    END\n" << pad << "END";
            return;
        }
        case BSubst::Kind::While: {
            os_ << pad << "WHILE " << pred(*s.while_cond, 0) << " DO\n";
            subst(*s.while_body, indent + 1);
            os_ << "\n" << pad << "INVARIANT\n" << pad << "    " << pred(*s.invariant, 0)
                << "\n" << pad << "VARIANT\n" << pad << "    " << expr(*s.variant) << "\n"
                << pad << "END";
            return;
        }
        case BSubst::Kind::Var: {
            os_ << pad << "VAR ";
            for (size_t i = 0; i < s.var_names.size(); ++i)
                os_ << (i ? ", " : "") << s.var_names[i];
            os_ << " IN\n";
            subst(*s.var_body, indent + 1);
            os_ << "\n" << pad << "END";
            return;
        }
        case BSubst::Kind::Seq: {
            for (size_t i = 0; i < s.subs.size(); ++i) {
                subst(*s.subs[i], indent);
                if (i + 1 < s.subs.size())
                    os_ << ";\n";
            }
            return;
        }
        case BSubst::Kind::Parallel: {
            for (size_t i = 0; i < s.subs.size(); ++i) {
                subst(*s.subs[i], indent);
                if (i + 1 < s.subs.size())
                    os_ << " ||\n";
            }
            return;
        }
        case BSubst::Kind::Skip:
            os_ << pad << "skip";
            return;
        case BSubst::Kind::OpCall: {
            os_ << pad;
            for (size_t i = 0; i < s.call_outputs.size(); ++i)
                os_ << (i ? ", " : "") << s.call_outputs[i];
            if (!s.call_outputs.empty())
                os_ << " " << sp_.outputs_arrow << " ";
            os_ << s.call_op << "(";
            for (size_t i = 0; i < s.call_args.size(); ++i)
                os_ << (i ? ", " : "") << expr(*s.call_args[i]);
            os_ << ")";
            return;
        }
        }
    }

    std::string take() { return os_.str(); }

private:
    std::ostringstream os_;
    const Spelling& sp_;

    static std::string wrap(int min_prec, int prec, std::string s) {
        return prec < min_prec ? "(" + std::move(s) + ")" : std::move(s);
    }

    std::string lvalue(const BLValue& lv) {
        if (lv.index)
            return lv.name + "(" + expr_prec(*lv.index, 0) + ")";
        if (!lv.field.empty())
            return lv.name + "'" + lv.field;
        return lv.name;
    }

    std::string cmp(BCmpOp op) {
        switch (op) {
        case BCmpOp::Eq: return "=";
        case BCmpOp::Ne: return sp_.ne;
        case BCmpOp::Lt: return "<";
        case BCmpOp::Le: return sp_.le;
        case BCmpOp::Gt: return ">";
        case BCmpOp::Ge: return sp_.ge;
        }
        return "?";
    }

    // expression precedence: 0 any, 5 additive, 6 multiplicative, 7 atom
    std::string expr_prec(const BExpr& e, int min_prec) {
        switch (e.kind) {
        case BExpr::Kind::IntLit:
            return std::to_string(e.int_val);
        case BExpr::Kind::BoolLit:
            return e.bool_val ? "TRUE" : "FALSE";
        case BExpr::Kind::Ref:
            return e.name;
        case BExpr::Kind::Binary: {
            int prec = (e.op == BBinOp::Mul || e.op == BBinOp::Div || e.op == BBinOp::Mod) ? 6 : 5;
            const char* opstr = e.op == BBinOp::Add ? "+"
                              : e.op == BBinOp::Sub ? "-"
                              : e.op == BBinOp::Mul ? "*"
                              : e.op == BBinOp::Div ? "/"
                                                    : "mod";
            std::string s = expr_prec(*e.args[0], prec) + " " + opstr + " " +
                            expr_prec(*e.args[1], prec + 1);
            return wrap(min_prec, prec, std::move(s));
        }
        case BExpr::Kind::Neg:
            return wrap(min_prec, 6, "-" + expr_prec(*e.args[0], 7));
        case BExpr::Kind::Apply:
            // args[1], when present, is the function expression (e.g. r'f)
            if (e.args.size() > 1)
                return "(" + expr_prec(*e.args[1], 0) + ")(" + expr_prec(*e.args[0], 0) + ")";
            return e.name + "(" + expr_prec(*e.args[0], 0) + ")";
        case BExpr::Kind::Interval:
            return wrap(min_prec, 5,
                        expr_prec(*e.args[0], 7) + ".." + expr_prec(*e.args[1], 7));
        case BExpr::Kind::MapletSet: {
            std::string s = "{";
            for (size_t i = 0; i < e.maplets.size(); ++i) {
                if (i) s += ", ";
                s += expr_prec(*e.maplets[i].first, 5) + " " + sp_.maplet + " " +
                     expr_prec(*e.maplets[i].second, 5);
            }
            return s + "}";
        }
        case BExpr::Kind::ConstFun:
            return "(" + expr_prec(*e.args[0], 7) + ".." + expr_prec(*e.args[1], 7) + ")*{" +
                   expr_prec(*e.args[2], 0) + "}";
        case BExpr::Kind::Record: {
            std::string s = "rec(";
            for (size_t i = 0; i < e.fields.size(); ++i) {
                if (i) s += ", ";
                s += e.fields[i].first + ": " + expr_prec(*e.fields[i].second, 0);
            }
            return s + ")";
        }
        case BExpr::Kind::Field:
            return expr_prec(*e.args[0], 7) + "'" + e.name;
        case BExpr::Kind::BoolOf:
            return "bool(" + pred(*e.bool_pred, 0) + ")";
        }
        return "?";
    }

    std::string domain(const BDomain& d) {
        switch (d.kind) {
        case BDomain::Kind::Name:
            return d.name;
        case BDomain::Kind::Interval:
            return expr_prec(*d.lo, 7) + ".." + expr_prec(*d.hi, 7);
        case BDomain::Kind::TotalFun:
            return domain(*d.from) + " " + sp_.total_fun + " " + domain(*d.to);
        case BDomain::Kind::StructSet: {
            std::string s = "struct(";
            for (size_t i = 0; i < d.fields.size(); ++i) {
                if (i) s += ", ";
                s += d.fields[i].first + " " + sp_.member + " " + domain(*d.fields[i].second);
            }
            return s + ")";
        }
        }
        return "?";
    }

    void operation(const BOperation& op) {
        os_ << "    ";
        for (size_t i = 0; i < op.outputs.size(); ++i)
            os_ << (i ? ", " : "") << op.outputs[i];
        if (!op.outputs.empty())
            os_ << " " << sp_.outputs_arrow << " ";
        os_ << op.name;
        if (!op.params.empty()) {
            os_ << "(";
            for (size_t i = 0; i < op.params.size(); ++i)
                os_ << (i ? ", " : "") << op.params[i];
            os_ << ")";
        }
        os_ << " =\n";
        if (!op.pre.empty()) {
            os_ << "    PRE\n";
            for (size_t i = 0; i < op.pre.size(); ++i)
                os_ << "        " << pred(*op.pre[i], 4)
                    << (i + 1 < op.pre.size() ? std::string(" ") + sp_.conj : "") << "\n";
            os_ << "    THEN\n";
        } else {
            os_ << "    BEGIN\n";
        }
        subst(*op.body, 2);
        os_ << "\n    END";
    }
};

} // namespace

std::string emit_machine(const BMachine& machine, BFlavor flavor) {
    return Emitter(flavor).machine(machine);
}

std::string render_pred(const BPred& pred, BFlavor flavor) {
    return Emitter(flavor).pred(pred, 0);
}

std::string render_expr(const BExpr& expr, BFlavor flavor) {
    return Emitter(flavor).expr(expr);
}

std::string render_subst(const BSubst& subst, BFlavor flavor) {
    Emitter em(flavor);
    em.subst(subst, 0);
    return em.take();
}

namespace {

bool is_word_char(unsigned char c) {
    return std::isalnum(c) || c == '_';
}

} // namespace

std::vector<std::string> tokenize_machine_text(const std::string& text) {
    std::vector<std::string> out;
    size_t i = 0;
    auto starts = [&](const char* s) {
        return text.compare(i, std::char_traits<char>::length(s), s) == 0;
    };
    while (i < text.size()) {
        unsigned char c = text[i];
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (starts("//")) {
            while (i < text.size() && text[i] != '\n')
                ++i;
            continue;
        }
        if (starts("/*")) {
            size_t end = text.find("*/", i + 2);
            i = end == std::string::npos ? text.size() : end + 2;
            continue;
        }
        if (is_word_char(c)) {
            size_t j = i;
            while (j < text.size() && is_word_char((unsigned char)text[j]))
                ++j;
            out.push_back(text.substr(i, j - i));
            i = j;
            continue;
        }
        // unicode spellings normalize to ASCII
        static const std::pair<const char*, const char*> unicode_map[] = {
            {"∧", "&"}, {"⇒", "=>"}, {"∈", ":"}, {"→", "-->"},
            {"↦", "|->"}, {"∀", "!"}, {"←", "<--"}, {"≠", "/="},
            {"≤", "<="}, {"≥", ">="},
        };
        bool matched = false;
        for (const auto& [u, a] : unicode_map) {
            if (starts(u)) {
                out.push_back(a);
                i += std::char_traits<char>::length(u);
                matched = true;
                break;
            }
        }
        if (matched)
            continue;
        static const char* multi[] = {"<--", "-->", "|->", ":=", "||", "..",
                                      "<=", ">=", "/=", "=>", "<<", ">>"};
        for (const char* m : multi) {
            if (starts(m)) {
                out.push_back(m);
                i += std::char_traits<char>::length(m);
                matched = true;
                break;
            }
        }
        if (matched)
            continue;
        out.push_back(std::string(1, (char)c));
        ++i;
    }
    return out;
}

} // namespace scb
