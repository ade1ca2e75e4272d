#include "scb/b_ast.hpp"

namespace scb {

BExpr::BExpr() = default;
BExpr::~BExpr() = default;
BExpr::BExpr(BExpr&&) noexcept = default;
BExpr& BExpr::operator=(BExpr&&) noexcept = default;

BExprPtr BExpr::clone() const {
    auto out = std::make_unique<BExpr>();
    out->kind = kind;
    out->int_val = int_val;
    out->bool_val = bool_val;
    out->name = name;
    out->op = op;
    for (const auto& a : args)
        out->args.push_back(a->clone());
    for (const auto& [k, v] : maplets)
        out->maplets.emplace_back(k->clone(), v->clone());
    for (const auto& [f, v] : fields)
        out->fields.emplace_back(f, v->clone());
    if (bool_pred)
        out->bool_pred = bool_pred->clone();
    return out;
}

BExprPtr b_bool_of(BPredPtr pred) {
    auto e = std::make_unique<BExpr>();
    e->kind = BExpr::Kind::BoolOf;
    e->bool_pred = std::move(pred);
    return e;
}

BExprPtr b_int(long long v) {
    auto e = std::make_unique<BExpr>();
    e->kind = BExpr::Kind::IntLit;
    e->int_val = v;
    return e;
}

BExprPtr b_bool(bool v) {
    auto e = std::make_unique<BExpr>();
    e->kind = BExpr::Kind::BoolLit;
    e->bool_val = v;
    return e;
}

BExprPtr b_ref(std::string name) {
    auto e = std::make_unique<BExpr>();
    e->kind = BExpr::Kind::Ref;
    e->name = std::move(name);
    return e;
}

BExprPtr b_binary(BBinOp op, BExprPtr l, BExprPtr r) {
    auto e = std::make_unique<BExpr>();
    e->kind = BExpr::Kind::Binary;
    e->op = op;
    e->args.push_back(std::move(l));
    e->args.push_back(std::move(r));
    return e;
}

BExprPtr b_apply(std::string fn, BExprPtr index) {
    auto e = std::make_unique<BExpr>();
    e->kind = BExpr::Kind::Apply;
    e->name = std::move(fn);
    e->args.push_back(std::move(index));
    return e;
}

BExprPtr b_interval(BExprPtr lo, BExprPtr hi) {
    auto e = std::make_unique<BExpr>();
    e->kind = BExpr::Kind::Interval;
    e->args.push_back(std::move(lo));
    e->args.push_back(std::move(hi));
    return e;
}

BDomainPtr BDomain::clone() const {
    auto out = std::make_unique<BDomain>();
    out->kind = kind;
    out->name = name;
    if (lo) out->lo = lo->clone();
    if (hi) out->hi = hi->clone();
    if (from) out->from = from->clone();
    if (to) out->to = to->clone();
    for (const auto& [f, d] : fields)
        out->fields.emplace_back(f, d->clone());
    return out;
}

BDomainPtr b_domain_name(std::string name) {
    auto d = std::make_unique<BDomain>();
    d->kind = BDomain::Kind::Name;
    d->name = std::move(name);
    return d;
}

BDomainPtr b_domain_interval(BExprPtr lo, BExprPtr hi) {
    auto d = std::make_unique<BDomain>();
    d->kind = BDomain::Kind::Interval;
    d->lo = std::move(lo);
    d->hi = std::move(hi);
    return d;
}

BDomainPtr b_domain_fun(BDomainPtr from, BDomainPtr to) {
    auto d = std::make_unique<BDomain>();
    d->kind = BDomain::Kind::TotalFun;
    d->from = std::move(from);
    d->to = std::move(to);
    return d;
}

BPredPtr BPred::clone() const {
    auto out = std::make_unique<BPred>();
    out->kind = kind;
    out->cmp = cmp;
    for (const auto& p : preds)
        out->preds.push_back(p->clone());
    if (lhs) out->lhs = lhs->clone();
    if (rhs) out->rhs = rhs->clone();
    if (elem) out->elem = elem->clone();
    if (domain) out->domain = domain->clone();
    out->var = var;
    if (lo) out->lo = lo->clone();
    if (hi) out->hi = hi->clone();
    if (guard) out->guard = guard->clone();
    if (body) out->body = body->clone();
    return out;
}

BPredPtr b_and(BPredPtr a, BPredPtr b) {
    auto p = std::make_unique<BPred>();
    p->kind = BPred::Kind::And;
    p->preds.push_back(std::move(a));
    p->preds.push_back(std::move(b));
    return p;
}

BPredPtr b_implies(BPredPtr a, BPredPtr b) {
    auto p = std::make_unique<BPred>();
    p->kind = BPred::Kind::Implies;
    p->preds.push_back(std::move(a));
    p->preds.push_back(std::move(b));
    return p;
}

BPredPtr b_not(BPredPtr a) {
    auto p = std::make_unique<BPred>();
    p->kind = BPred::Kind::Not;
    p->preds.push_back(std::move(a));
    return p;
}

BPredPtr b_compare(BCmpOp op, BExprPtr l, BExprPtr r) {
    auto p = std::make_unique<BPred>();
    p->kind = BPred::Kind::Compare;
    p->cmp = op;
    p->lhs = std::move(l);
    p->rhs = std::move(r);
    return p;
}

BPredPtr b_member(BExprPtr elem, BDomainPtr domain) {
    auto p = std::make_unique<BPred>();
    p->kind = BPred::Kind::Member;
    p->elem = std::move(elem);
    p->domain = std::move(domain);
    return p;
}

BLValue BLValue::clone() const {
    BLValue out;
    out.name = name;
    if (index)
        out.index = index->clone();
    out.field = field;
    return out;
}

BSubstPtr b_assign(BLValue lv, BExprPtr e) {
    auto s = std::make_unique<BSubst>();
    s->kind = BSubst::Kind::Assign;
    s->lvalues.push_back(std::move(lv));
    s->exprs.push_back(std::move(e));
    return s;
}

BSubstPtr b_assign_var(std::string name, BExprPtr e) {
    BLValue lv;
    lv.name = std::move(name);
    return b_assign(std::move(lv), std::move(e));
}

BSubstPtr b_skip() {
    auto s = std::make_unique<BSubst>();
    s->kind = BSubst::Kind::Skip;
    return s;
}

BSubstPtr b_seq(std::vector<BSubstPtr> subs) {
    if (subs.size() == 1)
        return std::move(subs[0]);
    auto s = std::make_unique<BSubst>();
    s->kind = BSubst::Kind::Seq;
    s->subs = std::move(subs);
    return s;
}

const BOperation* BMachine::find_operation(const std::string& opname) const {
    for (const auto& op : operations)
        if (op.name == opname)
            return &op;
    return nullptr;
}

} // namespace scb
