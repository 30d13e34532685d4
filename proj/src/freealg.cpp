#include "flagforge/freealg.hpp"

#include <algorithm>
#include <sstream>

namespace flagforge::freealg {

using exactring::DenominatorMultiset;
using exactring::merge_registries;
using exactring::Monomial;
using exactring::Polynomial;

int z_generator_id(const RegistryPtr& reg, int var_index) {
    if (!reg || var_index < 0 || var_index >= reg->variable_count())
        throw InvalidInput("variable index outside the registry");
    return var_index;
}

int w_generator_id(const RegistryPtr& reg, int minor_id) {
    if (!reg || minor_id < 1 || minor_id > reg->minor_count())
        throw InvalidInput("minor id outside the registry");
    return reg->variable_count() + minor_id - 1;
}

bool is_w_generator(const RegistryPtr& reg, int gen_id) {
    if (!reg)
        throw InvalidInput("generator query needs a registry");
    return gen_id >= reg->variable_count();
}

std::string generator_name(const RegistryPtr& reg, int gen_id) {
    if (!reg || gen_id < 0 || gen_id >= reg->variable_count() + reg->minor_count())
        throw InvalidInput("generator id outside the registry");
    if (gen_id < reg->variable_count())
        return reg->variable_name(gen_id);
    return reg->minor(gen_id - reg->variable_count() + 1).name;
}

bool WordOrder::operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size())
        return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

NCPolynomial NCPolynomial::constant(ExactRational c) {
    NCPolynomial p;
    if (!c.is_zero())
        p.terms_.emplace(Word{}, std::move(c));
    return p;
}

NCPolynomial NCPolynomial::generator(RegistryPtr reg, int gen_id) {
    return word(std::move(reg), Word{gen_id});
}

NCPolynomial NCPolynomial::word(RegistryPtr reg, Word w, ExactRational c) {
    if (!reg && !w.empty())
        throw InvalidInput("nonempty word needs a registry");
    if (reg) {
        int limit = reg->variable_count() + reg->minor_count();
        for (int g : w)
            if (g < 0 || g >= limit)
                throw InvalidInput("generator id outside the registry");
    }
    NCPolynomial p;
    p.reg_ = std::move(reg);
    if (!c.is_zero())
        p.terms_.emplace(std::move(w), std::move(c));
    return p;
}

NCPolynomial NCPolynomial::operator-() const {
    NCPolynomial p;
    p.reg_ = reg_;
    for (auto& [w, c] : terms_)
        p.terms_.emplace(w, -c);
    return p;
}

void NCPolynomial::add_term(const Word& w, const ExactRational& c) {
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        if (!c.is_zero())
            terms_.emplace(w, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero())
        terms_.erase(it);
}

NCPolynomial& NCPolynomial::operator+=(const NCPolynomial& o) {
    reg_ = merge_registries(reg_, o.reg_);
    for (auto& [w, c] : o.terms_)
        add_term(w, c);
    return *this;
}

NCPolynomial& NCPolynomial::operator-=(const NCPolynomial& o) {
    reg_ = merge_registries(reg_, o.reg_);
    for (auto& [w, c] : o.terms_)
        add_term(w, -c);
    return *this;
}

NCPolynomial operator*(const NCPolynomial& a, const NCPolynomial& b) {
    NCPolynomial p;
    p.reg_ = merge_registries(a.reg_, b.reg_);
    for (auto& [wa, ca] : a.terms_)
        for (auto& [wb, cb] : b.terms_) {
            Word w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            p.add_term(w, ca * cb);
        }
    return p;
}

bool operator==(const NCPolynomial& a, const NCPolynomial& b) {
    if (!a.terms_.empty() && !b.terms_.empty())
        merge_registries(a.reg_, b.reg_);
    if (a.terms_.size() != b.terms_.size())
        return false;
    return std::equal(a.terms_.begin(), a.terms_.end(), b.terms_.begin(),
                      [](const auto& x, const auto& y) {
                          return x.first == y.first && x.second == y.second;
                      });
}

bool NCPolynomial::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first.empty() && terms_.begin()->second.is_one();
}

const Word& NCPolynomial::leading_word() const {
    if (terms_.empty())
        throw InvalidInput("leading word of the zero element");
    return terms_.rbegin()->first;
}

std::string NCPolynomial::str() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        ExactRational c = it->second;
        if (first) {
            if (c.sign() < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
            c = c.abs();
        }
        first = false;
        bool printed = false;
        if (!c.is_one() || it->first.empty()) {
            os << c.str();
            printed = true;
        }
        for (int g : it->first) {
            if (printed)
                os << "*";
            os << generator_name(reg_, g);
            printed = true;
        }
    }
    return os.str();
}

NCPolynomial nc_arith(const NCPolynomial& a, const NCPolynomial& b, RingOp op) {
    switch (op) {
    case RingOp::Add: return a + b;
    case RingOp::Sub: return a - b;
    case RingOp::Mul: return a * b;
    }
    throw InvalidInput("unknown ring operation");
}

LocalizedElement commutatize(const NCPolynomial& a) {
    const RegistryPtr& reg = a.registry();
    LocalizedElement out;
    for (auto& [w, c] : a.terms()) {
        LocalizedElement term = LocalizedElement::constant(c);
        for (int g : w) {
            if (is_w_generator(reg, g))
                term *= LocalizedElement::minor_inverse(reg, g - reg->variable_count() + 1);
            else
                term *= LocalizedElement(Polynomial::variable(reg, g));
        }
        out += term;
    }
    return out;
}

namespace {

/* lift of a plain polynomial: each term becomes its ascending z-word */
NCPolynomial lift_polynomial(const Polynomial& p) {
    NCPolynomial out;
    for (auto& [m, c] : p.terms()) {
        Word w;
        for (size_t v = 0; v < m.size(); ++v)
            for (unsigned e = 0; e < m[v]; ++e)
                w.push_back(static_cast<int>(v));
        out += NCPolynomial::word(p.registry(), std::move(w), c);
    }
    return out;
}

/* Solve c*L + q = 0 for L:  L -> -q / c. */
RewriteRule orient(const NCPolynomial& p) {
    Word lhs = p.leading_word();
    ExactRational c = p.terms().rbegin()->second;
    NCPolynomial q = p;
    q.add_term(lhs, -c);
    NCPolynomial rhs = NCPolynomial::constant(-c.inverse()) * q;
    return RewriteRule{std::move(lhs), std::move(rhs)};
}

/* leftmost occurrence of `pat` inside `w`, or -1 */
int find_subword(const Word& w, const Word& pat) {
    if (pat.empty() || pat.size() > w.size())
        return -1;
    auto it = std::search(w.begin(), w.end(), pat.begin(), pat.end());
    return it == w.end() ? -1 : static_cast<int>(it - w.begin());
}

} // namespace

RewriteSystem localization_rules(const RegistryPtr& reg, const std::vector<int>& minor_ids) {
    std::vector<int> ids = minor_ids;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<RewriteRule> rules;
    const NCPolynomial one = NCPolynomial::constant(1);
    for (int k : ids) {
        NCPolynomial wk = NCPolynomial::generator(reg, w_generator_id(reg, k));
        NCPolynomial mk = lift_polynomial(reg->minor_poly(k));
        rules.push_back(orient(wk * mk - one));
        rules.push_back(orient(mk * wk - one));
    }
    return RewriteSystem(std::move(rules));
}

NCPolynomial reduce(const NCPolynomial& a, const RewriteSystem& sys) {
    if (sys.empty())
        return a;
    NCPolynomial cur = a;
    bool changed = true;
    while (changed && !cur.is_zero()) {
        changed = false;
        /* largest reducible word first */
        for (auto it = cur.terms().rbegin(); it != cur.terms().rend(); ++it) {
            const Word& w = it->first;
            int best_pos = -1;
            const RewriteRule* best_rule = nullptr;
            for (auto& rule : sys.rules()) {
                int pos = find_subword(w, rule.lhs);
                if (pos >= 0 && (best_pos < 0 || pos < best_pos)) {
                    best_pos = pos;
                    best_rule = &rule;
                }
            }
            if (best_pos < 0)
                continue;
            ExactRational c = it->second;
            Word prefix(w.begin(), w.begin() + best_pos);
            Word suffix(w.begin() + best_pos + best_rule->lhs.size(), w.end());
            NCPolynomial replaced = NCPolynomial::word(cur.registry(), prefix, c) *
                                    best_rule->rhs *
                                    NCPolynomial::word(cur.registry(), suffix, 1);
            cur.add_term(w, -c);
            cur += replaced;
            changed = true;
            break;
        }
    }
    return cur;
}

EqualityVerdict nc_equal(const NCPolynomial& a, const NCPolynomial& b, const RewriteSystem& sys) {
    NCPolynomial d = a - b;
    if (reduce(d, sys).is_zero())
        return EqualityVerdict::Equal;
    if (commutatize(a) != commutatize(b))
        return EqualityVerdict::Distinct;
    return EqualityVerdict::Unknown;
}

NCPolynomial lift(const LocalizedElement& e, LiftConvention convention) {
    const RegistryPtr& reg = e.registry();
    NCPolynomial out;
    for (auto& [mono, coeff] : e.numerator().terms()) {
        Monomial m = mono;
        ExactRational c = coeff;
        std::vector<int> w_letters;
        for (auto& [id, exp] : e.denominator()) {
            int remaining = exp;
            auto info = reg->minor(id);
            if (info.monomial) {
                const Monomial& mm = info.poly->leading_monomial();
                const ExactRational& mc = info.poly->leading_coefficient();
                while (remaining > 0 && exactring::monomial_divides(mm, m)) {
                    m = exactring::monomial_div(m, mm);
                    c /= mc;
                    --remaining;
                }
            }
            for (int t = 0; t < remaining; ++t)
                w_letters.push_back(w_generator_id(reg, id));
        }
        Word zs;
        for (size_t v = 0; v < m.size(); ++v)
            for (unsigned t = 0; t < m[v]; ++t)
                zs.push_back(static_cast<int>(v));
        Word w;
        if (convention == LiftConvention::InverseFirst) {
            w = std::move(w_letters);
            w.insert(w.end(), zs.begin(), zs.end());
        } else {
            w = std::move(zs);
            w.insert(w.end(), w_letters.begin(), w_letters.end());
        }
        out += NCPolynomial::word(reg, std::move(w), c);
    }
    return out;
}

} // namespace flagforge::freealg
