#include "flagforge/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace flagforge::exactring {

Monomial monomial_trim(Monomial m) {
    while (!m.empty() && m.back() == 0)
        m.pop_back();
    return m;
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    Monomial out(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i)
        out[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i)
        out[i] += b[i];
    return out;
}

bool monomial_divides(const Monomial& a, const Monomial& b) {
    if (a.size() > b.size())
        return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i])
            return false;
    return true;
}

Monomial monomial_div(const Monomial& b, const Monomial& a) {
    Monomial out = b;
    for (size_t i = 0; i < a.size(); ++i)
        out[i] -= a[i];
    return monomial_trim(std::move(out));
}

unsigned monomial_degree(const Monomial& m) {
    return std::accumulate(m.begin(), m.end(), 0u);
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = monomial_degree(a), db = monomial_degree(b);
    if (da != db)
        return da < db;
    size_t len = std::max(a.size(), b.size());
    for (size_t i = len; i-- > 0;) {
        unsigned ea = i < a.size() ? a[i] : 0;
        unsigned eb = i < b.size() ? b[i] : 0;
        if (ea != eb)
            return ea < eb;
    }
    return false;
}

Polynomial make_polynomial(RegistryPtr reg, Polynomial::TermMap terms) {
    Polynomial p;
    p.reg_ = std::move(reg);
    p.terms_ = std::move(terms);
    return p;
}

Polynomial Polynomial::constant(ExactRational c) {
    Polynomial p;
    if (!c.is_zero())
        p.terms_.emplace(Monomial{}, std::move(c));
    return p;
}

Polynomial Polynomial::variable(RegistryPtr reg, int index, unsigned exponent) {
    if (!reg || index < 0 || index >= reg->variable_count())
        throw InvalidInput("variable index outside registry");
    Polynomial p;
    p.reg_ = std::move(reg);
    if (exponent > 0) {
        Monomial m(static_cast<size_t>(index) + 1, 0);
        m[index] = exponent;
        p.terms_.emplace(std::move(m), ExactRational(1));
    } else {
        p.terms_.emplace(Monomial{}, ExactRational(1));
    }
    return p;
}

void Polynomial::add_term(const Monomial& m, const ExactRational& c) {
    if (c.is_zero())
        return;
    Monomial key = monomial_trim(m);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(std::move(key), c);
    } else {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (auto& [m, c] : out.terms_)
        c = -c;
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    reg_ = merge_registries(reg_, o.reg_);
    for (auto& [m, c] : o.terms_)
        add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    reg_ = merge_registries(reg_, o.reg_);
    for (auto& [m, c] : o.terms_)
        add_term(m, -c);
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    out.reg_ = merge_registries(a.reg_, b.reg_);
    for (auto& [ma, ca] : a.terms_)
        for (auto& [mb, cb] : b.terms_)
            out.add_term(monomial_mul(ma, mb), ca * cb);
    return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
    *this = *this * o;
    return *this;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial out = Polynomial::constant(1);
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1u)
            out *= base;
        e >>= 1u;
        if (e > 0)
            base *= base;
    }
    return out;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size())
        return false;
    if (!a.terms_.empty())
        merge_registries(a.reg_, b.reg_);
    return a.terms_ == b.terms_;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

ExactRational Polynomial::constant_value() const {
    if (terms_.empty())
        return ExactRational(0);
    if (!is_constant())
        throw InvalidInput("constant_value on non-constant polynomial");
    return terms_.begin()->second;
}

const Monomial& Polynomial::leading_monomial() const {
    if (terms_.empty())
        throw InvalidInput("leading term of zero polynomial");
    return terms_.rbegin()->first;
}

const ExactRational& Polynomial::leading_coefficient() const {
    if (terms_.empty())
        throw InvalidInput("leading term of zero polynomial");
    return terms_.rbegin()->second;
}

unsigned Polynomial::total_degree() const {
    return terms_.empty() ? 0 : monomial_degree(terms_.rbegin()->first);
}

bool Polynomial::is_homogeneous() const {
    if (terms_.empty())
        return true;
    unsigned d = monomial_degree(terms_.begin()->first);
    for (auto& [m, c] : terms_)
        if (monomial_degree(m) != d)
            return false;
    return true;
}

ExactRational Polynomial::evaluate(const std::vector<ExactRational>& point) const {
    ExactRational acc(0);
    for (auto& [m, c] : terms_) {
        ExactRational t = c;
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0)
                continue;
            if (i >= point.size())
                throw MissingAssignment(reg_ ? reg_->variable_name(static_cast<int>(i))
                                             : "#" + std::to_string(i));
            for (unsigned e = 0; e < m[i]; ++e)
                t *= point[i];
        }
        acc += t;
    }
    return acc;
}

std::string Polynomial::str() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        ExactRational a = c.abs();
        if (first) {
            if (c.sign() < 0)
                os << "-";
            first = false;
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        bool printed_coeff = false;
        if (!a.is_one() || m.empty()) {
            os << a.str();
            printed_coeff = true;
        }
        bool first_var = true;
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0)
                continue;
            if (printed_coeff || !first_var)
                os << "*";
            os << (reg_ ? reg_->variable_name(static_cast<int>(i)) : "x" + std::to_string(i));
            if (m[i] > 1)
                os << "^" << m[i];
            first_var = false;
            printed_coeff = true;
        }
    }
    return os.str();
}

Polynomial poly_arith(const Polynomial& a, const Polynomial& b, RingOp op) {
    switch (op) {
    case RingOp::Add: return a + b;
    case RingOp::Sub: return a - b;
    case RingOp::Mul: return a * b;
    }
    throw InvalidInput("unknown ring op");
}

std::optional<Polynomial> poly_divexact(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero())
        throw InvalidInput("division by zero polynomial");
    Polynomial q = make_polynomial(merge_registries(a.registry(), b.registry()), {});
    Polynomial r = a;
    const Monomial& lmb = b.leading_monomial();
    const ExactRational& lcb = b.leading_coefficient();
    while (!r.is_zero()) {
        const Monomial& lmr = r.leading_monomial();
        if (!monomial_divides(lmb, lmr))
            return std::nullopt;
        Monomial qm = monomial_div(lmr, lmb);
        ExactRational qc = r.leading_coefficient() / lcb;
        Polynomial t = make_polynomial(merge_registries(r.registry(), b.registry()), {});
        t.add_term(qm, qc);
        q += t;
        r -= t * b;
    }
    return q;
}

} // namespace flagforge::exactring
