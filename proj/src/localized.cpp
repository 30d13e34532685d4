#include "flagforge/localized.hpp"

#include <sstream>

namespace flagforge::exactring {

namespace {

/* Product of minor polynomials m_id^exp over a multiset. */
Polynomial minor_product(const RegistryPtr& reg, const DenominatorMultiset& den) {
    Polynomial out = Polynomial::constant(1);
    for (auto& [id, exp] : den)
        out *= reg->minor_poly(id).pow(static_cast<unsigned>(exp));
    return out;
}

} // namespace

LocalizedElement::LocalizedElement(Polynomial num) : num_(std::move(num)) {}

LocalizedElement::LocalizedElement(Polynomial num, DenominatorMultiset den)
    : num_(std::move(num)), den_(std::move(den)) {
    for (auto& [id, exp] : den_)
        if (exp <= 0)
            throw InvalidInput("denominator exponent must be positive");
    if (!den_.empty() && !num_.registry())
        throw InvalidInput("denominator requires a registry-backed numerator");
    normalize();
}

LocalizedElement LocalizedElement::constant(ExactRational c) {
    return LocalizedElement(Polynomial::constant(std::move(c)));
}

LocalizedElement LocalizedElement::minor_inverse(const RegistryPtr& reg, int minor_id, int exponent) {
    if (!reg || minor_id < 1 || minor_id > reg->minor_count())
        throw InvalidInput("unknown minor id");
    if (exponent < 1)
        throw InvalidInput("minor inverse exponent must be positive");
    Polynomial one = make_polynomial(reg, {});
    one.add_term(Monomial{}, ExactRational(1));
    DenominatorMultiset den;
    den[minor_id] = exponent;
    return LocalizedElement(std::move(one), std::move(den));
}

void LocalizedElement::normalize() {
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    const RegistryPtr& reg = num_.registry();
    for (auto it = den_.begin(); it != den_.end();) {
        const Polynomial& m = reg->minor_poly(it->first);
        while (it->second > 0) {
            auto q = poly_divexact(num_, m);
            if (!q)
                break;
            num_ = std::move(*q);
            --it->second;
        }
        it = it->second == 0 ? den_.erase(it) : std::next(it);
    }
}

LocalizedElement LocalizedElement::operator-() const {
    LocalizedElement out = *this;
    out.num_ = -out.num_;
    return out;
}

LocalizedElement& LocalizedElement::operator+=(const LocalizedElement& o) {
    const RegistryPtr reg = merge_registries(registry(), o.registry());
    DenominatorMultiset common = den_;
    for (auto& [id, exp] : o.den_) {
        auto it = common.find(id);
        if (it == common.end())
            common[id] = exp;
        else
            it->second = std::max(it->second, exp);
    }
    DenominatorMultiset lift_a, lift_b;
    for (auto& [id, exp] : common) {
        auto ita = den_.find(id);
        int ea = exp - (ita == den_.end() ? 0 : ita->second);
        if (ea > 0)
            lift_a[id] = ea;
        auto itb = o.den_.find(id);
        int eb = exp - (itb == o.den_.end() ? 0 : itb->second);
        if (eb > 0)
            lift_b[id] = eb;
    }
    Polynomial na = num_;
    if (!lift_a.empty())
        na *= minor_product(reg, lift_a);
    Polynomial nb = o.num_;
    if (!lift_b.empty())
        nb *= minor_product(reg, lift_b);
    num_ = na + nb;
    den_ = std::move(common);
    normalize();
    return *this;
}

LocalizedElement& LocalizedElement::operator-=(const LocalizedElement& o) {
    return *this += -o;
}

LocalizedElement& LocalizedElement::operator*=(const LocalizedElement& o) {
    merge_registries(registry(), o.registry());
    num_ *= o.num_;
    for (auto& [id, exp] : o.den_)
        den_[id] += exp;
    normalize();
    return *this;
}

LocalizedElement LocalizedElement::pow(unsigned e) const {
    LocalizedElement out = LocalizedElement::constant(ExactRational(1));
    for (unsigned i = 0; i < e; ++i)
        out *= *this;
    return out;
}

bool operator==(const LocalizedElement& a, const LocalizedElement& b) {
    if (a.den_ == b.den_)
        return a.num_ == b.num_;
    const RegistryPtr reg = merge_registries(a.registry(), b.registry());
    DenominatorMultiset ea, eb;   // excess of b over a and of a over b
    for (auto& [id, exp] : b.den_) {
        auto it = a.den_.find(id);
        int e = exp - (it == a.den_.end() ? 0 : it->second);
        if (e > 0)
            ea[id] = e;
    }
    for (auto& [id, exp] : a.den_) {
        auto it = b.den_.find(id);
        int e = exp - (it == b.den_.end() ? 0 : it->second);
        if (e > 0)
            eb[id] = e;
    }
    Polynomial lhs = a.num_ * minor_product(reg, ea);
    Polynomial rhs = b.num_ * minor_product(reg, eb);
    return lhs == rhs;
}

bool LocalizedElement::is_one() const {
    return den_.empty() && num_.is_constant() && num_.constant_value().is_one();
}

ExactRational LocalizedElement::evaluate(const std::vector<ExactRational>& point) const {
    ExactRational v = num_.evaluate(point);
    for (auto& [id, exp] : den_) {
        ExactRational m = registry()->minor_poly(id).evaluate(point);
        if (m.is_zero())
            throw DenominatorVanishes("minor w" + std::to_string(id) + " vanishes at the point");
        for (int e = 0; e < exp; ++e)
            v /= m;
    }
    return v;
}

std::string LocalizedElement::str() const {
    std::ostringstream os;
    if (den_.empty())
        return num_.str();
    os << "(" << num_.str() << ")";
    for (auto& [id, exp] : den_) {
        os << "/(" << registry()->minor_poly(id).str() << ")";
        if (exp > 1)
            os << "^" << exp;
    }
    return os.str();
}

LocalizedElement loc_arith(const LocalizedElement& a, const LocalizedElement& b, RingOp op) {
    switch (op) {
    case RingOp::Add: return a + b;
    case RingOp::Sub: return a - b;
    case RingOp::Mul: return a * b;
    }
    throw InvalidInput("unknown ring op");
}

LocalizedElement substitute(const Polynomial& p, const Assignment& a) {
    LocalizedElement acc;
    /* power cache per variable */
    std::vector<std::vector<LocalizedElement>> powers(a.size());
    for (auto& [m, c] : p.terms()) {
        LocalizedElement term = LocalizedElement::constant(c);
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0)
                continue;
            if (i >= a.size() || !a[i])
                throw MissingAssignment(p.registry() ? p.registry()->variable_name(static_cast<int>(i))
                                                     : "#" + std::to_string(i));
            auto& cache = powers[i];
            if (cache.empty())
                cache.push_back(*a[i]);
            while (cache.size() < m[i])
                cache.push_back(cache.back() * *a[i]);
            term *= cache[m[i] - 1];
        }
        acc += term;
    }
    return acc;
}

LocalizedElement substitute(const LocalizedElement& e, const Assignment& a) {
    LocalizedElement out = substitute(e.numerator(), a);
    const RegistryPtr& reg = e.registry();
    for (auto& [id, exp] : e.denominator()) {
        LocalizedElement img = substitute(reg->minor_poly(id), a);
        auto inv = invert_unit(img);
        if (!inv)
            throw NotInvertible("substituted minor w" + std::to_string(id) +
                                " is not a unit of the master ring");
        out *= inv->pow(static_cast<unsigned>(exp));
    }
    return out;
}

std::optional<LocalizedElement> invert_unit(const LocalizedElement& e) {
    if (e.is_zero())
        return std::nullopt;
    if (e.is_constant())
        return LocalizedElement::constant(e.numerator().constant_value().inverse());
    const RegistryPtr& reg = e.registry();
    Polynomial residual = e.numerator();
    DenominatorMultiset factors;
    bool progress = true;
    while (progress && !residual.is_constant()) {
        progress = false;
        for (int id = 1; id <= reg->minor_count(); ++id) {
            while (true) {
                auto q = poly_divexact(residual, reg->minor_poly(id));
                if (!q)
                    break;
                residual = std::move(*q);
                ++factors[id];
                progress = true;
            }
        }
    }
    if (!residual.is_constant() || residual.is_zero())
        return std::nullopt;
    ExactRational c = residual.constant_value();
    Polynomial num = make_polynomial(reg, {});
    num.add_term(Monomial{}, c.inverse());
    for (auto& [id, exp] : e.denominator())
        num *= reg->minor_poly(id).pow(static_cast<unsigned>(exp));
    return LocalizedElement(std::move(num), std::move(factors));
}

} // namespace flagforge::exactring
