#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flagforge/polynomial.hpp"

namespace flagforge::exactring {

/* minor id -> positive exponent, ascending id order */
using DenominatorMultiset = std::map<int, int>;

/* An element of the master ring: polynomial numerator over a formal product
 * of registered distinguished minors.  Normalized on construction: a
 * denominator minor is cancelled exactly when it divides the whole numerator;
 * a zero numerator forces an empty denominator.  Equality is semantic, by
 * cross-multiplication. */
class LocalizedElement {
public:
    LocalizedElement() = default;                       // zero
    explicit LocalizedElement(Polynomial num);
    LocalizedElement(Polynomial num, DenominatorMultiset den);
    static LocalizedElement constant(ExactRational c);
    static LocalizedElement minor_inverse(const RegistryPtr& reg, int minor_id, int exponent = 1);

    LocalizedElement operator-() const;
    LocalizedElement& operator+=(const LocalizedElement& o);
    LocalizedElement& operator-=(const LocalizedElement& o);
    LocalizedElement& operator*=(const LocalizedElement& o);
    friend LocalizedElement operator+(LocalizedElement a, const LocalizedElement& b) { return a += b; }
    friend LocalizedElement operator-(LocalizedElement a, const LocalizedElement& b) { return a -= b; }
    friend LocalizedElement operator*(LocalizedElement a, const LocalizedElement& b) { return a *= b; }
    LocalizedElement pow(unsigned e) const;

    friend bool operator==(const LocalizedElement& a, const LocalizedElement& b);
    friend bool operator!=(const LocalizedElement& a, const LocalizedElement& b) { return !(a == b); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    bool is_constant() const { return den_.empty() && num_.is_constant(); }

    const Polynomial& numerator() const { return num_; }
    const DenominatorMultiset& denominator() const { return den_; }
    const RegistryPtr& registry() const { return num_.registry(); }

    /* Exact value at a rational point (indexed by registry variable index);
     * throws DenominatorVanishes when a denominator minor evaluates to 0. */
    ExactRational evaluate(const std::vector<ExactRational>& point) const;

    std::string str() const;

private:
    Polynomial num_;
    DenominatorMultiset den_;
    void normalize();
};

LocalizedElement loc_arith(const LocalizedElement& a, const LocalizedElement& b, RingOp op);

/* Assignment of LocalizedElements to registry variables, by variable index. */
using Assignment = std::vector<std::optional<LocalizedElement>>;

/* Ring-homomorphism image of p under the assignment; every variable occurring
 * in p must be assigned (MissingAssignment otherwise). */
LocalizedElement substitute(const Polynomial& p, const Assignment& a);

/* Extension to localized elements: denominator minors are substituted and
 * inverted, which requires their images to be units of the master ring
 * (NotInvertible otherwise). */
LocalizedElement substitute(const LocalizedElement& e, const Assignment& a);

/* Inverse of a unit of the master ring: an element whose numerator factors as
 * constant * product of registered minors.  nullopt when the numerator does
 * not factor that way (the element is no unit, or recognition fails). */
std::optional<LocalizedElement> invert_unit(const LocalizedElement& e);

} // namespace flagforge::exactring
