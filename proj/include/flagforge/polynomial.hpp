#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flagforge/rational.hpp"
#include "flagforge/registry.hpp"

namespace flagforge::exactring {

/* Exponent vector over the registry's variables, trailing zeros stripped. */
using Monomial = std::vector<unsigned>;

Monomial monomial_trim(Monomial m);
Monomial monomial_mul(const Monomial& a, const Monomial& b);
bool monomial_divides(const Monomial& a, const Monomial& b);   // a | b
Monomial monomial_div(const Monomial& b, const Monomial& a);   // b / a, assumes a | b
unsigned monomial_degree(const Monomial& m);

/* Graded lexicographic order: total degree first, ties broken on the largest
 * (last registry) variable.  The maximal element of a map is the leading
 * monomial. */
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

enum class RingOp { Add, Sub, Mul };

/* Sparse multivariate polynomial over ExactRational in the registry's
 * commuting variables.  No zero coefficients are stored.  A polynomial with a
 * null registry is a plain constant compatible with any operand. */
class Polynomial {
public:
    using TermMap = std::map<Monomial, ExactRational, MonomialOrder>;

    Polynomial() = default;                                 // zero
    static Polynomial constant(ExactRational c);
    static Polynomial variable(RegistryPtr reg, int index, unsigned exponent = 1);

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial pow(unsigned e) const;

    friend bool operator==(const Polynomial& a, const Polynomial& b);
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_monomial() const { return terms_.size() == 1; }
    ExactRational constant_value() const;                  // 0 for zero poly
    const Monomial& leading_monomial() const;              // throws on zero
    const ExactRational& leading_coefficient() const;
    unsigned total_degree() const;                         // 0 for zero poly
    bool is_homogeneous() const;
    size_t term_count() const { return terms_.size(); }

    const TermMap& terms() const { return terms_; }
    const RegistryPtr& registry() const { return reg_; }
    void add_term(const Monomial& m, const ExactRational& c);

    /* Exact evaluation; `point` is indexed by registry variable index. */
    ExactRational evaluate(const std::vector<ExactRational>& point) const;

    std::string str() const;

private:
    RegistryPtr reg_;
    TermMap terms_;
    friend Polynomial make_polynomial(RegistryPtr, Polynomial::TermMap);
};

Polynomial make_polynomial(RegistryPtr reg, Polynomial::TermMap terms);

Polynomial poly_arith(const Polynomial& a, const Polynomial& b, RingOp op);

/* Exact quotient a / b, or nullopt when b does not divide a.  b must be
 * nonzero. */
std::optional<Polynomial> poly_divexact(const Polynomial& a, const Polynomial& b);

} // namespace flagforge::exactring
