#pragma once
#include <map>
#include <string>
#include <vector>

#include "flagforge/localized.hpp"

namespace flagforge::freealg {

using exactring::ExactRational;
using exactring::LocalizedElement;
using exactring::RegistryPtr;
using exactring::RingOp;

/* A word in the free algebra: a sequence of generator ids.  Ids 0..Z-1 are
 * the z-generators in registry order; Z + (k-1) is the w-symbol of minor k,
 * so z-generators precede all w-symbols in the generator order.  The empty
 * word is the multiplicative identity. */
using Word = std::vector<int>;

int z_generator_id(const RegistryPtr& reg, int var_index);
int w_generator_id(const RegistryPtr& reg, int minor_id);
bool is_w_generator(const RegistryPtr& reg, int gen_id);
std::string generator_name(const RegistryPtr& reg, int gen_id);

/* Degree-lexicographic: longer words are larger; equal lengths compare letter
 * by letter from the front. */
struct WordOrder {
    bool operator()(const Word& a, const Word& b) const;
};

/* Element of the free associative algebra on the z/w generators. */
class NCPolynomial {
public:
    using TermMap = std::map<Word, ExactRational, WordOrder>;

    NCPolynomial() = default;                              // zero
    static NCPolynomial constant(ExactRational c);
    static NCPolynomial generator(RegistryPtr reg, int gen_id);
    static NCPolynomial word(RegistryPtr reg, Word w, ExactRational c = 1);

    NCPolynomial operator-() const;
    NCPolynomial& operator+=(const NCPolynomial& o);
    NCPolynomial& operator-=(const NCPolynomial& o);
    friend NCPolynomial operator+(NCPolynomial a, const NCPolynomial& b) { return a += b; }
    friend NCPolynomial operator-(NCPolynomial a, const NCPolynomial& b) { return a -= b; }
    friend NCPolynomial operator*(const NCPolynomial& a, const NCPolynomial& b);

    friend bool operator==(const NCPolynomial& a, const NCPolynomial& b);
    friend bool operator!=(const NCPolynomial& a, const NCPolynomial& b) { return !(a == b); }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    const Word& leading_word() const;                      // throws on zero
    size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }
    const RegistryPtr& registry() const { return reg_; }
    void add_term(const Word& w, const ExactRational& c);

    std::string str() const;

private:
    RegistryPtr reg_;
    TermMap terms_;
};

NCPolynomial nc_arith(const NCPolynomial& a, const NCPolynomial& b, RingOp op);

/* pi0: z-generators to chart variables, w_k to the formal inverse of minor k;
 * words become commutative monomials over the minor denominators. */
LocalizedElement commutatize(const NCPolynomial& a);

struct RewriteRule {
    Word lhs;
    NCPolynomial rhs;      // strictly smaller terms under WordOrder
};

/* Rules oriented from w_k m_k - 1 and m_k w_k - 1 at their leading words.
 * No completion is performed, so normal forms need not be unique. */
class RewriteSystem {
public:
    RewriteSystem() = default;
    explicit RewriteSystem(std::vector<RewriteRule> rules) : rules_(std::move(rules)) {}
    const std::vector<RewriteRule>& rules() const { return rules_; }
    bool empty() const { return rules_.empty(); }

private:
    std::vector<RewriteRule> rules_;
};

RewriteSystem localization_rules(const RegistryPtr& reg, const std::vector<int>& minor_ids);

/* Leftmost-innermost rewriting, rules tried in canonical order; terminates
 * because each step strictly decreases the term multiset under WordOrder. */
NCPolynomial reduce(const NCPolynomial& a, const RewriteSystem& sys);

enum class EqualityVerdict { Equal, Distinct, Unknown };

/* Sound three-valued equality: Equal iff a - b rewrites to 0; Distinct iff
 * the commutatizations differ; Unknown otherwise. */
EqualityVerdict nc_equal(const NCPolynomial& a, const NCPolynomial& b, const RewriteSystem& sys);

enum class LiftConvention { InverseFirst, InverseLast };

/* Section of pi0: per numerator term, denominator minors that are monomials
 * dividing the term cancel; the rest emit w-symbols (ascending minor id)
 * placed before (InverseFirst) or after (InverseLast) the ascending
 * z-factors. */
NCPolynomial lift(const LocalizedElement& e, LiftConvention convention = LiftConvention::InverseFirst);

} // namespace flagforge::freealg
