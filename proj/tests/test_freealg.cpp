#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagforge/flagmatrix.hpp"
#include "flagforge/freealg.hpp"

#include <memory>

using namespace flagforge;
using namespace flagforge::freealg;
using exactring::DenominatorMultiset;
using exactring::ExactRational;
using exactring::LocalizedElement;
using exactring::Polynomial;
using flagmatrix::MasterContext;

namespace {

struct Gr24NC {
    std::shared_ptr<MasterContext> ctx;
    RegistryPtr reg;
    Polynomial z13, z14, z23, z24, m5;

    Gr24NC() : ctx(std::make_shared<MasterContext>(flagcomb::FlagType({2}, 4))), reg(ctx->registry()) {
        z13 = Polynomial::variable(reg, 0);
        z14 = Polynomial::variable(reg, 1);
        z23 = Polynomial::variable(reg, 2);
        z24 = Polynomial::variable(reg, 3);
        m5 = z13 * z24 - z14 * z23;
    }

    NCPolynomial word(Word w, long c = 1) const {
        return NCPolynomial::word(reg, std::move(w), ExactRational(c));
    }
};

} // namespace

TEST_CASE("generator ids and names") {
    Gr24NC R;
    CHECK(z_generator_id(R.reg, 0) == 0);
    CHECK(z_generator_id(R.reg, 3) == 3);
    CHECK(w_generator_id(R.reg, 1) == 4);
    CHECK(w_generator_id(R.reg, 5) == 8);
    CHECK_FALSE(is_w_generator(R.reg, 3));
    CHECK(is_w_generator(R.reg, 4));
    CHECK(generator_name(R.reg, 0) == "z13");
    CHECK(generator_name(R.reg, 8) == "w5");
    CHECK_THROWS_AS(z_generator_id(R.reg, 4), InvalidInput);
    CHECK_THROWS_AS(w_generator_id(R.reg, 0), InvalidInput);
    CHECK_THROWS_AS(w_generator_id(R.reg, 6), InvalidInput);
    CHECK_THROWS_AS(generator_name(R.reg, 9), InvalidInput);
}

TEST_CASE("word order is degree first, then front-to-back") {
    WordOrder lt;
    CHECK(lt(Word{}, Word{0}));
    CHECK(lt(Word{3}, Word{0, 0}));            // length dominates any letters
    CHECK(lt(Word{0, 3}, Word{1, 2}));         // front letter decides
    CHECK_FALSE(lt(Word{1, 2}, Word{0, 3}));
    CHECK(lt(Word{1, 2}, Word{1, 3}));
    CHECK_FALSE(lt(Word{1, 2}, Word{1, 2}));

    Gr24NC R;
    NCPolynomial p = R.word({0, 3}) - R.word({1, 2});   // zhat13 zhat24 - zhat14 zhat23
    CHECK(p.leading_word() == Word{1, 2});
}

TEST_CASE("free algebra arithmetic") {
    Gr24NC R;
    NCPolynomial x = NCPolynomial::generator(R.reg, 0);
    NCPolynomial y = NCPolynomial::generator(R.reg, 3);

    CHECK(x * y != y * x);
    NCPolynomial sq = (x + y) * (x + y);
    CHECK(sq.term_count() == 4);
    CHECK(sq == x * x + x * y + y * x + y * y);
    CHECK((x - x).is_zero());
    CHECK((x * NCPolynomial::constant(1)) == x);
    CHECK(NCPolynomial::constant(1).is_one());
    CHECK(NCPolynomial::word(R.reg, {}).is_one());
    CHECK((x * y).leading_word() == Word{0, 3});

    NCPolynomial c = NCPolynomial::constant(ExactRational(2, 3));
    CHECK((c * x + x * c) == NCPolynomial::word(R.reg, {0}, ExactRational(4, 3)));
}

TEST_CASE("commutatization") {
    Gr24NC R;
    // commutators die
    CHECK(commutatize(R.word({0, 3}) - R.word({3, 0})).is_zero());
    // w-symbols become formal minor inverses
    CHECK(commutatize(R.word({4})) ==
          LocalizedElement::minor_inverse(R.reg, 1));
    CHECK(commutatize(R.word({8, 0, 3})) ==
          LocalizedElement(R.z13 * R.z24, DenominatorMultiset{{5, 1}}));
    CHECK(commutatize(R.word({4, 2})).is_one());    // what-1 zhat23 maps to z23/z23
    CHECK(commutatize(NCPolynomial::constant(ExactRational(7, 2))) ==
          LocalizedElement::constant(ExactRational(7, 2)));
    CHECK(commutatize(R.word({0, 4}, 2) + R.word({4, 0}, 3)) ==
          LocalizedElement(Polynomial::constant(5) * R.z13, DenominatorMultiset{{1, 1}}));
}

TEST_CASE("lift fixtures") {
    Gr24NC R;

    LocalizedElement e(R.z13, DenominatorMultiset{{1, 1}});
    CHECK(lift(e) == R.word({4, 0}));
    CHECK(lift(e, LiftConvention::InverseLast) == R.word({0, 4}));

    // monomial denominators cancel per term: (z14 z23 - z13 z24)/z23
    LocalizedElement g(R.z14 * R.z23 - R.z13 * R.z24, DenominatorMultiset{{1, 1}});
    CHECK(lift(g) == R.word({1}) - R.word({4, 0, 3}));
    CHECK(lift(g, LiftConvention::InverseLast) == R.word({1}) - R.word({0, 3, 4}));

    // partial cancellation leaves the other terms alone
    LocalizedElement h(R.z23 * R.z13 + R.z14, DenominatorMultiset{{1, 1}});
    CHECK(lift(h) == R.word({0}) + R.word({4, 1}));

    // polynomial (non-monomial) minors never cancel termwise
    LocalizedElement k(R.z13 * R.z24, DenominatorMultiset{{5, 1}});
    CHECK(lift(k) == R.word({8, 0, 3}));

    // plain polynomials lift letter by letter, ascending variable order
    CHECK(lift(LocalizedElement(R.m5)) == R.word({0, 3}) - R.word({1, 2}));
    CHECK(lift(LocalizedElement(R.z23 * R.z23 * R.z14)) == R.word({1, 2, 2}));

    // powers of an inverse repeat the w-symbol
    LocalizedElement p = LocalizedElement::minor_inverse(R.reg, 1, 2);
    CHECK(lift(p) == R.word({4, 4}));

    // scalars survive
    LocalizedElement s(Polynomial::constant(ExactRational(-3, 2)) * R.z14,
                       DenominatorMultiset{{2, 1}});
    CHECK(lift(s) == NCPolynomial::word(R.reg, {5, 1}, ExactRational(-3, 2)));

    CHECK(lift(LocalizedElement()).is_zero());
    CHECK(lift(LocalizedElement::constant(ExactRational(4))) == NCPolynomial::constant(ExactRational(4)));
}

TEST_CASE("pi0 after lift is the identity") {
    Gr24NC R;
    std::vector<LocalizedElement> samples = {
        LocalizedElement(R.z13),
        LocalizedElement(R.m5, DenominatorMultiset{{1, 1}, {5, 2}}),
        LocalizedElement(R.z23 * R.z13 + R.z14, DenominatorMultiset{{1, 1}}),
        LocalizedElement(Polynomial::constant(ExactRational(9, 4))),
        LocalizedElement(R.z13 * R.z13 * R.z24 - R.z23, DenominatorMultiset{{3, 1}, {4, 2}}),
        LocalizedElement(),
    };
    for (const auto& seq : R.ctx->atlas())
        for (const auto& gen : R.ctx->realization(seq).generators)
            samples.push_back(gen);

    for (const auto& e : samples) {
        CHECK(commutatize(lift(e)) == e);
        CHECK(commutatize(lift(e, LiftConvention::InverseLast)) == e);
    }
}

TEST_CASE("localization rules and reduction") {
    Gr24NC R;
    RewriteSystem sys = localization_rules(R.reg, {1, 5});
    REQUIRE(sys.rules().size() == 4);

    // both orientations of the monomial minor collapse to 1
    CHECK(reduce(R.word({4, 2}), sys).is_one());
    CHECK(reduce(R.word({2, 4}), sys).is_one());
    // and nested occurrences keep collapsing
    CHECK(reduce(R.word({2, 4, 2, 4}), sys).is_one());
    CHECK(reduce(R.word({4, 2, 2, 4}), sys) == R.word({}));

    // the quadratic minor: leading word of w5*m5 is what5 zhat14 zhat23
    CHECK(reduce(R.word({8, 1, 2}), sys) == R.word({8, 0, 3}) - NCPolynomial::constant(1));
    NCPolynomial w5m5 = R.word({8}) * lift(LocalizedElement(R.m5));
    NCPolynomial m5w5 = lift(LocalizedElement(R.m5)) * R.word({8});
    CHECK(reduce(w5m5, sys).is_one());
    CHECK(reduce(m5w5, sys).is_one());

    // no rule applies: the input comes back untouched
    NCPolynomial stuck = R.word({4, 0}) - R.word({0, 4});
    CHECK(reduce(stuck, sys) == stuck);

    // rules only exist for requested minors
    RewriteSystem sys1 = localization_rules(R.reg, {1});
    CHECK(reduce(R.word({8}) * lift(LocalizedElement(R.m5)), sys1) != NCPolynomial::constant(1));

    CHECK_THROWS_AS(localization_rules(R.reg, {6}), InvalidInput);
}

TEST_CASE("three-valued equality") {
    Gr24NC R;
    RewriteSystem sys = localization_rules(R.reg, {1, 2, 3, 4, 5});

    CHECK(nc_equal(R.word({4, 2}), R.word({2, 4}), sys) == EqualityVerdict::Equal);
    CHECK(nc_equal(R.word({8}) * lift(LocalizedElement(R.m5)),
                   NCPolynomial::constant(1), sys) == EqualityVerdict::Equal);

    // different commutative shadows
    CHECK(nc_equal(R.word({0}), R.word({1}), sys) == EqualityVerdict::Distinct);
    CHECK(nc_equal(R.word({4, 0}), R.word({5, 0}), sys) == EqualityVerdict::Distinct);

    // same shadow, no rewrite bridges the gap
    CHECK(nc_equal(R.word({0, 3}), R.word({3, 0}), sys) == EqualityVerdict::Unknown);
    CHECK(nc_equal(R.word({4, 0}), R.word({0, 4}), sys) == EqualityVerdict::Unknown);

    CHECK(nc_equal(R.word({2}), R.word({2}), sys) == EqualityVerdict::Equal);
}
