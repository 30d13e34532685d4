#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagforge/flagmatrix.hpp"

#include <memory>
#include <vector>

using namespace flagforge;
using namespace flagforge::flagmatrix;
using exactring::DenominatorMultiset;
using exactring::VariableRegistry;

namespace {

struct Gr24 {
    std::shared_ptr<MasterContext> ctx;
    RegistryPtr reg;
    Polynomial z13, z14, z23, z24, m5;

    Gr24() : ctx(std::make_shared<MasterContext>(FlagType({2}, 4))), reg(ctx->registry()) {
        z13 = Polynomial::variable(reg, 0);
        z14 = Polynomial::variable(reg, 1);
        z23 = Polynomial::variable(reg, 2);
        z24 = Polynomial::variable(reg, 3);
        m5 = z13 * z24 - z14 * z23;
    }

    AdmissibleSequence chart(std::vector<int> cols) const {
        return AdmissibleSequence(ctx->flag_type(), {std::move(cols)});
    }
    LocalizedElement frac(Polynomial num, int minor_id) const {
        return LocalizedElement(std::move(num), DenominatorMultiset{{minor_id, 1}});
    }
    LocalizedElement frac(long v, int minor_id) const {
        Polynomial::TermMap t;
        if (v)
            t[exactring::Monomial{}] = exactring::ExactRational(v);
        return frac(make_polynomial(reg, std::move(t)), minor_id);
    }
};

LocalizedElement lc(long v) { return LocalizedElement::constant(ExactRational(v)); }

NumericFlagMatrix numeric(std::vector<std::vector<long>> rows) {
    NumericFlagMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j)
            m.entries[i][j] = ExactRational(rows[i][j]);
    return m;
}

void check_matrix(const RingMatrix& got, const std::vector<std::vector<LocalizedElement>>& want) {
    REQUIRE(got.rows == static_cast<int>(want.size()));
    REQUIRE(got.cols == static_cast<int>(want[0].size()));
    for (int i = 1; i <= got.rows; ++i)
        for (int j = 1; j <= got.cols; ++j)
            CHECK(got.at(i, j) == want[i - 1][j - 1]);
}

} // namespace

TEST_CASE("reference matrix registers chart variables row-major") {
    auto reg = std::make_shared<VariableRegistry>();
    RingMatrix ref = reference_matrix(reg, FlagType({2}, 4));
    CHECK(ref.rows == 2);
    CHECK(ref.cols == 4);
    CHECK(reg->variable_count() == 4);
    CHECK(reg->variable_name(0) == "z13");
    CHECK(reg->variable_name(1) == "z14");
    CHECK(reg->variable_name(2) == "z23");
    CHECK(reg->variable_name(3) == "z24");
    CHECK(ref.at(1, 1).is_one());
    CHECK(ref.at(2, 1).is_zero());
    CHECK(ref.at(1, 3) == LocalizedElement(Polynomial::variable(reg, 0)));
    CHECK(is_blocked(ref));

    auto reg2 = std::make_shared<VariableRegistry>();
    RingMatrix fref = reference_matrix(reg2, FlagType({1, 2}, 3));
    CHECK(reg2->variable_count() == 3);
    CHECK(reg2->variable_name(0) == "z12");
    CHECK(reg2->variable_name(2) == "z23");
    CHECK(fref.at(1, 2) == LocalizedElement(Polynomial::variable(reg2, 0)));
    CHECK(fref.at(2, 2).is_one());
    CHECK(fref.at(2, 1).is_zero());
    CHECK(is_blocked(fref));

    // the variable count matches the chart dimension for every type, n <= 8
    for (int n = 2; n <= 8; ++n) {
        for (const FlagType& ft : flagcomb::all_flag_types(n)) {
            auto r = std::make_shared<VariableRegistry>();
            reference_matrix(r, ft);
            CHECK(r->variable_count() == ft.chart_dimension());
        }
    }
}

TEST_CASE("characteristic column action and its inverse") {
    Gr24 R;
    auto chi = flagcomb::characteristic_map(R.chart({1, 4}));   // 3-cycle 2->4->3->2
    const RingMatrix& ref = R.ctx->ref();

    RingMatrix moved = apply_characteristic(ref, chi, false);
    // result column chi(k) is ref's column k
    for (int i = 1; i <= 2; ++i)
        for (int k = 1; k <= 4; ++k)
            CHECK(moved.at(i, chi(k)) == ref.at(i, k));

    RingMatrix back = apply_characteristic(moved, chi, true);
    CHECK(back == ref);
    RingMatrix twice = apply_characteristic(apply_characteristic(ref, chi, false), chi, false);
    CHECK(twice != ref);    // chi_{1,4} is not an involution
}

TEST_CASE("determinants") {
    Gr24 R;

    SUBCASE("numeric, cofactor and fraction-free paths") {
        FlagType pro({2}, 4);
        auto mat = [&](std::vector<std::vector<long>> rows) {
            int k = static_cast<int>(rows.size());
            RingMatrix m(k, k, pro);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    m.at(i + 1, j + 1) = lc(rows[i][j]);
            return m;
        };
        CHECK(det(mat({{7}})) == lc(7));
        CHECK(det(mat({{1, 2}, {3, 4}})) == lc(-2));
        CHECK(det(mat({{2, 0, 1}, {1, 3, 2}, {0, 1, 1}})) == lc(3));
        // 4x4 and 5x5 take the elimination path
        CHECK(det(mat({{1, 2, 3, 4}, {5, 6, 7, 8}, {2, 6, 4, 8}, {3, 1, 1, 2}})) == lc(72));
        CHECK(det(mat({{0, 1, 0, 0, 0},
                       {1, 0, 0, 0, 0},
                       {0, 0, 2, 0, 0},
                       {0, 0, 0, 3, 0},
                       {0, 0, 0, 0, 4}})) == lc(-24));
        // multiplicativity
        RingMatrix a = mat({{1, 2, 0, 1}, {0, 1, 1, 0}, {2, 0, 1, 1}, {1, 1, 1, 3}});
        RingMatrix b = mat({{2, 1, 0, 0}, {1, 1, 1, 1}, {0, 2, 1, 0}, {1, 0, 0, 2}});
        CHECK(det(a * b) == det(a) * det(b));
    }

    SUBCASE("symbolic with denominators") {
        FlagType pro({2}, 4);
        RingMatrix m(4, 4, pro);
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j)
                m.at(i, j) = LocalizedElement();
        m.at(1, 1) = LocalizedElement::minor_inverse(R.reg, 1);
        m.at(2, 2) = LocalizedElement(R.z23);
        m.at(3, 3) = LocalizedElement::minor_inverse(R.reg, 5);
        m.at(4, 4) = LocalizedElement(R.m5);
        CHECK(det(m).is_one());

        m.at(1, 2) = LocalizedElement(R.z14, DenominatorMultiset{{2, 3}});
        CHECK(det(m).is_one());    // still upper triangular

        // 2x2 with mixed denominators: 1/z23 * z13 - z14/z24 * z24 = z13/z23 - z14
        RingMatrix s(2, 2, pro);
        s.at(1, 1) = LocalizedElement::minor_inverse(R.reg, 1);
        s.at(1, 2) = R.frac(R.z14, 2);
        s.at(2, 1) = LocalizedElement(R.z24);
        s.at(2, 2) = LocalizedElement(R.z13);
        CHECK(det(s) == R.frac(R.z13, 1) - LocalizedElement(R.z14));
    }

    SUBCASE("distinguished and nested minors of the reference") {
        const RingMatrix& ref = R.ctx->ref();
        CHECK(nested_minor(ref, 1, {1, 2}).is_one());
        CHECK(nested_minor(ref, 1, {1, 3}) == LocalizedElement(R.z23));
        CHECK(nested_minor(ref, 1, {1, 4}) == LocalizedElement(R.z24));
        CHECK(nested_minor(ref, 1, {2, 3}) == LocalizedElement(-R.z13));
        CHECK(nested_minor(ref, 1, {2, 4}) == LocalizedElement(-R.z14));
        CHECK(nested_minor(ref, 1, {3, 4}) == LocalizedElement(R.m5));
        CHECK(distinguished_minor(ref, 1, {3, 4}) == LocalizedElement(R.m5));
        CHECK_THROWS_AS(nested_minor(ref, 1, {1}), InvalidInput);
        CHECK_THROWS_AS(distinguished_minor(ref, 2, {1}), InvalidInput);
    }
}

TEST_CASE("master minor table") {
    Gr24 R;
    auto reg = R.reg;
    REQUIRE(reg->minor_count() == 5);
    CHECK(reg->minor_poly(1) == R.z23);
    CHECK(reg->minor_poly(2) == R.z24);
    CHECK(reg->minor_poly(3) == R.z13);   // sign-normalized from -z13
    CHECK(reg->minor_poly(4) == R.z14);
    CHECK(reg->minor_poly(5) == R.m5);
    CHECK(reg->minor(1).columns == std::vector<int>{1, 3});
    CHECK(reg->minor(3).columns == std::vector<int>{2, 3});
    CHECK(reg->minor(5).columns == std::vector<int>{3, 4});
    for (int id = 1; id <= 5; ++id) {
        CHECK(reg->minor(id).level == 1);
        CHECK(reg->minor_poly(id).leading_coefficient() > ExactRational(0));
    }
    CHECK(R.ctx->master_minor_ids() == std::vector<int>{1, 2, 3, 4, 5});

    // Fl(1,2;3): levels 1 and 2, with the quadratic top minor
    MasterContext fc(FlagType({1, 2}, 3));
    auto freg = fc.registry();
    REQUIRE(freg->minor_count() == 4);
    Polynomial fz12 = Polynomial::variable(freg, 0);
    Polynomial fz13 = Polynomial::variable(freg, 1);
    Polynomial fz23 = Polynomial::variable(freg, 2);
    CHECK(freg->minor_poly(1) == fz12);
    CHECK(freg->minor_poly(2) == fz13);
    CHECK(freg->minor_poly(3) == fz23);
    CHECK(freg->minor_poly(4) == fz12 * fz23 - fz13);
    CHECK(freg->minor(1).level == 1);
    CHECK(freg->minor(3).level == 2);
    CHECK(freg->minor(3).columns == std::vector<int>{1, 3});
    CHECK(freg->minor(4).columns == std::vector<int>{2, 3});
}

TEST_CASE("atlas bookkeeping and localization sets") {
    Gr24 R;
    CHECK(R.ctx->atlas().size() == 6);
    CHECK(R.ctx->reference_seq() == R.chart({1, 2}));
    CHECK(R.ctx->atlas_index(R.chart({2, 4})) == 4);
    // an independently built instance of the same chart is found by value
    CHECK(R.ctx->atlas_index(AdmissibleSequence(FlagType({2}, 4), {{1, 2}})) == 0);
    CHECK_THROWS_AS(R.ctx->atlas_index(AdmissibleSequence(FlagType({2}, 5), {{1, 2}})),
                    InvalidInput);

    CHECK(R.ctx->localization_set(R.chart({1, 2})).empty());
    CHECK(R.ctx->localization_set(R.chart({1, 3})) == std::vector<int>{1});
    CHECK(R.ctx->localization_set(R.chart({3, 4})) == std::vector<int>{5});
    AdmissibleChain pair(R.ctx->flag_type(), {R.chart({1, 3}), R.chart({2, 4})});
    CHECK(R.ctx->localization_set(pair) == std::vector<int>{1, 4});
}

TEST_CASE("the six chart realizations") {
    Gr24 R;
    auto& z13 = R.z13;
    auto& z14 = R.z14;
    auto& z23 = R.z23;
    auto& z24 = R.z24;
    LocalizedElement one = lc(1), zero = lc(0);

    struct Fixture {
        std::vector<int> cols;
        std::vector<std::vector<LocalizedElement>> matrix;
    };
    std::vector<Fixture> fixtures = {
        {{1, 2}, {{one, zero, LocalizedElement(z13), LocalizedElement(z14)},
                  {zero, one, LocalizedElement(z23), LocalizedElement(z24)}}},
        {{1, 3}, {{one, R.frac(-z13, 1), zero, R.frac(z14 * z23 - z13 * z24, 1)},
                  {zero, R.frac(1, 1), one, R.frac(z24, 1)}}},
        {{1, 4}, {{one, R.frac(-z14, 2), R.frac(R.m5, 2), zero},
                  {zero, R.frac(1, 2), R.frac(z23, 2), one}}},
        {{2, 3}, {{R.frac(-z23, 3), one, zero, R.frac(R.m5, 3)},
                  {R.frac(1, 3), zero, one, R.frac(z14, 3)}}},
        {{2, 4}, {{R.frac(-z24, 4), one, R.frac(-R.m5, 4), zero},
                  {R.frac(1, 4), zero, R.frac(z13, 4), one}}},
        {{3, 4}, {{R.frac(z24, 5), R.frac(-z14, 5), one, zero},
                  {R.frac(-z23, 5), R.frac(z13, 5), zero, one}}},
    };

    for (const auto& f : fixtures) {
        auto seq = R.chart(f.cols);
        const Realization& r = R.ctx->realization(seq);
        INFO("chart ", seq.str());
        check_matrix(r.matrix, f.matrix);
        CHECK(r.matrix == r.C * R.ctx->ref());
        CHECK(is_blocked(r.blocked));
        auto chi = flagcomb::characteristic_map(seq);
        CHECK(r.blocked == apply_characteristic(r.matrix, chi, true));

        // generators are exactly the non-(0,1) entries, row-major
        std::vector<LocalizedElement> expect_gens;
        for (const auto& row : f.matrix)
            for (const auto& e : row)
                if (!e.is_zero() && !e.is_one())
                    expect_gens.push_back(e);
        REQUIRE(r.generators.size() == expect_gens.size());
        for (size_t i = 0; i < expect_gens.size(); ++i)
            CHECK(r.generators[i] == expect_gens[i]);

        // standalone entry point agrees with the memoized one
        Realization again = master_realization(*R.ctx, seq);
        CHECK(again.matrix == r.matrix);
    }
}

TEST_CASE("transition fixtures") {
    Gr24 R;
    auto i0 = R.chart({1, 2});

    SUBCASE("reference to {2,3}") {
        const TransitionData& t = R.ctx->transition(i0, R.chart({2, 3}));
        check_matrix(t.C, {{R.frac(-R.z23, 3), lc(1)},
                           {R.frac(1, 3), lc(0)}});
        CHECK(t.realized == t.C * R.ctx->ref());
        CHECK(is_blocked(t.blocked));
        REQUIRE(t.assignment.size() == 4);
        CHECK(t.assignment[0] == R.frac(-R.z23, 3));                  // z13
        CHECK(t.assignment[1] == R.frac(R.m5, 3));                    // z14
        CHECK(t.assignment[2] == R.frac(1, 3)); // z23
        CHECK(t.assignment[3] == R.frac(R.z14, 3));                   // z24
    }

    SUBCASE("reference to {1,4}") {
        const TransitionData& t = R.ctx->transition(i0, R.chart({1, 4}));
        check_matrix(t.C, {{lc(1), R.frac(-R.z14, 2)},
                           {lc(0), R.frac(1, 2)}});
        CHECK(t.assignment[0] == R.frac(-R.z14, 2));
        CHECK(t.assignment[1] == R.frac(R.m5, 2));
        CHECK(t.assignment[2] == R.frac(1, 2));
        CHECK(t.assignment[3] == R.frac(R.z23, 2));
    }

    SUBCASE("identity transition") {
        const TransitionData& t = R.ctx->transition(i0, i0);
        CHECK(t.C == RingMatrix::identity(2, R.ctx->flag_type()));
        for (int v = 0; v < 4; ++v)
            CHECK(t.assignment[v] == LocalizedElement(Polynomial::variable(R.reg, v)));
    }

    SUBCASE("every transition realizes its chart") {
        for (const auto& to : R.ctx->atlas()) {
            const TransitionData& t = R.ctx->transition(R.chart({1, 3}), to);
            CHECK(is_blocked(t.blocked));
            CHECK(t.realized == t.C * apply_characteristic(
                R.ctx->ref(), flagcomb::characteristic_map(R.chart({1, 3})), false));
            // block_lu_transition is the same computation
            TransitionData direct = block_lu_transition(*R.ctx, R.chart({1, 3}), to);
            CHECK(direct.C == t.C);
            for (size_t v = 0; v < t.assignment.size(); ++v)
                CHECK(direct.assignment[v] == t.assignment[v]);
        }
    }
}

TEST_CASE("cocycle condition holds exhaustively") {
    Gr24 R;
    const auto& atlas = R.ctx->atlas();
    for (const auto& a : atlas)
        for (const auto& b : atlas)
            for (const auto& c : atlas)
                CHECK(R.ctx->verify_cocycle(a, b, c));

    MasterContext fc(FlagType({1, 2}, 3));
    const auto& fatlas = fc.atlas();
    REQUIRE(fatlas.size() == 6);
    for (const auto& a : fatlas)
        for (const auto& b : fatlas)
            for (const auto& c : fatlas)
                CHECK(fc.verify_cocycle(a, b, c));
}

TEST_CASE("flag variety anchor beyond the Grassmannian") {
    MasterContext fc(FlagType({1, 2}, 3));
    RegistryPtr reg = fc.registry();
    Polynomial z12 = Polynomial::variable(reg, 0);
    Polynomial z13 = Polynomial::variable(reg, 1);
    Polynomial z23 = Polynomial::variable(reg, 2);
    AdmissibleSequence target(fc.flag_type(), {{2}, {2, 3}});

    const Realization& r = fc.realization(target);
    auto inv = [&](int id) { return LocalizedElement::minor_inverse(reg, id); };
    check_matrix(r.matrix,
                 {{inv(1), lc(1), LocalizedElement(z13, DenominatorMultiset{{1, 1}})},
                  {-LocalizedElement::minor_inverse(reg, 4), lc(0), lc(1)}});

    const TransitionData& t = fc.transition(fc.reference_seq(), target);
    REQUIRE(t.assignment.size() == 3);
    CHECK(t.assignment[0] == LocalizedElement(z13, DenominatorMultiset{{1, 1}}));
    CHECK(t.assignment[1] == inv(1));
    CHECK(t.assignment[2] == -LocalizedElement::minor_inverse(reg, 4));

    // localization sets pick up the per-level nested minors
    CHECK(fc.localization_set(target) == std::vector<int>{1, 4});
    CHECK(fc.localization_set(fc.reference_seq()).empty());
    AdmissibleSequence other(fc.flag_type(), {{3}, {1, 3}});
    CHECK(fc.localization_set(other) == std::vector<int>{2, 3});
}

TEST_CASE("numeric chart coordinates") {
    Gr24 R;
    NumericFlagMatrix m = numeric({{1, 2, 3, 4}, {5, 6, 7, 8}});

    auto ref_coords = R.ctx->evaluate_chart_coordinates(m, R.chart({1, 2}));
    REQUIRE(ref_coords.has_value());
    std::vector<ExactRational> expect = {-1, -2, 2, 3};
    CHECK(*ref_coords == expect);

    auto c13 = R.ctx->evaluate_chart_coordinates(m, R.chart({1, 3}));
    REQUIRE(c13.has_value());
    std::vector<ExactRational> expect13 = {ExactRational(1, 2), ExactRational(-1, 2),
                                           ExactRational(1, 2), ExactRational(3, 2)};
    CHECK(*c13 == expect13);

    // the symbolic transition evaluated at the reference coordinates agrees
    const TransitionData& t = R.ctx->transition(R.chart({1, 2}), R.chart({1, 3}));
    for (int v = 0; v < 4; ++v)
        CHECK(t.assignment[v].evaluate(*ref_coords) == (*c13)[v]);

    // row operations leave the coordinates fixed: the flag is what matters
    NumericFlagMatrix rowop = numeric({{7, 10, 13, 16}, {5, 6, 7, 8}});   // r1 := 2 r1 + r2... rows stay independent
    auto c2 = R.ctx->evaluate_chart_coordinates(rowop, R.chart({1, 3}));
    REQUIRE(c2.has_value());
    CHECK(*c2 == expect13);

    // outside the chart: the pivot minor vanishes
    NumericFlagMatrix outside = numeric({{1, 0, 0, 0}, {0, 0, 1, 0}});
    CHECK_FALSE(R.ctx->evaluate_chart_coordinates(outside, R.chart({1, 2})).has_value());
    auto ok13 = R.ctx->evaluate_chart_coordinates(outside, R.chart({1, 3}));
    REQUIRE(ok13.has_value());
    CHECK(*ok13 == std::vector<ExactRational>{0, 0, 0, 0});

    // not a flag at all
    NumericFlagMatrix degenerate = numeric({{1, 2, 3, 4}, {2, 4, 6, 8}});
    CHECK_THROWS_AS(R.ctx->evaluate_chart_coordinates(degenerate, R.chart({1, 2})), InvalidFlag);
    NumericFlagMatrix misshapen = numeric({{1, 2, 3}, {4, 5, 6}});
    CHECK_THROWS_AS(R.ctx->evaluate_chart_coordinates(misshapen, R.chart({1, 2})), InvalidFlag);

    // flag variety case: coordinates depend on the full chain of subspaces
    MasterContext fc(FlagType({1, 2}, 3));
    NumericFlagMatrix fm(2, 3);
    fm.entries = {{ExactRational(2), ExactRational(1), ExactRational(3)},
                  {ExactRational(0), ExactRational(1), ExactRational(1)}};
    AdmissibleSequence fref = fc.reference_seq();
    auto fcoords = fc.evaluate_chart_coordinates(fm, fref);
    REQUIRE(fcoords.has_value());
    // blocked form of [[2,1,3],[0,1,1]] under I0: row1/2 -> [1,1/2,3/2]; clear col2: [1,0,1/2]
    CHECK(*fcoords == std::vector<ExactRational>{ExactRational(1, 2), ExactRational(3, 2),
                                                 ExactRational(1)});
}
