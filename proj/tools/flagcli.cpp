#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <thread>

#include <CLI11.hpp>

#include "flagforge/json_io.hpp"
#include "flagforge/softscheme.hpp"

namespace flagforge::cli {

using exactring::LocalizedElement;
using exactring::Polynomial;
using jsonio::ordered_json;
using softscheme::ContextPtr;

namespace {

int thread_budget() {
    if (const char* env = std::getenv("FLAGFORGE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0)
            return static_cast<int>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

void emit(const ordered_json& doc, const std::string& output) {
    std::string text = jsonio::dump(doc);
    if (output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(output, std::ios::binary);
    if (!os)
        throw InvalidInput("cannot open output file " + output);
    os << text;
}

ordered_json base_doc(const std::string& command, const flagcomb::FlagType& ft) {
    ordered_json doc;
    doc["schema"] = "flagforge/1";
    doc["command"] = command;
    doc["flag_type"] = ordered_json{{"d", ft.d}, {"n", ft.n}};
    return doc;
}

ordered_json parse_json_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw InvalidInput("cannot read file " + path);
    ordered_json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("bad JSON in " + path + ": " + e.what());
    }
    return j;
}

freealg::LiftConvention parse_convention(const std::string& text) {
    if (text == "inverse-first")
        return freealg::LiftConvention::InverseFirst;
    if (text == "inverse-last")
        return freealg::LiftConvention::InverseLast;
    throw InvalidInput("unknown lift convention: " + text);
}

struct CocycleOutcome {
    std::uint64_t checked = 0;
    std::vector<std::array<int, 3>> failures;
};

CocycleOutcome run_cocycle(const ContextPtr& ctx, bool exhaustive) {
    const auto& atlas = ctx->atlas();
    const int m = static_cast<int>(atlas.size());
    std::vector<std::array<int, 3>> triples;
    if (exhaustive) {
        triples.reserve(static_cast<size_t>(m) * m * m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    triples.push_back({i, j, k});
    } else {
        int ref = ctx->atlas_index(ctx->reference_seq());
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                triples.push_back({ref, j, k});
    }
    /* warm the pairwise transition memo serially, then fan the triples out */
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            ctx->transition(atlas[i], atlas[j]);
    int workers = std::min(thread_budget(), static_cast<int>(std::max<size_t>(triples.size(), 1)));
    std::vector<std::vector<std::array<int, 3>>> fails(workers);
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            size_t t;
            while ((t = next.fetch_add(1)) < triples.size()) {
                auto [i, j, k] = triples[t];
                if (!ctx->verify_cocycle(atlas[i], atlas[j], atlas[k]))
                    fails[w].push_back(triples[t]);
            }
        });
    for (auto& th : pool)
        th.join();
    CocycleOutcome out;
    out.checked = triples.size();
    for (auto& f : fails)
        out.failures.insert(out.failures.end(), f.begin(), f.end());
    std::sort(out.failures.begin(), out.failures.end());
    return out;
}

ordered_json scheme_charts_json(const softscheme::SoftScheme& s) {
    ordered_json charts = ordered_json::array();
    for (auto& seq : s.context()->atlas()) {
        ordered_json c;
        c["chart"] = jsonio::sequence_json(seq);
        ordered_json gens = ordered_json::array();
        for (auto& g : s.nc_generators(seq))
            gens.push_back(jsonio::nc_json(g));
        c["generators"] = std::move(gens);
        charts.push_back(std::move(c));
    }
    return charts;
}

ordered_json report_json(const softscheme::VerifyReport& r) {
    ordered_json out;
    out["ok"] = r.ok;
    out["violations"] = r.violations;
    return out;
}

Polynomial fermat_quartic(const softscheme::PluckerRing& pr) {
    Polynomial f;
    for (size_t i = 0; i < pr.subsets.size(); ++i)
        f += Polynomial::variable(pr.yreg, static_cast<int>(i)).pow(4);
    return f;
}

int cmd_atlas(const flagcomb::FlagType& ft, const std::string& output) {
    ordered_json doc = base_doc("atlas", ft);
    doc["dimension"] = ft.chart_dimension();
    doc["count"] = std::to_string(flagcomb::sequence_count(ft));
    ordered_json seqs = ordered_json::array();
    for (auto& s : flagcomb::enumerate_sequences(ft))
        seqs.push_back(jsonio::sequence_json(s));
    doc["sequences"] = std::move(seqs);
    emit(doc, output);
    return 0;
}

int cmd_transition(const ContextPtr& ctx, const std::string& from, const std::string& to,
                   const std::string& output) {
    const auto& ft = ctx->flag_type();
    auto seqI = jsonio::parse_sequence(ft, from);
    auto seqJ = jsonio::parse_sequence(ft, to);
    const auto& t = ctx->transition(seqI, seqJ);
    ordered_json doc = base_doc("transition", ft);
    doc["from"] = jsonio::sequence_json(seqI);
    doc["to"] = jsonio::sequence_json(seqJ);
    doc["C"] = jsonio::matrix_json(t.C);
    doc["blocked"] = jsonio::matrix_json(t.blocked);
    ordered_json assign = ordered_json::array();
    const auto& reg = ctx->registry();
    for (size_t v = 0; v < t.assignment.size(); ++v) {
        ordered_json entry;
        entry["variable"] = reg->variable_name(static_cast<int>(v));
        entry["value"] = jsonio::localized_json(t.assignment[v]);
        assign.push_back(std::move(entry));
    }
    doc["assignment"] = std::move(assign);
    emit(doc, output);
    return 0;
}

int cmd_realize(const ContextPtr& ctx, const std::string& chart, const std::string& output) {
    const auto& ft = ctx->flag_type();
    auto seq = jsonio::parse_sequence(ft, chart);
    const auto& r = ctx->realization(seq);
    ordered_json doc = base_doc("realize", ft);
    doc["chart"] = jsonio::sequence_json(seq);
    doc["matrix"] = jsonio::matrix_json(r.matrix);
    doc["blocked"] = jsonio::matrix_json(r.blocked);
    ordered_json gens = ordered_json::array();
    for (auto& g : r.generators)
        gens.push_back(jsonio::localized_json(g));
    doc["generators"] = std::move(gens);
    emit(doc, output);
    return 0;
}

int cmd_verify_cocycle(const ContextPtr& ctx, bool exhaustive, const std::string& output) {
    auto out = run_cocycle(ctx, exhaustive);
    ordered_json doc = base_doc("verify-cocycle", ctx->flag_type());
    doc["exhaustive"] = exhaustive;
    doc["triples_checked"] = std::to_string(out.checked);
    ordered_json fails = ordered_json::array();
    const auto& atlas = ctx->atlas();
    for (auto& [i, j, k] : out.failures)
        fails.push_back(ordered_json::array(
            {atlas[i].str(), atlas[j].str(), atlas[k].str()}));
    doc["failures"] = std::move(fails);
    doc["ok"] = out.failures.empty();
    emit(doc, output);
    return out.failures.empty() ? 0 : 1;
}

int cmd_master_ring(const ContextPtr& ctx, const std::string& output) {
    const auto& reg = ctx->registry();
    ordered_json doc = base_doc("master-ring", ctx->flag_type());
    ordered_json vars = ordered_json::array();
    for (int v = 0; v < reg->variable_count(); ++v) {
        auto info = reg->variable(v);
        vars.push_back(ordered_json{{"name", info.name}, {"row", info.row}, {"col", info.col}});
    }
    doc["variables"] = std::move(vars);
    ordered_json minors = ordered_json::array();
    for (int id = 1; id <= reg->minor_count(); ++id) {
        auto info = reg->minor(id);
        ordered_json m;
        m["id"] = info.id;
        m["level"] = info.level;
        m["columns"] = info.columns;
        m["name"] = info.name;
        m["monomial"] = info.monomial;
        m["polynomial"] = jsonio::polynomial_json(*info.poly);
        ordered_json aliases = ordered_json::array();
        for (auto& [lvl, cols] : info.aliases)
            aliases.push_back(ordered_json{{"level", lvl}, {"columns", cols}});
        m["aliases"] = std::move(aliases);
        minors.push_back(std::move(m));
    }
    doc["minors"] = std::move(minors);
    emit(doc, output);
    return 0;
}

int cmd_soft_scheme(const ContextPtr& ctx, const std::string& convention,
                    const std::string& output) {
    auto s = softscheme::build_soft_scheme(ctx, parse_convention(convention));
    auto rep = softscheme::verify_soft_scheme(s);
    ordered_json doc = base_doc("soft-scheme", ctx->flag_type());
    doc["convention"] = convention;
    doc["charts"] = scheme_charts_json(s);
    doc["report"] = report_json(rep);
    emit(doc, output);
    return rep.ok ? 0 : 1;
}

int cmd_soften(const ContextPtr& ctx, const std::string& output) {
    auto a = softscheme::build_soft_scheme(ctx, freealg::LiftConvention::InverseFirst);
    auto b = softscheme::build_soft_scheme(ctx, freealg::LiftConvention::InverseLast);
    auto u = softscheme::soften_union(a, b);
    bool contains_both = true;
    for (auto& seq : ctx->atlas()) {
        const auto& ug = u.nc_generators(seq);
        for (auto& g : a.nc_generators(seq))
            contains_both = contains_both && std::find(ug.begin(), ug.end(), g) != ug.end();
        for (auto& g : b.nc_generators(seq))
            contains_both = contains_both && std::find(ug.begin(), ug.end(), g) != ug.end();
    }
    auto rep = softscheme::verify_soft_scheme(u);
    ordered_json doc = base_doc("soften", ctx->flag_type());
    doc["charts"] = scheme_charts_json(u);
    doc["softens_both_inputs"] = contains_both;
    doc["report"] = report_json(rep);
    emit(doc, output);
    return rep.ok && contains_both ? 0 : 1;
}

int cmd_lift(const ContextPtr& ctx, const std::string& expr_path, const std::string& convention,
             const std::string& output) {
    auto j = parse_json_file(expr_path);
    auto e = jsonio::parse_localized(j, ctx->registry());
    auto lifted = freealg::lift(e, parse_convention(convention));
    bool roundtrip = freealg::commutatize(lifted) == e;
    ordered_json doc = base_doc("lift", ctx->flag_type());
    doc["input"] = jsonio::localized_json(e);
    doc["lift"] = jsonio::nc_json(lifted);
    doc["roundtrip_ok"] = roundtrip;
    emit(doc, output);
    return roundtrip ? 0 : 1;
}

int cmd_plucker(const ContextPtr& ctx, const std::string& chart, const std::string& poly_path,
                const std::string& output) {
    const auto& ft = ctx->flag_type();
    auto seq = jsonio::parse_sequence(ft, chart);
    auto pr = softscheme::make_plucker_ring(ft);
    auto tuple = softscheme::plucker_tuple(*ctx, pr, seq);
    ordered_json doc = base_doc("plucker", ft);
    doc["chart"] = jsonio::sequence_json(seq);
    ordered_json slots = ordered_json::array();
    for (size_t i = 0; i < tuple.size(); ++i) {
        ordered_json slot;
        slot["y"] = "y" + std::to_string(i);
        slot["subset"] = pr.subsets[i];
        slot["value"] = jsonio::localized_json(tuple[i]);
        slots.push_back(std::move(slot));
    }
    doc["tuple"] = std::move(slots);
    if (!poly_path.empty()) {
        auto f = jsonio::parse_polynomial(parse_json_file(poly_path), pr.yreg);
        doc["pullback"] = jsonio::localized_json(softscheme::plucker_pullback(*ctx, pr, f, seq));
    }
    emit(doc, output);
    return 0;
}

int cmd_subscheme(const ContextPtr& ctx, const std::string& hyper_path,
                  const std::string& convention, const std::string& output) {
    const auto& ft = ctx->flag_type();
    auto pr = softscheme::make_plucker_ring(ft);
    Polynomial f = hyper_path.empty()
                       ? fermat_quartic(pr)
                       : jsonio::parse_polynomial(parse_json_file(hyper_path), pr.yreg);
    auto s = softscheme::build_soft_scheme(ctx, parse_convention(convention));
    const auto& atlas = ctx->atlas();
    std::vector<std::vector<LocalizedElement>> ideals(atlas.size());
    for (size_t i = 0; i < atlas.size(); ++i)
        ideals[i].push_back(softscheme::plucker_pullback(*ctx, pr, f, atlas[i]));
    auto data = softscheme::build_closed_subscheme(s, ideals);

    bool pi0_ok = true;
    for (size_t i = 0; i < atlas.size(); ++i)
        for (size_t k = 0; k < data.lifted[i].size(); ++k)
            pi0_ok = pi0_ok && freealg::commutatize(data.lifted[i][k]) == data.commutative[i][k];
    bool monotone = true;
    for (size_t i = 0; i < atlas.size() && monotone; ++i)
        for (size_t j = 0; j < atlas.size() && monotone; ++j) {
            if (i == j)
                continue;
            flagcomb::AdmissibleChain small(atlas[i]);
            flagcomb::AdmissibleChain big(ft, {atlas[i], atlas[j]});
            auto cs = data.commutative_generators(small);
            auto cb = data.commutative_generators(big);
            for (auto& g : cs)
                monotone = monotone && std::find(cb.begin(), cb.end(), g) != cb.end();
            auto ls = data.lifted_generators(small);
            auto lb = data.lifted_generators(big);
            for (auto& g : ls)
                monotone = monotone && std::find(lb.begin(), lb.end(), g) != lb.end();
        }

    ordered_json doc = base_doc("subscheme", ft);
    doc["hypersurface"] = jsonio::polynomial_json(f);
    doc["convention"] = convention;
    ordered_json charts = ordered_json::array();
    for (size_t i = 0; i < atlas.size(); ++i) {
        ordered_json c;
        c["chart"] = jsonio::sequence_json(atlas[i]);
        ordered_json cg = ordered_json::array();
        for (auto& g : data.commutative[i])
            cg.push_back(jsonio::localized_json(g));
        c["generators"] = std::move(cg);
        ordered_json lg = ordered_json::array();
        for (auto& g : data.lifted[i])
            lg.push_back(jsonio::nc_json(g));
        c["lifted"] = std::move(lg);
        charts.push_back(std::move(c));
    }
    doc["charts"] = std::move(charts);
    doc["pi0_roundtrip_ok"] = pi0_ok;
    doc["chain_monotone"] = monotone;
    emit(doc, output);
    return pi0_ok && monotone ? 0 : 1;
}

int cmd_verify_all(const ContextPtr& ctx, const std::string& output) {
    const auto& ft = ctx->flag_type();
    ordered_json checks = ordered_json::array();
    bool all_ok = true;
    auto record = [&](const std::string& name, bool ok, const std::string& detail) {
        checks.push_back(ordered_json{{"name", name}, {"ok", ok}, {"detail", detail}});
        all_ok = all_ok && ok;
    };

    {
        auto seqs = flagcomb::enumerate_sequences(ft);
        bool ok = seqs.size() == flagcomb::sequence_count(ft);
        record("sequence-count", ok, std::to_string(seqs.size()) + " sequences");
    }
    {
        bool ok = ctx->registry()->variable_count() == ft.chart_dimension();
        record("chart-dimension", ok,
               std::to_string(ctx->registry()->variable_count()) + " chart variables");
    }
    {
        auto out = run_cocycle(ctx, true);
        record("cocycle-exhaustive", out.failures.empty(),
               std::to_string(out.checked) + " triples");
    }
    {
        auto s = softscheme::build_soft_scheme(ctx, freealg::LiftConvention::InverseFirst);
        auto rep = softscheme::verify_soft_scheme(s);
        record("soft-scheme-inverse-first", rep.ok,
               rep.ok ? "verified" : rep.violations.front());
        auto t = softscheme::build_soft_scheme(ctx, freealg::LiftConvention::InverseLast);
        auto rep2 = softscheme::verify_soft_scheme(t);
        record("soft-scheme-inverse-last", rep2.ok,
               rep2.ok ? "verified" : rep2.violations.front());
        auto u = softscheme::soften_union(s, t);
        auto rep3 = softscheme::verify_soft_scheme(u);
        bool contains = true;
        for (auto& seq : ctx->atlas()) {
            const auto& ug = u.nc_generators(seq);
            for (auto& g : s.nc_generators(seq))
                contains = contains && std::find(ug.begin(), ug.end(), g) != ug.end();
            for (auto& g : t.nc_generators(seq))
                contains = contains && std::find(ug.begin(), ug.end(), g) != ug.end();
        }
        record("soften-union", rep3.ok && contains, "union of both conventions");
    }
    {
        bool ok = true;
        size_t count = 0;
        for (auto& seq : ctx->atlas())
            for (auto& g : ctx->realization(seq).generators) {
                ok = ok && freealg::commutatize(freealg::lift(g)) == g;
                ++count;
            }
        record("pi0-lift-roundtrip", ok, std::to_string(count) + " generators");
    }
    {
        auto sys = freealg::localization_rules(ctx->registry(), ctx->master_minor_ids());
        bool ok = true;
        const auto one = freealg::NCPolynomial::constant(1);
        for (int id : ctx->master_minor_ids()) {
            auto wk = freealg::NCPolynomial::generator(
                ctx->registry(), freealg::w_generator_id(ctx->registry(), id));
            auto mk = freealg::lift(LocalizedElement(ctx->registry()->minor_poly(id)));
            ok = ok && freealg::reduce(wk * mk, sys) == one &&
                 freealg::reduce(mk * wk, sys) == one;
        }
        record("rewrite-defining-relations", ok,
               std::to_string(ctx->registry()->minor_count()) + " minors");
    }
    if (ft.is_grassmannian()) {
        auto pr = softscheme::make_plucker_ring(ft);
        bool ok = true;
        for (auto& seq : ctx->atlas()) {
            auto tuple = softscheme::plucker_tuple(*ctx, pr, seq);
            int self = pr.y_index(seq.subsets.back());
            ok = ok && self >= 0 && tuple[static_cast<size_t>(self)].is_one();
        }
        record("plucker-self-slot", ok, "chart's own minor slot is 1");
        if (ft.dr() == 2 && ft.n == 4) {
            Polynomial q = Polynomial::variable(pr.yreg, 0) * Polynomial::variable(pr.yreg, 5) -
                           Polynomial::variable(pr.yreg, 1) * Polynomial::variable(pr.yreg, 4) +
                           Polynomial::variable(pr.yreg, 2) * Polynomial::variable(pr.yreg, 3);
            bool qok = true;
            for (auto& seq : ctx->atlas())
                qok = qok && softscheme::plucker_pullback(*ctx, pr, q, seq).is_zero();
            record("plucker-quadric", qok, "vanishes in every chart");
        }
    }

    ordered_json doc = base_doc("verify", ft);
    doc["checks"] = std::move(checks);
    doc["ok"] = all_ok;
    emit(doc, output);
    return all_ok ? 0 : 1;
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"flagforge: exact chart calculus on flag varieties"};
    app.require_subcommand(1);

    std::string d_csv, output;
    int n = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--d", d_csv, "dimension list d1,...,dr")->required();
        sub->add_option("--n", n, "ambient dimension")->required();
        sub->add_option("--output", output, "write JSON to this path instead of stdout");
    };

    auto* atlas = app.add_subcommand("atlas", "enumerate the distinguished atlas");
    add_common(atlas);

    std::string from, to;
    auto* transition = app.add_subcommand("transition", "chart transition data");
    add_common(transition);
    transition->add_option("--from", from, "source chart, e.g. 1,3 or 1;1,3")->required();
    transition->add_option("--to", to, "target chart")->required();

    std::string chart;
    auto* realize = app.add_subcommand("realize", "master-ring realization of one chart");
    add_common(realize);
    realize->add_option("--chart", chart, "chart, e.g. 1,3 or 1;1,3")->required();

    bool exhaustive = false;
    auto* cocycle = app.add_subcommand("verify-cocycle", "transition cocycle check");
    add_common(cocycle);
    cocycle->add_flag("--exhaustive", exhaustive, "all ordered chart triples, not only those from the reference chart");

    auto* master = app.add_subcommand("master-ring", "variables and the distinguished minor table");
    add_common(master);

    std::string convention = "inverse-first";
    auto* scheme = app.add_subcommand("soft-scheme", "noncommutative chart generators");
    add_common(scheme);
    scheme->add_option("--convention", convention, "inverse-first or inverse-last");

    auto* soften = app.add_subcommand("soften", "union of both lift conventions");
    add_common(soften);

    std::string expr_path;
    auto* lift = app.add_subcommand("lift", "lift a master-ring element");
    add_common(lift);
    lift->add_option("--expr", expr_path, "JSON file with the element")->required();
    lift->add_option("--convention", convention, "inverse-first or inverse-last");

    std::string poly_path;
    auto* plucker = app.add_subcommand("plucker", "Pluecker substitution tuple and pullback");
    add_common(plucker);
    plucker->add_option("--chart", chart, "chart, e.g. 1,3")->required();
    plucker->add_option("--poly", poly_path, "JSON polynomial in the y-variables");

    std::string hyper_path;
    auto* subscheme = app.add_subcommand("subscheme", "closed subscheme from a hypersurface");
    add_common(subscheme);
    subscheme->add_option("--hypersurface", hyper_path, "JSON polynomial (default: Fermat quartic)");
    subscheme->add_option("--convention", convention, "inverse-first or inverse-last");

    bool verify_all = false;
    auto* verify = app.add_subcommand("verify", "invariant sweep");
    add_common(verify);
    verify->add_flag("--all", verify_all, "run every suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        auto ft = jsonio::parse_flag_type(d_csv, n);
        if (atlas->parsed())
            return cmd_atlas(ft, output);
        auto ctx = std::make_shared<flagmatrix::MasterContext>(ft);
        if (transition->parsed())
            return cmd_transition(ctx, from, to, output);
        if (realize->parsed())
            return cmd_realize(ctx, chart, output);
        if (cocycle->parsed())
            return cmd_verify_cocycle(ctx, exhaustive, output);
        if (master->parsed())
            return cmd_master_ring(ctx, output);
        if (scheme->parsed())
            return cmd_soft_scheme(ctx, convention, output);
        if (soften->parsed())
            return cmd_soften(ctx, output);
        if (lift->parsed())
            return cmd_lift(ctx, expr_path, convention, output);
        if (plucker->parsed())
            return cmd_plucker(ctx, chart, poly_path, output);
        if (subscheme->parsed())
            return cmd_subscheme(ctx, hyper_path, convention, output);
        if (verify->parsed()) {
            if (!verify_all)
                throw InvalidInput("verify requires --all");
            return cmd_verify_all(ctx, output);
        }
        throw InvalidInput("no subcommand");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace flagforge::cli

int main(int argc, char** argv) {
    return flagforge::cli::run(argc, argv);
}
