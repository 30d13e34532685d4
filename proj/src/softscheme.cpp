#include "flagforge/softscheme.hpp"

#include <algorithm>

namespace flagforge::softscheme {

using exactring::Assignment;
using flagmatrix::nested_minor;
using freealg::commutatize;

namespace {

template <typename T>
void append_unique(std::vector<T>& out, const T& g) {
    if (std::find(out.begin(), out.end(), g) == out.end())
        out.push_back(g);
}

template <typename T>
bool contains(const std::vector<T>& xs, const T& g) {
    return std::find(xs.begin(), xs.end(), g) != xs.end();
}

} // namespace

CommutativeSystem::CommutativeSystem(ContextPtr ctx) : ctx_(std::move(ctx)) {
    if (!ctx_)
        throw InvalidInput("commutative system needs a context");
}

const std::vector<LocalizedElement>& CommutativeSystem::generators(
    const AdmissibleSequence& seq) const {
    AdmissibleChain key(seq);
    {
        std::lock_guard lock(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end())
            return it->second;
    }
    std::vector<LocalizedElement> g = ctx_->realization(seq).generators;
    std::lock_guard lock(mu_);
    return memo_.emplace(std::move(key), std::move(g)).first->second;
}

std::vector<LocalizedElement> CommutativeSystem::generators(const AdmissibleChain& chain) const {
    if (chain.size() == 1)
        return generators(chain.sequences.front());
    {
        std::lock_guard lock(mu_);
        auto it = memo_.find(chain);
        if (it != memo_.end())
            return it->second;
    }
    std::vector<LocalizedElement> out;
    for (auto& seq : chain.sequences)
        for (auto& g : generators(seq))
            append_unique(out, g);
    std::lock_guard lock(mu_);
    return memo_.emplace(chain, std::move(out)).first->second;
}

SoftScheme::SoftScheme(ContextPtr ctx, LiftConvention convention)
    : ctx_(std::move(ctx)), conv_(convention) {
    if (!ctx_)
        throw InvalidInput("soft scheme needs a context");
    gens_.resize(ctx_->atlas().size());
    for (size_t i = 0; i < gens_.size(); ++i) {
        const auto& g = ctx_->realization(ctx_->atlas()[i]).generators;
        gens_[i].reserve(g.size());
        for (auto& e : g)
            gens_[i].push_back(freealg::lift(e, convention));
    }
}

SoftScheme::SoftScheme(ContextPtr ctx, std::optional<LiftConvention> convention,
                       std::vector<std::vector<NCPolynomial>> per_sequence)
    : ctx_(std::move(ctx)), conv_(convention), gens_(std::move(per_sequence)) {
    if (!ctx_)
        throw InvalidInput("soft scheme needs a context");
    if (gens_.size() != ctx_->atlas().size())
        throw InvalidInput("one generator list per maximal chart required");
}

const std::vector<NCPolynomial>& SoftScheme::nc_generators(const AdmissibleSequence& seq) const {
    return gens_[static_cast<size_t>(ctx_->atlas_index(seq))];
}

std::vector<NCPolynomial> SoftScheme::nc_generators(const AdmissibleChain& chain) const {
    if (chain.size() == 1)
        return nc_generators(chain.sequences.front());
    {
        std::lock_guard lock(mu_);
        auto it = memo_.find(chain);
        if (it != memo_.end())
            return it->second;
    }
    std::vector<NCPolynomial> out;
    for (auto& seq : chain.sequences)
        for (auto& g : nc_generators(seq))
            append_unique(out, g);
    std::lock_guard lock(mu_);
    return memo_.emplace(chain, std::move(out)).first->second;
}

CommutativeSystem build_commutative_system(const ContextPtr& ctx) {
    return CommutativeSystem(ctx);
}

SoftScheme build_soft_scheme(const ContextPtr& ctx, LiftConvention convention) {
    return SoftScheme(ctx, convention);
}

VerifyReport verify_soft_scheme(const SoftScheme& s) {
    VerifyReport rep;
    auto fail = [&rep](std::string msg) {
        rep.ok = false;
        rep.violations.push_back(std::move(msg));
    };
    const ContextPtr& ctx = s.context();
    CommutativeSystem comm(ctx);
    const auto& atlas = ctx->atlas();

    /* all chains of size <= 2 plus the maximal one */
    std::vector<AdmissibleChain> chains;
    for (auto& seq : atlas)
        chains.emplace_back(seq);
    for (size_t i = 0; i < atlas.size(); ++i)
        for (size_t j = i + 1; j < atlas.size(); ++j)
            chains.emplace_back(ctx->flag_type(),
                                std::vector<AdmissibleSequence>{atlas[i], atlas[j]});
    chains.emplace_back(ctx->flag_type(), atlas);

    /* (ii) pi0 of the NC generators regenerates the commutative generators */
    for (auto& c : chains) {
        auto cg = comm.generators(c);
        auto ncg = s.nc_generators(c);
        std::vector<LocalizedElement> images;
        images.reserve(ncg.size());
        for (auto& g : ncg)
            images.push_back(commutatize(g));
        for (size_t k = 0; k < images.size(); ++k)
            if (!contains(cg, images[k]))
                fail("pi0 image of " + ncg[k].str() + " is no commutative generator of chain " +
                     c.str());
        for (auto& g : cg)
            if (!contains(images, g))
                fail("commutative generator " + g.str() + " of chain " + c.str() +
                     " is not a pi0 image");
        if (s.convention()) {
            if (images.size() != cg.size())
                fail("generator counts differ on chain " + c.str());
            else
                for (size_t k = 0; k < images.size(); ++k)
                    if (images[k] != cg[k])
                        fail("pi0 of generator " + std::to_string(k) + " of chain " + c.str() +
                             " does not match its commutative source");
        }
    }

    /* (i) monotonicity and (iii) the commuting squares over inclusion pairs */
    for (auto& a : chains)
        for (auto& b : chains) {
            if (a == b || a.size() >= b.size())
                continue;
            if (!std::includes(b.sequences.begin(), b.sequences.end(), a.sequences.begin(),
                               a.sequences.end()))
                continue;
            auto ca = comm.generators(a);
            auto cb = comm.generators(b);
            for (auto& g : ca)
                if (!contains(cb, g))
                    fail("commutative generator " + g.str() + " of chain " + a.str() +
                         " missing from chain " + b.str());
            auto na = s.nc_generators(a);
            auto nb = s.nc_generators(b);
            for (auto& g : na) {
                if (!contains(nb, g))
                    fail("nc generator " + g.str() + " of chain " + a.str() +
                         " missing from chain " + b.str());
                /* pi0(iota(g)) must land on a generator iota(pi0(g)) of b */
                if (!contains(cb, commutatize(g)))
                    fail("square broken: pi0 of " + g.str() + " is no generator of chain " +
                         b.str());
            }
        }
    return rep;
}

SoftScheme soften_union(const SoftScheme& a, const SoftScheme& b) {
    if (a.context()->flag_type() != b.context()->flag_type())
        throw InvalidInput("flag types differ");
    if (a.context()->registry() != b.context()->registry())
        throw InvalidInput("schemes must share one master context");
    std::optional<LiftConvention> conv;
    if (a.convention() && b.convention() && *a.convention() == *b.convention())
        conv = a.convention();
    const auto& atlas = a.context()->atlas();
    std::vector<std::vector<NCPolynomial>> per_sequence(atlas.size());
    for (size_t i = 0; i < atlas.size(); ++i) {
        for (auto& g : a.nc_generators(atlas[i]))
            append_unique(per_sequence[i], g);
        for (auto& g : b.nc_generators(atlas[i]))
            append_unique(per_sequence[i], g);
    }
    return SoftScheme(a.context(), conv, std::move(per_sequence));
}

int PluckerRing::y_index(const std::vector<int>& subset) const {
    for (size_t i = 0; i < subsets.size(); ++i)
        if (subsets[i] == subset)
            return static_cast<int>(i);
    return -1;
}

PluckerRing make_plucker_ring(const FlagType& ft) {
    if (!ft.is_grassmannian())
        throw Unsupported("Pluecker coordinates are built for Grassmannians only");
    PluckerRing pr;
    pr.d = ft.dr();
    pr.n = ft.n;
    auto reg = std::make_shared<exactring::VariableRegistry>();
    std::vector<int> idx(pr.d);
    for (int t = 0; t < pr.d; ++t)
        idx[t] = t + 1;
    while (true) {
        reg->add_named_variable("y" + std::to_string(pr.subsets.size()));
        pr.subsets.push_back(idx);
        int i = pr.d - 1;
        while (i >= 0 && idx[i] == pr.n - pr.d + i + 1)
            --i;
        if (i < 0)
            break;
        ++idx[i];
        for (int t = i + 1; t < pr.d; ++t)
            idx[t] = idx[t - 1] + 1;
    }
    pr.yreg = reg;
    return pr;
}

std::vector<LocalizedElement> plucker_tuple(const MasterContext& ctx, const PluckerRing& pr,
                                            const AdmissibleSequence& seq) {
    if (!ctx.flag_type().is_grassmannian())
        throw Unsupported("Pluecker substitution needs a Grassmannian");
    if (pr.d != ctx.flag_type().dr() || pr.n != ctx.flag_type().n)
        throw InvalidInput("Pluecker ring does not match the flag type");
    const auto& m = ctx.realization(seq).matrix;
    std::vector<LocalizedElement> tuple;
    tuple.reserve(pr.subsets.size());
    for (auto& J : pr.subsets)
        tuple.push_back(nested_minor(m, 1, J));
    return tuple;
}

LocalizedElement plucker_pullback(const MasterContext& ctx, const PluckerRing& pr,
                                  const Polynomial& f, const AdmissibleSequence& seq) {
    if (!ctx.flag_type().is_grassmannian())
        throw Unsupported("Pluecker substitution needs a Grassmannian");
    if (!f.is_homogeneous())
        throw InvalidInput("Pluecker pullback needs a homogeneous polynomial");
    auto tuple = plucker_tuple(ctx, pr, seq);
    Assignment a(tuple.size());
    for (size_t i = 0; i < tuple.size(); ++i)
        a[i] = tuple[i];
    return exactring::substitute(f, a);
}

std::vector<LocalizedElement> SubschemeData::commutative_generators(
    const AdmissibleChain& chain) const {
    std::vector<LocalizedElement> out;
    for (auto& seq : chain.sequences)
        for (auto& g : commutative[static_cast<size_t>(ctx->atlas_index(seq))])
            append_unique(out, g);
    return out;
}

std::vector<NCPolynomial> SubschemeData::lifted_generators(const AdmissibleChain& chain) const {
    std::vector<NCPolynomial> out;
    for (auto& seq : chain.sequences)
        for (auto& g : lifted[static_cast<size_t>(ctx->atlas_index(seq))])
            append_unique(out, g);
    return out;
}

SubschemeData build_closed_subscheme(const SoftScheme& s,
                                     const std::vector<std::vector<LocalizedElement>>& ideals) {
    const ContextPtr& ctx = s.context();
    const auto& atlas = ctx->atlas();
    if (ideals.size() != atlas.size())
        throw InvalidInput("one ideal generator list per maximal chart required");
    LiftConvention conv = s.convention().value_or(LiftConvention::InverseFirst);
    SubschemeData data;
    data.ctx = ctx;
    data.convention = s.convention();
    data.commutative.resize(atlas.size());
    data.lifted.resize(atlas.size());
    for (size_t i = 0; i < atlas.size(); ++i) {
        auto allowed = ctx->localization_set(atlas[i]);
        for (auto& g : ideals[i]) {
            if (g.is_zero())
                continue;
            for (auto& [id, exp] : g.denominator())
                if (!std::binary_search(allowed.begin(), allowed.end(), id))
                    throw InvalidInput("generator " + g.str() +
                                       " is not expressible over chart " + atlas[i].str());
            data.commutative[i].push_back(g);
            data.lifted[i].push_back(freealg::lift(g, conv));
        }
    }
    return data;
}

} // namespace flagforge::softscheme
