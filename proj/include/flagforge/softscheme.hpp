#pragma once
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "flagforge/flagmatrix.hpp"
#include "flagforge/freealg.hpp"

namespace flagforge::softscheme {

using exactring::LocalizedElement;
using exactring::Polynomial;
using flagcomb::AdmissibleChain;
using flagcomb::AdmissibleSequence;
using flagcomb::FlagType;
using flagmatrix::MasterContext;
using freealg::LiftConvention;
using freealg::NCPolynomial;

using ContextPtr = std::shared_ptr<MasterContext>;

/* chain -> commutative generator list; per-sequence lists are the G_I of the
 * master realizations, chains take unions in canonical member order.  Lazily
 * materialized and memoized. */
class CommutativeSystem {
public:
    explicit CommutativeSystem(ContextPtr ctx);

    const ContextPtr& context() const { return ctx_; }
    const std::vector<LocalizedElement>& generators(const AdmissibleSequence& seq) const;
    std::vector<LocalizedElement> generators(const AdmissibleChain& chain) const;

private:
    ContextPtr ctx_;
    mutable std::mutex mu_;
    mutable std::map<AdmissibleChain, std::vector<LocalizedElement>> memo_;
};

/* chain -> noncommutative generator list; per-sequence lists are lifts of the
 * commutative generators.  A scheme built by soften_union carries generator
 * lists from both inputs and no single convention. */
class SoftScheme {
public:
    SoftScheme(ContextPtr ctx, LiftConvention convention);
    SoftScheme(ContextPtr ctx, std::optional<LiftConvention> convention,
               std::vector<std::vector<NCPolynomial>> per_sequence);

    const ContextPtr& context() const { return ctx_; }
    std::optional<LiftConvention> convention() const { return conv_; }
    const std::vector<NCPolynomial>& nc_generators(const AdmissibleSequence& seq) const;
    std::vector<NCPolynomial> nc_generators(const AdmissibleChain& chain) const;

private:
    ContextPtr ctx_;
    std::optional<LiftConvention> conv_;
    std::vector<std::vector<NCPolynomial>> gens_;    // by atlas index
    mutable std::mutex mu_;
    mutable std::map<AdmissibleChain, std::vector<NCPolynomial>> memo_;
};

CommutativeSystem build_commutative_system(const ContextPtr& ctx);
SoftScheme build_soft_scheme(const ContextPtr& ctx, LiftConvention convention = LiftConvention::InverseFirst);

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> violations;
};

/* Checks over all chains of size <= 2 plus the maximal chain:
 * (i) generator-set monotonicity under chain inclusion, commutative and
 *     noncommutative;
 * (ii) {pi0(G-check)} equals the commutative generator set per chain, and for
 *      single-convention schemes the lists align positionally;
 * (iii) the commuting squares: including then commutatizing agrees with
 *       commutatizing then including. */
VerifyReport verify_soft_scheme(const SoftScheme& s);

/* Chainwise union of generator lists; softens both inputs. */
SoftScheme soften_union(const SoftScheme& a, const SoftScheme& b);

/* Pluecker coordinate ring of a Grassmannian Gr(d;n): one y-variable per
 * d-subset of {1..n} in lexicographic order. */
struct PluckerRing {
    exactring::RegistryPtr yreg;
    std::vector<std::vector<int>> subsets;
    int d = 0;
    int n = 0;

    int y_index(const std::vector<int>& subset) const;     // -1 when absent
};

PluckerRing make_plucker_ring(const FlagType& ft);         // Unsupported unless r = 1

/* The substitution tuple of chart seq: y_J -> det of the realization matrix
 * on columns J, for every d-subset J in lexicographic order. */
std::vector<LocalizedElement> plucker_tuple(const MasterContext& ctx, const PluckerRing& pr,
                                            const AdmissibleSequence& seq);

/* Image of a homogeneous f under the chart substitution (InvalidInput when f
 * is inhomogeneous, Unsupported for non-Grassmannian types). */
LocalizedElement plucker_pullback(const MasterContext& ctx, const PluckerRing& pr,
                                  const Polynomial& f, const AdmissibleSequence& seq);

/* Closed subscheme: per-maximal-chart commutative ideal generators plus their
 * lifts; chain-level lists are unions over members. */
struct SubschemeData {
    ContextPtr ctx;
    std::optional<LiftConvention> convention;
    std::vector<std::vector<LocalizedElement>> commutative;   // by atlas index
    std::vector<std::vector<NCPolynomial>> lifted;

    std::vector<LocalizedElement> commutative_generators(const AdmissibleChain& chain) const;
    std::vector<NCPolynomial> lifted_generators(const AdmissibleChain& chain) const;
};

/* ideals is indexed like the atlas; every generator's denominators must lie
 * inside the chart's localization set (InvalidInput otherwise). */
SubschemeData build_closed_subscheme(const SoftScheme& s,
                                     const std::vector<std::vector<LocalizedElement>>& ideals);

} // namespace flagforge::softscheme
