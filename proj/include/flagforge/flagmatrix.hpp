#pragma once
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "flagforge/flagcomb.hpp"
#include "flagforge/localized.hpp"

namespace flagforge::flagmatrix {

using exactring::ExactRational;
using exactring::LocalizedElement;
using exactring::Polynomial;
using exactring::RegistryPtr;
using flagcomb::AdmissibleChain;
using flagcomb::AdmissibleSequence;
using flagcomb::CharacteristicPermutation;
using flagcomb::FlagType;

/* Rectangular matrix of LocalizedElements carrying the flag block profile. */
struct RingMatrix {
    int rows = 0;
    int cols = 0;
    FlagType block_profile;
    std::vector<std::vector<LocalizedElement>> entries;

    RingMatrix() = default;
    RingMatrix(int r, int c, FlagType profile);

    LocalizedElement& at(int r, int c) { return entries[r - 1][c - 1]; }      // 1-based
    const LocalizedElement& at(int r, int c) const { return entries[r - 1][c - 1]; }

    friend RingMatrix operator*(const RingMatrix& a, const RingMatrix& b);
    friend bool operator==(const RingMatrix& a, const RingMatrix& b);
    friend bool operator!=(const RingMatrix& a, const RingMatrix& b) { return !(a == b); }

    static RingMatrix identity(int k, FlagType profile);
    std::string str() const;
};

/* d_r x n grid of exact rationals; a candidate flag presentation. */
struct NumericFlagMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<ExactRational>> entries;

    NumericFlagMatrix() = default;
    NumericFlagMatrix(int r, int c) : rows(r), cols(c), entries(r, std::vector<ExactRational>(c)) {}
    ExactRational& at(int r, int c) { return entries[r - 1][c - 1]; }
    const ExactRational& at(int r, int c) const { return entries[r - 1][c - 1]; }
};

/* Column action of the characteristic matrix: result column chi(k) is M's
 * column k (transpose = false applies C_chi, true applies its inverse). */
RingMatrix apply_characteristic(const RingMatrix& m, const CharacteristicPermutation& chi, bool transpose);

/* Blocked reference matrix M_{I0}(z); registers the z-variables row-major. */
RingMatrix reference_matrix(const std::shared_ptr<exactring::VariableRegistry>& reg, const FlagType& ft);

/* Determinant of the square band submatrix: rows (d_{i-1}, d_i], the given
 * columns (must number d_i - d_{i-1}). */
LocalizedElement distinguished_minor(const RingMatrix& m, int band_index, const std::vector<int>& column_set);

/* Determinant of rows 1..d_j over the given columns (|columns| = d_j). */
LocalizedElement nested_minor(const RingMatrix& m, int level, const std::vector<int>& column_set);

/* Exact determinant of a square LocalizedElement matrix: cofactor expansion
 * up to 3x3, fraction-free elimination above. */
LocalizedElement det(const RingMatrix& m);

/* Does m have the blocked standard form (identity diagonal blocks, zeros
 * below them)? */
bool is_blocked(const RingMatrix& m);

struct TransitionData {
    RingMatrix C;          // block-lower-triangular d_r x d_r frame change
    RingMatrix realized;   // C * M_I
    RingMatrix blocked;    // realized * C_{chi_J}^T, blocked standard form
    /* chart-J coordinate (registry index of its z-slot) -> master-ring value */
    std::vector<LocalizedElement> assignment;
};

struct Realization {
    RingMatrix matrix;                          // C_{I0;I} * M_{I0}(z)
    RingMatrix blocked;                         // matrix * C_{chi_I}^T
    RingMatrix C;
    std::vector<LocalizedElement> generators;   // entries != 0,1 row-major
};

/* Ties a FlagType to its registry, reference matrix, master minor table and
 * the memoized realizations/transitions.  Registration happens in the
 * constructor; afterwards the registry is only read, so chart computations
 * for distinct sequences may run concurrently. */
class MasterContext {
public:
    explicit MasterContext(FlagType ft);

    const FlagType& flag_type() const { return ft_; }
    const RegistryPtr& registry() const { return reg_view_; }
    const RingMatrix& ref() const { return ref_; }
    const std::vector<AdmissibleSequence>& atlas() const { return atlas_; }
    const AdmissibleSequence& reference_seq() const { return atlas_ref_; }
    int atlas_index(const AdmissibleSequence& seq) const;      // throws InvalidInput
    std::vector<int> master_minor_ids() const;                 // all registered, ascending

    const Realization& realization(const AdmissibleSequence& seq) const;
    const TransitionData& transition(const AdmissibleSequence& from, const AdmissibleSequence& to) const;

    /* Pruned minor ids of S_{I0;seq} (nested dets, constants dropped), and the
     * union over a chain's members. */
    std::vector<int> localization_set(const AdmissibleSequence& seq) const;
    std::vector<int> localization_set(const AdmissibleChain& chain) const;

    /* Exact check that composing seqI->seqJ with seqJ->seqK equals seqI->seqK
     * on every chart coordinate. */
    bool verify_cocycle(const AdmissibleSequence& seqI, const AdmissibleSequence& seqJ,
                        const AdmissibleSequence& seqK) const;

    /* Numeric chart coordinates of the flag presented by m, in registry
     * z-order; nullopt when m lies outside the chart (a nested pivot minor
     * vanishes); InvalidFlag when rank(m) < d_r. */
    std::optional<std::vector<ExactRational>> evaluate_chart_coordinates(
        const NumericFlagMatrix& m, const AdmissibleSequence& seq) const;

private:
    FlagType ft_;
    std::shared_ptr<exactring::VariableRegistry> reg_;
    RegistryPtr reg_view_;
    RingMatrix ref_;
    std::vector<AdmissibleSequence> atlas_;
    AdmissibleSequence atlas_ref_;

    mutable std::mutex memo_mu_;
    mutable std::map<int, Realization> realizations_;
    mutable std::map<std::pair<int, int>, TransitionData> transitions_;
};

/* Block Gaussian elimination of M_I(z) * C_{chi_J}^T: returns the unique
 * block-lower-triangular frame change C (pivot inverses exist in the master
 * ring) together with the realized and blocked matrices. */
TransitionData block_lu_transition(const MasterContext& ctx, const AdmissibleSequence& seqI,
                                   const AdmissibleSequence& seqJ);

/* C_{I0;I} M_{I0}(z) with its generator list G_I. */
Realization master_realization(const MasterContext& ctx, const AdmissibleSequence& seq);

} // namespace flagforge::flagmatrix
