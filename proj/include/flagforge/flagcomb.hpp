#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "flagforge/errors.hpp"

namespace flagforge::flagcomb {

/* The shape Fl(d_1,...,d_r; n) with 0 < d_1 < ... < d_r < n.  Band j means
 * rows (d_{j-1}, d_j]; the conventions d_0 = 0 and d_{r+1} = n apply
 * throughout. */
struct FlagType {
    std::vector<int> d;
    int n = 0;

    FlagType() = default;
    FlagType(std::vector<int> dims, int ambient);

    int rank() const { return static_cast<int>(d.size()); }      // r
    int dr() const { return d.back(); }
    int band_lo(int j) const { return j == 1 ? 1 : d[j - 2] + 1; }  // 1-based row
    int band_hi(int j) const { return j <= rank() ? d[j - 1] : n; }
    int band_size(int j) const { return band_hi(j) - band_lo(j) + 1; }
    bool is_grassmannian() const { return rank() == 1; }
    /* dimension of each chart: sum over bands of (d_j - d_{j-1}) (n - d_j) */
    long chart_dimension() const;

    friend bool operator==(const FlagType& a, const FlagType& b) { return a.d == b.d && a.n == b.n; }
    friend bool operator!=(const FlagType& a, const FlagType& b) { return !(a == b); }
    std::string str() const;
};

/* Nested subsets I_1 c ... c I_r of {1..n}, |I_j| = d_j, each stored sorted.
 * Comparison is lexicographic on the concatenation of the subsets, which is
 * the canonical atlas order. */
struct AdmissibleSequence {
    FlagType flag_type;
    std::vector<std::vector<int>> subsets;

    AdmissibleSequence() = default;
    AdmissibleSequence(FlagType ft, std::vector<std::vector<int>> sets);

    friend bool operator==(const AdmissibleSequence& a, const AdmissibleSequence& b);
    friend bool operator!=(const AdmissibleSequence& a, const AdmissibleSequence& b) { return !(a == b); }
    friend bool operator<(const AdmissibleSequence& a, const AdmissibleSequence& b);
    std::string str() const;                      // "1,3" or "2;2,3"
};

/* A duplicate-free, canonically sorted set of admissible sequences sharing one
 * FlagType; models the intersection of the member charts. */
struct AdmissibleChain {
    FlagType flag_type;
    std::vector<AdmissibleSequence> sequences;

    AdmissibleChain() = default;
    explicit AdmissibleChain(AdmissibleSequence seq);
    AdmissibleChain(FlagType ft, std::vector<AdmissibleSequence> seqs);

    size_t size() const { return sequences.size(); }
    bool contains(const AdmissibleSequence& s) const;

    friend bool operator==(const AdmissibleChain& a, const AdmissibleChain& b);
    friend bool operator!=(const AdmissibleChain& a, const AdmissibleChain& b) { return !(a == b); }
    friend bool operator<(const AdmissibleChain& a, const AdmissibleChain& b);
    std::string str() const;
};

/* The unique permutation of {1..n} that maps each band (d_{j-1}, d_j]
 * order-preservingly onto I_j - I_{j-1} (band r+1 goes to the complement).
 * map is 1-based: map[k] = chi(k), map[0] unused. */
struct CharacteristicPermutation {
    AdmissibleSequence sequence;
    std::vector<int> map;

    int operator()(int k) const { return map[k]; }
    std::vector<int> inverse() const;
    bool is_involution() const;
};

/* All admissible sequences in canonical order. */
std::vector<AdmissibleSequence> enumerate_sequences(const FlagType& ft);

/* Closed-form multinomial n! / ((n-d_r)! (d_r-d_{r-1})! ... d_1!); throws
 * Unsupported if the exact value exceeds 64 bits. */
std::uint64_t sequence_count(const FlagType& ft);

CharacteristicPermutation characteristic_map(const AdmissibleSequence& seq);

AdmissibleChain chain_union(const AdmissibleChain& a, const AdmissibleChain& b);

/* True iff b's sequence set is contained in a's: more intersected charts give
 * a smaller open set, so a is subordinate to b. */
bool is_subordinate(const AdmissibleChain& a, const AdmissibleChain& b);

struct BandDescriptor {
    int row_lo = 0;
    int row_hi = 0;
    int size = 0;     // square side d_i - d_{i-1}
};

/* The r row bands of Definition-style distinguished submatrices: any square
 * column selection of matching size inside one band. */
std::vector<BandDescriptor> distinguished_bands(const FlagType& ft);

/* The reference sequence I_0 = initial segments ({1..d_1}, ..., {1..d_r}). */
AdmissibleSequence reference_sequence(const FlagType& ft);

/* All valid FlagTypes with ambient dimension exactly n (test sweeps). */
std::vector<FlagType> all_flag_types(int n);

} // namespace flagforge::flagcomb
