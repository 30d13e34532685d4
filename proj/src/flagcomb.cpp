#include "flagforge/flagcomb.hpp"

#include <algorithm>
#include <gmpxx.h>
#include <sstream>

namespace flagforge::flagcomb {

FlagType::FlagType(std::vector<int> dims, int ambient) : d(std::move(dims)), n(ambient) {
    if (d.empty())
        throw InvalidInput("flag type needs at least one dimension");
    int prev = 0;
    for (int x : d) {
        if (x <= prev)
            throw InvalidInput("flag dimensions must be strictly increasing and positive");
        prev = x;
    }
    if (d.back() >= n)
        throw InvalidInput("flag dimensions must stay below the ambient dimension");
}

long FlagType::chart_dimension() const {
    long dim = 0;
    int prev = 0;
    for (int x : d) {
        dim += static_cast<long>(x - prev) * (n - x);
        prev = x;
    }
    return dim;
}

std::string FlagType::str() const {
    std::ostringstream os;
    os << "Fl(";
    for (size_t i = 0; i < d.size(); ++i)
        os << (i ? "," : "") << d[i];
    os << ";" << n << ")";
    return os.str();
}

AdmissibleSequence::AdmissibleSequence(FlagType ft, std::vector<std::vector<int>> sets)
    : flag_type(std::move(ft)), subsets(std::move(sets)) {
    if (static_cast<int>(subsets.size()) != flag_type.rank())
        throw InvalidInput("sequence needs one subset per flag dimension");
    const std::vector<int>* prev = nullptr;
    for (size_t j = 0; j < subsets.size(); ++j) {
        auto& s = subsets[j];
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw InvalidInput("subset has repeated indices");
        if (static_cast<int>(s.size()) != flag_type.d[j])
            throw InvalidInput("subset size must equal the flag dimension");
        if (!s.empty() && (s.front() < 1 || s.back() > flag_type.n))
            throw InvalidInput("subset index outside 1..n");
        if (prev && !std::includes(s.begin(), s.end(), prev->begin(), prev->end()))
            throw InvalidInput("subsets must be nested");
        prev = &s;
    }
}

bool operator==(const AdmissibleSequence& a, const AdmissibleSequence& b) {
    return a.flag_type == b.flag_type && a.subsets == b.subsets;
}

bool operator<(const AdmissibleSequence& a, const AdmissibleSequence& b) {
    std::vector<int> ca, cb;
    for (auto& s : a.subsets)
        ca.insert(ca.end(), s.begin(), s.end());
    for (auto& s : b.subsets)
        cb.insert(cb.end(), s.begin(), s.end());
    return ca < cb;
}

std::string AdmissibleSequence::str() const {
    std::ostringstream os;
    for (size_t j = 0; j < subsets.size(); ++j) {
        if (j)
            os << ";";
        for (size_t i = 0; i < subsets[j].size(); ++i)
            os << (i ? "," : "") << subsets[j][i];
    }
    return os.str();
}

AdmissibleChain::AdmissibleChain(AdmissibleSequence seq) : flag_type(seq.flag_type) {
    sequences.push_back(std::move(seq));
}

AdmissibleChain::AdmissibleChain(FlagType ft, std::vector<AdmissibleSequence> seqs)
    : flag_type(std::move(ft)), sequences(std::move(seqs)) {
    if (sequences.empty())
        throw InvalidInput("chain must be nonempty");
    for (auto& s : sequences)
        if (s.flag_type != flag_type)
            throw InvalidInput("chain members must share the flag type");
    std::sort(sequences.begin(), sequences.end());
    sequences.erase(std::unique(sequences.begin(), sequences.end()), sequences.end());
}

bool AdmissibleChain::contains(const AdmissibleSequence& s) const {
    return std::binary_search(sequences.begin(), sequences.end(), s);
}

bool operator==(const AdmissibleChain& a, const AdmissibleChain& b) {
    return a.flag_type == b.flag_type && a.sequences == b.sequences;
}

bool operator<(const AdmissibleChain& a, const AdmissibleChain& b) {
    return a.sequences < b.sequences;
}

std::string AdmissibleChain::str() const {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < sequences.size(); ++i)
        os << (i ? " | " : "") << sequences[i].str();
    os << "}";
    return os.str();
}

std::vector<int> CharacteristicPermutation::inverse() const {
    std::vector<int> inv(map.size(), 0);
    for (size_t k = 1; k < map.size(); ++k)
        inv[map[k]] = static_cast<int>(k);
    return inv;
}

bool CharacteristicPermutation::is_involution() const {
    for (size_t k = 1; k < map.size(); ++k)
        if (map[map[k]] != static_cast<int>(k))
            return false;
    return true;
}

namespace {

void extend_sequences(const FlagType& ft, size_t level, std::vector<std::vector<int>>& acc,
                      std::vector<AdmissibleSequence>& out) {
    if (level == ft.d.size()) {
        out.emplace_back(ft, acc);
        return;
    }
    /* copy: acc.push_back below may reallocate and would invalidate a reference */
    const std::vector<int> prev = level == 0 ? std::vector<int>{} : acc[level - 1];
    int need = ft.d[level] - static_cast<int>(prev.size());
    std::vector<int> pool;
    for (int i = 1; i <= ft.n; ++i)
        if (!std::binary_search(prev.begin(), prev.end(), i))
            pool.push_back(i);
    /* choose `need` elements of pool by index combination */
    std::vector<int> idx(need);
    for (int i = 0; i < need; ++i)
        idx[i] = i;
    while (true) {
        std::vector<int> subset = prev;
        for (int i = 0; i < need; ++i)
            subset.push_back(pool[idx[i]]);
        std::sort(subset.begin(), subset.end());
        acc.push_back(std::move(subset));
        extend_sequences(ft, level + 1, acc, out);
        acc.pop_back();
        int i = need - 1;
        while (i >= 0 && idx[i] == static_cast<int>(pool.size()) - need + i)
            --i;
        if (i < 0)
            break;
        ++idx[i];
        for (int j = i + 1; j < need; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

std::vector<AdmissibleSequence> enumerate_sequences(const FlagType& ft) {
    std::vector<AdmissibleSequence> out;
    std::vector<std::vector<int>> acc;
    extend_sequences(ft, 0, acc, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t sequence_count(const FlagType& ft) {
    mpz_class num;
    mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(ft.n));
    auto divide_fac = [&num](int k) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
        num /= f;
    };
    divide_fac(ft.n - ft.dr());
    int prev = 0;
    for (int x : ft.d) {
        divide_fac(x - prev);
        prev = x;
    }
    if (!num.fits_ulong_p())
        throw Unsupported("sequence count exceeds 64 bits");
    return static_cast<std::uint64_t>(num.get_ui());
}

CharacteristicPermutation characteristic_map(const AdmissibleSequence& seq) {
    const FlagType& ft = seq.flag_type;
    std::vector<int> map(static_cast<size_t>(ft.n) + 1, 0);
    int k = 1;
    const std::vector<int>* prev = nullptr;
    for (int j = 0; j < ft.rank(); ++j) {
        const auto& cur = seq.subsets[j];
        for (int x : cur) {
            if (prev && std::binary_search(prev->begin(), prev->end(), x))
                continue;
            map[k++] = x;
        }
        prev = &cur;
    }
    const auto& top = seq.subsets.back();
    for (int x = 1; x <= ft.n; ++x)
        if (!std::binary_search(top.begin(), top.end(), x))
            map[k++] = x;
    return CharacteristicPermutation{seq, std::move(map)};
}

AdmissibleChain chain_union(const AdmissibleChain& a, const AdmissibleChain& b) {
    if (a.flag_type != b.flag_type)
        throw InvalidInput("chain union across different flag types");
    std::vector<AdmissibleSequence> seqs = a.sequences;
    seqs.insert(seqs.end(), b.sequences.begin(), b.sequences.end());
    return AdmissibleChain(a.flag_type, std::move(seqs));
}

bool is_subordinate(const AdmissibleChain& a, const AdmissibleChain& b) {
    if (a.flag_type != b.flag_type)
        throw InvalidInput("subordination across different flag types");
    return std::includes(a.sequences.begin(), a.sequences.end(),
                         b.sequences.begin(), b.sequences.end());
}

std::vector<BandDescriptor> distinguished_bands(const FlagType& ft) {
    std::vector<BandDescriptor> out;
    for (int j = 1; j <= ft.rank(); ++j)
        out.push_back(BandDescriptor{ft.band_lo(j), ft.band_hi(j), ft.band_size(j)});
    return out;
}

AdmissibleSequence reference_sequence(const FlagType& ft) {
    std::vector<std::vector<int>> subsets;
    for (int dj : ft.d) {
        std::vector<int> s(dj);
        for (int i = 0; i < dj; ++i)
            s[i] = i + 1;
        subsets.push_back(std::move(s));
    }
    return AdmissibleSequence(ft, std::move(subsets));
}

std::vector<FlagType> all_flag_types(int n) {
    std::vector<FlagType> out;
    /* d-sets are the nonempty subsets of {1..n-1} */
    for (unsigned mask = 1; mask < (1u << (n - 1)); ++mask) {
        std::vector<int> d;
        for (int i = 1; i < n; ++i)
            if (mask & (1u << (i - 1)))
                d.push_back(i);
        out.emplace_back(std::move(d), n);
    }
    return out;
}

} // namespace flagforge::flagcomb
