#include "flagforge/flagmatrix.hpp"

#include <algorithm>
#include <sstream>

namespace flagforge::flagmatrix {

using exactring::Assignment;
using exactring::DenominatorMultiset;
using exactring::make_polynomial;
using exactring::Monomial;
using exactring::poly_divexact;

RingMatrix::RingMatrix(int r, int c, FlagType profile)
    : rows(r), cols(c), block_profile(std::move(profile)),
      entries(r, std::vector<LocalizedElement>(c)) {}

RingMatrix operator*(const RingMatrix& a, const RingMatrix& b) {
    if (a.cols != b.rows)
        throw InvalidInput("matrix dimension mismatch");
    RingMatrix out(a.rows, b.cols, a.block_profile);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < b.cols; ++j) {
            LocalizedElement acc;
            for (int k = 0; k < a.cols; ++k)
                acc += a.entries[i][k] * b.entries[k][j];
            out.entries[i][j] = std::move(acc);
        }
    return out;
}

bool operator==(const RingMatrix& a, const RingMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        return false;
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            if (a.entries[i][j] != b.entries[i][j])
                return false;
    return true;
}

RingMatrix RingMatrix::identity(int k, FlagType profile) {
    RingMatrix out(k, k, std::move(profile));
    for (int i = 0; i < k; ++i)
        out.entries[i][i] = LocalizedElement::constant(1);
    return out;
}

std::string RingMatrix::str() const {
    std::ostringstream os;
    for (int i = 0; i < rows; ++i) {
        os << "[ ";
        for (int j = 0; j < cols; ++j)
            os << entries[i][j].str() << (j + 1 < cols ? ", " : " ");
        os << "]\n";
    }
    return os.str();
}

RingMatrix apply_characteristic(const RingMatrix& m, const CharacteristicPermutation& chi,
                                bool transpose) {
    /* Right-multiplying by C_chi sends column k to position chi(k), so the
     * result's column c is m's column chi^{-1}(c); the transpose undoes it. */
    RingMatrix out(m.rows, m.cols, m.block_profile);
    std::vector<int> src(static_cast<size_t>(m.cols) + 1, 0);
    if (transpose) {
        for (int c = 1; c <= m.cols; ++c)
            src[c] = chi.map[c];
    } else {
        auto inv = chi.inverse();
        for (int c = 1; c <= m.cols; ++c)
            src[c] = inv[c];
    }
    for (int i = 1; i <= m.rows; ++i)
        for (int c = 1; c <= m.cols; ++c)
            out.at(i, c) = m.at(i, src[c]);
    return out;
}

RingMatrix reference_matrix(const std::shared_ptr<exactring::VariableRegistry>& reg,
                            const FlagType& ft) {
    RingMatrix m(ft.dr(), ft.n, ft);
    RegistryPtr view = reg;
    for (int j = 1; j <= ft.rank(); ++j) {
        int lo = ft.band_lo(j), hi = ft.band_hi(j);
        for (int i = lo; i <= hi; ++i) {
            for (int c = lo; c <= hi; ++c)
                if (c - lo == i - lo)
                    m.at(i, c) = LocalizedElement::constant(1);
            for (int c = ft.band_hi(j) + 1; c <= ft.n; ++c) {
                int idx = reg->add_variable(i, c);
                m.at(i, c) = LocalizedElement(Polynomial::variable(view, idx));
            }
        }
    }
    return m;
}

namespace {

/* Determinant of a square grid of LocalizedElements by cofactor expansion
 * along the first row. */
LocalizedElement det_cofactor(const std::vector<std::vector<LocalizedElement>>& g) {
    size_t k = g.size();
    if (k == 0)
        return LocalizedElement::constant(1);
    if (k == 1)
        return g[0][0];
    if (k == 2)
        return g[0][0] * g[1][1] - g[0][1] * g[1][0];
    LocalizedElement acc;
    for (size_t c = 0; c < k; ++c) {
        if (g[0][c].is_zero())
            continue;
        std::vector<std::vector<LocalizedElement>> sub;
        sub.reserve(k - 1);
        for (size_t i = 1; i < k; ++i) {
            std::vector<LocalizedElement> row;
            row.reserve(k - 1);
            for (size_t j = 0; j < k; ++j)
                if (j != c)
                    row.push_back(g[i][j]);
            sub.push_back(std::move(row));
        }
        LocalizedElement term = g[0][c] * det_cofactor(sub);
        if (c % 2)
            acc -= term;
        else
            acc += term;
    }
    return acc;
}

/* Fraction-free determinant of a polynomial grid (one-step Bareiss with row
 * pivoting; divisions are exact by the Sylvester identity). */
Polynomial det_bareiss(std::vector<std::vector<Polynomial>> a) {
    size_t k = a.size();
    Polynomial prev = Polynomial::constant(1);
    int sign = 1;
    for (size_t p = 0; p + 1 < k; ++p) {
        if (a[p][p].is_zero()) {
            size_t swap_row = p + 1;
            while (swap_row < k && a[swap_row][p].is_zero())
                ++swap_row;
            if (swap_row == k)
                return Polynomial();
            std::swap(a[p], a[swap_row]);
            sign = -sign;
        }
        for (size_t i = p + 1; i < k; ++i)
            for (size_t j = p + 1; j < k; ++j) {
                Polynomial num = a[i][j] * a[p][p] - a[i][p] * a[p][j];
                auto q = poly_divexact(num, prev);
                if (!q)
                    throw InvalidInput("fraction-free elimination lost exactness");
                a[i][j] = std::move(*q);
            }
        prev = a[p][p];
    }
    Polynomial d = a[k - 1][k - 1];
    return sign < 0 ? -d : d;
}

LocalizedElement det_grid(const std::vector<std::vector<LocalizedElement>>& g) {
    size_t k = g.size();
    if (k <= 3)
        return det_cofactor(g);
    /* Lift each row by its common denominator, run Bareiss on polynomials,
     * divide the product back as a formal denominator. */
    RegistryPtr reg;
    for (auto& row : g)
        for (auto& e : row)
            reg = exactring::merge_registries(reg, e.registry());
    DenominatorMultiset total;
    std::vector<std::vector<Polynomial>> lifted(k, std::vector<Polynomial>(k));
    for (size_t i = 0; i < k; ++i) {
        DenominatorMultiset row_den;
        for (auto& e : g[i])
            for (auto& [id, exp] : e.denominator()) {
                auto it = row_den.find(id);
                if (it == row_den.end())
                    row_den[id] = exp;
                else
                    it->second = std::max(it->second, exp);
            }
        for (size_t j = 0; j < k; ++j) {
            Polynomial p = g[i][j].numerator();
            for (auto& [id, exp] : row_den) {
                auto it = g[i][j].denominator().find(id);
                int lift_by = exp - (it == g[i][j].denominator().end() ? 0 : it->second);
                if (lift_by > 0)
                    p *= reg->minor_poly(id).pow(static_cast<unsigned>(lift_by));
            }
            lifted[i][j] = std::move(p);
        }
        for (auto& [id, exp] : row_den)
            total[id] += exp;
    }
    Polynomial d = det_bareiss(std::move(lifted));
    if (d.is_zero())
        return LocalizedElement();
    return LocalizedElement(std::move(d), std::move(total));
}

std::vector<std::vector<LocalizedElement>> select_grid(const RingMatrix& m, int row_lo, int row_hi,
                                                       const std::vector<int>& cols) {
    std::vector<std::vector<LocalizedElement>> g;
    for (int i = row_lo; i <= row_hi; ++i) {
        std::vector<LocalizedElement> row;
        row.reserve(cols.size());
        for (int c : cols)
            row.push_back(m.at(i, c));
        g.push_back(std::move(row));
    }
    return g;
}

/* Canonical representative of a registered minor: flip the sign when the
 * leading coefficient is negative. */
Polynomial canonicalize_sign(Polynomial p) {
    if (!p.is_zero() && p.leading_coefficient().sign() < 0)
        return -p;
    return p;
}

} // namespace

LocalizedElement distinguished_minor(const RingMatrix& m, int band_index,
                                     const std::vector<int>& column_set) {
    const FlagType& ft = m.block_profile;
    if (band_index < 1 || band_index > ft.rank())
        throw InvalidInput("band index outside 1..r");
    std::vector<int> cols = column_set;
    std::sort(cols.begin(), cols.end());
    if (static_cast<int>(cols.size()) != ft.band_size(band_index))
        throw InvalidInput("column set size must match the band size");
    return det_grid(select_grid(m, ft.band_lo(band_index), ft.band_hi(band_index), cols));
}

LocalizedElement nested_minor(const RingMatrix& m, int level, const std::vector<int>& column_set) {
    const FlagType& ft = m.block_profile;
    if (level < 1 || level > ft.rank())
        throw InvalidInput("level outside 1..r");
    std::vector<int> cols = column_set;
    std::sort(cols.begin(), cols.end());
    if (static_cast<int>(cols.size()) != ft.d[level - 1])
        throw InvalidInput("column set size must equal d_level");
    return det_grid(select_grid(m, 1, ft.d[level - 1], cols));
}

LocalizedElement det(const RingMatrix& m) {
    if (m.rows != m.cols)
        throw InvalidInput("determinant of a non-square matrix");
    return det_grid(m.entries);
}

bool is_blocked(const RingMatrix& m) {
    const FlagType& ft = m.block_profile;
    const LocalizedElement one = LocalizedElement::constant(1);
    const LocalizedElement zero;
    for (int j = 1; j <= ft.rank(); ++j) {
        int lo = ft.band_lo(j), hi = ft.band_hi(j);
        for (int c = lo; c <= hi; ++c) {
            for (int i = lo; i <= hi; ++i)
                if (m.at(i, c) != (i - lo == c - lo ? one : zero))
                    return false;
            for (int i = hi + 1; i <= m.rows; ++i)
                if (m.at(i, c) != zero)
                    return false;
        }
    }
    return true;
}

namespace {

/* Block Gaussian elimination on the left d_r x d_r square of N: band by band,
 * scale the pivot block to the identity by its adjugate over its determinant
 * (a master-ring unit), then clear the blocks below.  Both step types are
 * block-lower-triangular, hence so is the accumulated C. */
std::pair<RingMatrix, RingMatrix> block_eliminate(const RingMatrix& n) {
    const FlagType& ft = n.block_profile;
    const int dr = ft.dr();
    RingMatrix w = n;
    RingMatrix c = RingMatrix::identity(dr, ft);

    auto row_combine = [&](RingMatrix& m, int dst, const std::vector<LocalizedElement>& coeffs,
                           int band_lo, int band_hi) {
        /* m[dst] -= sum coeffs[t] * m[band_lo + t] */
        for (int col = 1; col <= m.cols; ++col) {
            LocalizedElement acc = m.at(dst, col);
            for (int t = 0; t <= band_hi - band_lo; ++t)
                acc -= coeffs[t] * m.at(band_lo + t, col);
            m.at(dst, col) = std::move(acc);
        }
    };

    for (int j = 1; j <= ft.rank(); ++j) {
        int lo = ft.band_lo(j), hi = ft.band_hi(j);
        int k = hi - lo + 1;
        std::vector<int> cols(k);
        for (int t = 0; t < k; ++t)
            cols[t] = lo + t;
        auto pivot = select_grid(w, lo, hi, cols);
        LocalizedElement d = det_grid(pivot);
        auto inv_d = exactring::invert_unit(d);
        if (!inv_d)
            throw NotInvertible("pivot block at band " + std::to_string(j) +
                                " is not invertible over the master ring");
        /* adjugate */
        std::vector<std::vector<LocalizedElement>> adj(k, std::vector<LocalizedElement>(k));
        if (k == 1) {
            adj[0][0] = LocalizedElement::constant(1);
        } else {
            for (int i = 0; i < k; ++i)
                for (int jj = 0; jj < k; ++jj) {
                    std::vector<std::vector<LocalizedElement>> sub;
                    for (int a = 0; a < k; ++a) {
                        if (a == i)
                            continue;
                        std::vector<LocalizedElement> row;
                        for (int b = 0; b < k; ++b)
                            if (b != jj)
                                row.push_back(pivot[a][b]);
                        sub.push_back(std::move(row));
                    }
                    LocalizedElement cof = det_grid(sub);
                    if ((i + jj) % 2)
                        cof = -cof;
                    adj[jj][i] = std::move(cof);
                }
        }
        /* scale the band: rows lo..hi of w and c get premultiplied by inv_d * adj */
        auto scale_rows = [&](RingMatrix& m) {
            std::vector<std::vector<LocalizedElement>> fresh(k,
                                                             std::vector<LocalizedElement>(m.cols));
            for (int i = 0; i < k; ++i)
                for (int col = 1; col <= m.cols; ++col) {
                    LocalizedElement acc;
                    for (int t = 0; t < k; ++t)
                        acc += adj[i][t] * m.at(lo + t, col);
                    fresh[i][col - 1] = *inv_d * acc;
                }
            for (int i = 0; i < k; ++i)
                for (int col = 1; col <= m.cols; ++col)
                    m.at(lo + i, col) = std::move(fresh[i][col - 1]);
        };
        scale_rows(w);
        scale_rows(c);
        /* clear the blocks below */
        for (int i = hi + 1; i <= dr; ++i) {
            std::vector<LocalizedElement> coeffs(k);
            for (int t = 0; t < k; ++t)
                coeffs[t] = w.at(i, lo + t);
            row_combine(w, i, coeffs, lo, hi);
            row_combine(c, i, coeffs, lo, hi);
        }
    }
    return {std::move(c), std::move(w)};
}

std::vector<LocalizedElement> read_assignment(const RingMatrix& blocked, const RegistryPtr& reg,
                                              const FlagType& ft) {
    std::vector<LocalizedElement> out(reg->variable_count());
    for (int j = 1; j <= ft.rank(); ++j)
        for (int i = ft.band_lo(j); i <= ft.band_hi(j); ++i)
            for (int c = ft.band_hi(j) + 1; c <= ft.n; ++c) {
                int idx = reg->find_variable(i, c);
                if (idx >= 0)
                    out[idx] = blocked.at(i, c);
            }
    return out;
}

std::vector<LocalizedElement> collect_generators(const RingMatrix& m) {
    const LocalizedElement one = LocalizedElement::constant(1);
    const LocalizedElement zero;
    std::vector<LocalizedElement> g;
    for (int i = 1; i <= m.rows; ++i)
        for (int c = 1; c <= m.cols; ++c) {
            const LocalizedElement& e = m.at(i, c);
            if (e != zero && e != one)
                g.push_back(e);
        }
    return g;
}

} // namespace

MasterContext::MasterContext(FlagType ft)
    : ft_(std::move(ft)), reg_(std::make_shared<exactring::VariableRegistry>()) {
    reg_view_ = reg_;
    ref_ = reference_matrix(reg_, ft_);
    atlas_ = flagcomb::enumerate_sequences(ft_);
    atlas_ref_ = flagcomb::reference_sequence(ft_);
    /* master minor table: nested determinants over every level and column
     * set, constants skipped, canonical sign, deduplicated */
    for (int j = 1; j <= ft_.rank(); ++j) {
        int dj = ft_.d[j - 1];
        std::vector<int> idx(dj);
        for (int t = 0; t < dj; ++t)
            idx[t] = t + 1;
        while (true) {
            LocalizedElement m = nested_minor(ref_, j, idx);
            if (!m.denominator().empty())
                throw InvalidInput("reference minors must be polynomial");
            Polynomial p = canonicalize_sign(m.numerator());
            if (!p.is_constant())
                reg_->register_minor(j, idx, p);
            int i = dj - 1;
            while (i >= 0 && idx[i] == ft_.n - dj + i + 1)
                --i;
            if (i < 0)
                break;
            ++idx[i];
            for (int t = i + 1; t < dj; ++t)
                idx[t] = idx[t - 1] + 1;
        }
    }
}

int MasterContext::atlas_index(const AdmissibleSequence& seq) const {
    auto it = std::lower_bound(atlas_.begin(), atlas_.end(), seq);
    if (it == atlas_.end() || !(*it == seq))
        throw InvalidInput("sequence not in the atlas: " + seq.str());
    return static_cast<int>(it - atlas_.begin());
}

std::vector<int> MasterContext::master_minor_ids() const {
    std::vector<int> ids(reg_->minor_count());
    for (size_t i = 0; i < ids.size(); ++i)
        ids[i] = static_cast<int>(i) + 1;
    return ids;
}

const Realization& MasterContext::realization(const AdmissibleSequence& seq) const {
    int idx = atlas_index(seq);
    {
        std::lock_guard lock(memo_mu_);
        auto it = realizations_.find(idx);
        if (it != realizations_.end())
            return it->second;
    }
    Realization r = master_realization(*this, seq);
    std::lock_guard lock(memo_mu_);
    return realizations_.emplace(idx, std::move(r)).first->second;
}

const TransitionData& MasterContext::transition(const AdmissibleSequence& from,
                                                const AdmissibleSequence& to) const {
    std::pair<int, int> key{atlas_index(from), atlas_index(to)};
    {
        std::lock_guard lock(memo_mu_);
        auto it = transitions_.find(key);
        if (it != transitions_.end())
            return it->second;
    }
    TransitionData t = block_lu_transition(*this, from, to);
    std::lock_guard lock(memo_mu_);
    return transitions_.emplace(key, std::move(t)).first->second;
}

std::vector<int> MasterContext::localization_set(const AdmissibleSequence& seq) const {
    std::vector<int> ids;
    for (int j = 1; j <= ft_.rank(); ++j) {
        int id = reg_->find_minor(j, seq.subsets[j - 1]);
        if (id > 0 && std::find(ids.begin(), ids.end(), id) == ids.end())
            ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<int> MasterContext::localization_set(const AdmissibleChain& chain) const {
    std::vector<int> ids;
    for (auto& seq : chain.sequences)
        for (int id : localization_set(seq))
            if (std::find(ids.begin(), ids.end(), id) == ids.end())
                ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

bool MasterContext::verify_cocycle(const AdmissibleSequence& seqI, const AdmissibleSequence& seqJ,
                                   const AdmissibleSequence& seqK) const {
    const auto& tIJ = transition(seqI, seqJ);
    const auto& tJK = transition(seqJ, seqK);
    const auto& tIK = transition(seqI, seqK);
    Assignment via(tIJ.assignment.size());
    for (size_t i = 0; i < tIJ.assignment.size(); ++i)
        via[i] = tIJ.assignment[i];
    for (size_t v = 0; v < tIK.assignment.size(); ++v) {
        LocalizedElement composed = exactring::substitute(tJK.assignment[v], via);
        if (composed != tIK.assignment[v])
            return false;
    }
    return true;
}

std::optional<std::vector<ExactRational>> MasterContext::evaluate_chart_coordinates(
    const NumericFlagMatrix& m, const AdmissibleSequence& seq) const {
    if (m.rows != ft_.dr() || m.cols != ft_.n)
        throw InvalidFlag("matrix shape does not match the flag type");
    /* full row rank check (exact Gaussian elimination) */
    {
        auto a = m.entries;
        int rank = 0;
        for (int c = 0; c < m.cols && rank < m.rows; ++c) {
            int p = rank;
            while (p < m.rows && a[p][c].is_zero())
                ++p;
            if (p == m.rows)
                continue;
            std::swap(a[rank], a[p]);
            for (int i = rank + 1; i < m.rows; ++i) {
                if (a[i][c].is_zero())
                    continue;
                ExactRational f = a[i][c] / a[rank][c];
                for (int jj = c; jj < m.cols; ++jj)
                    a[i][jj] -= f * a[rank][jj];
            }
            ++rank;
        }
        if (rank < m.rows)
            throw InvalidFlag("matrix does not have full row rank");
    }
    auto chi = flagcomb::characteristic_map(seq);
    /* numeric N = m * C_chi^T: column c is m's column chi(c) */
    NumericFlagMatrix w(m.rows, m.cols);
    for (int i = 1; i <= m.rows; ++i)
        for (int c = 1; c <= m.cols; ++c)
            w.at(i, c) = m.at(i, chi.map[c]);
    const int dr = ft_.dr();
    for (int j = 1; j <= ft_.rank(); ++j) {
        int lo = ft_.band_lo(j), hi = ft_.band_hi(j);
        int k = hi - lo + 1;
        /* pivot determinant by dense expansion over rationals */
        std::vector<std::vector<ExactRational>> piv(k, std::vector<ExactRational>(k));
        for (int i = 0; i < k; ++i)
            for (int c = 0; c < k; ++c)
                piv[i][c] = w.at(lo + i, lo + c);
        /* gaussian inverse of the pivot block */
        std::vector<std::vector<ExactRational>> inv(k, std::vector<ExactRational>(k));
        for (int i = 0; i < k; ++i)
            inv[i][i] = ExactRational(1);
        bool singular = false;
        for (int c = 0; c < k && !singular; ++c) {
            int p = c;
            while (p < k && piv[p][c].is_zero())
                ++p;
            if (p == k) {
                singular = true;
                break;
            }
            std::swap(piv[c], piv[p]);
            std::swap(inv[c], inv[p]);
            ExactRational f = piv[c][c].inverse();
            for (int jj = 0; jj < k; ++jj) {
                piv[c][jj] *= f;
                inv[c][jj] *= f;
            }
            for (int i = 0; i < k; ++i) {
                if (i == c || piv[i][c].is_zero())
                    continue;
                ExactRational g = piv[i][c];
                for (int jj = 0; jj < k; ++jj) {
                    piv[i][jj] -= g * piv[c][jj];
                    inv[i][jj] -= g * inv[c][jj];
                }
            }
        }
        if (singular)
            return std::nullopt;
        /* premultiply rows lo..hi by inv */
        std::vector<std::vector<ExactRational>> fresh(k, std::vector<ExactRational>(m.cols));
        for (int i = 0; i < k; ++i)
            for (int col = 1; col <= m.cols; ++col) {
                ExactRational acc(0);
                for (int t = 0; t < k; ++t)
                    acc += inv[i][t] * w.at(lo + t, col);
                fresh[i][col - 1] = acc;
            }
        for (int i = 0; i < k; ++i)
            for (int col = 1; col <= m.cols; ++col)
                w.at(lo + i, col) = fresh[i][col - 1];
        for (int i = hi + 1; i <= dr; ++i) {
            std::vector<ExactRational> coeffs(k);
            for (int t = 0; t < k; ++t)
                coeffs[t] = w.at(i, lo + t);
            for (int col = 1; col <= m.cols; ++col) {
                ExactRational acc = w.at(i, col);
                for (int t = 0; t < k; ++t)
                    acc -= coeffs[t] * w.at(lo + t, col);
                w.at(i, col) = acc;
            }
        }
    }
    std::vector<ExactRational> out(reg_->variable_count());
    for (int j = 1; j <= ft_.rank(); ++j)
        for (int i = ft_.band_lo(j); i <= ft_.band_hi(j); ++i)
            for (int c = ft_.band_hi(j) + 1; c <= ft_.n; ++c) {
                int idx = reg_->find_variable(i, c);
                if (idx >= 0)
                    out[idx] = w.at(i, c);
            }
    return out;
}

TransitionData block_lu_transition(const MasterContext& ctx, const AdmissibleSequence& seqI,
                                   const AdmissibleSequence& seqJ) {
    auto chiI = flagcomb::characteristic_map(seqI);
    auto chiJ = flagcomb::characteristic_map(seqJ);
    /* M_I with the chart-I coordinates written in the z-slots */
    RingMatrix mI = apply_characteristic(ctx.ref(), chiI, false);
    RingMatrix n = apply_characteristic(mI, chiJ, true);
    auto [c, blocked] = block_eliminate(n);
    TransitionData t;
    t.C = std::move(c);
    t.realized = t.C * mI;
    t.blocked = std::move(blocked);
    t.assignment = read_assignment(t.blocked, ctx.registry(), ctx.flag_type());
    return t;
}

Realization master_realization(const MasterContext& ctx, const AdmissibleSequence& seq) {
    auto chi = flagcomb::characteristic_map(seq);
    RingMatrix n = apply_characteristic(ctx.ref(), chi, true);
    auto [c, blocked] = block_eliminate(n);
    Realization r;
    r.C = std::move(c);
    r.matrix = r.C * ctx.ref();
    r.blocked = std::move(blocked);
    r.generators = collect_generators(r.matrix);
    return r;
}

} // namespace flagforge::flagmatrix
