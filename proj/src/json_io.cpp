#include "flagforge/json_io.hpp"

#include <sstream>

namespace flagforge::jsonio {

using exactring::ExactRational;
using exactring::Monomial;

ordered_json polynomial_json(const Polynomial& p) {
    ordered_json terms = ordered_json::array();
    const auto& reg = p.registry();
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        ordered_json vars = ordered_json::array();
        for (size_t v = 0; v < it->first.size(); ++v)
            if (it->first[v] > 0)
                vars.push_back(
                    ordered_json::array({reg->variable_name(static_cast<int>(v)), it->first[v]}));
        terms.push_back(ordered_json::array(
            {it->second.numerator_str(), it->second.denominator_str(), vars}));
    }
    return terms;
}

ordered_json localized_json(const LocalizedElement& e) {
    ordered_json den = ordered_json::array();
    for (auto& [id, exp] : e.denominator())
        den.push_back(ordered_json::array({id, exp}));
    ordered_json out;
    out["numerator"] = polynomial_json(e.numerator());
    out["denominator"] = std::move(den);
    return out;
}

ordered_json nc_json(const NCPolynomial& a) {
    ordered_json terms = ordered_json::array();
    const auto& reg = a.registry();
    for (auto it = a.terms().rbegin(); it != a.terms().rend(); ++it) {
        ordered_json word = ordered_json::array();
        for (int g : it->first)
            word.push_back(freealg::generator_name(reg, g));
        terms.push_back(ordered_json::array(
            {it->second.numerator_str(), it->second.denominator_str(), std::move(word)}));
    }
    return terms;
}

ordered_json matrix_json(const RingMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 1; i <= m.rows; ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 1; j <= m.cols; ++j)
            row.push_back(localized_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    ordered_json out;
    out["rows"] = m.rows;
    out["cols"] = m.cols;
    out["entries"] = std::move(rows);
    return out;
}

ordered_json sequence_json(const AdmissibleSequence& s) {
    ordered_json out;
    out["d"] = s.flag_type.d;
    out["n"] = s.flag_type.n;
    out["subsets"] = s.subsets;
    return out;
}

ordered_json chain_json(const AdmissibleChain& c) {
    ordered_json seqs = ordered_json::array();
    for (auto& s : c.sequences)
        seqs.push_back(sequence_json(s));
    ordered_json out;
    out["sequences"] = std::move(seqs);
    return out;
}

Polynomial parse_polynomial(const ordered_json& j, const RegistryPtr& reg) {
    if (!j.is_array())
        throw InvalidInput("polynomial JSON must be a term list");
    Polynomial p = j.empty() ? Polynomial() : exactring::make_polynomial(reg, {});
    for (auto& term : j) {
        if (!term.is_array() || term.size() != 3)
            throw InvalidInput("polynomial term must be [num, den, vars]");
        ExactRational num = ExactRational::from_string(term[0].get<std::string>());
        ExactRational den = ExactRational::from_string(term[1].get<std::string>());
        if (den.is_zero())
            throw InvalidInput("zero denominator in a coefficient");
        Monomial m;
        for (auto& pair : term[2]) {
            if (!pair.is_array() || pair.size() != 2)
                throw InvalidInput("variable entry must be [name, exp]");
            int idx = reg ? reg->find_variable(pair[0].get<std::string>()) : -1;
            if (idx < 0)
                throw InvalidInput("unknown variable " + pair[0].get<std::string>());
            unsigned exp = pair[1].get<unsigned>();
            if (exp == 0)
                throw InvalidInput("zero exponent in a term");
            if (m.size() <= static_cast<size_t>(idx))
                m.resize(static_cast<size_t>(idx) + 1, 0);
            m[static_cast<size_t>(idx)] += exp;
        }
        p.add_term(exactring::monomial_trim(std::move(m)), num / den);
    }
    return p;
}

LocalizedElement parse_localized(const ordered_json& j, const RegistryPtr& reg) {
    if (j.is_array())
        return LocalizedElement(parse_polynomial(j, reg));
    if (!j.is_object() || !j.contains("numerator"))
        throw InvalidInput("localized element JSON must carry a numerator");
    Polynomial num = parse_polynomial(j.at("numerator"), reg);
    exactring::DenominatorMultiset den;
    if (j.contains("denominator"))
        for (auto& pair : j.at("denominator")) {
            if (!pair.is_array() || pair.size() != 2)
                throw InvalidInput("denominator entry must be [minor_id, exp]");
            int id = pair[0].get<int>();
            int exp = pair[1].get<int>();
            if (!reg || id < 1 || id > reg->minor_count())
                throw InvalidInput("unknown minor id " + std::to_string(id));
            if (exp <= 0)
                throw InvalidInput("denominator exponents must be positive");
            den[id] += exp;
        }
    return LocalizedElement(std::move(num), std::move(den));
}

FlagType parse_flag_type(const std::string& d_csv, int n) {
    std::vector<int> d;
    std::istringstream is(d_csv);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size())
                throw std::invalid_argument(tok);
            d.push_back(v);
        } catch (const std::exception&) {
            throw InvalidInput("bad dimension list: " + d_csv);
        }
    }
    if (d.empty())
        throw InvalidInput("empty dimension list");
    return FlagType(std::move(d), n);
}

AdmissibleSequence parse_sequence(const FlagType& ft, const std::string& text) {
    std::vector<std::vector<int>> subsets;
    std::istringstream levels(text);
    std::string level;
    while (std::getline(levels, level, ';')) {
        std::vector<int> subset;
        std::istringstream is(level);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            try {
                size_t used = 0;
                int v = std::stoi(tok, &used);
                if (used != tok.size())
                    throw std::invalid_argument(tok);
                subset.push_back(v);
            } catch (const std::exception&) {
                throw InvalidInput("malformed chart argument: " + text);
            }
        }
        subsets.push_back(std::move(subset));
    }
    if (static_cast<int>(subsets.size()) != ft.rank())
        throw InvalidInput("chart argument must list " + std::to_string(ft.rank()) +
                           " subsets: " + text);
    return AdmissibleSequence(ft, std::move(subsets));
}

std::string dump(const ordered_json& j) {
    return j.dump(2) + "\n";
}

} // namespace flagforge::jsonio
