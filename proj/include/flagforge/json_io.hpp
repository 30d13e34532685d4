#pragma once
#include <string>

#include <json.hpp>

#include "flagforge/flagmatrix.hpp"
#include "flagforge/freealg.hpp"

namespace flagforge::jsonio {

using nlohmann::ordered_json;
using exactring::LocalizedElement;
using exactring::Polynomial;
using exactring::RegistryPtr;
using flagcomb::AdmissibleChain;
using flagcomb::AdmissibleSequence;
using flagcomb::FlagType;
using flagmatrix::RingMatrix;
using freealg::NCPolynomial;

/* Coefficients are decimal strings; indices and exponents plain integers.
 * Terms are emitted leading-first (descending canonical order). */
ordered_json polynomial_json(const Polynomial& p);

/* {"numerator": <polynomial>, "denominator": [[minor_id, exp], ...]} */
ordered_json localized_json(const LocalizedElement& e);

/* list of [num, den, [gen_name, ...]], leading term first */
ordered_json nc_json(const NCPolynomial& a);

/* {"rows":…, "cols":…, "entries": [[<localized>, ...], ...]} */
ordered_json matrix_json(const RingMatrix& m);

/* {"d": [...], "n": N, "subsets": [[...], ...]} */
ordered_json sequence_json(const AdmissibleSequence& s);

/* {"sequences": [<sequence>, ...]} */
ordered_json chain_json(const AdmissibleChain& c);

/* Inverse of polynomial_json; variables are resolved by name in reg. */
Polynomial parse_polynomial(const ordered_json& j, const RegistryPtr& reg);

/* Accepts the localized_json object or a bare polynomial term list. */
LocalizedElement parse_localized(const ordered_json& j, const RegistryPtr& reg);

/* "2" -> Gr(2;n) types, "1,2" -> Fl(1,2;n); throws InvalidInput on bad text */
FlagType parse_flag_type(const std::string& d_csv, int n);

/* Subsets comma-separated inside, semicolons between: "1,3" or "1;1,3". */
AdmissibleSequence parse_sequence(const FlagType& ft, const std::string& text);

/* Canonical dump: 2-space indent, trailing newline. */
std::string dump(const ordered_json& j);

} // namespace flagforge::jsonio
