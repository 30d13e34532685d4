#pragma once
#include <memory>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "flagforge/errors.hpp"

namespace flagforge::exactring {

class Polynomial;

/* A commuting chart variable z_{row,col} (free entry of the reference matrix)
 * or an auxiliary named variable (Pluecker coordinates use row = col = 0). */
struct Variable {
    std::string name;
    int row = 0;
    int col = 0;
};

/* One registered distinguished minor.  `poly` is the canonical representative:
 * the nested determinant, sign-flipped if needed so the leading coefficient is
 * positive.  A minor reachable from several (level, columns) keys keeps the
 * first key and records the rest as aliases. */
struct MinorInfo {
    int id = 0;                      // 1-based, registration order
    int level = 0;                   // j: determinant of rows 1..d_j
    std::vector<int> columns;        // sorted, size d_j
    std::string name;                // "w<id>"
    std::shared_ptr<const Polynomial> poly;
    bool monomial = false;           // single-term polynomial
    std::vector<std::pair<int, std::vector<int>>> aliases;
};

/* Append-only table of variables and distinguished minors.  Writers take the
 * unique lock; every accessor takes a shared lock, so concurrent readers are
 * safe while a registration is in flight. */
class VariableRegistry {
public:
    VariableRegistry() = default;
    VariableRegistry(const VariableRegistry&) = delete;
    VariableRegistry& operator=(const VariableRegistry&) = delete;

    int add_variable(int row, int col);            // z_{row,col}
    int add_named_variable(const std::string& name);

    int variable_count() const;
    Variable variable(int index) const;
    std::string variable_name(int index) const;
    int find_variable(int row, int col) const;     // -1 when absent
    int find_variable(const std::string& name) const;

    /* Returns the (possibly pre-existing) 1-based minor id. */
    int register_minor(int level, std::vector<int> columns, const Polynomial& canonical);
    int minor_count() const;
    MinorInfo minor(int id) const;
    const Polynomial& minor_poly(int id) const;
    int find_minor(const Polynomial& canonical) const;          // 0 when absent
    int find_minor(int level, const std::vector<int>& columns) const;

private:
    mutable std::shared_mutex mu_;
    std::vector<Variable> vars_;
    std::vector<MinorInfo> minors_;
};

using RegistryPtr = std::shared_ptr<const VariableRegistry>;

/* Picks the common registry of two operands; null means "constant, any ring". */
RegistryPtr merge_registries(const RegistryPtr& a, const RegistryPtr& b);

} // namespace flagforge::exactring
