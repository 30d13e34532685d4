#include "flagforge/registry.hpp"

#include <algorithm>
#include <mutex>

#include "flagforge/polynomial.hpp"

namespace flagforge::exactring {

namespace {

std::string z_name(int row, int col) {
    if (row < 10 && col < 10)
        return "z" + std::to_string(row) + std::to_string(col);
    return "z_" + std::to_string(row) + "_" + std::to_string(col);
}

} // namespace

int VariableRegistry::add_variable(int row, int col) {
    std::unique_lock lock(mu_);
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].row == row && vars_[i].col == col && row > 0)
            return static_cast<int>(i);
    vars_.push_back(Variable{z_name(row, col), row, col});
    return static_cast<int>(vars_.size()) - 1;
}

int VariableRegistry::add_named_variable(const std::string& name) {
    std::unique_lock lock(mu_);
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name)
            return static_cast<int>(i);
    vars_.push_back(Variable{name, 0, 0});
    return static_cast<int>(vars_.size()) - 1;
}

int VariableRegistry::variable_count() const {
    std::shared_lock lock(mu_);
    return static_cast<int>(vars_.size());
}

Variable VariableRegistry::variable(int index) const {
    std::shared_lock lock(mu_);
    return vars_.at(index);
}

std::string VariableRegistry::variable_name(int index) const {
    std::shared_lock lock(mu_);
    return vars_.at(index).name;
}

int VariableRegistry::find_variable(int row, int col) const {
    std::shared_lock lock(mu_);
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].row == row && vars_[i].col == col && row > 0)
            return static_cast<int>(i);
    return -1;
}

int VariableRegistry::find_variable(const std::string& name) const {
    std::shared_lock lock(mu_);
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name)
            return static_cast<int>(i);
    return -1;
}

int VariableRegistry::register_minor(int level, std::vector<int> columns, const Polynomial& canonical) {
    std::sort(columns.begin(), columns.end());
    std::unique_lock lock(mu_);
    for (auto& m : minors_) {
        if (*m.poly == canonical) {
            if (m.level != level || m.columns != columns)
                m.aliases.emplace_back(level, columns);
            return m.id;
        }
    }
    MinorInfo info;
    info.id = static_cast<int>(minors_.size()) + 1;
    info.level = level;
    info.columns = std::move(columns);
    info.name = "w" + std::to_string(info.id);
    info.poly = std::make_shared<const Polynomial>(canonical);
    info.monomial = canonical.is_monomial();
    minors_.push_back(std::move(info));
    return minors_.back().id;
}

int VariableRegistry::minor_count() const {
    std::shared_lock lock(mu_);
    return static_cast<int>(minors_.size());
}

MinorInfo VariableRegistry::minor(int id) const {
    std::shared_lock lock(mu_);
    return minors_.at(id - 1);
}

const Polynomial& VariableRegistry::minor_poly(int id) const {
    std::shared_lock lock(mu_);
    return *minors_.at(id - 1).poly;
}

int VariableRegistry::find_minor(const Polynomial& canonical) const {
    std::shared_lock lock(mu_);
    for (auto& m : minors_)
        if (*m.poly == canonical)
            return m.id;
    return 0;
}

int VariableRegistry::find_minor(int level, const std::vector<int>& columns) const {
    std::shared_lock lock(mu_);
    for (auto& m : minors_) {
        if (m.level == level && m.columns == columns)
            return m.id;
        for (auto& [al, ac] : m.aliases)
            if (al == level && ac == columns)
                return m.id;
    }
    return 0;
}

RegistryPtr merge_registries(const RegistryPtr& a, const RegistryPtr& b) {
    if (!a)
        return b;
    if (!b)
        return a;
    if (a.get() != b.get())
        throw RegistryMismatch();
    return a;
}

} // namespace flagforge::exactring
