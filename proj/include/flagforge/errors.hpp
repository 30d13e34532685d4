#pragma once
#include <stdexcept>
#include <string>

namespace flagforge {

/* Error taxonomy shared by all modules.  Everything derives from
 * std::runtime_error so callers can catch coarsely; the distinct types
 * matter where the contract distinguishes outcomes (e.g. a vanishing
 * denominator vs. a malformed input). */

struct RegistryMismatch : std::runtime_error {
    RegistryMismatch() : std::runtime_error("operands belong to different variable registries") {}
};

struct DenominatorVanishes : std::runtime_error {
    explicit DenominatorVanishes(const std::string& what) : std::runtime_error(what) {}
};

struct MissingAssignment : std::runtime_error {
    explicit MissingAssignment(const std::string& var)
        : std::runtime_error("no assignment for variable " + var) {}
};

struct NotInvertible : std::runtime_error {
    explicit NotInvertible(const std::string& what) : std::runtime_error(what) {}
};

/* A numeric matrix that is not a flag at all (rank deficient). */
struct InvalidFlag : std::runtime_error {
    explicit InvalidFlag(const std::string& what) : std::runtime_error(what) {}
};

struct Unsupported : std::runtime_error {
    explicit Unsupported(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

} // namespace flagforge
