#pragma once

#include <tcsp/structure.hpp>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tcsp {

/// Index into Instance::variables().
using VarId = std::size_t;

struct RelAtom {
    std::size_t symbol = 0;
    std::vector<VarId> args;
    friend bool operator==(const RelAtom&, const RelAtom&) = default;
};

struct EqAtom {
    VarId lhs = 0;
    VarId rhs = 0;
    friend bool operator==(const EqAtom&, const EqAtom&) = default;
};

struct NeqAtom {
    VarId lhs = 0;
    VarId rhs = 0;
    friend bool operator==(const NeqAtom&, const NeqAtom&) = default;
};

struct BotAtom {
    friend bool operator==(const BotAtom&, const BotAtom&) = default;
};

using Atom = std::variant<RelAtom, EqAtom, NeqAtom, BotAtom>;

/// A conjunction of atoms over named variables. Variables are interned in
/// first-occurrence order; a variable may be declared without occurring in any
/// atom.
class Instance {
public:
    explicit Instance(Signature signature = {}) : signature_(std::move(signature)) {}

    const Signature& signature() const noexcept { return signature_; }
    const std::vector<std::string>& variables() const noexcept { return variables_; }
    std::size_t variable_count() const noexcept { return variables_.size(); }
    const std::string& variable_name(VarId v) const { return variables_.at(v); }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }

    /// Interns a variable name and returns its id.
    VarId variable(std::string_view name);
    std::optional<VarId> find_variable(std::string_view name) const;

    /// Appends an atom as given; validate() checks it.
    Instance& add(Atom atom);

    Instance& rel(std::string_view symbol, std::initializer_list<std::string_view> vars);
    Instance& rel(std::string_view symbol, const std::vector<std::string>& vars);
    Instance& eq(std::string_view x, std::string_view y);
    Instance& neq(std::string_view x, std::string_view y);
    Instance& bot();

    bool has_equalities() const;
    bool has_disequalities() const;
    bool has_bot() const;

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    Signature signature_;
    std::vector<std::string> variables_;
    std::vector<Atom> atoms_;
};

enum class Validity { WellFormed, ContainsBot };

/// Checks symbols, arities and variable ids; throws on violations.
Validity validate(const Instance& inst);

struct Contraction {
    /// The instance without Eq atoms. Its variables are the class
    /// representatives (earliest variable of each Eq class), in original order.
    Instance instance;
    /// representative[v] = id in `instance` of the class of original variable v.
    std::vector<VarId> representative;
};

/// Removes Eq atoms by substituting one representative per Eq class. A
/// disequality inside one class, or any Bot atom, turns the result into the
/// single atom Bot.
Contraction contract_equalities(const Instance& inst);

/// D(phi): the variables as domain, the Rel atoms as relations. Throws when
/// Eq, Neq or Bot atoms are present.
Structure canonical_database(const Instance& inst);

/// Reads the relation tuples of `s` back as Rel atoms over variables named by
/// the element labels (or `v<id>`).
Instance instance_of(const Structure& s);

} // namespace tcsp
