#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "montiarc/ast.hpp"
#include "montiarc/diagnostics.hpp"

namespace montiarc::types {

// Nominal registry of data types usable as port and parameter types.
// Seeded with the builtins; extra types and supertype edges come from a
// registry file (`type <Name>` / `extends <Sub> <Super>` records).
class TypeRegistry {
public:
    static TypeRegistry with_builtins();

    // Returns false (with a message) on a malformed record or a cycle.
    bool load_file(const std::string& path, std::string& error);
    bool load_text(std::string_view text, const std::string& origin, std::string& error);

    void add_type(const std::string& name);
    // `sub` and `sup` are registered on demand.
    bool add_edge(const std::string& sub, const std::string& sup, std::string& error);

    bool has_type(const std::string& name) const;
    // Reflexive-transitive reachability over supertype edges.
    bool reaches(const std::string& sub, const std::string& sup) const;

private:
    std::set<std::string> types_;
    std::map<std::string, std::set<std::string>> supers_;  // direct edges

    bool would_cycle(const std::string& sub, const std::string& sup) const;
};

enum class SubtypeResult { Yes, No, UnknownType };

struct SubtypeAnswer {
    SubtypeResult result = SubtypeResult::No;
    std::string unknown_name;  // set for UnknownType

    bool yes() const { return result == SubtypeResult::Yes; }
};

// True iff `sub` and `sup` are structurally equal, or sub's base reaches
// sup's base in the registry with equal array dimensions and equal
// (invariant) type arguments. Names in `type_params` are opaque types,
// compatible only with themselves.
SubtypeAnswer is_subtype(const ast::TypeExpr& sub, const ast::TypeExpr& sup,
                         const TypeRegistry& reg,
                         const std::set<std::string>& type_params = {});

// Pairs a generic component's parameter list with instantiation arguments.
struct TypeBinding {
    std::vector<std::string> params;
    std::vector<ast::TypeExpr> args;

    bool complete() const { return params.size() == args.size(); }
    const ast::TypeExpr* lookup(const std::string& param) const;
    bool empty() const { return params.empty(); }
};

struct SubstituteResult {
    ast::TypeExpr type;
    std::optional<std::string> unbound_param;

    bool ok() const { return !unbound_param.has_value(); }
};

// Replaces every parameter occurrence in `t` by its bound argument;
// array dimensions accumulate. Non-parameter names pass through.
SubstituteResult substitute(const ast::TypeExpr& t, const TypeBinding& binding);

// Last segment of the base with the first character lowercased, e.g.
// Report -> report, Buffer<Integer> -> buffer. Empty result when the
// derived name would collide with a keyword.
std::optional<std::string> default_name(const ast::TypeExpr& t);
std::optional<std::string> default_name_for(const std::string& type_name);

std::string type_to_string(const ast::TypeExpr& t);

}  // namespace montiarc::types
