#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "montiarc/ast.hpp"
#include "montiarc/diagnostics.hpp"
#include "montiarc/typesys.hpp"

namespace montiarc::symbols {

enum class SymbolKind { Port, Subcomponent, TypeParam, ConfigParam, Invariant };

enum class Provenance {
    Explicit,
    DefaultName,
    AutoInstantiate,
    Inherited,
    Desugared,
    Autoconnect,
};

const char* provenance_name(Provenance p);

// One component type registered in the pool. Inner types are registered
// under parent-qualified names (`pkg.Outer.Inner`).
struct TypeEntry {
    std::string qname;
    const ast::ComponentTypeDecl* decl = nullptr;
    const ast::CompilationUnit* unit = nullptr;
    std::vector<const ast::ComponentTypeDecl*> lexical_chain;  // outermost first, excluding decl
    bool is_root = false;
};

class ModelPool {
public:
    // Parses every `.arc` file under the given roots. A package clause
    // disagreeing with the directory path yields S001 (warning); a
    // duplicate qualified type name yields S002.
    static ModelPool load(const std::vector<std::string>& modelpath, Diagnostics& diags);

    // Registers an in-memory unit (testing and pipeline reuse).
    void add_unit(std::unique_ptr<ast::CompilationUnit> unit, Diagnostics& diags);
    bool add_source(std::string_view text, const std::string& source_id, Diagnostics& diags);

    const TypeEntry* find(const std::string& qname) const;
    std::vector<const TypeEntry*> entries_in_order() const;   // sorted by qname
    std::vector<const ast::CompilationUnit*> units_in_order() const;  // sorted by source id
    const TypeEntry* entry_for_decl(const ast::ComponentTypeDecl* decl) const;

private:
    void register_unit(const ast::CompilationUnit& unit, Diagnostics& diags);
    void register_component(const ast::ComponentTypeDecl& decl, const ast::CompilationUnit& unit,
                            std::vector<const ast::ComponentTypeDecl*>& chain,
                            const std::string& prefix, Diagnostics& diags);

    std::vector<std::unique_ptr<ast::CompilationUnit>> units_;
    std::map<std::string, TypeEntry> by_qname_;
    std::map<const ast::ComponentTypeDecl*, std::string> qname_of_decl_;
};

// An effective member of a component namespace. Unnamed ports and
// subcomponent declarations carry their deterministic default names;
// auto-instantiated subcomponents appear when autoinstantiate is on.
struct Member {
    std::string name;
    SymbolKind kind = SymbolKind::Port;
    SourceSpan span;
    Provenance provenance = Provenance::Explicit;
    size_t ordinal = 0;  // declaration order within the namespace
};

struct PortSym {
    std::string name;
    ast::PortDirection direction = ast::PortDirection::In;
    ast::TypeExpr type;
    SourceSpan span;
    Provenance provenance = Provenance::Explicit;
    bool no_default = false;  // unnamed and no derivable name (kept for error reporting)
};

struct SubcomponentSym {
    std::string name;
    const ast::SubComponentDecl* decl = nullptr;     // null for auto-instances
    const ast::ComponentTypeDecl* inner = nullptr;   // set for auto-instances
    std::string type_qname;                          // resolved; empty if unresolved
    std::vector<ast::TypeExpr> type_args;
    const ast::SubComponentInstance* instance = nullptr;  // null when default-named / auto
    SourceSpan span;
    SourceSpan type_span;
    Provenance provenance = Provenance::Explicit;
};

// Non-hierarchical namespace of one component type definition: member
// lookups never fall through to the lexically enclosing component.
struct ComponentScope {
    std::string qname;
    const ast::ComponentTypeDecl* decl = nullptr;
    std::vector<Member> members;          // sorted by source position
    std::vector<PortSym> ports;           // declaration order
    std::vector<SubcomponentSym> subs;    // declaration order, auto-instances last
    std::set<std::string> type_params;

    const PortSym* find_port(const std::string& name) const;
    const SubcomponentSym* find_sub(const std::string& name) const;
};

struct ResolvedType {
    std::string qname;                       // empty: unresolved
    const ast::ImportDecl* via_import = nullptr;
    std::vector<std::string> trail;          // lookups tried, for R3/R4 messages
    Diagnostics diags;                       // S003 wildcard ambiguity

    bool ok() const { return !qname.empty(); }
};

struct EndpointRef {
    enum class Kind { ThisPort, Subcomponent, SubPort, Unresolved };
    enum class Reason { None, NoSuchName, NoSuchSubcomponent, NoSuchPort, Piercing };

    Kind kind = Kind::Unresolved;
    Reason reason = Reason::None;
    std::string sub;       // Subcomponent / SubPort
    std::string port;      // ThisPort / SubPort
    ast::PortDirection direction = ast::PortDirection::In;
    ast::TypeExpr type;    // resolved port type, substituted
    SourceSpan span;
    const ast::QualifiedName* raw = nullptr;

    bool resolved_port() const { return kind == Kind::ThisPort || kind == Kind::SubPort; }
};

struct PortSig {
    std::string name;
    ast::PortDirection direction = ast::PortDirection::In;
    ast::TypeExpr type;
};

// Shared resolution layer over an immutable pool and registry. Scopes
// and flattened interfaces are memoized; import usage is recorded for
// CV4.
class Analysis {
public:
    Analysis(const ModelPool& pool, const types::TypeRegistry& reg);

    const ModelPool& pool() const { return pool_; }
    const types::TypeRegistry& registry() const { return reg_; }

    // Builds (or returns) the effective namespace of a component type.
    // Diagnostics raised during scope construction (S004) are buffered
    // and fetched once by scope_diagnostics().
    const ComponentScope& scope(const std::string& qname);
    const ComponentScope& scope(const TypeEntry& entry);
    Diagnostics take_scope_diagnostics();

    // R3/R4 lookup. Qualified references resolve only through the pool;
    // unqualified ones search enclosing inner types, the unit's package,
    // explicit imports, then wildcard imports.
    ResolvedType resolve_component_type(const ast::ReferenceType& ref, const TypeEntry& context);

    // CO3/R5/R6 endpoint resolution within `owner`'s namespace.
    EndpointRef resolve_endpoint(const ast::QualifiedName& raw, const std::string& owner_qname);

    // Complete port list of a type including inherited ports, with the
    // supertype's parameters substituted. Inheritance cycles terminate
    // with the own ports only (R11 reports the cycle).
    const std::vector<PortSig>& interface_of(const std::string& qname);
    std::vector<PortSig> interface_of(const std::string& qname, const types::TypeBinding& binding);

    // extends chain helpers (R11/R12).
    std::optional<std::string> super_of(const std::string& qname);
    bool extends_reaches(const std::string& from, const std::string& target);

    // Import-usage bookkeeping for CV4.
    void mark_import_used(const ast::ImportDecl* import);
    void mark_type_usage(const ast::CompilationUnit& unit, const ast::TypeExpr& type,
                         const std::set<std::string>& in_scope_params);
    bool import_used(const ast::ImportDecl* import) const;

    types::TypeBinding binding_for(const std::string& qname,
                                   const std::vector<ast::TypeExpr>& args);

private:
    ComponentScope build_scope(const TypeEntry& entry);

    const ModelPool& pool_;
    const types::TypeRegistry& reg_;
    std::map<std::string, ComponentScope> scopes_;
    std::map<std::string, std::vector<PortSig>> interfaces_;
    std::set<std::string> interfaces_in_progress_;
    std::set<const ast::ImportDecl*> used_imports_;
    Diagnostics scope_diags_;
    std::set<std::string> scope_diag_reported_;
};

}  // namespace montiarc::symbols
