#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "montiarc/ast.hpp"
#include "montiarc/diagnostics.hpp"
#include "montiarc/symbols.hpp"

namespace montiarc::elab {

using symbols::Provenance;

struct ElabPort {
    std::string name;
    ast::PortDirection direction = ast::PortDirection::In;
    ast::TypeExpr type;
    Provenance provenance = Provenance::Explicit;
    SourceSpan span;
};

struct ElabSub {
    std::string name;
    std::string type_qname;
    std::vector<ast::TypeExpr> type_args;
    std::vector<ast::ConfigArg> config_args;
    Provenance provenance = Provenance::Explicit;
    SourceSpan span;
};

// One endpoint of an explicit, fully resolved connector: either an own
// port of the component or a port of a direct subcomponent.
struct ElabEndpoint {
    std::string sub;   // empty: own port
    std::string port;

    bool this_port() const { return sub.empty(); }
    std::string str() const { return this_port() ? port : sub + "." + port; }
    auto operator<=>(const ElabEndpoint&) const = default;
};

struct ElabConnector {
    ElabEndpoint source;
    ElabEndpoint target;
    Provenance provenance = Provenance::Explicit;
    SourceSpan span;
};

// Core-form component: every implicit construct made explicit. Ports and
// subcomponents are all named, inheritance is flattened in, simple
// connectors are desugared, autoconnect/autoinstantiate are consumed.
struct ElabComponent {
    std::string name;
    std::string qname;
    std::vector<std::string> type_params;
    std::vector<ast::ConfigParam> config_params;
    ast::TimingMode timing = ast::TimingMode::Timed;
    bool timing_declared = false;
    std::vector<ElabPort> ports;
    std::vector<ElabSub> subs;
    std::vector<ElabConnector> connectors;
    std::vector<ElabComponent> inners;
    std::vector<ast::InvariantDecl> invariants;
    SourceSpan span;

    const ElabPort* find_port(const std::string& n) const;
    const ElabSub* find_sub(const std::string& n) const;
    const ElabComponent* find_inner(const std::string& simple_name) const;
    bool atomic() const { return subs.empty() && connectors.empty(); }
};

// Ignores provenance, spans and ordering.
bool structurally_equal(const ElabComponent& a, const ElabComponent& b);

// Elaborates component types on demand against one pool/registry pair.
// Results are cached per qualified name; warnings raised while expanding
// connectors (CO3 ambiguity cases) accumulate in diagnostics().
class Elaborator {
public:
    explicit Elaborator(symbols::Analysis& analysis);

    // Null only if the qualified name is unknown.
    const ElabComponent* elaborate(const std::string& qname);

    Diagnostics take_diagnostics();
    symbols::Analysis& analysis() { return analysis_; }

    // Interface of an elaborated type with type arguments substituted.
    std::vector<symbols::PortSig> interface_of(const std::string& qname,
                                               const std::vector<ast::TypeExpr>& type_args);

private:
    struct Pending;
    ElabComponent build(const symbols::TypeEntry& entry);
    void flatten_inheritance(ElabComponent& out, const symbols::TypeEntry& entry);
    std::vector<Pending> desugar_connectors(ElabComponent& out, const symbols::TypeEntry& entry);
    void expand_subcomponent_endpoints(ElabComponent& out, std::vector<Pending> pending);
    void autoconnect(ElabComponent& out, ast::AutoConnectMode mode);

    symbols::Analysis& analysis_;
    std::map<std::string, std::unique_ptr<ElabComponent>> cache_;
    std::set<std::string> in_progress_;
    Diagnostics diags_;
};

// Concrete-syntax rendering of an elaborated component; reparses to an
// equivalent model. `annotate_provenance` appends `// <TAG>` comments.
std::string print_elaborated(const ElabComponent& comp, const std::string& package,
                             bool annotate_provenance = false);

}  // namespace montiarc::elab
