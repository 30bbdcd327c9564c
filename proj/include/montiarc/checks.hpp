#pragma once

#include <string>
#include <vector>

#include "montiarc/diagnostics.hpp"
#include "montiarc/elaborate.hpp"
#include "montiarc/symbols.hpp"

namespace montiarc::checks {

enum class Phase { Pre, Post };

// Context-condition passes over one component type definition (and, via
// check_unit, all types of a compilation unit). The PRE phase runs on
// the raw syntax tree; the POST phase reruns the receiver/compatibility
// rules and the conventions on the elaborated model.

Diagnostics check_basic(const symbols::TypeEntry& entry, symbols::Analysis& analysis);        // B1, B2
Diagnostics check_connections(const symbols::TypeEntry& entry, symbols::Analysis& analysis);  // CO1..CO3
Diagnostics check_referential(const symbols::TypeEntry& entry, symbols::Analysis& analysis);  // R1..R13
Diagnostics check_conventions(const ast::CompilationUnit& unit, const elab::ElabComponent& root,
                              symbols::Analysis& analysis);  // CV1..CV6

Diagnostics check_unit_pre(const ast::CompilationUnit& unit, symbols::Analysis& analysis);
Diagnostics check_unit_post(const ast::CompilationUnit& unit, const elab::ElabComponent& root,
                            symbols::Analysis& analysis);

struct UnitReport {
    const ast::CompilationUnit* unit = nullptr;
    bool pre_clean = false;                      // closure free of errors, POST ran
    const elab::ElabComponent* elaborated = nullptr;
};

struct ModelReport {
    Diagnostics diagnostics;  // normalized
    std::vector<UnitReport> units;

    bool ok() const { return !has_errors(diagnostics); }
    const elab::ElabComponent* elaborated(const std::string& root_qname) const;
};

// Owns the analysis and elaboration state for one pool/registry pair.
// run() executes the two-phase pipeline: PRE on each unit in scope;
// units whose reference closure is error-free are elaborated and
// POST-checked. With a root name only that root's closure is in scope.
class Pipeline {
public:
    Pipeline(const symbols::ModelPool& pool, const types::TypeRegistry& reg);

    ModelReport run(const std::string& root_qname = "");

    symbols::Analysis& analysis() { return analysis_; }
    elab::Elaborator& elaborator() { return elaborator_; }

private:
    std::vector<const ast::CompilationUnit*> units_in_scope(const std::string& root_qname,
                                                            Diagnostics& diags);
    void closure_units(const std::string& qname, std::set<const ast::CompilationUnit*>& seen,
                       std::set<std::string>& visited);

    const symbols::ModelPool& pool_;
    symbols::Analysis analysis_;
    elab::Elaborator elaborator_;
};

}  // namespace montiarc::checks
