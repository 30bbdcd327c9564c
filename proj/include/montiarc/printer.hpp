#pragma once

#include <string>

#include "montiarc/ast.hpp"

namespace montiarc {

// Canonical source rendering. Comments and original layout are not
// preserved; the output reparses to a structurally equal tree.
std::string pretty_print(const ast::CompilationUnit& unit);
std::string pretty_print(const ast::ComponentTypeDecl& component, int indent = 0);

}  // namespace montiarc
