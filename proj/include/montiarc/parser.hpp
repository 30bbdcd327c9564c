#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "montiarc/ast.hpp"
#include "montiarc/diagnostics.hpp"

namespace montiarc {

struct ParseResult {
    std::unique_ptr<ast::CompilationUnit> unit;  // null when diagnostics contain errors
    Diagnostics diagnostics;

    bool ok() const { return unit != nullptr && !has_errors(diagnostics); }
};

// Parses one `.arc` source file. On failure the result carries at least
// one P001/P002 diagnostic with a span; parsing resynchronizes at
// statement boundaries to report several errors per file.
ParseResult parse_compilation_unit(std::string_view text, const std::string& source_id);

}  // namespace montiarc
