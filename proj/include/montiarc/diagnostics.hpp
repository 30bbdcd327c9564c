#pragma once

#include <string>
#include <vector>

namespace montiarc {

enum class Severity { Error, Warning };

struct SourcePos {
    int line = 0;  // 1-based
    int col = 0;   // 1-based
};

struct SourceSpan {
    std::string file;
    SourcePos start;
    SourcePos end;
};

// A single finding. `code` is one of the stable diagnostic codes
// (P001/P002, S001..S004, B1/B2, CO1..CO3, R1..R13, CV1..CV6, D1..D5,
// T1..T4). Severity is fixed per code, not per call site.
struct Diagnostic {
    std::string code;
    Severity severity = Severity::Error;
    SourceSpan span;
    std::string message;
    std::vector<SourceSpan> related;
};

using Diagnostics = std::vector<Diagnostic>;

// `<file>:<line>:<col>: <severity> <code>: <message>`
std::string format_diagnostic(const Diagnostic& d);
std::string format_diagnostics(const Diagnostics& ds);

// Stable order for golden comparison: (file, line, col, code, message).
// Exact duplicates are collapsed.
void normalize(Diagnostics& ds);

bool has_errors(const Diagnostics& ds);
void append(Diagnostics& dst, const Diagnostics& src);

Diagnostic make_error(std::string code, SourceSpan span, std::string message);
Diagnostic make_warning(std::string code, SourceSpan span, std::string message);

}  // namespace montiarc
