#include "montiarc/diagnostics.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace montiarc {

std::string format_diagnostic(const Diagnostic& d) {
    std::ostringstream os;
    os << d.span.file << ':' << d.span.start.line << ':' << d.span.start.col << ": "
       << (d.severity == Severity::Error ? "error" : "warning") << ' ' << d.code << ": "
       << d.message;
    return os.str();
}

std::string format_diagnostics(const Diagnostics& ds) {
    std::string out;
    for (const auto& d : ds) {
        out += format_diagnostic(d);
        out += '\n';
    }
    return out;
}

namespace {
auto sort_key(const Diagnostic& d) {
    return std::tie(d.span.file, d.span.start.line, d.span.start.col, d.code, d.message);
}
}  // namespace

void normalize(Diagnostics& ds) {
    std::stable_sort(ds.begin(), ds.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return sort_key(a) < sort_key(b); });
    ds.erase(std::unique(ds.begin(), ds.end(),
                         [](const Diagnostic& a, const Diagnostic& b) {
                             return sort_key(a) == sort_key(b) && a.severity == b.severity;
                         }),
             ds.end());
}

bool has_errors(const Diagnostics& ds) {
    return std::any_of(ds.begin(), ds.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

void append(Diagnostics& dst, const Diagnostics& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

Diagnostic make_error(std::string code, SourceSpan span, std::string message) {
    return Diagnostic{std::move(code), Severity::Error, std::move(span), std::move(message), {}};
}

Diagnostic make_warning(std::string code, SourceSpan span, std::string message) {
    return Diagnostic{std::move(code), Severity::Warning, std::move(span), std::move(message), {}};
}

}  // namespace montiarc
