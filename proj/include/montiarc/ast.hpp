#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "montiarc/diagnostics.hpp"

namespace montiarc::ast {

// A dotted name as written, e.g. `adra.msg.Filter` or `af.msgs`.
struct QualifiedName {
    std::vector<std::string> segments;
    SourceSpan span;

    std::string str() const;
    std::string last() const { return segments.empty() ? std::string() : segments.back(); }
    size_t size() const { return segments.size(); }
};

// Data type expression: qualified base, optional type arguments,
// trailing array dimensions. `char[][]` has base=char, dims=2.
struct TypeExpr {
    QualifiedName base;
    std::vector<TypeExpr> args;
    int array_dims = 0;

    std::string str() const;
    bool is_simple_name() const { return base.size() == 1 && args.empty() && array_dims == 0; }
};

struct StereotypeValue {
    std::string name;
    std::optional<std::string> value;  // string literal content
};

struct Stereotype {
    std::vector<StereotypeValue> values;
    SourceSpan span;
};

struct ImportDecl {
    QualifiedName name;
    bool wildcard = false;
    SourceSpan span;
};

// Reference to a component type, possibly generic: `Buffer<Integer, String>`.
struct ReferenceType {
    QualifiedName name;
    std::vector<TypeExpr> type_args;
    SourceSpan span;

    std::string str() const;
};

struct TypeParam {
    std::string name;
    std::optional<ReferenceType> bound;  // `T extends Bound`
    SourceSpan span;
};

struct ConfigParam {
    TypeExpr type;
    std::string name;
    SourceSpan span;
};

// Argument in a subcomponent declaration's parentheses: a literal,
// a bare variable name, or a dotted reference (enum/constant).
struct ConfigArg {
    enum class Kind { Literal, Variable, Reference };
    enum class LiteralKind { Int, Char, String, Bool, None };

    Kind kind = Kind::Literal;
    LiteralKind literal_kind = LiteralKind::None;
    std::string text;          // literal content (unquoted) or variable name
    QualifiedName reference;   // for Kind::Reference
    SourceSpan span;

    std::string str() const;
};

enum class PortDirection { In, Out };

struct PortDecl {
    std::optional<Stereotype> stereotype;
    PortDirection direction = PortDirection::In;
    TypeExpr type;
    std::optional<std::string> name;
    SourceSpan span;
    SourceSpan name_span;  // == span of type when unnamed
};

struct PortInterfaceDecl {
    std::optional<Stereotype> stereotype;
    std::vector<PortDecl> ports;
    SourceSpan span;
};

struct SimpleConnector {
    QualifiedName source;
    std::vector<QualifiedName> targets;
    SourceSpan span;
};

struct SubComponentInstance {
    std::string name;
    std::vector<SimpleConnector> connectors;
    SourceSpan span;
};

struct SubComponentDecl {
    std::optional<Stereotype> stereotype;
    ReferenceType type;
    std::vector<ConfigArg> config_args;
    std::vector<SubComponentInstance> instances;  // empty: one default-named instance
    SourceSpan span;
};

struct ConnectorDecl {
    std::optional<Stereotype> stereotype;
    QualifiedName source;
    std::vector<QualifiedName> targets;
    SourceSpan span;
};

struct InvariantDecl {
    std::optional<std::string> kind;  // e.g. `ocl`, `java`
    std::string name;
    std::string body;  // raw text, trimmed; not interpreted
    SourceSpan span;
    SourceSpan name_span;
};

enum class AutoConnectMode { Type, Port, Off };
enum class AutoInstantiateMode { On, Off };
enum class TimingMode { Timed, Untimed, Timesynchronous };

struct ConfigElement {
    enum class Kind { AutoConnect, AutoInstantiate, Timing };
    Kind kind = Kind::AutoConnect;
    AutoConnectMode autoconnect = AutoConnectMode::Off;
    AutoInstantiateMode autoinstantiate = AutoInstantiateMode::Off;
    TimingMode timing = TimingMode::Timed;
    std::optional<Stereotype> stereotype;
    SourceSpan span;
};

struct ComponentTypeDecl;

using ArcElement = std::variant<PortInterfaceDecl,
                                SubComponentDecl,
                                ConnectorDecl,
                                InvariantDecl,
                                std::unique_ptr<ComponentTypeDecl>>;

struct ComponentTypeDecl {
    std::optional<Stereotype> stereotype;
    std::string name;
    std::optional<std::string> instance_name;
    std::vector<TypeParam> type_params;
    std::vector<ConfigParam> config_params;
    std::optional<ReferenceType> super_type;
    std::vector<ConfigElement> config_elements;
    std::vector<ArcElement> elements;
    SourceSpan span;
    SourceSpan name_span;
    SourceSpan instance_name_span;

    // Effective modes; a repeated config element overrides earlier ones.
    AutoConnectMode autoconnect_mode() const;
    AutoInstantiateMode autoinstantiate_mode() const;
    TimingMode timing_mode() const;
    bool timing_declared() const;

    std::vector<const ComponentTypeDecl*> inner_types() const;
};

struct CompilationUnit {
    std::vector<std::string> package;  // empty: default package
    std::vector<ImportDecl> imports;
    std::unique_ptr<ComponentTypeDecl> root;
    std::string source_id;

    std::string package_str() const;
};

std::string join(const std::vector<std::string>& segments, const std::string& sep = ".");

// Structural equality; spans and stereotype spans are ignored,
// invariant bodies are compared trimmed.
bool structurally_equal(const CompilationUnit& a, const CompilationUnit& b);
bool structurally_equal(const ComponentTypeDecl& a, const ComponentTypeDecl& b);
bool structurally_equal(const TypeExpr& a, const TypeExpr& b);

}  // namespace montiarc::ast
