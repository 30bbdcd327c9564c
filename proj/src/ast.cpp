#include "montiarc/ast.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace montiarc::ast {

std::string join(const std::vector<std::string>& segments, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < segments.size(); ++i) {
        if (i) out += sep;
        out += segments[i];
    }
    return out;
}

std::string QualifiedName::str() const { return join(segments); }

std::string TypeExpr::str() const {
    std::string out = base.str();
    if (!args.empty()) {
        out += '<';
        for (size_t i = 0; i < args.size(); ++i) {
            if (i) out += ", ";
            out += args[i].str();
        }
        out += '>';
    }
    for (int i = 0; i < array_dims; ++i) out += "[]";
    return out;
}

std::string ReferenceType::str() const {
    std::string out = name.str();
    if (!type_args.empty()) {
        out += '<';
        for (size_t i = 0; i < type_args.size(); ++i) {
            if (i) out += ", ";
            out += type_args[i].str();
        }
        out += '>';
    }
    return out;
}

std::string ConfigArg::str() const {
    switch (kind) {
        case Kind::Reference: return reference.str();
        case Kind::Variable: return text;
        case Kind::Literal:
            switch (literal_kind) {
                case LiteralKind::Char: return "'" + text + "'";
                case LiteralKind::String: return "\"" + text + "\"";
                default: return text;
            }
    }
    return text;
}

AutoConnectMode ComponentTypeDecl::autoconnect_mode() const {
    AutoConnectMode mode = AutoConnectMode::Off;
    for (const auto& c : config_elements)
        if (c.kind == ConfigElement::Kind::AutoConnect) mode = c.autoconnect;
    return mode;
}

AutoInstantiateMode ComponentTypeDecl::autoinstantiate_mode() const {
    AutoInstantiateMode mode = AutoInstantiateMode::Off;
    for (const auto& c : config_elements)
        if (c.kind == ConfigElement::Kind::AutoInstantiate) mode = c.autoinstantiate;
    return mode;
}

TimingMode ComponentTypeDecl::timing_mode() const {
    TimingMode mode = TimingMode::Timed;
    for (const auto& c : config_elements)
        if (c.kind == ConfigElement::Kind::Timing) mode = c.timing;
    return mode;
}

bool ComponentTypeDecl::timing_declared() const {
    return std::any_of(config_elements.begin(), config_elements.end(),
                       [](const ConfigElement& c) { return c.kind == ConfigElement::Kind::Timing; });
}

std::vector<const ComponentTypeDecl*> ComponentTypeDecl::inner_types() const {
    std::vector<const ComponentTypeDecl*> out;
    for (const auto& e : elements)
        if (const auto* inner = std::get_if<std::unique_ptr<ComponentTypeDecl>>(&e))
            out.push_back(inner->get());
    return out;
}

std::string CompilationUnit::package_str() const { return join(package); }

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool eq(const QualifiedName& a, const QualifiedName& b) { return a.segments == b.segments; }

bool eq(const TypeExpr& a, const TypeExpr& b);

bool eq(const std::vector<TypeExpr>& a, const std::vector<TypeExpr>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!eq(a[i], b[i])) return false;
    return true;
}

bool eq(const TypeExpr& a, const TypeExpr& b) {
    return eq(a.base, b.base) && a.array_dims == b.array_dims && eq(a.args, b.args);
}

bool eq(const std::optional<Stereotype>& a, const std::optional<Stereotype>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    if (a->values.size() != b->values.size()) return false;
    for (size_t i = 0; i < a->values.size(); ++i)
        if (a->values[i].name != b->values[i].name || a->values[i].value != b->values[i].value)
            return false;
    return true;
}

bool eq(const ReferenceType& a, const ReferenceType& b) {
    return eq(a.name, b.name) && eq(a.type_args, b.type_args);
}

bool eq(const std::optional<ReferenceType>& a, const std::optional<ReferenceType>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || eq(*a, *b);
}

bool eq(const ConfigArg& a, const ConfigArg& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ConfigArg::Kind::Reference: return eq(a.reference, b.reference);
        case ConfigArg::Kind::Variable: return a.text == b.text;
        case ConfigArg::Kind::Literal:
            return a.literal_kind == b.literal_kind && a.text == b.text;
    }
    return false;
}

bool eq(const PortDecl& a, const PortDecl& b) {
    return a.direction == b.direction && eq(a.type, b.type) && a.name == b.name &&
           eq(a.stereotype, b.stereotype);
}

bool eq(const PortInterfaceDecl& a, const PortInterfaceDecl& b) {
    if (!eq(a.stereotype, b.stereotype) || a.ports.size() != b.ports.size()) return false;
    for (size_t i = 0; i < a.ports.size(); ++i)
        if (!eq(a.ports[i], b.ports[i])) return false;
    return true;
}

bool eq(const SimpleConnector& a, const SimpleConnector& b) {
    if (!eq(a.source, b.source) || a.targets.size() != b.targets.size()) return false;
    for (size_t i = 0; i < a.targets.size(); ++i)
        if (!eq(a.targets[i], b.targets[i])) return false;
    return true;
}

bool eq(const SubComponentDecl& a, const SubComponentDecl& b) {
    if (!eq(a.type, b.type) || !eq(a.stereotype, b.stereotype)) return false;
    if (a.config_args.size() != b.config_args.size()) return false;
    for (size_t i = 0; i < a.config_args.size(); ++i)
        if (!eq(a.config_args[i], b.config_args[i])) return false;
    if (a.instances.size() != b.instances.size()) return false;
    for (size_t i = 0; i < a.instances.size(); ++i) {
        if (a.instances[i].name != b.instances[i].name) return false;
        if (a.instances[i].connectors.size() != b.instances[i].connectors.size()) return false;
        for (size_t j = 0; j < a.instances[i].connectors.size(); ++j)
            if (!eq(a.instances[i].connectors[j], b.instances[i].connectors[j])) return false;
    }
    return true;
}

bool eq(const ConnectorDecl& a, const ConnectorDecl& b) {
    if (!eq(a.source, b.source) || a.targets.size() != b.targets.size()) return false;
    if (!eq(a.stereotype, b.stereotype)) return false;
    for (size_t i = 0; i < a.targets.size(); ++i)
        if (!eq(a.targets[i], b.targets[i])) return false;
    return true;
}

bool eq(const InvariantDecl& a, const InvariantDecl& b) {
    return a.kind == b.kind && a.name == b.name && trim(a.body) == trim(b.body);
}

bool eq(const ConfigElement& a, const ConfigElement& b) {
    if (a.kind != b.kind || !eq(a.stereotype, b.stereotype)) return false;
    switch (a.kind) {
        case ConfigElement::Kind::AutoConnect: return a.autoconnect == b.autoconnect;
        case ConfigElement::Kind::AutoInstantiate: return a.autoinstantiate == b.autoinstantiate;
        case ConfigElement::Kind::Timing: return a.timing == b.timing;
    }
    return false;
}

bool eq(const ComponentTypeDecl& a, const ComponentTypeDecl& b);

bool eq(const ArcElement& a, const ArcElement& b) {
    if (a.index() != b.index()) return false;
    return std::visit(
        [&](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(b);
            if constexpr (std::is_same_v<T, std::unique_ptr<ComponentTypeDecl>>) {
                return eq(*lhs, *rhs);
            } else {
                return eq(lhs, rhs);
            }
        },
        a);
}

bool eq(const ComponentTypeDecl& a, const ComponentTypeDecl& b) {
    if (a.name != b.name || a.instance_name != b.instance_name) return false;
    if (!eq(a.stereotype, b.stereotype) || !eq(a.super_type, b.super_type)) return false;
    if (a.type_params.size() != b.type_params.size()) return false;
    for (size_t i = 0; i < a.type_params.size(); ++i) {
        if (a.type_params[i].name != b.type_params[i].name) return false;
        if (!eq(a.type_params[i].bound, b.type_params[i].bound)) return false;
    }
    if (a.config_params.size() != b.config_params.size()) return false;
    for (size_t i = 0; i < a.config_params.size(); ++i)
        if (a.config_params[i].name != b.config_params[i].name ||
            !eq(a.config_params[i].type, b.config_params[i].type))
            return false;
    if (a.config_elements.size() != b.config_elements.size()) return false;
    for (size_t i = 0; i < a.config_elements.size(); ++i)
        if (!eq(a.config_elements[i], b.config_elements[i])) return false;
    if (a.elements.size() != b.elements.size()) return false;
    for (size_t i = 0; i < a.elements.size(); ++i)
        if (!eq(a.elements[i], b.elements[i])) return false;
    return true;
}

}  // namespace

bool structurally_equal(const TypeExpr& a, const TypeExpr& b) { return eq(a, b); }

bool structurally_equal(const ComponentTypeDecl& a, const ComponentTypeDecl& b) {
    return eq(a, b);
}

bool structurally_equal(const CompilationUnit& a, const CompilationUnit& b) {
    if (a.package != b.package) return false;
    if (a.imports.size() != b.imports.size()) return false;
    for (size_t i = 0; i < a.imports.size(); ++i)
        if (!eq(a.imports[i].name, b.imports[i].name) || a.imports[i].wildcard != b.imports[i].wildcard)
            return false;
    if (!a.root || !b.root) return a.root == b.root;
    return eq(*a.root, *b.root);
}

}  // namespace montiarc::ast
