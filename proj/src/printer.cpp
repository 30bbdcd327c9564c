#include "montiarc/printer.hpp"

#include <sstream>

namespace montiarc {

namespace {

using namespace ast;

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

class Printer {
public:
    std::string render(const CompilationUnit& unit) {
        if (!unit.package.empty()) {
            out_ << "package " << join(unit.package) << ";\n";
            if (!unit.imports.empty() || unit.root) out_ << "\n";
        }
        for (const auto& imp : unit.imports) {
            out_ << "import " << imp.name.str();
            if (imp.wildcard) out_ << ".*";
            out_ << ";\n";
        }
        if (!unit.imports.empty()) out_ << "\n";
        if (unit.root) component(*unit.root, 0);
        return out_.str();
    }

    std::string render(const ComponentTypeDecl& comp, int indent) {
        component(comp, indent);
        return out_.str();
    }

private:
    void pad(int indent) {
        for (int i = 0; i < indent; ++i) out_ << "  ";
    }

    void stereotype(const std::optional<Stereotype>& st) {
        if (!st) return;
        out_ << "<<";
        for (size_t i = 0; i < st->values.size(); ++i) {
            if (i) out_ << ", ";
            out_ << st->values[i].name;
            if (st->values[i].value) out_ << "=\"" << *st->values[i].value << "\"";
        }
        out_ << ">> ";
    }

    void component(const ComponentTypeDecl& comp, int indent) {
        pad(indent);
        stereotype(comp.stereotype);
        out_ << "component " << comp.name;
        if (comp.instance_name) out_ << ' ' << *comp.instance_name;
        if (!comp.type_params.empty()) {
            out_ << '<';
            for (size_t i = 0; i < comp.type_params.size(); ++i) {
                if (i) out_ << ", ";
                out_ << comp.type_params[i].name;
                if (comp.type_params[i].bound) out_ << " extends " << comp.type_params[i].bound->str();
            }
            out_ << '>';
        }
        if (!comp.config_params.empty()) {
            out_ << '[';
            for (size_t i = 0; i < comp.config_params.size(); ++i) {
                if (i) out_ << ", ";
                out_ << comp.config_params[i].type.str() << ' ' << comp.config_params[i].name;
            }
            out_ << ']';
        }
        if (comp.super_type) out_ << " extends " << comp.super_type->str();
        if (comp.config_elements.empty() && comp.elements.empty()) {
            out_ << " {}";
            if (indent == 0) out_ << "\n";
            else out_ << "\n";
            return;
        }
        out_ << " {\n";
        for (const auto& ce : comp.config_elements) config_element(ce, indent + 1);
        for (const auto& e : comp.elements) element(e, indent + 1);
        pad(indent);
        out_ << "}\n";
    }

    void config_element(const ConfigElement& ce, int indent) {
        pad(indent);
        switch (ce.kind) {
            case ConfigElement::Kind::AutoConnect:
                out_ << "autoconnect ";
                stereotype(ce.stereotype);
                switch (ce.autoconnect) {
                    case AutoConnectMode::Type: out_ << "type"; break;
                    case AutoConnectMode::Port: out_ << "port"; break;
                    case AutoConnectMode::Off: out_ << "off"; break;
                }
                break;
            case ConfigElement::Kind::AutoInstantiate:
                out_ << "autoinstantiate ";
                stereotype(ce.stereotype);
                out_ << (ce.autoinstantiate == AutoInstantiateMode::On ? "on" : "off");
                break;
            case ConfigElement::Kind::Timing:
                out_ << "behavior ";
                stereotype(ce.stereotype);
                switch (ce.timing) {
                    case TimingMode::Timed: out_ << "timed"; break;
                    case TimingMode::Untimed: out_ << "untimed"; break;
                    case TimingMode::Timesynchronous: out_ << "timesynchronous"; break;
                }
                break;
        }
        out_ << ";\n";
    }

    void element(const ArcElement& e, int indent) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, PortInterfaceDecl>) ports(node, indent);
                else if constexpr (std::is_same_v<T, SubComponentDecl>) subcomponent(node, indent);
                else if constexpr (std::is_same_v<T, ConnectorDecl>) connector(node, indent);
                else if constexpr (std::is_same_v<T, InvariantDecl>) invariant(node, indent);
                else component(*node, indent);
            },
            e);
    }

    void ports(const PortInterfaceDecl& decl, int indent) {
        pad(indent);
        stereotype(decl.stereotype);
        out_ << "port\n";
        for (size_t i = 0; i < decl.ports.size(); ++i) {
            const auto& p = decl.ports[i];
            pad(indent + 1);
            stereotype(p.stereotype);
            out_ << (p.direction == PortDirection::In ? "in " : "out ") << p.type.str();
            if (p.name) out_ << ' ' << *p.name;
            out_ << (i + 1 < decl.ports.size() ? ",\n" : ";\n");
        }
    }

    void subcomponent(const SubComponentDecl& decl, int indent) {
        pad(indent);
        stereotype(decl.stereotype);
        out_ << "component " << decl.type.str();
        if (!decl.config_args.empty()) {
            out_ << '(';
            for (size_t i = 0; i < decl.config_args.size(); ++i) {
                if (i) out_ << ", ";
                out_ << decl.config_args[i].str();
            }
            out_ << ')';
        }
        for (size_t i = 0; i < decl.instances.size(); ++i) {
            out_ << (i ? ", " : " ") << decl.instances[i].name;
            const auto& scs = decl.instances[i].connectors;
            if (!scs.empty()) {
                out_ << " [";
                for (size_t j = 0; j < scs.size(); ++j) {
                    if (j) out_ << "; ";
                    simple_connector(scs[j]);
                }
                out_ << ']';
            }
        }
        out_ << ";\n";
    }

    void simple_connector(const SimpleConnector& sc) {
        out_ << sc.source.str() << " -> ";
        for (size_t i = 0; i < sc.targets.size(); ++i) {
            if (i) out_ << ", ";
            out_ << sc.targets[i].str();
        }
    }

    void connector(const ConnectorDecl& decl, int indent) {
        pad(indent);
        stereotype(decl.stereotype);
        out_ << "connect " << decl.source.str() << " -> ";
        for (size_t i = 0; i < decl.targets.size(); ++i) {
            if (i) out_ << ", ";
            out_ << decl.targets[i].str();
        }
        out_ << ";\n";
    }

    void invariant(const InvariantDecl& decl, int indent) {
        pad(indent);
        if (decl.kind) out_ << *decl.kind << ' ';
        out_ << "inv " << decl.name << ": " << trim(decl.body) << ";\n";
    }

    std::ostringstream out_;
};

}  // namespace

std::string pretty_print(const ast::CompilationUnit& unit) {
    Printer p;
    return p.render(unit);
}

std::string pretty_print(const ast::ComponentTypeDecl& component, int indent) {
    Printer p;
    return p.render(component, indent);
}

}  // namespace montiarc
