#include "montiarc/checks.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace montiarc::checks {

using namespace ast;
using symbols::Analysis;
using symbols::ComponentScope;
using symbols::EndpointRef;
using symbols::Member;
using symbols::PortSig;
using symbols::SubcomponentSym;
using symbols::SymbolKind;
using symbols::TypeEntry;

namespace {

std::string quoted(const std::string& s) { return "'" + s + "'"; }

bool upper_first(const std::string& s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

bool lower_first(const std::string& s) {
    return !s.empty() && std::islower(static_cast<unsigned char>(s[0]));
}

std::string simple_name(const std::string& qname) {
    size_t dot = qname.rfind('.');
    return dot == std::string::npos ? qname : qname.substr(dot + 1);
}

// One connector-shaped construct: an explicit connector or a simple
// connector bound to an instance.
struct ConnectorItem {
    const QualifiedName* source = nullptr;
    std::vector<const QualifiedName*> targets;
    bool simple = false;
    const SubcomponentSym* bound = nullptr;  // instance the simple connector hangs off
    SourceSpan span;
};

std::vector<ConnectorItem> connector_items(const TypeEntry& entry, const ComponentScope& scope) {
    std::vector<ConnectorItem> items;
    for (const auto& element : entry.decl->elements) {
        if (const auto* conn = std::get_if<ConnectorDecl>(&element)) {
            ConnectorItem item;
            item.source = &conn->source;
            for (const auto& t : conn->targets) item.targets.push_back(&t);
            item.span = conn->span;
            items.push_back(std::move(item));
        } else if (const auto* sub = std::get_if<SubComponentDecl>(&element)) {
            for (const auto& inst : sub->instances) {
                for (const auto& sc : inst.connectors) {
                    ConnectorItem item;
                    item.source = &sc.source;
                    for (const auto& t : sc.targets) item.targets.push_back(&t);
                    item.simple = true;
                    item.bound = scope.find_sub(inst.name);
                    item.span = sc.span;
                    items.push_back(std::move(item));
                }
            }
        }
    }
    return items;
}

struct ResolvedEndpoint {
    EndpointRef ref;
    bool valid = false;  // resolved to a direction-correct port, or a subcomponent
};

// Resolution shared by the connection and referential passes. Simple
// connector sources resolve against the bound instance's interface.
struct ItemResolution {
    ResolvedEndpoint source;
    std::vector<ResolvedEndpoint> targets;
};

ItemResolution resolve_item(const ConnectorItem& item, const TypeEntry& entry,
                            Analysis& analysis) {
    ItemResolution res;
    if (item.simple) {
        EndpointRef ep;
        ep.span = item.source->span;
        ep.raw = item.source;
        if (item.source->size() == 1 && item.bound && !item.bound->type_qname.empty()) {
            auto binding = analysis.binding_for(item.bound->type_qname, item.bound->type_args);
            for (const auto& sig : analysis.interface_of(item.bound->type_qname, binding)) {
                if (sig.name == item.source->segments[0]) {
                    ep.kind = EndpointRef::Kind::SubPort;
                    ep.sub = item.bound->name;
                    ep.port = sig.name;
                    ep.direction = sig.direction;
                    ep.type = sig.type;
                    break;
                }
            }
            if (ep.kind != EndpointRef::Kind::SubPort) {
                ep.kind = EndpointRef::Kind::Unresolved;
                ep.reason = EndpointRef::Reason::NoSuchPort;
                ep.port = item.source->segments[0];
            }
        } else {
            ep.kind = EndpointRef::Kind::Unresolved;
            ep.reason = EndpointRef::Reason::NoSuchPort;
        }
        res.source.ref = ep;
        res.source.valid =
            ep.kind == EndpointRef::Kind::SubPort && ep.direction == PortDirection::Out &&
            item.source->size() == 1;
    } else {
        EndpointRef ep = analysis.resolve_endpoint(*item.source, entry.qname);
        res.source.ref = ep;
        res.source.valid =
            (ep.kind == EndpointRef::Kind::Subcomponent) ||
            (ep.kind == EndpointRef::Kind::ThisPort && ep.direction == PortDirection::In) ||
            (ep.kind == EndpointRef::Kind::SubPort && ep.direction == PortDirection::Out);
    }
    for (const auto* t : item.targets) {
        ResolvedEndpoint r;
        r.ref = analysis.resolve_endpoint(*t, entry.qname);
        r.valid = (r.ref.kind == EndpointRef::Kind::Subcomponent) ||
                  (r.ref.kind == EndpointRef::Kind::ThisPort &&
                   r.ref.direction == PortDirection::Out) ||
                  (r.ref.kind == EndpointRef::Kind::SubPort &&
                   r.ref.direction == PortDirection::In);
        res.targets.push_back(std::move(r));
    }
    return res;
}

}  // namespace

// ---- B1 / B2 ---------------------------------------------------------------

Diagnostics check_basic(const TypeEntry& entry, Analysis& analysis) {
    Diagnostics out;
    const ComponentTypeDecl& decl = *entry.decl;

    if (entry.is_root && decl.instance_name) {
        out.push_back(make_error("B2", decl.instance_name_span,
                                 "instance name " + quoted(*decl.instance_name) +
                                     " is not allowed on a root component type definition"));
    }

    const ComponentScope& scope = analysis.scope(entry);

    // Duplicates within the component namespace, reported at the later
    // declaration.
    std::map<std::string, const Member*> first_seen;
    for (const auto& m : scope.members) {
        auto [it, inserted] = first_seen.try_emplace(m.name, &m);
        if (!inserted) {
            Diagnostic d = make_error("B1", m.span,
                                      quoted(m.name) + " already declared in l. " +
                                          std::to_string(it->second->span.start.line));
            d.related.push_back(it->second->span);
            out.push_back(std::move(d));
        }
    }

    // Names inherited from the supertype share the namespace; a local
    // re-declaration collides.
    if (decl.super_type) {
        auto resolved = analysis.resolve_component_type(*decl.super_type, entry);
        if (resolved.ok() && !analysis.extends_reaches(resolved.qname, entry.qname)) {
            std::set<std::string> inherited;
            std::set<std::string> visited;
            std::string cur = resolved.qname;
            while (!cur.empty() && visited.insert(cur).second) {
                const ComponentScope& sup = analysis.scope(cur);
                for (const auto& p : sup.ports) inherited.insert(p.name);
                for (const auto& s : sup.subs) inherited.insert(s.name);
                cur = analysis.super_of(cur).value_or("");
            }
            for (const auto& m : scope.members) {
                if (m.kind != SymbolKind::Port && m.kind != SymbolKind::Subcomponent) continue;
                if (inherited.count(m.name)) {
                    out.push_back(make_error("B1", m.span,
                                             quoted(m.name) + " already declared in supertype '" +
                                                 resolved.qname + "'"));
                }
            }
        }
    }
    return out;
}

// ---- CO1 / CO2 / CO3 ---------------------------------------------------------

Diagnostics check_connections(const TypeEntry& entry, Analysis& analysis) {
    Diagnostics out;
    const ComponentScope& scope = analysis.scope(entry);

    auto endpoint_diag = [&](const ResolvedEndpoint& r, bool is_source) {
        const EndpointRef& ep = r.ref;
        if (ep.kind == EndpointRef::Kind::Unresolved) {
            if (ep.reason == EndpointRef::Reason::Piercing) {
                out.push_back(make_error("CO1", ep.span,
                                         quoted(ep.raw->str()) +
                                             " pierces through a component interface"));
            } else if (ep.reason == EndpointRef::Reason::NoSuchName) {
                out.push_back(make_error("CO3", ep.span,
                                         quoted(ep.raw->str()) +
                                             " does not refer to a port or a subcomponent of '" +
                                             simple_name(entry.qname) + "'"));
            }
            // NoSuchSubcomponent / NoSuchPort belong to R5/R6.
            return;
        }
        if (r.valid || ep.kind == EndpointRef::Kind::Subcomponent) return;
        // Resolved to a port of the wrong direction for this position.
        if (is_source) {
            out.push_back(make_error("CO3", ep.span,
                                     quoted(ep.raw->str()) +
                                         " cannot be a connector source: expected an incoming "
                                         "port of the component or an outgoing port of a "
                                         "subcomponent"));
        } else {
            out.push_back(make_error("CO3", ep.span,
                                     quoted(ep.raw->str()) +
                                         " cannot be a connector target: expected an outgoing "
                                         "port of the component or an incoming port of a "
                                         "subcomponent"));
        }
    };

    for (const auto& item : connector_items(entry, analysis.scope(entry))) {
        ItemResolution res = resolve_item(item, entry, analysis);
        if (item.simple) {
            if (item.source->size() > 1) {
                out.push_back(make_error("CO2", item.source->span,
                                         "source " + quoted(item.source->str()) +
                                             " of a simple connector is qualified"));
            } else if (res.source.ref.kind == EndpointRef::Kind::SubPort &&
                       res.source.ref.direction == PortDirection::In) {
                out.push_back(make_error("CO2", item.source->span,
                                         "source " + quoted(item.source->str()) +
                                             " of a simple connector is not an outgoing port of "
                                             "component type '" +
                                             (item.bound ? simple_name(item.bound->type_qname)
                                                         : std::string("?")) +
                                             "'"));
            }
            // Missing source ports are R7.
        } else {
            endpoint_diag(res.source, true);
        }
        for (const auto& t : res.targets) endpoint_diag(t, false);
    }
    (void)scope;
    return out;
}

// ---- R1 .. R13 ----------------------------------------------------------------

Diagnostics check_referential(const TypeEntry& entry, Analysis& analysis) {
    Diagnostics out;
    const ComponentScope& scope = analysis.scope(entry);
    const ComponentTypeDecl& decl = *entry.decl;

    // R3/R4: subcomponent types must exist (qualified: in the named
    // package; unqualified: in the package or imported).
    std::set<const SubComponentDecl*> seen_decls;
    for (const auto& sub : scope.subs) {
        if (!sub.decl || !seen_decls.insert(sub.decl).second) continue;
        if (!sub.type_qname.empty()) continue;
        auto resolved = analysis.resolve_component_type(sub.decl->type, entry);
        append(out, resolved.diags);
        if (resolved.ok()) continue;
        if (!resolved.diags.empty()) continue;  // S003 already explains the failure
        if (sub.decl->type.name.size() > 1) {
            out.push_back(make_error("R3", sub.decl->type.span,
                                     "component type '" + sub.decl->type.name.str() +
                                         "' does not exist"));
        } else {
            std::string pkg = entry.unit->package_str();
            out.push_back(make_error("R4", sub.decl->type.span,
                                     "component type '" + sub.decl->type.name.str() +
                                         "' is neither declared in package '" + pkg +
                                         "' nor imported"));
        }
    }
    // The extends reference resolves by the same rules.
    if (decl.super_type) {
        auto resolved = analysis.resolve_component_type(*decl.super_type, entry);
        append(out, resolved.diags);
        if (!resolved.ok() && resolved.diags.empty()) {
            const char* code = decl.super_type->name.size() > 1 ? "R3" : "R4";
            out.push_back(make_error(code, decl.super_type->span,
                                     "component type '" + decl.super_type->name.str() +
                                         "' does not exist"));
        }
    }

    // Endpoint-level rules over the explicit connector constructs.
    struct TargetUse {
        SourceSpan span;
        std::string display;
    };
    std::map<std::pair<std::string, std::string>, std::vector<TargetUse>> r1_uses;  // ("", port)
    std::map<std::pair<std::string, std::string>, std::vector<TargetUse>> r2_uses;  // (sub, port)

    for (const auto& item : connector_items(entry, scope)) {
        ItemResolution res = resolve_item(item, entry, analysis);
        const EndpointRef& src = res.source.ref;

        if (item.simple) {
            // R7: the simple connector's source port must exist in the
            // instance's type.
            if (src.kind == EndpointRef::Kind::Unresolved &&
                src.reason == EndpointRef::Reason::NoSuchPort && item.bound &&
                !item.bound->type_qname.empty() && item.source->size() == 1) {
                out.push_back(make_error("R7", item.source->span,
                                         "port " + quoted(item.source->segments[0]) +
                                             " does not exist in component type '" +
                                             simple_name(item.bound->type_qname) + "'"));
            }
        } else {
            if (src.kind == EndpointRef::Kind::Unresolved) {
                if (src.reason == EndpointRef::Reason::NoSuchSubcomponent) {
                    out.push_back(make_error("R5", src.span,
                                             "subcomponent " + quoted(src.sub) + " does not exist"));
                } else if (src.reason == EndpointRef::Reason::NoSuchPort) {
                    const SubcomponentSym* s = scope.find_sub(src.sub);
                    out.push_back(make_error("R6", src.span,
                                             "port " + quoted(src.port) +
                                                 " does not exist in component type '" +
                                                 (s ? simple_name(s->type_qname) : std::string("?")) +
                                                 "'"));
                }
            }
        }
        for (const auto& t : res.targets) {
            if (t.ref.kind == EndpointRef::Kind::Unresolved) {
                if (t.ref.reason == EndpointRef::Reason::NoSuchSubcomponent) {
                    out.push_back(make_error("R5", t.ref.span,
                                             "subcomponent " + quoted(t.ref.sub) + " does not exist"));
                } else if (t.ref.reason == EndpointRef::Reason::NoSuchPort) {
                    const SubcomponentSym* s = scope.find_sub(t.ref.sub);
                    out.push_back(make_error("R6", t.ref.span,
                                             "port " + quoted(t.ref.port) +
                                                 " does not exist in component type '" +
                                                 (s ? simple_name(s->type_qname) : std::string("?")) +
                                                 "'"));
                }
            }
        }

        // R1/R2 counting and R8 compatibility consider only constructs whose
        // endpoints resolved; malformed connectors already got their report.
        if (!res.source.valid) continue;
        for (const auto& t : res.targets) {
            if (!t.valid) continue;
            if (t.ref.kind == EndpointRef::Kind::ThisPort) {
                r1_uses[{"", t.ref.port}].push_back(TargetUse{t.ref.span, t.ref.raw->str()});
            } else if (t.ref.kind == EndpointRef::Kind::SubPort) {
                r2_uses[{t.ref.sub, t.ref.port}].push_back(TargetUse{t.ref.span, t.ref.raw->str()});
            }
            // R8 after substitution, for port-to-port constructs.
            if (src.resolved_port() && t.ref.resolved_port()) {
                auto answer = types::is_subtype(src.type, t.ref.type, analysis.registry(),
                                                scope.type_params);
                if (answer.result == types::SubtypeResult::No) {
                    out.push_back(make_error("R8", t.ref.span,
                                             "incompatible types " + src.type.str() + ", " +
                                                 t.ref.type.str()));
                } else if (answer.result == types::SubtypeResult::UnknownType) {
                    out.push_back(make_error("R8", t.ref.span,
                                             "unknown type '" + answer.unknown_name +
                                                 "' in connector"));
                }
            }
        }
    }

    for (const auto& [key, uses] : r1_uses) {
        if (uses.size() < 2) continue;
        for (const auto& use : uses)
            out.push_back(make_error("R1", use.span,
                                     "outgoing port " + quoted(key.second) +
                                         " is used more than once as a connector target"));
    }
    for (const auto& [key, uses] : r2_uses) {
        if (uses.size() < 2) continue;
        for (const auto& use : uses)
            out.push_back(make_error("R2", use.span,
                                     "incoming port '" + key.first + "." + key.second +
                                         "' is used more than once as a connector target"));
    }

    // R9/R10: full generic and configuration bindings on subcomponents.
    std::set<const SubComponentDecl*> checked;
    for (const auto& sub : scope.subs) {
        if (!sub.decl || sub.type_qname.empty()) continue;
        if (!checked.insert(sub.decl).second) continue;
        const TypeEntry* target = analysis.pool().find(sub.type_qname);
        if (!target) continue;

        const auto& params = target->decl->type_params;
        const auto& args = sub.decl->type.type_args;
        if (args.size() < params.size()) {
            std::string missing;
            for (size_t i = args.size(); i < params.size(); ++i) {
                if (!missing.empty()) missing += ", ";
                missing += params[i].name;
            }
            out.push_back(make_error("R9", sub.type_span,
                                     (params.size() - args.size() == 1 ? "type parameter "
                                                                       : "type parameters ") +
                                         missing + " not assigned"));
        } else if (args.size() > params.size()) {
            out.push_back(make_error("R9", sub.type_span,
                                     "too many type arguments for '" +
                                         simple_name(sub.type_qname) + "'"));
        }

        const auto& cparams = target->decl->config_params;
        const auto& cargs = sub.decl->config_args;
        if (cargs.size() < cparams.size()) {
            std::string missing;
            for (size_t i = cargs.size(); i < cparams.size(); ++i) {
                if (!missing.empty()) missing += ", ";
                missing += cparams[i].name;
            }
            out.push_back(make_error("R10", sub.type_span,
                                     (cparams.size() - cargs.size() == 1 ? "missing parameter "
                                                                         : "missing parameters ") +
                                         missing));
        } else if (cargs.size() > cparams.size()) {
            out.push_back(make_error("R10", sub.type_span,
                                     "too many configuration arguments for '" +
                                         simple_name(sub.type_qname) + "'"));
        }

        // Value typing for the bound prefix.
        types::TypeBinding binding = analysis.binding_for(sub.type_qname, args);
        for (size_t i = 0; i < cargs.size() && i < cparams.size(); ++i) {
            const ConfigArg& arg = cargs[i];
            TypeExpr expected = types::substitute(cparams[i].type, binding).type;
            TypeExpr actual;
            if (arg.kind == ConfigArg::Kind::Literal) {
                const char* name = nullptr;
                switch (arg.literal_kind) {
                    case ConfigArg::LiteralKind::Int: name = "Integer"; break;
                    case ConfigArg::LiteralKind::Char: name = "Character"; break;
                    case ConfigArg::LiteralKind::String: name = "String"; break;
                    case ConfigArg::LiteralKind::Bool: name = "Boolean"; break;
                    case ConfigArg::LiteralKind::None: break;
                }
                if (!name) continue;
                actual.base.segments = {name};
            } else if (arg.kind == ConfigArg::Kind::Variable) {
                const ConfigParam* found = nullptr;
                for (const auto& cp : decl.config_params)
                    if (cp.name == arg.text) found = &cp;
                if (!found) {
                    if (scope.type_params.count(arg.text)) continue;
                    out.push_back(make_error("R10", arg.span,
                                             "variable " + quoted(arg.text) +
                                                 " is not a configuration parameter or type "
                                                 "parameter in scope"));
                    continue;
                }
                actual = found->type;
            } else {
                continue;  // dotted references (enums, constants) are opaque
            }
            auto answer =
                types::is_subtype(actual, expected, analysis.registry(), scope.type_params);
            if (answer.result == types::SubtypeResult::No) {
                out.push_back(make_error("R10", arg.span,
                                         "incompatible types " + actual.str() + ", " +
                                             expected.str() + " for parameter '" +
                                             cparams[i].name + "'"));
            }
        }
    }

    // R11: inheritance cycles, reported at the extends clause.
    if (decl.super_type) {
        auto resolved = analysis.resolve_component_type(*decl.super_type, entry);
        if (resolved.ok() && analysis.extends_reaches(resolved.qname, entry.qname)) {
            std::string path = simple_name(entry.qname);
            std::string cur = resolved.qname;
            std::set<std::string> visited;
            while (visited.insert(cur).second) {
                path += " -> " + simple_name(cur);
                if (cur == entry.qname) break;
                auto next = analysis.super_of(cur);
                if (!next) break;
                cur = *next;
            }
            if (cur != entry.qname) path += " -> " + simple_name(entry.qname);
            out.push_back(make_error("R11", decl.super_type->span, "inheritance cycle: " + path));
        }

        // R12: an inner type must not extend an enclosing definition.
        if (resolved.ok() && !entry.lexical_chain.empty()) {
            std::string prefix = entry.qname;
            while (true) {
                size_t dot = prefix.rfind('.');
                if (dot == std::string::npos) break;
                prefix = prefix.substr(0, dot);
                const TypeEntry* anc = analysis.pool().find(prefix);
                if (anc && resolved.qname == prefix) {
                    out.push_back(make_error("R12", decl.super_type->span,
                                             "inner component type '" + decl.name +
                                                 "' must not extend its enclosing component type '" +
                                                 simple_name(prefix) + "'"));
                    break;
                }
            }
        }
    }

    // R13: subcomponent reference cycles, reported at each declaration on
    // a cycle.
    {
        auto reaches_back = [&](const std::string& from, const std::string& target) {
            std::vector<std::string> work{from};
            std::set<std::string> seen{from};
            while (!work.empty()) {
                std::string cur = work.back();
                work.pop_back();
                if (cur == target) return true;
                const TypeEntry* e = analysis.pool().find(cur);
                if (!e) continue;
                for (const auto& s : analysis.scope(*e).subs) {
                    if (s.type_qname.empty()) continue;
                    if (seen.insert(s.type_qname).second) work.push_back(s.type_qname);
                }
            }
            return false;
        };
        for (const auto& sub : scope.subs) {
            if (sub.type_qname.empty()) continue;
            if (reaches_back(sub.type_qname, entry.qname)) {
                out.push_back(make_error("R13", sub.type_span,
                                         "subcomponent reference cycle: " +
                                             simple_name(entry.qname) + " -> " +
                                             simple_name(sub.type_qname) + " -> ... -> " +
                                             simple_name(entry.qname)));
            }
        }
    }

    return out;
}

// ---- CV1 .. CV6 ---------------------------------------------------------------

namespace {

void conventions_for_decl(const ComponentTypeDecl& decl, Diagnostics& out) {
    if (lower_first(decl.name))
        out.push_back(make_warning("CV2", decl.name_span,
                                   "component type name " + quoted(decl.name) +
                                       " should start with an upper-case letter"));
    for (const auto& tp : decl.type_params)
        if (lower_first(tp.name))
            out.push_back(make_warning("CV2", tp.span,
                                       "type parameter " + quoted(tp.name) +
                                           " should start with an upper-case letter"));
    for (const auto& cp : decl.config_params)
        if (upper_first(cp.name))
            out.push_back(make_warning("CV1", cp.span,
                                       "configuration parameter " + quoted(cp.name) +
                                           " should start with a lower-case letter"));
    if (decl.instance_name && upper_first(*decl.instance_name))
        out.push_back(make_warning("CV1", decl.instance_name_span,
                                   "instance name " + quoted(*decl.instance_name) +
                                       " should start with a lower-case letter"));

    for (const auto& element : decl.elements) {
        if (const auto* ports = std::get_if<PortInterfaceDecl>(&element)) {
            for (const auto& p : ports->ports)
                if (p.name && upper_first(*p.name))
                    out.push_back(make_warning("CV1", p.name_span,
                                               "port name " + quoted(*p.name) +
                                                   " should start with a lower-case letter"));
        } else if (const auto* sub = std::get_if<SubComponentDecl>(&element)) {
            for (const auto& inst : sub->instances)
                if (upper_first(inst.name))
                    out.push_back(make_warning("CV1", inst.span,
                                               "subcomponent name " + quoted(inst.name) +
                                                   " should start with a lower-case letter"));
        } else if (const auto* inv = std::get_if<InvariantDecl>(&element)) {
            if (upper_first(inv->name))
                out.push_back(make_warning("CV1", inv->name_span,
                                           "invariant name " + quoted(inv->name) +
                                               " should start with a lower-case letter"));
        } else if (const auto* inner = std::get_if<std::unique_ptr<ComponentTypeDecl>>(&element)) {
            conventions_for_decl(**inner, out);
        }
    }
}

void usage_conventions(const elab::ElabComponent& comp, Analysis& analysis, Diagnostics& out) {
    const bool decomposed = !comp.subs.empty() || !comp.connectors.empty();
    if (decomposed) {
        // CV5: every own port of a decomposed component is an endpoint of
        // some connector. Elaborated (autoconnect-produced) connectors count.
        for (const auto& p : comp.ports) {
            bool used = false;
            for (const auto& c : comp.connectors) {
                if ((c.source.this_port() && c.source.port == p.name) ||
                    (c.target.this_port() && c.target.port == p.name)) {
                    used = true;
                    break;
                }
            }
            if (!used)
                out.push_back(make_warning("CV5", p.span,
                                           "port " + quoted(p.name) +
                                               " is not used in any connector"));
        }
        // CV6: one warning per subcomponent with unconnected ports.
        for (const auto& s : comp.subs) {
            auto binding = analysis.binding_for(s.type_qname, s.type_args);
            std::vector<std::string> unconnected;
            for (const auto& sig : analysis.interface_of(s.type_qname, binding)) {
                bool used = false;
                for (const auto& c : comp.connectors) {
                    if ((!c.source.this_port() && c.source.sub == s.name &&
                         c.source.port == sig.name) ||
                        (!c.target.this_port() && c.target.sub == s.name &&
                         c.target.port == sig.name)) {
                        used = true;
                        break;
                    }
                }
                if (!used) unconnected.push_back(sig.name);
            }
            if (!unconnected.empty()) {
                std::string names;
                for (size_t i = 0; i < unconnected.size(); ++i) {
                    if (i) names += ", ";
                    names += unconnected[i];
                }
                out.push_back(make_warning("CV6", s.span,
                                           "subcomponent " + quoted(s.name) +
                                               " has unconnected ports " + names));
            }
        }
    }
    for (const auto& inner : comp.inners) usage_conventions(inner, analysis, out);
}

}  // namespace

Diagnostics check_conventions(const CompilationUnit& unit, const elab::ElabComponent& root,
                              Analysis& analysis) {
    Diagnostics out;

    // CV3: duplicated imports.
    for (size_t i = 0; i < unit.imports.size(); ++i) {
        for (size_t j = 0; j < i; ++j) {
            if (unit.imports[i].name.str() == unit.imports[j].name.str() &&
                unit.imports[i].wildcard == unit.imports[j].wildcard) {
                out.push_back(make_warning("CV3", unit.imports[i].span,
                                           "duplicated import '" + unit.imports[i].name.str() +
                                               (unit.imports[i].wildcard ? ".*'" : "'")));
                break;
            }
        }
    }
    // CV4: imports that never resolved anything.
    for (const auto& imp : unit.imports) {
        if (!analysis.import_used(&imp)) {
            out.push_back(make_warning("CV4", imp.span,
                                       "unused import '" + imp.name.str() +
                                           (imp.wildcard ? ".*'" : "'")));
        }
    }
    if (unit.root) conventions_for_decl(*unit.root, out);
    usage_conventions(root, analysis, out);
    return out;
}

// ---- unit-level drivers --------------------------------------------------------

namespace {

void collect_entries(const CompilationUnit& unit, const symbols::ModelPool& pool,
                     const ComponentTypeDecl& decl, std::vector<const TypeEntry*>& out) {
    const TypeEntry* entry = pool.entry_for_decl(&decl);
    if (entry) out.push_back(entry);
    for (const auto* inner : decl.inner_types()) collect_entries(unit, pool, *inner, out);
}

// Marks data-type usage of every type expression in the unit for CV4.
void mark_unit_type_usage(const CompilationUnit& unit, const symbols::ModelPool& pool,
                          Analysis& analysis) {
    std::vector<const TypeEntry*> entries;
    if (unit.root) collect_entries(unit, pool, *unit.root, entries);
    for (const auto* entry : entries) {
        const ComponentScope& scope = analysis.scope(*entry);
        for (const auto& cp : entry->decl->config_params)
            analysis.mark_type_usage(unit, cp.type, scope.type_params);
        if (entry->decl->super_type)
            for (const auto& targ : entry->decl->super_type->type_args)
                analysis.mark_type_usage(unit, targ, scope.type_params);
        for (const auto& element : entry->decl->elements) {
            if (const auto* ports = std::get_if<PortInterfaceDecl>(&element)) {
                for (const auto& p : ports->ports)
                    analysis.mark_type_usage(unit, p.type, scope.type_params);
            } else if (const auto* sub = std::get_if<SubComponentDecl>(&element)) {
                for (const auto& targ : sub->type.type_args)
                    analysis.mark_type_usage(unit, targ, scope.type_params);
            }
        }
    }
}

}  // namespace

Diagnostics check_unit_pre(const CompilationUnit& unit, Analysis& analysis) {
    Diagnostics out;
    std::vector<const TypeEntry*> entries;
    if (unit.root) collect_entries(unit, analysis.pool(), *unit.root, entries);
    for (const auto* entry : entries) {
        append(out, check_basic(*entry, analysis));
        append(out, check_connections(*entry, analysis));
        append(out, check_referential(*entry, analysis));
    }
    mark_unit_type_usage(unit, analysis.pool(), analysis);
    append(out, analysis.take_scope_diagnostics());
    return out;
}

namespace {

void post_receiver_rules(const elab::ElabComponent& comp, Analysis& analysis, Diagnostics& out) {
    std::map<std::pair<std::string, std::string>, int> target_counts;
    for (const auto& c : comp.connectors) ++target_counts[{c.target.sub, c.target.port}];
    for (const auto& c : comp.connectors) {
        auto key = std::make_pair(c.target.sub, c.target.port);
        if (target_counts[key] > 1) {
            const char* code = c.target.this_port() ? "R1" : "R2";
            std::string port = c.target.this_port() ? c.target.port
                                                    : c.target.sub + "." + c.target.port;
            out.push_back(make_error(code, c.span,
                                     (c.target.this_port() ? "outgoing port '" : "incoming port '") +
                                         port + "' is used more than once as a connector target"));
        }
    }

    // R8 over the fully elaborated, substituted connector set.
    std::set<std::string> params(comp.type_params.begin(), comp.type_params.end());
    auto type_of = [&](const elab::ElabEndpoint& ep) -> std::optional<TypeExpr> {
        if (ep.this_port()) {
            const elab::ElabPort* p = comp.find_port(ep.port);
            if (!p) return std::nullopt;
            return p->type;
        }
        const elab::ElabSub* s = comp.find_sub(ep.sub);
        if (!s) return std::nullopt;
        auto binding = analysis.binding_for(s->type_qname, s->type_args);
        for (const auto& sig : analysis.interface_of(s->type_qname, binding))
            if (sig.name == ep.port) return sig.type;
        return std::nullopt;
    };
    for (const auto& c : comp.connectors) {
        auto src = type_of(c.source);
        auto dst = type_of(c.target);
        if (!src || !dst) continue;
        auto answer = types::is_subtype(*src, *dst, analysis.registry(), params);
        if (answer.result == types::SubtypeResult::No) {
            out.push_back(make_error("R8", c.span,
                                     "incompatible types " + src->str() + ", " + dst->str()));
        }
    }
    for (const auto& inner : comp.inners) post_receiver_rules(inner, analysis, out);
}

}  // namespace

Diagnostics check_unit_post(const CompilationUnit& unit, const elab::ElabComponent& root,
                            Analysis& analysis) {
    Diagnostics out;
    post_receiver_rules(root, analysis, out);
    append(out, check_conventions(unit, root, analysis));
    return out;
}

// ---- pipeline ---------------------------------------------------------------

const elab::ElabComponent* ModelReport::elaborated(const std::string& root_qname) const {
    for (const auto& ur : units) {
        if (!ur.elaborated) continue;
        if (ur.elaborated->qname == root_qname) return ur.elaborated;
    }
    return nullptr;
}

Pipeline::Pipeline(const symbols::ModelPool& pool, const types::TypeRegistry& reg)
    : pool_(pool), analysis_(pool, reg), elaborator_(analysis_) {}

void Pipeline::closure_units(const std::string& qname, std::set<const CompilationUnit*>& seen,
                             std::set<std::string>& visited) {
    if (!visited.insert(qname).second) return;
    const TypeEntry* entry = pool_.find(qname);
    if (!entry) return;
    seen.insert(entry->unit);
    for (const auto& sub : analysis_.scope(*entry).subs)
        if (!sub.type_qname.empty()) closure_units(sub.type_qname, seen, visited);
    if (auto sup = analysis_.super_of(qname)) closure_units(*sup, seen, visited);
    for (const auto* inner : entry->decl->inner_types())
        closure_units(qname + "." + inner->name, seen, visited);
}

std::vector<const CompilationUnit*> Pipeline::units_in_scope(const std::string& root_qname,
                                                             Diagnostics& diags) {
    if (root_qname.empty()) return pool_.units_in_order();
    const TypeEntry* entry = pool_.find(root_qname);
    if (!entry) {
        SourceSpan span{"<args>", {0, 0}, {0, 0}};
        diags.push_back(make_error("S002", span,
                                   "component type '" + root_qname + "' not found in the modelpath"));
        return {};
    }
    std::set<const CompilationUnit*> seen;
    std::set<std::string> visited;
    closure_units(root_qname, seen, visited);
    std::vector<const CompilationUnit*> units(seen.begin(), seen.end());
    std::sort(units.begin(), units.end(), [](const CompilationUnit* a, const CompilationUnit* b) {
        return a->source_id < b->source_id;
    });
    return units;
}

ModelReport Pipeline::run(const std::string& root_qname) {
    ModelReport report;
    Diagnostics all;
    auto units = units_in_scope(root_qname, all);

    std::map<const CompilationUnit*, bool> unit_has_error;
    for (const auto* unit : units) {
        Diagnostics pre = check_unit_pre(*unit, analysis_);
        unit_has_error[unit] = has_errors(pre);
        append(all, pre);
        report.units.push_back(UnitReport{unit, false, nullptr});
    }

    for (auto& ur : report.units) {
        if (!ur.unit->root) continue;
        const TypeEntry* entry = pool_.entry_for_decl(ur.unit->root.get());
        if (!entry) continue;

        std::set<const CompilationUnit*> closure;
        std::set<std::string> visited;
        closure_units(entry->qname, closure, visited);
        bool clean = true;
        for (const auto* u : closure) {
            auto it = unit_has_error.find(u);
            if (it == unit_has_error.end() || it->second) clean = false;
        }
        if (!clean) continue;

        const elab::ElabComponent* elaborated = elaborator_.elaborate(entry->qname);
        append(all, elaborator_.take_diagnostics());
        if (!elaborated) continue;
        ur.pre_clean = true;
        ur.elaborated = elaborated;
        append(all, check_unit_post(*ur.unit, *elaborated, analysis_));
    }

    normalize(all);
    report.diagnostics = std::move(all);
    return report;
}

}  // namespace montiarc::checks
