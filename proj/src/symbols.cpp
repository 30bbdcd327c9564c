#include "montiarc/symbols.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "montiarc/parser.hpp"

namespace montiarc::symbols {

namespace fs = std::filesystem;
using namespace ast;

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Explicit: return "EXPLICIT";
        case Provenance::DefaultName: return "DEFAULT_NAME";
        case Provenance::AutoInstantiate: return "AUTOINSTANTIATE";
        case Provenance::Inherited: return "INHERITED";
        case Provenance::Desugared: return "DESUGARED";
        case Provenance::Autoconnect: return "AUTOCONNECT";
    }
    return "?";
}

// ---- ModelPool ----------------------------------------------------------

ModelPool ModelPool::load(const std::vector<std::string>& modelpath, Diagnostics& diags) {
    ModelPool pool;
    for (const auto& root : modelpath) {
        std::error_code ec;
        if (!fs::is_directory(root, ec)) {
            SourceSpan span{root, {0, 0}, {0, 0}};
            diags.push_back(make_error("S001", span, "modelpath entry is not a directory: " + root));
            continue;
        }
        std::vector<fs::path> files;
        for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it)
            if (it->is_regular_file() && it->path().extension() == ".arc") files.push_back(it->path());
        std::sort(files.begin(), files.end());
        for (const auto& path : files) {
            std::ifstream f(path);
            std::ostringstream buf;
            buf << f.rdbuf();
            std::string rel = fs::relative(path, root).generic_string();
            auto parsed = parse_compilation_unit(buf.str(), rel);
            append(diags, parsed.diagnostics);
            if (!parsed.unit) continue;

            // Directory layout mirrors packages; a mismatch is a warning,
            // the declared package still wins.
            std::string dir = fs::path(rel).parent_path().generic_string();
            std::string expected_pkg = dir;
            std::replace(expected_pkg.begin(), expected_pkg.end(), '/', '.');
            if (parsed.unit->package_str() != expected_pkg) {
                SourceSpan span{rel, {1, 1}, {1, 1}};
                diags.push_back(make_warning(
                    "S001", span,
                    "package '" + parsed.unit->package_str() +
                        "' does not match the directory path '" + dir + "'"));
            }
            pool.add_unit(std::move(parsed.unit), diags);
        }
    }
    return pool;
}

bool ModelPool::add_source(std::string_view text, const std::string& source_id, Diagnostics& diags) {
    auto parsed = parse_compilation_unit(text, source_id);
    append(diags, parsed.diagnostics);
    if (!parsed.unit) return false;
    add_unit(std::move(parsed.unit), diags);
    return true;
}

void ModelPool::add_unit(std::unique_ptr<CompilationUnit> unit, Diagnostics& diags) {
    const CompilationUnit& ref = *unit;
    units_.push_back(std::move(unit));
    register_unit(ref, diags);
}

void ModelPool::register_unit(const CompilationUnit& unit, Diagnostics& diags) {
    if (!unit.root) return;
    std::vector<const ComponentTypeDecl*> chain;
    register_component(*unit.root, unit, chain, unit.package_str(), diags);
}

void ModelPool::register_component(const ComponentTypeDecl& decl, const CompilationUnit& unit,
                                   std::vector<const ComponentTypeDecl*>& chain,
                                   const std::string& prefix, Diagnostics& diags) {
    std::string qname = prefix.empty() ? decl.name : prefix + "." + decl.name;
    auto [it, inserted] = by_qname_.try_emplace(qname);
    if (!inserted) {
        Diagnostic d = make_error("S002", decl.name_span,
                                  "component type '" + qname + "' already defined in " +
                                      it->second.unit->source_id);
        d.span.file = unit.source_id;
        diags.push_back(d);
        return;
    }
    TypeEntry& entry = it->second;
    entry.qname = qname;
    entry.decl = &decl;
    entry.unit = &unit;
    entry.lexical_chain = chain;
    entry.is_root = chain.empty();
    qname_of_decl_[&decl] = qname;

    chain.push_back(&decl);
    for (const auto* inner : decl.inner_types())
        register_component(*inner, unit, chain, qname, diags);
    chain.pop_back();
}

const TypeEntry* ModelPool::find(const std::string& qname) const {
    auto it = by_qname_.find(qname);
    return it == by_qname_.end() ? nullptr : &it->second;
}

const TypeEntry* ModelPool::entry_for_decl(const ComponentTypeDecl* decl) const {
    auto it = qname_of_decl_.find(decl);
    return it == qname_of_decl_.end() ? nullptr : find(it->second);
}

std::vector<const TypeEntry*> ModelPool::entries_in_order() const {
    std::vector<const TypeEntry*> out;
    for (const auto& [_, entry] : by_qname_) out.push_back(&entry);
    return out;
}

std::vector<const CompilationUnit*> ModelPool::units_in_order() const {
    std::vector<const CompilationUnit*> out;
    for (const auto& u : units_) out.push_back(u.get());
    std::sort(out.begin(), out.end(), [](const CompilationUnit* a, const CompilationUnit* b) {
        return a->source_id < b->source_id;
    });
    return out;
}

// ---- ComponentScope ------------------------------------------------------

const PortSym* ComponentScope::find_port(const std::string& name) const {
    for (const auto& p : ports)
        if (p.name == name) return &p;
    return nullptr;
}

const SubcomponentSym* ComponentScope::find_sub(const std::string& name) const {
    for (const auto& s : subs)
        if (s.name == name) return &s;
    return nullptr;
}

// ---- Analysis -------------------------------------------------------------

Analysis::Analysis(const ModelPool& pool, const types::TypeRegistry& reg)
    : pool_(pool), reg_(reg) {}

const ComponentScope& Analysis::scope(const std::string& qname) {
    auto it = scopes_.find(qname);
    if (it != scopes_.end()) return it->second;
    const TypeEntry* entry = pool_.find(qname);
    if (!entry) {
        static const ComponentScope empty;
        return empty;
    }
    return scope(*entry);
}

const ComponentScope& Analysis::scope(const TypeEntry& entry) {
    auto it = scopes_.find(entry.qname);
    if (it != scopes_.end()) return it->second;
    ComponentScope built = build_scope(entry);
    return scopes_.emplace(entry.qname, std::move(built)).first->second;
}

Diagnostics Analysis::take_scope_diagnostics() {
    Diagnostics out = std::move(scope_diags_);
    scope_diags_.clear();
    return out;
}

namespace {

bool pos_less(const SourcePos& a, const SourcePos& b) {
    return a.line != b.line ? a.line < b.line : a.col < b.col;
}

}  // namespace

ComponentScope Analysis::build_scope(const TypeEntry& entry) {
    ComponentScope sc;
    sc.qname = entry.qname;
    sc.decl = entry.decl;
    const ComponentTypeDecl& decl = *entry.decl;

    auto add_member = [&](const std::string& name, SymbolKind kind, const SourceSpan& span,
                          Provenance prov) {
        sc.members.push_back(Member{name, kind, span, prov, sc.members.size()});
    };

    for (const auto& tp : decl.type_params) {
        sc.type_params.insert(tp.name);
        add_member(tp.name, SymbolKind::TypeParam, tp.span, Provenance::Explicit);
    }
    for (const auto& cp : decl.config_params)
        add_member(cp.name, SymbolKind::ConfigParam, cp.span, Provenance::Explicit);

    auto scope_diag_key = [&](const SourceSpan& span, const std::string& msg) {
        return entry.qname + "|" + std::to_string(span.start.line) + ":" +
               std::to_string(span.start.col) + "|" + msg;
    };
    auto report_once = [&](Diagnostic d) {
        if (scope_diag_reported_.insert(scope_diag_key(d.span, d.message)).second)
            scope_diags_.push_back(std::move(d));
    };

    for (const auto& element : decl.elements) {
        if (const auto* ports = std::get_if<PortInterfaceDecl>(&element)) {
            for (const auto& p : ports->ports) {
                PortSym sym;
                sym.direction = p.direction;
                sym.type = p.type;
                sym.span = p.name_span;
                if (p.name) {
                    sym.name = *p.name;
                    sym.provenance = Provenance::Explicit;
                } else {
                    bool is_param = p.type.base.size() == 1 && p.type.args.empty() &&
                                    sc.type_params.count(p.type.base.segments[0]) > 0;
                    auto derived = is_param ? std::nullopt : types::default_name(p.type);
                    if (!derived) {
                        sym.no_default = true;
                        report_once(make_error(
                            "S004", p.name_span,
                            "port of type '" + p.type.str() + "' must be explicitly named"));
                        continue;
                    }
                    sym.name = *derived;
                    sym.provenance = Provenance::DefaultName;
                }
                sc.ports.push_back(sym);
                add_member(sym.name, SymbolKind::Port, sym.span, sym.provenance);
            }
        } else if (const auto* sub = std::get_if<SubComponentDecl>(&element)) {
            auto resolved = resolve_component_type(sub->type, entry);
            if (sub->instances.empty()) {
                SubcomponentSym sym;
                sym.decl = sub;
                sym.type_qname = resolved.qname;
                sym.type_args = sub->type.type_args;
                sym.span = sub->type.span;
                sym.type_span = sub->type.span;
                auto derived = types::default_name_for(sub->type.name.last());
                if (!derived) {
                    report_once(make_error("S004", sub->type.span,
                                           "subcomponent of type '" + sub->type.str() +
                                               "' must be explicitly named"));
                    continue;
                }
                sym.name = *derived;
                sym.provenance = Provenance::DefaultName;
                sc.subs.push_back(sym);
                add_member(sym.name, SymbolKind::Subcomponent, sym.span, sym.provenance);
            } else {
                for (const auto& inst : sub->instances) {
                    SubcomponentSym sym;
                    sym.decl = sub;
                    sym.instance = &inst;
                    sym.name = inst.name;
                    sym.type_qname = resolved.qname;
                    sym.type_args = sub->type.type_args;
                    sym.span = inst.span;
                    sym.type_span = sub->type.span;
                    sym.provenance = Provenance::Explicit;
                    sc.subs.push_back(sym);
                    add_member(sym.name, SymbolKind::Subcomponent, sym.span, sym.provenance);
                }
            }
        } else if (const auto* inv = std::get_if<InvariantDecl>(&element)) {
            add_member(inv->name, SymbolKind::Invariant, inv->name_span, Provenance::Explicit);
        } else if (const auto* inner = std::get_if<std::unique_ptr<ComponentTypeDecl>>(&element)) {
            // An instance name on an inner type declares a subcomponent in
            // this (the parent's) namespace.
            if ((*inner)->instance_name) {
                SubcomponentSym sym;
                sym.inner = inner->get();
                sym.name = *(*inner)->instance_name;
                sym.type_qname = entry.qname + "." + (*inner)->name;
                sym.span = (*inner)->instance_name_span;
                sym.type_span = (*inner)->name_span;
                sym.provenance = Provenance::Explicit;
                sc.subs.push_back(sym);
                add_member(sym.name, SymbolKind::Subcomponent, sym.span, sym.provenance);
            }
        }
    }

    // Auto-instantiation: parameterless inner types without an existing
    // reference gain a default-named subcomponent.
    if (decl.autoinstantiate_mode() == AutoInstantiateMode::On) {
        for (const auto* inner : decl.inner_types()) {
            if (!inner->type_params.empty() || !inner->config_params.empty()) continue;
            if (inner->instance_name) continue;
            std::string inner_qname = entry.qname + "." + inner->name;
            bool referenced = std::any_of(sc.subs.begin(), sc.subs.end(),
                                          [&](const SubcomponentSym& s) {
                                              return s.type_qname == inner_qname;
                                          });
            if (referenced) continue;
            auto derived = types::default_name_for(inner->name);
            if (!derived) continue;
            SubcomponentSym sym;
            sym.inner = inner;
            sym.name = *derived;
            sym.type_qname = inner_qname;
            sym.span = inner->name_span;
            sym.provenance = Provenance::AutoInstantiate;
            sc.subs.push_back(sym);
            add_member(sym.name, SymbolKind::Subcomponent, sym.span, sym.provenance);
        }
    }

    std::stable_sort(sc.members.begin(), sc.members.end(), [](const Member& a, const Member& b) {
        return pos_less(a.span.start, b.span.start);
    });
    return sc;
}

ResolvedType Analysis::resolve_component_type(const ReferenceType& ref, const TypeEntry& context) {
    ResolvedType out;
    const std::string written = ref.name.str();

    if (ref.name.size() > 1) {
        // Qualified: pool lookup only.
        out.trail.push_back(written);
        if (pool_.find(written)) out.qname = written;
        return out;
    }

    const std::string simple = ref.name.segments[0];

    // Inner types of the enclosing definitions, innermost first. The
    // chain includes the context type itself.
    std::vector<const ComponentTypeDecl*> chain = context.lexical_chain;
    chain.push_back(context.decl);
    std::string chain_prefix = context.qname;
    std::vector<std::string> prefixes;
    {
        // Rebuild the qualified prefix of each enclosing decl.
        std::string pkg = context.unit->package_str();
        std::string acc = pkg;
        for (const auto* c : chain) {
            acc = acc.empty() ? c->name : acc + "." + c->name;
            prefixes.push_back(acc);
        }
    }
    for (size_t i = chain.size(); i-- > 0;) {
        for (const auto* inner : chain[i]->inner_types()) {
            if (inner->name == simple) {
                out.qname = prefixes[i] + "." + simple;
                out.trail.push_back(out.qname);
                return out;
            }
        }
    }

    // Same package.
    std::string pkg = context.unit->package_str();
    std::string pkg_qname = pkg.empty() ? simple : pkg + "." + simple;
    out.trail.push_back(pkg_qname);
    if (pool_.find(pkg_qname)) {
        out.qname = pkg_qname;
        return out;
    }

    // Explicit imports.
    for (const auto& imp : context.unit->imports) {
        if (imp.wildcard) continue;
        if (imp.name.last() == simple) {
            std::string qn = imp.name.str();
            out.trail.push_back(qn);
            if (pool_.find(qn)) {
                out.qname = qn;
                out.via_import = &imp;
                mark_import_used(&imp);
                return out;
            }
        }
    }

    // Wildcard imports; a hit through two different wildcards is S003.
    const ImportDecl* hit_import = nullptr;
    std::string hit_qname;
    for (const auto& imp : context.unit->imports) {
        if (!imp.wildcard) continue;
        std::string qn = imp.name.str() + "." + simple;
        out.trail.push_back(qn);
        if (pool_.find(qn)) {
            if (hit_import && hit_qname != qn) {
                out.diags.push_back(make_error(
                    "S003", ref.span,
                    "ambiguous wildcard imports for '" + simple + "': '" +
                        hit_import->name.str() + ".*' and '" + imp.name.str() + ".*'"));
                out.qname.clear();
                return out;
            }
            if (!hit_import) {
                hit_import = &imp;
                hit_qname = qn;
            }
        }
    }
    if (hit_import) {
        out.qname = hit_qname;
        out.via_import = hit_import;
        mark_import_used(hit_import);
    }
    return out;
}

EndpointRef Analysis::resolve_endpoint(const QualifiedName& raw, const std::string& owner_qname) {
    EndpointRef ep;
    ep.raw = &raw;
    ep.span = raw.span;
    const ComponentScope& sc = scope(owner_qname);

    if (raw.size() >= 3) {
        ep.kind = EndpointRef::Kind::Unresolved;
        ep.reason = EndpointRef::Reason::Piercing;
        return ep;
    }
    if (raw.size() == 1) {
        const std::string& name = raw.segments[0];
        if (const PortSym* p = sc.find_port(name)) {
            ep.kind = EndpointRef::Kind::ThisPort;
            ep.port = name;
            ep.direction = p->direction;
            ep.type = p->type;
            return ep;
        }
        if (sc.find_sub(name)) {
            ep.kind = EndpointRef::Kind::Subcomponent;
            ep.sub = name;
            return ep;
        }
        ep.kind = EndpointRef::Kind::Unresolved;
        ep.reason = EndpointRef::Reason::NoSuchName;
        return ep;
    }

    const SubcomponentSym* sub = sc.find_sub(raw.segments[0]);
    if (!sub) {
        ep.kind = EndpointRef::Kind::Unresolved;
        ep.reason = EndpointRef::Reason::NoSuchSubcomponent;
        ep.sub = raw.segments[0];
        return ep;
    }
    ep.sub = sub->name;
    if (sub->type_qname.empty()) {
        // Unresolved subcomponent type: R3/R4 report it; the endpoint
        // degrades to an unresolved port without piling on.
        ep.kind = EndpointRef::Kind::Unresolved;
        ep.reason = EndpointRef::Reason::NoSuchPort;
        ep.port = raw.segments[1];
        return ep;
    }
    types::TypeBinding binding = binding_for(sub->type_qname, sub->type_args);
    auto iface = interface_of(sub->type_qname, binding);
    for (const auto& port : iface) {
        if (port.name == raw.segments[1]) {
            ep.kind = EndpointRef::Kind::SubPort;
            ep.port = port.name;
            ep.direction = port.direction;
            ep.type = port.type;
            return ep;
        }
    }
    ep.kind = EndpointRef::Kind::Unresolved;
    ep.reason = EndpointRef::Reason::NoSuchPort;
    ep.port = raw.segments[1];
    return ep;
}

std::optional<std::string> Analysis::super_of(const std::string& qname) {
    const TypeEntry* entry = pool_.find(qname);
    if (!entry || !entry->decl->super_type) return std::nullopt;
    auto resolved = resolve_component_type(*entry->decl->super_type, *entry);
    if (!resolved.ok()) return std::nullopt;
    return resolved.qname;
}

bool Analysis::extends_reaches(const std::string& from, const std::string& target) {
    std::set<std::string> seen;
    std::string cur = from;
    while (true) {
        if (cur == target) return true;
        if (!seen.insert(cur).second) return false;
        auto next = super_of(cur);
        if (!next) return false;
        cur = *next;
    }
}

const std::vector<PortSig>& Analysis::interface_of(const std::string& qname) {
    auto it = interfaces_.find(qname);
    if (it != interfaces_.end()) return it->second;

    std::vector<PortSig> sigs;
    const TypeEntry* entry = pool_.find(qname);
    if (entry && interfaces_in_progress_.insert(qname).second) {
        const ComponentScope& sc = scope(*entry);
        for (const auto& p : sc.ports) sigs.push_back(PortSig{p.name, p.direction, p.type});
        if (entry->decl->super_type) {
            auto resolved = resolve_component_type(*entry->decl->super_type, *entry);
            if (resolved.ok() && resolved.qname != qname) {
                types::TypeBinding binding =
                    binding_for(resolved.qname, entry->decl->super_type->type_args);
                for (auto& inherited : interface_of(resolved.qname, binding)) {
                    bool shadowed = std::any_of(sigs.begin(), sigs.end(), [&](const PortSig& s) {
                        return s.name == inherited.name;
                    });
                    if (!shadowed) sigs.push_back(inherited);
                }
            }
        }
        interfaces_in_progress_.erase(qname);
    }
    return interfaces_.emplace(qname, std::move(sigs)).first->second;
}

std::vector<PortSig> Analysis::interface_of(const std::string& qname,
                                            const types::TypeBinding& binding) {
    std::vector<PortSig> out = interface_of(qname);
    if (binding.empty()) return out;
    for (auto& sig : out) {
        auto res = types::substitute(sig.type, binding);
        sig.type = res.type;
    }
    return out;
}

types::TypeBinding Analysis::binding_for(const std::string& qname,
                                         const std::vector<TypeExpr>& args) {
    types::TypeBinding binding;
    if (const TypeEntry* entry = pool_.find(qname))
        for (const auto& tp : entry->decl->type_params) binding.params.push_back(tp.name);
    binding.args = args;
    return binding;
}

void Analysis::mark_import_used(const ImportDecl* import) {
    if (import) used_imports_.insert(import);
}

bool Analysis::import_used(const ImportDecl* import) const {
    return used_imports_.count(import) > 0;
}

void Analysis::mark_type_usage(const CompilationUnit& unit, const TypeExpr& type,
                               const std::set<std::string>& in_scope_params) {
    const std::string base = type.base.str();
    if (type.base.size() == 1 && !in_scope_params.count(base)) {
        bool explicit_hit = false;
        for (const auto& imp : unit.imports) {
            if (!imp.wildcard && imp.name.last() == base) {
                mark_import_used(&imp);
                explicit_hit = true;
            }
        }
        // A data type the registry knows but no explicit import names is
        // attributed to the wildcard imports.
        if (!explicit_hit && reg_.has_type(base)) {
            for (const auto& imp : unit.imports)
                if (imp.wildcard) mark_import_used(&imp);
        }
    }
    for (const auto& arg : type.args) mark_type_usage(unit, arg, in_scope_params);
}

}  // namespace montiarc::symbols
