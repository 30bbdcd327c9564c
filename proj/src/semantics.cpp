#include "montiarc/semantics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

namespace montiarc::sem {

using namespace ast;
using symbols::Analysis;
using symbols::TypeEntry;

std::string SemName::wire() const { return parent ? "#this" : name; }

void SemComponent::canonicalize() {
    std::sort(ports.begin(), ports.end(),
              [](const SemPort& a, const SemPort& b) { return a.pname < b.pname; });
    std::sort(subcomponents.begin(), subcomponents.end(),
              [](const SemSubComponent& a, const SemSubComponent& b) { return a.cname < b.cname; });
    std::sort(connectors.begin(), connectors.end());
}

bool SemComponent::operator==(const SemComponent& other) const {
    return ctype == other.ctype && ports == other.ports && connectors == other.connectors &&
           subcomponents == other.subcomponents;
}

// ---- mapping of the elaborated form -----------------------------------------

namespace {

std::string render_ctype(const std::string& qname, const std::vector<TypeExpr>& args) {
    if (args.empty()) return qname;
    std::string s = qname + "<";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) s += ", ";
        s += args[i].str();
    }
    return s + ">";
}

SemComponent map_elab(const elab::ElabComponent& comp, elab::Elaborator& elaborator,
                      const types::TypeBinding& binding) {
    SemComponent out;
    std::vector<TypeExpr> bound_args;
    for (const auto& arg : binding.args) bound_args.push_back(arg);
    out.ctype = render_ctype(comp.qname, bound_args);

    for (const auto& p : comp.ports) {
        SemPort port;
        port.direction = p.direction;
        port.ptype = types::substitute(p.type, binding).type.str();
        port.pname = p.name;
        out.ports.push_back(std::move(port));
    }
    for (const auto& s : comp.subs) {
        const elab::ElabComponent* sub_type = elaborator.elaborate(s.type_qname);
        if (!sub_type) continue;
        std::vector<TypeExpr> sub_args;
        for (const auto& arg : s.type_args) sub_args.push_back(types::substitute(arg, binding).type);
        types::TypeBinding sub_binding =
            elaborator.analysis().binding_for(s.type_qname, sub_args);
        SemSubComponent ssc;
        ssc.cname = s.name;
        ssc.component = map_elab(*sub_type, elaborator, sub_binding);
        out.subcomponents.push_back(std::move(ssc));
    }
    for (const auto& c : comp.connectors) {
        SemConnector conn;
        conn.src_cname = c.source.this_port() ? SemName::this_component() : SemName::sub(c.source.sub);
        conn.src_pname = c.source.port;
        conn.dst_cname = c.target.this_port() ? SemName::this_component() : SemName::sub(c.target.sub);
        conn.dst_pname = c.target.port;
        out.connectors.push_back(std::move(conn));
    }
    out.canonicalize();
    return out;
}

}  // namespace

SemComponent map_to_domain(const elab::ElabComponent& root, elab::Elaborator& elaborator) {
    types::TypeBinding empty;
    return map_elab(root, elaborator, empty);
}

// ---- direct mapping of the unelaborated form ----------------------------------
//
// Recomputes default naming, auto-instantiation, inheritance, connector
// completion and autoconnect pairing straight off the syntax tree. Shares
// only the name resolver and the type primitives with the main route.

namespace {

struct DirectPort {
    std::string name;
    PortDirection direction;
    TypeExpr type;
};

struct DirectSub {
    std::string name;
    std::string type_qname;
    std::vector<TypeExpr> type_args;
};

struct DirectEndpoint {
    bool this_port = false;
    std::string sub;
    std::string port;
    std::string key() const { return this_port ? port : sub + "." + port; }
    bool operator==(const DirectEndpoint& o) const {
        return this_port == o.this_port && sub == o.sub && port == o.port;
    }
};

struct DirectConn {
    DirectEndpoint src, dst;
};

struct DirectStructure {
    std::vector<DirectPort> ports;
    std::vector<DirectSub> subs;
    std::vector<DirectConn> connectors;
    std::set<std::string> params;
};

class DirectMapper {
public:
    explicit DirectMapper(Analysis& analysis) : analysis_(analysis) {}

    SemComponent map(const std::string& qname, const types::TypeBinding& binding) {
        const DirectStructure& st = structure(qname);
        SemComponent out;
        out.ctype = render_ctype(qname, binding.args);
        for (const auto& p : st.ports)
            out.ports.push_back(
                SemPort{p.direction, types::substitute(p.type, binding).type.str(), p.name});
        for (const auto& s : st.subs) {
            std::vector<TypeExpr> args;
            for (const auto& a : s.type_args) args.push_back(types::substitute(a, binding).type);
            types::TypeBinding sub_binding = analysis_.binding_for(s.type_qname, args);
            if (!analysis_.pool().find(s.type_qname)) continue;
            SemSubComponent ssc;
            ssc.cname = s.name;
            ssc.component = map(s.type_qname, sub_binding);
            out.subcomponents.push_back(std::move(ssc));
        }
        for (const auto& c : st.connectors) {
            SemConnector conn;
            conn.src_cname = c.src.this_port ? SemName::this_component() : SemName::sub(c.src.sub);
            conn.src_pname = c.src.port;
            conn.dst_cname = c.dst.this_port ? SemName::this_component() : SemName::sub(c.dst.sub);
            conn.dst_pname = c.dst.port;
            out.connectors.push_back(std::move(conn));
        }
        out.canonicalize();
        return out;
    }

private:
    // Ports of a type including inherited ones, parameters opaque.
    std::vector<DirectPort> ports_of(const std::string& qname, const std::vector<TypeExpr>& args) {
        const DirectStructure& st = structure(qname);
        types::TypeBinding binding = analysis_.binding_for(qname, args);
        std::vector<DirectPort> out;
        for (const auto& p : st.ports) {
            DirectPort q = p;
            q.type = types::substitute(p.type, binding).type;
            out.push_back(std::move(q));
        }
        return out;
    }

    const DirectStructure& structure(const std::string& qname) {
        auto it = memo_.find(qname);
        if (it != memo_.end()) return it->second;
        DirectStructure st;
        const TypeEntry* entry = analysis_.pool().find(qname);
        if (entry && guard_.insert(qname).second) {
            build(st, *entry);
            guard_.erase(qname);
        }
        return memo_.emplace(qname, std::move(st)).first->second;
    }

    void build(DirectStructure& st, const TypeEntry& entry) {
        const ComponentTypeDecl& decl = *entry.decl;
        for (const auto& tp : decl.type_params) st.params.insert(tp.name);

        // Inherited members first, supertype parameters substituted.
        if (decl.super_type) {
            auto resolved = analysis_.resolve_component_type(*decl.super_type, entry);
            if (resolved.ok() && resolved.qname != entry.qname) {
                const DirectStructure& sup = structure(resolved.qname);
                types::TypeBinding binding =
                    analysis_.binding_for(resolved.qname, decl.super_type->type_args);
                for (const auto& p : sup.ports) {
                    DirectPort q = p;
                    q.type = types::substitute(p.type, binding).type;
                    st.ports.push_back(std::move(q));
                }
                for (const auto& s : sup.subs) {
                    DirectSub t = s;
                    for (auto& a : t.type_args) a = types::substitute(a, binding).type;
                    st.subs.push_back(std::move(t));
                }
                for (const auto& c : sup.connectors) st.connectors.push_back(c);
            }
        }

        // Own ports with default names where omitted.
        for (const auto& element : decl.elements) {
            if (const auto* ports = std::get_if<PortInterfaceDecl>(&element)) {
                for (const auto& p : ports->ports) {
                    DirectPort q;
                    q.direction = p.direction;
                    q.type = p.type;
                    if (p.name) {
                        q.name = *p.name;
                    } else {
                        bool is_param = p.type.base.size() == 1 &&
                                        st.params.count(p.type.base.segments[0]) > 0;
                        auto derived = is_param ? std::nullopt : types::default_name(p.type);
                        if (!derived) continue;
                        q.name = *derived;
                    }
                    st.ports.push_back(std::move(q));
                }
            } else if (const auto* sub = std::get_if<SubComponentDecl>(&element)) {
                auto resolved = analysis_.resolve_component_type(sub->type, entry);
                if (!resolved.ok()) continue;
                if (sub->instances.empty()) {
                    auto derived = types::default_name_for(sub->type.name.last());
                    if (!derived) continue;
                    st.subs.push_back(DirectSub{*derived, resolved.qname, sub->type.type_args});
                } else {
                    for (const auto& inst : sub->instances)
                        st.subs.push_back(DirectSub{inst.name, resolved.qname, sub->type.type_args});
                }
            } else if (const auto* inner = std::get_if<std::unique_ptr<ComponentTypeDecl>>(&element)) {
                if ((*inner)->instance_name)
                    st.subs.push_back(DirectSub{*(*inner)->instance_name,
                                                entry.qname + "." + (*inner)->name,
                                                {}});
            }
        }

        // Auto-instantiation of parameterless inner types.
        if (decl.autoinstantiate_mode() == AutoInstantiateMode::On) {
            for (const auto* inner : decl.inner_types()) {
                if (!inner->type_params.empty() || !inner->config_params.empty()) continue;
                if (inner->instance_name) continue;
                std::string inner_qname = entry.qname + "." + inner->name;
                bool referenced = std::any_of(st.subs.begin(), st.subs.end(),
                                              [&](const DirectSub& s) {
                                                  return s.type_qname == inner_qname;
                                              });
                if (referenced) continue;
                auto derived = types::default_name_for(inner->name);
                if (!derived) continue;
                st.subs.push_back(DirectSub{*derived, inner_qname, {}});
            }
        }

        build_connectors(st, entry);
    }

    const DirectPort* find_port(const DirectStructure& st, const std::string& name) {
        for (const auto& p : st.ports)
            if (p.name == name) return &p;
        return nullptr;
    }

    const DirectSub* find_sub(const DirectStructure& st, const std::string& name) {
        for (const auto& s : st.subs)
            if (s.name == name) return &s;
        return nullptr;
    }

    void build_connectors(DirectStructure& st, const TypeEntry& entry) {
        const ComponentTypeDecl& decl = *entry.decl;
        auto compatible = [&](const TypeExpr& a, const TypeExpr& b) {
            return types::is_subtype(a, b, analysis_.registry(), st.params).yes();
        };

        struct Pend {
            std::optional<DirectEndpoint> src_port;
            std::string src_sub;
            std::optional<DirectEndpoint> dst_port;
            std::string dst_sub;
        };
        std::vector<Pend> pending;

        auto classify = [&](const QualifiedName& raw, bool as_source,
                            std::optional<DirectEndpoint>& port_out, std::string& sub_out) {
            if (raw.size() == 1) {
                const std::string& n = raw.segments[0];
                if (const DirectPort* p = find_port(st, n)) {
                    bool ok = as_source ? p->direction == PortDirection::In
                                        : p->direction == PortDirection::Out;
                    if (!ok) return false;
                    port_out = DirectEndpoint{true, "", n};
                    return true;
                }
                if (find_sub(st, n)) {
                    sub_out = n;
                    return true;
                }
                return false;
            }
            if (raw.size() == 2) {
                const DirectSub* s = find_sub(st, raw.segments[0]);
                if (!s) return false;
                for (const auto& p : ports_of(s->type_qname, s->type_args)) {
                    if (p.name != raw.segments[1]) continue;
                    bool ok = as_source ? p.direction == PortDirection::Out
                                        : p.direction == PortDirection::In;
                    if (!ok) return false;
                    port_out = DirectEndpoint{false, s->name, p.name};
                    return true;
                }
            }
            return false;
        };

        for (const auto& element : decl.elements) {
            if (const auto* conn = std::get_if<ConnectorDecl>(&element)) {
                std::optional<DirectEndpoint> src_port;
                std::string src_sub;
                if (!classify(conn->source, true, src_port, src_sub)) continue;
                for (const auto& t : conn->targets) {
                    Pend p;
                    p.src_port = src_port;
                    p.src_sub = src_sub;
                    if (!classify(t, false, p.dst_port, p.dst_sub)) continue;
                    pending.push_back(std::move(p));
                }
            } else if (const auto* sub = std::get_if<SubComponentDecl>(&element)) {
                for (const auto& inst : sub->instances) {
                    const DirectSub* bound = find_sub(st, inst.name);
                    if (!bound) continue;
                    for (const auto& sc : inst.connectors) {
                        if (sc.source.size() != 1) continue;
                        const DirectPort* src_sig = nullptr;
                        auto iface = ports_of(bound->type_qname, bound->type_args);
                        for (const auto& p : iface)
                            if (p.name == sc.source.segments[0]) src_sig = &p;
                        if (!src_sig || src_sig->direction != PortDirection::Out) continue;
                        for (const auto& t : sc.targets) {
                            Pend p;
                            p.src_port = DirectEndpoint{false, inst.name, sc.source.segments[0]};
                            if (!classify(t, false, p.dst_port, p.dst_sub)) continue;
                            pending.push_back(std::move(p));
                        }
                    }
                }
            }
        }

        std::set<std::string> used_src, used_dst;
        for (const auto& p : pending) {
            if (p.src_port && p.dst_port) {
                used_src.insert(p.src_port->key());
                used_dst.insert(p.dst_port->key());
            }
        }
        auto type_of = [&](const DirectEndpoint& ep) -> std::optional<TypeExpr> {
            if (ep.this_port) {
                const DirectPort* p = find_port(st, ep.port);
                if (!p) return std::nullopt;
                return p->type;
            }
            const DirectSub* s = find_sub(st, ep.sub);
            if (!s) return std::nullopt;
            for (const auto& p : ports_of(s->type_qname, s->type_args))
                if (p.name == ep.port) return p.type;
            return std::nullopt;
        };
        auto emit = [&](const DirectEndpoint& a, const DirectEndpoint& b) {
            used_src.insert(a.key());
            used_dst.insert(b.key());
            st.connectors.push_back(DirectConn{a, b});
        };

        auto sub_ports = [&](const std::string& name, PortDirection dir) {
            std::vector<DirectPort> out;
            const DirectSub* s = find_sub(st, name);
            if (!s) return out;
            for (const auto& p : ports_of(s->type_qname, s->type_args))
                if (p.direction == dir) out.push_back(p);
            return out;
        };

        for (const auto& p : pending) {
            if (p.src_port && p.dst_port) {
                st.connectors.push_back(DirectConn{*p.src_port, *p.dst_port});
            } else if (p.src_port && !p.dst_sub.empty()) {
                auto stype = type_of(*p.src_port);
                if (!stype) continue;
                std::vector<DirectEndpoint> cands;
                for (const auto& q : sub_ports(p.dst_sub, PortDirection::In)) {
                    DirectEndpoint ep{false, p.dst_sub, q.name};
                    if (used_dst.count(ep.key())) continue;
                    if (compatible(*stype, q.type)) cands.push_back(ep);
                }
                if (cands.size() == 1) emit(*p.src_port, cands[0]);
            } else if (!p.src_sub.empty() && p.dst_port) {
                auto dtype = type_of(*p.dst_port);
                if (!dtype) continue;
                std::vector<DirectEndpoint> cands;
                for (const auto& q : sub_ports(p.src_sub, PortDirection::Out)) {
                    DirectEndpoint ep{false, p.src_sub, q.name};
                    if (used_src.count(ep.key())) continue;
                    if (compatible(q.type, *dtype)) cands.push_back(ep);
                }
                if (cands.size() == 1) emit(cands[0], *p.dst_port);
            } else if (!p.src_sub.empty() && !p.dst_sub.empty()) {
                for (const auto& sp : sub_ports(p.src_sub, PortDirection::Out)) {
                    DirectEndpoint sep{false, p.src_sub, sp.name};
                    if (used_src.count(sep.key())) continue;
                    std::vector<DirectEndpoint> cands;
                    for (const auto& tp : sub_ports(p.dst_sub, PortDirection::In)) {
                        DirectEndpoint tep{false, p.dst_sub, tp.name};
                        if (used_dst.count(tep.key())) continue;
                        auto ttype = type_of(tep);
                        if (ttype && compatible(sp.type, *ttype)) cands.push_back(tep);
                    }
                    if (cands.size() == 1) emit(sep, cands[0]);
                }
            }
        }

        // Autoconnect completion, recomputed on the flat structure.
        AutoConnectMode mode = decl.autoconnect_mode();
        if (mode == AutoConnectMode::Off) return;

        std::set<std::string> connected_dst;
        for (const auto& c : st.connectors) connected_dst.insert(c.dst.key());

        struct Cand {
            DirectEndpoint ep;
            std::string name;
            TypeExpr type;
        };
        std::vector<Cand> sources, targets;
        for (const auto& p : st.ports) {
            DirectEndpoint ep{true, "", p.name};
            if (p.direction == PortDirection::In) sources.push_back({ep, p.name, p.type});
            else if (!connected_dst.count(ep.key())) targets.push_back({ep, p.name, p.type});
        }
        for (const auto& s : st.subs) {
            for (const auto& p : ports_of(s.type_qname, s.type_args)) {
                DirectEndpoint ep{false, s.name, p.name};
                if (p.direction == PortDirection::Out) sources.push_back({ep, p.name, p.type});
                else if (!connected_dst.count(ep.key())) targets.push_back({ep, p.name, p.type});
            }
        }
        auto pair_ok = [&](const Cand& s, const Cand& t) {
            if (s.ep.this_port && t.ep.this_port) return false;
            return compatible(s.type, t.type);
        };
        if (mode == AutoConnectMode::Port) {
            for (const auto& t : targets) {
                std::vector<const Cand*> matching;
                for (const auto& s : sources)
                    if (s.name == t.name && pair_ok(s, t)) matching.push_back(&s);
                if (matching.size() == 1)
                    st.connectors.push_back(DirectConn{matching[0]->ep, t.ep});
            }
        } else {
            std::map<size_t, std::vector<size_t>> s_of_t, t_of_s;
            for (size_t ti = 0; ti < targets.size(); ++ti)
                for (size_t si = 0; si < sources.size(); ++si)
                    if (pair_ok(sources[si], targets[ti])) {
                        s_of_t[ti].push_back(si);
                        t_of_s[si].push_back(ti);
                    }
            for (size_t ti = 0; ti < targets.size(); ++ti) {
                auto it = s_of_t.find(ti);
                if (it == s_of_t.end() || it->second.size() != 1) continue;
                size_t si = it->second.front();
                if (t_of_s[si].size() != 1) continue;
                st.connectors.push_back(DirectConn{sources[si].ep, targets[ti].ep});
            }
        }
    }

    Analysis& analysis_;
    std::map<std::string, DirectStructure> memo_;
    std::set<std::string> guard_;
};

}  // namespace

SemComponent map_montiarc(const std::string& root_qname, Analysis& analysis) {
    DirectMapper mapper(analysis);
    return mapper.map(root_qname, types::TypeBinding{});
}

// ---- domain validation ---------------------------------------------------------

namespace {

void collect(const SemComponent& c, std::vector<const SemComponent*>& out) {
    out.push_back(&c);
    for (const auto& s : c.subcomponents) collect(s.component, out);
}

SourceSpan domain_span() { return SourceSpan{"<domain>", {0, 0}, {0, 0}}; }

}  // namespace

Diagnostics validate_domain(const SemComponent& root) {
    Diagnostics out;
    std::vector<const SemComponent*> all;
    collect(root, all);

    // D1: equal component types imply equal structure.
    std::map<std::string, const SemComponent*> by_type;
    for (const auto* c : all) {
        auto [it, inserted] = by_type.try_emplace(c->ctype, c);
        if (!inserted && !(*it->second == *c)) {
            out.push_back(make_error("D1", domain_span(),
                                     "components with type '" + c->ctype +
                                         "' differ in structure"));
        }
    }

    for (const auto* c : all) {
        // D2: port names unique.
        std::set<std::string> pnames;
        for (const auto& p : c->ports)
            if (!pnames.insert(p.pname).second)
                out.push_back(make_error("D2", domain_span(),
                                         "duplicate port name '" + p.pname + "' in component '" +
                                             c->ctype + "'"));
        // D3: subcomponent names unique and distinct from the parent token.
        std::set<std::string> cnames;
        for (const auto& s : c->subcomponents) {
            if (s.cname == "#this")
                out.push_back(make_error("D3", domain_span(),
                                         "subcomponent name collides with the parent token in '" +
                                             c->ctype + "'"));
            if (!cnames.insert(s.cname).second)
                out.push_back(make_error("D3", domain_span(),
                                         "duplicate subcomponent name '" + s.cname +
                                             "' in component '" + c->ctype + "'"));
        }
        // D4: endpoints exist with the correct direction.
        auto port_of = [](const SemComponent& comp, const std::string& pname) -> const SemPort* {
            for (const auto& p : comp.ports)
                if (p.pname == pname) return &p;
            return nullptr;
        };
        auto sub_of = [&](const std::string& cname) -> const SemComponent* {
            for (const auto& s : c->subcomponents)
                if (s.cname == cname) return &s.component;
            return nullptr;
        };
        for (const auto& k : c->connectors) {
            bool ok = true;
            if (k.src_cname.parent) {
                const SemPort* p = port_of(*c, k.src_pname);
                ok = p && p->direction == PortDirection::In;
            } else {
                const SemComponent* s = sub_of(k.src_cname.name);
                const SemPort* p = s ? port_of(*s, k.src_pname) : nullptr;
                ok = p && p->direction == PortDirection::Out;
            }
            if (!ok) {
                out.push_back(make_error("D4", domain_span(),
                                         "connector source (" + k.src_cname.wire() + ", " +
                                             k.src_pname + ") is invalid in component '" +
                                             c->ctype + "'"));
            }
            ok = true;
            if (k.dst_cname.parent) {
                const SemPort* p = port_of(*c, k.dst_pname);
                ok = p && p->direction == PortDirection::Out;
            } else {
                const SemComponent* s = sub_of(k.dst_cname.name);
                const SemPort* p = s ? port_of(*s, k.dst_pname) : nullptr;
                ok = p && p->direction == PortDirection::In;
            }
            if (!ok) {
                out.push_back(make_error("D4", domain_span(),
                                         "connector target (" + k.dst_cname.wire() + ", " +
                                             k.dst_pname + ") is invalid in component '" +
                                             c->ctype + "'"));
            }
        }
        // D5: every receiving port reads from at most one connector.
        std::map<std::pair<SemName, std::string>, const SemConnector*> receivers;
        for (const auto& k : c->connectors) {
            auto key = std::make_pair(k.dst_cname, k.dst_pname);
            auto [it, inserted] = receivers.try_emplace(key, &k);
            if (!inserted && !(*it->second == k)) {
                out.push_back(make_error("D5", domain_span(),
                                         "port (" + k.dst_cname.wire() + ", " + k.dst_pname +
                                             ") reads from more than one connector in component '" +
                                             c->ctype + "'"));
            }
        }
    }
    normalize(out);
    return out;
}

// ---- canonical JSON -------------------------------------------------------------

namespace {

nlohmann::ordered_json to_json(const SemComponent& c) {
    nlohmann::ordered_json j;
    j["ctype"] = c.ctype;
    j["ports"] = nlohmann::ordered_json::array();
    for (const auto& p : c.ports) {
        nlohmann::ordered_json pj;
        pj["dir"] = p.direction == PortDirection::In ? "in" : "out";
        pj["ptype"] = p.ptype;
        pj["pname"] = p.pname;
        j["ports"].push_back(std::move(pj));
    }
    j["subcomponents"] = nlohmann::ordered_json::array();
    for (const auto& s : c.subcomponents) {
        nlohmann::ordered_json sj;
        sj["cname"] = s.cname;
        sj["component"] = to_json(s.component);
        j["subcomponents"].push_back(std::move(sj));
    }
    j["connectors"] = nlohmann::ordered_json::array();
    for (const auto& k : c.connectors) {
        nlohmann::ordered_json kj;
        kj["src_cname"] = k.src_cname.wire();
        kj["src_pname"] = k.src_pname;
        kj["dst_cname"] = k.dst_cname.wire();
        kj["dst_pname"] = k.dst_pname;
        j["connectors"].push_back(std::move(kj));
    }
    return j;
}

}  // namespace

std::string export_json(const SemComponent& root) { return to_json(root).dump(); }

}  // namespace montiarc::sem
