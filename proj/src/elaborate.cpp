#include "montiarc/elaborate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace montiarc::elab {

using namespace ast;
using symbols::Analysis;
using symbols::ComponentScope;
using symbols::EndpointRef;
using symbols::PortSig;
using symbols::TypeEntry;

const ElabPort* ElabComponent::find_port(const std::string& n) const {
    for (const auto& p : ports)
        if (p.name == n) return &p;
    return nullptr;
}

const ElabSub* ElabComponent::find_sub(const std::string& n) const {
    for (const auto& s : subs)
        if (s.name == n) return &s;
    return nullptr;
}

const ElabComponent* ElabComponent::find_inner(const std::string& simple_name) const {
    for (const auto& i : inners)
        if (i.name == simple_name) return &i;
    return nullptr;
}

// ---- structural equality ---------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, std::string>> connector_keys(const ElabComponent& c) {
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& k : c.connectors) keys.emplace_back(k.source.str(), k.target.str());
    std::sort(keys.begin(), keys.end());
    return keys;
}

}  // namespace

bool structurally_equal(const ElabComponent& a, const ElabComponent& b) {
    if (a.name != b.name || a.type_params != b.type_params) return false;
    if (a.timing != b.timing) return false;
    if (a.config_params.size() != b.config_params.size()) return false;
    for (size_t i = 0; i < a.config_params.size(); ++i)
        if (a.config_params[i].name != b.config_params[i].name ||
            a.config_params[i].type.str() != b.config_params[i].type.str())
            return false;

    auto port_key = [](const ElabPort& p) {
        return std::make_tuple(p.name, p.direction, p.type.str());
    };
    std::vector<std::tuple<std::string, PortDirection, std::string>> pa, pb;
    for (const auto& p : a.ports) pa.push_back(port_key(p));
    for (const auto& p : b.ports) pb.push_back(port_key(p));
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    if (pa != pb) return false;

    auto sub_key = [](const ElabSub& s) {
        std::string args;
        for (const auto& t : s.type_args) args += "<" + t.str() + ">";
        std::string cfg;
        for (const auto& c : s.config_args) cfg += "(" + c.str() + ")";
        return std::make_tuple(s.name, s.type_qname, args, cfg);
    };
    std::vector<std::tuple<std::string, std::string, std::string, std::string>> sa, sb;
    for (const auto& s : a.subs) sa.push_back(sub_key(s));
    for (const auto& s : b.subs) sb.push_back(sub_key(s));
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;

    if (connector_keys(a) != connector_keys(b)) return false;

    if (a.invariants.size() != b.invariants.size()) return false;
    auto inv_key = [](const InvariantDecl& i) {
        return std::make_tuple(i.name, i.kind.value_or(""), trim(i.body));
    };
    std::vector<std::tuple<std::string, std::string, std::string>> ia, ib;
    for (const auto& i : a.invariants) ia.push_back(inv_key(i));
    for (const auto& i : b.invariants) ib.push_back(inv_key(i));
    std::sort(ia.begin(), ia.end());
    std::sort(ib.begin(), ib.end());
    if (ia != ib) return false;

    if (a.inners.size() != b.inners.size()) return false;
    auto by_name = [](const ElabComponent& x, const ElabComponent& y) { return x.name < y.name; };
    std::vector<const ElabComponent*> na, nb;
    for (const auto& i : a.inners) na.push_back(&i);
    for (const auto& i : b.inners) nb.push_back(&i);
    std::sort(na.begin(), na.end(), [](auto* x, auto* y) { return x->name < y->name; });
    std::sort(nb.begin(), nb.end(), [](auto* x, auto* y) { return x->name < y->name; });
    (void)by_name;
    for (size_t i = 0; i < na.size(); ++i)
        if (!structurally_equal(*na[i], *nb[i])) return false;
    return true;
}

// ---- Elaborator -------------------------------------------------------------

Elaborator::Elaborator(Analysis& analysis) : analysis_(analysis) {}

Diagnostics Elaborator::take_diagnostics() {
    Diagnostics out = std::move(diags_);
    diags_.clear();
    return out;
}

const ElabComponent* Elaborator::elaborate(const std::string& qname) {
    auto it = cache_.find(qname);
    if (it != cache_.end()) return it->second.get();
    const TypeEntry* entry = analysis_.pool().find(qname);
    if (!entry) return nullptr;
    if (!in_progress_.insert(qname).second) return nullptr;  // reference cycle guard
    auto built = std::make_unique<ElabComponent>(build(*entry));
    in_progress_.erase(qname);
    return cache_.emplace(qname, std::move(built)).first->second.get();
}

std::vector<PortSig> Elaborator::interface_of(const std::string& qname,
                                              const std::vector<TypeExpr>& type_args) {
    return analysis_.interface_of(qname, analysis_.binding_for(qname, type_args));
}

ElabComponent Elaborator::build(const TypeEntry& entry) {
    const ComponentTypeDecl& decl = *entry.decl;
    ElabComponent out;
    out.name = decl.name;
    out.qname = entry.qname;
    out.span = decl.span;
    for (const auto& tp : decl.type_params) out.type_params.push_back(tp.name);
    out.config_params = decl.config_params;
    out.timing = decl.timing_mode();
    out.timing_declared = decl.timing_declared();
    for (const auto& e : decl.elements)
        if (const auto* inv = std::get_if<InvariantDecl>(&e)) out.invariants.push_back(*inv);

    // Inner types are elaborated with their own configuration modes.
    for (const auto* inner : decl.inner_types()) {
        const ElabComponent* e = elaborate(entry.qname + "." + inner->name);
        if (e) out.inners.push_back(*e);
    }

    flatten_inheritance(out, entry);

    // Effective ports and subcomponents: explicit names, default names,
    // and auto-instantiated inner references.
    const ComponentScope& sc = analysis_.scope(entry);
    for (const auto& p : sc.ports) {
        ElabPort port;
        port.name = p.name;
        port.direction = p.direction;
        port.type = p.type;
        port.provenance = p.provenance;
        port.span = p.span;
        out.ports.push_back(std::move(port));
    }
    for (const auto& s : sc.subs) {
        ElabSub sub;
        sub.name = s.name;
        sub.type_qname = s.type_qname;
        sub.type_args = s.type_args;
        if (s.decl) sub.config_args = s.decl->config_args;
        sub.provenance = s.provenance;
        sub.span = s.span;
        out.subs.push_back(std::move(sub));
    }

    expand_subcomponent_endpoints(out, desugar_connectors(out, entry));
    autoconnect(out, decl.autoconnect_mode());
    return out;
}

void Elaborator::flatten_inheritance(ElabComponent& out, const TypeEntry& entry) {
    const ComponentTypeDecl& decl = *entry.decl;
    if (!decl.super_type) return;
    auto resolved = analysis_.resolve_component_type(*decl.super_type, entry);
    if (!resolved.ok() || resolved.qname == entry.qname) return;
    const ElabComponent* sup = elaborate(resolved.qname);
    if (!sup) return;  // inheritance cycle; R11 reports it

    types::TypeBinding binding = analysis_.binding_for(resolved.qname, decl.super_type->type_args);
    auto substituted = [&](const TypeExpr& t) { return types::substitute(t, binding).type; };

    for (const auto& p : sup->ports) {
        ElabPort port = p;
        port.type = substituted(p.type);
        port.provenance = Provenance::Inherited;
        port.span = decl.super_type->span;
        out.ports.push_back(std::move(port));
    }
    for (const auto& s : sup->subs) {
        ElabSub sub = s;
        for (auto& targ : sub.type_args) targ = substituted(targ);
        sub.provenance = Provenance::Inherited;
        sub.span = decl.super_type->span;
        out.subs.push_back(std::move(sub));
    }
    for (const auto& c : sup->connectors) {
        ElabConnector conn = c;
        conn.provenance = Provenance::Inherited;
        conn.span = decl.super_type->span;
        out.connectors.push_back(std::move(conn));
    }
    for (const auto& i : sup->inners) out.inners.push_back(i);
}

// Connector whose endpoints may still name a bare subcomponent.
struct Elaborator::Pending {
    std::optional<ElabEndpoint> src_port;  // set when the source is port-level
    std::string src_sub;                   // set when the source names a subcomponent
    std::optional<ElabEndpoint> dst_port;
    std::string dst_sub;
    Provenance provenance = Provenance::Explicit;
    SourceSpan span;
};

std::vector<Elaborator::Pending> Elaborator::desugar_connectors(ElabComponent& out,
                                                                const TypeEntry& entry) {
    const ComponentTypeDecl& decl = *entry.decl;
    std::vector<Pending> pending;

    auto classify = [&](const QualifiedName& raw, bool as_source,
                        std::optional<ElabEndpoint>& port_out, std::string& sub_out) -> bool {
        EndpointRef ep = analysis_.resolve_endpoint(raw, entry.qname);
        switch (ep.kind) {
            case EndpointRef::Kind::ThisPort:
                if (as_source && ep.direction != PortDirection::In) return false;
                if (!as_source && ep.direction != PortDirection::Out) return false;
                port_out = ElabEndpoint{"", ep.port};
                return true;
            case EndpointRef::Kind::SubPort:
                if (as_source && ep.direction != PortDirection::Out) return false;
                if (!as_source && ep.direction != PortDirection::In) return false;
                port_out = ElabEndpoint{ep.sub, ep.port};
                return true;
            case EndpointRef::Kind::Subcomponent:
                sub_out = ep.sub;
                return true;
            case EndpointRef::Kind::Unresolved:
                return false;
        }
        return false;
    };

    for (const auto& element : decl.elements) {
        if (const auto* conn = std::get_if<ConnectorDecl>(&element)) {
            std::optional<ElabEndpoint> src_port;
            std::string src_sub;
            if (!classify(conn->source, true, src_port, src_sub)) continue;
            for (const auto& target : conn->targets) {
                Pending p;
                p.src_port = src_port;
                p.src_sub = src_sub;
                p.provenance = Provenance::Explicit;
                p.span = conn->span;
                if (!classify(target, false, p.dst_port, p.dst_sub)) continue;
                pending.push_back(std::move(p));
            }
        } else if (const auto* sub = std::get_if<SubComponentDecl>(&element)) {
            for (const auto& inst : sub->instances) {
                for (const auto& sc : inst.connectors) {
                    if (sc.source.size() != 1) continue;  // CO2 reported in checks
                    auto iface = interface_of(out.find_sub(inst.name) ? out.find_sub(inst.name)->type_qname
                                                                      : std::string(),
                                              sub->type.type_args);
                    const PortSig* src_sig = nullptr;
                    for (const auto& s : iface)
                        if (s.name == sc.source.segments[0]) src_sig = &s;
                    if (!src_sig || src_sig->direction != PortDirection::Out) continue;  // CO2/R7
                    for (const auto& target : sc.targets) {
                        Pending p;
                        p.src_port = ElabEndpoint{inst.name, sc.source.segments[0]};
                        p.provenance = Provenance::Desugared;
                        p.span = sc.span;
                        if (!classify(target, false, p.dst_port, p.dst_sub)) continue;
                        pending.push_back(std::move(p));
                    }
                }
            }
        }
    }

    return pending;
}

namespace {

std::string render_candidates(const std::vector<ElabEndpoint>& eps) {
    std::string s;
    for (size_t i = 0; i < eps.size(); ++i) {
        if (i) s += ", ";
        s += eps[i].str();
    }
    return s;
}

}  // namespace

void Elaborator::expand_subcomponent_endpoints(ElabComponent& out, std::vector<Pending> pending_) {
    std::set<std::pair<std::string, std::string>> used_target;  // (sub, port)
    std::set<std::pair<std::string, std::string>> used_source;

    auto mark = [&](const ElabConnector& c) {
        used_source.insert({c.source.sub, c.source.port});
        used_target.insert({c.target.sub, c.target.port});
    };
    for (const auto& c : out.connectors) mark(c);  // inherited connectors count

    // Pre-claim endpoints of fully port-level pendings so expansions never
    // steal an explicitly wired port.
    for (const auto& p : pending_)
        if (p.src_port && p.dst_port) {
            used_source.insert({p.src_port->sub, p.src_port->port});
            used_target.insert({p.dst_port->sub, p.dst_port->port});
        }

    auto port_type = [&](const ElabEndpoint& ep) -> std::optional<TypeExpr> {
        if (ep.this_port()) {
            const ElabPort* p = out.find_port(ep.port);
            if (!p) return std::nullopt;
            return p->type;
        }
        const ElabSub* s = out.find_sub(ep.sub);
        if (!s) return std::nullopt;
        for (const auto& sig : interface_of(s->type_qname, s->type_args))
            if (sig.name == ep.port) return sig.type;
        return std::nullopt;
    };

    std::set<std::string> own_params(out.type_params.begin(), out.type_params.end());
    auto compatible = [&](const TypeExpr& src, const TypeExpr& dst) {
        return types::is_subtype(src, dst, analysis_.registry(), own_params).yes();
    };

    auto sub_out_ports = [&](const std::string& name) {
        std::vector<std::pair<std::string, TypeExpr>> res;
        const ElabSub* s = out.find_sub(name);
        if (!s) return res;
        for (const auto& sig : interface_of(s->type_qname, s->type_args))
            if (sig.direction == PortDirection::Out) res.emplace_back(sig.name, sig.type);
        return res;
    };
    auto sub_in_ports = [&](const std::string& name) {
        std::vector<std::pair<std::string, TypeExpr>> res;
        const ElabSub* s = out.find_sub(name);
        if (!s) return res;
        for (const auto& sig : interface_of(s->type_qname, s->type_args))
            if (sig.direction == PortDirection::In) res.emplace_back(sig.name, sig.type);
        return res;
    };

    auto warn = [&](const SourceSpan& span, const std::string& msg) {
        diags_.push_back(make_warning("CO3", span, msg));
    };

    auto emit = [&](const ElabEndpoint& src, const ElabEndpoint& dst, Provenance prov,
                    const SourceSpan& span) {
        ElabConnector c;
        c.source = src;
        c.target = dst;
        c.provenance = prov;
        c.span = span;
        used_source.insert({src.sub, src.port});
        used_target.insert({dst.sub, dst.port});
        out.connectors.push_back(std::move(c));
    };

    for (const auto& p : pending_) {
        if (p.src_port && p.dst_port) {
            emit(*p.src_port, *p.dst_port, p.provenance, p.span);
            continue;
        }
        if (p.src_port && !p.dst_sub.empty()) {
            // Port-level source into a bare subcomponent: unique compatible
            // unconnected incoming port required.
            auto src_type = port_type(*p.src_port);
            if (!src_type) continue;
            std::vector<ElabEndpoint> candidates;
            for (const auto& [name, type] : sub_in_ports(p.dst_sub)) {
                if (used_target.count({p.dst_sub, name})) continue;
                if (compatible(*src_type, type)) candidates.push_back(ElabEndpoint{p.dst_sub, name});
            }
            if (candidates.size() == 1) {
                emit(*p.src_port, candidates[0], p.provenance, p.span);
            } else if (candidates.size() > 1) {
                warn(p.span, "no unique compatible incoming port on subcomponent '" + p.dst_sub +
                                 "' for '" + p.src_port->str() + "' (candidates: " +
                                 render_candidates(candidates) + "); no connection created");
            }
            continue;
        }
        if (!p.src_sub.empty() && p.dst_port) {
            auto dst_type = port_type(*p.dst_port);
            if (!dst_type) continue;
            std::vector<ElabEndpoint> candidates;
            for (const auto& [name, type] : sub_out_ports(p.src_sub)) {
                if (used_source.count({p.src_sub, name})) continue;
                if (compatible(type, *dst_type)) candidates.push_back(ElabEndpoint{p.src_sub, name});
            }
            if (candidates.size() == 1) {
                emit(candidates[0], *p.dst_port, p.provenance, p.span);
            } else if (candidates.size() > 1) {
                warn(p.span, "no unique compatible outgoing port on subcomponent '" + p.src_sub +
                                 "' for '" + p.dst_port->str() + "' (candidates: " +
                                 render_candidates(candidates) + "); no connection created");
            }
            continue;
        }
        if (!p.src_sub.empty() && !p.dst_sub.empty()) {
            // Pair every unconnected outgoing port of the source with its
            // unique compatible unconnected incoming port of the target.
            for (const auto& [sname, stype] : sub_out_ports(p.src_sub)) {
                if (used_source.count({p.src_sub, sname})) continue;
                std::vector<ElabEndpoint> candidates;
                for (const auto& [tname, ttype] : sub_in_ports(p.dst_sub)) {
                    if (used_target.count({p.dst_sub, tname})) continue;
                    if (compatible(stype, ttype)) candidates.push_back(ElabEndpoint{p.dst_sub, tname});
                }
                if (candidates.size() == 1) {
                    emit(ElabEndpoint{p.src_sub, sname}, candidates[0], p.provenance, p.span);
                } else if (candidates.size() > 1) {
                    warn(p.span, "no unique compatible incoming port on subcomponent '" + p.dst_sub +
                                     "' for '" + p.src_sub + "." + sname + "' (candidates: " +
                                     render_candidates(candidates) + "); no connection created");
                }
            }
            continue;
        }
    }
}

void Elaborator::autoconnect(ElabComponent& out, AutoConnectMode mode) {
    if (mode == AutoConnectMode::Off) return;

    std::set<std::pair<std::string, std::string>> used_target;
    for (const auto& c : out.connectors) used_target.insert({c.target.sub, c.target.port});

    struct Cand {
        ElabEndpoint ep;
        std::string name;
        TypeExpr type;
    };
    std::vector<Cand> sources, targets;
    for (const auto& p : out.ports) {
        if (p.direction == PortDirection::In)
            sources.push_back({ElabEndpoint{"", p.name}, p.name, p.type});
        else if (!used_target.count({"", p.name}))
            targets.push_back({ElabEndpoint{"", p.name}, p.name, p.type});
    }
    for (const auto& s : out.subs) {
        for (const auto& sig : interface_of(s.type_qname, s.type_args)) {
            if (sig.direction == PortDirection::Out) {
                sources.push_back({ElabEndpoint{s.name, sig.name}, sig.name, sig.type});
            } else if (!used_target.count({s.name, sig.name})) {
                targets.push_back({ElabEndpoint{s.name, sig.name}, sig.name, sig.type});
            }
        }
    }

    std::set<std::string> own_params(out.type_params.begin(), out.type_params.end());
    auto compatible = [&](const Cand& s, const Cand& t) {
        // A component's own incoming port cannot feed its own outgoing port.
        if (s.ep.this_port() && t.ep.this_port()) return false;
        return types::is_subtype(s.type, t.type, analysis_.registry(), own_params).yes();
    };

    SourceSpan span = out.span;
    auto emit = [&](const Cand& s, const Cand& t) {
        ElabConnector c;
        c.source = s.ep;
        c.target = t.ep;
        c.provenance = Provenance::Autoconnect;
        c.span = span;
        out.connectors.push_back(std::move(c));
    };

    if (mode == AutoConnectMode::Port) {
        // Match by equal name and compatible type; each target must have a
        // unique matching source, sources may fan out.
        for (const auto& t : targets) {
            std::vector<const Cand*> matching;
            for (const auto& s : sources)
                if (s.name == t.name && compatible(s, t)) matching.push_back(&s);
            if (matching.size() == 1) {
                emit(*matching[0], t);
            } else if (matching.size() > 1) {
                std::vector<ElabEndpoint> eps;
                for (auto* m : matching) eps.push_back(m->ep);
                diags_.push_back(make_warning(
                    "CO3", span,
                    "autoconnect port: no unique source for '" + t.ep.str() +
                        "' (candidates: " + render_candidates(eps) + "); no connection created"));
            }
        }
        return;
    }

    // Type mode: a pairing needs a unique counterpart on both sides.
    std::map<size_t, std::vector<size_t>> sources_of_target;
    std::map<size_t, std::vector<size_t>> targets_of_source;
    for (size_t ti = 0; ti < targets.size(); ++ti)
        for (size_t si = 0; si < sources.size(); ++si)
            if (compatible(sources[si], targets[ti])) {
                sources_of_target[ti].push_back(si);
                targets_of_source[si].push_back(ti);
            }
    std::set<size_t> warned_sources;
    for (size_t ti = 0; ti < targets.size(); ++ti) {
        auto it = sources_of_target.find(ti);
        if (it == sources_of_target.end() || it->second.empty()) continue;
        if (it->second.size() > 1) {
            std::vector<ElabEndpoint> eps;
            for (size_t si : it->second) eps.push_back(sources[si].ep);
            diags_.push_back(make_warning(
                "CO3", span,
                "autoconnect type: no unique source for '" + targets[ti].ep.str() +
                    "' (candidates: " + render_candidates(eps) + "); no connection created"));
            continue;
        }
        size_t si = it->second.front();
        if (targets_of_source[si].size() > 1) {
            if (warned_sources.insert(si).second) {
                std::vector<ElabEndpoint> eps;
                for (size_t tj : targets_of_source[si]) eps.push_back(targets[tj].ep);
                diags_.push_back(make_warning(
                    "CO3", span,
                    "autoconnect type: no unique target for '" + sources[si].ep.str() +
                        "' (candidates: " + render_candidates(eps) + "); no connection created"));
            }
            continue;
        }
        emit(sources[si], targets[ti]);
    }
}

// ---- printing ---------------------------------------------------------------

namespace {

class ElabPrinter {
public:
    ElabPrinter(bool annotate) : annotate_(annotate) {}

    std::string run(const ElabComponent& comp, const std::string& package) {
        if (!package.empty()) out_ << "package " << package << ";\n\n";
        component(comp, 0);
        return out_.str();
    }

private:
    void pad(int n) {
        for (int i = 0; i < n; ++i) out_ << "  ";
    }

    void tag(Provenance p) {
        if (annotate_) out_ << "  // " << symbols::provenance_name(p);
    }

    // Shortest reference that resolves from inside `context`: inner types
    // of the current tree print relative to it, everything else fully
    // qualified.
    std::string type_ref(const std::string& context_qname, const ElabSub& sub) {
        std::string name = sub.type_qname;
        const std::string prefix = context_qname + ".";
        if (name.rfind(prefix, 0) == 0) name = name.substr(prefix.size());
        if (!sub.type_args.empty()) {
            name += '<';
            for (size_t i = 0; i < sub.type_args.size(); ++i) {
                if (i) name += ", ";
                name += sub.type_args[i].str();
            }
            name += '>';
        }
        return name;
    }

    void component(const ElabComponent& c, int indent) {
        pad(indent);
        out_ << "component " << c.name;
        if (!c.type_params.empty()) {
            out_ << '<';
            for (size_t i = 0; i < c.type_params.size(); ++i)
                out_ << (i ? ", " : "") << c.type_params[i];
            out_ << '>';
        }
        if (!c.config_params.empty()) {
            out_ << '[';
            for (size_t i = 0; i < c.config_params.size(); ++i) {
                if (i) out_ << ", ";
                out_ << c.config_params[i].type.str() << ' ' << c.config_params[i].name;
            }
            out_ << ']';
        }
        if (c.ports.empty() && c.subs.empty() && c.connectors.empty() && c.inners.empty() &&
            c.invariants.empty() && !c.timing_declared) {
            out_ << " {}\n";
            return;
        }
        out_ << " {\n";
        if (c.timing_declared) {
            pad(indent + 1);
            switch (c.timing) {
                case TimingMode::Timed: out_ << "behavior timed;\n"; break;
                case TimingMode::Untimed: out_ << "behavior untimed;\n"; break;
                case TimingMode::Timesynchronous: out_ << "behavior timesynchronous;\n"; break;
            }
        }
        if (!c.ports.empty()) {
            pad(indent + 1);
            out_ << "port\n";
            for (size_t i = 0; i < c.ports.size(); ++i) {
                const auto& p = c.ports[i];
                pad(indent + 2);
                out_ << (p.direction == PortDirection::In ? "in " : "out ") << p.type.str() << ' '
                     << p.name << (i + 1 < c.ports.size() ? "," : ";");
                tag(p.provenance);
                out_ << "\n";
            }
        }
        for (const auto& inner : c.inners) component(inner, indent + 1);
        for (const auto& s : c.subs) {
            pad(indent + 1);
            out_ << "component " << type_ref(c.qname, s);
            if (!s.config_args.empty()) {
                out_ << '(';
                for (size_t i = 0; i < s.config_args.size(); ++i) {
                    if (i) out_ << ", ";
                    out_ << s.config_args[i].str();
                }
                out_ << ')';
            }
            out_ << ' ' << s.name << ';';
            tag(s.provenance);
            out_ << "\n";
        }
        for (const auto& k : c.connectors) {
            pad(indent + 1);
            out_ << "connect " << k.source.str() << " -> " << k.target.str() << ';';
            tag(k.provenance);
            out_ << "\n";
        }
        for (const auto& inv : c.invariants) {
            pad(indent + 1);
            if (inv.kind) out_ << *inv.kind << ' ';
            out_ << "inv " << inv.name << ": " << trim(inv.body) << ";\n";
        }
        pad(indent);
        out_ << "}\n";
    }

    std::ostringstream out_;
    bool annotate_;
};

}  // namespace

std::string print_elaborated(const ElabComponent& comp, const std::string& package,
                             bool annotate_provenance) {
    ElabPrinter p(annotate_provenance);
    return p.run(comp, package);
}

}  // namespace montiarc::elab
