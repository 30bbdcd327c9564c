#pragma once

#include <compare>
#include <string>
#include <vector>

#include "montiarc/diagnostics.hpp"
#include "montiarc/elaborate.hpp"
#include "montiarc/symbols.hpp"

namespace montiarc::sem {

// Name of a component in a connector tuple; `parent` is the
// distinguished token standing for the enclosing component.
struct SemName {
    bool parent = false;
    std::string name;

    static SemName this_component() { return SemName{true, {}}; }
    static SemName sub(std::string n) { return SemName{false, std::move(n)}; }
    std::string wire() const;  // `#this` for the parent token
    auto operator<=>(const SemName&) const = default;
};

struct SemPort {
    ast::PortDirection direction = ast::PortDirection::In;
    std::string ptype;
    std::string pname;
    auto operator<=>(const SemPort&) const = default;
};

struct SemConnector {
    SemName src_cname;
    std::string src_pname;
    SemName dst_cname;
    std::string dst_pname;
    auto operator<=>(const SemConnector&) const = default;
};

struct SemSubComponent;

// The unfolded structure tuple: type name, port set, subcomponent set,
// connector set. Subcomponents hold complete recursive copies.
struct SemComponent {
    std::string ctype;
    std::vector<SemPort> ports;             // sorted by pname
    std::vector<SemSubComponent> subcomponents;  // sorted by cname
    std::vector<SemConnector> connectors;   // sorted lexicographically

    void canonicalize();
    bool operator==(const SemComponent& other) const;
};

struct SemSubComponent {
    std::string cname;
    SemComponent component;
    bool operator==(const SemSubComponent& other) const = default;
};

// Mapping of an elaborated (core-form) component into the domain.
SemComponent map_to_domain(const elab::ElabComponent& root, elab::Elaborator& elaborator);

// Direct mapping of an unelaborated component: computes default names,
// auto-instances, inheritance, connector completion and autoconnect
// pairing on the domain representation itself, without going through the
// elaborator. Exists so the two routes can be compared.
SemComponent map_montiarc(const std::string& root_qname, symbols::Analysis& analysis);

// Rules over the collected component tree: D1 type-determines-structure,
// D2 port-name uniqueness, D3 subcomponent-name uniqueness, D4 endpoint
// existence and direction, D5 receiver uniqueness.
Diagnostics validate_domain(const SemComponent& root);

// Canonical JSON bytes; deterministic across runs and platforms.
std::string export_json(const SemComponent& root);

}  // namespace montiarc::sem
