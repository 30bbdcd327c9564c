#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "montiarc/diagnostics.hpp"
#include "montiarc/elaborate.hpp"

namespace montiarc::sim {

struct Message {
    std::string value;
    std::string type;  // rendered data type, informational

    bool operator==(const Message& o) const { return value == o.value; }
};

struct Event {
    enum class Kind { Data, Tick };
    Kind kind = Kind::Tick;
    Message message;  // Data only

    static Event tick() { return Event{}; }
    static Event data(Message m) { return Event{Kind::Data, std::move(m)}; }
};

// Per-port event sequence. In timed runs ticks delimit the time slices;
// untimed traces carry data only.
struct StreamTrace {
    std::string port;  // instance-qualified path
    std::vector<Event> events;

    int tick_count() const;
    // Data messages of slice k (events between the (k-1)-th and k-th tick).
    std::vector<Message> slice(int k) const;
    std::string render() const;
};

class Emitter {
public:
    virtual ~Emitter() = default;
    // Appends a data message to the named outgoing port of the current
    // time slice.
    virtual void emit(const std::string& port, Message message) = 0;
};

struct InstancePort;

// Reaction of an atomic component. Implementations see one delivered
// message at a time and the tick boundaries; buffers stay framework-owned.
class AtomicBehavior {
public:
    virtual ~AtomicBehavior() = default;
    virtual void init(const std::vector<InstancePort>& ports) {}
    virtual void on_message(const std::string& port, const Message& message, Emitter& emit) = 0;
    virtual void on_tick(Emitter& emit) {}
};

using BehaviorFactory =
    std::function<std::unique_ptr<AtomicBehavior>(const std::vector<std::string>& config_args)>;

class BehaviorRegistry {
public:
    void register_behavior(const std::string& name, BehaviorFactory factory);
    const BehaviorFactory* find(const std::string& name) const;

    // Built-ins: delay, relay, sink, report_generator.
    static BehaviorRegistry with_builtins();

private:
    std::map<std::string, BehaviorFactory> factories_;
};

// Maps atomic component type names to behavior names.
struct BehaviorBinding {
    std::map<std::string, std::string> by_type;  // qualified type name -> behavior name
    std::string fallback;                        // empty: unbound types are an error
};

enum class Causality { Strict, Weak };

struct ScenarioInput {
    std::string port;
    int slice = 0;
    std::string value;
    std::string type;
};

struct Scenario {
    int horizon = 0;
    ast::TimingMode paradigm = ast::TimingMode::Timed;
    Causality causality = Causality::Strict;
    bool ordered = false;  // expected values compared as sequences, not multisets
    std::vector<ScenarioInput> inputs;
    std::vector<ScenarioInput> expected;
};

Scenario parse_scenario(const std::string& json_text, std::string& error);

struct InstancePort {
    std::string name;
    ast::PortDirection direction = ast::PortDirection::In;
    std::string type;
};

struct Instance {
    std::string path;  // empty for the root
    std::string type_qname;
    bool atomic = false;
    std::vector<InstancePort> ports;
    std::unique_ptr<AtomicBehavior> behavior;  // atomic only

    // Scheduler state.
    int local_time = 0;
    std::map<std::string, int> pending_ticks;       // inport -> unconsumed ticks
    std::map<std::string, std::vector<Message>> inbuffers;  // retained data at termination
};

struct PortKey {
    int instance = -1;  // index into InstanceTree::instances; -1 = environment
    std::string port;
    auto operator<=>(const PortKey&) const = default;
};

struct InstanceTree {
    std::vector<std::unique_ptr<Instance>> instances;  // [0] is the root
    std::map<PortKey, std::vector<PortKey>> routes;    // producer -> consumers
    std::vector<std::string> root_inports;
    std::vector<std::string> root_outports;

    const Instance& root() const { return *instances.front(); }
};

struct InstantiateResult {
    std::unique_ptr<InstanceTree> tree;
    std::string error;       // MISSING_BEHAVIOR and malformed-model problems
    Diagnostics diagnostics; // T4 mixed timing paradigms

    bool ok() const { return tree != nullptr; }
};

// Builds the instance tree for an elaborated root: recursive instances
// mirroring the structure, and a routing table from every producing port
// to the atomic inports / root outports it feeds.
InstantiateResult instantiate(const elab::ElabComponent& root, elab::Elaborator& elaborator,
                              const BehaviorRegistry& behaviors, const BehaviorBinding& binding,
                              const std::vector<std::string>& root_config = {});

struct RunResult {
    std::map<std::string, StreamTrace> traces;  // root outports
    Diagnostics diagnostics;                    // T1..T3 findings
    bool completed = false;
    int slices_run = 0;

    // Conservation bookkeeping, keyed by instance-qualified port path.
    std::map<std::string, long> data_delivered;
    std::map<std::string, long> data_emitted;
    std::map<std::string, long> ticks_delivered;

    std::string render() const;  // deterministic report
};

RunResult run(InstanceTree& tree, const Scenario& scenario);

struct TraceCheck {
    bool pass = true;
    std::vector<std::string> mismatches;
};

// Per-port, per-slice multiset comparison of data values (sequence
// comparison in ordered mode).
TraceCheck check_trace(const RunResult& result, const Scenario& scenario);

}  // namespace montiarc::sim
