#include "montiarc/simulator.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include <json.hpp>

namespace montiarc::sim {

using namespace ast;

// ---- traces -----------------------------------------------------------------

int StreamTrace::tick_count() const {
    int n = 0;
    for (const auto& e : events)
        if (e.kind == Event::Kind::Tick) ++n;
    return n;
}

std::vector<Message> StreamTrace::slice(int k) const {
    std::vector<Message> out;
    int current = 0;
    for (const auto& e : events) {
        if (e.kind == Event::Kind::Tick) {
            ++current;
            continue;
        }
        if (current == k) out.push_back(e.message);
    }
    return out;
}

std::string StreamTrace::render() const {
    std::ostringstream os;
    os << port << ":";
    int current = 0;
    bool any = false;
    for (const auto& e : events) {
        if (e.kind == Event::Kind::Tick) {
            ++current;
            continue;
        }
        os << " [" << current << "] " << e.message.value;
        any = true;
    }
    if (!any) os << " (no data)";
    os << " | ticks " << tick_count();
    return os.str();
}

// ---- behavior registry ---------------------------------------------------------

void BehaviorRegistry::register_behavior(const std::string& name, BehaviorFactory factory) {
    factories_[name] = std::move(factory);
}

const BehaviorFactory* BehaviorRegistry::find(const std::string& name) const {
    auto it = factories_.find(name);
    return it == factories_.end() ? nullptr : &it->second;
}

// ---- scenario --------------------------------------------------------------------

Scenario parse_scenario(const std::string& json_text, std::string& error) {
    Scenario sc;
    nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded()) {
        error = "scenario is not valid JSON";
        return sc;
    }
    if (!j.contains("horizon") || !j["horizon"].is_number_integer()) {
        error = "scenario requires an integer 'horizon'";
        return sc;
    }
    sc.horizon = j["horizon"].get<int>();
    std::string paradigm = j.value("paradigm", "timed");
    if (paradigm == "timed") sc.paradigm = TimingMode::Timed;
    else if (paradigm == "untimed") sc.paradigm = TimingMode::Untimed;
    else if (paradigm == "timesynchronous") sc.paradigm = TimingMode::Timesynchronous;
    else {
        error = "unknown paradigm '" + paradigm + "'";
        return sc;
    }
    std::string causality = j.value("causality", "strict");
    if (causality == "strict") sc.causality = Causality::Strict;
    else if (causality == "weak") sc.causality = Causality::Weak;
    else {
        error = "unknown causality '" + causality + "'";
        return sc;
    }
    sc.ordered = j.value("ordered", false);
    auto read_events = [&](const char* key, std::vector<ScenarioInput>& out) -> bool {
        if (!j.contains(key)) return true;
        for (const auto& e : j[key]) {
            ScenarioInput in;
            if (!e.contains("port") || !e.contains("value")) {
                error = std::string("every entry in '") + key + "' needs 'port' and 'value'";
                return false;
            }
            in.port = e["port"].get<std::string>();
            in.slice = e.value("slice", 0);
            in.value = e["value"].get<std::string>();
            in.type = e.value("type", "");
            out.push_back(std::move(in));
        }
        return true;
    };
    if (!read_events("inputs", sc.inputs)) return sc;
    if (!read_events("expected", sc.expected)) return sc;
    return sc;
}

// ---- instantiation -----------------------------------------------------------------

namespace {

struct Builder {
    elab::Elaborator& elaborator;
    const BehaviorRegistry& behaviors;
    const BehaviorBinding& binding;
    InstanceTree& tree;
    std::string error;

    std::map<PortKey, std::vector<PortKey>> raw_edges;

    int build(const elab::ElabComponent& comp, const std::string& path,
              const types::TypeBinding& type_binding, const std::vector<std::string>& config) {
        int index = static_cast<int>(tree.instances.size());
        tree.instances.push_back(std::make_unique<Instance>());
        Instance& inst = *tree.instances.back();
        inst.path = path;
        inst.type_qname = comp.qname;
        inst.atomic = comp.atomic();
        for (const auto& p : comp.ports) {
            InstancePort port;
            port.name = p.name;
            port.direction = p.direction;
            port.type = types::substitute(p.type, type_binding).type.str();
            inst.ports.push_back(std::move(port));
            if (p.direction == PortDirection::In) inst.pending_ticks[p.name] = 0;
        }

        if (inst.atomic) {
            auto it = binding.by_type.find(comp.qname);
            std::string behavior_name =
                it != binding.by_type.end() ? it->second : binding.fallback;
            const BehaviorFactory* factory =
                behavior_name.empty() ? nullptr : behaviors.find(behavior_name);
            if (!factory) {
                if (error.empty())
                    error = "MISSING_BEHAVIOR(" + comp.qname +
                            "): no behavior registered for atomic component type";
                return index;
            }
            inst.behavior = (*factory)(config);
            inst.behavior->init(inst.ports);
            return index;
        }

        std::map<std::string, int> child_index;
        for (const auto& s : comp.subs) {
            const elab::ElabComponent* sub_type = elaborator.elaborate(s.type_qname);
            if (!sub_type) {
                if (error.empty()) error = "unresolved subcomponent type " + s.type_qname;
                continue;
            }
            std::vector<TypeExpr> args;
            for (const auto& a : s.type_args)
                args.push_back(types::substitute(a, type_binding).type);
            types::TypeBinding sub_binding =
                elaborator.analysis().binding_for(s.type_qname, args);
            std::vector<std::string> sub_config;
            for (const auto& c : s.config_args) sub_config.push_back(c.str());
            std::string sub_path = path.empty() ? s.name : path + "." + s.name;
            child_index[s.name] = build(*sub_type, sub_path, sub_binding, sub_config);
            if (!error.empty()) return index;
        }

        for (const auto& c : comp.connectors) {
            auto key = [&](const elab::ElabEndpoint& ep) {
                if (ep.this_port()) return PortKey{index, ep.port};
                auto it = child_index.find(ep.sub);
                return PortKey{it == child_index.end() ? -1 : it->second, ep.port};
            };
            PortKey src = key(c.source);
            PortKey dst = key(c.target);
            if (src.instance < 0 || dst.instance < 0) continue;
            raw_edges[src].push_back(dst);
        }
        return index;
    }

    bool terminal(const PortKey& node, PortDirection dir) const {
        const Instance& inst = *tree.instances[node.instance];
        if (inst.atomic && dir == PortDirection::In) return true;
        if (node.instance == 0 && dir == PortDirection::Out) return true;
        return false;
    }

    PortDirection direction_of(const PortKey& node) const {
        for (const auto& p : tree.instances[node.instance]->ports)
            if (p.name == node.port) return p.direction;
        return PortDirection::In;
    }

    void resolve_consumers(const PortKey& node, std::vector<PortKey>& out,
                           std::set<PortKey>& visiting) {
        if (!visiting.insert(node).second) return;
        if (terminal(node, direction_of(node))) {
            out.push_back(node);
        } else {
            auto it = raw_edges.find(node);
            if (it != raw_edges.end())
                for (const auto& next : it->second) resolve_consumers(next, out, visiting);
        }
        visiting.erase(node);
    }

    void flatten_routes() {
        // Producers: atomic outports and root inports; consumers follow the
        // edge chains through composed boundaries.
        auto add_producer = [&](const PortKey& node) {
            std::vector<PortKey> consumers;
            std::set<PortKey> visiting;
            if (terminal(node, direction_of(node)) && node.instance == 0 &&
                direction_of(node) == PortDirection::Out) {
                consumers.push_back(node);  // atomic root emits straight to its trace
            } else {
                auto it = raw_edges.find(node);
                if (it != raw_edges.end())
                    for (const auto& next : it->second) resolve_consumers(next, consumers, visiting);
            }
            tree.routes[node] = std::move(consumers);
        };
        for (size_t i = 0; i < tree.instances.size(); ++i) {
            const Instance& inst = *tree.instances[i];
            for (const auto& p : inst.ports) {
                if (inst.atomic && p.direction == PortDirection::Out)
                    add_producer(PortKey{static_cast<int>(i), p.name});
            }
        }
        for (const auto& p : tree.root().ports)
            if (p.direction == PortDirection::In) add_producer(PortKey{0, p.name});
    }
};

void collect_timing(const elab::ElabComponent& comp, elab::Elaborator& elaborator,
                    std::set<std::string>& visited,
                    std::map<TimingMode, std::vector<std::string>>& declared) {
    if (!visited.insert(comp.qname).second) return;
    if (comp.timing_declared) declared[comp.timing].push_back(comp.qname);
    for (const auto& s : comp.subs) {
        const elab::ElabComponent* sub_type = elaborator.elaborate(s.type_qname);
        if (sub_type) collect_timing(*sub_type, elaborator, visited, declared);
    }
}

}  // namespace

InstantiateResult instantiate(const elab::ElabComponent& root, elab::Elaborator& elaborator,
                              const BehaviorRegistry& behaviors, const BehaviorBinding& binding,
                              const std::vector<std::string>& root_config) {
    InstantiateResult result;

    std::set<std::string> visited;
    std::map<TimingMode, std::vector<std::string>> declared;
    collect_timing(root, elaborator, visited, declared);
    if (declared.size() > 1) {
        std::string msg = "mixed timing paradigms in one architecture:";
        for (const auto& [mode, names] : declared) {
            msg += mode == TimingMode::Timed          ? " timed("
                   : mode == TimingMode::Untimed      ? " untimed("
                                                      : " timesynchronous(";
            for (size_t i = 0; i < names.size(); ++i) msg += (i ? ", " : "") + names[i];
            msg += ")";
        }
        result.diagnostics.push_back(
            make_error("T4", SourceSpan{"<simulation>", {0, 0}, {0, 0}}, msg));
        result.error = "T4 MIXED_PARADIGM";
        return result;
    }

    auto tree = std::make_unique<InstanceTree>();
    Builder builder{elaborator, behaviors, binding, *tree, {}, {}};
    builder.build(root, "", types::TypeBinding{}, root_config);
    if (!builder.error.empty()) {
        result.error = builder.error;
        return result;
    }
    builder.flatten_routes();
    for (const auto& p : tree->root().ports) {
        if (p.direction == PortDirection::In) tree->root_inports.push_back(p.name);
        else tree->root_outports.push_back(p.name);
    }
    result.tree = std::move(tree);
    return result;
}

// ---- execution ----------------------------------------------------------------------

namespace {

struct Delivery {
    PortKey consumer;
    Event event;
};

class Scheduler : public ::montiarc::sim::Emitter {
public:
    Scheduler(InstanceTree& tree, const Scenario& scenario)
        : tree_(tree), scenario_(scenario) {}

    RunResult execute() {
        for (const auto& p : tree_.root_outports) {
            StreamTrace t;
            t.port = p;
            result_.traces[p] = std::move(t);
        }
        if (scenario_.paradigm == TimingMode::Untimed) run_untimed();
        else run_timed();
        normalize(result_.diagnostics);
        return std::move(result_);
    }

private:
    void run_untimed() {
        std::vector<ScenarioInput> inputs = scenario_.inputs;
        std::stable_sort(inputs.begin(), inputs.end(),
                         [](const ScenarioInput& a, const ScenarioInput& b) {
                             return a.slice < b.slice;
                         });
        for (const auto& in : inputs) inject(in);
        drain();
        result_.completed = true;
    }

    void run_timed() {
        const int horizon = scenario_.horizon;
        for (int k = 0; k < horizon; ++k) {
            // External data of slice k arrives before slice k's tick.
            for (const auto& in : scenario_.inputs)
                if (in.slice == k) inject(in);
            drain();
            for (size_t i = 0; i < tree_.instances.size(); ++i) {
                Instance& inst = *tree_.instances[i];
                // Source-style components without inports tick on their own.
                if (inst.atomic && inst.pending_ticks.empty() && inst.local_time == k)
                    advance(static_cast<int>(i));
            }
            for (const auto& p : tree_.root_inports)
                dispatch(PortKey{0, p}, Event::tick());
            drain();

            bool stuck = false;
            std::string cut;
            for (const auto& inst : tree_.instances) {
                if (!inst->atomic) continue;
                if (inst->local_time < k + 1) {
                    stuck = true;
                    std::string waiting;
                    for (const auto& [port, n] : inst->pending_ticks)
                        if (n == 0) waiting += (waiting.empty() ? "" : ", ") + port;
                    cut += (cut.empty() ? "" : "; ") +
                           (inst->path.empty() ? std::string("<root>") : inst->path) +
                           " at t=" + std::to_string(inst->local_time) + " waiting for ticks on " +
                           waiting;
                }
            }
            if (stuck) {
                result_.diagnostics.push_back(make_error(
                    "T1", span(), "deadlock in slice " + std::to_string(k) + ": " + cut));
                result_.slices_run = k;
                result_.completed = false;
                return;
            }
            result_.slices_run = k + 1;
        }
        result_.completed = true;
    }

    SourceSpan span() const { return SourceSpan{"<simulation>", {0, 0}, {0, 0}}; }

    void inject(const ScenarioInput& in) {
        PortKey producer{0, in.port};
        if (!tree_.routes.count(producer)) return;  // validated by the caller
        result_.data_emitted[in.port] += 1;
        dispatch(producer, Event::data(Message{in.value, in.type}));
    }

    void dispatch(const PortKey& producer, const Event& event) {
        auto it = tree_.routes.find(producer);
        if (it == tree_.routes.end()) return;
        for (const auto& consumer : it->second) queue_.push_back(Delivery{consumer, event});
    }

    void drain() {
        // Hard cap against runaway zero-delay cascades.
        const long limit = 1000000;
        long processed = 0;
        while (!queue_.empty()) {
            if (++processed > limit) {
                result_.diagnostics.push_back(make_error(
                    "T1", span(), "event cascade exceeded " + std::to_string(limit) +
                                      " deliveries; livelocked zero-delay loop"));
                queue_.clear();
                return;
            }
            Delivery d = queue_.front();
            queue_.pop_front();
            deliver(d);
        }
    }

    void deliver(const Delivery& d) {
        Instance& inst = *tree_.instances[d.consumer.instance];
        std::string channel = inst.path.empty() ? d.consumer.port
                                                : inst.path + "." + d.consumer.port;
        if (d.event.kind == Event::Kind::Data) result_.data_delivered[channel] += 1;
        else result_.ticks_delivered[channel] += 1;

        if (d.consumer.instance == 0 && !inst.atomic) {
            append_trace(d.consumer.port, d.event);
            return;
        }
        if (d.consumer.instance == 0 && inst.atomic) {
            // An atomic root is both the component and the observed boundary:
            // output events land in the trace, input events reach the behavior.
            if (result_.traces.count(d.consumer.port) &&
                direction_of(inst, d.consumer.port) == PortDirection::Out) {
                append_trace(d.consumer.port, d.event);
                return;
            }
        }
        if (d.event.kind == Event::Kind::Tick) {
            inst.pending_ticks[d.consumer.port] += 1;
            try_advance(d.consumer.instance);
            return;
        }
        // Data is handed to the behavior as it arrives.
        if (scenario_.paradigm == TimingMode::Timesynchronous)
            note_sync(d.consumer, inst.local_time);
        current_ = &inst;
        current_index_ = d.consumer.instance;
        in_on_message_ = true;
        inst.behavior->on_message(d.consumer.port, d.event.message, *this);
        in_on_message_ = false;
        current_ = nullptr;
    }

    PortDirection direction_of(const Instance& inst, const std::string& port) const {
        for (const auto& p : inst.ports)
            if (p.name == port) return p.direction;
        return PortDirection::In;
    }

    void append_trace(const std::string& port, const Event& event) {
        auto& trace = result_.traces[port];
        if (trace.port.empty()) trace.port = port;
        if (event.kind == Event::Kind::Data &&
            scenario_.paradigm == TimingMode::Timesynchronous) {
            note_sync(PortKey{0, port}, trace.tick_count());
        }
        trace.events.push_back(event);
    }

    void note_sync(const PortKey& node, int slice) {
        auto key = std::make_pair(node, slice);
        int& n = sync_counts_[key];
        n += 1;
        if (n == 2) {
            const Instance& inst = *tree_.instances[node.instance];
            std::string where = inst.path.empty() ? node.port : inst.path + "." + node.port;
            result_.diagnostics.push_back(make_error(
                "T3", span(), "more than one data message on '" + where + "' in slice " +
                                  std::to_string(slice) + " under the timesynchronous paradigm"));
        }
    }

    void advance(int index) {
        Instance& inst = *tree_.instances[index];
        inst.local_time += 1;
        for (const auto& p : inst.ports)
            if (p.direction == PortDirection::Out)
                dispatch(PortKey{index, p.name}, Event::tick());
        current_ = &inst;
        current_index_ = index;
        in_on_message_ = false;
        inst.behavior->on_tick(*this);
        current_ = nullptr;
    }

    void try_advance(int index) {
        Instance& inst = *tree_.instances[index];
        while (true) {
            bool all = !inst.pending_ticks.empty();
            for (const auto& [port, n] : inst.pending_ticks)
                if (n == 0) all = false;
            if (!all) return;
            for (auto& [port, n] : inst.pending_ticks) n -= 1;
            advance(index);
        }
    }

    // Emitter: behaviors push data onto their outports of the current slice.
    void emit(const std::string& port, Message message) override {
        if (!current_) return;
        std::string channel =
            current_->path.empty() ? port : current_->path + "." + port;
        result_.data_emitted[channel] += 1;
        if (in_on_message_ && scenario_.paradigm != TimingMode::Untimed) {
            auto key = std::make_pair(current_index_, current_->local_time);
            if (t2_reported_.insert(key).second) {
                std::string where =
                    current_->path.empty() ? std::string("<root>") : current_->path;
                Diagnostic d = make_error(
                    "T2", span(),
                    "component '" + where + "' emitted a message in slice " +
                        std::to_string(current_->local_time) +
                        ", the same slice in which it consumed input");
                if (scenario_.causality == Causality::Weak) d.severity = Severity::Warning;
                result_.diagnostics.push_back(std::move(d));
            }
        }
        dispatch(PortKey{current_index_, port}, Event::data(std::move(message)));
    }

    InstanceTree& tree_;
    const Scenario& scenario_;
    RunResult result_;
    std::deque<Delivery> queue_;
    Instance* current_ = nullptr;
    int current_index_ = -1;
    bool in_on_message_ = false;
    std::map<std::pair<PortKey, int>, int> sync_counts_;
    std::set<std::pair<int, int>> t2_reported_;
};

}  // namespace

RunResult run(InstanceTree& tree, const Scenario& scenario) {
    Scheduler scheduler(tree, scenario);
    return scheduler.execute();
}

std::string RunResult::render() const {
    std::ostringstream os;
    os << (completed ? "completed" : "aborted") << " after " << slices_run << " slice(s)\n";
    for (const auto& [port, trace] : traces) os << "port " << trace.render() << "\n";
    for (const auto& d : diagnostics) os << format_diagnostic(d) << "\n";
    return os.str();
}

TraceCheck check_trace(const RunResult& result, const Scenario& scenario) {
    TraceCheck check;
    if (scenario.expected.empty()) return check;

    // expected: port -> slice -> values
    std::map<std::string, std::map<int, std::vector<std::string>>> expected;
    for (const auto& e : scenario.expected) expected[e.port][e.slice].push_back(e.value);

    int max_slice = scenario.horizon;
    for (const auto& [port, trace] : result.traces) {
        for (int k = 0; k <= max_slice; ++k) {
            std::vector<std::string> actual;
            for (const auto& m : trace.slice(k)) actual.push_back(m.value);
            std::vector<std::string> want;
            auto pit = expected.find(port);
            if (pit != expected.end()) {
                auto sit = pit->second.find(k);
                if (sit != pit->second.end()) want = sit->second;
            }
            bool match;
            if (scenario.ordered) {
                match = actual == want;
            } else {
                auto a = actual;
                auto w = want;
                std::sort(a.begin(), a.end());
                std::sort(w.begin(), w.end());
                match = a == w;
            }
            if (!match) {
                check.pass = false;
                std::ostringstream os;
                os << "port '" << port << "' slice " << k << ": expected [";
                for (size_t i = 0; i < want.size(); ++i) os << (i ? ", " : "") << want[i];
                os << "], actual [";
                for (size_t i = 0; i < actual.size(); ++i) os << (i ? ", " : "") << actual[i];
                os << "]";
                check.mismatches.push_back(os.str());
            }
        }
    }
    // Expectations on ports that produced no trace at all.
    for (const auto& [port, slices] : expected) {
        if (result.traces.count(port)) continue;
        check.pass = false;
        check.mismatches.push_back("port '" + port + "' has no trace");
    }
    return check;
}

}  // namespace montiarc::sim
