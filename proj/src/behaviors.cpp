#include "montiarc/simulator.hpp"

namespace montiarc::sim {

namespace {

// Forwards every received message on all outgoing ports at the next tick
// boundary: the canonical strongly causal unit delay.
class DelayBehavior : public AtomicBehavior {
public:
    void init(const std::vector<InstancePort>& ports) override {
        for (const auto& p : ports)
            if (p.direction == ast::PortDirection::Out) outports_.push_back(p.name);
    }
    void on_message(const std::string&, const Message& message, Emitter&) override {
        pending_.push_back(message);
    }
    void on_tick(Emitter& emit) override {
        for (const auto& m : pending_)
            for (const auto& out : outports_) emit.emit(out, m);
        pending_.clear();
    }

private:
    std::vector<std::string> outports_;
    std::vector<Message> pending_;
};

// Forwards immediately, inside the consuming slice. Violates strong
// causality by design; useful to exercise the T2 detector and the
// untimed paradigm.
class RelayBehavior : public AtomicBehavior {
public:
    void init(const std::vector<InstancePort>& ports) override {
        for (const auto& p : ports)
            if (p.direction == ast::PortDirection::Out) outports_.push_back(p.name);
    }
    void on_message(const std::string&, const Message& message, Emitter& emit) override {
        for (const auto& out : outports_) emit.emit(out, message);
    }

private:
    std::vector<std::string> outports_;
};

class SinkBehavior : public AtomicBehavior {
public:
    void on_message(const std::string&, const Message&, Emitter&) override {}
};

// Test double for a report generator: `OP` opens a report, data messages
// accumulate while open, `CL` schedules the report for the next slice.
class ReportGeneratorBehavior : public AtomicBehavior {
public:
    void init(const std::vector<InstancePort>& ports) override {
        for (const auto& p : ports)
            if (p.direction == ast::PortDirection::Out) outports_.push_back(p.name);
    }
    void on_message(const std::string&, const Message& message, Emitter&) override {
        if (message.value == "OP") {
            open_ = true;
            entries_.clear();
        } else if (message.value == "CL") {
            closing_ = true;
        } else if (open_) {
            entries_.push_back(message.value);
        }
    }
    void on_tick(Emitter& emit) override {
        if (!closing_) return;
        std::string content = "Report{";
        for (size_t i = 0; i < entries_.size(); ++i) content += (i ? "," : "") + entries_[i];
        content += "}";
        for (const auto& out : outports_) emit.emit(out, Message{content, "Report"});
        open_ = false;
        closing_ = false;
        entries_.clear();
    }

private:
    std::vector<std::string> outports_;
    std::vector<std::string> entries_;
    bool open_ = false;
    bool closing_ = false;
};

}  // namespace

BehaviorRegistry BehaviorRegistry::with_builtins() {
    BehaviorRegistry reg;
    reg.register_behavior("delay", [](const std::vector<std::string>&) {
        return std::make_unique<DelayBehavior>();
    });
    reg.register_behavior("relay", [](const std::vector<std::string>&) {
        return std::make_unique<RelayBehavior>();
    });
    reg.register_behavior("sink", [](const std::vector<std::string>&) {
        return std::make_unique<SinkBehavior>();
    });
    reg.register_behavior("report_generator", [](const std::vector<std::string>&) {
        return std::make_unique<ReportGeneratorBehavior>();
    });
    return reg;
}

}  // namespace montiarc::sim
