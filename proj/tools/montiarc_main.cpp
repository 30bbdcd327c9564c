#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "montiarc/checks.hpp"
#include "montiarc/elaborate.hpp"
#include "montiarc/parser.hpp"
#include "montiarc/printer.hpp"
#include "montiarc/semantics.hpp"
#include "montiarc/simulator.hpp"
#include "montiarc/symbols.hpp"
#include "montiarc/typesys.hpp"

namespace {

using namespace montiarc;

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitUsage = 2;

std::vector<std::string> split_modelpath(const std::string& arg) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : arg) {
        if (c == ':') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

struct CommonOpts {
    std::string modelpath;
    std::string root;
    std::string types_file;
    std::string output;
    bool strict_warnings = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool root_required) {
    cmd->add_option("--modelpath", opts.modelpath, "Colon-separated model directories")
        ->required();
    auto* root = cmd->add_option("--root", opts.root, "Qualified root component type name");
    if (root_required) root->required();
    cmd->add_option("--types", opts.types_file, "Type registry file (type/extends records)");
    cmd->add_option("-o,--output", opts.output, "Write the artifact to this file");
    cmd->add_flag("--strict-warnings", opts.strict_warnings, "Treat warnings as errors");
}

struct LoadedModel {
    symbols::ModelPool pool;
    types::TypeRegistry registry;
    Diagnostics load_diags;
};

bool load_model(const CommonOpts& opts, LoadedModel& model, std::string& error) {
    model.registry = types::TypeRegistry::with_builtins();
    if (!opts.types_file.empty() && !model.registry.load_file(opts.types_file, error))
        return false;
    auto dirs = split_modelpath(opts.modelpath);
    if (dirs.empty()) {
        error = "empty modelpath";
        return false;
    }
    model.pool = symbols::ModelPool::load(dirs, model.load_diags);
    return true;
}

int emit_diagnostics(Diagnostics diags, bool strict_warnings) {
    normalize(diags);
    std::cerr << format_diagnostics(diags);
    if (has_errors(diags)) return kExitDiagnostics;
    if (strict_warnings && !diags.empty()) return kExitDiagnostics;
    return kExitOk;
}

bool write_artifact(const std::string& output, const std::string& content, std::string& error) {
    if (output.empty()) {
        std::cout << content;
        return true;
    }
    std::ofstream f(output, std::ios::binary);
    if (!f) {
        error = "cannot write to " + output;
        return false;
    }
    f << content;
    return true;
}

int run_check(const CommonOpts& opts) {
    LoadedModel model;
    std::string error;
    if (!load_model(opts, model, error)) {
        std::cerr << "error: " << error << "\n";
        return kExitUsage;
    }
    checks::Pipeline pipeline(model.pool, model.registry);
    checks::ModelReport report = pipeline.run(opts.root);
    Diagnostics all = model.load_diags;
    append(all, report.diagnostics);
    return emit_diagnostics(std::move(all), opts.strict_warnings);
}

int run_elaborate(const CommonOpts& opts, bool print) {
    LoadedModel model;
    std::string error;
    if (!load_model(opts, model, error)) {
        std::cerr << "error: " << error << "\n";
        return kExitUsage;
    }
    checks::Pipeline pipeline(model.pool, model.registry);
    checks::ModelReport report = pipeline.run(opts.root);
    Diagnostics all = model.load_diags;
    append(all, report.diagnostics);

    const elab::ElabComponent* elaborated = report.elaborated(opts.root);
    int code = emit_diagnostics(all, opts.strict_warnings);
    if (!elaborated) return code == kExitOk ? kExitDiagnostics : code;

    const symbols::TypeEntry* entry = model.pool.find(opts.root);
    std::string package = entry ? entry->unit->package_str() : "";
    std::string text = elab::print_elaborated(*elaborated, package, print);
    if (!write_artifact(opts.output, text, error)) {
        std::cerr << "error: " << error << "\n";
        return kExitUsage;
    }
    return code;
}

int run_export(const CommonOpts& opts, const std::string& format) {
    if (format != "json") {
        std::cerr << "error: unsupported format '" << format << "'\n";
        return kExitUsage;
    }
    LoadedModel model;
    std::string error;
    if (!load_model(opts, model, error)) {
        std::cerr << "error: " << error << "\n";
        return kExitUsage;
    }
    checks::Pipeline pipeline(model.pool, model.registry);
    checks::ModelReport report = pipeline.run(opts.root);
    Diagnostics all = model.load_diags;
    append(all, report.diagnostics);

    const elab::ElabComponent* elaborated = report.elaborated(opts.root);
    if (!elaborated) {
        int code = emit_diagnostics(std::move(all), opts.strict_warnings);
        return code == kExitOk ? kExitDiagnostics : code;
    }
    sem::SemComponent domain = sem::map_to_domain(*elaborated, pipeline.elaborator());
    append(all, sem::validate_domain(domain));
    int code = emit_diagnostics(std::move(all), opts.strict_warnings);
    std::string bytes = sem::export_json(domain);
    bytes += "\n";
    if (!write_artifact(opts.output, bytes, error)) {
        std::cerr << "error: " << error << "\n";
        return kExitUsage;
    }
    return code;
}

int run_simulate(const CommonOpts& opts, const std::string& scenario_path,
                 const std::string& behaviors_path, const std::string& causality) {
    LoadedModel model;
    std::string error;
    if (!load_model(opts, model, error)) {
        std::cerr << "error: " << error << "\n";
        return kExitUsage;
    }

    std::ifstream sf(scenario_path);
    if (!sf) {
        std::cerr << "error: cannot open scenario " << scenario_path << "\n";
        return kExitUsage;
    }
    std::ostringstream sbuf;
    sbuf << sf.rdbuf();
    sim::Scenario scenario = sim::parse_scenario(sbuf.str(), error);
    if (!error.empty()) {
        std::cerr << "error: " << error << "\n";
        return kExitUsage;
    }
    if (causality == "weak") scenario.causality = sim::Causality::Weak;
    else if (causality == "strict") scenario.causality = sim::Causality::Strict;
    else if (!causality.empty()) {
        std::cerr << "error: unknown causality '" << causality << "'\n";
        return kExitUsage;
    }

    sim::BehaviorBinding binding;
    if (!behaviors_path.empty()) {
        std::ifstream bf(behaviors_path);
        if (!bf) {
            std::cerr << "error: cannot open behaviors manifest " << behaviors_path << "\n";
            return kExitUsage;
        }
        nlohmann::json bj = nlohmann::json::parse(bf, nullptr, false);
        if (bj.is_discarded()) {
            std::cerr << "error: behaviors manifest is not valid JSON\n";
            return kExitUsage;
        }
        if (bj.contains("bindings"))
            for (auto& [type, name] : bj["bindings"].items())
                binding.by_type[type] = name.get<std::string>();
        binding.fallback = bj.value("default", "");
    } else {
        binding.fallback = "delay";
    }

    checks::Pipeline pipeline(model.pool, model.registry);
    checks::ModelReport report = pipeline.run(opts.root);
    Diagnostics all = model.load_diags;
    append(all, report.diagnostics);
    const elab::ElabComponent* elaborated = report.elaborated(opts.root);
    if (!elaborated) {
        int code = emit_diagnostics(std::move(all), opts.strict_warnings);
        return code == kExitOk ? kExitDiagnostics : code;
    }

    auto registry = sim::BehaviorRegistry::with_builtins();
    auto instantiated =
        sim::instantiate(*elaborated, pipeline.elaborator(), registry, binding);
    append(all, instantiated.diagnostics);
    if (!instantiated.ok()) {
        if (!instantiated.diagnostics.empty())
            return emit_diagnostics(std::move(all), opts.strict_warnings);
        std::cerr << "error: " << instantiated.error << "\n";
        return kExitUsage;
    }

    sim::RunResult result = sim::run(*instantiated.tree, scenario);
    append(all, result.diagnostics);

    std::ostringstream out;
    out << result.render();
    sim::TraceCheck check = sim::check_trace(result, scenario);
    if (!scenario.expected.empty()) {
        out << (check.pass ? "trace check: pass\n" : "trace check: FAIL\n");
        for (const auto& m : check.mismatches) out << "  " << m << "\n";
    }
    if (!write_artifact(opts.output, out.str(), error)) {
        std::cerr << "error: " << error << "\n";
        return kExitUsage;
    }

    int code = emit_diagnostics(std::move(all), opts.strict_warnings);
    if (code != kExitOk) return code;
    return check.pass ? kExitOk : kExitDiagnostics;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MontiArc architecture tooling: check, elaborate, export, simulate"};
    app.require_subcommand(1);

    CommonOpts check_opts;
    auto* check_cmd = app.add_subcommand("check", "Run all well-formedness checks");
    add_common(check_cmd, check_opts, false);

    CommonOpts elab_opts;
    bool elab_print = false;
    auto* elab_cmd = app.add_subcommand("elaborate", "Expand implicit constructs to core form");
    add_common(elab_cmd, elab_opts, true);
    elab_cmd->add_flag("--print", elab_print, "Annotate output with provenance comments");

    CommonOpts export_opts;
    std::string export_format = "json";
    auto* export_cmd = app.add_subcommand("export", "Emit the semantic-domain representation");
    add_common(export_cmd, export_opts, true);
    export_cmd->add_option("--format", export_format, "Output format (json)");

    CommonOpts sim_opts;
    std::string scenario_path, behaviors_path, causality;
    auto* sim_cmd = app.add_subcommand("simulate", "Execute a scenario against an architecture");
    add_common(sim_cmd, sim_opts, true);
    sim_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    sim_cmd->add_option("--behaviors", behaviors_path, "Behavior binding manifest (JSON)");
    sim_cmd->add_option("--causality", causality, "strict (default) or weak");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (check_cmd->parsed()) return run_check(check_opts);
        if (elab_cmd->parsed()) return run_elaborate(elab_opts, elab_print);
        if (export_cmd->parsed()) return run_export(export_opts, export_format);
        if (sim_cmd->parsed())
            return run_simulate(sim_opts, scenario_path, behaviors_path, causality);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
