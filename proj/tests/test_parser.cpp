#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "montiarc/parser.hpp"
#include "montiarc/printer.hpp"

using namespace montiarc;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

std::vector<fs::path> arc_files_under(const fs::path& dir) {
    std::vector<fs::path> out;
    for (auto it = fs::recursive_directory_iterator(dir); it != fs::recursive_directory_iterator(); ++it)
        if (it->is_regular_file() && it->path().extension() == ".arc") out.push_back(it->path());
    std::sort(out.begin(), out.end());
    return out;
}

const ast::SubComponentDecl* nth_sub(const ast::ComponentTypeDecl& c, size_t n) {
    size_t i = 0;
    for (const auto& e : c.elements)
        if (const auto* s = std::get_if<ast::SubComponentDecl>(&e))
            if (i++ == n) return s;
    return nullptr;
}

}  // namespace

TEST_CASE("adverse drug reaction app parses to the expected shape") {
    std::string text = read_file(fs::path(FIXTURE_DIR) / "valid/adra_app/adra/AdverseDrugReactionApp.arc");
    auto result = parse_compilation_unit(text, "AdverseDrugReactionApp.arc");
    REQUIRE(result.ok());
    const auto& unit = *result.unit;

    CHECK(unit.package_str() == "adra");
    CHECK(unit.imports.size() == 5);
    CHECK(unit.imports[1].wildcard);
    CHECK(unit.imports[1].name.str() == "adra.msg");

    const auto& root = *unit.root;
    CHECK(root.name == "AdverseDrugReactionApp");
    REQUIRE(root.config_elements.size() == 2);
    CHECK(root.config_elements[0].kind == ast::ConfigElement::Kind::AutoConnect);
    CHECK(root.config_elements[0].autoconnect == ast::AutoConnectMode::Port);
    CHECK(root.config_elements[1].kind == ast::ConfigElement::Kind::AutoInstantiate);
    CHECK(root.config_elements[1].autoinstantiate == ast::AutoInstantiateMode::On);

    int interfaces = 0, inners = 0, subs = 0, connectors = 0, ports = 0;
    for (const auto& e : root.elements) {
        if (const auto* pi = std::get_if<ast::PortInterfaceDecl>(&e)) {
            ++interfaces;
            ports += static_cast<int>(pi->ports.size());
        } else if (std::get_if<ast::SubComponentDecl>(&e)) {
            ++subs;
        } else if (std::get_if<ast::ConnectorDecl>(&e)) {
            ++connectors;
        } else if (std::get_if<std::unique_ptr<ast::ComponentTypeDecl>>(&e)) {
            ++inners;
        }
    }
    CHECK(interfaces == 1);
    CHECK(ports == 2);
    CHECK(inners == 1);
    CHECK(subs == 3);
    CHECK(connectors == 2);

    // The simple connector hangs off instance `app`.
    const auto* app_decl = nth_sub(root, 0);
    REQUIRE(app_decl);
    REQUIRE(app_decl->instances.size() == 1);
    CHECK(app_decl->instances[0].name == "app");
    REQUIRE(app_decl->instances[0].connectors.size() == 1);
    CHECK(app_decl->instances[0].connectors[0].source.str() == "bcOut");
    CHECK(app_decl->instances[0].connectors[0].targets[0].str() == "barcodeScanner.image");

    // The second port is unnamed; its name appears only after elaboration.
    const auto* iface = std::get_if<ast::PortInterfaceDecl>(&root.elements[0]);
    REQUIRE(iface);
    CHECK(iface->ports[0].name == std::optional<std::string>("barcode"));
    CHECK_FALSE(iface->ports[1].name.has_value());
    CHECK(iface->ports[1].type.str() == "Report");
}

TEST_CASE("minimal component") {
    auto result = parse_compilation_unit("component X {}", "x.arc");
    REQUIRE(result.ok());
    CHECK(result.unit->package.empty());
    CHECK(result.unit->root->name == "X");
    CHECK(result.unit->root->elements.empty());
    CHECK(result.unit->root->config_elements.empty());
}

TEST_CASE("board lights control shares a reference type") {
    std::string text =
        "package automotive.ecu;\n"
        "import automotive.ecu.controller.TurnSignalController;\n"
        "import automotive.ecu.controller.HeadLightsController;\n"
        "component BoardLightsControl {\n"
        "  autoconnect port;\n"
        "  component TurnSignalController frontSignalController;\n"
        "  component TurnSignalController rearSignalController;\n"
        "  component HeadLightsController;\n"
        "}\n";
    auto result = parse_compilation_unit(text, "BoardLightsControl.arc");
    REQUIRE(result.ok());
    const auto& root = *result.unit->root;
    CHECK(root.name == "BoardLightsControl");
    REQUIRE(root.config_elements.size() == 1);
    CHECK(root.config_elements[0].autoconnect == ast::AutoConnectMode::Port);
    const auto* s0 = nth_sub(root, 0);
    const auto* s1 = nth_sub(root, 1);
    const auto* s2 = nth_sub(root, 2);
    REQUIRE(s2);
    CHECK(s0->type.str() == s1->type.str());
    CHECK(s0->instances[0].name == "frontSignalController");
    CHECK(s1->instances[0].name == "rearSignalController");
    CHECK(s2->instances.empty());
}

TEST_CASE("truncated port declaration yields P001 after 'in'") {
    auto result = parse_compilation_unit("component X { port in }", "x.arc");
    CHECK_FALSE(result.ok());
    REQUIRE_FALSE(result.diagnostics.empty());
    const auto& d = result.diagnostics.front();
    CHECK(d.code == "P001");
    CHECK(d.span.start.line == 1);
    CHECK(d.span.start.col == 23);  // the `}` token after `in `
}

TEST_CASE("keywords are rejected as identifiers") {
    auto result = parse_compilation_unit("component connect {}", "x.arc");
    CHECK_FALSE(result.ok());
    CHECK(result.diagnostics.front().code == "P001");

    auto result2 = parse_compilation_unit("component X { port in String port; }", "x.arc");
    CHECK_FALSE(result2.ok());
}

TEST_CASE("unterminated block comment is P002") {
    auto result = parse_compilation_unit("component X {} /* dangling", "x.arc");
    CHECK_FALSE(result.ok());
    bool found = false;
    for (const auto& d : result.diagnostics) found = found || d.code == "P002";
    CHECK(found);
}

TEST_CASE("unterminated invariant body is P002") {
    auto result = parse_compilation_unit("component X { inv i: { no end }", "x.arc");
    CHECK_FALSE(result.ok());
    bool found = false;
    for (const auto& d : result.diagnostics) found = found || d.code == "P002";
    CHECK(found);
}

TEST_CASE("invariant bodies are captured raw") {
    std::string text =
        "component X {\n"
        "  ocl inv del:\n"
        "    forall mOut in delayedAndFiltered:\n"
        "      !(mOut isin fil);\n"
        "}\n";
    auto result = parse_compilation_unit(text, "x.arc");
    REQUIRE(result.ok());
    const auto* inv = std::get_if<ast::InvariantDecl>(&result.unit->root->elements[0]);
    REQUIRE(inv);
    CHECK(inv->kind == std::optional<std::string>("ocl"));
    CHECK(inv->name == "del");
    CHECK(inv->body.find("forall mOut in delayedAndFiltered") != std::string::npos);
    CHECK(inv->body.find(';') == std::string::npos);
}

TEST_CASE("generic heads, config params and nested angle brackets") {
    std::string text =
        "component LossyDelay<T, U extends Object>[int delay, int lossrate] {\n"
        "  port in Buffer<List<T>> deep;\n"
        "}\n";
    auto result = parse_compilation_unit(text, "x.arc");
    REQUIRE(result.ok());
    const auto& root = *result.unit->root;
    REQUIRE(root.type_params.size() == 2);
    CHECK(root.type_params[1].bound.has_value());
    REQUIRE(root.config_params.size() == 2);
    CHECK(root.config_params[0].type.str() == "int");
    const auto* iface = std::get_if<ast::PortInterfaceDecl>(&root.elements[0]);
    REQUIRE(iface);
    CHECK(iface->ports[0].type.str() == "Buffer<List<T>>");
}

TEST_CASE("subcomponent vs inner definition disambiguation") {
    std::string text =
        "component Outer {\n"
        "  component Delay del {\n"
        "    port in String inData;\n"
        "  }\n"
        "  component Delay d1 [delayedData -> delayed1], d2;\n"
        "  component ma.msg.Filter('a') af;\n"
        "  component Plain;\n"
        "}\n";
    auto result = parse_compilation_unit(text, "x.arc");
    REQUIRE(result.ok());
    const auto& root = *result.unit->root;
    CHECK(root.inner_types().size() == 1);
    CHECK(root.inner_types()[0]->instance_name == std::optional<std::string>("del"));
    const auto* d = nth_sub(root, 0);
    REQUIRE(d);
    CHECK(d->instances.size() == 2);
    CHECK(d->instances[0].connectors.size() == 1);
    const auto* af = nth_sub(root, 1);
    REQUIRE(af);
    CHECK(af->type.name.str() == "ma.msg.Filter");
    REQUIRE(af->config_args.size() == 1);
    CHECK(af->config_args[0].literal_kind == ast::ConfigArg::LiteralKind::Char);
    CHECK(af->config_args[0].text == "a");
}

TEST_CASE("stereotypes are stored but not interpreted") {
    std::string text = "component X { <<hw, rate=\"10\">> port in String a; }";
    auto result = parse_compilation_unit(text, "x.arc");
    REQUIRE(result.ok());
    const auto* iface = std::get_if<ast::PortInterfaceDecl>(&result.unit->root->elements[0]);
    REQUIRE(iface);
    REQUIRE(iface->stereotype.has_value());
    CHECK(iface->stereotype->values[0].name == "hw");
    CHECK(iface->stereotype->values[1].value == std::optional<std::string>("10"));
}

TEST_CASE("minimal component round-trips byte-identically") {
    std::string canonical = "component X {}\n";
    auto result = parse_compilation_unit(canonical, "x.arc");
    REQUIRE(result.ok());
    CHECK(pretty_print(*result.unit) == canonical);
}

TEST_CASE("pretty print round trip over the fixture corpus") {
    auto files = arc_files_under(fs::path(FIXTURE_DIR) / "valid");
    REQUIRE(!files.empty());
    for (const auto& path : files) {
        CAPTURE(path.string());
        auto first = parse_compilation_unit(read_file(path), path.filename().string());
        REQUIRE(first.ok());
        std::string printed = pretty_print(*first.unit);
        auto second = parse_compilation_unit(printed, path.filename().string());
        REQUIRE(second.ok());
        CHECK(ast::structurally_equal(*first.unit, *second.unit));
        // And printing is a fixpoint after one normalization.
        CHECK(pretty_print(*second.unit) == printed);
    }
}

TEST_CASE("every node carries a usable span") {
    std::string text = "component X {\n  port in String a;\n  connect a -> a;\n}\n";
    auto result = parse_compilation_unit(text, "x.arc");
    REQUIRE(result.ok());
    const auto* conn = std::get_if<ast::ConnectorDecl>(&result.unit->root->elements[1]);
    REQUIRE(conn);
    CHECK(conn->span.file == "x.arc");
    CHECK(conn->span.start.line == 3);
    CHECK(conn->source.span.start.col == 11);
}
