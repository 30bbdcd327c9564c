#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "montiarc/typesys.hpp"

using namespace montiarc;
using types::SubtypeResult;
using types::TypeRegistry;

namespace {

ast::TypeExpr type_of(const std::string& text) {
    // Tiny builder for tests: `Base<Arg1, Arg2>[]...` with single-level
    // nesting spelled out by the callers instead.
    ast::TypeExpr t;
    t.base.segments = {text};
    return t;
}

ast::TypeExpr with_args(const std::string& base, std::vector<ast::TypeExpr> args, int dims = 0) {
    ast::TypeExpr t;
    t.base.segments = {base};
    t.args = std::move(args);
    t.array_dims = dims;
    return t;
}

}  // namespace

TEST_CASE("subtype relation follows the registry") {
    TypeRegistry reg = TypeRegistry::with_builtins();
    CHECK(types::is_subtype(type_of("Integer"), type_of("Object"), reg).yes());
    CHECK_FALSE(types::is_subtype(type_of("Object"), type_of("String"), reg).yes());
    CHECK(types::is_subtype(type_of("String"), type_of("Object"), reg).yes());
    CHECK(types::is_subtype(type_of("Integer"), type_of("Number"), reg).yes());
    CHECK_FALSE(types::is_subtype(type_of("Number"), type_of("Integer"), reg).yes());
    for (const char* name : {"Object", "String", "Integer", "Number", "Boolean", "Character"})
        CHECK(types::is_subtype(type_of(name), type_of(name), reg).yes());
}

TEST_CASE("unknown types are reported, not silently incompatible") {
    TypeRegistry reg = TypeRegistry::with_builtins();
    auto answer = types::is_subtype(type_of("Mystery"), type_of("Object"), reg);
    CHECK(answer.result == SubtypeResult::UnknownType);
    CHECK(answer.unknown_name == "Mystery");
    // Structural equality wins before registry lookup.
    CHECK(types::is_subtype(type_of("Mystery"), type_of("Mystery"), reg).yes());
}

TEST_CASE("type parameters are opaque") {
    TypeRegistry reg = TypeRegistry::with_builtins();
    std::set<std::string> params{"T"};
    CHECK(types::is_subtype(type_of("T"), type_of("T"), reg, params).yes());
    CHECK_FALSE(types::is_subtype(type_of("T"), type_of("Object"), reg, params).yes());
    CHECK_FALSE(types::is_subtype(type_of("Integer"), type_of("T"), reg, params).yes());
}

TEST_CASE("arrays and generic arguments are invariant") {
    TypeRegistry reg = TypeRegistry::with_builtins();
    reg.add_type("List");
    auto integer_array = with_args("Integer", {}, 1);
    auto object_array = with_args("Object", {}, 1);
    CHECK_FALSE(types::is_subtype(integer_array, object_array, reg).yes());
    CHECK(types::is_subtype(integer_array, integer_array, reg).yes());
    CHECK_FALSE(types::is_subtype(type_of("Integer"), integer_array, reg).yes());

    auto list_int = with_args("List", {type_of("Integer")});
    auto list_obj = with_args("List", {type_of("Object")});
    CHECK_FALSE(types::is_subtype(list_int, list_obj, reg).yes());
}

TEST_CASE("subtype relation is a partial order on the builtin registry") {
    TypeRegistry reg = TypeRegistry::with_builtins();
    std::vector<std::string> names{"Object", "String", "Integer", "Number", "Boolean", "Character"};
    for (const auto& a : names) {
        CHECK(reg.reaches(a, a));  // reflexive
        for (const auto& b : names) {
            for (const auto& c : names) {  // transitive
                if (reg.reaches(a, b) && reg.reaches(b, c)) CHECK(reg.reaches(a, c));
            }
            if (a != b) CHECK_FALSE(reg.reaches(a, b) && reg.reaches(b, a));  // antisymmetric
        }
    }
}

TEST_CASE("registry rejects cycles at load") {
    TypeRegistry reg = TypeRegistry::with_builtins();
    std::string error;
    CHECK_FALSE(reg.load_text("extends Object Integer", "<test>", error));
    CHECK(!error.empty());

    TypeRegistry reg2 = TypeRegistry::with_builtins();
    CHECK(reg2.load_text("type Foo\nextends Foo Object\n# comment\n", "<test>", error));
    CHECK(reg2.reaches("Foo", "Object"));
}

TEST_CASE("substitution replaces parameters at any depth") {
    types::TypeBinding binding;
    binding.params = {"K", "V"};
    binding.args = {type_of("Integer"), type_of("String")};

    auto r1 = types::substitute(type_of("K"), binding);
    CHECK(r1.ok());
    CHECK(r1.type.str() == "Integer");

    auto r2 = types::substitute(type_of("String"), binding);
    CHECK(r2.type.str() == "String");

    // List<T>[] with T -> Integer becomes List<Integer>[]; checked by
    // expanding the structure by hand.
    types::TypeBinding tb;
    tb.params = {"T"};
    tb.args = {type_of("Integer")};
    auto nested = with_args("List", {type_of("T")}, 1);
    auto r3 = types::substitute(nested, tb);
    CHECK(r3.ok());
    CHECK(r3.type.str() == "List<Integer>[]");

    // Array dimensions accumulate when a parameter maps to an array type.
    types::TypeBinding ab;
    ab.params = {"T"};
    ab.args = {with_args("String", {}, 1)};
    auto r4 = types::substitute(with_args("T", {}, 1), ab);
    CHECK(r4.type.str() == "String[][]");
}

TEST_CASE("substitution flags unbound parameters") {
    types::TypeBinding binding;
    binding.params = {"K", "V"};
    binding.args = {type_of("Integer")};  // V unbound
    auto r = types::substitute(type_of("V"), binding);
    CHECK_FALSE(r.ok());
    CHECK(r.unbound_param == std::optional<std::string>("V"));
}

TEST_CASE("substitution is idempotent for parameter-free arguments") {
    types::TypeBinding binding;
    binding.params = {"T"};
    binding.args = {with_args("List", {type_of("Integer")})};
    auto once = types::substitute(with_args("Buffer", {type_of("T")}, 1), binding);
    auto twice = types::substitute(once.type, binding);
    CHECK(ast::structurally_equal(once.type, twice.type));
}

TEST_CASE("default names lowercase the first character of the last segment") {
    CHECK(types::default_name(type_of("Report")) == std::optional<std::string>("report"));
    CHECK(types::default_name(type_of("BarcodeScanner")) ==
          std::optional<std::string>("barcodeScanner"));
    CHECK(types::default_name(with_args("Buffer", {type_of("Integer")})) ==
          std::optional<std::string>("buffer"));
    ast::TypeExpr qualified;
    qualified.base.segments = {"ma", "msg", "Filter"};
    CHECK(types::default_name(qualified) == std::optional<std::string>("filter"));
}

TEST_CASE("default names never produce keywords") {
    // A type named like a capitalized keyword cannot derive a usable name.
    for (const char* name : {"Inv", "Port", "Component", "Connect", "Type", "On", "Off"}) {
        auto derived = types::default_name_for(name);
        CHECK_FALSE(derived.has_value());
    }
    CHECK(types::default_name_for("Invariant").has_value());  // `invariant` is fine
}
