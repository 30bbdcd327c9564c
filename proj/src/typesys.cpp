#include "montiarc/typesys.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "montiarc/lexer.hpp"

namespace montiarc::types {

TypeRegistry TypeRegistry::with_builtins() {
    TypeRegistry reg;
    for (const char* name : {"Object", "String", "Integer", "Number", "Boolean", "Character"})
        reg.add_type(name);
    std::string err;
    reg.add_edge("Integer", "Number", err);
    reg.add_edge("Number", "Object", err);
    reg.add_edge("String", "Object", err);
    reg.add_edge("Boolean", "Object", err);
    reg.add_edge("Character", "Object", err);
    return reg;
}

void TypeRegistry::add_type(const std::string& name) { types_.insert(name); }

bool TypeRegistry::has_type(const std::string& name) const { return types_.count(name) > 0; }

bool TypeRegistry::would_cycle(const std::string& sub, const std::string& sup) const {
    // Adding sub -> sup cycles iff sup already reaches sub.
    return reaches(sup, sub);
}

bool TypeRegistry::add_edge(const std::string& sub, const std::string& sup, std::string& error) {
    if (sub == sup || would_cycle(sub, sup)) {
        error = "supertype cycle: " + sub + " extends " + sup;
        return false;
    }
    add_type(sub);
    add_type(sup);
    supers_[sub].insert(sup);
    return true;
}

bool TypeRegistry::reaches(const std::string& sub, const std::string& sup) const {
    if (sub == sup) return true;
    std::vector<std::string> work{sub};
    std::set<std::string> seen{sub};
    while (!work.empty()) {
        std::string cur = work.back();
        work.pop_back();
        auto it = supers_.find(cur);
        if (it == supers_.end()) continue;
        for (const auto& next : it->second) {
            if (next == sup) return true;
            if (seen.insert(next).second) work.push_back(next);
        }
    }
    return false;
}

bool TypeRegistry::load_text(std::string_view text, const std::string& origin, std::string& error) {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word) || word[0] == '#') continue;
        if (word == "type") {
            std::string name;
            if (!(ls >> name)) {
                error = origin + ":" + std::to_string(lineno) + ": expected `type <Name>`";
                return false;
            }
            add_type(name);
        } else if (word == "extends") {
            std::string sub, sup;
            if (!(ls >> sub >> sup)) {
                error = origin + ":" + std::to_string(lineno) + ": expected `extends <Sub> <Super>`";
                return false;
            }
            std::string why;
            if (!add_edge(sub, sup, why)) {
                error = origin + ":" + std::to_string(lineno) + ": " + why;
                return false;
            }
        } else {
            error = origin + ":" + std::to_string(lineno) + ": unknown record '" + word + "'";
            return false;
        }
    }
    return true;
}

bool TypeRegistry::load_file(const std::string& path, std::string& error) {
    std::ifstream f(path);
    if (!f) {
        error = "cannot open type registry file: " + path;
        return false;
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return load_text(buf.str(), path, error);
}

namespace {

bool args_equal(const std::vector<ast::TypeExpr>& a, const std::vector<ast::TypeExpr>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!ast::structurally_equal(a[i], b[i])) return false;
    return true;
}

}  // namespace

SubtypeAnswer is_subtype(const ast::TypeExpr& sub, const ast::TypeExpr& sup,
                         const TypeRegistry& reg, const std::set<std::string>& type_params) {
    if (ast::structurally_equal(sub, sup)) return {SubtypeResult::Yes, {}};

    const std::string sub_base = sub.base.str();
    const std::string sup_base = sup.base.str();
    const bool sub_is_param = sub.base.size() == 1 && type_params.count(sub_base) > 0;
    const bool sup_is_param = sup.base.size() == 1 && type_params.count(sup_base) > 0;
    // In-scope type parameters are opaque: compatible only with themselves.
    if (sub_is_param || sup_is_param) return {SubtypeResult::No, {}};

    if (!reg.has_type(sub_base)) return {SubtypeResult::UnknownType, sub_base};
    if (!reg.has_type(sup_base)) return {SubtypeResult::UnknownType, sup_base};

    if (sub.array_dims != sup.array_dims) return {SubtypeResult::No, {}};
    if (!args_equal(sub.args, sup.args)) return {SubtypeResult::No, {}};
    return {reg.reaches(sub_base, sup_base) ? SubtypeResult::Yes : SubtypeResult::No, {}};
}

const ast::TypeExpr* TypeBinding::lookup(const std::string& param) const {
    for (size_t i = 0; i < params.size(); ++i)
        if (params[i] == param) return i < args.size() ? &args[i] : nullptr;
    return nullptr;
}

namespace {

void substitute_into(const ast::TypeExpr& t, const TypeBinding& binding,
                     ast::TypeExpr& out, std::optional<std::string>& unbound) {
    const bool is_param_name =
        t.base.size() == 1 &&
        std::find(binding.params.begin(), binding.params.end(), t.base.segments[0]) !=
            binding.params.end();
    if (is_param_name) {
        const ast::TypeExpr* arg = binding.lookup(t.base.segments[0]);
        if (!arg) {
            if (!unbound) unbound = t.base.segments[0];
            out = t;
            return;
        }
        out = *arg;
        out.array_dims += t.array_dims;  // `T[]` with T -> String[] becomes String[][]
        for (const auto& nested : t.args) {
            ast::TypeExpr sub_arg;
            substitute_into(nested, binding, sub_arg, unbound);
            out.args.push_back(std::move(sub_arg));
        }
        return;
    }
    out.base = t.base;
    out.array_dims = t.array_dims;
    out.args.clear();
    for (const auto& nested : t.args) {
        ast::TypeExpr sub_arg;
        substitute_into(nested, binding, sub_arg, unbound);
        out.args.push_back(std::move(sub_arg));
    }
}

}  // namespace

SubstituteResult substitute(const ast::TypeExpr& t, const TypeBinding& binding) {
    SubstituteResult res;
    if (binding.params.empty()) {
        res.type = t;
        return res;
    }
    substitute_into(t, binding, res.type, res.unbound_param);
    return res;
}

std::optional<std::string> default_name_for(const std::string& type_name) {
    if (type_name.empty()) return std::nullopt;
    std::string name = type_name;
    name[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(name[0])));
    if (is_keyword(name)) return std::nullopt;
    return name;
}

std::optional<std::string> default_name(const ast::TypeExpr& t) {
    return default_name_for(t.base.last());
}

std::string type_to_string(const ast::TypeExpr& t) { return t.str(); }

}  // namespace montiarc::types
