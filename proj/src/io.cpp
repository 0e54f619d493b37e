#include "seqcomplex/io.hpp"

#include "seqcomplex/errors.hpp"

#include <fstream>
#include <utility>
#include <vector>

namespace seqcomplex {

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw StructureError(std::string("missing field \"") + name + "\"");
    return *it;
}

}  // namespace

nlohmann::json tree_to_json(const DomainTree& x) {
    return nlohmann::json{{"depth", x.depth}, {"values", x.values}};
}

DomainTree tree_from_json(const nlohmann::json& j) {
    try {
        int depth = field(j, "depth").get<int>();
        auto values = field(j, "values").get<std::vector<int>>();
        return DomainTree(depth, std::move(values));
    } catch (const nlohmann::json::exception& e) {
        throw StructureError(std::string("tree document malformed: ") + e.what());
    }
}

nlohmann::json class_to_json(const FunctionClass& cls) {
    nlohmann::json j{{"domain_size", cls.domain_size},
                     {"scale", cls.scale},
                     {"kind", kind_name(cls.kind)},
                     {"functions", cls.table}};
    if (cls.kind == ClassKind::Levels) j["levels"] = cls.levels;
    return j;
}

FunctionClass class_from_json(const nlohmann::json& j) {
    try {
        int n = field(j, "domain_size").get<int>();
        long long scale = field(j, "scale").get<long long>();
        ClassKind kind = kind_from_name(field(j, "kind").get<std::string>());
        auto table = field(j, "functions").get<std::vector<std::vector<long long>>>();
        int levels = j.value("levels", 0);
        return make_class(n, scale, kind, levels, std::move(table));
    } catch (const nlohmann::json::exception& e) {
        throw StructureError(std::string("class document malformed: ") + e.what());
    }
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructureError("cannot open \"" + path + "\"");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw StructureError("cannot parse \"" + path + "\": " + e.what());
    }
}

void save_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw StructureError("cannot write \"" + path + "\"");
    out << j.dump(2) << "\n";
}

DomainTree load_tree(const std::string& path) { return tree_from_json(load_json(path)); }

FunctionClass load_class(const std::string& path) { return class_from_json(load_json(path)); }

void save_tree(const std::string& path, const DomainTree& x) { save_json(path, tree_to_json(x)); }

void save_class(const std::string& path, const FunctionClass& cls) {
    save_json(path, class_to_json(cls));
}

}  // namespace seqcomplex
