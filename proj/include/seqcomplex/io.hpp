#pragma once

#include "seqcomplex/classes.hpp"
#include "seqcomplex/trees.hpp"

#include <json.hpp>

#include <string>

namespace seqcomplex {

// JSON shapes:
//   tree  {"depth": T, "values": [ints in storage order]}
//   class {"domain_size": n, "scale": S, "kind": name, "functions": [[ints]]}
// Levels classes add "levels": k. Malformed documents raise StructureError;
// value constraints are enforced by the same constructors the library uses.
nlohmann::json tree_to_json(const DomainTree& x);
DomainTree tree_from_json(const nlohmann::json& j);

nlohmann::json class_to_json(const FunctionClass& cls);
FunctionClass class_from_json(const nlohmann::json& j);

// File variants; a missing or unreadable path raises StructureError.
nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);
DomainTree load_tree(const std::string& path);
FunctionClass load_class(const std::string& path);
void save_tree(const std::string& path, const DomainTree& x);
void save_class(const std::string& path, const FunctionClass& cls);

}  // namespace seqcomplex
