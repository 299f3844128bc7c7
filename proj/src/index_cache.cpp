#include "qmt/index_cache.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "qmt/result.hpp"

namespace qmt {

namespace {

using nlohmann::json;

constexpr int kCacheVersion = 1;

std::string hash_text(std::uint64_t hash) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

}  // namespace

void write_index_cache(const std::string& path, const Index& index,
                       std::uint64_t library_hash) {
  json doc;
  doc["version"] = kCacheVersion;
  doc["hash"] = hash_text(library_hash);
  json concepts = json::object();
  for (const ConceptName& name : index.concepts.names()) {
    json members = json::array();
    for (const Value& member : index.concepts.extent(name)) {
      members.push_back(value_to_json(member));
    }
    concepts[name] = std::move(members);
  }
  doc["concepts"] = std::move(concepts);
  json relations = json::object();
  for (const RelationName& name : index.relations.names()) {
    json pairs = json::array();
    for (const auto& [source, target] : index.relations.pairs(name)) {
      pairs.push_back(json::array({value_to_json(source), value_to_json(target)}));
    }
    relations[name] = std::move(pairs);
  }
  doc["relations"] = std::move(relations);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write index cache '" + path + "'");
  out << doc.dump(2) << "\n";
}

std::optional<Index> read_index_cache(const std::string& path, std::uint64_t expected_hash,
                                      std::string* warning) {
  auto miss = [&](const std::string& why) -> std::optional<Index> {
    if (warning) *warning = "index cache '" + path + "' " + why + "; rebuilding from the library";
    return std::nullopt;
  };
  std::ifstream in(path, std::ios::binary);
  if (!in) return miss("is not readable");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error&) {
    return miss("is not valid JSON");
  }
  try {
    if (!doc.is_object() || doc.value("version", -1) != kCacheVersion) {
      return miss("has an unsupported version");
    }
    if (doc.value("hash", std::string{}) != hash_text(expected_hash)) {
      return miss("was built from a different library (hash mismatch)");
    }
    Index index;
    for (const auto& [name, members] : doc.at("concepts").items()) {
      for (const json& member : members) index.concepts.add(name, value_from_json(member));
    }
    for (const auto& [name, pairs] : doc.at("relations").items()) {
      for (const json& pair : pairs) {
        if (!pair.is_array() || pair.size() != 2) return miss("holds a malformed relation pair");
        index.relations.add(name, value_from_json(pair[0]), value_from_json(pair[1]));
      }
    }
    return index;
  } catch (const std::exception&) {
    return miss("holds malformed content");
  }
}

}  // namespace qmt
