#include "folio/structure_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace folio {

namespace {

Element element_from_json(const nlohmann::json& j) {
  Element e;
  if (j.is_string()) {
    e = j.get<std::string>();
  } else if (j.is_number_integer()) {
    e = std::to_string(j.get<long long>());
  } else if (j.is_number()) {
    e = j.dump();
  } else {
    throw SignatureError("structure element must be a string or number, got " + j.dump());
  }
  if (e.find(kCompositeDelimiter) != Element::npos)
    throw SignatureError("element '" + e + "' contains the reserved delimiter '|'");
  return e;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) {
    auto b = cur.find_first_not_of(" \t\r");
    auto e = cur.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

Structure structure_from_json(const nlohmann::json& j, const Signature* hint) {
  if (!j.is_object()) throw SignatureError("structure JSON must be an object");
  Structure s;
  if (j.contains("sorts")) {
    for (const auto& sort : j.at("sorts")) s.set_universe(sort.get<std::string>(), {});
  }
  std::map<std::string, std::set<Element>> seen;  // elements occurring per sort
  if (j.contains("relations")) {
    for (const auto& [name, spec] : j.at("relations").items()) {
      const nlohmann::json* tuples = &spec;
      SortWord arity;
      if (spec.is_object()) {
        tuples = &spec.at("tuples");
        if (spec.contains("arity"))
          for (const auto& a : spec.at("arity")) arity.push_back(a.get<std::string>());
      }
      if (!tuples->is_array()) throw SignatureError("tuples of relation '" + name + "' must be an array");
      std::set<Tuple> rows;
      for (const auto& row : *tuples) {
        if (!row.is_array()) throw SignatureError("tuple of relation '" + name + "' must be an array");
        Tuple t;
        for (const auto& e : row) t.push_back(element_from_json(e));
        rows.insert(std::move(t));
      }
      if (arity.empty() && rows.empty() && hint && hint->has_relation(name)) arity = hint->arity(name);
      if (arity.empty()) {
        if (rows.empty()) throw SignatureError("relation '" + name + "' needs an explicit arity when empty");
        arity.assign(rows.begin()->size(), kDefaultSort);
      }
      for (const auto& t : rows) {
        if (t.size() != arity.size()) throw SignatureError("tuple of wrong length in relation '" + name + "'");
        for (std::size_t i = 0; i < t.size(); ++i) seen[arity[i]].insert(t[i]);
      }
      s.declare_relation(name, arity);
      s.set_relation(name, std::move(rows));
    }
  }
  if (j.contains("universes")) {
    for (const auto& [sort, elems] : j.at("universes").items()) {
      std::vector<Element> u;
      for (const auto& e : elems) u.push_back(element_from_json(e));
      s.set_universe(sort, std::move(u));
    }
  }
  // Sorts without an explicit universe get the elements that occur in them.
  for (const auto& sort : s.signature().sorts()) {
    bool explicit_universe = j.contains("universes") && j.at("universes").contains(sort);
    if (!explicit_universe) {
      const auto& occ = seen[sort];
      s.set_universe(sort, std::vector<Element>(occ.begin(), occ.end()));
    }
  }
  s.validate();
  return s;
}

nlohmann::json structure_to_json(const Structure& s) {
  nlohmann::json j;
  j["sorts"] = nlohmann::json::array();
  for (const auto& sort : s.signature().sorts()) j["sorts"].push_back(sort);
  j["universes"] = nlohmann::json::object();
  for (const auto& [sort, elems] : s.universes()) j["universes"][sort] = elems;
  j["relations"] = nlohmann::json::object();
  for (const auto& [name, arity] : s.signature().relations()) {
    nlohmann::json rel;
    rel["arity"] = arity;
    rel["tuples"] = nlohmann::json::array();
    for (const auto& t : s.relation(name)) rel["tuples"].push_back(t);
    j["relations"][name] = std::move(rel);
  }
  return j;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Structure load_structure_json(const std::filesystem::path& path, const Signature* hint) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("invalid JSON in '" + path.string() + "': " + e.what());
  }
  return structure_from_json(j, hint);
}

Structure load_structure_csv(const std::vector<std::filesystem::path>& paths) {
  Structure s;
  std::map<std::string, std::set<Element>> seen;
  for (const auto& path : paths) {
    std::istringstream in(read_file(path));
    std::string line;
    SortWord arity;
    std::set<Tuple> rows;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      auto cells = split_csv_line(line);
      if (arity.empty()) {
        arity = cells;
        for (const auto& a : arity)
          if (a.empty()) throw SignatureError("empty sort name in header of '" + path.string() + "'");
        continue;
      }
      if (cells.size() != arity.size())
        throw SignatureError("row with " + std::to_string(cells.size()) + " cells in '" + path.string() +
                             "', header has " + std::to_string(arity.size()));
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].find(kCompositeDelimiter) != std::string::npos)
          throw SignatureError("element '" + cells[i] + "' contains the reserved delimiter '|'");
        seen[arity[i]].insert(cells[i]);
      }
      rows.insert(std::move(cells));
    }
    if (arity.empty()) throw SignatureError("CSV file '" + path.string() + "' has no header");
    std::string name = path.stem().string();
    s.declare_relation(name, arity);
    s.set_relation(name, std::move(rows));
  }
  for (const auto& sort : s.signature().sorts()) {
    const auto& occ = seen[sort];
    s.set_universe(sort, std::vector<Element>(occ.begin(), occ.end()));
  }
  s.validate();
  return s;
}

Graph parse_edge_list(const std::string& text) {
  std::set<std::string> vertices;
  std::set<std::pair<std::string, std::string>> edges;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> words;
    for (std::string w; ls >> w;) words.push_back(w);
    if (words.empty()) continue;
    if (words.size() > 2) throw Error("edge list line " + std::to_string(lineno) + ": expected 'u v'");
    for (const auto& w : words)
      if (w.find(kCompositeDelimiter) != std::string::npos)
        throw Error("vertex '" + w + "' contains the reserved delimiter '|'");
    vertices.insert(words.begin(), words.end());
    if (words.size() == 2 && words[0] != words[1]) edges.insert(std::minmax(words[0], words[1]));
  }
  return Graph{{vertices.begin(), vertices.end()}, {edges.begin(), edges.end()}};
}

}  // namespace folio
