#include <fstream>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

#include "hypercount/graph.hpp"

namespace hypercount::graph {

namespace {

std::vector<int> index_list(const YAML::Node& node, const char* name, int n) {
  if (!node.IsSequence()) throw std::invalid_argument(std::string(name) + " must be a list");
  if (static_cast<int>(node.size()) != n)
    throw std::invalid_argument(std::string(name) + " has " + std::to_string(node.size()) + " entries, expected " +
                                std::to_string(n));
  std::vector<int> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    try {
      out.push_back(node[i].as<int>());
    } catch (const YAML::Exception&) {
      throw std::invalid_argument(std::string(name) + " entry " + std::to_string(i) + " is not an integer");
    }
  }
  return out;
}

}  // namespace

GraphFile parse_graph_text(const std::string& text) {
  YAML::Node doc;
  try {
    doc = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("graph file: ") + e.what());
  }
  if (!doc.IsMap() || !doc["half_edges"] || !doc["pairing"])
    throw std::invalid_argument("graph file needs half_edges and pairing");
  const int n = doc["half_edges"].as<int>();
  if (n <= 0) throw std::invalid_argument("half_edges must be positive");
  GraphFile out;
  auto pairing = index_list(doc["pairing"], "pairing", n);
  if (doc["cyclic"]) {
    out.fat = FatGraph(pairing, index_list(doc["cyclic"], "cyclic", n));
    out.graph = out.fat.graph();
    out.has_cyclic = true;
  } else if (doc["vertex_of"]) {
    out.graph = Graph(pairing, index_list(doc["vertex_of"], "vertex_of", n));
  } else {
    out.graph = Graph::trivalent(pairing);
  }
  return out;
}

GraphFile read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open graph file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph_text(ss.str());
}

std::string write_graph_text(const FatGraph& x) {
  auto list = [](const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + "]";
  };
  return "half_edges: " + std::to_string(x.graph().half_edge_count()) + "\npairing: " + list(x.graph().pairing()) +
         "\ncyclic: " + list(x.sigma()) + "\n";
}

}  // namespace hypercount::graph
