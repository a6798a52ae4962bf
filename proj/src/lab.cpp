#include "hypercount/lab.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace hypercount::lab {

using hyperbolic::kPi;
using realization::MarkedRepresentation;
using realization::MinimizeStatus;
using surface::SurfaceGroup;
using surface::Word;

namespace {

constexpr std::pair<Kind, const char*> kKindNames[] = {
    {Kind::Delsarte, "delsarte"},
    {Kind::Sectors, "sectors"},
    {Kind::Huber, "huber"},
    {Kind::CriticalCount, "critical-count"},
    {Kind::BoxCount, "box-count"},
    {Kind::Census, "census"},
    {Kind::LambdaAudit, "lambda-audit"},
    {Kind::FatFraction, "fat-fraction"},
    {Kind::Hexagon, "hexagon"},
    {Kind::AngleDefect, "angle-defect"},
    {Kind::OracleCheck, "oracle-check"},
};

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

int automorphism_count(const graph::Graph& g) {
  return static_cast<int>(graph::graph_automorphisms(g).size());
}

std::string number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// CSV field splitting with "" escapes inside quoted fields.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

double parse_double(const std::string& s) {
  double x = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::invalid_argument("bad number: " + s);
  return x;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

}  // namespace

const char* kind_name(Kind k) {
  for (auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

std::optional<Kind> parse_kind(const std::string& name) {
  for (auto& [kind, n] : kKindNames)
    if (name == n) return kind;
  return std::nullopt;
}

graph::Graph named_graph(const std::string& name) {
  if (name == "theta") return graph::Graph::theta();
  if (name == "dumbbell") return graph::Graph::dumbbell();
  try {
    return graph::read_graph_file(name).graph;
  } catch (const std::invalid_argument& e) {
    throw InvalidConfig(std::string("graph: ") + e.what());
  }
}

graph::FatGraph genus_fat_graph(int genus) {
  if (genus == 1) return graph::FatGraph::trivalent({3, 4, 5, 0, 1, 2});
  if (genus == 2) return graph::fat_census(2).entries.front().graph;
  throw InvalidConfig("genus-fat must be 1 or 2");
}

void validate(const ExperimentConfig& c) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw InvalidConfig(what);
  };
  need(c.format == "csv" || c.format == "json", "format must be csv or json");
  need(c.threads >= 1, "threads must be at least 1");
  need(c.budget.max_elements > 0 && c.budget.max_seconds > 0.0, "budget must be positive");
  switch (c.kind) {
    case Kind::Delsarte:
    case Kind::Huber:
      need(c.genus >= 2, "genus must be at least 2");
      need(c.L > 0.0, "L must be positive");
      break;
    case Kind::Sectors:
      need(c.genus >= 2, "genus must be at least 2");
      need(c.L > 0.0 && c.h > 0.0, "L and h must be positive");
      need(c.sector_i > 0.0 && c.sector_i <= 2.0 * kPi, "sector-i must be in (0, 2pi]");
      need(c.sector_j > 0.0 && c.sector_j <= 2.0 * kPi, "sector-j must be in (0, 2pi]");
      break;
    case Kind::CriticalCount:
    case Kind::OracleCheck:
      need(c.genus >= 2, "genus must be at least 2");
      need(c.L > 0.0, "L must be positive");
      need(!c.graph.empty(), "graph is required");
      break;
    case Kind::BoxCount:
      need(c.genus >= 2, "genus must be at least 2");
      need(!c.lvec.empty(), "lvec is required");
      need(std::all_of(c.lvec.begin(), c.lvec.end(), [](double l) { return l > 0.0; }), "lvec entries must be positive");
      need(c.h > 0.0, "h must be positive");
      break;
    case Kind::Census:
      need(c.genus == 1 || c.genus == 2, "census supports genus 1 and 2");
      break;
    case Kind::LambdaAudit:
      need(c.genus >= 2, "genus must be at least 2");
      need(c.genus_fat == 1 || c.genus_fat == 2, "genus-fat must be 1 or 2");
      need(c.samples > 0, "samples must be positive");
      need(c.min_edge >= 0.0, "min-edge must be non-negative");
      break;
    case Kind::FatFraction:
      need(c.genus >= 2, "genus must be at least 2");
      need(c.samples > 0, "samples must be positive");
      break;
    case Kind::Hexagon:
      need(c.epsilon > 0.0 && c.epsilon < kPi / 6.0, "epsilon must be in (0, pi/6)");
      break;
    case Kind::AngleDefect:
      need(c.samples > 0, "samples must be positive");
      break;
  }
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node doc;
  try {
    doc = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw InvalidConfig(std::string("config: ") + e.what());
  }
  if (!doc.IsMap()) throw InvalidConfig("config must be a mapping");
  ExperimentConfig c;
  const YAML::Node& cdoc = doc;  // const lookups do not insert keys
  auto field = [&](const char* a, const char* b = nullptr) -> YAML::Node {
    if (cdoc[a]) return cdoc[a];
    if (b && cdoc[b]) return cdoc[b];
    return YAML::Node(YAML::NodeType::Undefined);
  };
  auto get = [&](auto& out, const char* a, const char* b = nullptr) {
    YAML::Node n = field(a, b);
    if (!n) return;
    try {
      out = n.as<std::remove_reference_t<decltype(out)>>();
    } catch (const YAML::Exception&) {
      throw InvalidConfig(std::string("config field ") + a + " has the wrong type");
    }
  };
  std::string kind;
  get(kind, "kind");
  if (kind.empty()) throw InvalidConfig("config needs kind");
  auto k = parse_kind(kind);
  if (!k) throw InvalidConfig("unknown kind " + kind);
  c.kind = *k;
  get(c.genus, "genus");
  get(c.L, "L");
  get(c.h, "h");
  get(c.epsilon, "epsilon");
  get(c.graph, "graph");
  get(c.lvec, "lvec");
  get(c.sector_i, "sector_i", "sector-i");
  get(c.sector_j, "sector_j", "sector-j");
  get(c.genus_fat, "genus_fat", "genus-fat");
  get(c.min_edge, "min_edge", "min-edge");
  get(c.samples, "samples");
  get(c.seed, "seed");
  get(c.threads, "threads");
  get(c.output, "output");
  get(c.format, "format");
  get(c.timing, "timing");
  get(c.budget.max_elements, "max_elements", "max-elements");
  get(c.budget.max_seconds, "max_seconds", "max-seconds");
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ReportRow make_row(std::string kind, Json params, double measured, double predicted, std::int64_t runtime_ms) {
  ReportRow r;
  r.kind = std::move(kind);
  r.params = std::move(params);
  r.measured = measured;
  r.predicted = predicted;
  r.ratio = predicted != 0.0 ? measured / predicted : 0.0;
  r.runtime_ms = runtime_ms;
  return r;
}

double predict(const std::string& kind, const Json& p) {
  auto num = [&](const char* key) {
    if (!p.contains(key)) throw std::invalid_argument(kind + " prediction needs " + key);
    return p.at(key).get<double>();
  };
  auto area = [&] { return 4.0 * kPi * (num("genus") - 1.0); };
  if (kind == "huber") return std::exp(num("L")) / num("L");
  if (kind == "delsarte") return kPi * std::exp(num("L")) / area();
  if (kind == "sectors")
    return num("sector_i") * num("sector_j") / (4.0 * kPi) * (std::exp(num("L") + num("h")) - std::exp(num("L"))) /
           area();
  if (kind == "critical-count")
    return realization::critical_count_prediction(static_cast<int>(num("chi")), num("L"), 2.0 * kPi * area());
  if (kind == "box-count")
    return realization::box_count_prediction(static_cast<int>(num("chi")), p.at("lvec").get<std::vector<double>>(),
                                             num("h"), area());
  if (kind == "census") {
    const int g = static_cast<int>(num("genus"));
    return 2.0 / std::pow(12.0, g) * factorial(6 * g - 5) / (factorial(g) * factorial(3 * g - 3));
  }
  if (kind == "genus-count") {
    const int g = static_cast<int>(num("genus"));
    const double vol = 2.0 * kPi * area();
    return 2.0 / (std::pow(12.0, g) * factorial(g) * factorial(3 * g - 2) * std::pow(vol, 2 * g - 1)) *
           std::pow(num("L"), 6 * g - 4) * std::exp(num("L") / 2.0);
  }
  if (kind == "immersed") return std::pow(2.0, -(4.0 * num("genus") - 2.0));
  if (kind == "kappa") return -3.0 * num("chi") * std::log(4.0 / 3.0);
  if (kind == "fat-fraction") return std::pow(2.0, 2.0 * num("chi"));
  if (kind == "hexagon-diameter") return 4.0 / 3.0;
  if (kind == "hexagon-area") return 2.0 / std::sqrt(3.0);
  if (kind == "angle-defect") return 2.0 * std::atan(std::sinh(num("d")) * std::tanh(num("ell") / 2.0));
  throw std::invalid_argument("no prediction for kind " + kind);
}

// ---------------------------------------------------------------------------
// Sampling.

Word random_word(const SurfaceGroup& s, Rng& rng, int min_len, int max_len) {
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<int> pick(0, 2 * s.rank() - 1);
  const int n = len(rng);
  Word w;
  while (static_cast<int>(w.size()) < n) {
    const int k = pick(rng);
    const char c = static_cast<char>(k < s.rank() ? 'a' + k : 'A' + (k - s.rank()));
    if (!w.empty() && w.back() == surface::inverse_letter(c)) continue;
    w += c;
  }
  return s.dehn_reduce(w);
}

MarkedRepresentation random_representation(const SurfaceGroup& s, const graph::Graph& g, Rng& rng, int min_len,
                                           int max_len) {
  MarkedRepresentation rep{g, realization::bfs_spanning_tree(g, 0), std::vector<Word>(g.edge_count())};
  for (int e = 0; e < g.edge_count(); ++e)
    if (!rep.tree[e]) rep.holonomy[e] = random_word(s, rng, min_len, max_len);
  return rep;
}

MarkedRepresentation random_edge_word_representation(const SurfaceGroup& s, const graph::Graph& g, Rng& rng,
                                                     int min_len, int max_len) {
  std::vector<Word> w(g.edge_count());
  for (auto& x : w) x = random_word(s, rng, min_len, max_len);
  // Potentials along the tree, so that tree edges become trivial.
  const auto tree = realization::bfs_spanning_tree(g, 0);
  std::vector<Word> pot(g.vertex_count());
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int v = queue[qi];
    for (int h : g.half_edges_at(v)) {
      const int e = g.edge_of(h);
      const int u = g.vertex_of(g.opposite(h));
      if (!tree[e] || seen[u]) continue;
      pot[u] = s.dehn_reduce(pot[v] + (g.is_tail(h) ? w[e] : surface::inverse(w[e])));
      seen[u] = 1;
      queue.push_back(u);
    }
  }
  MarkedRepresentation rep{g, tree, std::vector<Word>(g.edge_count())};
  for (int e = 0; e < g.edge_count(); ++e)
    if (!tree[e]) rep.holonomy[e] = s.dehn_reduce(pot[g.tail(e)] + w[e] + surface::inverse(pot[g.head(e)]));
  return rep;
}

SampledComponent sample_critical(const SurfaceGroup& s, const graph::Graph& g, Rng& rng, bool edge_words,
                                 int max_attempts) {
  SampledComponent out;
  while (out.attempts < max_attempts) {
    ++out.attempts;
    out.rep = edge_words ? random_edge_word_representation(s, g, rng) : random_representation(s, g, rng);
    out.result = realization::minimize_to_critical(s, out.rep, realization::default_start(g, s.base_point()));
    if (out.result.status == MinimizeStatus::Critical) return out;
  }
  throw surface::BudgetExceeded("no critical component within the attempt budget", 0);
}

double constructed_angle_defect(double d, double ell) {
  // Axis: the geodesic through the reference point in direction pi/2; x sits
  // on the perpendicular through the reference point.
  const auto g = hyperbolic::Isometry::translation(kPi / 2.0, ell);
  const auto x = hyperbolic::exp_map(hyperbolic::Point::reference(), 0.0, d);
  const auto gx = hyperbolic::apply(g, x);
  const auto out = hyperbolic::log_map(x, gx).direction;
  const auto back = hyperbolic::apply(g.inverse(), hyperbolic::arrival_direction(x, gx));
  return hyperbolic::angle_between(out, back);
}

// ---------------------------------------------------------------------------
// Experiments.

namespace {

struct Runner {
  const ExperimentConfig& c;
  std::vector<ReportRow>& rows;

  void add(Json params, double measured, double predicted) {
    rows.push_back(make_row(kind_name(c.kind), std::move(params), measured, predicted, 0));
  }

  void delsarte() {
    const SurfaceGroup s(c.genus);
    const auto orbit = surface::enumerate_orbit(s, s.base_point(), s.base_point(), c.L, c.budget);
    Json p{{"genus", c.genus}, {"L", c.L}};
    add(p, static_cast<double>(orbit.size()), predict("delsarte", p));
  }

  void sectors() {
    const SurfaceGroup s(c.genus);
    const auto arcs = surface::enumerate_sector_arcs(s, s.base_point(), {0.0, c.sector_i}, s.base_point(),
                                                     {0.0, c.sector_j}, c.L, c.h, c.budget);
    Json p{{"genus", c.genus}, {"L", c.L}, {"h", c.h}, {"sector_i", c.sector_i}, {"sector_j", c.sector_j}};
    add(p, static_cast<double>(arcs.size()), predict("sectors", p));
  }

  void huber() {
    const SurfaceGroup s(c.genus);
    const auto classes = surface::enumerate_conjugacy_classes(s, c.L, c.budget);
    const auto primitive = std::count_if(classes.begin(), classes.end(), [](auto& k) { return k.primitive; });
    Json p{{"genus", c.genus}, {"L", c.L}};
    const double pred = predict("huber", p);
    Json q = p;
    q["quantity"] = "primitive";
    add(q, static_cast<double>(primitive), pred);
    q["quantity"] = "all";
    add(q, static_cast<double>(classes.size()), pred);
    q["quantity"] = "primitive_fraction";
    add(q, classes.empty() ? 0.0 : static_cast<double>(primitive) / static_cast<double>(classes.size()), 1.0);
  }

  realization::EnumerateOptions enum_options() const {
    realization::EnumerateOptions opt;
    opt.threads = c.threads;
    opt.budget = c.budget;
    return opt;
  }

  void critical_count() {
    const SurfaceGroup s(c.genus);
    const auto g = named_graph(c.graph);
    if (!g.trivalent_p() || !g.connected()) throw InvalidConfig("graph must be trivalent and connected");
    const auto res = realization::enumerate_critical(s, g, c.L, enum_options());
    Json p{{"graph", c.graph}, {"genus", c.genus}, {"L", c.L}, {"chi", g.euler_characteristic()}};
    const double pred = predict("critical-count", p);
    Json q = p;
    q["count"] = "raw";
    q["not_converged"] = res.not_converged;
    add(q, static_cast<double>(res.raw_count), pred);
    q["count"] = "quotient";
    q["automorphisms"] = automorphism_count(g);
    add(q, static_cast<double>(res.quotient_count), pred / automorphism_count(g));
  }

  void box_count() {
    const SurfaceGroup s(c.genus);
    const auto g = named_graph(c.graph);
    if (!g.trivalent_p() || !g.connected()) throw InvalidConfig("graph must be trivalent and connected");
    if (static_cast<int>(c.lvec.size()) != g.edge_count())
      throw InvalidConfig("lvec needs one entry per edge (" + std::to_string(g.edge_count()) + ")");
    double top = 0.0;
    for (double l : c.lvec) top += l + c.h;
    const auto res = realization::enumerate_critical(s, g, top, enum_options());
    std::size_t inside = 0;
    for (const auto& comp : res.components) {
      bool ok = true;
      for (int e = 0; e < g.edge_count() && ok; ++e)
        ok = comp.edge_lengths[e] > c.lvec[e] && comp.edge_lengths[e] <= c.lvec[e] + c.h;
      inside += ok;
    }
    Json p{{"graph", c.graph}, {"genus", c.genus}, {"lvec", c.lvec}, {"h", c.h},
           {"chi", g.euler_characteristic()}, {"count", "raw"}};
    add(p, static_cast<double>(inside), predict("box-count", p));
  }

  void census() {
    const auto cen = graph::fat_census(c.genus);
    Json p{{"genus", c.genus},
           {"entries", cen.entries.size()},
           {"weighted_sum", cen.weighted_sum.str()},
           {"labeled_count", cen.labeled_count},
           {"count", "quotient"}};
    add(p, cen.weighted_sum.value(), predict("census", p));
  }

  void lambda_audit() {
    const SurfaceGroup s(c.genus);
    const auto fx = genus_fat_graph(c.genus_fat);
    const auto& g = fx.graph();
    Rng rng(c.seed);
    const double two_kappa = 2.0 * realization::kappa(c.genus_fat);
    const long max_attempts = 1000L * c.samples;
    long attempts = 0;
    for (int i = 0; i < c.samples;) {
      if (++attempts > max_attempts)
        throw surface::BudgetExceeded("lambda audit: too few samples with the requested minimum edge", i);
      auto rep = random_edge_word_representation(s, g, rng);
      auto res = realization::minimize_to_critical(s, rep, realization::default_start(g, s.base_point()));
      if (res.status != MinimizeStatus::Critical) continue;
      realization::Realization r(s, rep, res.lifts);
      const auto lengths = r.edge_lengths();
      const double shortest = min_of(lengths);
      if (shortest < c.min_edge) continue;
      const auto b = realization::lambda_boundary(s, fx, r);
      const auto hom = s.abelianize(b.word);
      const bool trivial = std::all_of(hom.begin(), hom.end(), [](int x) { return x == 0; });
      Json p{{"genus", c.genus}, {"genus_fat", c.genus_fat}, {"sample", i},
             {"min_edge", shortest}, {"length", r.total_length()}, {"homology_trivial", trivial}};
      add(p, b.length, 2.0 * r.total_length() - two_kappa);
      ++i;
    }
  }

  void fat_fraction() {
    const SurfaceGroup s(c.genus);
    const auto fx = genus_fat_graph(1);
    const auto& g = fx.graph();
    Rng rng(c.seed);
    int compatible = 0, attempts = 0;
    for (int i = 0; i < c.samples;) {
      auto sc = sample_critical(s, g, rng, false);
      attempts += sc.attempts;
      realization::Realization r(s, sc.rep, sc.result.lifts);
      try {
        compatible += realization::is_fat_compatible(fx, r);
      } catch (const realization::DegenerateTangents&) {
        continue;
      }
      ++i;
    }
    Json p{{"genus", c.genus}, {"graph", "theta"}, {"samples", c.samples},
           {"compatible", compatible}, {"attempts", attempts}, {"chi", g.euler_characteristic()}};
    add(p, static_cast<double>(compatible) / c.samples, predict("fat-fraction", p));
  }

  void hexagon() {
    const auto st = hyperbolic::hexagon_stats(c.epsilon);
    Json p{{"epsilon", c.epsilon}, {"quantity", "diameter/epsilon"}};
    add(p, st.diameter / c.epsilon, predict("hexagon-diameter", p));
    p["quantity"] = "area/epsilon^2";
    add(p, st.area / (c.epsilon * c.epsilon), predict("hexagon-area", p));
    p["quantity"] = "vertex_gap/epsilon";
    add(p, st.vertex_gap / c.epsilon, 2.0 / 3.0);
  }

  void angle_defect() {
    Rng rng(c.seed);
    std::uniform_real_distribution<double> dd(0.0, 3.0), ll(0.1, 8.0);
    for (int i = 0; i < c.samples; ++i) {
      const double d = dd(rng), ell = ll(rng);
      Json p{{"sample", i}, {"d", d}, {"ell", ell}};
      add(p, constructed_angle_defect(d, ell), predict("angle-defect", p));
    }
  }

  void oracle_check() {
    const SurfaceGroup s(c.genus);
    const auto g = named_graph(c.graph);
    if (g.first_betti_number() != 2) throw InvalidConfig("oracle-check needs a graph of rank 2");
    const auto pruned = realization::enumerate_critical(s, g, c.L, enum_options());
    const auto brute = realization::enumerate_critical_brute_force(s, g, c.L, enum_options());
    std::size_t matched = 0;
    for (const auto& b : brute.components) {
      for (const auto& p : pruned.components) {
        if (std::abs(p.length - b.length) > 1e-6 * std::max(1.0, b.length)) continue;
        if (realization::equivalent_components(s, p, b)) {
          ++matched;
          break;
        }
      }
    }
    Json p{{"graph", c.graph}, {"genus", c.genus}, {"L", c.L}};
    p["count"] = "raw";
    add(p, static_cast<double>(pruned.raw_count), static_cast<double>(brute.raw_count));
    p["count"] = "quotient";
    add(p, static_cast<double>(pruned.quotient_count), static_cast<double>(brute.quotient_count));
    p["count"] = "raw_matched";
    add(p, static_cast<double>(matched), static_cast<double>(brute.raw_count));
  }
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& c) {
  validate(c);
  ExperimentResult out;
  Runner run{c, out.rows};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (c.kind) {
      case Kind::Delsarte: run.delsarte(); break;
      case Kind::Sectors: run.sectors(); break;
      case Kind::Huber: run.huber(); break;
      case Kind::CriticalCount: run.critical_count(); break;
      case Kind::BoxCount: run.box_count(); break;
      case Kind::Census: run.census(); break;
      case Kind::LambdaAudit: run.lambda_audit(); break;
      case Kind::FatFraction: run.fat_fraction(); break;
      case Kind::Hexagon: run.hexagon(); break;
      case Kind::AngleDefect: run.angle_defect(); break;
      case Kind::OracleCheck: run.oracle_check(); break;
    }
  } catch (const surface::BudgetExceeded& e) {
    out.truncated = true;
    Json p{{"truncated", true}, {"reason", e.what()}, {"produced", e.produced()}};
    out.rows.push_back(make_row(kind_name(c.kind), std::move(p), static_cast<double>(e.produced()), 0.0, 0));
  }
  if (c.timing) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    for (auto& r : out.rows) r.runtime_ms = ms.count();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports.

std::string format_report(const std::vector<ReportRow>& rows, const std::string& format) {
  if (format == "json") {
    Json arr = Json::array();
    for (const auto& r : rows)
      arr.push_back(Json{{"kind", r.kind},
                         {"params", r.params},
                         {"measured", r.measured},
                         {"predicted", r.predicted},
                         {"ratio", r.ratio},
                         {"runtime_ms", r.runtime_ms}});
    return arr.dump(2) + "\n";
  }
  if (format != "csv") throw std::invalid_argument("unknown report format " + format);
  std::string out = "kind,param_json,measured,predicted,ratio,runtime_ms\n";
  for (const auto& r : rows) {
    std::string pj;
    for (char ch : r.params.dump()) pj += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    out += r.kind + ",\"" + pj + "\"," + number(r.measured) + "," + number(r.predicted) + "," + number(r.ratio) +
           "," + std::to_string(r.runtime_ms) + "\n";
  }
  return out;
}

std::vector<ReportRow> parse_report(const std::string& text, const std::string& format) {
  std::vector<ReportRow> rows;
  if (format == "json") {
    for (const auto& o : Json::parse(text)) {
      ReportRow r;
      r.kind = o.at("kind").get<std::string>();
      r.params = o.at("params");
      r.measured = o.at("measured").get<double>();
      r.predicted = o.at("predicted").get<double>();
      r.ratio = o.at("ratio").get<double>();
      r.runtime_ms = o.at("runtime_ms").get<std::int64_t>();
      rows.push_back(std::move(r));
    }
    return rows;
  }
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "kind,param_json,measured,predicted,ratio,runtime_ms")
    throw std::invalid_argument("missing CSV header");
  while (std::getline(in, line)) {
    const auto f = split_csv_line(line);
    if (f.size() != 6) throw std::invalid_argument("CSV row needs 6 fields");
    ReportRow r;
    r.kind = f[0];
    r.params = Json::parse(f[1]);
    r.measured = parse_double(f[2]);
    r.predicted = parse_double(f[3]);
    r.ratio = parse_double(f[4]);
    r.runtime_ms = std::stoll(f[5]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void emit_report(const std::vector<ReportRow>& rows, const std::string& format, const std::string& path) {
  const std::string text = format_report(rows, format);
  if (path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out.flush()) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace hypercount::lab
