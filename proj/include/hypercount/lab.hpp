#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypercount/graph.hpp"
#include "hypercount/realization.hpp"
#include "hypercount/surface.hpp"

namespace hypercount::lab {

using Json = nlohmann::ordered_json;

enum class Kind {
  Delsarte,
  Sectors,
  Huber,
  CriticalCount,
  BoxCount,
  Census,
  LambdaAudit,
  FatFraction,
  Hexagon,
  AngleDefect,
  OracleCheck,
};
const char* kind_name(Kind k);
std::optional<Kind> parse_kind(const std::string& name);

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  Kind kind = Kind::Census;
  int genus = 2;
  double L = 0.0;
  double h = 1.0;
  double epsilon = 0.01;
  std::string graph = "theta";
  std::vector<double> lvec;
  double sector_i = hyperbolic::kPi;  // widths, radians
  double sector_j = hyperbolic::kPi;
  int genus_fat = 1;
  double min_edge = 8.0;
  int samples = 100;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string output;  // empty: stdout
  std::string format = "csv";
  bool timing = true;  // false writes runtime_ms = 0
  surface::EnumerationBudget budget{};
};

// Throws InvalidConfig naming the first missing or bad field.
void validate(const ExperimentConfig& c);
// YAML mapping with the field names above (sector-i, genus-fat, ... also
// accepted with dashes).
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& yaml_text);

struct ReportRow {
  std::string kind;
  Json params = Json::object();
  double measured = 0.0;
  double predicted = 0.0;
  double ratio = 0.0;  // measured / predicted, 0 when predicted is 0
  std::int64_t runtime_ms = 0;
};
ReportRow make_row(std::string kind, Json params, double measured, double predicted, std::int64_t runtime_ms);

// Closed-form predictions. Kinds: huber, delsarte, sectors, critical-count,
// box-count, census, genus-count, immersed, kappa, fat-fraction, hexagon-diameter,
// hexagon-area, angle-defect.
double predict(const std::string& kind, const Json& params);

struct ExperimentResult {
  std::vector<ReportRow> rows;
  bool truncated = false;
};
// Budget overruns end the experiment early: rows produced so far are kept and
// a final row with params {"truncated": true, ...} is appended.
ExperimentResult run_experiment(const ExperimentConfig& c);

std::string format_report(const std::vector<ReportRow>& rows, const std::string& format);
std::vector<ReportRow> parse_report(const std::string& text, const std::string& format);
// Empty path writes to stdout.
void emit_report(const std::vector<ReportRow>& rows, const std::string& format, const std::string& path);

// ---------------------------------------------------------------------------
// Random components. Words are freely reduced random words with length
// uniform in [min_len, max_len], then Dehn-reduced.

using Rng = std::mt19937_64;

surface::Word random_word(const surface::SurfaceGroup& s, Rng& rng, int min_len = 4, int max_len = 10);
// One random word per non-tree edge of the bfs tree from vertex 0.
realization::MarkedRepresentation random_representation(const surface::SurfaceGroup& s,
                                                        const graph::Graph& g, Rng& rng,
                                                        int min_len = 4, int max_len = 10);
// One random word w_e per edge, every edge e read as the path from the base
// lift of its tail through w_e to the base lift of its head; gauged to the bfs
// tree. Critical realizations of these components tend to have all edges
// long (about the displacement of w_e).
realization::MarkedRepresentation random_edge_word_representation(const surface::SurfaceGroup& s,
                                                                  const graph::Graph& g, Rng& rng,
                                                                  int min_len = 4, int max_len = 10);

struct SampledComponent {
  realization::MarkedRepresentation rep;
  realization::MinimizeResult result;
  int attempts = 0;
};
// Draws until the minimizer reports Critical; throws BudgetExceeded after
// max_attempts draws.
SampledComponent sample_critical(const surface::SurfaceGroup& s, const graph::Graph& g, Rng& rng,
                                 bool edge_words, int max_attempts = 1000);

// Defect of the loop through a point at distance d from the axis of a
// translation of length ell, measured on an explicit construction.
double constructed_angle_defect(double d, double ell);

// Named graphs: theta, dumbbell; fat graphs: theta-fat (genus 1), genus2-fat
// (first entry of the genus-2 census). Anything else is read as a graph file.
graph::Graph named_graph(const std::string& name);
graph::FatGraph genus_fat_graph(int genus);

}  // namespace hypercount::lab
