#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace qsurr {

// Largest vertex count accepted by the exact (2^n enumeration / statevector)
// paths.
inline constexpr int kMaxExactQubits = 24;

using Edge = std::pair<int, int>;  // normalized u < v

struct Graph {
  int n = 0;
  std::vector<Edge> edges;  // unique, normalized, sorted

  std::vector<int> degrees() const;
  std::vector<std::vector<int>> adjacency() const;
  int max_degree() const;
  bool connected() const;
  void validate() const;  // throws on self-loops, duplicates, bad indices
};

struct MaxCutInstance {
  Graph graph;
  std::vector<double> weights;  // aligned with graph.edges, each in [0, 1]
  std::uint64_t seed = 0;
};

// Three-body term on a degree-2 site i with neighbors j < k.
struct CubicTerm {
  int i = 0, j = 0, k = 0;
  int coeff = 0;  // +-1
};

struct HeavyHexInstance {
  Graph graph;
  std::vector<int> linear;     // per vertex, +-1
  std::vector<int> quadratic;  // aligned with graph.edges, +-1
  std::vector<CubicTerm> cubic;
  std::uint64_t seed = 0;
};

// Spin assignment, entries in {-1, +1}.
using Bitstring = std::vector<int>;

struct SpectrumExtrema {
  double c_min = 0.0;
  double c_max = 0.0;
  Bitstring argmin;
  Bitstring argmax;
};

using ProblemInstance = std::variant<MaxCutInstance, HeavyHexInstance>;

int instance_size(const ProblemInstance& inst);
std::string instance_kind(const ProblemInstance& inst);

// Connected 3-regular graph with i.i.d. uniform [0,1] edge weights, built by
// the configuration model with rejection of self-loops, multi-edges and
// disconnected pairings. Requires n >= 4 and n even.
MaxCutInstance generate_3regular_maxcut(int n, std::uint64_t seed);

// Heavy-hex lattice patch: rows x cols hexagonal cells with every cell side
// subdivided by a degree-2 vertex. Max degree 3.
Graph generate_heavy_hex(int rows, int cols);

// Random +-1 coefficients on vertices, edges and every degree-2 site's
// (i, j, k) triple. Requires max degree <= 3.
HeavyHexInstance generate_heavy_hex_instance(const Graph& graph,
                                             std::uint64_t seed);

double classical_cost(const MaxCutInstance& inst, const Bitstring& z);
double classical_cost(const HeavyHexInstance& inst, const Bitstring& z);
double classical_cost(const ProblemInstance& inst, const Bitstring& z);

// Basis-index convention shared with the statevector engine: bit q of idx set
// means z_q = -1, clear means z_q = +1.
Bitstring bitstring_from_index(int n, std::uint64_t idx);
double classical_cost_at_index(const ProblemInstance& inst, std::uint64_t idx);

// Classical cost for every computational basis state, indexed as above.
std::vector<double> cost_table(const ProblemInstance& inst);
std::vector<double> cost_table_serial(const ProblemInstance& inst);  // reference

// Exact global extrema by 2^n enumeration; ties resolved toward the smallest
// basis index so results are reproducible.
SpectrumExtrema brute_force_extrema(const ProblemInstance& inst);
SpectrumExtrema brute_force_extrema_serial(const ProblemInstance& inst);

// JSON instance files and the manifest mapping instance ids to files.
nlohmann::json to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const nlohmann::json& j);
void save_instance(const ProblemInstance& inst, const std::filesystem::path& path);
ProblemInstance load_instance(const std::filesystem::path& path);

struct ManifestEntry {
  std::string id;
  std::string path;  // relative to the manifest file
  std::string kind;
  std::uint64_t seed = 0;
  int n = 0;
};

struct Manifest {
  std::vector<ManifestEntry> instances;

  const ManifestEntry& find(const std::string& id) const;
};

void save_manifest(const Manifest& m, const std::filesystem::path& path);
Manifest load_manifest(const std::filesystem::path& path);
ProblemInstance load_manifest_instance(const std::filesystem::path& manifest_path,
                                       const Manifest& m, const std::string& id);

}  // namespace qsurr
