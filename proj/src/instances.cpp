#include "qsurr/instances.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "qsurr/parallel.hpp"
#include "qsurr/rng.hpp"

namespace qsurr {

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(n, 0);
  for (const auto& [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

std::vector<std::vector<int>> Graph::adjacency() const {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

int Graph::max_degree() const {
  const auto deg = degrees();
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

bool Graph::connected() const {
  if (n == 0) return true;
  const auto adj = adjacency();
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
  }
  return reached == n;
}

void Graph::validate() const {
  std::set<Edge> seen;
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("graph edge endpoint out of range");
    if (u == v) throw std::invalid_argument("graph has a self-loop");
    if (u > v) throw std::invalid_argument("graph edge not normalized");
    if (!seen.insert({u, v}).second)
      throw std::invalid_argument("graph has a duplicate edge");
  }
}

int instance_size(const ProblemInstance& inst) {
  return std::visit([](const auto& i) { return i.graph.n; }, inst);
}

std::string instance_kind(const ProblemInstance& inst) {
  return std::holds_alternative<MaxCutInstance>(inst) ? "maxcut" : "heavy_hex";
}

MaxCutInstance generate_3regular_maxcut(int n, std::uint64_t seed) {
  if (n < 4) throw std::invalid_argument("3-regular generation needs n >= 4");
  if (n % 2 != 0)
    throw std::invalid_argument("3-regular graphs need an even vertex count");

  Rng rng(derive_seed(seed, /*tag=*/101));
  constexpr int kMaxRetries = 10000;

  // Configuration model: three stubs per vertex, paired after a shuffle.
  std::vector<int> stubs(3 * static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    for (int s = 0; s < 3; ++s) stubs[3 * v + s] = v;

  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    rng.shuffle(stubs);
    std::set<Edge> edge_set;
    bool simple = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      if (u == v) {
        simple = false;
        break;
      }
      if (u > v) std::swap(u, v);
      if (!edge_set.insert({u, v}).second) {
        simple = false;
        break;
      }
    }
    if (!simple) continue;

    Graph g;
    g.n = n;
    g.edges.assign(edge_set.begin(), edge_set.end());
    if (!g.connected()) continue;

    MaxCutInstance inst;
    inst.graph = std::move(g);
    inst.seed = seed;
    inst.weights.reserve(inst.graph.edges.size());
    for (std::size_t e = 0; e < inst.graph.edges.size(); ++e)
      inst.weights.push_back(rng.uniform());
    return inst;
  }
  throw std::runtime_error("configuration model failed to produce a simple "
                           "connected 3-regular graph");
}

Graph generate_heavy_hex(int rows, int cols) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("heavy-hex patch needs rows, cols >= 1");

  // Honeycomb in brick-wall coordinates: cell (r, c) is the 6-cycle on
  // {(a,r),(a+1,r),(a+2,r),(a+2,r+1),(a+1,r+1),(a,r+1)} with a = 2c + (r & 1).
  std::map<std::pair<int, int>, int> vertex_id;
  auto vid = [&](int x, int y) {
    auto [it, inserted] =
        vertex_id.try_emplace({x, y}, static_cast<int>(vertex_id.size()));
    (void)inserted;
    return it->second;
  };
  std::set<Edge> cell_edges;
  auto add_edge = [&](int u, int v) {
    if (u > v) std::swap(u, v);
    cell_edges.insert({u, v});
  };

  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const int a = 2 * c + (r & 1);
      const int top[3] = {vid(a, r), vid(a + 1, r), vid(a + 2, r)};
      const int bot[3] = {vid(a, r + 1), vid(a + 1, r + 1), vid(a + 2, r + 1)};
      add_edge(top[0], top[1]);
      add_edge(top[1], top[2]);
      add_edge(bot[0], bot[1]);
      add_edge(bot[1], bot[2]);
      add_edge(top[0], bot[0]);
      add_edge(top[2], bot[2]);
    }

  // Subdivide every cell side with one extra vertex.
  const int corners = static_cast<int>(vertex_id.size());
  Graph g;
  g.n = corners + static_cast<int>(cell_edges.size());
  int mid = corners;
  for (const auto& [u, v] : cell_edges) {
    g.edges.push_back({std::min(u, mid), std::max(u, mid)});
    g.edges.push_back({std::min(v, mid), std::max(v, mid)});
    ++mid;
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.validate();
  return g;
}

HeavyHexInstance generate_heavy_hex_instance(const Graph& graph,
                                             std::uint64_t seed) {
  graph.validate();
  if (graph.max_degree() > 3)
    throw std::invalid_argument("heavy-hex coefficients need max degree <= 3");

  Rng rng(derive_seed(seed, /*tag=*/102));
  HeavyHexInstance inst;
  inst.graph = graph;
  inst.seed = seed;

  inst.linear.resize(graph.n);
  for (int v = 0; v < graph.n; ++v) inst.linear[v] = rng.sign();

  inst.quadratic.resize(graph.edges.size());
  for (std::size_t e = 0; e < graph.edges.size(); ++e)
    inst.quadratic[e] = rng.sign();

  const auto deg = graph.degrees();
  const auto adj = graph.adjacency();
  for (int i = 0; i < graph.n; ++i) {
    if (deg[i] != 2) continue;
    int j = adj[i][0], k = adj[i][1];
    if (j > k) std::swap(j, k);
    inst.cubic.push_back({i, j, k, rng.sign()});
  }
  return inst;
}

namespace {

void check_length(int n, const Bitstring& z) {
  if (static_cast<int>(z.size()) != n)
    throw std::invalid_argument("bitstring length does not match instance");
}

}  // namespace

double classical_cost(const MaxCutInstance& inst, const Bitstring& z) {
  check_length(inst.graph.n, z);
  double cost = 0.0;
  for (std::size_t e = 0; e < inst.graph.edges.size(); ++e) {
    const auto& [u, v] = inst.graph.edges[e];
    cost += inst.weights[e] * z[u] * z[v];
  }
  return cost;
}

double classical_cost(const HeavyHexInstance& inst, const Bitstring& z) {
  check_length(inst.graph.n, z);
  double cost = 0.0;
  for (int v = 0; v < inst.graph.n; ++v) cost += inst.linear[v] * z[v];
  for (std::size_t e = 0; e < inst.graph.edges.size(); ++e) {
    const auto& [u, v] = inst.graph.edges[e];
    cost += inst.quadratic[e] * z[u] * z[v];
  }
  for (const auto& t : inst.cubic) cost += t.coeff * z[t.i] * z[t.j] * z[t.k];
  return cost;
}

double classical_cost(const ProblemInstance& inst, const Bitstring& z) {
  return std::visit([&](const auto& i) { return classical_cost(i, z); }, inst);
}

Bitstring bitstring_from_index(int n, std::uint64_t idx) {
  Bitstring z(n);
  for (int q = 0; q < n; ++q) z[q] = ((idx >> q) & 1u) ? -1 : +1;
  return z;
}

double classical_cost_at_index(const ProblemInstance& inst, std::uint64_t idx) {
  return classical_cost(inst, bitstring_from_index(instance_size(inst), idx));
}

namespace {

void check_enumerable(int n) {
  if (n > kMaxExactQubits)
    throw std::invalid_argument("instance too large for 2^n enumeration");
  if (n < 1) throw std::invalid_argument("instance has no vertices");
}

}  // namespace

std::vector<double> cost_table_serial(const ProblemInstance& inst) {
  const int n = instance_size(inst);
  check_enumerable(n);
  const std::uint64_t dim = 1ull << n;
  std::vector<double> table(dim);
  for (std::uint64_t idx = 0; idx < dim; ++idx)
    table[idx] = classical_cost_at_index(inst, idx);
  return table;
}

std::vector<double> cost_table(const ProblemInstance& inst) {
  const int n = instance_size(inst);
  check_enumerable(n);
  const std::uint64_t dim = 1ull << n;
  std::vector<double> table(dim);
#pragma omp parallel for schedule(static)
  for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(dim); ++idx)
    table[idx] = classical_cost_at_index(inst, static_cast<std::uint64_t>(idx));
  return table;
}

namespace {

struct ExtremaAcc {
  double c_min = 0.0, c_max = 0.0;
  std::uint64_t argmin = 0, argmax = 0;
  bool init = false;

  void consider(double c, std::uint64_t idx) {
    if (!init) {
      c_min = c_max = c;
      argmin = argmax = idx;
      init = true;
      return;
    }
    if (c < c_min) {
      c_min = c;
      argmin = idx;
    }
    if (c > c_max) {
      c_max = c;
      argmax = idx;
    }
  }

  // Lower basis index wins ties, so merge order must be ascending in index.
  void merge(const ExtremaAcc& o) {
    if (!o.init) return;
    if (!init) {
      *this = o;
      return;
    }
    if (o.c_min < c_min) {
      c_min = o.c_min;
      argmin = o.argmin;
    }
    if (o.c_max > c_max) {
      c_max = o.c_max;
      argmax = o.argmax;
    }
  }
};

SpectrumExtrema finish_extrema(const ProblemInstance& inst,
                               const ExtremaAcc& acc) {
  const int n = instance_size(inst);
  SpectrumExtrema ext;
  ext.c_min = acc.c_min;
  ext.c_max = acc.c_max;
  ext.argmin = bitstring_from_index(n, acc.argmin);
  ext.argmax = bitstring_from_index(n, acc.argmax);
  return ext;
}

}  // namespace

SpectrumExtrema brute_force_extrema_serial(const ProblemInstance& inst) {
  const int n = instance_size(inst);
  check_enumerable(n);
  const std::uint64_t dim = 1ull << n;
  ExtremaAcc acc;
  for (std::uint64_t idx = 0; idx < dim; ++idx)
    acc.consider(classical_cost_at_index(inst, idx), idx);
  return finish_extrema(inst, acc);
}

SpectrumExtrema brute_force_extrema(const ProblemInstance& inst) {
  const int n = instance_size(inst);
  check_enumerable(n);
  const std::uint64_t dim = 1ull << n;
  const std::size_t chunks = std::min<std::uint64_t>(kReduceChunks, dim);
  std::vector<ExtremaAcc> partial(chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::uint64_t lo = dim * c / chunks;
    const std::uint64_t hi = dim * (c + 1) / chunks;
    ExtremaAcc acc;
    for (std::uint64_t idx = lo; idx < hi; ++idx)
      acc.consider(classical_cost_at_index(inst, idx), idx);
    partial[c] = acc;
  }
  ExtremaAcc total;
  for (const auto& acc : partial) total.merge(acc);
  return finish_extrema(inst, total);
}

nlohmann::json to_json(const ProblemInstance& inst) {
  nlohmann::json j;
  j["kind"] = instance_kind(inst);
  j["n"] = instance_size(inst);
  if (const auto* mc = std::get_if<MaxCutInstance>(&inst)) {
    j["seed"] = mc->seed;
    j["edges"] = mc->graph.edges;
    j["weights"] = mc->weights;
  } else {
    const auto& hh = std::get<HeavyHexInstance>(inst);
    j["seed"] = hh.seed;
    j["edges"] = hh.graph.edges;
    j["linear"] = hh.linear;
    j["quadratic"] = hh.quadratic;
    auto cubic = nlohmann::json::array();
    for (const auto& t : hh.cubic)
      cubic.push_back({t.i, t.j, t.k, t.coeff});
    j["cubic"] = cubic;
  }
  return j;
}

ProblemInstance instance_from_json(const nlohmann::json& j) {
  Graph g;
  g.n = j.at("n").get<int>();
  g.edges = j.at("edges").get<std::vector<Edge>>();
  g.validate();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "maxcut") {
    MaxCutInstance inst;
    inst.graph = std::move(g);
    inst.weights = j.at("weights").get<std::vector<double>>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    if (inst.weights.size() != inst.graph.edges.size())
      throw std::invalid_argument("weights not aligned with edges");
    return inst;
  }
  if (kind == "heavy_hex") {
    HeavyHexInstance inst;
    inst.graph = std::move(g);
    inst.linear = j.at("linear").get<std::vector<int>>();
    inst.quadratic = j.at("quadratic").get<std::vector<int>>();
    for (const auto& t : j.at("cubic"))
      inst.cubic.push_back({t.at(0).get<int>(), t.at(1).get<int>(),
                            t.at(2).get<int>(), t.at(3).get<int>()});
    inst.seed = j.at("seed").get<std::uint64_t>();
    if (inst.linear.size() != static_cast<std::size_t>(inst.graph.n) ||
        inst.quadratic.size() != inst.graph.edges.size())
      throw std::invalid_argument("coefficients not aligned with graph");
    return inst;
  }
  throw std::invalid_argument("unknown instance kind: " + kind);
}

void save_instance(const ProblemInstance& inst,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(inst).dump(2) << '\n';
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  nlohmann::json j;
  in >> j;
  return instance_from_json(j);
}

const ManifestEntry& Manifest::find(const std::string& id) const {
  for (const auto& e : instances)
    if (e.id == id) return e;
  throw std::invalid_argument("unknown instance id: " + id);
}

void save_manifest(const Manifest& m, const std::filesystem::path& path) {
  nlohmann::json j;
  auto arr = nlohmann::json::array();
  for (const auto& e : m.instances)
    arr.push_back({{"id", e.id},
                   {"path", e.path},
                   {"kind", e.kind},
                   {"seed", e.seed},
                   {"n", e.n}});
  j["instances"] = arr;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  nlohmann::json j;
  in >> j;
  Manifest m;
  for (const auto& e : j.at("instances"))
    m.instances.push_back({e.at("id").get<std::string>(),
                           e.at("path").get<std::string>(),
                           e.at("kind").get<std::string>(),
                           e.at("seed").get<std::uint64_t>(),
                           e.at("n").get<int>()});
  return m;
}

ProblemInstance load_manifest_instance(
    const std::filesystem::path& manifest_path, const Manifest& m,
    const std::string& id) {
  const auto& entry = m.find(id);
  return load_instance(manifest_path.parent_path() / entry.path);
}

}  // namespace qsurr
