#include "ssgbnp/instgen.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace ssgbnp {

using ordered_json = nlohmann::ordered_json;

namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

const ordered_json& require(const ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing key '") + key + "'");
  return *it;
}

double as_number(const ordered_json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + " is not a number");
  return v.get<double>();
}

std::vector<double> as_vector(const ordered_json& v, const std::string& where, long expected = -1) {
  if (!v.is_array()) throw ParseError(where + " is not an array");
  if (expected >= 0 && static_cast<long>(v.size()) != expected) {
    throw ParseError(where + " has " + std::to_string(v.size()) + " entries, expected " +
                     std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Matrix as_matrix(const ordered_json& v, const std::string& where, long rows, long cols) {
  if (!v.is_array()) throw ParseError(where + " is not an array");
  if (rows >= 0 && static_cast<long>(v.size()) != rows) {
    throw ParseError(where + " has " + std::to_string(v.size()) + " rows, expected " + std::to_string(rows));
  }
  Matrix out;
  for (std::size_t r = 0; r < v.size(); ++r) {
    const std::string row_name = where + " row " + std::to_string(r);
    if (!v[r].is_array()) throw ParseError(row_name + " is not an array");
    if (cols < 0 && r > 0) cols = static_cast<long>(out[0].size());
    out.push_back(as_vector(v[r], row_name, cols));
  }
  return out;
}

GameSSG parse_ssg(const ordered_json& j) {
  GameSSG g;
  const auto& n = require(j, "n_targets");
  const auto& k = require(j, "n_attackers");
  if (!n.is_number_integer() || !k.is_number_integer()) {
    throw ParseError("n_targets and n_attackers must be integers");
  }
  g.n_targets = n.get<int>();
  g.n_attackers = k.get<int>();
  g.p = as_vector(require(j, "p"), "p", g.n_attackers);
  g.d_prot = as_matrix(require(j, "d_prot"), "d_prot", g.n_attackers, g.n_targets);
  g.d_unprot = as_matrix(require(j, "d_unprot"), "d_unprot", g.n_attackers, g.n_targets);
  g.a_prot = as_matrix(require(j, "a_prot"), "a_prot", g.n_attackers, g.n_targets);
  g.a_unprot = as_matrix(require(j, "a_unprot"), "a_unprot", g.n_attackers, g.n_targets);
  g.w = as_vector(require(j, "w"), "w", g.n_targets);
  g.budget = as_number(require(j, "budget"), "budget");
  const auto& seed = require(j, "seed");
  if (!seed.is_number_integer()) throw ParseError("seed must be an integer");
  g.seed = seed.get<std::int64_t>();
  validate(g);
  return g;
}

GameSG parse_sg(const ordered_json& j) {
  GameSG g;
  g.p = as_vector(require(j, "p"), "p");
  const long K = static_cast<long>(g.p.size());
  auto tensor = [&](const char* key) {
    const auto& v = require(j, key);
    if (!v.is_array() || static_cast<long>(v.size()) != K) {
      throw ParseError(std::string(key) + " must hold one matrix per attacker type");
    }
    Tensor3 t;
    for (long k = 0; k < K; ++k) {
      const long rows = t.empty() ? -1 : static_cast<long>(t[0].size());
      const long cols = t.empty() ? -1 : static_cast<long>(t[0][0].size());
      t.push_back(as_matrix(v[k], std::string(key) + "[" + std::to_string(k) + "]", rows, cols));
    }
    return t;
  };
  g.R = tensor("R");
  g.C = tensor("C");
  if (!g.R.empty() && !g.C.empty() &&
      (g.R[0].size() != g.C[0].size() || (!g.R[0].empty() && g.R[0][0].size() != g.C[0][0].size()))) {
    throw ParseError("R and C dimensions differ");
  }
  validate(g);
  return g;
}

ordered_json matrix_json(const Matrix& m) {
  ordered_json out = ordered_json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

}  // namespace

GameSSG generate(int n_targets, int n_attackers, int h, int H, std::int64_t seed) {
  if (n_targets < 1 || n_attackers < 1) throw std::invalid_argument("generate: n and k must be positive");
  if (h < 1 || h > H) throw std::invalid_argument("generate: need 1 <= h <= H");
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  GameSSG g;
  g.n_targets = n_targets;
  g.n_attackers = n_attackers;
  g.seed = seed;
  g.p.assign(n_attackers, 1.0 / n_attackers);
  g.d_prot.assign(n_attackers, std::vector<double>(n_targets));
  g.d_unprot = g.a_prot = g.a_unprot = g.d_prot;
  for (int k = 0; k < n_attackers; ++k) {
    for (int j = 0; j < n_targets; ++j) {
      g.d_prot[k][j] = uniform_int(rng, 5, 10);
      g.d_unprot[k][j] = uniform_int(rng, 0, 5);
      g.a_prot[k][j] = uniform_int(rng, 0, 5);
      g.a_unprot[k][j] = uniform_int(rng, 5, 10);
    }
  }
  g.w.resize(n_targets);
  double total = 0.0;
  for (int j = 0; j < n_targets; ++j) {
    g.w[j] = uniform_int(rng, 1, 100);
    total += g.w[j];
  }
  const double delta = uniform_real(rng, 0.05, 0.95);
  g.budget = static_cast<double>(h) / (H + 1) * total + delta;
  return g;
}

std::string instance_filename(int n_targets, int n_attackers, int h, std::int64_t seed) {
  std::ostringstream os;
  os << "ssg_n" << n_targets << "_k" << n_attackers << "_h" << h << "_s" << seed << ".json";
  return os.str();
}

std::string render_instance(const GameSSG& g) {
  ordered_json j;
  j["n_targets"] = g.n_targets;
  j["n_attackers"] = g.n_attackers;
  j["p"] = g.p;
  j["d_prot"] = matrix_json(g.d_prot);
  j["d_unprot"] = matrix_json(g.d_unprot);
  j["a_prot"] = matrix_json(g.a_prot);
  j["a_unprot"] = matrix_json(g.a_unprot);
  j["w"] = g.w;
  j["budget"] = g.budget;
  j["seed"] = g.seed;
  return j.dump(1) + "\n";
}

std::string render_instance(const GameSG& g) {
  ordered_json j;
  ordered_json r = ordered_json::array(), c = ordered_json::array();
  for (const auto& m : g.R) r.push_back(matrix_json(m));
  for (const auto& m : g.C) c.push_back(matrix_json(m));
  j["R"] = r;
  j["C"] = c;
  j["p"] = g.p;
  return j.dump(1) + "\n";
}

Instance parse_instance(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) line += text[i] == '\n';
    throw ParseError("malformed JSON at line " + std::to_string(line) + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  if (j.contains("R") || j.contains("C")) return parse_sg(j);
  return parse_ssg(j);
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_instance(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

GameSSG load_ssg(const std::filesystem::path& path) {
  auto inst = load_instance(path);
  if (!std::holds_alternative<GameSSG>(inst)) {
    throw ParseError(path.string() + ": expected a security-game instance");
  }
  return std::get<GameSSG>(std::move(inst));
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::visit([](const auto& g) { return render_instance(g); }, inst);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace ssgbnp
