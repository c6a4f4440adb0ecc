#include "mcid/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mcid::io {

namespace {

// Splits into whitespace-separated tokens with `#` comments removed, remembering line numbers.
struct Token {
  std::string text;
  int line;
};

std::vector<Token> tokenize(std::istream& in) {
  std::vector<Token> out;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) out.push_back({tok, no});
  }
  return out;
}

double to_double(const Token& t) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t.text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.text.size()) throw ParseError("line " + std::to_string(t.line) + ": not a number: '" + t.text + "'");
  return v;
}

long to_long(const Token& t) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(t.text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.text.size()) throw ParseError("line " + std::to_string(t.line) + ": not an integer: '" + t.text + "'");
  return v;
}

std::ifstream open(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  return f;
}

}  // namespace

Eigen::MatrixXd parse_matrix(std::istream& in) {
  const auto toks = tokenize(in);
  if (toks.empty()) throw ParseError("empty matrix file");
  const long n = to_long(toks[0]);
  if (n < 1 || n > 100000) throw ParseError("invalid state count " + toks[0].text);
  if (static_cast<long>(toks.size()) - 1 != n * n)
    throw ParseError("expected " + std::to_string(n * n) + " entries, found " + std::to_string(toks.size() - 1));
  Eigen::MatrixXd m(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) m(i, j) = to_double(toks[1 + i * n + j]);
  return m;
}

Eigen::MatrixXd read_matrix_file(const std::string& path) {
  auto f = open(path);
  return parse_matrix(f);
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << m.rows() << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

Trajectory parse_trajectory(std::istream& in) {
  std::string first;
  int line_no = 0;
  // The header is itself a comment line, so read it before tokenizing.
  while (std::getline(in, first)) {
    ++line_no;
    if (first.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  if (first.rfind("#n=", 0) != 0) throw ParseError("trajectory file must start with '#n=<universe>'");
  Trajectory w;
  w.n = static_cast<int>(to_long({first.substr(3), line_no}));
  if (w.n < 1) throw ParseError("invalid universe size in trajectory header");
  for (const auto& t : tokenize(in)) {
    const long s = to_long({t.text, t.line + line_no});
    if (s < 0 || s >= w.n)
      throw ParseError("line " + std::to_string(t.line + line_no) + ": state " + t.text + " outside [0, " +
                       std::to_string(w.n) + ")");
    w.states.push_back(static_cast<State>(s));
  }
  return w;
}

Trajectory read_trajectory_file(const std::string& path) {
  auto f = open(path);
  return parse_trajectory(f);
}

void write_trajectory(std::ostream& out, const Trajectory& w) {
  out << "#n=" << w.n << '\n';
  for (State s : w.states) out << s << '\n';
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("config: trials must be at least 1");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("config: eps must lie in (0, 1)");
  if (beta_override && !(*beta_override > 0.0 && *beta_override < 1.0))
    throw std::invalid_argument("config: beta must lie in (0, 1)");
  if (trajectory_cap < 2) throw std::invalid_argument("config: trajectory_cap must be at least 2");
  const Constants& k = constants;
  for (double v : {k.c_samp, k.c_len, k.c_test, k.c_emb, k.C_fc, k.c_N})
    if (!(v > 0.0)) throw std::invalid_argument("config: constants must be positive");
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "master_seed") c.master_seed = value.get<std::uint64_t>(), c.master_seed_given = true;
      else if (key == "eps") c.eps = value.get<double>();
      else if (key == "beta") c.beta_override = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
      else if (key == "trials") c.trials = value.get<int>();
      else if (key == "trajectory_cap") c.trajectory_cap = value.get<std::size_t>();
      else if (key == "constants") {
        if (!value.is_object()) throw ParseError("config: constants must be an object");
        for (const auto& [name, v] : value.items()) {
          double* slot = name == "c_samp" ? &c.constants.c_samp
                         : name == "c_len" ? &c.constants.c_len
                         : name == "c_test" ? &c.constants.c_test
                         : name == "c_emb" ? &c.constants.c_emb
                         : name == "C_fc" ? &c.constants.C_fc
                         : name == "c_N" ? &c.constants.c_N
                                         : nullptr;
          if (!slot) throw ParseError("config: unknown constant '" + name + "'");
          *slot = v.get<double>();
        }
      } else {
        throw ParseError("config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig read_config_file(const std::string& path) {
  auto f = open(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse_config(j);
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["master_seed"] = c.master_seed;
  j["eps"] = c.eps;
  j["beta"] = c.beta();
  j["trials"] = c.trials;
  j["trajectory_cap"] = c.trajectory_cap;
  const Constants& k = c.constants;
  j["constants"] = {{"c_samp", k.c_samp}, {"c_len", k.c_len}, {"c_test", k.c_test},
                    {"c_emb", k.c_emb},   {"C_fc", k.C_fc},   {"c_N", k.c_N}};
  return j;
}

nlohmann::ordered_json to_json(const StateSubset& s) { return s.members(); }

nlohmann::ordered_json to_json(const Partition& p) {
  nlohmann::ordered_json j;
  j["beta"] = p.beta;
  j["high_info"] = nlohmann::ordered_json::array();
  for (const auto& s : p.high_info) j["high_info"].push_back(to_json(s));
  j["low_info"] = to_json(p.low_info);
  return j;
}

nlohmann::ordered_json to_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["verdict"] = v.value == Decision::Same ? "same" : "different";
  j["component"] = v.component ? to_json(*v.component) : nlohmann::ordered_json(nullptr);
  j["reason"] = v.reason;
  return j;
}

}  // namespace mcid::io
