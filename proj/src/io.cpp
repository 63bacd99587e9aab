#include "actlab/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "actlab/errors.hpp"

namespace actlab {

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("rename failed for " + target.string() + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      if (!cur.empty()) lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

double parse_double(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigError("csv: bad numeric field '" + s + "'");
  return v;
}

// Counts consecutive header fields with the given prefix followed by a
// 1-based running index.
std::size_t count_prefixed(const std::vector<std::string>& header, std::size_t start,
                           const std::string& prefix) {
  std::size_t count = 0;
  for (std::size_t i = start; i < header.size(); ++i) {
    if (header[i] == prefix + std::to_string(count + 1))
      ++count;
    else
      break;
  }
  return count;
}

}  // namespace

std::string value_dataset_csv(const ValueDataset& data) {
  std::string out;
  for (std::size_t i = 0; i < data.n; ++i) out += "z0_" + std::to_string(i + 1) + ",";
  for (std::size_t i = 0; i < data.m; ++i) out += "r_" + std::to_string(i + 1) + ",";
  out += "target\n";
  for (const ValueRecord& rec : data.records) {
    out += csv_fragment(rec.z0);
    out += ',';
    out += csv_fragment(rec.r);
    out += ',';
    out += format_full(rec.target);
    out += '\n';
  }
  return out;
}

ValueDataset parse_value_dataset_csv(const std::string& text) {
  const auto lines = csv_lines(text);
  if (lines.empty()) throw ConfigError("value dataset csv: empty file");
  const auto header = split(lines[0], ',');
  const std::size_t n = count_prefixed(header, 0, "z0_");
  const std::size_t m = count_prefixed(header, n, "r_");
  if (n == 0 || m == 0 || header.size() != n + m + 1 || header.back() != "target")
    throw ConfigError("value dataset csv: unrecognized header");
  ValueDataset data;
  data.n = n;
  data.m = m;
  data.records.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = split(lines[li], ',');
    if (fields.size() != n + m + 1)
      throw ConfigError("value dataset csv: row " + std::to_string(li) + " has wrong arity");
    DenseVector z0(n, 0.0);
    DenseVector r(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) z0[i] = parse_double(fields[i]);
    for (std::size_t i = 0; i < m; ++i) r[i] = parse_double(fields[n + i]);
    data.records.emplace_back(std::move(z0), std::move(r), parse_double(fields[n + m]));
  }
  return data;
}

std::string riccati_dataset_csv(const RiccatiDataset& data) {
  std::string out;
  for (std::size_t i = 0; i < data.m; ++i) out += "r_" + std::to_string(i + 1) + ",";
  for (std::size_t i = 0; i < data.n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      out += "pi_" + std::to_string(i + 1) + std::to_string(j + 1);
      out += (i + 1 == data.n && j == i) ? '\n' : ',';
    }
  for (const RiccatiRecord& rec : data.records) {
    out += csv_fragment(rec.r);
    for (std::size_t i = 0; i < data.n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        out += ',';
        out += format_full(rec.Pi(i, j));
      }
    out += '\n';
  }
  return out;
}

RiccatiDataset parse_riccati_dataset_csv(const std::string& text) {
  const auto lines = csv_lines(text);
  if (lines.empty()) throw ConfigError("riccati dataset csv: empty file");
  const auto header = split(lines[0], ',');
  const std::size_t m = count_prefixed(header, 0, "r_");
  if (m == 0 || header.size() <= m) throw ConfigError("riccati dataset csv: unrecognized header");
  const std::size_t tri = header.size() - m;
  // tri = n(n+1)/2
  std::size_t n = 0;
  while ((n + 1) * (n + 2) / 2 <= tri) ++n;
  if (n * (n + 1) / 2 != tri)
    throw ConfigError("riccati dataset csv: column count does not form a lower triangle");
  RiccatiDataset data;
  data.n = n;
  data.m = m;
  data.records.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = split(lines[li], ',');
    if (fields.size() != header.size())
      throw ConfigError("riccati dataset csv: row " + std::to_string(li) + " has wrong arity");
    DenseVector r(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) r[i] = parse_double(fields[i]);
    DenseMatrix pi(n, n, 0.0);
    std::size_t f = m;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const double v = parse_double(fields[f++]);
        pi(i, j) = v;
        pi(j, i) = v;
      }
    data.records.emplace_back(std::move(r), std::move(pi));
  }
  return data;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  const std::size_t n = traj.states.empty() ? 0 : traj.states[0].dim();
  const std::size_t m = traj.controls.empty() ? 0 : traj.controls[0].dim();
  for (std::size_t i = 0; i < n; ++i) out += ",z_" + std::to_string(i + 1);
  for (std::size_t i = 0; i < m; ++i) out += ",u_" + std::to_string(i + 1);
  out += '\n';
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out += format_full(traj.times[k]);
    out += ',';
    out += csv_fragment(traj.states[k]);
    out += ',';
    out += csv_fragment(traj.controls[k]);
    out += '\n';
  }
  return out;
}

std::string heatmap_csv(const std::vector<std::pair<DenseVector, double>>& rows) {
  std::string out;
  const std::size_t m = rows.empty() ? 1 : rows[0].first.dim();
  for (std::size_t i = 0; i < m; ++i) out += "r_" + std::to_string(i + 1) + ",";
  out += "value\n";
  for (const auto& [r, value] : rows) {
    out += csv_fragment(r);
    out += ',';
    out += format_full(value);
    out += '\n';
  }
  return out;
}

std::string history_csv(const std::vector<SaddleHistoryEntry>& history) {
  std::string out = "iter";
  const std::size_t m = history.empty() ? 0 : history[0].r.dim();
  const std::size_t n = history.empty() ? 0 : history[0].z0.dim();
  for (std::size_t i = 0; i < m; ++i) out += ",consensus_r_" + std::to_string(i + 1);
  for (std::size_t i = 0; i < n; ++i) out += ",consensus_z0_" + std::to_string(i + 1);
  out += ",value\n";
  for (const SaddleHistoryEntry& e : history) {
    out += std::to_string(e.iter);
    out += ',';
    out += csv_fragment(e.r);
    out += ',';
    out += csv_fragment(e.z0);
    out += ',';
    out += format_full(e.value);
    out += '\n';
  }
  return out;
}

std::string loss_history_csv(const std::vector<std::pair<std::size_t, double>>& history) {
  std::string out = "iteration,loss\n";
  for (const auto& [iter, loss] : history) {
    out += std::to_string(iter);
    out += ',';
    out += format_full(loss);
    out += '\n';
  }
  return out;
}

nlohmann::json mlp_to_json(const Mlp& net) {
  nlohmann::json j;
  j["input_dim"] = net.input_dim;
  j["hidden_width"] = net.hidden_width;
  j["activation"] = to_string(net.activation);
  j["W1"] = net.W1.entries();
  j["b1"] = net.b1.entries();
  j["w2"] = net.w2.entries();
  j["b2"] = net.b2;
  return j;
}

Mlp mlp_from_json(const nlohmann::json& j) {
  const std::size_t input = j.at("input_dim").get<std::size_t>();
  const std::size_t hidden = j.at("hidden_width").get<std::size_t>();
  Mlp net(input, hidden, activation_from_string(j.at("activation").get<std::string>()));
  const auto w1 = j.at("W1").get<std::vector<double>>();
  const auto b1 = j.at("b1").get<std::vector<double>>();
  const auto w2 = j.at("w2").get<std::vector<double>>();
  if (w1.size() != hidden * input || b1.size() != hidden || w2.size() != hidden)
    throw ConfigError("mlp json: parameter arrays have wrong sizes");
  net.W1.entries() = w1;
  for (std::size_t i = 0; i < hidden; ++i) net.b1[i] = b1[i];
  for (std::size_t i = 0; i < hidden; ++i) net.w2[i] = w2[i];
  net.b2 = j.at("b2").get<double>();
  return net;
}

nlohmann::json bundle_to_json(const StructuredSurrogate& s) {
  nlohmann::json j;
  j["kind"] = "structured";
  j["n"] = s.n;
  j["m"] = s.m;
  j["eps"] = s.eps;
  nlohmann::json nets = nlohmann::json::array();
  for (const Mlp& net : s.entries) nets.push_back(mlp_to_json(net));
  j["networks"] = std::move(nets);
  return j;
}

nlohmann::json bundle_to_json(const UnstructuredSurrogate& s) {
  nlohmann::json j;
  j["kind"] = "unstructured";
  j["n"] = s.n;
  j["m"] = s.m;
  j["networks"] = nlohmann::json::array({mlp_to_json(s.net)});
  return j;
}

SurrogateBundle bundle_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const std::size_t n = j.at("n").get<std::size_t>();
  const std::size_t m = j.at("m").get<std::size_t>();
  const auto& nets = j.at("networks");
  if (kind == "structured") {
    StructuredSurrogate s;
    s.n = n;
    s.m = m;
    s.eps = j.at("eps").get<double>();
    if (nets.size() != n * (n + 1) / 2)
      throw ConfigError("bundle: structured surrogate needs n(n+1)/2 networks");
    s.entries.reserve(nets.size());
    for (const auto& net : nets) {
      s.entries.push_back(mlp_from_json(net));
      if (s.entries.back().input_dim != m)
        throw ConfigError("bundle: entry network input_dim must equal m");
    }
    return s;
  }
  if (kind == "unstructured") {
    UnstructuredSurrogate s;
    s.n = n;
    s.m = m;
    if (nets.size() != 1) throw ConfigError("bundle: unstructured surrogate needs one network");
    s.net = mlp_from_json(nets[0]);
    if (s.net.input_dim != n + m)
      throw ConfigError("bundle: network input_dim must equal n + m");
    return s;
  }
  throw ConfigError("bundle: unknown kind '" + kind + "'");
}

SurrogateBundle load_bundle(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bundle: cannot parse " + path + ": " + e.what());
  }
  try {
    return bundle_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bundle: malformed document " + path + ": " + e.what());
  }
}

}  // namespace actlab
