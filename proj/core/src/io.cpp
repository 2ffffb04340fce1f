#include "seedgrow/io.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "text.hpp"

namespace seedgrow {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string unquote(std::string_view s) {
  s = text::trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::string where(std::size_t line, std::size_t column) {
  return "row " + std::to_string(line) + ", column " + std::to_string(column);
}

// Header plus data cells, with the file line number of each data row.
struct Table {
  std::shared_ptr<const std::string> body;  // cells below view into this buffer
  std::vector<std::string> header;
  std::vector<std::vector<std::string_view>> rows;
  std::vector<std::size_t> line_numbers;

  std::optional<std::size_t> column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  }
  std::size_t require(const std::string& name) const {
    const auto c = column(name);
    if (!c) throw Error("missing column '" + name + "'");
    return *c;
  }
};

Table read_table(std::string_view source) {
  Table t;
  t.body = std::make_shared<const std::string>(source);
  const auto all = text::lines(*t.body);
  if (all.empty() || text::trim(all.front()).empty()) throw Error("missing header row");
  for (auto cell : text::split(all.front(), ',')) {
    std::string name = unquote(cell);
    if (name.empty()) throw Error("empty column name in header");
    if (std::find(t.header.begin(), t.header.end(), name) != t.header.end()) {
      throw Error("duplicate column name '" + name + "'");
    }
    t.header.push_back(std::move(name));
  }
  for (std::size_t i = 1; i < all.size(); ++i) {
    auto cells = text::split(all[i], ',');
    if (cells.size() != t.header.size()) {
      throw Error("ragged row at row " + std::to_string(i + 1) + ": expected " + std::to_string(t.header.size()) +
                  " cells, found " + std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(cells));
    t.line_numbers.push_back(i + 1);
  }
  return t;
}

template <typename Int>
Int cell_int(const Table& t, std::size_t r, std::size_t c) {
  const auto v = text::parse_int<Int>(t.rows[r][c]);
  if (!v) {
    throw Error("expected an integer at " + where(t.line_numbers[r], c + 1) + ": '" +
                std::string(text::trim(t.rows[r][c])) + "'");
  }
  return *v;
}

double cell_double(const Table& t, std::size_t r, std::size_t c) {
  const auto v = text::parse_double(t.rows[r][c]);
  if (!v) {
    throw Error("non-numeric or non-finite value at " + where(t.line_numbers[r], c + 1) + ": '" +
                std::string(text::trim(t.rows[r][c])) + "'");
  }
  return *v;
}

Label cell_label(const Table& t, std::size_t r, std::size_t c) {
  const Label l = cell_int<Label>(t, r, c);
  if (l < kAnomaly) throw Error("label below -1 at " + where(t.line_numbers[r], c + 1));
  return l;
}

// Row index for each id when an id column exists; ids must cover 0..n-1.
std::vector<std::size_t> row_order(const Table& t, std::optional<std::size_t> id_col) {
  const std::size_t n = t.rows.size();
  std::vector<std::size_t> order(n);
  if (!id_col) {
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    return order;
  }
  std::vector<bool> seen(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    const auto id = cell_int<std::size_t>(t, r, *id_col);
    if (id >= n) throw Error("id out of range at " + where(t.line_numbers[r], *id_col + 1));
    if (seen[id]) throw Error("duplicate id " + std::to_string(id) + " at " + where(t.line_numbers[r], *id_col + 1));
    seen[id] = true;
    order[id] = r;
  }
  return order;
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error("read failed for '" + path.string() + "'");
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write failed for '" + path.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error("cannot move '" + tmp.string() + "' into place: " + ec.message());
}

Dataset parse_csv(std::string_view body, const CsvOptions& options) {
  const Table t = read_table(body);
  auto pick = [&](const std::optional<std::string>& wanted, const char* fallback) -> std::optional<std::size_t> {
    if (wanted) {
      const auto c = t.column(*wanted);
      if (!c) throw Error("missing column '" + *wanted + "'");
      return c;
    }
    return t.column(fallback);
  };
  const auto label_col = pick(options.label_column, "label");
  const auto id_col = pick(options.id_column, "id");
  if (label_col && id_col && *label_col == *id_col) throw Error("label and id columns must differ");

  std::vector<std::size_t> features;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c != label_col && c != id_col) features.push_back(c);
  }
  if (features.empty()) throw Error("no feature columns");
  if (t.rows.empty()) throw Error("empty dataset");

  const auto order = row_order(t, id_col);
  std::vector<double> values;
  values.reserve(t.rows.size() * features.size());
  std::optional<std::vector<Label>> truth;
  if (label_col) truth.emplace();
  for (std::size_t r : order) {
    for (std::size_t c : features) values.push_back(cell_double(t, r, c));
    if (label_col) truth->push_back(cell_label(t, r, *label_col));
  }
  return Dataset(features.size(), std::move(values), std::move(truth));
}

Dataset load_csv(const fs::path& path, const CsvOptions& options) {
  try {
    return parse_csv(read_file(path), options);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string format_dataset(const Dataset& data) {
  std::string out = "id";
  for (std::size_t k = 0; k < data.dim(); ++k) out += ",x" + std::to_string(k);
  if (data.has_truth()) out += ",label";
  out += '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    out += std::to_string(i);
    for (double v : data.point(i)) {
      out += ',';
      out += text::format_double(v);
    }
    if (data.has_truth()) {
      out += ',';
      out += std::to_string(data.truth()[i]);
    }
    out += '\n';
  }
  return out;
}

void save_dataset(const fs::path& path, const Dataset& data) { write_file(path, format_dataset(data)); }

std::string format_results(const ClusterAssignment& a) {
  if (a.labels.size() != a.scores.size()) throw Error("labels and scores differ in length");
  std::string out = "id,label,score\n";
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += std::to_string(a.labels[i]);
    out += ',';
    out += text::format_double(a.scores[i]);
    out += '\n';
  }
  return out;
}

void save_results(const fs::path& path, const ClusterAssignment& a) { write_file(path, format_results(a)); }

Results parse_results(std::string_view body) {
  const Table t = read_table(body);
  const auto order = row_order(t, t.require("id"));
  const std::size_t lc = t.require("label");
  const std::size_t sc = t.require("score");
  Results r;
  for (std::size_t row : order) {
    r.labels.push_back(cell_label(t, row, lc));
    r.scores.push_back(cell_double(t, row, sc));
  }
  return r;
}

Results load_results(const fs::path& path) {
  try {
    return parse_results(read_file(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::vector<Label> load_labels(const fs::path& path, const std::string& column) {
  try {
    const Table t = read_table(read_file(path));
    const std::size_t lc = t.require(column);
    std::vector<Label> out;
    for (std::size_t row : row_order(t, t.column("id"))) out.push_back(cell_label(t, row, lc));
    return out;
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

SeedAssignment parse_seeds(std::string_view body) {
  const Table t = read_table(body);
  if (t.header.size() != 2) throw Error("seeds file needs exactly two columns: point id, cluster id");
  SeedAssignment seeds;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto id = cell_int<std::size_t>(t, r, 0);
    const Label cluster = cell_int<Label>(t, r, 1);
    if (cluster < 0) throw Error("negative cluster id at " + where(t.line_numbers[r], 2));
    if (!seeds.entries.emplace(id, cluster).second) {
      throw Error("duplicate seed id " + std::to_string(id) + " at " + where(t.line_numbers[r], 1));
    }
  }
  if (seeds.entries.empty()) throw Error("no seeds");
  return seeds;
}

SeedAssignment load_seeds(const fs::path& path) {
  try {
    return parse_seeds(read_file(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string format_seeds(const SeedAssignment& seeds) {
  std::string out = "id,cluster\n";
  for (const auto& [id, c] : seeds.entries) out += std::to_string(id) + "," + std::to_string(c) + "\n";
  return out;
}

void save_seeds(const fs::path& path, const SeedAssignment& seeds) { write_file(path, format_seeds(seeds)); }

std::string format_model(const std::map<Label, PerceptionModel>& models) {
  json clusters = json::array();
  for (const auto& [id, m] : models) {
    clusters.push_back({{"id", id},
                        {"median", m.median},
                        {"n", m.n},
                        {"mu", m.mu},
                        {"support", m.support},
                        {"gap_star", m.gap_star},
                        {"edge", m.edge},
                        {"cutoff", m.cutoff}});
  }
  const json doc = {{"format", "seedgrow-model"}, {"version", kModelFormatVersion}, {"clusters", clusters}};
  return doc.dump(2) + "\n";
}

std::map<Label, PerceptionModel> parse_model(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", std::string()) != "seedgrow-model") throw Error("not a seedgrow model file");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error("unsupported model version " + std::to_string(version) + " (expected " +
                  std::to_string(kModelFormatVersion) + ")");
    }
    std::map<Label, PerceptionModel> models;
    for (const auto& c : doc.at("clusters")) {
      PerceptionModel m;
      const Label id = c.at("id").get<Label>();
      if (id < 0) throw Error("model cluster ids must be non-negative");
      m.median = c.at("median").get<Vector>();
      m.n = c.at("n").get<std::size_t>();
      m.mu = c.at("mu").get<double>();
      m.support = c.at("support").get<double>();
      m.gap_star = c.at("gap_star").get<double>();
      m.edge = c.at("edge").get<double>();
      m.cutoff = c.at("cutoff").get<double>();
      if (m.median.empty() || m.n == 0) throw Error("model cluster " + std::to_string(id) + " is empty");
      if (!models.emplace(id, std::move(m)).second) throw Error("duplicate model cluster id " + std::to_string(id));
    }
    if (!models.empty()) {
      const std::size_t dim = models.begin()->second.median.size();
      for (const auto& kv : models) {
        if (kv.second.median.size() != dim) throw Error("model medians differ in dimension");
      }
    }
    return models;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const fs::path& path, const std::map<Label, PerceptionModel>& models) {
  write_file(path, format_model(models));
}

std::map<Label, PerceptionModel> load_model(const fs::path& path) {
  try {
    return parse_model(read_file(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string format_run_report(const RunReport& r) {
  std::ostringstream out;
  out << "passes = " << r.passes << '\n';
  out << "converged = " << to_string(r.converged) << '\n';
  out << "ejected_total = " << r.ejected_total << '\n';
  out << "absorbed_total = " << r.absorbed_total << '\n';
  out << "cluster_count = " << r.per_cluster.size() << '\n';
  for (std::size_t i = 0; i < r.per_cluster.size(); ++i) {
    const auto& c = r.per_cluster[i];
    const std::string p = "cluster_" + std::to_string(i) + "_";
    out << p << "id = " << c.id << '\n';
    out << p << "size = " << c.size << '\n';
    out << p << "mu = " << text::format_double(c.mu) << '\n';
    out << p << "cutoff = " << text::format_double(c.cutoff) << '\n';
  }
  out << "vanished =";
  for (Label v : r.vanished) out << ' ' << v;
  out << '\n';
  return out.str();
}

RunReport parse_run_report(std::string_view body) {
  std::map<std::string, std::string> kv;
  for (auto raw : text::lines(body)) {
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error("run report: line without '='");
    kv[std::string(text::trim(line.substr(0, eq)))] = std::string(text::trim(line.substr(eq + 1)));
  }
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw Error("run report: missing key '" + key + "'");
    return it->second;
  };
  auto get_size = [&](const std::string& key) {
    const auto v = text::parse_int<std::size_t>(get(key));
    if (!v) throw Error("run report: bad integer in '" + key + "'");
    return *v;
  };
  auto get_double = [&](const std::string& key) {
    const auto v = text::parse_double(get(key));
    if (!v) throw Error("run report: bad number in '" + key + "'");
    return *v;
  };
  RunReport r;
  r.passes = get_size("passes");
  r.converged = convergence_from_string(get("converged"));
  r.ejected_total = get_size("ejected_total");
  r.absorbed_total = get_size("absorbed_total");
  const std::size_t count = get_size("cluster_count");
  for (std::size_t i = 0; i < count; ++i) {
    const std::string p = "cluster_" + std::to_string(i) + "_";
    ClusterStats c;
    const auto id = text::parse_int<Label>(get(p + "id"));
    if (!id) throw Error("run report: bad integer in '" + p + "id'");
    c.id = *id;
    c.size = get_size(p + "size");
    c.mu = get_double(p + "mu");
    c.cutoff = get_double(p + "cutoff");
    r.per_cluster.push_back(c);
  }
  for (auto tok : text::split(get("vanished"), ' ')) {
    if (text::trim(tok).empty()) continue;
    const auto v = text::parse_int<Label>(tok);
    if (!v) throw Error("run report: bad vanished cluster id");
    r.vanished.push_back(*v);
  }
  return r;
}

}  // namespace seedgrow
