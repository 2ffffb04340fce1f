#include "seedgrow/service.hpp"

#include <chrono>
#include <condition_variable>
#include <ctime>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "seedgrow/engine.hpp"
#include "seedgrow/io.hpp"
#include "text.hpp"

namespace seedgrow {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

// Maps to an HTTP status with a JSON {"error": ...} body.
struct HttpError {
  int status;
  std::string message;
};

[[noreturn]] void fail(int status, std::string message) { throw HttpError{status, std::move(message)}; }

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string make_id(const char* prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%06zu", prefix, n);
  return buf;
}

// Numeric suffix of ids like "ds-000012".
std::size_t id_number(const std::string& id) {
  const auto dash = id.rfind('-');
  if (dash == std::string::npos) return 0;
  return text::parse_int<std::size_t>(std::string_view(id).substr(dash + 1)).value_or(0);
}

json parse_json_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    fail(400, std::string("malformed JSON body: ") + e.what());
  }
}

std::size_t query_size(const httplib::Request& req, const char* key, std::size_t fallback) {
  if (!req.has_param(key)) return fallback;
  const auto v = text::parse_int<std::size_t>(req.get_param_value(key));
  if (!v) fail(400, std::string("query parameter '") + key + "' must be a non-negative integer");
  return *v;
}

json seeds_json(const SeedAssignment& seeds) {
  json out = json::array();
  for (const auto& [id, c] : seeds.entries) out.push_back({{"point_id", id}, {"cluster_id", c}});
  return out;
}

json report_json(const RunReport& r) {
  json clusters = json::array();
  for (const auto& c : r.per_cluster) {
    clusters.push_back({{"id", c.id}, {"size", c.size}, {"mu", c.mu}, {"cutoff", c.cutoff}});
  }
  return {{"passes", r.passes},
          {"converged", to_string(r.converged)},
          {"ejected_total", r.ejected_total},
          {"absorbed_total", r.absorbed_total},
          {"per_cluster", clusters},
          {"vanished", r.vanished}};
}

struct DatasetEntry {
  std::string id;
  std::shared_ptr<const Dataset> data;
  SeedAssignment seeds;
  std::string created_at;
  std::optional<std::string> latest_run;
  bool running = false;
};

struct RunEntry {
  std::string id;
  std::string dataset_id;
  std::string status;  // running | done | failed
  std::string error;
  std::size_t max_iter = kDefaultMaxIterations;
  SeedAssignment seeds;
  std::shared_ptr<const RunResult> result;
};

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  httplib::Server server;

  std::shared_mutex mutex;  // guards the maps and counters below
  std::map<std::string, DatasetEntry> datasets;
  std::map<std::string, RunEntry> runs;
  std::size_t next_dataset = 1;
  std::size_t next_run = 1;

  std::mutex workers_mutex;
  std::condition_variable idle;
  std::vector<std::thread> workers;
  std::size_t active = 0;

  explicit Impl(ServiceOptions opts) : options(std::move(opts)) {
    fs::create_directories(options.data_dir / "datasets");
    fs::create_directories(options.data_dir / "runs");
    restore();
    routes();
  }

  ~Impl() {
    server.stop();
    std::vector<std::thread> pending;
    {
      std::lock_guard<std::mutex> lock(workers_mutex);
      pending.swap(workers);
    }
    for (auto& t : pending) {
      if (t.joinable()) t.join();
    }
  }

  fs::path dataset_dir(const std::string& id) const { return options.data_dir / "datasets" / id; }
  fs::path run_dir(const std::string& id) const { return options.data_dir / "runs" / id; }

  json handle_json(const DatasetEntry& e) const {
    return {{"id", e.id},
            {"n", e.data->size()},
            {"d", e.data->dim()},
            {"created_at", e.created_at},
            {"latest_run", e.latest_run ? json(*e.latest_run) : json(nullptr)}};
  }

  void persist_dataset_meta(const DatasetEntry& e) const {
    write_file(dataset_dir(e.id) / "meta.json", handle_json(e).dump(2) + "\n");
  }

  void persist_run_meta(const RunEntry& r) const {
    const json meta = {{"id", r.id},
                       {"dataset", r.dataset_id},
                       {"status", r.status},
                       {"error", r.error},
                       {"max_iter", r.max_iter}};
    write_file(run_dir(r.id) / "meta.json", meta.dump(2) + "\n");
  }

  void restore() {
    for (const auto& dir : fs::directory_iterator(options.data_dir / "datasets")) {
      if (!dir.is_directory() || !fs::exists(dir.path() / "meta.json")) continue;
      const json meta = json::parse(read_file(dir.path() / "meta.json"));
      DatasetEntry e;
      e.id = meta.at("id").get<std::string>();
      e.data = std::make_shared<const Dataset>(load_csv(dir.path() / "data.csv"));
      e.created_at = meta.at("created_at").get<std::string>();
      if (meta.at("latest_run").is_string()) e.latest_run = meta.at("latest_run").get<std::string>();
      if (fs::exists(dir.path() / "seeds.csv")) {
        const std::string body = read_file(dir.path() / "seeds.csv");
        if (text::lines(body).size() > 1) e.seeds = parse_seeds(body);
      }
      next_dataset = std::max(next_dataset, id_number(e.id) + 1);
      datasets.emplace(e.id, std::move(e));
    }
    for (const auto& dir : fs::directory_iterator(options.data_dir / "runs")) {
      if (!dir.is_directory() || !fs::exists(dir.path() / "meta.json")) continue;
      const json meta = json::parse(read_file(dir.path() / "meta.json"));
      RunEntry r;
      r.id = meta.at("id").get<std::string>();
      r.dataset_id = meta.at("dataset").get<std::string>();
      r.status = meta.at("status").get<std::string>();
      r.error = meta.value("error", std::string());
      r.max_iter = meta.at("max_iter").get<std::size_t>();
      r.seeds = load_seeds(dir.path() / "seeds.csv");
      if (r.status == "done") {
        auto result = std::make_shared<RunResult>();
        const Results saved = load_results(dir.path() / "results.csv");
        result->assignment.labels = saved.labels;
        result->assignment.scores = saved.scores;
        result->assignment.models = load_model(dir.path() / "model.json");
        result->report = parse_run_report(read_file(dir.path() / "report.txt"));
        r.result = std::move(result);
      } else if (r.status == "running") {
        // The process stopped while this run was executing.
        r.status = "failed";
        r.error = "interrupted by service restart";
        persist_run_meta(r);
      }
      next_run = std::max(next_run, id_number(r.id) + 1);
      runs.emplace(r.id, std::move(r));
    }
  }

  static void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  template <typename F>
  httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const HttpError& e) {
        reply(res, e.status, {{"error", e.message}});
      } catch (const std::exception& e) {
        reply(res, 500, {{"error", e.what()}});
      }
    };
  }

  void routes() {
    server.Post("/api/datasets", guarded([this](const auto& req, auto& res) { create_dataset(req, res); }));
    server.Get(R"(/api/datasets/([^/]+))", guarded([this](const auto& req, auto& res) {
                 std::shared_lock lock(mutex);
                 reply(res, 200, handle_json(dataset(req.matches[1])));
               }));
    server.Get(R"(/api/datasets/([^/]+)/points)", guarded([this](const auto& req, auto& res) { points(req, res); }));
    server.Get(R"(/api/datasets/([^/]+)/seeds)", guarded([this](const auto& req, auto& res) {
                 std::shared_lock lock(mutex);
                 reply(res, 200, seeds_json(dataset(req.matches[1]).seeds));
               }));
    server.Put(R"(/api/datasets/([^/]+)/seeds)", guarded([this](const auto& req, auto& res) { put_seeds(req, res); }));
    server.Post(R"(/api/datasets/([^/]+)/runs)", guarded([this](const auto& req, auto& res) { start_run(req, res); }));
    server.Get(R"(/api/runs/([^/]+))", guarded([this](const auto& req, auto& res) { get_run(req, res); }));
    server.Post(R"(/api/runs/([^/]+)/predict)", guarded([this](const auto& req, auto& res) { predict(req, res); }));
    if (options.static_dir) server.set_mount_point("/", options.static_dir->string());
  }

  // Callers hold the mutex.
  DatasetEntry& dataset(const std::string& id) {
    const auto it = datasets.find(id);
    if (it == datasets.end()) fail(404, "unknown dataset '" + id + "'");
    return it->second;
  }
  RunEntry& run_entry(const std::string& id) {
    const auto it = runs.find(id);
    if (it == runs.end()) fail(404, "unknown run '" + id + "'");
    return it->second;
  }

  void create_dataset(const httplib::Request& req, httplib::Response& res) {
    std::shared_ptr<const Dataset> data;
    try {
      data = std::make_shared<const Dataset>(parse_csv(req.body));
    } catch (const Error& e) {
      fail(400, e.what());
    }
    std::unique_lock lock(mutex);
    DatasetEntry e;
    e.id = make_id("ds", next_dataset++);
    e.data = std::move(data);
    e.created_at = utc_now();
    save_dataset(dataset_dir(e.id) / "data.csv", *e.data);
    persist_dataset_meta(e);
    const json body = handle_json(e);
    datasets.emplace(e.id, std::move(e));
    reply(res, 201, body);
  }

  void points(const httplib::Request& req, httplib::Response& res) {
    const std::size_t offset = query_size(req, "offset", 0);
    const std::size_t limit = std::min<std::size_t>(query_size(req, "limit", 1000), 100000);
    std::shared_lock lock(mutex);
    const DatasetEntry& e = dataset(req.matches[1]);
    std::shared_ptr<const RunResult> snapshot;
    if (e.latest_run) {
      const RunEntry& r = run_entry(*e.latest_run);
      if (r.status == "done") snapshot = r.result;
    }
    const std::size_t n = e.data->size();
    json page = json::array();
    for (std::size_t i = offset; i < n && i < offset + limit; ++i) {
      const auto p = e.data->point(i);
      const auto seed = e.seeds.entries.find(i);
      page.push_back({{"id", i},
                      {"features", std::vector<double>(p.begin(), p.end())},
                      {"label", snapshot ? json(snapshot->assignment.labels[i]) : json(nullptr)},
                      {"score", snapshot ? json(snapshot->assignment.scores[i]) : json(nullptr)},
                      {"seed", seed != e.seeds.entries.end() ? json(seed->second) : json(nullptr)}});
    }
    reply(res, 200, {{"dataset", e.id}, {"offset", offset}, {"limit", limit}, {"total", n}, {"points", page}});
  }

  void put_seeds(const httplib::Request& req, httplib::Response& res) {
    const json body = parse_json_body(req.body);
    if (!body.is_array()) fail(400, "seed body must be a list of {point_id, cluster_id}");
    std::vector<std::pair<long long, long long>> pairs;
    for (const auto& item : body) {
      if (!item.is_object() || !item.contains("point_id") || !item.contains("cluster_id") ||
          !item["point_id"].is_number_integer() || !item["cluster_id"].is_number_integer()) {
        fail(400, "each seed needs integer point_id and cluster_id");
      }
      pairs.emplace_back(item["point_id"].get<long long>(), item["cluster_id"].get<long long>());
    }
    std::unique_lock lock(mutex);
    DatasetEntry& e = dataset(req.matches[1]);
    SeedAssignment seeds;
    for (const auto& [pid, cid] : pairs) {
      if (pid < 0 || static_cast<std::size_t>(pid) >= e.data->size()) {
        fail(422, "seed references unknown point id " + std::to_string(pid));
      }
      if (cid < 0 || cid > std::numeric_limits<Label>::max()) fail(422, "cluster ids must be non-negative");
      if (!seeds.entries.emplace(static_cast<std::size_t>(pid), static_cast<Label>(cid)).second) {
        fail(422, "duplicate seed point id " + std::to_string(pid));
      }
    }
    e.seeds = std::move(seeds);
    save_seeds(dataset_dir(e.id) / "seeds.csv", e.seeds);
    reply(res, 200, {{"accepted", e.seeds.entries.size()}});
  }

  void start_run(const httplib::Request& req, httplib::Response& res) {
    std::size_t max_iter = kDefaultMaxIterations;
    if (!text::trim(req.body).empty()) {
      const json body = parse_json_body(req.body);
      if (!body.is_object()) fail(400, "run body must be a JSON object");
      if (body.contains("max_iter")) {
        if (!body["max_iter"].is_number_integer()) fail(400, "max_iter must be an integer");
        const long long v = body["max_iter"].get<long long>();
        if (v < 1) fail(422, "max_iter must be at least 1");
        max_iter = static_cast<std::size_t>(v);
      }
    }

    std::unique_lock lock(mutex);
    DatasetEntry& e = dataset(req.matches[1]);
    if (e.running) fail(409, "a run is already in progress for dataset '" + e.id + "'");
    if (e.seeds.entries.empty()) fail(422, "dataset has no seeds");

    RunEntry r;
    r.id = make_id("run", next_run++);
    r.dataset_id = e.id;
    r.status = "running";
    r.max_iter = max_iter;
    r.seeds = e.seeds;
    save_seeds(run_dir(r.id) / "seeds.csv", r.seeds);
    persist_run_meta(r);
    e.running = true;
    e.latest_run = r.id;
    persist_dataset_meta(e);

    const std::string run_id = r.id;
    auto data = e.data;
    auto seeds = r.seeds;
    runs.emplace(run_id, std::move(r));
    lock.unlock();

    {
      std::lock_guard<std::mutex> wl(workers_mutex);
      ++active;
      workers.emplace_back([this, run_id, data, seeds, max_iter] { execute(run_id, data, seeds, max_iter); });
    }
    reply(res, 202, {{"run_id", run_id}, {"status", "running"}});
  }

  void execute(const std::string& run_id, std::shared_ptr<const Dataset> data, SeedAssignment seeds,
               std::size_t max_iter) {
    std::shared_ptr<const RunResult> result;
    std::string error;
    try {
      auto out = std::make_shared<RunResult>(run(*data, seeds, max_iter));
      const fs::path dir = run_dir(run_id);
      save_results(dir / "results.csv", out->assignment);
      save_model(dir / "model.json", out->assignment.models);
      write_file(dir / "report.txt", format_run_report(out->report));
      result = std::move(out);
    } catch (const std::exception& e) {
      error = e.what();
    }
    {
      std::unique_lock lock(mutex);
      RunEntry& r = runs.at(run_id);
      r.status = result ? "done" : "failed";
      r.error = error;
      r.result = result;
      try {
        persist_run_meta(r);
      } catch (const std::exception&) {
        // The in-memory snapshot stays valid; the next write retries.
      }
      datasets.at(r.dataset_id).running = false;
    }
    std::lock_guard<std::mutex> wl(workers_mutex);
    --active;
    idle.notify_all();
  }

  void get_run(const httplib::Request& req, httplib::Response& res) {
    std::shared_lock lock(mutex);
    const RunEntry& r = run_entry(req.matches[1]);
    json body = {{"run_id", r.id}, {"dataset", r.dataset_id}, {"status", r.status}, {"max_iter", r.max_iter}};
    if (r.status == "failed") body["error"] = r.error;
    if (r.status == "done") {
      const auto& a = r.result->assignment;
      body["labels"] = a.labels;
      body["scores"] = a.scores;
      body["report"] = report_json(r.result->report);
      body["models"] = json::parse(format_model(a.models)).at("clusters");
      body["seeds"] = seeds_json(r.seeds);
    }
    reply(res, 200, body);
  }

  void predict(const httplib::Request& req, httplib::Response& res) {
    const json body = parse_json_body(req.body);
    const json& list = body.is_object() && body.contains("points") ? body["points"] : body;
    if (!list.is_array()) fail(400, "predict body must be {\"points\": [[...], ...]}");
    std::vector<Vector> points;
    for (const auto& p : list) {
      if (!p.is_array()) fail(400, "each point must be a list of numbers");
      Vector v;
      for (const auto& x : p) {
        if (!x.is_number()) fail(400, "each point must be a list of numbers");
        v.push_back(x.get<double>());
      }
      points.push_back(std::move(v));
    }

    std::shared_ptr<const RunResult> result;
    {
      std::shared_lock lock(mutex);
      const RunEntry& r = run_entry(req.matches[1]);
      if (r.status != "done") fail(409, "run '" + r.id + "' has not finished (status " + r.status + ")");
      result = r.result;
    }
    const auto& models = result->assignment.models;
    if (models.empty()) fail(422, "run has no surviving clusters");
    const std::size_t dim = models.begin()->second.median.size();
    json labels = json::array();
    json scores = json::array();
    for (const auto& p : points) {
      if (p.size() != dim) {
        fail(422, "dimension mismatch: expected " + std::to_string(dim) + " features, got " + std::to_string(p.size()));
      }
      const auto [label, score] = assign_new(models, p);
      labels.push_back(label);
      scores.push_back(score);
    }
    reply(res, 200, {{"labels", labels}, {"scores", scores}});
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() = default;

bool Service::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int Service::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool Service::serve() { return impl_->server.listen_after_bind(); }

void Service::stop() { impl_->server.stop(); }

void Service::wait_idle() {
  std::unique_lock<std::mutex> lock(impl_->workers_mutex);
  impl_->idle.wait(lock, [this] { return impl_->active == 0; });
}

}  // namespace seedgrow
