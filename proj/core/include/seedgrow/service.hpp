#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace seedgrow {

struct ServiceOptions {
  // Datasets, seeds and run snapshots are kept here as plain files and
  // reloaded on start.
  std::filesystem::path data_dir;
  // Optional directory of static files served at "/" (the browser client).
  std::optional<std::filesystem::path> static_dir;
};

// HTTP facade over the engine:
//   POST /api/datasets                 CSV body -> dataset handle
//   GET  /api/datasets/{id}            dataset handle
//   GET  /api/datasets/{id}/points     ?offset&limit -> points with current labels
//   GET  /api/datasets/{id}/seeds      current seed list
//   PUT  /api/datasets/{id}/seeds      [{point_id, cluster_id}] -> accepted count
//   POST /api/datasets/{id}/runs       {max_iter?} -> run id, runs in background
//   GET  /api/runs/{run_id}            status, or the finished snapshot
//   POST /api/runs/{run_id}/predict    {points: [[...]]} -> labels + scores
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds and serves until stop(). Returns false when the bind fails.
  bool listen(const std::string& host, int port);
  // Binds to a free port and returns it (or -1); then call serve().
  int bind_any_port(const std::string& host);
  bool serve();
  void stop();
  // Blocks until no run is executing.
  void wait_idle();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace seedgrow
