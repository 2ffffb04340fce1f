// seedgrow: generate benchmarks, grow clusters from seeds, score and serve.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "seedgrow/engine.hpp"
#include "seedgrow/evaluation.hpp"
#include "seedgrow/io.hpp"
#include "seedgrow/service.hpp"
#include "seedgrow/synth.hpp"

namespace fs = std::filesystem;
using namespace seedgrow;

namespace {

Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

int cmd_generate(const std::string& bench, std::uint64_t seed, const fs::path& out) {
  const Benchmark b = bench == "1d" ? gen_1d(seed) : gen_2d(seed);
  const SeedSample s = sample_seeds(b);
  save_dataset(out / "data.csv", b.data);
  save_seeds(out / "seeds.csv", s.seeds);
  std::string spec = format_spec(b.spec);
  spec += "mislabelled_seed_ids =";
  for (std::size_t id : s.mislabelled) spec += " " + std::to_string(id);
  spec += "\n";
  write_file(out / "spec.txt", spec);
  std::printf("wrote %zu rows and %zu seeds to %s\n", b.data.size(), s.seeds.entries.size(), out.string().c_str());
  return 0;
}

int cmd_cluster(const fs::path& data_path, const fs::path& seeds_path, const fs::path& out, std::size_t max_iter) {
  const Dataset data = load_csv(data_path);
  const SeedAssignment seeds = load_seeds(seeds_path);
  const RunResult r = run(data, seeds, max_iter);
  save_results(out / "results.csv", r.assignment);
  save_model(out / "model.json", r.assignment.models);
  write_file(out / "report.txt", format_run_report(r.report));
  std::size_t anomalies = 0;
  for (Label l : r.assignment.labels) anomalies += l == kAnomaly;
  std::printf("passes %zu, converged %s, clusters %zu, anomalies %zu\n", r.report.passes,
              to_string(r.report.converged).c_str(), r.assignment.models.size(), anomalies);
  return 0;
}

int cmd_evaluate(const fs::path& pred_path, const fs::path& truth_path, const fs::path& spec_path, double radius,
                 const fs::path& out) {
  const std::vector<Label> pred = load_labels(pred_path);
  const std::vector<Label> truth = load_labels(truth_path);
  const EvalReport report = evaluate(pred, truth);
  std::cout << format_eval_table(report);
  std::string kv = format_eval_kv(report);
  if (!spec_path.empty()) {
    const BenchmarkSpec spec = parse_spec(read_file(spec_path));
    const Dataset data = load_csv(truth_path);
    const auto rec = cluster_recovery(pred, truth, data, spec, radius);
    std::cout << "\nrecovery within " << radius << " std\n";
    for (std::size_t k = 0; k < rec.size(); ++k) {
      char line[64];
      if (rec[k]) {
        std::snprintf(line, sizeof line, "%8zu %10.4f\n", k, *rec[k]);
      } else {
        std::snprintf(line, sizeof line, "%8zu %10s\n", k, "n/a");
      }
      std::cout << line;
      kv += "recovery_" + std::to_string(k) + " = ";
      char num[32];
      if (rec[k]) {
        std::snprintf(num, sizeof num, "%.17g", *rec[k]);
        kv += num;
      } else {
        kv += "undefined";
      }
      kv += "\n";
    }
  }
  if (!out.empty()) write_file(out, kv);
  return 0;
}

int cmd_predict(const fs::path& model_path, const fs::path& in_path, const fs::path& out) {
  const auto models = load_model(model_path);
  const Dataset data = load_csv(in_path);
  ClusterAssignment a;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto [label, score] = assign_new(models, data.point(i));
    a.labels.push_back(label);
    a.scores.push_back(score);
  }
  const std::string body = format_results(a);
  if (out.empty()) {
    std::cout << body;
  } else {
    write_file(out, body);
  }
  return 0;
}

int cmd_serve(const std::string& host, int port, const fs::path& data_dir, const fs::path& static_dir) {
  ServiceOptions options{data_dir, std::nullopt};
  if (!static_dir.empty()) options.static_dir = static_dir;
  Service service(options);
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::printf("serving on http://%s:%d (data in %s)\n", host.c_str(), port, data_dir.string().c_str());
  std::fflush(stdout);
  const bool ok = service.listen(host, port);
  g_service = nullptr;
  if (!ok) throw Error("cannot listen on " + host + ":" + std::to_string(port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seedgrow - grow clusters from a few labelled seeds, flag everything else as anomalous"};
  app.require_subcommand(1);

  std::string bench;
  std::uint64_t seed = 42;
  fs::path out_dir;
  auto* gen = app.add_subcommand("generate", "Write a synthetic benchmark (data.csv, seeds.csv, spec.txt)");
  gen->add_option("--bench", bench, "Benchmark: 1d or 2d")->required()->check(CLI::IsMember({"1d", "2d"}));
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--out", out_dir, "Output directory")->required();

  fs::path data_path, seeds_path;
  std::size_t max_iter = kDefaultMaxIterations;
  auto* clu = app.add_subcommand("cluster", "Grow clusters from seeds (results.csv, model.json, report.txt)");
  clu->add_option("--data", data_path, "Dataset CSV")->required()->check(CLI::ExistingFile);
  clu->add_option("--seeds", seeds_path, "Seeds CSV (id,cluster)")->required()->check(CLI::ExistingFile);
  clu->add_option("--out", out_dir, "Output directory")->required();
  clu->add_option("--max-iter", max_iter, "Pass cap")->check(CLI::PositiveNumber);

  fs::path pred_path, truth_path, spec_path, out_file;
  double radius = 2.0;
  auto* eva = app.add_subcommand("evaluate", "Score predicted labels against truth labels");
  eva->add_option("--pred", pred_path, "Results CSV with a label column")->required()->check(CLI::ExistingFile);
  eva->add_option("--truth", truth_path, "CSV with truth labels")->required()->check(CLI::ExistingFile);
  auto* spec_opt = eva->add_option("--spec", spec_path, "Benchmark spec for per-cluster recovery")
                       ->check(CLI::ExistingFile);
  eva->add_option("--radius", radius, "Recovery radius in stds")->needs(spec_opt)->check(CLI::NonNegativeNumber);
  eva->add_option("--out", out_file, "Also write the report as key = value text");

  fs::path model_path, in_path;
  auto* pre = app.add_subcommand("predict", "Assign new points with a saved model");
  pre->add_option("--model", model_path, "Model JSON")->required()->check(CLI::ExistingFile);
  pre->add_option("--in", in_path, "CSV of points")->required()->check(CLI::ExistingFile);
  pre->add_option("--out", out_file, "Results CSV (default: stdout)");

  std::string host = "127.0.0.1";
  int port = 8080;
  fs::path data_dir, static_dir;
  auto* srv = app.add_subcommand("serve", "Run the HTTP service");
  srv->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  srv->add_option("--host", host, "Bind address");
  srv->add_option("--data-dir", data_dir, "Directory for datasets and runs")->required();
  srv->add_option("--static", static_dir, "Directory of static files served at /")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*gen) return cmd_generate(bench, seed, out_dir);
    if (*clu) return cmd_cluster(data_path, seeds_path, out_dir, max_iter);
    if (*eva) return cmd_evaluate(pred_path, truth_path, spec_path, radius, out_file);
    if (*pre) return cmd_predict(model_path, in_path, out_file);
    if (*srv) return cmd_serve(host, port, data_dir, static_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "seedgrow: error: %s\n", e.what());
    return 2;
  }
  return 1;
}
