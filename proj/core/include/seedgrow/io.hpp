#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seedgrow/engine.hpp"
#include "seedgrow/perception.hpp"
#include "seedgrow/types.hpp"

namespace seedgrow {

inline constexpr int kModelFormatVersion = 1;

struct CsvOptions {
  // Column holding truth labels. When unset, a column named "label" is used
  // if the header has one.
  std::optional<std::string> label_column;
  // Column holding point ids (a permutation of 0..n-1). When unset, a column
  // named "id" is used if present; otherwise ids follow row order.
  std::optional<std::string> id_column;
};

std::string read_file(const std::filesystem::path& path);
// Writes through a temporary file and renames it into place.
void write_file(const std::filesystem::path& path, std::string_view content);

// Header row required; every other column is a numeric feature. Errors name
// the 1-based file line and column of the offending cell.
Dataset parse_csv(std::string_view body, const CsvOptions& options = {});
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

// id, x0.., label (label only when truth is present).
std::string format_dataset(const Dataset& data);
void save_dataset(const std::filesystem::path& path, const Dataset& data);

struct Results {
  std::vector<Label> labels;
  std::vector<double> scores;
};

// id,label,score with 17 significant digits.
std::string format_results(const ClusterAssignment& assignment);
void save_results(const std::filesystem::path& path, const ClusterAssignment& assignment);
Results parse_results(std::string_view body);
Results load_results(const std::filesystem::path& path);

// A single label column by name from any CSV with a header, ordered by the
// "id" column when there is one.
std::vector<Label> load_labels(const std::filesystem::path& path, const std::string& column = "label");

// Two columns: point id, cluster id.
SeedAssignment parse_seeds(std::string_view body);
SeedAssignment load_seeds(const std::filesystem::path& path);
std::string format_seeds(const SeedAssignment& seeds);
void save_seeds(const std::filesystem::path& path, const SeedAssignment& seeds);

// Versioned JSON; reloads bit-exactly.
std::string format_model(const std::map<Label, PerceptionModel>& models);
std::map<Label, PerceptionModel> parse_model(std::string_view body);
void save_model(const std::filesystem::path& path, const std::map<Label, PerceptionModel>& models);
std::map<Label, PerceptionModel> load_model(const std::filesystem::path& path);

// key = value text.
std::string format_run_report(const RunReport& report);
RunReport parse_run_report(std::string_view body);

}  // namespace seedgrow
