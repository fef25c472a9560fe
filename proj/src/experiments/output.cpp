#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "haar/error.hpp"
#include "haar/experiments.hpp"
#include "json.hpp"

namespace haar {

namespace {

// Shortest text that reads back to the same double, so output is stable
// across runs and platforms.
std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  return number(v);
}

}  // namespace

void write_csv(std::ostream& os, const ResultTable& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << number(row[c]);
    os << '\n';
  }
}

void write_json(std::ostream& os, const ResultTable& table) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec;
    for (std::size_t c = 0; c < row.size(); ++c) rec[table.columns[c]] = json_number(row[c]);
    arr.push_back(std::move(rec));
  }
  os << arr.dump(2) << '\n';
}

void write_manifest(std::ostream& os, const Manifest& manifest) {
  nlohmann::ordered_json j;
  j["experiment"] = manifest.experiment;
  for (const auto& [k, v] : manifest.entries) j[k] = v;
  os << j.dump(2) << '\n';
}

void write_result(const ExperimentConfig& cfg, const ResultTable& table, const Manifest& manifest,
                  std::ostream& os) {
  auto emit = [&](std::ostream& out) {
    if (cfg.format == OutputFormat::Json) {
      write_json(out, table);
    } else {
      write_csv(out, table);
    }
  };
  if (cfg.output_path.empty()) {
    emit(os);
    return;
  }
  std::ofstream file(cfg.output_path);
  if (!file) throw Error("cannot open " + cfg.output_path + " for writing");
  emit(file);
  std::ofstream mf(cfg.output_path + ".manifest.json");
  if (!mf) throw Error("cannot open " + cfg.output_path + ".manifest.json for writing");
  write_manifest(mf, manifest);
}

}  // namespace haar
