#include "cepbo/results.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "cepbo/error.hpp"

namespace cepbo {
namespace {

const char* kRawHeader = "benchmark,algorithm,D,d,replication,iteration,x_hash,f,best_so_far,flags";
const char* kAggregateHeader = "benchmark,algorithm,D,d,iteration,median,q25,q75,runs";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') throw ValidationError(where + ": bad number '" + text + "'");
  return v;
}

std::size_t parse_count(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0' || text.front() == '-')
    throw ValidationError(where + ": bad integer '" + text + "'");
  return static_cast<std::size_t>(v);
}

bool same_value(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string hash_point(const Eigen::VectorXd& x) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(x[i]);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_flags(const IterationRecord& rec) {
  std::vector<std::string> tokens;
  if (rec.initial) tokens.emplace_back("init");
  if (rec.surrogate_fallback) tokens.emplace_back("fallback");
  if (rec.hyper_fallback) tokens.emplace_back("hyperfallback");
  if (rec.non_finite) tokens.emplace_back("nonfinite");
  if (rec.clamped_embedding > 0) tokens.push_back("cy=" + std::to_string(rec.clamped_embedding));
  if (rec.clamped_original > 0) tokens.push_back("cx=" + std::to_string(rec.clamped_original));
  if (tokens.empty()) return "-";
  std::string out = tokens.front();
  for (std::size_t i = 1; i < tokens.size(); ++i) out += "|" + tokens[i];
  return out;
}

std::vector<RawRow> raw_rows(const ExperimentResult& result) {
  std::vector<RawRow> rows;
  for (const auto& run : result.runs) {
    if (!run.record) continue;
    const RunRecord& rec = *run.record;
    const auto curve = reported_curve(rec, result.direction);
    for (std::size_t t = 0; t < rec.iterations.size(); ++t) {
      RawRow row;
      row.benchmark = result.config.benchmark;
      row.algorithm = std::string(to_string(run.algorithm));
      row.D = result.config.D;
      row.d = run.d;
      row.replication = run.replication;
      row.iteration = t;
      row.x_hash = hash_point(rec.trajectory[t].x);
      row.f = to_maximization(result.direction, rec.iterations[t].value);
      row.best_so_far = curve[t];
      row.flags = format_flags(rec.iterations[t]);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<AggregateRow> aggregate_rows(const ExperimentResult& result) {
  std::vector<AggregateRow> rows;
  for (const auto& cell : result.aggregates) {
    for (std::size_t t = 0; t < cell.per_iteration.size(); ++t) {
      AggregateRow row;
      row.benchmark = result.config.benchmark;
      row.algorithm = std::string(to_string(cell.algorithm));
      row.D = result.config.D;
      row.d = cell.d;
      row.iteration = t;
      row.median = cell.per_iteration[t].median;
      row.q25 = cell.per_iteration[t].q25;
      row.q75 = cell.per_iteration[t].q75;
      row.runs = cell.runs;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

nlohmann::json metadata_json(const ExperimentResult& result) {
  nlohmann::json meta;
  meta["schema_version"] = kResultsSchemaVersion;
  meta["code_version"] = kCodeVersion;
  meta["config"] = to_json(result.config);
  meta["direction"] = result.direction == Direction::Minimize ? "minimize" : "maximize";
  meta["evaluations"] = result.config.evaluations;
  meta["wall_seconds"] = result.wall_seconds;
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& run : result.runs) {
    nlohmann::json r;
    r["algorithm"] = to_string(run.algorithm);
    r["d"] = run.d;
    r["replication"] = run.replication;
    r["seed"] = run.seed;
    r["status"] = run.record ? "ok" : "failed";
    if (run.record) r["wall_seconds"] = run.record->wall_seconds;
    if (!run.error.empty()) r["error"] = run.error;
    runs.push_back(std::move(r));
  }
  meta["runs"] = std::move(runs);
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : result.aggregates) {
    cells.push_back({{"algorithm", to_string(cell.algorithm)},
                     {"d", cell.d},
                     {"runs", cell.runs},
                     {"complete", cell.complete}});
  }
  meta["cells"] = std::move(cells);
  return meta;
}

void write_results(const ExperimentResult& result, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());

  std::string raw = std::string(kRawHeader) + "\n";
  for (const auto& r : raw_rows(result)) {
    raw += r.benchmark + "," + r.algorithm + "," + std::to_string(r.D) + "," + std::to_string(r.d) +
           "," + std::to_string(r.replication) + "," + std::to_string(r.iteration) + "," +
           r.x_hash + "," + format_double(r.f) + "," + format_double(r.best_so_far) + "," +
           r.flags + "\n";
  }
  std::string agg = std::string(kAggregateHeader) + "\n";
  for (const auto& a : aggregate_rows(result)) {
    agg += a.benchmark + "," + a.algorithm + "," + std::to_string(a.D) + "," +
           std::to_string(a.d) + "," + std::to_string(a.iteration) + "," +
           format_double(a.median) + "," + format_double(a.q25) + "," + format_double(a.q75) +
           "," + std::to_string(a.runs) + "\n";
  }
  write_text(directory / kRawFile, raw);
  write_text(directory / kAggregateFile, agg);
  write_text(directory / kMetadataFile, metadata_json(result).dump(2) + "\n");
}

LoadedResults read_results(const std::filesystem::path& directory) {
  LoadedResults out;
  out.directory = directory;

  const auto meta_path = directory / kMetadataFile;
  {
    auto in = open_input(meta_path);
    try {
      in >> out.metadata;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(meta_path.string() + ": " + e.what());
    }
  }
  const auto& meta = out.metadata;
  if (!meta.is_object() || !meta.contains("schema_version") ||
      meta["schema_version"] != kResultsSchemaVersion)
    throw ValidationError(meta_path.string() + ": unsupported schema_version (expected " +
                          std::to_string(kResultsSchemaVersion) + ")");
  if (!meta.contains("direction") || !meta["direction"].is_string())
    throw ValidationError(meta_path.string() + ": missing direction");
  const std::string dir = meta["direction"];
  if (dir == "minimize") {
    out.direction = Direction::Minimize;
  } else if (dir == "maximize") {
    out.direction = Direction::Maximize;
  } else {
    throw ValidationError(meta_path.string() + ": bad direction '" + dir + "'");
  }

  const auto raw_path = directory / kRawFile;
  {
    auto in = open_input(raw_path);
    std::string line;
    if (!std::getline(in, line) || line != kRawHeader)
      throw ValidationError(raw_path.string() + ": header mismatch");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const std::string where = raw_path.string() + ":" + std::to_string(lineno);
      const auto f = split(line, ',');
      if (f.size() != 10) throw ValidationError(where + ": expected 10 columns");
      RawRow r;
      r.benchmark = f[0];
      r.algorithm = f[1];
      r.D = parse_count(f[2], where);
      r.d = parse_count(f[3], where);
      r.replication = parse_count(f[4], where);
      r.iteration = parse_count(f[5], where);
      r.x_hash = f[6];
      r.f = parse_double(f[7], where);
      r.best_so_far = parse_double(f[8], where);
      r.flags = f[9];
      out.raw.push_back(std::move(r));
    }
  }

  const auto agg_path = directory / kAggregateFile;
  {
    auto in = open_input(agg_path);
    std::string line;
    if (!std::getline(in, line) || line != kAggregateHeader)
      throw ValidationError(agg_path.string() + ": header mismatch");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const std::string where = agg_path.string() + ":" + std::to_string(lineno);
      const auto f = split(line, ',');
      if (f.size() != 9) throw ValidationError(where + ": expected 9 columns");
      AggregateRow a;
      a.benchmark = f[0];
      a.algorithm = f[1];
      a.D = parse_count(f[2], where);
      a.d = parse_count(f[3], where);
      a.iteration = parse_count(f[4], where);
      a.median = parse_double(f[5], where);
      a.q25 = parse_double(f[6], where);
      a.q75 = parse_double(f[7], where);
      a.runs = parse_count(f[8], where);
      out.aggregates.push_back(std::move(a));
    }
  }

  // cross-check
  using CellKey = std::tuple<std::string, std::string, std::size_t, std::size_t>;
  std::map<CellKey, std::map<std::size_t, std::vector<double>>> curves;
  for (const auto& r : out.raw) {
    auto& curve = curves[{r.benchmark, r.algorithm, r.D, r.d}][r.replication];
    if (r.iteration != curve.size())
      throw ValidationError(raw_path.string() + ": iterations out of order for " + r.algorithm +
                            " d=" + std::to_string(r.d) + " replication " +
                            std::to_string(r.replication));
    curve.push_back(r.best_so_far);
  }
  std::map<CellKey, std::vector<const AggregateRow*>> stored;
  for (const auto& a : out.aggregates) stored[{a.benchmark, a.algorithm, a.D, a.d}].push_back(&a);

  for (const auto& [key, rows] : stored) {
    const auto it = curves.find(key);
    std::vector<std::vector<double>> cell;
    if (it != curves.end())
      for (const auto& [rep, curve] : it->second) cell.push_back(curve);
    const auto recomputed = aggregate_curves(cell);
    const std::string label = std::get<1>(key) + " d=" + std::to_string(std::get<3>(key));
    if (recomputed.size() != rows.size())
      throw ValidationError(agg_path.string() + ": aggregate length mismatch for " + label);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const AggregateRow& a = *rows[t];
      if (a.iteration != t || a.runs != cell.size() ||
          !same_value(a.median, recomputed[t].median) || !same_value(a.q25, recomputed[t].q25) ||
          !same_value(a.q75, recomputed[t].q75))
        throw ValidationError(agg_path.string() + ": aggregate disagrees with raw records for " +
                              label + " at iteration " + std::to_string(t));
    }
  }
  for (const auto& [key, reps] : curves) {
    if (!stored.count(key))
      throw ValidationError(agg_path.string() + ": no aggregate for " + std::get<1>(key) +
                            " d=" + std::to_string(std::get<3>(key)));
  }
  return out;
}

}  // namespace cepbo
