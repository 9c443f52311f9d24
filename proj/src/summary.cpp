#include "cepbo/summary.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "cepbo/error.hpp"
#include "cepbo/experiment.hpp"
#include "cepbo/results.hpp"

namespace cepbo {
namespace {

using CellKey = std::tuple<std::string, std::size_t, std::size_t, std::string>;  // bench, D, d, alg

struct Cell {
  Direction direction = Direction::Minimize;
  bool complete = true;
  std::map<std::size_t, double> finals;  // replication -> final best-so-far
};

bool better(Direction dir, double a, double b) {
  return dir == Direction::Minimize ? a < b : a > b;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

SummaryReport summarize(const std::vector<std::filesystem::path>& paths) {
  SummaryReport report;
  std::map<CellKey, Cell> cells;
  std::vector<CellKey> order;

  for (const auto& path : paths) {
    LoadedResults loaded;
    try {
      loaded = read_results(path);
    } catch (const Error& e) {
      report.errors.push_back(path.string() + ": " + e.what());
      continue;
    }
    std::map<CellKey, Cell> local;
    std::vector<CellKey> local_order;
    for (const auto& r : loaded.raw) {
      CellKey key{r.benchmark, r.D, r.d, r.algorithm};
      auto [it, inserted] = local.try_emplace(key);
      if (inserted) local_order.push_back(key);
      it->second.direction = loaded.direction;
      it->second.finals[r.replication] = r.best_so_far;  // rows are in iteration order
    }
    if (loaded.metadata.contains("cells")) {
      const std::string bench = loaded.metadata.value("config", nlohmann::json::object())
                                    .value("benchmark", std::string());
      const std::size_t D =
          loaded.metadata.value("config", nlohmann::json::object()).value("D", std::size_t{0});
      for (const auto& c : loaded.metadata["cells"]) {
        CellKey key{bench, D, c.value("d", std::size_t{0}), c.value("algorithm", std::string())};
        if (c.value("complete", true)) continue;
        auto [it, inserted] = local.try_emplace(key);
        if (inserted) local_order.push_back(key);
        it->second.direction = loaded.direction;
        it->second.complete = false;
      }
    }
    const bool clash = std::any_of(local_order.begin(), local_order.end(),
                                   [&](const CellKey& k) { return cells.count(k) > 0; });
    if (clash) {
      report.errors.push_back(path.string() + ": duplicates a cell from an earlier input");
      continue;
    }
    for (const auto& k : local_order) {
      cells.emplace(k, std::move(local[k]));
      order.push_back(k);
    }
  }

  for (const auto& key : order) {
    const Cell& cell = cells.at(key);
    SummaryRow row;
    std::tie(row.benchmark, row.D, row.d, row.algorithm) = key;
    row.direction = cell.direction;
    row.complete = cell.complete;
    row.runs = cell.finals.size();
    if (!cell.finals.empty()) {
      std::vector<double> values;
      for (const auto& [rep, v] : cell.finals) values.push_back(v);
      row.median = quantile(values, 0.5);
      row.q25 = quantile(values, 0.25);
      row.q75 = quantile(values, 0.75);
      row.iqr = row.q75 - row.q25;
    } else {
      row.median = row.q25 = row.q75 = row.iqr = std::numeric_limits<double>::quiet_NaN();
    }
    report.rows.push_back(std::move(row));
  }

  std::vector<std::tuple<std::string, std::size_t, std::size_t>> groups;
  for (const auto& key : order) {
    std::tuple<std::string, std::size_t, std::size_t> g{std::get<0>(key), std::get<1>(key),
                                                        std::get<2>(key)};
    if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
  }
  for (const auto& g : groups) {
    WinMatrix m;
    std::tie(m.benchmark, m.D, m.d) = g;
    std::vector<const Cell*> members;
    for (const auto& key : order) {
      if (std::get<0>(key) == m.benchmark && std::get<1>(key) == m.D && std::get<2>(key) == m.d) {
        m.algorithms.push_back(std::get<3>(key));
        members.push_back(&cells.at(key));
      }
    }
    const std::size_t k = members.size();
    m.wins.assign(k, std::vector<std::size_t>(k, 0));
    m.paired.assign(k, std::vector<std::size_t>(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j) continue;
        for (const auto& [rep, vi] : members[i]->finals) {
          const auto it = members[j]->finals.find(rep);
          if (it == members[j]->finals.end()) continue;
          ++m.paired[i][j];
          if (better(members[i]->direction, vi, it->second)) ++m.wins[i][j];
        }
      }
    }
    report.matrices.push_back(std::move(m));
  }
  return report;
}

std::string format_summary_text(const SummaryReport& report) {
  std::ostringstream out;
  out << "benchmark            algorithm   D      d    runs  median        q25           q75           iqr\n";
  for (const auto& r : report.rows) {
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %-11s %-6zu %-4zu %-5zu %-13s %-13s %-13s %s%s\n",
                  r.benchmark.c_str(), r.algorithm.c_str(), r.D, r.d, r.runs,
                  fmt(r.median).c_str(), fmt(r.q25).c_str(), fmt(r.q75).c_str(),
                  fmt(r.iqr).c_str(), r.complete ? "" : "  (incomplete)");
    out << line;
  }
  for (const auto& m : report.matrices) {
    out << "\nwins (row beats column) " << m.benchmark << " D=" << m.D << " d=" << m.d << "\n";
    out << "            ";
    for (const auto& a : m.algorithms) {
      char cell[32];
      std::snprintf(cell, sizeof cell, "%-11s ", a.c_str());
      out << cell;
    }
    out << "\n";
    for (std::size_t i = 0; i < m.algorithms.size(); ++i) {
      char head[32];
      std::snprintf(head, sizeof head, "%-11s ", m.algorithms[i].c_str());
      out << head;
      for (std::size_t j = 0; j < m.algorithms.size(); ++j) {
        char cell[32];
        if (i == j) {
          std::snprintf(cell, sizeof cell, "%-11s ", "-");
        } else {
          const std::string frac =
              std::to_string(m.wins[i][j]) + "/" + std::to_string(m.paired[i][j]);
          std::snprintf(cell, sizeof cell, "%-11s ", frac.c_str());
        }
        out << cell;
      }
      out << "\n";
    }
  }
  for (const auto& e : report.errors) out << "error: " << e << "\n";
  return out.str();
}

std::string summary_csv(const SummaryReport& report) {
  std::string out = "benchmark,algorithm,D,d,runs,median,q25,q75,iqr,complete\n";
  for (const auto& r : report.rows) {
    out += r.benchmark + "," + r.algorithm + "," + std::to_string(r.D) + "," +
           std::to_string(r.d) + "," + std::to_string(r.runs) + "," + format_double(r.median) +
           "," + format_double(r.q25) + "," + format_double(r.q75) + "," +
           format_double(r.iqr) + "," + (r.complete ? "1" : "0") + "\n";
  }
  return out;
}

std::string wins_csv(const SummaryReport& report) {
  std::string out = "benchmark,D,d,algorithm,opponent,wins,losses,ties\n";
  for (const auto& m : report.matrices) {
    for (std::size_t i = 0; i < m.algorithms.size(); ++i) {
      for (std::size_t j = 0; j < m.algorithms.size(); ++j) {
        if (i == j) continue;
        const std::size_t ties = m.paired[i][j] - m.wins[i][j] - m.wins[j][i];
        out += m.benchmark + "," + std::to_string(m.D) + "," + std::to_string(m.d) + "," +
               m.algorithms[i] + "," + m.algorithms[j] + "," + std::to_string(m.wins[i][j]) +
               "," + std::to_string(m.wins[j][i]) + "," + std::to_string(ties) + "\n";
      }
    }
  }
  return out;
}

}  // namespace cepbo
