#include "tplrec/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

namespace tplrec {

std::string format_fixed(double value) {
  if (!std::isfinite(value)) {
    throw ReportError("refusing to write a non-finite value");
  }
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

namespace {

void append_indent(std::string& out, int depth) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
}

void write_value(std::string& out, const nlohmann::json& value, int depth) {
  switch (value.type()) {
    case nlohmann::json::value_t::null:
      out += "null";
      return;
    case nlohmann::json::value_t::boolean:
      out += value.get<bool>() ? "true" : "false";
      return;
    case nlohmann::json::value_t::number_integer:
      out += std::to_string(value.get<std::int64_t>());
      return;
    case nlohmann::json::value_t::number_unsigned:
      out += std::to_string(value.get<std::uint64_t>());
      return;
    case nlohmann::json::value_t::number_float:
      out += format_fixed(value.get<double>());
      return;
    case nlohmann::json::value_t::string:
      out += nlohmann::json(value.get<std::string>()).dump();  // escaping
      return;
    case nlohmann::json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (auto it = value.begin(); it != value.end(); ++it) {
        append_indent(out, depth + 1);
        write_value(out, *it, depth + 1);
        if (std::next(it) != value.end()) out += ',';
        out += '\n';
      }
      append_indent(out, depth);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      // nlohmann::json objects iterate in sorted key order already.
      out += "{\n";
      for (auto it = value.begin(); it != value.end(); ++it) {
        append_indent(out, depth + 1);
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        write_value(out, it.value(), depth + 1);
        if (std::next(it) != value.end()) out += ',';
        out += '\n';
      }
      append_indent(out, depth);
      out += '}';
      return;
    }
    default:
      throw ReportError("unsupported JSON value type in report");
  }
}

}  // namespace

std::string to_fixed_json(const nlohmann::json& value) {
  std::string out;
  write_value(out, value, 0);
  out += '\n';
  return out;
}

void check_finite(const nlohmann::json& value) {
  if (value.is_number_float()) {
    if (!std::isfinite(value.get<double>())) {
      throw ReportError("report contains a non-finite number");
    }
    return;
  }
  if (value.is_array() || value.is_object()) {
    for (const auto& item : value) check_finite(item);
  }
}

namespace {

std::filesystem::path staging_path(const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  return tmp;
}

void stage_file(const std::filesystem::path& tmp, const std::string& content) {
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ReportError("cannot open " + tmp.string() + " for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) {
    throw ReportError("failed while writing " + tmp.string());
  }
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  const std::filesystem::path tmp = staging_path(path);
  try {
    stage_file(tmp, content);
    std::filesystem::rename(tmp, path);
  } catch (const std::filesystem::filesystem_error& error) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw ReportError("cannot move " + tmp.string() + " into place: " +
                      error.what());
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw;
  }
}

void write_files_atomic(std::span<const FilePayload> files) {
  std::vector<std::filesystem::path> staged;
  staged.reserve(files.size());
  auto discard_staged = [&] {
    for (const auto& tmp : staged) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
    }
  };
  try {
    for (const FilePayload& file : files) {
      const std::filesystem::path tmp = staging_path(file.path);
      stage_file(tmp, file.content);
      staged.push_back(tmp);
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
      std::filesystem::rename(staged[i], files[i].path);
    }
  } catch (const std::filesystem::filesystem_error& error) {
    discard_staged();
    throw ReportError(std::string("batch report write failed: ") +
                      error.what());
  } catch (...) {
    discard_staged();
    throw;
  }
}

nlohmann::json stats_json(const CorpusStats& stats) {
  nlohmann::json out;
  out["n_projects"] = stats.n_projects;
  out["n_libraries"] = stats.n_libraries;
  out["n_singleton_libraries"] = stats.n_singletons;
  out["libs_per_project"] = {
      {"min", stats.min_libs_per_project},
      {"mean", stats.mean_libs_per_project},
      {"max", stats.max_libs_per_project},
  };
  return out;
}

namespace {

nlohmann::json metric_table_json(const MetricTable& table) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [metric, by_n] : table) {
    nlohmann::json row = nlohmann::json::object();
    for (const auto& [n, value] : by_n) {
      row[std::to_string(n)] = value;
    }
    out[metric] = std::move(row);
  }
  return out;
}

nlohmann::json count_map_json(
    const std::map<std::string, std::size_t>& counts) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, value] : counts) out[key] = value;
  return out;
}

}  // namespace

nlohmann::json evaluation_report_json(const EvaluationReport& report) {
  nlohmann::json out;
  out["aggregate"] = metric_table_json(report.aggregate);

  nlohmann::json folds = nlohmann::json::array();
  for (const FoldMetrics& fold : report.folds) {
    nlohmann::json entry;
    entry["fold"] = fold.fold;
    entry["n_evaluated"] = fold.n_evaluated;
    entry["n_skipped_unsplittable"] = fold.n_skipped_unsplittable;
    entry["n_skipped_cold"] = fold.n_skipped_cold;
    entry["metrics"] = metric_table_json(fold.values);
    folds.push_back(std::move(entry));
  }
  out["folds"] = std::move(folds);

  nlohmann::json profile = nlohmann::json::array();
  for (double fraction : report.position_head_fraction) {
    profile.push_back(fraction);
  }
  out["position_head_fraction"] = std::move(profile);

  out["library_counts"] = {
      {"frequency", count_map_json(report.library_frequency)},
      {"ground_truth", count_map_json(report.library_groundtruth)},
      {"recommendations", count_map_json(report.library_recommendations)},
  };
  out["spearman"] = {
      {"frequency_vs_recommendations",
       report.rho_frequency_recommendations
           ? nlohmann::json(*report.rho_frequency_recommendations)
           : nlohmann::json()},
      {"ground_truth_vs_recommendations",
       report.rho_groundtruth_recommendations
           ? nlohmann::json(*report.rho_groundtruth_recommendations)
           : nlohmann::json()},
  };
  out["n_projects_evaluated"] = report.n_projects_evaluated;
  out["n_skipped_unsplittable"] = report.n_skipped_unsplittable;
  out["n_skipped_cold"] = report.n_skipped_cold;
  return out;
}

nlohmann::json attack_report_json(const AttackReport& report) {
  nlohmann::json out;
  out["target_library"] = report.target_library;
  out["filler_count"] = report.filler_count;
  out["filler_pool_size"] = report.filler_pool_size;

  nlohmann::json results = nlohmann::json::array();
  for (const AttackResult& result : report.results) {
    nlohmann::json entry;
    entry["alpha"] = result.alpha;
    entry["fake_projects_total"] = result.fake_projects_total;
    entry["n_projects_evaluated"] = result.n_projects_evaluated;
    nlohmann::json hits = nlohmann::json::object();
    for (const auto& [n, value] : result.hit_ratio) {
      hits[std::to_string(n)] = value;
    }
    entry["hit_ratio"] = std::move(hits);
    results.push_back(std::move(entry));
  }
  out["results"] = std::move(results);
  return out;
}

std::string evaluation_folds_csv(const EvaluationReport& report) {
  std::string out = "fold,metric,n,value\n";
  for (const FoldMetrics& fold : report.folds) {
    for (const auto& [metric, by_n] : fold.values) {
      for (const auto& [n, value] : by_n) {
        out += std::to_string(fold.fold);
        out += ',';
        out += metric;
        out += ',';
        out += std::to_string(n);
        out += ',';
        out += format_fixed(value);
        out += '\n';
      }
    }
  }
  return out;
}

std::string evaluation_profile_csv(const EvaluationReport& report) {
  std::string out = "rank_position,head_fraction\n";
  for (std::size_t r = 0; r < report.position_head_fraction.size(); ++r) {
    out += std::to_string(r + 1);
    out += ',';
    out += format_fixed(report.position_head_fraction[r]);
    out += '\n';
  }
  return out;
}

std::string attack_csv(const AttackReport& report) {
  std::string out = "alpha,n,hit_ratio\n";
  for (const AttackResult& result : report.results) {
    for (const auto& [n, value] : result.hit_ratio) {
      out += format_fixed(result.alpha);
      out += ',';
      out += std::to_string(n);
      out += ',';
      out += format_fixed(value);
      out += '\n';
    }
  }
  return out;
}

}  // namespace tplrec
