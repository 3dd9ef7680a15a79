#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tplrec/attack.hpp"
#include "tplrec/corpus.hpp"
#include "tplrec/evaluation.hpp"

namespace tplrec {

struct ReportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "%.6f" rendering shared by every report writer; throws ReportError on
// NaN or infinity so nothing non-finite ever reaches a file.
std::string format_fixed(double value);

// Serializes with sorted object keys, two-space indent, and every float in
// fixed six-decimal form, so identical reports are byte-identical files.
std::string to_fixed_json(const nlohmann::json& value);

// Walks the tree and throws ReportError on any non-finite number.
void check_finite(const nlohmann::json& value);

// Writes via a sibling temp file and an atomic rename.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

struct FilePayload {
  std::filesystem::path path;
  std::string content;
};

// Two-phase batch write: stage every temp file first, rename only after all
// stages succeeded, so a failure never leaves a half-written report behind.
void write_files_atomic(std::span<const FilePayload> files);

nlohmann::json stats_json(const CorpusStats& stats);
nlohmann::json evaluation_report_json(const EvaluationReport& report);
nlohmann::json attack_report_json(const AttackReport& report);

// fold,metric,n,value — one row per fold and metric at each list length.
std::string evaluation_folds_csv(const EvaluationReport& report);
// rank_position,head_fraction — pooled head share by list position (1-based).
std::string evaluation_profile_csv(const EvaluationReport& report);
// alpha,n,hit_ratio — target hit ratio per injection ratio and list length.
std::string attack_csv(const AttackReport& report);

}  // namespace tplrec
