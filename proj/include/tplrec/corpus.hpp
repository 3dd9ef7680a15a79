#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace tplrec {

// Raised on malformed corpus input or invariant violations during construction.
struct CorpusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Binary project -> library usage relation.
///
/// Projects and libraries keep their first-appearance order; each project's
/// usage row is stored as a sorted vector of library indices. Immutable once
/// built (construction goes through add_usage only), so instances are safe to
/// share across threads.
class LibraryCorpus {
 public:
  LibraryCorpus() = default;

  // Records that `project` uses `library`, registering unseen identifiers.
  // Throws CorpusError on invalid identifiers or a duplicate pair.
  void add_usage(std::string_view project, std::string_view library);

  std::size_t project_count() const { return projects_.size(); }
  std::size_t library_count() const { return libraries_.size(); }
  bool empty() const { return projects_.empty(); }

  const std::string& project_id(std::size_t p) const { return projects_[p]; }
  const std::string& library_id(std::size_t l) const { return libraries_[l]; }
  const std::vector<std::string>& project_ids() const { return projects_; }
  const std::vector<std::string>& library_ids() const { return libraries_; }

  std::optional<std::size_t> find_project(std::string_view id) const;
  std::optional<std::size_t> find_library(std::string_view id) const;

  // Sorted library indices used by project p.
  const std::vector<std::size_t>& libraries_of(std::size_t p) const {
    return rows_[p];
  }

  // Library identifiers used by project p, in index order.
  std::vector<std::string> library_ids_of(std::size_t p) const;

  bool uses(std::size_t project, std::size_t library) const;

  // Total number of (project, library) pairs.
  std::size_t pair_count() const;

  // Structural equality: identical project/library orders and usage sets.
  friend bool operator==(const LibraryCorpus& a, const LibraryCorpus& b);

 private:
  std::vector<std::string> projects_;
  std::vector<std::string> libraries_;
  std::vector<std::vector<std::size_t>> rows_;
  std::unordered_map<std::string, std::size_t> project_index_;
  std::unordered_map<std::string, std::size_t> library_index_;
};

/// Per-library usage counts plus the head/tail split over one corpus.
///
/// rank_order sorts libraries by descending frequency, ties broken by
/// ascending identifier; head holds the first ceil(head_fraction * |L|)
/// entries of rank_order.
struct PopularityModel {
  std::vector<std::string> rank_order;
  std::unordered_map<std::string, std::size_t> frequency;
  std::unordered_set<std::string> head;
  double head_fraction = 0.2;

  bool is_head(const std::string& library) const {
    return head.contains(library);
  }
  // 0 for libraries outside the training universe.
  std::size_t freq(const std::string& library) const {
    auto it = frequency.find(library);
    return it == frequency.end() ? 0 : it->second;
  }
  std::size_t max_frequency() const {
    return rank_order.empty() ? 0 : frequency.at(rank_order.front());
  }
  std::size_t library_count() const { return rank_order.size(); }
};

PopularityModel compute_popularity(const LibraryCorpus& corpus,
                                   double head_fraction = 0.2);

/// Configuration for the synthetic long-tail corpus generator.
struct SyntheticConfig {
  std::size_t n_projects = 0;
  std::size_t n_libraries = 0;
  std::size_t min_libs_per_project = 0;
  std::size_t max_libs_per_project = 0;
  double zipf_exponent = 1.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

// Generates a corpus whose library popularity follows a Zipf distribution
// over library ranks. Pure function of the config, seed included.
LibraryCorpus generate_synthetic(const SyntheticConfig& config);

enum class CorpusFormat { csv, json };

// Stream-level parsers; `source_name` appears in error messages.
LibraryCorpus parse_corpus_csv(std::istream& in,
                               std::string_view source_name = "<csv>");
LibraryCorpus parse_corpus_json(std::istream& in,
                                std::string_view source_name = "<json>");

LibraryCorpus load_corpus(const std::filesystem::path& path,
                          CorpusFormat format);
void save_corpus(const LibraryCorpus& corpus, std::ostream& out,
                 CorpusFormat format);
void save_corpus(const LibraryCorpus& corpus,
                 const std::filesystem::path& path, CorpusFormat format);

struct CorpusStats {
  std::size_t n_projects = 0;
  std::size_t n_libraries = 0;
  std::size_t n_singletons = 0;  // libraries used by exactly one project
  std::size_t min_libs_per_project = 0;
  double mean_libs_per_project = 0.0;
  std::size_t max_libs_per_project = 0;
};

CorpusStats corpus_stats(const LibraryCorpus& corpus);

// New corpus containing only the given projects, keeping relative project
// order; libraries are re-registered in first-appearance order.
LibraryCorpus project_subset(const LibraryCorpus& corpus,
                             std::span<const std::size_t> projects);

// Content hash over identifiers and usage rows; equal corpora hash equal.
std::uint64_t corpus_fingerprint(const LibraryCorpus& corpus);

}  // namespace tplrec
