#include "tplrec/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "tplrec/rng.hpp"

namespace tplrec {

namespace {

void validate_identifier(std::string_view id, std::string_view kind) {
  if (id.empty()) {
    throw CorpusError(std::string("empty ") + std::string(kind) + " identifier");
  }
  if (id.find_first_of(",\n\r") != std::string_view::npos) {
    throw CorpusError(std::string(kind) + " identifier '" + std::string(id) +
                      "' contains a separator character");
  }
}

}  // namespace

void LibraryCorpus::add_usage(std::string_view project,
                              std::string_view library) {
  validate_identifier(project, "project");
  validate_identifier(library, "library");

  std::size_t p;
  if (auto it = project_index_.find(std::string(project));
      it != project_index_.end()) {
    p = it->second;
  } else {
    p = projects_.size();
    projects_.emplace_back(project);
    rows_.emplace_back();
    project_index_.emplace(projects_.back(), p);
  }

  std::size_t l;
  if (auto it = library_index_.find(std::string(library));
      it != library_index_.end()) {
    l = it->second;
  } else {
    l = libraries_.size();
    libraries_.emplace_back(library);
    library_index_.emplace(libraries_.back(), l);
  }

  auto& row = rows_[p];
  auto pos = std::lower_bound(row.begin(), row.end(), l);
  if (pos != row.end() && *pos == l) {
    throw CorpusError("duplicate usage pair (" + std::string(project) + ", " +
                      std::string(library) + ")");
  }
  row.insert(pos, l);
}

std::optional<std::size_t> LibraryCorpus::find_project(
    std::string_view id) const {
  auto it = project_index_.find(std::string(id));
  if (it == project_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> LibraryCorpus::find_library(
    std::string_view id) const {
  auto it = library_index_.find(std::string(id));
  if (it == library_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> LibraryCorpus::library_ids_of(std::size_t p) const {
  std::vector<std::string> out;
  out.reserve(rows_[p].size());
  for (std::size_t l : rows_[p]) out.push_back(libraries_[l]);
  return out;
}

bool LibraryCorpus::uses(std::size_t project, std::size_t library) const {
  const auto& row = rows_[project];
  return std::binary_search(row.begin(), row.end(), library);
}

std::size_t LibraryCorpus::pair_count() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.size();
  return n;
}

bool operator==(const LibraryCorpus& a, const LibraryCorpus& b) {
  return a.projects_ == b.projects_ && a.libraries_ == b.libraries_ &&
         a.rows_ == b.rows_;
}

PopularityModel compute_popularity(const LibraryCorpus& corpus,
                                   double head_fraction) {
  if (corpus.empty()) {
    throw std::invalid_argument("compute_popularity: empty corpus");
  }
  if (!(head_fraction > 0.0 && head_fraction < 1.0)) {
    throw std::invalid_argument("compute_popularity: head_fraction must be in (0,1)");
  }

  PopularityModel model;
  model.head_fraction = head_fraction;

  const std::size_t n_libs = corpus.library_count();
  std::vector<std::size_t> counts(n_libs, 0);
  for (std::size_t p = 0; p < corpus.project_count(); ++p) {
    for (std::size_t l : corpus.libraries_of(p)) ++counts[l];
  }

  std::vector<std::size_t> order(n_libs);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (counts[a] != counts[b]) return counts[a] > counts[b];
    return corpus.library_id(a) < corpus.library_id(b);
  });

  model.rank_order.reserve(n_libs);
  for (std::size_t l : order) {
    model.rank_order.push_back(corpus.library_id(l));
    model.frequency.emplace(corpus.library_id(l), counts[l]);
  }

  const auto head_size = static_cast<std::size_t>(
      std::ceil(head_fraction * static_cast<double>(n_libs)));
  for (std::size_t i = 0; i < head_size && i < n_libs; ++i) {
    model.head.insert(model.rank_order[i]);
  }
  return model;
}

void SyntheticConfig::validate() const {
  if (n_projects == 0 || n_libraries == 0) {
    throw std::invalid_argument("synthetic config: counts must be positive");
  }
  if (min_libs_per_project == 0 || max_libs_per_project == 0) {
    throw std::invalid_argument("synthetic config: per-project bounds must be positive");
  }
  if (min_libs_per_project > max_libs_per_project ||
      max_libs_per_project > n_libraries) {
    throw std::invalid_argument(
        "synthetic config: requires min_libs <= max_libs <= n_libraries");
  }
  if (!(zipf_exponent > 0.0)) {
    throw std::invalid_argument("synthetic config: zipf_exponent must be positive");
  }
}

namespace {

std::string padded_id(char prefix, std::size_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  std::string out(1, prefix);
  if (digits.size() < width) out.append(width - digits.size(), '0');
  out += digits;
  return out;
}

}  // namespace

LibraryCorpus generate_synthetic(const SyntheticConfig& config) {
  config.validate();

  const std::size_t id_width_p = std::to_string(config.n_projects).size();
  const std::size_t id_width_l = std::to_string(config.n_libraries).size();

  // Zipf weights over library ranks 1..n; cumulative sums for inversion.
  std::vector<double> cumulative(config.n_libraries);
  double total = 0.0;
  for (std::size_t r = 0; r < config.n_libraries; ++r) {
    total += std::pow(static_cast<double>(r + 1), -config.zipf_exponent);
    cumulative[r] = total;
  }

  Rng rng(derive_seed(config.seed, "synthetic"));
  LibraryCorpus corpus;
  std::vector<bool> used(config.n_libraries);

  for (std::size_t p = 0; p < config.n_projects; ++p) {
    const std::size_t span =
        config.max_libs_per_project - config.min_libs_per_project + 1;
    const std::size_t n_draws =
        config.min_libs_per_project + rng.uniform_index(span);

    std::fill(used.begin(), used.end(), false);
    std::vector<std::size_t> drawn;
    drawn.reserve(n_draws);

    // Rejection-resample duplicates; bounded, with an exact renormalized
    // draw over the unused ranks if the budget runs out.
    std::size_t attempts_left = 100 + 50 * n_draws;
    while (drawn.size() < n_draws) {
      if (attempts_left == 0) {
        double remaining = 0.0;
        for (std::size_t r = 0; r < config.n_libraries; ++r) {
          if (!used[r]) {
            remaining += std::pow(static_cast<double>(r + 1), -config.zipf_exponent);
          }
        }
        double u = rng.uniform01() * remaining;
        std::size_t pick = config.n_libraries;
        for (std::size_t r = 0; r < config.n_libraries; ++r) {
          if (used[r]) continue;
          u -= std::pow(static_cast<double>(r + 1), -config.zipf_exponent);
          pick = r;
          if (u <= 0.0) break;
        }
        used[pick] = true;
        drawn.push_back(pick);
        continue;
      }
      --attempts_left;
      const double u = rng.uniform01() * total;
      const auto it =
          std::lower_bound(cumulative.begin(), cumulative.end(), u);
      const auto rank = static_cast<std::size_t>(
          std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                   static_cast<std::ptrdiff_t>(config.n_libraries) - 1));
      if (used[rank]) continue;
      used[rank] = true;
      drawn.push_back(rank);
    }

    // Insert in draw order so first-appearance library order is random-driven
    // but deterministic.
    const std::string project = padded_id('p', p + 1, id_width_p);
    for (std::size_t rank : drawn) {
      corpus.add_usage(project, padded_id('l', rank + 1, id_width_l));
    }
  }
  return corpus;
}

namespace {

[[noreturn]] void csv_error(std::string_view source, std::size_t line,
                            const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  throw CorpusError(msg.str());
}

}  // namespace

LibraryCorpus parse_corpus_csv(std::istream& in, std::string_view source_name) {
  LibraryCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      csv_error(source_name, line_no, "expected 'project_id,library_id'");
    }
    if (line.find(',', comma + 1) != std::string::npos) {
      csv_error(source_name, line_no, "too many fields");
    }
    try {
      corpus.add_usage(std::string_view(line).substr(0, comma),
                       std::string_view(line).substr(comma + 1));
    } catch (const CorpusError& e) {
      csv_error(source_name, line_no, e.what());
    }
  }
  if (corpus.empty()) {
    throw CorpusError(std::string(source_name) + ": no usage rows");
  }
  return corpus;
}

LibraryCorpus parse_corpus_json(std::istream& in,
                                std::string_view source_name) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw CorpusError(std::string(source_name) + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw CorpusError(std::string(source_name) +
                      ": expected an object mapping project -> [libraries]");
  }
  LibraryCorpus corpus;
  for (const auto& [project, libs] : doc.items()) {
    if (!libs.is_array() || libs.empty()) {
      throw CorpusError(std::string(source_name) + ": project '" + project +
                        "' must map to a non-empty array of library ids");
    }
    for (const auto& lib : libs) {
      if (!lib.is_string()) {
        throw CorpusError(std::string(source_name) + ": project '" + project +
                          "' has a non-string library entry");
      }
      try {
        corpus.add_usage(project, lib.get<std::string>());
      } catch (const CorpusError& e) {
        throw CorpusError(std::string(source_name) + ": " + e.what());
      }
    }
  }
  if (corpus.empty()) {
    throw CorpusError(std::string(source_name) + ": no usage rows");
  }
  return corpus;
}

LibraryCorpus load_corpus(const std::filesystem::path& path,
                          CorpusFormat format) {
  std::ifstream in(path);
  if (!in) {
    throw CorpusError("cannot open corpus file: " + path.string());
  }
  return format == CorpusFormat::csv ? parse_corpus_csv(in, path.string())
                                     : parse_corpus_json(in, path.string());
}

void save_corpus(const LibraryCorpus& corpus, std::ostream& out,
                 CorpusFormat format) {
  if (format == CorpusFormat::csv) {
    for (std::size_t p = 0; p < corpus.project_count(); ++p) {
      for (std::size_t l : corpus.libraries_of(p)) {
        out << corpus.project_id(p) << ',' << corpus.library_id(l) << '\n';
      }
    }
    return;
  }
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (std::size_t p = 0; p < corpus.project_count(); ++p) {
    doc[corpus.project_id(p)] = corpus.library_ids_of(p);
  }
  out << doc.dump(2) << '\n';
}

void save_corpus(const LibraryCorpus& corpus,
                 const std::filesystem::path& path, CorpusFormat format) {
  std::ofstream out(path);
  if (!out) {
    throw CorpusError("cannot write corpus file: " + path.string());
  }
  save_corpus(corpus, out, format);
}

CorpusStats corpus_stats(const LibraryCorpus& corpus) {
  CorpusStats stats;
  stats.n_projects = corpus.project_count();
  stats.n_libraries = corpus.library_count();
  if (corpus.empty()) return stats;

  std::vector<std::size_t> counts(corpus.library_count(), 0);
  std::size_t total_pairs = 0;
  stats.min_libs_per_project = corpus.libraries_of(0).size();
  for (std::size_t p = 0; p < corpus.project_count(); ++p) {
    const auto& row = corpus.libraries_of(p);
    total_pairs += row.size();
    stats.min_libs_per_project = std::min(stats.min_libs_per_project, row.size());
    stats.max_libs_per_project = std::max(stats.max_libs_per_project, row.size());
    for (std::size_t l : row) ++counts[l];
  }
  stats.n_singletons = static_cast<std::size_t>(
      std::count(counts.begin(), counts.end(), std::size_t{1}));
  stats.mean_libs_per_project =
      static_cast<double>(total_pairs) / static_cast<double>(stats.n_projects);
  return stats;
}

LibraryCorpus project_subset(const LibraryCorpus& corpus,
                             std::span<const std::size_t> projects) {
  LibraryCorpus out;
  for (std::size_t p : projects) {
    for (std::size_t l : corpus.libraries_of(p)) {
      out.add_usage(corpus.project_id(p), corpus.library_id(l));
    }
  }
  return out;
}

std::uint64_t corpus_fingerprint(const LibraryCorpus& corpus) {
  std::uint64_t h = fnv1a64("corpus");
  auto absorb = [&h](std::string_view s) {
    h = mix64(h ^ fnv1a64(s));
  };
  for (std::size_t p = 0; p < corpus.project_count(); ++p) {
    absorb(corpus.project_id(p));
    for (std::size_t l : corpus.libraries_of(p)) {
      absorb(corpus.library_id(l));
    }
  }
  return h;
}

}  // namespace tplrec
