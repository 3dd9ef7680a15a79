// Command-line front end: stats, gen-synth, evaluate, rerank-eval, attack.
//
// Exit codes: 0 success, 1 internal error, 2 command-line error,
// 3 configuration error, 4 input/output error.
//
// Config files (--config) hold a flat JSON object or key=value lines whose
// keys are the subcommand's long option names. They are applied by re-parsing
// the command line with the file's values appended, skipping every option the
// user already set explicitly, so flags always beat the file.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tplrec/attack.hpp"
#include "tplrec/corpus.hpp"
#include "tplrec/evaluation.hpp"
#include "tplrec/report_io.hpp"

namespace {

using nlohmann::json;

struct ConfigFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string scalar_to_string(const json& value) {
  switch (value.type()) {
    case json::value_t::string:
      return value.get<std::string>();
    case json::value_t::boolean:
      return value.get<bool>() ? "true" : "false";
    case json::value_t::number_integer:
      return std::to_string(value.get<std::int64_t>());
    case json::value_t::number_unsigned:
      return std::to_string(value.get<std::uint64_t>());
    case json::value_t::number_float:
      return value.dump();
    default:
      throw ConfigFileError("config values must be scalars or flat arrays");
  }
}

using ConfigItems =
    std::vector<std::pair<std::string, std::vector<std::string>>>;

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return std::string(text.substr(begin, end - begin));
}

std::string strip_quotes(std::string value) {
  if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
      value.back() == value.front()) {
    return value.substr(1, value.size() - 2);
  }
  return value;
}

// key=value lines; blank lines and lines starting with '#' or ';' are skipped.
ConfigItems parse_kv_config(std::istream& in) {
  ConfigItems items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#' ||
        stripped.front() == ';') {
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigFileError("config line " + std::to_string(line_no) +
                            ": expected key=value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    if (key.empty()) {
      throw ConfigFileError("config line " + std::to_string(line_no) +
                            ": empty key");
    }
    items.emplace_back(
        key, std::vector<std::string>{
                 strip_quotes(trim(stripped.substr(eq + 1)))});
  }
  return items;
}

// The first non-space character decides the format: '{' means JSON.
ConfigItems read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigFileError("cannot open config file: " + path);
  }
  int c = in.peek();
  while (c != EOF && std::isspace(c)) {
    in.get();
    c = in.peek();
  }
  if (c == EOF) return {};
  if (c != '{') return parse_kv_config(in);

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& error) {
    throw ConfigFileError(std::string("invalid JSON config: ") + error.what());
  }
  if (!doc.is_object()) {
    throw ConfigFileError("JSON config root must be an object");
  }
  ConfigItems items;
  for (const auto& [key, value] : doc.items()) {
    std::vector<std::string> inputs;
    if (value.is_array()) {
      for (const auto& element : value) {
        inputs.push_back(scalar_to_string(element));
      }
    } else {
      inputs.push_back(scalar_to_string(value));
    }
    items.emplace_back(key, std::move(inputs));
  }
  return items;
}

// "--key=value" tokens for every config item whose option the command line
// left untouched. Unknown keys are errors, not typos to ignore.
std::vector<std::string> config_tokens(const CLI::App& cmd,
                                       const ConfigItems& items) {
  std::vector<std::string> tokens;
  for (const auto& [key, inputs] : items) {
    if (key == "config" || key == "help" || key == "version") {
      throw ConfigFileError("config files cannot set --" + key);
    }
    const CLI::Option* option = cmd.get_option_no_throw("--" + key);
    if (option == nullptr && key.size() == 1) {
      option = cmd.get_option_no_throw("-" + key);
    }
    if (option == nullptr) {
      throw ConfigFileError("unknown config key: " + key);
    }
    if (option->count() > 0) continue;  // explicit command line wins
    const auto& long_names = option->get_lnames();
    if (long_names.empty()) {
      throw ConfigFileError("config key has no long option form: " + key);
    }
    for (const std::string& input : inputs) {
      tokens.push_back("--" + long_names.front() + "=" + input);
    }
  }
  return tokens;
}

struct CommonOpts {
  std::string corpus_path;
  std::string format = "csv";
  std::string out_dir = ".";
  std::uint64_t seed = 42;
  std::string config_path;
};

struct EvalOpts {
  std::string algo = "cf";
  std::size_t folds = 10;
  std::vector<std::size_t> n_values = {5, 10, 15, 20};
  double head_fraction = 0.2;
  std::size_t candidates = 0;
  bool head_tail_full_corpus = false;
  bool epc_training_frequency = false;
  std::size_t neighbors = 25;
  double min_support = 0.05;
  double min_confidence = 0.3;
  std::size_t max_antecedent = 2;
  std::size_t factors = 32;
  std::size_t iterations = 15;
  double regularization = 0.1;
  double weight_exponent = 0.5;
};

struct RerankOpts {
  double gamma = 0.2;
  double smoothing = 1.0;
};

struct AttackOpts {
  std::string target;
  std::vector<double> alphas = {0.05, 0.10, 0.15, 0.20};
  std::size_t fillers = 0;
  std::size_t pool = 20;
};

struct SynthOpts {
  std::size_t projects = 0;
  std::size_t libraries = 0;
  std::size_t min_libs = 2;
  std::size_t max_libs = 20;
  double zipf = 1.0;
};

void add_common_options(CLI::App* cmd, CommonOpts& opts, bool needs_corpus) {
  if (needs_corpus) {
    cmd->add_option("-c,--corpus", opts.corpus_path, "Corpus file to load")
        ->required();
    cmd->add_option("--format", opts.format, "Corpus file format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  }
  cmd->add_option("-o,--out", opts.out_dir, "Output directory")
      ->capture_default_str();
  cmd->add_option("--seed", opts.seed, "Base seed for all randomized steps")
      ->capture_default_str();
  cmd->add_option("--config", opts.config_path,
                  "Config file: flat JSON object or key=value lines");
}

void add_eval_options(CLI::App* cmd, EvalOpts& opts) {
  cmd->add_option("-a,--algo", opts.algo, "Recommender to evaluate")
      ->check(CLI::IsMember({"popularity", "cf", "assoc", "wmf"}))
      ->capture_default_str();
  cmd->add_option("-k,--folds", opts.folds, "Cross-validation folds")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}))
      ->capture_default_str();
  cmd->add_option("-n,--n", opts.n_values, "List lengths to evaluate at")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--head-fraction", opts.head_fraction,
                  "Share of libraries counted as the popular head")
      ->check(CLI::Range(1e-9, 1.0))
      ->capture_default_str();

  const char* advanced = "Advanced";
  cmd->add_option("--candidates", opts.candidates,
                  "Candidate pool depth (0 = max(10 * max n, 100))")
      ->group(advanced)
      ->capture_default_str();
  cmd->add_flag("--head-tail-full-corpus", opts.head_tail_full_corpus,
                "Base the head/tail split on the full corpus instead of each "
                "training fold")
      ->group(advanced);
  cmd->add_flag("--epc-training-frequency", opts.epc_training_frequency,
                "Base EPC popularity on training frequency instead of "
                "recommendation counts")
      ->group(advanced);
  cmd->add_option("--neighbors", opts.neighbors, "Neighborhood size (cf)")
      ->group(advanced)
      ->capture_default_str();
  cmd->add_option("--min-support", opts.min_support, "Rule support (assoc)")
      ->group(advanced)
      ->capture_default_str();
  cmd->add_option("--min-confidence", opts.min_confidence,
                  "Rule confidence (assoc)")
      ->group(advanced)
      ->capture_default_str();
  cmd->add_option("--max-antecedent", opts.max_antecedent,
                  "Largest rule antecedent (assoc)")
      ->group(advanced)
      ->capture_default_str();
  cmd->add_option("--factors", opts.factors, "Latent factors (wmf)")
      ->group(advanced)
      ->capture_default_str();
  cmd->add_option("--iterations", opts.iterations, "Training sweeps (wmf)")
      ->group(advanced)
      ->capture_default_str();
  cmd->add_option("--regularization", opts.regularization,
                  "L2 regularization (wmf)")
      ->group(advanced)
      ->capture_default_str();
  cmd->add_option("--weight-exponent", opts.weight_exponent,
                  "Confidence weight exponent (wmf)")
      ->group(advanced)
      ->capture_default_str();
}

tplrec::CorpusFormat parse_format(const std::string& format) {
  return format == "json" ? tplrec::CorpusFormat::json
                          : tplrec::CorpusFormat::csv;
}

tplrec::EvalOptions make_eval_options(const CommonOpts& common,
                                      const EvalOpts& eval) {
  tplrec::EvalOptions options;
  options.algo.algorithm = tplrec::parse_algorithm(eval.algo);
  options.algo.k_neighbors = eval.neighbors;
  options.algo.min_support = eval.min_support;
  options.algo.min_confidence = eval.min_confidence;
  options.algo.max_antecedent = eval.max_antecedent;
  options.algo.factors = eval.factors;
  options.algo.iterations = eval.iterations;
  options.algo.regularization = eval.regularization;
  options.algo.weight_exponent = eval.weight_exponent;
  options.n_values = eval.n_values;
  std::sort(options.n_values.begin(), options.n_values.end());
  options.n_values.erase(
      std::unique(options.n_values.begin(), options.n_values.end()),
      options.n_values.end());
  options.head_fraction = eval.head_fraction;
  options.head_tail_full_corpus = eval.head_tail_full_corpus;
  options.epc_training_frequency = eval.epc_training_frequency;
  options.candidate_pool = eval.candidates;
  options.seed = common.seed;
  return options;
}

json echo_common(const std::string& command, const CommonOpts& common,
                 bool has_corpus) {
  json echo;
  echo["command"] = command;
  if (has_corpus) {
    echo["corpus"] = common.corpus_path;
    echo["format"] = common.format;
  }
  echo["out"] = common.out_dir;
  echo["seed"] = common.seed;
  if (!common.config_path.empty()) {
    echo["config_file"] = common.config_path;
  }
  return echo;
}

json echo_eval(const EvalOpts& eval, const tplrec::EvalOptions& options) {
  json echo;
  echo["algo"] = eval.algo;
  echo["folds"] = eval.folds;
  echo["n_values"] = options.n_values;
  echo["head_fraction"] = options.head_fraction;
  echo["candidate_pool"] = options.effective_pool();
  echo["head_tail_full_corpus"] = options.head_tail_full_corpus;
  echo["epc_training_frequency"] = options.epc_training_frequency;
  echo["neighbors"] = eval.neighbors;
  echo["min_support"] = eval.min_support;
  echo["min_confidence"] = eval.min_confidence;
  echo["max_antecedent"] = eval.max_antecedent;
  echo["factors"] = eval.factors;
  echo["iterations"] = eval.iterations;
  echo["regularization"] = eval.regularization;
  echo["weight_exponent"] = eval.weight_exponent;
  return echo;
}

std::filesystem::path prepare_out_dir(const CommonOpts& common) {
  std::filesystem::path dir(common.out_dir);
  try {
    std::filesystem::create_directories(dir);
  } catch (const std::filesystem::filesystem_error& error) {
    throw tplrec::ReportError(std::string("cannot create output directory: ") +
                              error.what());
  }
  return dir;
}

tplrec::LibraryCorpus load(const CommonOpts& common) {
  return tplrec::load_corpus(common.corpus_path, parse_format(common.format));
}

int run_stats(const CommonOpts& common) {
  tplrec::LibraryCorpus corpus = load(common);
  json out = tplrec::stats_json(tplrec::corpus_stats(corpus));
  out["config"] = echo_common("stats", common, true);
  const auto dir = prepare_out_dir(common);
  tplrec::write_file_atomic(dir / "stats.json", tplrec::to_fixed_json(out));
  std::cout << "wrote " << (dir / "stats.json").string() << '\n';
  return 0;
}

int run_gen_synth(const CommonOpts& common, const SynthOpts& synth) {
  tplrec::SyntheticConfig config;
  config.n_projects = synth.projects;
  config.n_libraries = synth.libraries;
  config.min_libs_per_project = synth.min_libs;
  config.max_libs_per_project = synth.max_libs;
  config.zipf_exponent = synth.zipf;
  config.seed = common.seed;
  config.validate();

  tplrec::LibraryCorpus corpus = tplrec::generate_synthetic(config);
  std::ostringstream csv;
  tplrec::save_corpus(corpus, csv, tplrec::CorpusFormat::csv);
  const auto dir = prepare_out_dir(common);
  tplrec::write_file_atomic(dir / "synthetic.csv", csv.str());
  std::cout << "wrote " << (dir / "synthetic.csv").string() << " ("
            << corpus.project_count() << " projects, "
            << corpus.library_count() << " libraries)\n";
  return 0;
}

int run_evaluate(const CommonOpts& common, const EvalOpts& eval) {
  tplrec::LibraryCorpus corpus = load(common);
  tplrec::EvalOptions options = make_eval_options(common, eval);
  tplrec::FoldPlan folds = tplrec::make_folds(corpus, eval.folds, common.seed);
  tplrec::EvaluationReport report =
      tplrec::run_evaluation(corpus, folds, options);

  json out = tplrec::evaluation_report_json(report);
  out["config"] = echo_common("evaluate", common, true);
  out["config"].update(echo_eval(eval, options));

  const auto dir = prepare_out_dir(common);
  const std::vector<tplrec::FilePayload> files = {
      {dir / "evaluation.json", tplrec::to_fixed_json(out)},
      {dir / "evaluation_folds.csv", tplrec::evaluation_folds_csv(report)},
      {dir / "evaluation_profile.csv", tplrec::evaluation_profile_csv(report)},
  };
  tplrec::write_files_atomic(files);
  for (const auto& file : files) {
    std::cout << "wrote " << file.path.string() << '\n';
  }
  return 0;
}

int run_rerank_eval(const CommonOpts& common, const EvalOpts& eval,
                    const RerankOpts& rerank) {
  tplrec::LibraryCorpus corpus = load(common);
  tplrec::EvalOptions options = make_eval_options(common, eval);
  tplrec::RerankSettings settings{rerank.gamma, rerank.smoothing};
  options.rerank = settings;
  options.validate();
  options.rerank.reset();  // base pass first, re-rank the stored lists after

  tplrec::FoldPlan folds = tplrec::make_folds(corpus, eval.folds, common.seed);
  std::vector<tplrec::FoldRun> base_runs =
      tplrec::run_protocol(corpus, folds, options);
  std::vector<tplrec::FoldRun> reranked_runs =
      tplrec::rerank_fold_runs(base_runs, settings, options.max_n());
  tplrec::EvaluationReport base_report =
      tplrec::summarize_folds(corpus, base_runs, options);
  tplrec::EvaluationReport reranked_report =
      tplrec::summarize_folds(corpus, reranked_runs, options);

  json out;
  out["config"] = echo_common("rerank-eval", common, true);
  out["config"].update(echo_eval(eval, options));
  out["config"]["gamma"] = rerank.gamma;
  out["config"]["category_smoothing"] = rerank.smoothing;
  out["base"] = tplrec::evaluation_report_json(base_report);
  out["reranked"] = tplrec::evaluation_report_json(reranked_report);

  const auto dir = prepare_out_dir(common);
  const std::vector<tplrec::FilePayload> files = {
      {dir / "rerank_eval.json", tplrec::to_fixed_json(out)},
      {dir / "rerank_eval_base.csv",
       tplrec::evaluation_folds_csv(base_report)},
      {dir / "rerank_eval_reranked.csv",
       tplrec::evaluation_folds_csv(reranked_report)},
  };
  tplrec::write_files_atomic(files);
  for (const auto& file : files) {
    std::cout << "wrote " << file.path.string() << '\n';
  }
  return 0;
}

int run_attack(const CommonOpts& common, const EvalOpts& eval,
               const AttackOpts& attack) {
  tplrec::LibraryCorpus corpus = load(common);
  tplrec::EvalOptions options = make_eval_options(common, eval);
  tplrec::AttackConfig config;
  config.target_library = attack.target;
  config.alphas = attack.alphas;
  config.filler_count = attack.fillers;
  config.filler_pool_size = attack.pool;

  tplrec::FoldPlan folds = tplrec::make_folds(corpus, eval.folds, common.seed);
  tplrec::AttackReport report =
      tplrec::run_attack_experiment(corpus, folds, options, config);

  json out = tplrec::attack_report_json(report);
  out["config"] = echo_common("attack", common, true);
  out["config"].update(echo_eval(eval, options));
  out["config"]["target"] = attack.target;
  out["config"]["alphas"] = attack.alphas;
  out["config"]["fillers_requested"] = attack.fillers;
  out["config"]["filler_pool_size"] = attack.pool;

  const auto dir = prepare_out_dir(common);
  const std::vector<tplrec::FilePayload> files = {
      {dir / "attack.json", tplrec::to_fixed_json(out)},
      {dir / "attack.csv", tplrec::attack_csv(report)},
  };
  tplrec::write_files_atomic(files);
  for (const auto& file : files) {
    std::cout << "wrote " << file.path.string() << '\n';
  }
  return 0;
}

// The whole option tree plus the structs it writes into; rebuilt from
// scratch when a config file forces a second parse.
struct WorkbenchCli {
  CLI::App app{"Workbench for third-party library recommendation experiments"};

  CommonOpts stats_common;
  CommonOpts synth_common;
  SynthOpts synth;
  CommonOpts eval_common;
  EvalOpts eval_opts;
  CommonOpts rerank_common;
  EvalOpts rerank_eval_opts;
  RerankOpts rerank_opts;
  CommonOpts attack_common;
  EvalOpts attack_eval_opts;
  AttackOpts attack_opts;

  CLI::App* stats_cmd = nullptr;
  CLI::App* synth_cmd = nullptr;
  CLI::App* eval_cmd = nullptr;
  CLI::App* rerank_cmd = nullptr;
  CLI::App* attack_cmd = nullptr;

  WorkbenchCli() {
    app.require_subcommand(1);
    app.set_version_flag("--version", "tplrec 0.1.0");

    stats_cmd =
        app.add_subcommand("stats", "Summarize a project-library corpus");
    add_common_options(stats_cmd, stats_common, true);

    synth_cmd = app.add_subcommand(
        "gen-synth", "Generate a synthetic corpus with Zipf-distributed "
                     "library popularity");
    add_common_options(synth_cmd, synth_common, false);
    synth_cmd->add_option("--projects", synth.projects, "Number of projects")
        ->required();
    synth_cmd
        ->add_option("--libraries", synth.libraries, "Number of libraries")
        ->required();
    synth_cmd
        ->add_option("--min-libs", synth.min_libs,
                     "Smallest per-project library count")
        ->capture_default_str();
    synth_cmd
        ->add_option("--max-libs", synth.max_libs,
                     "Largest per-project library count")
        ->capture_default_str();
    synth_cmd->add_option("--zipf", synth.zipf, "Zipf exponent")
        ->capture_default_str();

    eval_cmd = app.add_subcommand(
        "evaluate", "Cross-validate a recommender and report accuracy and "
                    "popularity-bias metrics");
    add_common_options(eval_cmd, eval_common, true);
    add_eval_options(eval_cmd, eval_opts);

    rerank_cmd = app.add_subcommand(
        "rerank-eval", "Evaluate a recommender before and after the "
                       "diversity-aware re-ranking pass");
    add_common_options(rerank_cmd, rerank_common, true);
    add_eval_options(rerank_cmd, rerank_eval_opts);
    rerank_cmd
        ->add_option("-g,--gamma", rerank_opts.gamma,
                     "Re-ranking strength: 0 keeps base order")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    rerank_cmd
        ->add_option("--smoothing", rerank_opts.smoothing,
                     "Additive smoothing for category priors")
        ->group("Advanced")
        ->capture_default_str();

    attack_cmd = app.add_subcommand(
        "attack", "Measure how fake projects push a target library into "
                  "recommendation lists");
    add_common_options(attack_cmd, attack_common, true);
    add_eval_options(attack_cmd, attack_eval_opts);
    attack_cmd
        ->add_option("-t,--target", attack_opts.target,
                     "Library the attacker promotes")
        ->required();
    attack_cmd
        ->add_option("--alpha", attack_opts.alphas,
                     "Fake-to-genuine project ratios")
        ->delimiter(',')
        ->capture_default_str();
    attack_cmd
        ->add_option("--fillers", attack_opts.fillers,
                     "Filler libraries per fake project (0 = mean project "
                     "size)")
        ->capture_default_str();
    attack_cmd
        ->add_option("--pool", attack_opts.pool,
                     "How many top-popularity libraries fillers come from")
        ->capture_default_str();
  }

  // The parsed subcommand and its common options, if any.
  std::pair<CLI::App*, CommonOpts*> active() {
    if (*stats_cmd) return {stats_cmd, &stats_common};
    if (*synth_cmd) return {synth_cmd, &synth_common};
    if (*eval_cmd) return {eval_cmd, &eval_common};
    if (*rerank_cmd) return {rerank_cmd, &rerank_common};
    if (*attack_cmd) return {attack_cmd, &attack_common};
    return {nullptr, nullptr};
  }

  int dispatch() {
    if (*stats_cmd) return run_stats(stats_common);
    if (*synth_cmd) return run_gen_synth(synth_common, synth);
    if (*eval_cmd) return run_evaluate(eval_common, eval_opts);
    if (*rerank_cmd) {
      return run_rerank_eval(rerank_common, rerank_eval_opts, rerank_opts);
    }
    if (*attack_cmd) return run_attack(attack_common, attack_eval_opts,
                                       attack_opts);
    std::cerr << "no subcommand selected\n";
    return 2;
  }
};

}  // namespace

int main(int argc, char** argv) {
  auto cli = std::make_unique<WorkbenchCli>();
  try {
    cli->app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli->app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli->app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return cli->app.exit(e);
  } catch (const CLI::ParseError& e) {
    cli->app.exit(e);
    return 2;
  }

  try {
    auto [active_cmd, active_common] = cli->active();
    if (active_cmd != nullptr && !active_common->config_path.empty()) {
      const ConfigItems items = read_config_file(active_common->config_path);
      const std::vector<std::string> extra = config_tokens(*active_cmd, items);
      if (!extra.empty()) {
        std::vector<std::string> args(argv + 1, argv + argc);
        args.insert(args.end(), extra.begin(), extra.end());
        auto reparse = std::make_unique<WorkbenchCli>();
        try {
          std::reverse(args.begin(), args.end());
          reparse->app.parse(std::move(args));
        } catch (const CLI::ParseError& e) {
          // The command line alone parsed cleanly, so the file is at fault.
          std::cerr << "config error: " << e.what() << '\n';
          return 3;
        }
        cli = std::move(reparse);
      }
    }
  } catch (const ConfigFileError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  }

  try {
    return cli->dispatch();
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const tplrec::CorpusError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 4;
  } catch (const tplrec::ReportError& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
