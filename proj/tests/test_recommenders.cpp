#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "tplrec/corpus.hpp"
#include "tplrec/recommenders.hpp"
#include "tplrec/rng.hpp"
#include "tplrec/wmf.hpp"

using namespace tplrec;

namespace {

LibraryCorpus build(const std::vector<std::pair<std::string, std::string>>& pairs) {
  LibraryCorpus corpus;
  for (const auto& [project, library] : pairs) {
    corpus.add_usage(project, library);
  }
  return corpus;
}

LibraryCorpus random_corpus(Rng& rng, std::size_t max_projects,
                            std::size_t max_libraries) {
  const std::size_t n_projects = 2 + rng.uniform_index(max_projects - 1);
  const std::size_t n_libraries = 3 + rng.uniform_index(max_libraries - 2);
  LibraryCorpus corpus;
  for (std::size_t p = 0; p < n_projects; ++p) {
    const std::size_t row_size =
        1 + rng.uniform_index(std::min<std::size_t>(6, n_libraries));
    std::set<std::size_t> row;
    while (row.size() < row_size) row.insert(rng.uniform_index(n_libraries));
    for (std::size_t l : row) {
      corpus.add_usage("p" + std::to_string(p), "l" + std::to_string(l));
    }
  }
  return corpus;
}

// Straight-line re-implementation of the user-based CF scoring used as an
// independent oracle: all similarities, top-k cut, summed neighbor votes.
RankedList cf_oracle(const LibraryCorpus& training, const Query& query,
                     std::size_t k_neighbors, std::size_t m) {
  std::set<std::size_t> query_libs;
  for (const auto& lib : query.known_libraries) {
    if (auto idx = training.find_library(lib)) query_libs.insert(*idx);
  }

  std::vector<double> sim(training.project_count(), 0.0);
  for (std::size_t p = 0; p < training.project_count(); ++p) {
    std::size_t overlap = 0;
    for (std::size_t l : training.libraries_of(p)) {
      overlap += query_libs.count(l);
    }
    if (overlap == 0 || query_libs.empty()) continue;
    sim[p] = static_cast<double>(overlap) /
             (std::sqrt(static_cast<double>(query_libs.size())) *
              std::sqrt(static_cast<double>(training.libraries_of(p).size())));
  }

  std::vector<std::size_t> order(training.project_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sim[a] != sim[b]) return sim[a] > sim[b];
    return a < b;
  });

  std::vector<double> score(training.library_count(), 0.0);
  const std::size_t k = std::min(k_neighbors, order.size());
  for (std::size_t i = 0; i < k; ++i) {
    if (sim[order[i]] == 0.0) break;
    for (std::size_t l : training.libraries_of(order[i])) {
      score[l] += sim[order[i]];
    }
  }

  RankedList out;
  for (std::size_t l = 0; l < score.size(); ++l) {
    if (score[l] <= 0.0) continue;
    const std::string& lib = training.library_id(l);
    if (query.knows(lib)) continue;
    out.push_back({lib, score[l]});
  }
  sort_ranked(out);
  if (out.size() > m) out.resize(m);
  return out;
}

using Itemset = std::vector<std::size_t>;

// Exhaustive itemset counting oracle for small universes.
std::map<Itemset, std::size_t> enumerate_itemsets(const LibraryCorpus& corpus,
                                                  std::size_t max_size) {
  std::map<Itemset, std::size_t> counts;
  const std::size_t n = corpus.library_count();
  for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
    Itemset items;
    for (std::size_t l = 0; l < n; ++l) {
      if (mask & (1ull << l)) items.push_back(l);
    }
    if (items.size() > max_size) continue;
    std::size_t count = 0;
    for (std::size_t p = 0; p < corpus.project_count(); ++p) {
      const auto& row = corpus.libraries_of(p);
      if (std::includes(row.begin(), row.end(), items.begin(), items.end())) {
        ++count;
      }
    }
    if (count > 0) counts.emplace(std::move(items), count);
  }
  return counts;
}

struct RuleKey {
  std::vector<std::string> antecedent;
  std::string consequent;
  auto operator<=>(const RuleKey&) const = default;
};

std::map<RuleKey, std::pair<double, double>> rule_map(const RuleSet& rules) {
  std::map<RuleKey, std::pair<double, double>> out;
  for (const auto& rule : rules.rules) {
    out[{rule.antecedent, rule.consequent}] = {rule.support, rule.confidence};
  }
  return out;
}

// Independent rule-generation oracle built on exhaustive counting.
std::map<RuleKey, std::pair<double, double>> rules_oracle(
    const LibraryCorpus& corpus, double min_support, double min_confidence,
    std::size_t max_antecedent) {
  const auto counts = enumerate_itemsets(corpus, max_antecedent + 1);
  const double n = static_cast<double>(corpus.project_count());
  const double count_floor = min_support * n - 1e-9;

  std::map<RuleKey, std::pair<double, double>> out;
  for (const auto& [items, count] : counts) {
    if (items.size() < 2 || static_cast<double>(count) < count_floor) continue;
    for (std::size_t c = 0; c < items.size(); ++c) {
      Itemset antecedent;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i != c) antecedent.push_back(items[i]);
      }
      if (antecedent.size() > max_antecedent) continue;
      const auto ant_count = counts.at(antecedent);
      const double confidence =
          static_cast<double>(count) / static_cast<double>(ant_count);
      if (confidence + 1e-12 < min_confidence) continue;
      if (static_cast<double>(ant_count) < count_floor) continue;
      RuleKey key;
      for (std::size_t l : antecedent) {
        key.antecedent.push_back(corpus.library_id(l));
      }
      std::sort(key.antecedent.begin(), key.antecedent.end());
      key.consequent = corpus.library_id(items[c]);
      out[key] = {static_cast<double>(count) / n, confidence};
    }
  }
  return out;
}

}  // namespace

TEST_CASE("sort_ranked orders by score then identifier") {
  RankedList list = {{"b", 1.0}, {"a", 2.0}, {"c", 1.0}, {"d", 3.0}};
  sort_ranked(list);
  CHECK(list == RankedList{{"d", 3.0}, {"a", 2.0}, {"b", 1.0}, {"c", 1.0}});
}

TEST_CASE("normalize_scores maps onto a probability vector") {
  RankedList list = {{"a", 2.0}, {"b", 1.0}, {"c", 1.0}};
  RankedList norm = normalize_scores(list);
  CHECK(norm[0].score == doctest::Approx(0.5));
  CHECK(norm[1].score == doctest::Approx(0.25));
  CHECK(norm[2].score == doctest::Approx(0.25));
  CHECK(norm[0].library == "a");  // order untouched

  RankedList negative = {{"a", 1.0}, {"b", -1.0}};
  RankedList shifted = normalize_scores(negative);
  CHECK(shifted[0].score == doctest::Approx(1.0));
  CHECK(shifted[1].score == doctest::Approx(0.0));

  RankedList constant = {{"a", 4.0}, {"b", 4.0}};
  RankedList uniform = normalize_scores(constant);
  CHECK(uniform[0].score == doctest::Approx(0.5));
  CHECK(uniform[1].score == doctest::Approx(0.5));

  CHECK_THROWS_AS(normalize_scores({}), std::invalid_argument);
}

TEST_CASE("algorithm names round trip") {
  for (Algorithm a : {Algorithm::popularity, Algorithm::cf, Algorithm::assoc,
                      Algorithm::wmf}) {
    CHECK(parse_algorithm(algorithm_name(a)) == a);
  }
  CHECK_THROWS_AS(parse_algorithm("svd"), std::invalid_argument);
}

TEST_CASE("popularity recommender walks the rank order minus known") {
  LibraryCorpus corpus = build({{"p1", "a"},
                                {"p1", "b"},
                                {"p2", "a"},
                                {"p3", "a"},
                                {"p3", "c"}});
  PopularityRecommender rec(compute_popularity(corpus));

  RankedList all = rec.recommend({"q", {"zzz"}}, 10);
  CHECK(all == RankedList{{"a", 3.0}, {"b", 1.0}, {"c", 1.0}});

  RankedList minus_known = rec.recommend({"q", {"a"}}, 10);
  CHECK(minus_known == RankedList{{"b", 1.0}, {"c", 1.0}});

  CHECK(rec.recommend({"q", {}}, 2).size() == 2);
  CHECK(rec.algorithm() == Algorithm::popularity);
}

TEST_CASE("cf scores match the cosine hand computation") {
  // Query {a, b}: p1 = {a, b, c} gives 2 / (sqrt(2) * sqrt(3)), p2 = {a, d}
  // gives 1 / (sqrt(2) * sqrt(2)).
  LibraryCorpus corpus = build({{"p1", "a"},
                                {"p1", "b"},
                                {"p1", "c"},
                                {"p2", "a"},
                                {"p2", "d"}});
  CfRecommender rec(corpus, 25);
  RankedList out = rec.recommend({"q", {"a", "b"}}, 10);

  REQUIRE(out.size() == 2);
  CHECK(out[0].library == "c");
  CHECK(out[0].score == doctest::Approx(0.8164966).epsilon(1e-6));
  CHECK(out[1].library == "d");
  CHECK(out[1].score == doctest::Approx(0.5));
}

TEST_CASE("cf neighborhood size caps the vote") {
  // With k = 1 only the closest project votes.
  LibraryCorpus corpus = build({{"p1", "a"},
                                {"p1", "b"},
                                {"p1", "c"},
                                {"p2", "a"},
                                {"p2", "d"}});
  CfRecommender rec(corpus, 1);
  RankedList out = rec.recommend({"q", {"a", "b"}}, 10);
  REQUIRE(out.size() == 1);
  CHECK(out[0].library == "c");
  CHECK_THROWS_AS(CfRecommender(corpus, 0), std::invalid_argument);
}

TEST_CASE("cf falls back to popularity for orthogonal queries") {
  LibraryCorpus corpus = build({{"p1", "a"}, {"p1", "b"}, {"p2", "a"}});
  CfRecommender rec(corpus, 5);
  RankedList out = rec.recommend({"q", {"unknown-lib"}}, 10);
  CHECK(out == recommend_popularity(compute_popularity(corpus),
                                    {"q", {"unknown-lib"}}, 10));
  CHECK(out.front().library == "a");
}

TEST_CASE("cf agrees with a brute-force oracle on random corpora") {
  Rng rng(2024);
  for (int round = 0; round < 150; ++round) {
    LibraryCorpus corpus = random_corpus(rng, 20, 30);

    // Query sampled from the universe so similarity is usually non-zero.
    std::set<std::string> known;
    const std::size_t q_size = 1 + rng.uniform_index(4);
    while (known.size() < std::min(q_size, corpus.library_count())) {
      known.insert(corpus.library_id(rng.uniform_index(corpus.library_count())));
    }
    Query query{"q", {known.begin(), known.end()}};

    const std::size_t k = 1 + rng.uniform_index(8);
    const std::size_t m = 1 + rng.uniform_index(12);
    RankedList got = CfRecommender(corpus, k).recommend(query, m);
    RankedList want = cf_oracle(corpus, query, k, m);

    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].library == want[i].library);
      CHECK(got[i].score == doctest::Approx(want[i].score).epsilon(1e-12));
    }
  }
}

TEST_CASE("apriori finds the hand-checkable rule set") {
  LibraryCorpus corpus = build({{"p1", "a"},
                                {"p1", "b"},
                                {"p1", "c"},
                                {"p2", "a"},
                                {"p2", "b"},
                                {"p3", "a"},
                                {"p3", "c"},
                                {"p4", "b"},
                                {"p4", "c"}});

  RuleSet rules = mine_association_rules(corpus, 0.5, 0.5, 1);
  auto got = rule_map(rules);
  REQUIRE(got.size() == 6);  // every ordered pair of {a, b, c}
  const auto& [support, confidence] = got.at({{"a"}, "b"});
  CHECK(support == doctest::Approx(0.5));
  CHECK(confidence == doctest::Approx(2.0 / 3.0));
  CHECK(got.contains({{"c"}, "a"}));

  // Raising support past the pair counts leaves nothing to mine.
  CHECK(mine_association_rules(corpus, 0.75, 0.1, 2).rules.empty());

  // Confidence threshold filters: at 0.7 no pair rule survives (all 2/3).
  CHECK(mine_association_rules(corpus, 0.5, 0.7, 1).rules.empty());
}

TEST_CASE("apriori agrees with exhaustive enumeration on random corpora") {
  Rng rng(515);
  for (int round = 0; round < 60; ++round) {
    LibraryCorpus corpus = random_corpus(rng, 12, 10);
    const double min_support = 0.1 + 0.2 * rng.uniform01();
    const double min_confidence = 0.2 + 0.5 * rng.uniform01();
    const std::size_t max_antecedent = 1 + rng.uniform_index(2);

    auto got = rule_map(mine_association_rules(corpus, min_support,
                                               min_confidence, max_antecedent));
    auto want = rules_oracle(corpus, min_support, min_confidence,
                             max_antecedent);

    REQUIRE(got.size() == want.size());
    for (const auto& [key, values] : want) {
      REQUIRE(got.contains(key));
      CHECK(got.at(key).first == doctest::Approx(values.first).epsilon(1e-12));
      CHECK(got.at(key).second ==
            doctest::Approx(values.second).epsilon(1e-12));
    }
  }
}

TEST_CASE("association rules never leak the consequent into the antecedent") {
  Rng rng(99);
  LibraryCorpus corpus = random_corpus(rng, 15, 8);
  RuleSet rules = mine_association_rules(corpus, 0.1, 0.1, 2);
  for (const auto& rule : rules.rules) {
    CHECK(std::is_sorted(rule.antecedent.begin(), rule.antecedent.end()));
    CHECK(std::find(rule.antecedent.begin(), rule.antecedent.end(),
                    rule.consequent) == rule.antecedent.end());
    CHECK(rule.confidence >= 0.1 - 1e-12);
    CHECK(rule.antecedent.size() >= 1);
    CHECK(rule.antecedent.size() <= 2);
  }
}

TEST_CASE("assoc recommender fires rules and pads with popularity") {
  LibraryCorpus corpus = build({{"p1", "a"},
                                {"p1", "b"},
                                {"p1", "c"},
                                {"p2", "a"},
                                {"p2", "b"},
                                {"p3", "a"},
                                {"p3", "c"},
                                {"p4", "b"},
                                {"p4", "c"},
                                {"p5", "a"},
                                {"p5", "e"}});
  RuleSet rules = mine_association_rules(corpus, 0.4, 0.3, 2);
  AssocRecommender rec(rules, compute_popularity(corpus));

  RankedList out = rec.recommend({"q", {"a"}}, 4);
  REQUIRE(out.size() == 3);
  // b and c fire via a -> b and a -> c at confidence 2/4.
  CHECK(out[0].library == "b");
  CHECK(out[0].score == doctest::Approx(0.5));
  CHECK(out[1].library == "c");
  CHECK(out[1].score == doctest::Approx(0.5));
  // e is popularity padding, scaled under the weakest fired confidence.
  CHECK(out[2].library == "e");
  CHECK(out[2].score == doctest::Approx(0.5 * 1.0 / 5.0));
  CHECK(out[2].score < out[1].score);

  // No firing rules at all: pure popularity padding.
  RankedList cold = rec.recommend({"q", {"zzz"}}, 3);
  REQUIRE(cold.size() == 3);
  CHECK(cold[0].library == "a");  // frequency 4 tops the order
  CHECK(cold[0].score == doctest::Approx(4.0 / 5.0));
}

TEST_CASE("assoc recommender respects m and excludes known libraries") {
  Rng rng(7);
  LibraryCorpus corpus = random_corpus(rng, 15, 12);
  RuleSet rules = mine_association_rules(corpus, 0.15, 0.2, 2);
  AssocRecommender rec(rules, compute_popularity(corpus));

  for (int round = 0; round < 20; ++round) {
    const std::string known =
        corpus.library_id(rng.uniform_index(corpus.library_count()));
    const std::size_t m = 1 + rng.uniform_index(6);
    RankedList out = rec.recommend({"q", {known}}, m);
    CHECK(out.size() <= m);
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(out[i].library != known);
      if (i > 0) {
        // Canonical order: score desc, id asc.
        const bool ordered =
            out[i - 1].score > out[i].score ||
            (out[i - 1].score == out[i].score &&
             out[i - 1].library < out[i].library);
        CHECK(ordered);
      }
    }
  }
}

TEST_CASE("wmf objective decreases monotonically over sweeps") {
  Rng rng(31);
  LibraryCorpus corpus = random_corpus(rng, 18, 25);
  WmfModel::Config config;
  config.factors = 6;
  config.iterations = 12;
  WmfModel model = WmfModel::train(corpus, config, 5);

  const auto& history = model.objective_history();
  REQUIRE(history.size() == 12);
  for (std::size_t i = 1; i < history.size(); ++i) {
    CHECK(history[i] <= history[i - 1] + 1e-9);
  }
}

TEST_CASE("wmf confidence weights follow the frequency ratio") {
  LibraryCorpus corpus = build({{"p1", "a"},
                                {"p2", "a"},
                                {"p3", "a"},
                                {"p4", "a"},
                                {"p4", "b"}});
  WmfModel::Config config;
  config.factors = 2;
  config.iterations = 3;
  config.weight_exponent = 0.5;
  WmfModel model = WmfModel::train(corpus, config, 1);
  // f_max = 4: w(a) = (4/4)^0.5 = 1, w(b) = (4/1)^0.5 = 2.
  CHECK(model.library_weight("a") == doctest::Approx(1.0));
  CHECK(model.library_weight("b") == doctest::Approx(2.0));

  config.weight_exponent = 0.0;
  WmfModel flat = WmfModel::train(corpus, config, 1);
  CHECK(flat.library_weight("b") == doctest::Approx(1.0));
}

TEST_CASE("wmf is deterministic per seed") {
  Rng rng(87);
  LibraryCorpus corpus = random_corpus(rng, 15, 20);
  WmfModel::Config config;
  config.factors = 5;
  config.iterations = 6;

  Query query{"q", {corpus.library_id(0)}};
  RankedList a = WmfModel::train(corpus, config, 9).recommend(query, 8);
  RankedList b = WmfModel::train(corpus, config, 9).recommend(query, 8);
  CHECK(a == b);  // bitwise identical scores

  RankedList c = WmfModel::train(corpus, config, 10).recommend(query, 8);
  bool identical = a.size() == c.size();
  if (identical) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      identical = identical && a[i] == c[i];
    }
  }
  CHECK_FALSE(identical);
}

TEST_CASE("wmf recommends the missing member of a co-usage cluster") {
  LibraryCorpus corpus;
  for (int p = 0; p < 8; ++p) {
    const std::string pa = "pa" + std::to_string(p);
    corpus.add_usage(pa, "x1");
    corpus.add_usage(pa, "x2");
    corpus.add_usage(pa, "x3");
    const std::string pb = "pb" + std::to_string(p);
    corpus.add_usage(pb, "y1");
    corpus.add_usage(pb, "y2");
    corpus.add_usage(pb, "y3");
  }

  WmfModel::Config config;
  config.factors = 8;
  config.iterations = 25;
  WmfModel model = WmfModel::train(corpus, config, 3);

  RankedList out = model.recommend({"q", {"x1", "x2"}}, 4);
  REQUIRE(!out.empty());
  CHECK(out.front().library == "x3");
  for (const auto& entry : out) {
    CHECK(entry.library != "x1");
    CHECK(entry.library != "x2");
  }
}

TEST_CASE("wmf rejects cold queries") {
  LibraryCorpus corpus = build({{"p1", "a"}, {"p1", "b"}, {"p2", "a"}});
  WmfModel::Config config;
  config.factors = 2;
  config.iterations = 2;
  WmfModel model = WmfModel::train(corpus, config, 1);
  CHECK_THROWS_AS(model.recommend({"q", {"nope"}}, 5), ColdQueryError);
}

TEST_CASE("factory builds the requested algorithm with a fingerprint") {
  Rng rng(3);
  LibraryCorpus corpus = random_corpus(rng, 12, 15);
  AlgorithmConfig config;
  config.factors = 4;
  config.iterations = 3;

  for (Algorithm a : {Algorithm::popularity, Algorithm::cf, Algorithm::assoc,
                      Algorithm::wmf}) {
    config.algorithm = a;
    auto rec = make_recommender(config, corpus, 5);
    CHECK(rec->algorithm() == a);
    CHECK(rec->training_fingerprint() == corpus_fingerprint(corpus));
    RankedList out = rec->recommend({"q", {corpus.library_id(0)}}, 5);
    CHECK(out.size() <= 5);
    for (const auto& entry : out) {
      CHECK(entry.library != corpus.library_id(0));
    }
  }
}
