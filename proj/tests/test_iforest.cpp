#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dielwave/errors.hpp"
#include "dielwave/iforest.hpp"

using namespace dielwave;

namespace {

IsolationNode leaf(int depth, int count) {
  IsolationNode n;
  n.depth = depth;
  n.sample_count = count;
  return n;
}

IsolationNode split(int depth, int count, int feature, double at, int left, int right) {
  IsolationNode n = leaf(depth, count);
  n.feature = feature;
  n.split = at;
  n.left = left;
  n.right = right;
  return n;
}

// x0 < 0 | x0 >= 0 -> (x1 < 5 -> (x0 < 2 : depth-3 single | depth-3 pair) | depth-2 pair)
IsolationTree manual_tree() {
  return IsolationTree({
      split(0, 8, 0, 0.0, 1, 2),
      leaf(1, 3),
      split(1, 5, 1, 5.0, 3, 4),
      split(2, 3, 0, 2.0, 5, 6),
      leaf(2, 2),
      leaf(3, 1),
      leaf(3, 2),
  });
}

double walk(const IsolationTree& t, std::size_t i, std::span<const double> x) {
  const auto& n = t.nodes()[i];
  if (n.is_leaf()) {
    const double m = n.sample_count;
    double c = 0.0;
    if (m == 2) c = 1.0;
    if (m > 2) c = 2.0 * (std::log(m - 1.0) + 0.5772156649015329) - 2.0 * (m - 1.0) / m;
    return n.depth + c;
  }
  const auto next = x[static_cast<std::size_t>(n.feature)] < n.split ? n.left : n.right;
  return walk(t, static_cast<std::size_t>(next), x);
}

FeatureMatrix gaussian_rows(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < cols; ++c) names.push_back("f" + std::to_string(c));
  FeatureMatrix m(names);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> row(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (double& v : row) v = g(rng);
    m.append_row(row);
  }
  return m;
}

}  // namespace

TEST(AveragePathLength, KnownValues) {
  EXPECT_EQ(average_path_length(0), 0.0);
  EXPECT_EQ(average_path_length(1), 0.0);
  EXPECT_EQ(average_path_length(2), 1.0);
  EXPECT_NEAR(average_path_length(3), 2 * (std::log(2.0) + 0.5772156649015329) - 4.0 / 3, 1e-15);
  EXPECT_NEAR(average_path_length(256), 10.244770920116851, 1e-9);
  for (int m = 3; m < 500; ++m) EXPECT_GT(average_path_length(m + 1), average_path_length(m));
}

TEST(IsolationTree, PathLengthExamples) {
  const auto t = manual_tree();
  const std::vector<double> deep_single{1.0, 0.0};
  const std::vector<double> pair{7.0, 9.0};
  const std::vector<double> deep_pair{3.0, 0.0};
  const std::vector<double> shallow{-1.0, 0.0};
  EXPECT_DOUBLE_EQ(t.path_length(deep_single), 3.0);
  EXPECT_DOUBLE_EQ(t.path_length(pair), 3.0);
  EXPECT_DOUBLE_EQ(t.path_length(deep_pair), 4.0);
  EXPECT_DOUBLE_EQ(t.path_length(shallow), 1.0 + average_path_length(3));
  EXPECT_EQ(t.depth(), 3);
  EXPECT_EQ(t.leaf_for(deep_single), 5u);
}

TEST(IsolationTree, RejectsBadChildren) {
  EXPECT_THROW(IsolationTree(std::vector<IsolationNode>{}), ArgumentError);
  EXPECT_THROW(IsolationTree({split(0, 2, 0, 1.0, 1, 7), leaf(1, 1)}), ArgumentError);
}

TEST(Forest, PathLengthsMatchRecursiveWalk) {
  std::mt19937_64 rng(1);
  const auto train = gaussian_rows(rng, 300, 4);
  const auto model = fit(train, ForestParams{.n_trees = 25, .subsample_fraction = 0.5, .seed = 3});
  const auto probe = gaussian_rows(rng, 50, 4);
  for (std::size_t r = 0; r < probe.rows(); ++r) {
    double sum = 0.0;
    for (const auto& t : model.trees()) {
      const double h = walk(t, 0, probe.row(r));
      EXPECT_DOUBLE_EQ(t.path_length(probe.row(r)), h);
      sum += h;
    }
    EXPECT_NEAR(model.path_length(probe.row(r)), sum / 25, 1e-12);
    EXPECT_NEAR(model.anomaly_score(probe.row(r)),
                std::pow(2.0, -(sum / 25) / average_path_length(150)), 1e-12);
  }
}

TEST(Forest, ScoreIsHalfAtAveragePath) {
  // A single root leaf holding psi samples gives h = c(psi).
  for (int psi : {3, 10, 256}) {
    ForestModel m({"a"}, {IsolationTree({leaf(0, psi)})}, ForestParams{}, psi, psi);
    const std::vector<double> x{0.0};
    EXPECT_NEAR(m.anomaly_score(x), 0.5, 1e-15);
  }
}

TEST(Forest, ScoreDecreasesWithPathLength) {
  // A left-leaning chain of the given depth; x = -1 always goes left.
  double prev = 2.0;
  for (int depth = 0; depth < 12; ++depth) {
    std::vector<IsolationNode> nodes;
    for (int d = 0; d < depth; ++d) {
      const int id = static_cast<int>(nodes.size());
      nodes.push_back(split(d, 2, 0, 0.0, id + 2, id + 1));
      nodes.push_back(leaf(d + 1, 1));
    }
    nodes.push_back(leaf(depth, 1));
    ForestModel m({"a"}, {IsolationTree(nodes)}, ForestParams{}, 64, 64);
    const std::vector<double> x{-1.0};
    const double s = m.anomaly_score(x);
    EXPECT_LT(s, prev);
    EXPECT_GT(s, 0.0);
    EXPECT_LE(s, 1.0);
    prev = s;
  }
}

TEST(Forest, DecideExamples) {
  const std::vector<double> scores{0.2, 0.5, 0.50000001, 0.9};
  EXPECT_EQ(decide(0.5, scores),
            (std::vector<Verdict>{Verdict::Normal, Verdict::Normal, Verdict::Abnormal, Verdict::Abnormal}));
  EXPECT_TRUE(decide(0.5, std::vector<double>{}).empty());
}

TEST(Forest, ThresholdIsTrainingQuantile) {
  std::mt19937_64 rng(4);
  for (double q : {0.5, 0.8, 0.95, 1.0}) {
    const auto train = gaussian_rows(rng, 400, 3);
    const auto model = fit(train, ForestParams{.n_trees = 30, .seed = 9, .threshold_quantile = q});
    const auto scores = model.anomaly_scores(train);
    const auto v = decide(model, scores);
    const auto flagged = std::count(v.begin(), v.end(), Verdict::Abnormal);
    EXPECT_LE(static_cast<double>(flagged), (1.0 - q) * 400 + 1e-9) << q;
    EXPECT_GE(static_cast<double>(flagged), (1.0 - q) * 400 - 2) << q;
  }
}

TEST(Forest, DeterministicAndJobIndependent) {
  std::mt19937_64 rng(5);
  const auto train = gaussian_rows(rng, 200, 5);
  const auto a = fit(train, ForestParams{.n_trees = 40, .seed = 77, .jobs = 1});
  const auto b = fit(train, ForestParams{.n_trees = 40, .seed = 77, .jobs = 4});
  const auto c = fit(train, ForestParams{.n_trees = 40, .seed = 78, .jobs = 1});
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_NE(a.to_json(), c.to_json());
}

TEST(Forest, HeightLimitAndTwoPointTree) {
  FeatureMatrix two({"a", "b"});
  two.append_row(std::vector<double>{0.0, 1.0});
  two.append_row(std::vector<double>{1.0, 1.0});
  const auto m = fit(two, ForestParams{.n_trees = 10});
  for (const auto& t : m.trees()) {
    EXPECT_EQ(t.depth(), 1);
    EXPECT_EQ(t.nodes()[0].feature, 0);  // b is constant and never split
  }
  std::mt19937_64 rng(6);
  const auto big = gaussian_rows(rng, 1000, 2);
  const auto fm = fit(big, ForestParams{.n_trees = 20, .subsample_fraction = 0.256});
  EXPECT_EQ(fm.subsample_size(), 256u);
  for (const auto& t : fm.trees()) {
    EXPECT_LE(t.depth(), 8);
    EXPECT_EQ(t.nodes()[0].sample_count, 256);
  }
}

TEST(Forest, DuplicatesOnlyFormLeaves) {
  FeatureMatrix m({"a"});
  for (int i = 0; i < 20; ++i) m.append_row(std::vector<double>{3.0});
  const auto model = fit(m, ForestParams{.n_trees = 5});
  for (const auto& t : model.trees()) EXPECT_EQ(t.nodes().size(), 1u);
  const std::vector<double> x{3.0};
  EXPECT_NEAR(model.anomaly_score(x), 0.5, 1e-15);
}

TEST(Forest, SingleOutlierScoresHighAcrossSeeds) {
  FeatureMatrix m({"a"});
  for (int i = 0; i < 63; ++i) m.append_row(std::vector<double>{0.0});
  m.append_row(std::vector<double>{100.0});
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto model = fit(m, ForestParams{.n_trees = 20, .seed = seed});
    const std::vector<double> out{100.0}, in{0.0};
    const double so = model.anomaly_score(out);
    // The outlier is always cut off at depth one.
    EXPECT_NEAR(model.path_length(out), 1.0, 1e-12);
    if (so > model.anomaly_score(in) && so > 0.5) ++wins;
  }
  EXPECT_EQ(wins, 100);
}

TEST(Forest, JsonRoundTrip) {
  std::mt19937_64 rng(7);
  const auto train = gaussian_rows(rng, 120, 3);
  const auto model = fit(train, ForestParams{.n_trees = 12, .subsample_fraction = 0.7, .seed = 5});
  const auto back = ForestModel::from_json(model.to_json());
  EXPECT_EQ(back.to_json(), model.to_json());
  EXPECT_EQ(back.feature_names(), model.feature_names());
  EXPECT_EQ(back.score_threshold(), model.score_threshold());
  for (std::size_t r = 0; r < train.rows(); ++r) {
    EXPECT_EQ(back.anomaly_score(train.row(r)), model.anomaly_score(train.row(r)));
  }
  EXPECT_THROW(ForestModel::from_json("{\"trees\": 3}"), ArgumentError);
}

TEST(Forest, NamedInputsAndErrors) {
  std::mt19937_64 rng(8);
  const auto train = gaussian_rows(rng, 50, 2);
  const auto model = fit(train, ForestParams{.n_trees = 5});
  EXPECT_EQ(model.anomaly_score(FeatureVector{{"f1", 0.3}, {"f0", -1.0}, {"extra", 9.0}}),
            model.anomaly_score(std::vector<double>{-1.0, 0.3}));
  EXPECT_THROW(model.anomaly_score(FeatureVector{{"f0", 1.0}}), ArgumentError);
  EXPECT_THROW(model.anomaly_score(std::vector<double>{1.0}), ArgumentError);

  FeatureMatrix one({"a"});
  one.append_row(std::vector<double>{1.0});
  EXPECT_THROW(fit(one, ForestParams{}), ArgumentError);
  EXPECT_THROW(fit(train, ForestParams{.n_trees = 0}), ArgumentError);
  EXPECT_THROW(fit(train, ForestParams{.subsample_fraction = 0.0}), ArgumentError);
  EXPECT_THROW(fit(train, ForestParams{.threshold_quantile = 1.5}), ArgumentError);
  FeatureMatrix nan({"a"});
  nan.append_row(std::vector<double>{1.0});
  nan.append_row(std::vector<double>{std::nan("")});
  EXPECT_THROW(fit(nan, ForestParams{}), ArgumentError);
}
