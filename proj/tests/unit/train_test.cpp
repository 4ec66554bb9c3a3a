#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oamcrypt/decoder/evaluate.hpp"
#include "oamcrypt/decoder/train.hpp"

namespace oc = oamcrypt;

namespace {

std::vector<int> balanced_labels(int classes, int per_class) {
  std::vector<int> y;
  for (int k = 0; k < per_class; ++k)
    for (int c = 0; c < classes; ++c) y.push_back(c);
  return y;
}

// Gaussian clusters around class-specific prototypes in [0,1]^63.
oc::LabeledSet clusters(int classes, int per_class, double spread, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, spread);
  Eigen::MatrixXd proto(63, classes);
  for (Eigen::Index i = 0; i < proto.size(); ++i) proto.data()[i] = u(rng);
  oc::LabeledSet s{Eigen::MatrixXd(63, classes * per_class), balanced_labels(classes, per_class)};
  for (Eigen::Index n = 0; n < s.x.cols(); ++n)
    for (Eigen::Index i = 0; i < 63; ++i)
      s.x(i, n) = proto(i, s.labels[static_cast<std::size_t>(n)]) + g(rng);
  return s;
}

}  // namespace

TEST(Split, DefaultCounts) {
  for (auto [per_class, tr, va, te] : {std::tuple{500, 350u, 75u, 75u}, std::tuple{200, 140u, 30u, 30u}}) {
    const auto y = balanced_labels(21, per_class);
    const auto s = oc::split_dataset(y, 21, {}, 42);
    std::vector<std::size_t> ctr(21), cva(21), cte(21);
    for (auto i : s.train) ++ctr[static_cast<std::size_t>(y[i])];
    for (auto i : s.validation) ++cva[static_cast<std::size_t>(y[i])];
    for (auto i : s.test) ++cte[static_cast<std::size_t>(y[i])];
    for (int c = 0; c < 21; ++c) {
      EXPECT_EQ(ctr[static_cast<std::size_t>(c)], tr);
      EXPECT_EQ(cva[static_cast<std::size_t>(c)], va);
      EXPECT_EQ(cte[static_cast<std::size_t>(c)], te);
    }
  }
}

TEST(Split, DisjointExhaustiveAndSeeded) {
  const auto y = balanced_labels(5, 37);
  const auto s = oc::split_dataset(y, 5, {}, 7);
  std::set<std::size_t> all;
  for (const auto* part : {&s.train, &s.validation, &s.test})
    for (auto i : *part) EXPECT_TRUE(all.insert(i).second) << "index " << i << " repeated";
  EXPECT_EQ(all.size(), y.size());
  const auto again = oc::split_dataset(y, 5, {}, 7);
  EXPECT_EQ(again.test, s.test);
  EXPECT_NE(oc::split_dataset(y, 5, {}, 8).test, s.test);
}

TEST(Split, Errors) {
  EXPECT_THROW(oc::split_dataset(balanced_labels(3, 2), 3, {}, 1), std::invalid_argument);
  EXPECT_THROW(oc::split_dataset(balanced_labels(3, 5), 3, {0.5, 0.2, 0.2}, 1), std::invalid_argument);
  EXPECT_THROW(oc::split_dataset({0, 1, 7}, 2, {}, 1), std::invalid_argument);
}

TEST(TrainConfig, Validation) {
  oc::TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.patience = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.max_epochs = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Train, LearnsSeparableClusters) {
  const auto all = clusters(4, 60, 0.05, 3);
  const auto s = oc::split_dataset(all.labels, 4, {}, 1);
  oc::TrainConfig cfg;
  cfg.hidden = 16;
  cfg.max_epochs = 300;
  const auto res = oc::scg_train(all.subset(s.train), all.subset(s.validation), {"a", "b", "c", "d"}, cfg);
  const auto test = all.subset(s.test);
  const auto ev = oc::evaluate(res.model, test.x, test.labels);
  EXPECT_EQ(ev.accuracy, 1.0);
  EXPECT_EQ(res.model.class_names[2], "c");
  EXPECT_EQ(res.log.train_curve.size(), static_cast<std::size_t>(res.log.epochs));
}

TEST(Train, DeterministicBitForBit) {
  const auto all = clusters(3, 30, 0.2, 5);
  const auto s = oc::split_dataset(all.labels, 3, {}, 1);
  oc::TrainConfig cfg;
  cfg.hidden = 8;
  cfg.max_epochs = 60;
  const auto a = oc::scg_train(all.subset(s.train), all.subset(s.validation), {"x", "y", "z"}, cfg);
  const auto b = oc::scg_train(all.subset(s.train), all.subset(s.validation), {"x", "y", "z"}, cfg);
  EXPECT_EQ(a.model.pack(), b.model.pack());
  EXPECT_EQ(a.log.validation_curve, b.log.validation_curve);
}

TEST(Train, EarlyStopRestoresBestWeights) {
  // Validation labels are the training labels permuted, so fitting the
  // training set drives validation loss up from the start.
  auto train = clusters(2, 40, 0.05, 9);
  auto val = train;
  for (auto& y : val.labels) y = 1 - y;
  oc::TrainConfig cfg;
  cfg.hidden = 8;
  cfg.patience = 6;
  const auto res = oc::scg_train(train, val, {"p", "q"}, cfg);
  EXPECT_EQ(res.log.reason, oc::StopReason::monitor);
  EXPECT_LT(res.log.epochs, cfg.max_epochs);
  const auto& vc = res.log.validation_curve;
  ASSERT_GE(vc.size(), 6u);
  const double best = *std::min_element(vc.begin(), vc.end());
  EXPECT_EQ(res.log.validation_loss, std::min(best, res.log.validation_loss));
  oc::MLPModel probe = res.model;
  const double restored = oc::mean_cross_entropy(oc::forward_batch(probe, val.x).probs, val.labels);
  EXPECT_DOUBLE_EQ(restored, res.log.validation_loss);
  for (std::size_t k = vc.size() - 6; k < vc.size(); ++k) EXPECT_GT(vc[k], res.log.validation_loss);
}

TEST(Evaluate, PerfectAndConstantPredictors) {
  oc::MLPModel m(63, 2, 3);
  const auto data = clusters(3, 10, 0.0, 1);
  // constant predictor: zero weights, largest bias on class 1
  m.b2[1] = 5.0;
  const auto ev = oc::evaluate(m, data.x, data.labels);
  EXPECT_NEAR(ev.accuracy, 1.0 / 3.0, 1e-12);
  const auto rn = ev.confusion.row_normalized();
  for (Eigen::Index r = 0; r < 3; ++r) EXPECT_NEAR(rn.row(r).sum(), 1.0, 1e-12);

  oc::ConfusionMatrix perfect(3);
  for (int c = 0; c < 3; ++c) perfect.add(c, c);
  EXPECT_EQ(perfect.accuracy(), 1.0);
  EXPECT_EQ(perfect.row_normalized(), Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(perfect.mean_diagonal(), 1.0);
  EXPECT_THROW(oc::evaluate(m, Eigen::MatrixXd(63, 0), {}), std::invalid_argument);
}

TEST(Evaluate, CsvHasHeaderRowAndColumn) {
  Eigen::MatrixXd m(2, 2);
  m << 0.75, 0.25, 0, 1;
  const auto csv = oc::matrix_csv(m, {"a", "b,c"}, {"a", "b,c"});
  EXPECT_EQ(csv, "true\\predicted,a,\"b,c\"\na,0.75,0.25\n\"b,c\",0,1\n");
}
