#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "irtpart/partitioning.hpp"
#include "irtpart/prng.hpp"

using namespace irtpart;

namespace {

std::vector<ItemParameters> make_items(const std::vector<double>& difficulty) {
  std::vector<ItemParameters> items(difficulty.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string id = std::to_string(i);
    items[i].item_id = std::string(2 - std::min<std::size_t>(2, id.size()), '0') + id;
    items[i].discrimination = 1.0;
    items[i].difficulty = difficulty[i];
    items[i].guessing = 0.1;
    items[i].flag = ItemFlag::calibrated;
  }
  return items;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("strategy names round-trip and enumerate in canonical order", "[partitioning]") {
  const auto all = enumerate_strategies();
  REQUIRE(all.size() == 12);
  const std::vector<std::string> expect{"Dis_min_max",  "Dis_max_min",  "Dis_balanced",
                                        "Dif_min_max",  "Dif_max_min",  "Dif_balanced",
                                        "Gues_min_max", "Gues_max_min", "Gues_balanced",
                                        "Random_0",     "Random_1",     "Random_2"};
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].name() == expect[i]);
    CHECK(parse_strategy(expect[i]) == all[i]);
  }
  CHECK_THROWS_AS(parse_strategy("Dis_minmax"), DataError);
  CHECK_THROWS_AS(parse_strategy("Random_x"), DataError);
  CHECK_THROWS_AS(parse_strategy(""), DataError);
}

TEST_CASE("round_half_up", "[partitioning]") {
  CHECK(round_half_up(3.5) == 4);
  CHECK(round_half_up(3.49) == 3);
  CHECK(round_half_up(0.5) == 1);
  CHECK(round_half_up(7.0) == 7);
  CHECK(round_half_up(116.9) == 117);
  CHECK(round_half_up(291.2) == 291);
}

TEST_CASE("ordered split sends the 70% smallest of each class to train", "[partitioning]") {
  const auto items = make_items({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const std::vector<int> labels(10, 0);
  const auto plan = split_ordered(items, labels, IrtParam::difficulty, true, 0.7);
  CHECK(as_set(plan.train_ids) ==
        std::set<std::string>{"00", "01", "02", "03", "04", "05", "06"});
  CHECK(as_set(plan.test_ids) == std::set<std::string>{"07", "08", "09"});

  const auto flipped = split_ordered(items, labels, IrtParam::difficulty, false, 0.7);
  CHECK(as_set(flipped.train_ids) ==
        std::set<std::string>{"03", "04", "05", "06", "07", "08", "09"});
}

TEST_CASE("ordered split is stratified per class with half-up rounding", "[partitioning]") {
  // class 0: 5 members -> train 4 (round_half_up(3.5)); class 1: 5 -> train 4
  const auto items = make_items({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const std::vector<int> labels{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  const auto plan = split_ordered(items, labels, IrtParam::difficulty, true, 0.7);
  CHECK(plan.train_ids.size() == 8);
  CHECK(as_set(plan.train_ids) ==
        std::set<std::string>{"00", "01", "02", "03", "05", "06", "07", "08"});
}

TEST_CASE("parameter ties break by instance id", "[partitioning]") {
  const auto items = make_items({5, 5, 5, 5, 1});
  const std::vector<int> labels(5, 0);
  // ascending: id order within the tie, so train = {04,00,01} (value 1 first)
  const auto plan = split_ordered(items, labels, IrtParam::difficulty, true, 0.7);
  REQUIRE(plan.train_ids.size() == 4);  // round_half_up(3.5)
  CHECK(as_set(plan.train_ids) == std::set<std::string>{"04", "00", "01", "02"});
}

TEST_CASE("dominance: every train value at or below every test value", "[partitioning]") {
  Rng rng(5);
  std::vector<double> vals(37);
  for (auto& v : vals) v = rng.next_uniform(-3, 3);
  const auto items = make_items(vals);
  std::vector<int> labels(vals.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = int(rng.next_below(2));

  const auto plan = split_ordered(items, labels, IrtParam::difficulty, true, 0.7);
  for (int cls = 0; cls <= 1; ++cls) {
    double max_train = -1e9, min_test = 1e9;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (labels[i] != cls) continue;
      const bool in_train = std::find(plan.train_ids.begin(), plan.train_ids.end(),
                                      items[i].item_id) != plan.train_ids.end();
      (in_train ? max_train : min_test) =
          in_train ? std::max(max_train, vals[i]) : std::min(min_test, vals[i]);
    }
    CHECK(max_train <= min_test);
  }
}

TEST_CASE("balanced split takes window positions 3, 6, 9 when counts allow", "[partitioning]") {
  const auto items = make_items({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const std::vector<int> labels(10, 0);
  const auto plan = split_balanced(items, labels, IrtParam::difficulty, 0.7);
  // sorted ascending, 0-based positions {3,6,9} -> values {4,7,10}; test quota
  // is 10 - round_half_up(7) = 3, so no correction step
  CHECK(as_set(plan.test_ids) == std::set<std::string>{"03", "06", "09"});
}

TEST_CASE("balanced split corrects counts toward the other side's median", "[partitioning]") {
  const auto items = make_items({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  const std::vector<int> labels(12, 0);
  const auto plan = split_balanced(items, labels, IrtParam::difficulty, 0.7);
  // windows give test {4,7,10}; quota = 12 - round_half_up(8.4) = 4, so one
  // train instance moves: median(test)=7, candidates 6 and 8 tie on distance,
  // smaller id wins -> value 6 (id "05")
  CHECK(plan.test_ids.size() == 4);
  CHECK(as_set(plan.test_ids) == std::set<std::string>{"03", "05", "06", "09"});
}

TEST_CASE("balanced split keeps train and test means close", "[partitioning]") {
  Rng rng(11);
  std::vector<double> vals(200);
  for (auto& v : vals) v = rng.next_normal() * 2.0 + 0.3;
  const auto items = make_items(vals);
  std::vector<int> labels(vals.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = int(rng.next_below(2));

  const auto plan = split_balanced(items, labels, IrtParam::difficulty, 0.7);
  double sum_tr = 0, sum_te = 0, sum = 0, sum2 = 0;
  std::set<std::string> train(plan.train_ids.begin(), plan.train_ids.end());
  for (std::size_t i = 0; i < items.size(); ++i) {
    sum += vals[i];
    sum2 += vals[i] * vals[i];
    (train.count(items[i].item_id) ? sum_tr : sum_te) += vals[i];
  }
  const double mean_tr = sum_tr / double(plan.train_ids.size());
  const double mean_te = sum_te / double(plan.test_ids.size());
  const double sd = std::sqrt(sum2 / 200.0 - (sum / 200.0) * (sum / 200.0));
  CHECK(std::abs(mean_tr - mean_te) <= 0.1 * sd);
}

TEST_CASE("random splits are pure functions of labels and strategy seed", "[partitioning]") {
  Rng rng(23);
  std::vector<double> vals_a(40), vals_b(40);
  for (auto& v : vals_a) v = rng.next_normal();
  for (auto& v : vals_b) v = rng.next_normal();
  std::vector<int> labels(40);
  for (std::size_t i = 0; i < 40; ++i) labels[i] = int(rng.next_below(2));

  const PartitionStrategy r1 = parse_strategy("Random_1");
  const auto plan_a = make_partition(make_items(vals_a), labels, r1, 0.7);
  const auto plan_b = make_partition(make_items(vals_b), labels, r1, 0.7);
  CHECK(plan_a.train_ids == plan_b.train_ids);  // parameters are ignored

  const auto plan_c = make_partition(make_items(vals_a), labels, parse_strategy("Random_2"), 0.7);
  CHECK(plan_a.train_ids != plan_c.train_ids);
}

TEST_CASE("every strategy yields a complete, disjoint, stratified plan", "[partitioning]") {
  Rng rng(7);
  std::vector<double> a(83), b(83), c(83);
  for (std::size_t i = 0; i < 83; ++i) {
    a[i] = rng.next_uniform(0.5, 2.5);
    b[i] = rng.next_normal();
    c[i] = rng.next_uniform(0.0, 0.4);
  }
  std::vector<ItemParameters> items = make_items(b);
  for (std::size_t i = 0; i < 83; ++i) {
    items[i].item_id = std::to_string(100 + i);
    items[i].discrimination = a[i];
    items[i].guessing = c[i];
  }
  std::vector<int> labels(83);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < 83; ++i) {
    labels[i] = int(rng.next_below(2));
    pos += std::size_t(labels[i]);
  }

  for (const auto& strategy : enumerate_strategies()) {
    const auto plan = make_partition(items, labels, strategy, 0.7);
    INFO(strategy.name());
    // complete and disjoint
    CHECK(plan.train_ids.size() + plan.test_ids.size() == 83);
    std::set<std::string> seen;
    for (const auto& id : plan.train_ids) seen.insert(id);
    for (const auto& id : plan.test_ids) seen.insert(id);
    CHECK(seen.size() == 83);
    // per-class 70/30 with half-up rounding
    std::set<std::string> train(plan.train_ids.begin(), plan.train_ids.end());
    std::size_t train_pos = 0, train_neg = 0;
    for (std::size_t i = 0; i < 83; ++i)
      if (train.count(items[i].item_id)) ++(labels[i] ? train_pos : train_neg);
    CHECK(train_pos == std::size_t(round_half_up(0.7 * double(pos))));
    CHECK(train_neg == std::size_t(round_half_up(0.7 * double(83 - pos))));
  }
}

TEST_CASE("case-study class sizes give the documented train counts", "[partitioning]") {
  // 270 instances split 150/120 -> train 105 + 84 = 189, test 81
  {
    std::vector<double> vals(270);
    for (std::size_t i = 0; i < 270; ++i) vals[i] = double(i % 37);
    std::vector<int> labels(270);
    for (std::size_t i = 0; i < 270; ++i) labels[i] = i < 150 ? 0 : 1;
    const auto plan = make_partition(make_items(vals), labels, parse_strategy("Dif_min_max"), 0.7);
    CHECK(plan.train_ids.size() == 189);
    CHECK(plan.test_ids.size() == 81);
  }
  // 583 instances split 416/167 -> train 291 + 117
  {
    std::vector<double> vals(583);
    for (std::size_t i = 0; i < 583; ++i) vals[i] = double((i * 13) % 101);
    std::vector<int> labels(583);
    for (std::size_t i = 0; i < 583; ++i) labels[i] = i >= 416;
    const auto items = make_items(vals);
    const auto plan = make_partition(items, labels, parse_strategy("Gues_balanced"), 0.7);
    std::set<std::string> train(plan.train_ids.begin(), plan.train_ids.end());
    std::size_t tp = 0, tn = 0;
    for (std::size_t i = 0; i < 583; ++i)
      if (train.count(items[i].item_id)) ++(labels[i] ? tp : tn);
    CHECK(tn == 291);
    CHECK(tp == 117);
  }
}

TEST_CASE("provenance covers the dataset in order with class ranks", "[partitioning]") {
  const auto items = make_items({3, 1, 2, 5, 4});
  const std::vector<int> labels{0, 1, 0, 1, 0};
  const auto plan = make_partition(items, labels, parse_strategy("Dif_min_max"), 0.7);
  REQUIRE(plan.provenance.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(plan.provenance[i].instance_id == items[i].item_id);
    CHECK(plan.provenance[i].label == labels[i]);
    CHECK(plan.provenance[i].param_value == items[i].difficulty);
  }
  // class 0 values {3,2,4} -> ranks 1,0,2; class 1 values {1,5} -> ranks 0,1
  CHECK(plan.provenance[0].rank_in_class == 1);
  CHECK(plan.provenance[2].rank_in_class == 0);
  CHECK(plan.provenance[4].rank_in_class == 2);
  CHECK(plan.provenance[1].rank_in_class == 0);
  CHECK(plan.provenance[3].rank_in_class == 1);
}

TEST_CASE("partition csv lists instances in dataset order", "[partitioning]") {
  const auto items = make_items({2, 1, 3, 4});
  const std::vector<int> labels(4, 0);
  const auto plan = split_ordered(items, labels, IrtParam::difficulty, true, 0.7);
  // round_half_up(2.8) = 3 -> train values {1,2,3}
  CHECK(partition_to_csv(plan) ==
        "instance_id,assignment\n00,train\n01,train\n02,train\n03,test\n");
}

TEST_CASE("strategy parameter selector", "[partitioning]") {
  ItemParameters item;
  item.discrimination = 1.5;
  item.difficulty = -0.25;
  item.guessing = 0.12;
  CHECK(param_value(item, IrtParam::discrimination) == 1.5);
  CHECK(param_value(item, IrtParam::difficulty) == -0.25);
  CHECK(param_value(item, IrtParam::guessing) == 0.12);
}
