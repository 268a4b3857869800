#ifndef IRTPART_METRICS_HPP
#define IRTPART_METRICS_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "irtpart/common.hpp"

namespace irtpart {

struct MetricSet {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// The five reported metrics from a confusion matrix; every 0/0 is defined as 0.
inline MetricSet metrics_from_confusion(std::int64_t tp, std::int64_t fp, std::int64_t fn,
                                        std::int64_t tn) {
  MetricSet m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.tn = tn;
  const std::int64_t n = tp + fp + fn + tn;
  m.accuracy = n == 0 ? 0.0 : (double)(tp + tn) / (double)n;
  m.precision = tp + fp == 0 ? 0.0 : (double)tp / (double)(tp + fp);
  m.recall = tp + fn == 0 ? 0.0 : (double)tp / (double)(tp + fn);
  m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  const double denom = std::sqrt((double)(tp + fp)) * std::sqrt((double)(tp + fn)) *
                       std::sqrt((double)(tn + fp)) * std::sqrt((double)(tn + fn));
  m.mcc = denom == 0.0 ? 0.0 : ((double)tp * (double)tn - (double)fp * (double)fn) / denom;
  return m;
}

inline MetricSet compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                 int positive_label = 1) {
  if (y_true.size() != y_pred.size()) throw Error("compute_metrics: length mismatch");
  if (y_true.empty()) throw Error("compute_metrics: empty input");
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool t = y_true[i] == positive_label;
    const bool p = y_pred[i] == positive_label;
    if (t && p)
      ++tp;
    else if (!t && p)
      ++fp;
    else if (t && !p)
      ++fn;
    else
      ++tn;
  }
  return metrics_from_confusion(tp, fp, fn, tn);
}

}  // namespace irtpart

#endif
