#include <cmath>
#include <cstdio>
#include <limits>

#include "harmony/analysis.hpp"

namespace harmony {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "Pass";
    case Verdict::Fail:
      return "Fail";
    case Verdict::Degenerate:
      return "Degenerate";
  }
  return "Unknown";
}

std::string serialize(const Vector& v) {
  std::string out = "[";
  char buf[32];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ",";
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    out += buf;
  }
  out += "]";
  return out;
}

DeviationReport::DeviationReport(std::string name, double tolerance)
    : name_(std::move(name)), tolerance_(tolerance) {}

void DeviationReport::absorb(const SampleRecord& r) {
  const double dev = std::isnan(r.deviation) ? std::numeric_limits<double>::infinity() : r.deviation;
  sum_dev_ += dev;
  if (records_.size() == 1 || dev > max_dev_) {
    max_dev_ = dev;
    worst_witness_ = r.witness;
  } else if (dev == max_dev_ && r.witness < worst_witness_) {
    worst_witness_ = r.witness;
  }
}

void DeviationReport::add(std::string kind, double deviation, std::string witness) {
  records_.push_back({records_.size(), std::move(kind), deviation, std::move(witness)});
  absorb(records_.back());
}

void DeviationReport::merge(const DeviationReport& other) {
  for (const auto& r : other.records_) {
    records_.push_back({records_.size(), r.kind, r.deviation, r.witness});
    absorb(records_.back());
  }
  skipped_ += other.skipped_;
}

double DeviationReport::mean_dev() const {
  return records_.empty() ? 0.0 : sum_dev_ / static_cast<double>(records_.size());
}

Verdict DeviationReport::verdict() const {
  if (records_.empty()) return Verdict::Degenerate;
  return max_dev_ < tolerance_ ? Verdict::Pass : Verdict::Fail;
}

Verdict TraceReport::verdict() const {
  bool any = false;
  for (const auto& c : checks) {
    if (c.verdict() == Verdict::Fail) return Verdict::Fail;
    any = any || c.verdict() == Verdict::Pass;
  }
  return any ? Verdict::Pass : Verdict::Degenerate;
}

const DeviationReport* TraceReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name() == name) return &c;
  }
  return nullptr;
}

std::size_t TraceReport::n_samples() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.n_samples();
  return n;
}

double TraceReport::max_dev() const {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, c.max_dev());
  return m;
}

}  // namespace harmony
