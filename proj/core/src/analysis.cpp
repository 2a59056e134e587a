#include "flowgen/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "flowgen/error.hpp"

namespace flowgen {

std::vector<MagnitudeRange> default_epe_ranges() {
  return {{0.0, 10.0}, {10.0, 40.0}, {40.0, 160.0}, {160.0, std::numeric_limits<double>::infinity()}};
}

EpeAccumulator::EpeAccumulator(std::vector<MagnitudeRange> ranges)
    : ranges_(std::move(ranges)), range_sums_(ranges_.size(), 0.0), range_pixels_(ranges_.size(), 0) {}

void EpeAccumulator::add(const FlowField& est, const FlowField& gt) {
  if (est.width() != gt.width() || est.height() != gt.height()) {
    throw Error(ErrorCode::DimensionMismatch, "estimate is " + std::to_string(est.width()) + "x" +
                                                  std::to_string(est.height()) + ", ground truth is " +
                                                  std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
  }
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      const double du = static_cast<double>(est.u(x, y)) - gt.u(x, y);
      const double dv = static_cast<double>(est.v(x, y)) - gt.v(x, y);
      const double e = std::hypot(du, dv);
      const double mag = std::hypot(static_cast<double>(gt.u(x, y)), static_cast<double>(gt.v(x, y)));
      total_sum_ += e;
      for (std::size_t r = 0; r < ranges_.size(); ++r) {
        if (mag >= ranges_[r].lo && mag < ranges_[r].hi) {
          range_sums_[r] += e;
          ++range_pixels_[r];
        }
      }
    }
  }
  pixels_ += gt.pixel_count();
}

void EpeAccumulator::merge(const EpeAccumulator& other) {
  if (other.ranges_ != ranges_) throw Error(ErrorCode::EdgeMismatch, "EPE accumulators use different ranges");
  total_sum_ += other.total_sum_;
  for (std::size_t r = 0; r < ranges_.size(); ++r) {
    range_sums_[r] += other.range_sums_[r];
    range_pixels_[r] += other.range_pixels_[r];
  }
  pixels_ += other.pixels_;
}

EpeReport EpeAccumulator::report() const {
  EpeReport rep;
  rep.pixel_count = pixels_;
  const double n = pixels_ == 0 ? 1.0 : static_cast<double>(pixels_);
  rep.total_epe = total_sum_ / n;
  for (std::size_t r = 0; r < ranges_.size(); ++r) {
    rep.partial.push_back({ranges_[r], range_sums_[r] / n, range_pixels_[r]});
  }
  return rep;
}

EpeReport epe(const FlowField& est, const FlowField& gt, const std::vector<MagnitudeRange>& ranges) {
  EpeAccumulator acc(ranges);
  acc.add(est, gt);
  return acc.report();
}

// ---- histograms ------------------------------------------------------------

std::vector<double> log_spaced_edges(double lo, double hi, int bins) {
  if (!(lo > 0.0 && hi > lo) || bins < 1) throw Error(ErrorCode::InvalidArgument, "need 0 < lo < hi and bins >= 1");
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  const double step = std::log(hi / lo) / bins;
  for (int i = 0; i <= bins; ++i) edges[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  edges.front() = lo;
  edges.back() = hi;
  return edges;
}

std::vector<double> scaled_edges(const std::vector<double>& edges, double k) {
  std::vector<double> out = edges;
  for (double& e : out) e *= k;
  return out;
}

std::vector<double> DisplacementHistogram::default_histogram_edges() { return log_spaced_edges(0.1, 300.0, 40); }

DisplacementHistogram::DisplacementHistogram(std::vector<double> e) : edges(std::move(e)) {
  if (edges.empty()) throw Error(ErrorCode::InvalidArgument, "histogram needs at least one edge");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw Error(ErrorCode::InvalidArgument, "histogram edges must increase strictly");
  }
  counts.assign(edges.size(), 0);
}

void DisplacementHistogram::add(double magnitude) noexcept {
  // The number of edges <= magnitude is the bin index; the last bin is open.
  const auto bin = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), magnitude) - edges.begin());
  ++counts[std::min(bin, counts.size() - 1)];
  ++total_pixels;
}

void DisplacementHistogram::add(const FlowField& flow) noexcept {
  for (int y = 0; y < flow.height(); ++y) {
    for (int x = 0; x < flow.width(); ++x) {
      add(std::hypot(static_cast<double>(flow.u(x, y)), static_cast<double>(flow.v(x, y))));
    }
  }
}

void DisplacementHistogram::merge(const DisplacementHistogram& other) {
  if (other.edges != edges) throw Error(ErrorCode::EdgeMismatch, "histograms have different bin edges");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  total_pixels += other.total_pixels;
}

std::vector<double> DisplacementHistogram::proportions() const {
  std::vector<double> p(counts.size(), 0.0);
  if (total_pixels == 0) return p;
  for (std::size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / total_pixels;
  return p;
}

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::string DisplacementHistogram::to_csv() const {
  const std::vector<double> p = proportions();
  std::string out = "bin,lo,hi,count,fraction\n";
  const std::size_t last = counts.size() - 1;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double lo = i > 0 ? edges[i - 1] : edges[0] > 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    const double hi = i == 0 ? edges[0] : i == last ? std::numeric_limits<double>::infinity() : edges[i];
    out += std::to_string(i) + "," + fmt(lo) + "," + fmt(hi) + "," + std::to_string(counts[i]) + "," + fmt(p[i]) + "\n";
  }
  return out;
}

double compare_histograms(const DisplacementHistogram& a, const DisplacementHistogram& b) {
  if (a.edges != b.edges) throw Error(ErrorCode::EdgeMismatch, "histograms have different bin edges");
  const std::vector<double> p = a.proportions();
  const std::vector<double> q = b.proportions();
  double chi = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double s = p[i] + q[i];
    if (s > 0.0) chi += (p[i] - q[i]) * (p[i] - q[i]) / s;
  }
  return chi;
}

double ks_distance(const DisplacementHistogram& a, const DisplacementHistogram& b) {
  if (a.counts.size() != b.counts.size()) throw Error(ErrorCode::EdgeMismatch, "histograms have different bin counts");
  const std::vector<double> p = a.proportions();
  const std::vector<double> q = b.proportions();
  double ca = 0.0;
  double cb = 0.0;
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ca += p[i];
    cb += q[i];
    d = std::max(d, std::abs(ca - cb));
  }
  return d;
}

}  // namespace flowgen
