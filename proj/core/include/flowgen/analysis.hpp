#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "flowgen/image.hpp"

namespace flowgen {

/// [lo, hi) over ground-truth flow magnitude, px.
struct MagnitudeRange {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool operator==(const MagnitudeRange&) const = default;
};

/// 0-10, 10-40, 40-160, 160-inf px.
std::vector<MagnitudeRange> default_epe_ranges();

struct EpeReport {
  double total_epe = 0.0;
  struct Partial {
    MagnitudeRange range;
    double contribution = 0.0;
    std::uint64_t pixels = 0;
  };
  std::vector<Partial> partial;
  std::uint64_t pixel_count = 0;
};

/// Running sums behind an EpeReport. Partials are normalized by the total
/// pixel count, so they add up to the total.
class EpeAccumulator {
 public:
  explicit EpeAccumulator(std::vector<MagnitudeRange> ranges = default_epe_ranges());

  /// Throws DimensionMismatch.
  void add(const FlowField& est, const FlowField& gt);
  void merge(const EpeAccumulator& other);
  EpeReport report() const;

 private:
  std::vector<MagnitudeRange> ranges_;
  double total_sum_ = 0.0;
  std::vector<double> range_sums_;
  std::vector<std::uint64_t> range_pixels_;
  std::uint64_t pixels_ = 0;
};

EpeReport epe(const FlowField& est, const FlowField& gt,
              const std::vector<MagnitudeRange>& ranges = default_epe_ranges());

/// counts[0] is the underflow bin (< edges[0]); counts[i] for i >= 1 covers
/// [edges[i-1], edges[i]), and the last bin is open-ended. So n edges give n
/// counts.
struct DisplacementHistogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t total_pixels = 0;

  /// Throws InvalidArgument unless edges are strictly increasing.
  explicit DisplacementHistogram(std::vector<double> edges = default_histogram_edges());

  void add(double magnitude) noexcept;
  void add(const FlowField& flow) noexcept;
  /// Throws EdgeMismatch.
  void merge(const DisplacementHistogram& other);
  std::vector<double> proportions() const;
  /// "bin,lo,hi,count,fraction" header plus one row per count.
  std::string to_csv() const;

  /// 41 log-spaced edges over [0.1, 300] px: underflow plus 40 bins.
  static std::vector<double> default_histogram_edges();
};

std::vector<double> log_spaced_edges(double lo, double hi, int bins);
std::vector<double> scaled_edges(const std::vector<double>& edges, double k);

/// Symmetric chi-square over normalized counts, in [0, 2]. Throws EdgeMismatch.
double compare_histograms(const DisplacementHistogram& a, const DisplacementHistogram& b);
/// Largest CDF difference over bins, compared index by index (use it on
/// histograms whose edges differ by a known scale). Throws EdgeMismatch when
/// the bin counts differ.
double ks_distance(const DisplacementHistogram& a, const DisplacementHistogram& b);

}  // namespace flowgen
