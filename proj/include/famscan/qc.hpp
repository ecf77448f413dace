#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "famscan/cohort.hpp"

namespace famscan::qc {

struct QcConfig {
  std::size_t max_mendel_errors_per_marker = 5;
  std::size_t max_mendel_errors_per_family = 5;
  double min_marker_call_rate = 0.95;
  double min_person_call_rate = 0.90;
  double min_maf = 0.01;
  double hwe_alpha = 1e-6;

  void validate() const;

  static QcConfig screening_only() {
    // Mendelian deletion without any wholesale exclusion; used by the
    // error-rate machinery where per-marker error counts are expected to
    // be high by construction.
    QcConfig c;
    c.max_mendel_errors_per_marker = std::numeric_limits<std::size_t>::max();
    c.max_mendel_errors_per_family = std::numeric_limits<std::size_t>::max();
    c.min_marker_call_rate = 0.0;
    c.min_person_call_rate = 0.0;
    c.min_maf = 0.0;
    c.hwe_alpha = 0.0;
    return c;
  }
};

// Exact conditional Hardy-Weinberg test on founder genotype counts:
// the two-sided probability-ordering convention (the p-value sums the
// probabilities of heterozygote counts no more probable than the observed
// one, conditional on the allele counts). Monomorphic input gives p = 1.
double hwe_exact_test(long long n_hom1, long long n_het, long long n_hom2);

struct MendelScreenResult {
  std::vector<std::size_t> errors_per_marker;  // inconsistent families at marker
  std::vector<std::size_t> errors_per_family;  // inconsistent markers for family
  // flagged (marker, family) pairs, in marker-major order
  std::vector<std::pair<std::size_t, std::size_t>> flagged;
  std::size_t total() const { return flagged.size(); }
};

// Counts check_mendelian failures per (marker, family).
MendelScreenResult mendel_screen(const Cohort& cohort, int threads = 0);

enum class ExclusionReason {
  person_call_rate,
  marker_call_rate,
  maf,
  hwe,
  mendel_marker,
  mendel_family,
};
const char* to_string(ExclusionReason r);

struct QcReport {
  struct MarkerRow {
    std::string id;
    double call_rate = 1.0;
    double maf = 0.0;
    double hwe_p = 1.0;
    std::size_t mendel_errors = 0;
    bool excluded = false;
    ExclusionReason reason{};
  };
  struct PersonRow {
    std::string fid, iid;
    double call_rate = 1.0;
    bool excluded = false;
  };
  struct FamilyRow {
    std::string fid;
    std::size_t mendel_errors = 0;
    bool excluded = false;
  };
  std::vector<MarkerRow> markers;
  std::vector<PersonRow> persons;
  std::vector<FamilyRow> families;
  std::size_t genotypes_deleted = 0;  // Mendelian (marker,family) deletions
  std::size_t passes = 0;             // cascade iterations to the fixpoint

  std::size_t excluded_markers() const;
  std::size_t excluded_persons() const;
  std::size_t excluded_families() const;
  void write_tsv(const std::string& path) const;
};

struct QcOutcome {
  Cohort clean;
  QcReport report;
};

// Filter cascade, fixed order: person call rate, marker call rate, founder
// MAF, founder HWE, Mendelian screen (delete inconsistent (marker,family)
// genotype sets; drop markers/families over the error thresholds). The
// cascade is iterated to a fixpoint so a second application is a no-op.
QcOutcome apply_filters(const Cohort& cohort, const QcConfig& config,
                        int threads = 0);

// ---- genome-wide undetected-error-rate estimation ----

enum class ErrorKind { symmetric_miscall, genotype_confusion };

struct ErrorRateOptions {
  ErrorKind kind = ErrorKind::symmetric_miscall;
  std::vector<double> grid = {0.0, 0.0025, 0.005, 0.0075, 0.01, 0.015, 0.02};
  int calibration_reps = 4;   // simulated cohorts per grid point
  int bootstrap_reps = 200;
  std::uint64_t seed = 1;
  int threads = 0;
  std::size_t min_markers = 1000;
};

struct ErrorRateEstimate {
  double epsilon_hat = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
  double observed_distortion = 0.0;   // genome-wide mean per-marker Z
  std::size_t markers_used = 0;
  std::vector<std::pair<double, double>> curve;  // (epsilon, mean distortion)
};

// Estimates the undetected per-allele miscall rate by matching the observed
// genome-wide mean of per-marker major-allele transmission Z statistics
// against a Monte Carlo calibration curve simulated at the same family
// structure and marker frequencies. The input cohort must already be
// Mendelian-screened; refuses cohorts with fewer than min_markers usable
// markers.
ErrorRateEstimate estimate_error_rate(const Cohort& cohort,
                                      const ErrorRateOptions& opts);

// Genome-wide mean of per-marker transmission Z for the major allele
// (helper shared by the estimator and its calibration path).
std::pair<double, std::vector<double>> genome_wide_distortion(const Cohort& cohort,
                                                              int threads = 0);

}  // namespace famscan::qc
