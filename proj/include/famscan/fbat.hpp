#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "famscan/cohort.hpp"
#include "famscan/types.hpp"

namespace famscan::fbat {

// Trait offset mu entering the weights (Y - mu). Auto uses the sample mean
// of the non-missing offspring traits; that estimate is invalid when
// subjects were selected on the trait (all-affected designs), where a fixed
// offset (e.g. the prevalence) must be supplied instead.
struct OffsetSpec {
  enum class Kind { auto_mean, fixed };
  Kind kind = Kind::auto_mean;
  double value = 0.0;

  static OffsetSpec automatic() { return {}; }
  static OffsetSpec fixed(double mu) { return {Kind::fixed, mu}; }
};

// Resolves the offset against a cohort; throws DataError when Auto is
// requested but the offspring traits are constant (nothing can be tested)
// or when a fixed binary offset falls outside [0,1].
double resolve_offset(const Cohort& cohort, const OffsetSpec& offset);

enum class ResultStatus { ok, monomorphic, no_informative, low_information };
const char* to_string(ResultStatus s);

struct FbatResult {
  std::string marker_id;
  ResultStatus status = ResultStatus::ok;
  int n_informative = 0;
  double u = 0.0;
  double var0 = 0.0;
  double z = 0.0;       // u / sqrt(var0); 0 when skipped
  double p = 1.0;       // two-sided asymptotic; NaN unless status == ok
  Allele risk_allele = 0;

  bool usable() const { return status == ResultStatus::ok; }
};

struct FbatOptions {
  ModelKind model = ModelKind::additive;
  Allele risk_override = 0;  // 0: minor allele among founders, per marker
  OffsetSpec offset;
  int min_informative = 10;  // below: no asymptotic p is reported
  int threads = 0;           // 0: hardware concurrency
};

// Conditional score statistic for one marker:
//   U    = sum over offspring of (Y - mu)(X - E[X|conditioning])
//   var0 = null variance of U given the conditioning
// Families with two typed parents condition on the parental genotypes
// (independent transmissions, no between-sib covariance); families with no
// typed parents and >= 2 typed offspring condition on the sibship multiset,
// whose permutation law induces a between-sib covariance that is included
// exactly. Families with exactly one typed parent are excluded.
FbatResult fbat_statistic(const Cohort& cohort, std::size_t marker,
                          const FbatOptions& opts);

// TDT specialization: affected offspring with two typed parents, additive
// coding, unit weights. Requires a binary trait.
FbatResult tdt_statistic(const Cohort& cohort, std::size_t marker,
                         const FbatOptions& opts = {});

// Transmission counts from heterozygous parents to affected offspring:
// b = transmissions of the risk allele, c = the other allele. The classic
// TDT chi-square is (b-c)^2/(b+c).
struct TransmissionCounts {
  long long b = 0;
  long long c = 0;
};
TransmissionCounts count_transmissions(const Cohort& cohort, std::size_t marker,
                                       Allele risk);

// Per-marker scan (all markers, or the given subset) in input order.
// Markers are distributed across threads; each marker's summation order is
// fixed, so results are deterministic at any thread count.
std::vector<FbatResult> scan(const Cohort& cohort, const FbatOptions& opts,
                             const std::vector<std::size_t>& subset = {});
std::vector<FbatResult> tdt_scan(const Cohort& cohort, const FbatOptions& opts,
                                 const std::vector<std::size_t>& subset = {});

// TSV emission: marker_id, chrom, pos, model, n_informative, U, var0, Z, p,
// status.
void write_results_tsv(const Cohort& cohort, const std::vector<FbatResult>& results,
                       ModelKind model, const std::string& path);

}  // namespace famscan::fbat
