#pragma once

#include <array>
#include <string>
#include <vector>

#include "famscan/cohort.hpp"
#include "famscan/rational.hpp"
#include "famscan/types.hpp"

namespace famscan::mendel {

// Conditional law of the coded offspring score X given parental genotypes
// (or given the sibship multiset). Probabilities stay exact rationals until
// the statistic layer converts to floating point.
struct OffspringDistribution {
  std::vector<std::pair<int, Rational>> support;  // (coded value, probability)
  Rational mean;
  Rational variance;

  double mean_d() const { return mean.to_double(); }
  double variance_d() const { return variance.to_double(); }
};

// Transmission law over the offspring count of a designated allele, given
// parental counts in {0,1,2}: each parent passes one of its two alleles
// with probability 1/2, independently.
std::array<Rational, 3> transmission_counts(int father_count, int mother_count);

// Distribution of X for one offspring of the given (non-missing) parents.
// Throws std::invalid_argument on a missing parent and DataError if the
// parental genotypes carry more than two distinct alleles.
OffspringDistribution offspring_distribution(const Genotype& father,
                                             const Genotype& mother,
                                             const GeneticModel& model);

// Count-basis variant used by per-marker scans: parent genotypes as counts
// of a reference allele, code_table maps an offspring count to X.
OffspringDistribution offspring_distribution_counts(
    int father_count, int mother_count, const std::array<int, 3>& code_table);

// Conditional law for a no-parent sibship given the observed genotype
// multiset: every assignment of the multiset to the offspring is equally
// likely, which fixes the per-sib marginal, the shared variance and the
// between-sib covariance (draws without replacement).
struct SibshipDistribution {
  std::vector<std::pair<int, Rational>> marginal;  // per-sib law of X
  Rational mean;
  Rational variance;  // per-sib variance (multiset population variance)
  Rational pair_covariance;  // Cov(X_i, X_j), i != j: -variance/(n-1)
  int n = 0;

  bool degenerate() const { return variance.num == 0; }
};

// Throws std::invalid_argument unless >= 2 non-missing genotypes are given.
SibshipDistribution sibship_distribution(const std::vector<Genotype>& sibs,
                                         const GeneticModel& model);
SibshipDistribution sibship_distribution_counts(const std::vector<int>& counts,
                                                const std::array<int, 3>& code_table);

struct MendelCheck {
  bool consistent = true;
  std::string reason;
};

// Mendelian consistency of one family at one marker. With both parents
// typed every typed offspring must be reachable by some transmission pair;
// with one typed parent the offspring must share an allele with it.
// Missing data never triggers a violation.
MendelCheck check_mendelian(const Cohort& cohort, std::size_t family_idx,
                            std::size_t marker_idx);

// Allocation-free variant for genome-wide screens.
bool family_marker_consistent(const Cohort& cohort, const NuclearFamily& fam,
                              std::size_t marker_idx);

// Offspring count reachable from parent counts (biallelic, count basis)?
inline bool child_count_possible(int fc, int mc, int cc) {
  const int lo = fc / 2 + mc / 2;
  const int hi = (fc + 1) / 2 + (mc + 1) / 2;
  return cc >= lo && cc <= hi;
}

}  // namespace famscan::mendel
