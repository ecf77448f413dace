#include "famscan/mendel.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace famscan::mendel {

namespace {

OffspringDistribution from_support(std::map<int, Rational>&& acc) {
  OffspringDistribution d;
  d.support.assign(acc.begin(), acc.end());
  Rational mean(0), m2(0);
  for (const auto& [x, p] : d.support) {
    mean += Rational(x) * p;
    m2 += Rational(x * x) * p;
  }
  d.mean = mean;
  d.variance = m2 - mean * mean;
  return d;
}

}  // namespace

std::array<Rational, 3> transmission_counts(int fc, int mc) {
  std::array<Rational, 3> out{Rational(0), Rational(0), Rational(0)};
  auto sides = [](int g) {
    // alleles a parent with count g can transmit (as 0/1 contributions)
    return g == 1 ? std::array<int, 2>{0, 1}
                  : std::array<int, 2>{g / 2, g / 2};
  };
  const Rational quarter(1, 4);
  for (int tf : sides(fc))
    for (int tm : sides(mc)) out[tf + tm] += quarter;
  return out;
}

OffspringDistribution offspring_distribution_counts(
    int fc, int mc, const std::array<int, 3>& code_table) {
  const auto counts = transmission_counts(fc, mc);
  std::map<int, Rational> acc;
  for (int c = 0; c < 3; ++c)
    if (counts[c].num != 0) acc[code_table[c]] += counts[c];
  return from_support(std::move(acc));
}

OffspringDistribution offspring_distribution(const Genotype& father,
                                             const Genotype& mother,
                                             const GeneticModel& model) {
  if (father.is_missing() || mother.is_missing())
    throw std::invalid_argument(
        "offspring_distribution: missing parent genotype; use the sibship path");
  std::set<Allele> alleles{father.a, father.b, mother.a, mother.b};
  if (alleles.size() > 2)
    throw DataError("parental genotypes carry more than two distinct alleles");
  std::map<int, Rational> acc;
  const Rational quarter(1, 4);
  for (Allele tf : {father.a, father.b})
    for (Allele tm : {mother.a, mother.b}) {
      const Genotype child = Genotype::of(tf, tm);
      acc[*model.code(child)] += quarter;
    }
  return from_support(std::move(acc));
}

SibshipDistribution sibship_distribution_counts(
    const std::vector<int>& counts, const std::array<int, 3>& code_table) {
  if (counts.size() < 2)
    throw std::invalid_argument("sibship_distribution: need >= 2 genotyped sibs");
  const int n = int(counts.size());
  SibshipDistribution d;
  d.n = n;
  std::map<int, long long> freq;
  long long sum = 0, sum2 = 0;
  for (int c : counts) {
    const int x = code_table[c];
    ++freq[x];
    sum += x;
    sum2 += (long long)x * x;
  }
  for (const auto& [x, k] : freq) d.marginal.emplace_back(x, Rational(k, n));
  d.mean = Rational(sum, n);
  // population variance of the multiset: (n*sum2 - sum^2) / n^2
  d.variance = Rational((long long)n * sum2 - sum * sum, (long long)n * n);
  d.pair_covariance = Rational(0) - d.variance / Rational(n - 1);
  return d;
}

SibshipDistribution sibship_distribution(const std::vector<Genotype>& sibs,
                                         const GeneticModel& model) {
  std::vector<int> risk_counts;
  risk_counts.reserve(sibs.size());
  for (const Genotype& g : sibs) {
    if (g.is_missing())
      throw std::invalid_argument("sibship_distribution: missing sib genotype");
    risk_counts.push_back(g.count_allele(model.risk_allele));
  }
  const std::array<int, 3> table{code_from_count(model.kind, 0),
                                 code_from_count(model.kind, 1),
                                 code_from_count(model.kind, 2)};
  return sibship_distribution_counts(risk_counts, table);
}

bool family_marker_consistent(const Cohort& cohort, const NuclearFamily& fam,
                              std::size_t m) {
  const std::uint8_t fc =
      fam.father >= 0 ? cohort.code(m, fam.father) : kMissingCode;
  const std::uint8_t mc =
      fam.mother >= 0 ? cohort.code(m, fam.mother) : kMissingCode;
  if (fc == kMissingCode && mc == kMissingCode) return true;
  if (fc != kMissingCode && mc != kMissingCode) {
    for (int o : fam.offspring) {
      const std::uint8_t cc = cohort.code(m, o);
      if (cc == kMissingCode) continue;
      if (!child_count_possible(fc, mc, cc)) return false;
    }
    return true;
  }
  const int pc = fc != kMissingCode ? fc : mc;
  for (int o : fam.offspring) {
    const std::uint8_t cc = cohort.code(m, o);
    if (cc == kMissingCode) continue;
    if ((pc == 2 && cc == 0) || (pc == 0 && cc == 2)) return false;
  }
  return true;
}

MendelCheck check_mendelian(const Cohort& cohort, std::size_t family_idx,
                            std::size_t marker_idx) {
  const NuclearFamily& fam = cohort.families[family_idx];
  MendelCheck out;
  if (family_marker_consistent(cohort, fam, marker_idx)) return out;
  out.consistent = false;
  auto show = [&](int person) {
    if (person < 0) return std::string("-/-");
    const Genotype g = cohort.genotype_at(marker_idx, person);
    if (g.is_missing()) return std::string("-/-");
    return std::string{g.a, '/', g.b};
  };
  const std::uint8_t fc =
      fam.father >= 0 ? cohort.code(marker_idx, fam.father) : kMissingCode;
  const std::uint8_t mc =
      fam.mother >= 0 ? cohort.code(marker_idx, fam.mother) : kMissingCode;
  for (int o : fam.offspring) {
    const std::uint8_t cc = cohort.code(marker_idx, o);
    if (cc == kMissingCode) continue;
    bool bad;
    if (fc != kMissingCode && mc != kMissingCode) {
      bad = !child_count_possible(fc, mc, cc);
    } else {
      const int pc = fc != kMissingCode ? fc : mc;
      bad = (pc == 2 && cc == 0) || (pc == 0 && cc == 2);
    }
    if (bad) {
      out.reason = "family " + fam.fid + " marker " +
                   cohort.markers[marker_idx].id + ": offspring " +
                   cohort.people[o].id + " " + show(o) +
                   " incompatible with parents " + show(fam.father) + " x " +
                   show(fam.mother);
      return out;
    }
  }
  out.reason = "family " + fam.fid + ": inconsistent at marker " +
               cohort.markers[marker_idx].id;
  return out;
}

}  // namespace famscan::mendel
