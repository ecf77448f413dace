#include "famscan/qc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "famscan/mendel.hpp"
#include "famscan/parallel.hpp"

namespace famscan::qc {

void QcConfig::validate() const {
  auto frac = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!frac(min_marker_call_rate) || !frac(min_person_call_rate) ||
      !frac(min_maf) || !frac(hwe_alpha))
    throw DataError("qc config: fractions must lie in [0,1]");
}

const char* to_string(ExclusionReason r) {
  switch (r) {
    case ExclusionReason::person_call_rate:
      return "person_call_rate";
    case ExclusionReason::marker_call_rate:
      return "call_rate";
    case ExclusionReason::maf:
      return "maf";
    case ExclusionReason::hwe:
      return "hwe";
    case ExclusionReason::mendel_marker:
      return "mendel_errors";
    case ExclusionReason::mendel_family:
      return "mendel_errors";
  }
  return "?";
}

double hwe_exact_test(long long n_hom1, long long n_het, long long n_hom2) {
  if (n_hom1 < 0 || n_het < 0 || n_hom2 < 0)
    throw DataError("hwe_exact_test: negative genotype count");
  const long long n = n_hom1 + n_het + n_hom2;
  if (n <= 0) throw DataError("hwe_exact_test: empty sample");
  const long long rare = std::min(2 * n_hom1 + n_het, 2 * n_hom2 + n_het);
  if (rare == 0) return 1.0;  // monomorphic

  // Conditional distribution of the heterozygote count given allele counts;
  // recurrence over het counts of matching parity, anchored at the mode.
  const long long common = 2 * n - rare;
  std::vector<double> prob(std::size_t(rare) + 1, 0.0);
  long long mid = rare * common / (2 * n);
  if ((mid & 1) != (rare & 1)) ++mid;
  prob[mid] = 1.0;
  double sum = 1.0;
  {
    long long het = mid, homr = (rare - mid) / 2, homc = n - het - homr;
    for (long long h = mid; h > 1; h -= 2) {
      prob[h - 2] = prob[h] * double(h) * double(h - 1) /
                    (4.0 * double(homr + 1) * double(homc + 1));
      sum += prob[h - 2];
      ++homr;
      ++homc;
      het -= 2;
    }
  }
  {
    long long homr = (rare - mid) / 2, homc = n - mid - homr;
    for (long long h = mid; h + 2 <= rare; h += 2) {
      prob[h + 2] = prob[h] * 4.0 * double(homr) * double(homc) /
                    (double(h + 2) * double(h + 1));
      sum += prob[h + 2];
      --homr;
      --homc;
    }
  }
  const double p_obs = prob[n_het] / sum;
  double p = 0.0;
  for (long long h = rare & 1; h <= rare; h += 2)
    if (prob[h] / sum <= p_obs * (1.0 + 1e-12)) p += prob[h] / sum;
  return p < 1.0 ? p : 1.0;
}

MendelScreenResult mendel_screen(const Cohort& cohort, int threads) {
  MendelScreenResult out;
  const std::size_t nm = cohort.n_markers();
  const std::size_t nf = cohort.families.size();
  out.errors_per_marker.assign(nm, 0);
  out.errors_per_family.assign(nf, 0);
  std::vector<std::vector<std::size_t>> flagged_by_marker(nm);
  parallel_for(nm, threads, [&](std::size_t m) {
    for (std::size_t f = 0; f < nf; ++f)
      if (!mendel::family_marker_consistent(cohort, cohort.families[f], m))
        flagged_by_marker[m].push_back(f);
  });
  for (std::size_t m = 0; m < nm; ++m)
    for (std::size_t f : flagged_by_marker[m]) {
      out.errors_per_marker[m]++;
      out.errors_per_family[f]++;
      out.flagged.emplace_back(m, f);
    }
  return out;
}

std::size_t QcReport::excluded_markers() const {
  return std::size_t(std::count_if(markers.begin(), markers.end(),
                                   [](const auto& r) { return r.excluded; }));
}
std::size_t QcReport::excluded_persons() const {
  return std::size_t(std::count_if(persons.begin(), persons.end(),
                                   [](const auto& r) { return r.excluded; }));
}
std::size_t QcReport::excluded_families() const {
  return std::size_t(std::count_if(families.begin(), families.end(),
                                   [](const auto& r) { return r.excluded; }));
}

namespace {

struct WorkState {
  Cohort cohort;
  std::vector<std::size_t> marker_orig;
  std::vector<std::size_t> person_orig;
  std::vector<std::size_t> family_orig;
};

// Drops masked persons/markers; remaps families, drops families left with
// no offspring. Parent ids on surviving offspring keep naming removed rows,
// which then count as ungenotyped parents.
WorkState subset(const WorkState& in, const std::vector<char>& keep_person,
                 const std::vector<char>& keep_marker) {
  WorkState out;
  const Cohort& c = in.cohort;
  std::vector<int> new_index(c.n_people(), -1);
  for (std::size_t i = 0; i < c.n_people(); ++i)
    if (keep_person[i]) {
      new_index[i] = int(out.cohort.people.size());
      out.cohort.people.push_back(c.people[i]);
      out.person_orig.push_back(in.person_orig[i]);
    }
  for (std::size_t f = 0; f < c.families.size(); ++f) {
    const NuclearFamily& fam = c.families[f];
    NuclearFamily nf;
    nf.fid = fam.fid;
    nf.father = fam.father >= 0 ? new_index[fam.father] : -1;
    nf.mother = fam.mother >= 0 ? new_index[fam.mother] : -1;
    for (int o : fam.offspring)
      if (new_index[o] >= 0) nf.offspring.push_back(new_index[o]);
    if (nf.offspring.empty()) continue;
    out.cohort.families.push_back(std::move(nf));
    out.family_orig.push_back(in.family_orig[f]);
  }
  std::vector<char> in_family(out.cohort.people.size(), 0);
  for (const auto& fam : out.cohort.families) {
    if (fam.father >= 0) in_family[fam.father] = 1;
    if (fam.mother >= 0) in_family[fam.mother] = 1;
    for (int o : fam.offspring) in_family[o] = 1;
  }
  for (std::size_t i = 0; i < out.cohort.people.size(); ++i)
    if (!in_family[i] && !out.cohort.people[i].is_offspring())
      out.cohort.singletons.push_back(int(i));
  for (std::size_t m = 0; m < c.n_markers(); ++m)
    if (keep_marker[m]) {
      out.cohort.markers.push_back(c.markers[m]);
      out.marker_orig.push_back(in.marker_orig[m]);
    }
  out.cohort.trait_kind = c.trait_kind;
  out.cohort.allocate_genotypes();
  std::size_t mm = 0;
  for (std::size_t m = 0; m < c.n_markers(); ++m) {
    if (!keep_marker[m]) continue;
    for (std::size_t i = 0; i < c.n_people(); ++i)
      if (new_index[i] >= 0)
        out.cohort.set_code(mm, std::size_t(new_index[i]), c.code(m, i));
    ++mm;
  }
  out.cohort.finalize();
  return out;
}

}  // namespace

QcOutcome apply_filters(const Cohort& cohort, const QcConfig& config, int threads) {
  config.validate();
  QcOutcome out;
  QcReport& rep = out.report;
  rep.markers.resize(cohort.n_markers());
  for (std::size_t m = 0; m < cohort.n_markers(); ++m)
    rep.markers[m].id = cohort.markers[m].id;
  rep.persons.resize(cohort.n_people());
  for (std::size_t i = 0; i < cohort.n_people(); ++i)
    rep.persons[i].iid = cohort.people[i].id;
  rep.families.resize(cohort.families.size());
  for (std::size_t f = 0; f < cohort.families.size(); ++f)
    rep.families[f].fid = cohort.families[f].fid;
  for (const auto& fam : cohort.families) {
    if (fam.father >= 0) rep.persons[fam.father].fid = fam.fid;
    if (fam.mother >= 0) rep.persons[fam.mother].fid = fam.fid;
    for (int o : fam.offspring) rep.persons[o].fid = fam.fid;
  }

  WorkState state;
  state.cohort = cohort;
  state.marker_orig.resize(cohort.n_markers());
  std::iota(state.marker_orig.begin(), state.marker_orig.end(), 0);
  state.person_orig.resize(cohort.n_people());
  std::iota(state.person_orig.begin(), state.person_orig.end(), 0);
  state.family_orig.resize(cohort.families.size());
  std::iota(state.family_orig.begin(), state.family_orig.end(), 0);

  for (;;) {
    ++rep.passes;
    Cohort& c = state.cohort;
    const std::size_t nm = c.n_markers();
    const std::size_t np = c.n_people();
    const std::size_t nf = c.families.size();
    bool changed = false;
    std::vector<char> keep_person(np, 1), keep_marker(nm, 1);

    // 1. person call rate
    if (nm > 0) {
      for (std::size_t i = 0; i < np; ++i) {
        std::size_t called = 0;
        for (std::size_t m = 0; m < nm; ++m)
          if (c.code(m, i) != kMissingCode) ++called;
        const double rate = double(called) / double(nm);
        rep.persons[state.person_orig[i]].call_rate = rate;
        if (rate < config.min_person_call_rate) {
          keep_person[i] = 0;
          rep.persons[state.person_orig[i]].excluded = true;
          changed = true;
        }
      }
    }

    // 2-4. per-marker filters on the remaining persons
    std::vector<char> marker_changed(nm, 0);
    parallel_for(nm, threads, [&](std::size_t m) {
      auto& row = rep.markers[state.marker_orig[m]];
      std::size_t called = 0, eligible = 0;
      long long n_hom1 = 0, n_het = 0, n_hom2 = 0;
      for (std::size_t i = 0; i < np; ++i) {
        if (!keep_person[i]) continue;
        ++eligible;
        const std::uint8_t g = c.code(m, i);
        if (g == kMissingCode) continue;
        ++called;
        if (c.is_founder(i)) {
          if (g == 0)
            ++n_hom1;
          else if (g == 1)
            ++n_het;
          else
            ++n_hom2;
        }
      }
      const double rate = eligible > 0 ? double(called) / double(eligible) : 0.0;
      const long long founders = n_hom1 + n_het + n_hom2;
      const double f2 =
          founders > 0 ? double(2 * n_hom2 + n_het) / double(2 * founders) : 0.0;
      const double maf = founders > 0 ? std::min(f2, 1.0 - f2) : 0.0;
      const double hwe_p = founders > 0 ? hwe_exact_test(n_hom1, n_het, n_hom2) : 1.0;
      row.call_rate = rate;
      row.maf = maf;
      row.hwe_p = hwe_p;
      if (rate < config.min_marker_call_rate) {
        row.excluded = true;
        row.reason = ExclusionReason::marker_call_rate;
      } else if (maf < config.min_maf) {
        row.excluded = true;
        row.reason = ExclusionReason::maf;
      } else if (hwe_p < config.hwe_alpha) {
        row.excluded = true;
        row.reason = ExclusionReason::hwe;
      } else {
        return;
      }
      keep_marker[m] = 0;
      marker_changed[m] = 1;
    });
    for (std::size_t m = 0; m < nm; ++m)
      if (marker_changed[m]) changed = true;

    // 5. Mendelian screen on what survives the marker/person filters
    {
      WorkState screened = subset(state, keep_person, keep_marker);
      const Cohort& sc = screened.cohort;
      const auto errors = mendel_screen(sc, threads);
      std::vector<char> drop_family(sc.families.size(), 0);
      std::vector<char> keep_marker2(sc.n_markers(), 1);
      for (std::size_t m = 0; m < sc.n_markers(); ++m) {
        auto& row = rep.markers[screened.marker_orig[m]];
        row.mendel_errors = errors.errors_per_marker[m];
        if (errors.errors_per_marker[m] > config.max_mendel_errors_per_marker) {
          row.excluded = true;
          row.reason = ExclusionReason::mendel_marker;
          keep_marker2[m] = 0;
          changed = true;
        }
      }
      for (std::size_t f = 0; f < sc.families.size(); ++f) {
        auto& row = rep.families[screened.family_orig[f]];
        row.mendel_errors = errors.errors_per_family[f];
        if (errors.errors_per_family[f] > config.max_mendel_errors_per_family) {
          row.excluded = true;
          drop_family[f] = 1;
          changed = true;
        }
      }
      // delete flagged genotype sets on surviving markers/families
      WorkState next = std::move(screened);
      Cohort& nc = next.cohort;
      for (const auto& [m, f] : errors.flagged) {
        if (!keep_marker2[m] || drop_family[f]) continue;
        const NuclearFamily& fam = nc.families[f];
        bool any = false;
        auto wipe = [&](int person) {
          if (person >= 0 && nc.code(m, person) != kMissingCode) {
            nc.set_code(m, person, kMissingCode);
            any = true;
          }
        };
        wipe(fam.father);
        wipe(fam.mother);
        for (int o : fam.offspring) wipe(o);
        if (any) {
          ++rep.genotypes_deleted;
          changed = true;
        }
      }
      // drop excluded families' members (parents only if no other family
      // still references them), then excluded markers
      std::vector<char> keep_person2(nc.n_people(), 1);
      if (std::count(drop_family.begin(), drop_family.end(), char(1)) > 0) {
        std::vector<int> parent_refs(nc.n_people(), 0);
        for (std::size_t f = 0; f < nc.families.size(); ++f) {
          if (drop_family[f]) continue;
          if (nc.families[f].father >= 0) parent_refs[nc.families[f].father]++;
          if (nc.families[f].mother >= 0) parent_refs[nc.families[f].mother]++;
        }
        for (std::size_t f = 0; f < nc.families.size(); ++f) {
          if (!drop_family[f]) continue;
          for (int o : nc.families[f].offspring) keep_person2[o] = 0;
          if (nc.families[f].father >= 0 && parent_refs[nc.families[f].father] == 0)
            keep_person2[nc.families[f].father] = 0;
          if (nc.families[f].mother >= 0 && parent_refs[nc.families[f].mother] == 0)
            keep_person2[nc.families[f].mother] = 0;
        }
        for (std::size_t i = 0; i < nc.n_people(); ++i)
          if (!keep_person2[i]) rep.persons[next.person_orig[i]].excluded = true;
      }
      state = subset(next, keep_person2, keep_marker2);
    }

    if (!changed) break;
  }

  out.clean = std::move(state.cohort);
  return out;
}

void QcReport::write_tsv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "## summary\n";
  out << "markers_total\t" << markers.size() << '\n';
  out << "markers_excluded\t" << excluded_markers() << '\n';
  out << "persons_total\t" << persons.size() << '\n';
  out << "persons_excluded\t" << excluded_persons() << '\n';
  out << "families_total\t" << families.size() << '\n';
  out << "families_excluded\t" << excluded_families() << '\n';
  out << "genotype_sets_deleted\t" << genotypes_deleted << '\n';
  out << "cascade_passes\t" << passes << '\n';
  out << "## markers\n";
  out << "marker_id\tcall_rate\tmaf\thwe_p\tmendel_errors\texcluded\treason\n";
  char buf[128];
  for (const auto& r : markers) {
    std::snprintf(buf, sizeof(buf), "%.6g\t%.6g\t%.6g", r.call_rate, r.maf, r.hwe_p);
    out << r.id << '\t' << buf << '\t' << r.mendel_errors << '\t'
        << (r.excluded ? "yes" : "no") << '\t'
        << (r.excluded ? to_string(r.reason) : "-") << '\n';
  }
  out << "## persons\n";
  out << "fid\tiid\tcall_rate\texcluded\n";
  for (const auto& r : persons) {
    std::snprintf(buf, sizeof(buf), "%.6g", r.call_rate);
    out << (r.fid.empty() ? "-" : r.fid) << '\t' << r.iid << '\t' << buf << '\t'
        << (r.excluded ? "yes" : "no") << '\n';
  }
  out << "## families\n";
  out << "fid\tmendel_errors\texcluded\n";
  for (const auto& r : families)
    out << r.fid << '\t' << r.mendel_errors << '\t' << (r.excluded ? "yes" : "no")
        << '\n';
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace famscan::qc
