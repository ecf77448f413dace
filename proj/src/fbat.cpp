#include "famscan/fbat.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "famscan/mendel.hpp"
#include "famscan/parallel.hpp"
#include "famscan/stats.hpp"

namespace famscan::fbat {

const char* to_string(ResultStatus s) {
  switch (s) {
    case ResultStatus::ok:
      return "ok";
    case ResultStatus::monomorphic:
      return "monomorphic";
    case ResultStatus::no_informative:
      return "no_informative";
    case ResultStatus::low_information:
      return "low_info";
  }
  return "?";
}

double resolve_offset(const Cohort& cohort, const OffsetSpec& offset) {
  if (offset.kind == OffsetSpec::Kind::fixed) {
    if (!std::isfinite(offset.value)) throw DataError("offset must be finite");
    if (cohort.trait_kind == TraitKind::binary &&
        (offset.value < 0.0 || offset.value > 1.0))
      throw DataError("binary-trait offset must lie in [0,1]");
    return offset.value;
  }
  double sum = 0.0, min = 0.0, max = 0.0;
  std::size_t n = 0;
  for (const auto& fam : cohort.families)
    for (int o : fam.offspring) {
      const Trait& t = cohort.people[o].trait;
      if (t.missing) continue;
      if (n == 0) min = max = t.value;
      min = std::min(min, t.value);
      max = std::max(max, t.value);
      sum += t.value;
      ++n;
    }
  if (n == 0) throw DataError("no offspring traits available for the auto offset");
  if (min == max)
    throw DataError(
        "offspring traits are constant; the auto offset is undefined under "
        "trait-dependent ascertainment - supply a fixed offset (--offset)");
  return sum / double(n);
}

namespace {

struct MarkerTables {
  // E[X|P] and Var(X|P) for parent codes in {0,1,2} (count of a2 basis)
  double e[3][3];
  double v[3][3];
  std::array<int, 3> code;  // offspring a2-count -> X
};

MarkerTables build_tables(ModelKind kind, bool risk_is_a2) {
  MarkerTables t;
  for (int c = 0; c < 3; ++c) {
    const int risk_count = risk_is_a2 ? c : 2 - c;
    t.code[c] = code_from_count(kind, risk_count);
  }
  for (int f = 0; f < 3; ++f)
    for (int m = 0; m < 3; ++m) {
      const auto d = mendel::offspring_distribution_counts(f, m, t.code);
      t.e[f][m] = d.mean_d();
      t.v[f][m] = d.variance_d();
    }
  return t;
}

enum class WeightMode {
  trait,         // w = y - mu, offspring with missing traits skipped
  affected_unit, // affected offspring only, w = 1 (TDT form)
  all_unit,      // every genotyped offspring, w = 1 (transmission pattern)
};

// Accumulates one marker.
FbatResult marker_statistic(const Cohort& cohort, std::size_t m,
                            const FbatOptions& opts, double mu,
                            WeightMode mode, bool parents_only) {
  FbatResult r;
  r.marker_id = cohort.markers[m].id;
  if (cohort.markers[m].a2 == 0) {
    r.status = ResultStatus::monomorphic;
    r.p = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const Allele risk = cohort.risk_allele_for(m, opts.risk_override);
  r.risk_allele = risk;
  const MarkerTables tab = build_tables(opts.model, risk == cohort.markers[m].a2);

  double u = 0.0, var0 = 0.0;
  int informative = 0;
  std::vector<int> sib_codes;
  std::vector<double> sib_w;
  for (const auto& fam : cohort.families) {
    const std::uint8_t fc =
        fam.father >= 0 ? cohort.code(m, fam.father) : kMissingCode;
    const std::uint8_t mc =
        fam.mother >= 0 ? cohort.code(m, fam.mother) : kMissingCode;
    const bool father_typed = fc != kMissingCode;
    const bool mother_typed = mc != kMissingCode;
    double fam_u = 0.0, fam_v = 0.0;
    if (father_typed && mother_typed) {
      const double e = tab.e[fc][mc];
      const double v = tab.v[fc][mc];
      if (v == 0.0) continue;
      for (int o : fam.offspring) {
        const std::uint8_t cc = cohort.code(m, o);
        if (cc == kMissingCode) continue;
        double w = 1.0;
        if (mode != WeightMode::all_unit) {
          const Trait& t = cohort.people[o].trait;
          if (t.missing) continue;
          if (mode == WeightMode::affected_unit) {
            if (t.value != 1.0) continue;
          } else {
            w = t.value - mu;
          }
        }
        fam_u += w * (tab.code[cc] - e);
        fam_v += w * w * v;
      }
    } else if (!father_typed && !mother_typed && !parents_only) {
      sib_codes.clear();
      sib_w.clear();
      for (int o : fam.offspring) {
        const std::uint8_t cc = cohort.code(m, o);
        if (cc == kMissingCode) continue;
        double w = 1.0;
        if (mode != WeightMode::all_unit) {
          const Trait& t = cohort.people[o].trait;
          if (t.missing) continue;
          if (mode == WeightMode::affected_unit) {
            if (t.value != 1.0) continue;
          } else {
            w = t.value - mu;
          }
        }
        sib_codes.push_back(cc);
        sib_w.push_back(w);
      }
      const int n = int(sib_codes.size());
      if (n < 2) continue;
      long long sx = 0, sxx = 0;
      for (int cc : sib_codes) {
        const int x = tab.code[cc];
        sx += x;
        sxx += (long long)x * x;
      }
      // multiset population variance and mean
      const double sig2 =
          double((long long)n * sxx - sx * sx) / (double(n) * double(n));
      if (sig2 == 0.0) continue;
      const double xbar = double(sx) / double(n);
      double wbar = 0.0;
      for (double w : sib_w) wbar += w;
      wbar /= double(n);
      double swc2 = 0.0;
      for (std::size_t i = 0; i < sib_w.size(); ++i) {
        const double wc = sib_w[i] - wbar;
        fam_u += wc * (tab.code[sib_codes[i]] - xbar);
        swc2 += wc * wc;
      }
      // permutation law: Var = sig2 * n/(n-1) * sum (w - wbar)^2
      fam_v = sig2 * double(n) / double(n - 1) * swc2;
    } else {
      continue;  // exactly one typed parent: excluded
    }
    if (fam_v > 0.0) {
      u += fam_u;
      var0 += fam_v;
      ++informative;
    }
  }

  r.n_informative = informative;
  r.u = u;
  r.var0 = var0;
  if (informative == 0 || var0 <= 0.0) {
    r.status = ResultStatus::no_informative;
    r.p = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.z = u / std::sqrt(var0);
  if (informative < opts.min_informative) {
    r.status = ResultStatus::low_information;
    r.p = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.p = stats::two_sided_p(r.z);
  }
  return r;
}

}  // namespace

FbatResult fbat_statistic(const Cohort& cohort, std::size_t marker,
                          const FbatOptions& opts) {
  const double mu = resolve_offset(cohort, opts.offset);
  return marker_statistic(cohort, marker, opts, mu, /*affected_only=*/false,
                          /*parents_only=*/false);
}

FbatResult tdt_statistic(const Cohort& cohort, std::size_t marker,
                         const FbatOptions& opts) {
  if (cohort.trait_kind != TraitKind::binary)
    throw DataError("tdt requires a binary (affection) trait");
  FbatOptions o = opts;
  o.model = ModelKind::additive;
  return marker_statistic(cohort, marker, o, /*mu=*/0.0, /*affected_only=*/true,
                          /*parents_only=*/true);
}

TransmissionCounts count_transmissions(const Cohort& cohort, std::size_t marker,
                                       Allele risk) {
  TransmissionCounts out;
  const MarkerInfo& info = cohort.markers[marker];
  if (info.a2 == 0) return out;
  const bool risk_is_a2 = risk == info.a2;
  for (const auto& fam : cohort.families) {
    if (fam.father < 0 || fam.mother < 0) continue;
    const std::uint8_t fc = cohort.code(marker, fam.father);
    const std::uint8_t mc = cohort.code(marker, fam.mother);
    if (fc == kMissingCode || mc == kMissingCode) continue;
    for (int o : fam.offspring) {
      const Trait& t = cohort.people[o].trait;
      if (t.missing || t.value != 1.0) continue;
      const std::uint8_t cc = cohort.code(marker, o);
      if (cc == kMissingCode) continue;
      // transmitted a2-count from each het parent; homozygote transmissions
      // are deterministic and uncounted
      int child = cc;
      int het_parents = 0;
      for (const std::uint8_t pc : {fc, mc}) {
        if (pc == 1)
          ++het_parents;
        else
          child -= pc / 2;  // forced contribution
      }
      if (het_parents == 0) continue;
      if (child < 0 || child > het_parents) continue;  // Mendel-inconsistent
      // child now holds total a2 transmitted by het parents (0..het_parents)
      const long long b2 = child;             // a2 transmissions from hets
      const long long nb2 = het_parents - child;  // a1 transmissions
      if (risk_is_a2) {
        out.b += b2;
        out.c += nb2;
      } else {
        out.b += nb2;
        out.c += b2;
      }
    }
  }
  return out;
}

namespace {

std::vector<FbatResult> scan_impl(const Cohort& cohort, const FbatOptions& opts,
                                  const std::vector<std::size_t>& subset, bool tdt) {
  std::vector<std::size_t> idx = subset;
  if (idx.empty()) {
    idx.resize(cohort.n_markers());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  }
  const double mu = tdt ? 0.0 : resolve_offset(cohort, opts.offset);
  if (tdt && cohort.trait_kind != TraitKind::binary)
    throw DataError("tdt requires a binary (affection) trait");
  FbatOptions o = opts;
  if (tdt) o.model = ModelKind::additive;
  std::vector<FbatResult> out(idx.size());
  parallel_for(idx.size(), opts.threads, [&](std::size_t i) {
    out[i] = marker_statistic(cohort, idx[i], o, mu, tdt, tdt);
  });
  return out;
}

}  // namespace

std::vector<FbatResult> scan(const Cohort& cohort, const FbatOptions& opts,
                             const std::vector<std::size_t>& subset) {
  return scan_impl(cohort, opts, subset, false);
}

std::vector<FbatResult> tdt_scan(const Cohort& cohort, const FbatOptions& opts,
                                 const std::vector<std::size_t>& subset) {
  return scan_impl(cohort, opts, subset, true);
}

void write_results_tsv(const Cohort& cohort, const std::vector<FbatResult>& results,
                       ModelKind model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "marker_id\tchrom\tpos\tmodel\tn_informative\tU\tvar0\tZ\tp\tstatus\n";
  char buf[256];
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(cohort.n_markers());
  for (std::size_t i = 0; i < cohort.n_markers(); ++i)
    index.emplace(cohort.markers[i].id, i);
  for (const auto& r : results) {
    const auto it = index.find(r.marker_id);
    const MarkerInfo* info = it != index.end() ? &cohort.markers[it->second] : nullptr;
    if (r.usable())
      std::snprintf(buf, sizeof(buf), "%d\t%.10g\t%.10g\t%.10g\t%.10g\t%s",
                    r.n_informative, r.u, r.var0, r.z, r.p, to_string(r.status));
    else if (r.status == ResultStatus::low_information)
      std::snprintf(buf, sizeof(buf), "%d\t%.10g\t%.10g\t%.10g\tNA\t%s",
                    r.n_informative, r.u, r.var0, r.z, to_string(r.status));
    else
      std::snprintf(buf, sizeof(buf), "%d\tNA\tNA\tNA\tNA\t%s", r.n_informative,
                    to_string(r.status));
    out << r.marker_id << '\t' << (info ? info->chrom : "?") << '\t'
        << (info ? info->position : -1) << '\t' << to_string(model) << '\t' << buf
        << '\n';
  }
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace famscan::fbat
