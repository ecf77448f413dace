#include "famscan/cohort.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace famscan {

double Cohort::founder_freq(std::size_t marker) const {
  long long n2 = 0, total = 0;
  for (std::size_t i = 0; i < people.size(); ++i) {
    if (!is_founder(i)) continue;
    const std::uint8_t c = code(marker, i);
    if (c == kMissingCode) continue;
    n2 += c;
    total += 2;
  }
  return total > 0 ? double(n2) / double(total) : -1.0;
}

Allele Cohort::risk_allele_for(std::size_t marker, Allele override_allele) const {
  const MarkerInfo& m = markers[marker];
  if (override_allele != 0) {
    if (!m.has_allele(override_allele))
      throw DataError(std::string("risk allele '") + override_allele +
                      "' not observed at marker " + m.id);
    return override_allele;
  }
  if (m.a2 == 0) return m.a1;
  const double f2 = founder_freq(marker);
  if (f2 < 0.0) return m.a2;
  return f2 <= 0.5 ? m.a2 : m.a1;
}

void Cohort::finalize() {
  if (geno_.size() != people.size() * markers.size())
    throw DataError("cohort: genotype matrix size mismatch");
  std::unordered_set<std::string> marker_ids;
  for (const auto& m : markers) {
    if (m.position < 0) throw DataError("marker " + m.id + ": negative position");
    if (!marker_ids.insert(m.id).second)
      throw DataError("duplicate marker id " + m.id);
  }
  std::vector<char> in_family(people.size(), 0);
  for (const auto& fam : families) {
    if (fam.offspring.empty())
      throw DataError("family " + fam.fid + ": no offspring");
    if (fam.father >= 0) in_family[fam.father] = 1;
    if (fam.mother >= 0) in_family[fam.mother] = 1;
    for (int o : fam.offspring) in_family[o] = 1;
  }
  for (int s : singletons)
    if (in_family[s]) throw DataError("singleton also member of a family");
}

bool Cohort::same_data(const Cohort& other) const {
  if (people.size() != other.people.size() || markers.size() != other.markers.size())
    return false;
  if (trait_kind != other.trait_kind) return false;
  for (std::size_t i = 0; i < people.size(); ++i) {
    const Person &a = people[i], &b = other.people[i];
    if (a.id != b.id || a.father_id != b.father_id || a.mother_id != b.mother_id ||
        a.sex != b.sex || !(a.trait == b.trait))
      return false;
  }
  for (std::size_t m = 0; m < markers.size(); ++m) {
    if (markers[m].id != other.markers[m].id ||
        markers[m].chrom != other.markers[m].chrom ||
        markers[m].position != other.markers[m].position)
      return false;
    for (std::size_t i = 0; i < people.size(); ++i)
      if (genotype_at(m, i) != other.genotype_at(m, i)) return false;
  }
  if (families.size() != other.families.size()) return false;
  for (std::size_t f = 0; f < families.size(); ++f) {
    if (families[f].fid != other.families[f].fid ||
        families[f].father != other.families[f].father ||
        families[f].mother != other.families[f].mother ||
        families[f].offspring != other.families[f].offspring)
      return false;
  }
  return true;
}

namespace {

bool looks_binary(const std::vector<PedRecord>& peds) {
  for (const auto& r : peds)
    if (r.pheno != "0" && r.pheno != "1" && r.pheno != "2" && r.pheno != "-9")
      return false;
  return true;
}

Trait parse_trait(const std::string& s, TraitKind kind) {
  if (kind == TraitKind::binary) {
    if (s == "1") return Trait::of(0.0);
    if (s == "2") return Trait::of(1.0);
    return Trait::none();  // 0 / -9
  }
  if (s == "-9") return Trait::none();
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return Trait::of(v);
  } catch (const std::exception&) {
    throw DataError("unparseable phenotype value '" + s + "'");
  }
}

}  // namespace

Cohort build_cohort(const std::vector<PedRecord>& peds,
                    const std::vector<MapRecord>& map) {
  Cohort c;
  c.markers.reserve(map.size());
  for (const auto& m : map) {
    MarkerInfo info;
    info.id = m.id;
    info.chrom = m.chrom;
    info.position = m.position;
    c.markers.push_back(std::move(info));
  }

  c.trait_kind = looks_binary(peds) ? TraitKind::binary : TraitKind::quantitative;

  std::unordered_map<std::string, int> row_of;  // "fid\tiid" -> person index
  row_of.reserve(peds.size());
  c.people.reserve(peds.size());
  for (const auto& r : peds) {
    if (r.alleles.size() != map.size())
      throw DataError("person " + r.fid + ":" + r.iid + ": " +
                      std::to_string(r.alleles.size()) + " genotype columns for " +
                      std::to_string(map.size()) + " markers");
    const std::string key = r.fid + "\t" + r.iid;
    if (!row_of.emplace(key, int(c.people.size())).second)
      throw DataError("duplicate person id " + r.fid + ":" + r.iid);
    Person p;
    p.id = r.iid;
    p.father_id = r.pat.empty() ? "0" : r.pat;
    p.mother_id = r.mat.empty() ? "0" : r.mat;
    p.sex = r.sex;
    p.trait = parse_trait(r.pheno, c.trait_kind);
    if (p.father_id == r.iid || p.mother_id == r.iid)
      throw DataError("person " + r.fid + ":" + r.iid + " listed as own parent");
    if (p.father_id != "0" && p.father_id == p.mother_id)
      throw DataError("person " + r.fid + ":" + r.iid +
                      ": father and mother are the same person");
    c.people.push_back(std::move(p));
  }

  // Partition offspring by (fid, pat, mat). A parent id without a data row
  // stands for an ungenotyped parent; a parent row must live in the same fid.
  std::map<std::tuple<std::string, std::string, std::string>, NuclearFamily> fams;
  std::vector<char> is_parent_row(c.people.size(), 0);
  for (std::size_t i = 0; i < peds.size(); ++i) {
    const std::string pat = peds[i].pat.empty() ? "0" : peds[i].pat;
    const std::string mat = peds[i].mat.empty() ? "0" : peds[i].mat;
    if (pat == "0" && mat == "0") continue;
    const std::string& fid = peds[i].fid;
    auto key = std::make_tuple(fid, pat, mat);
    NuclearFamily& fam = fams[key];
    if (fam.offspring.empty()) {
      fam.fid = fid;
      if (pat != "0") {
        auto it = row_of.find(fid + "\t" + pat);
        if (it != row_of.end()) {
          fam.father = it->second;
          is_parent_row[it->second] = 1;
        }
      }
      if (mat != "0") {
        auto it = row_of.find(fid + "\t" + mat);
        if (it != row_of.end()) {
          fam.mother = it->second;
          is_parent_row[it->second] = 1;
        }
      }
    }
    fam.offspring.push_back(int(i));
  }
  for (auto& [key, fam] : fams) {
    if (fam.father >= 0 && c.people[fam.father].is_offspring())
      throw DataError("family " + fam.fid +
                      ": multigenerational pedigree (parent is also an offspring)");
    if (fam.mother >= 0 && c.people[fam.mother].is_offspring())
      throw DataError("family " + fam.fid +
                      ": multigenerational pedigree (parent is also an offspring)");
    c.families.push_back(std::move(fam));
  }

  for (std::size_t i = 0; i < c.people.size(); ++i)
    if (!c.people[i].is_offspring() && !is_parent_row[i])
      c.singletons.push_back(int(i));

  // Assign marker alleles from the observed calls, then code genotypes.
  c.allocate_genotypes();
  for (std::size_t m = 0; m < map.size(); ++m) {
    Allele a1 = 0, a2 = 0;
    for (const auto& r : peds) {
      for (char al : {r.alleles[m].first, r.alleles[m].second}) {
        if (is_missing_allele(al)) continue;
        if (a1 == 0) {
          a1 = al;
        } else if (al != a1 && a2 == 0) {
          a2 = al;
        } else if (al != a1 && al != a2) {
          throw DataError("marker " + c.markers[m].id +
                          ": more than two alleles observed");
        }
      }
    }
    c.markers[m].a1 = a1;
    c.markers[m].a2 = a2;
    for (std::size_t i = 0; i < peds.size(); ++i) {
      const Genotype g =
          Genotype::of(peds[i].alleles[m].first, peds[i].alleles[m].second);
      if (g.is_missing()) continue;
      c.set_code(m, i, std::uint8_t(g.count_allele(a2)));
    }
  }

  c.finalize();
  return c;
}

}  // namespace famscan
