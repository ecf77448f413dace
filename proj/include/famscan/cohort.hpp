#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "famscan/types.hpp"

namespace famscan {

inline constexpr std::uint8_t kMissingCode = 0xFF;

struct MarkerInfo {
  std::string id;
  std::string chrom;
  long long position = 0;
  // The two observed allele labels; a2 == 0 for a monomorphic marker.
  // Genotype codes count copies of a2.
  Allele a1 = 0;
  Allele a2 = 0;

  bool has_allele(Allele x) const { return x == a1 || (a2 != 0 && x == a2); }
};

struct Person {
  std::string id;
  std::string father_id = "0";  // "0" = no parent recorded
  std::string mother_id = "0";
  int sex = 0;  // 0 unknown, 1 male, 2 female
  Trait trait;

  bool is_offspring() const { return father_id != "0" || mother_id != "0"; }
};

// All offspring sharing one (possibly ungenotyped) parent pair. Parent
// indices are -1 when the referenced parent has no data row.
struct NuclearFamily {
  std::string fid;
  int father = -1;
  int mother = -1;
  std::vector<int> offspring;

  int n_parent_rows() const { return int(father >= 0) + int(mother >= 0); }
};

// Immutable after finalize(); per-marker workers share it read-only.
// Genotypes are stored marker-major as counts of the marker's a2 allele.
class Cohort {
 public:
  std::vector<Person> people;
  std::vector<NuclearFamily> families;
  std::vector<int> singletons;  // person indices outside every family
  std::vector<MarkerInfo> markers;
  TraitKind trait_kind = TraitKind::binary;

  std::size_t n_people() const { return people.size(); }
  std::size_t n_markers() const { return markers.size(); }

  std::uint8_t code(std::size_t marker, std::size_t person) const {
    return geno_[marker * people.size() + person];
  }
  void set_code(std::size_t marker, std::size_t person, std::uint8_t c) {
    geno_[marker * people.size() + person] = c;
  }
  const std::uint8_t* marker_row(std::size_t marker) const {
    return geno_.data() + marker * people.size();
  }

  Genotype genotype_at(std::size_t marker, std::size_t person) const {
    const std::uint8_t c = code(marker, person);
    if (c == kMissingCode) return Genotype::missing();
    const MarkerInfo& m = markers[marker];
    switch (c) {
      case 0:
        return Genotype::of(m.a1, m.a1);
      case 1:
        return Genotype::of(m.a1, m.a2);
      default:
        return Genotype::of(m.a2, m.a2);
    }
  }

  bool is_founder(std::size_t person) const { return !people[person].is_offspring(); }

  // a2-allele frequency among genotyped founders; -1 if no founder calls.
  double founder_freq(std::size_t marker) const;

  // Risk allele for a marker: explicit override, else the minor allele
  // among founders (a2 on ties / monomorphic markers).
  Allele risk_allele_for(std::size_t marker, Allele override_allele = 0) const;

  void allocate_genotypes() {
    geno_.assign(people.size() * markers.size(), kMissingCode);
  }
  // Validates invariants and builds derived state. Throws DataError.
  void finalize();

  // Structural + semantic equality (genotypes compared as allele pairs, so
  // the internal allele-code basis does not matter).
  bool same_data(const Cohort& other) const;

 private:
  std::vector<std::uint8_t> geno_;
};

// One parsed pedigree row: ids, sex, phenotype text and allele pairs.
struct PedRecord {
  std::string fid, iid, pat, mat;
  int sex = 0;
  std::string pheno;
  std::vector<std::pair<char, char>> alleles;
};

struct MapRecord {
  std::string chrom;
  std::string id;
  long long position = 0;
};

// Assembles a Cohort, partitioning offspring by (fid, pat, mat), detecting
// binary vs quantitative traits, and assigning per-marker allele labels from
// the observed data. Throws DataError on malformed input.
Cohort build_cohort(const std::vector<PedRecord>& peds,
                    const std::vector<MapRecord>& map);

}  // namespace famscan
