#pragma once

#include <optional>
#include <string>

namespace famscan {

// A biallelic marker allele is a single-character label ('A','C','G','T',
// '1','2', ...). '0' and 'N' denote a missing call.
using Allele = char;

inline bool is_missing_allele(char c) { return c == '0' || c == 'N' || c == '\0'; }

// Unordered allele pair; {0,0} is the (atomic) missing genotype. A genotype
// with one missing call is treated as fully missing at construction.
struct Genotype {
  Allele a = 0;
  Allele b = 0;

  static Genotype missing() { return {}; }
  static Genotype of(Allele x, Allele y) {
    if (is_missing_allele(x) || is_missing_allele(y)) return {};
    Genotype g;
    g.a = x < y ? x : y;
    g.b = x < y ? y : x;
    return g;
  }

  bool is_missing() const { return a == 0; }
  bool is_het() const { return !is_missing() && a != b; }
  bool is_hom() const { return !is_missing() && a == b; }
  bool has_allele(Allele x) const { return !is_missing() && (a == x || b == x); }
  int count_allele(Allele x) const {
    return is_missing() ? 0 : int(a == x) + int(b == x);
  }

  friend bool operator==(const Genotype& l, const Genotype& r) {
    return l.a == r.a && l.b == r.b;
  }
  friend bool operator!=(const Genotype& l, const Genotype& r) { return !(l == r); }
};

enum class ModelKind { additive, dominant, recessive };

const char* to_string(ModelKind k);
std::optional<ModelKind> parse_model_kind(const std::string& s);

// Maps a risk-allele count in {0,1,2} to the coded marker score X.
inline int code_from_count(ModelKind kind, int risk_count) {
  switch (kind) {
    case ModelKind::additive:
      return risk_count;
    case ModelKind::dominant:
      return risk_count >= 1 ? 1 : 0;
    case ModelKind::recessive:
      return risk_count == 2 ? 1 : 0;
  }
  return 0;
}

struct GeneticModel {
  ModelKind kind = ModelKind::additive;
  Allele risk_allele = 0;

  std::optional<int> code(const Genotype& g) const {
    if (g.is_missing()) return std::nullopt;
    return code_from_count(kind, g.count_allele(risk_allele));
  }
};

// Coded marker score with marker-allele validation; throws on an allele
// outside {a1, a2}.
std::optional<int> code_genotype(const Genotype& g, const GeneticModel& model,
                                 Allele marker_a1, Allele marker_a2);

enum class TraitKind { binary, quantitative };

// Binary traits store 0 (unaffected) / 1 (affected).
struct Trait {
  double value = 0.0;
  bool missing = true;

  static Trait none() { return {}; }
  static Trait of(double v) { return {v, false}; }
  bool is_affected() const { return !missing && value == 1.0; }

  friend bool operator==(const Trait& l, const Trait& r) {
    return l.missing == r.missing && (l.missing || l.value == r.value);
  }
};

// Thrown for malformed or inconsistent input data; the CLI maps it to
// exit code 1.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace famscan
