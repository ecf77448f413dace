#include "famscan/types.hpp"

#include <stdexcept>

namespace famscan {

const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::additive:
      return "additive";
    case ModelKind::dominant:
      return "dominant";
    case ModelKind::recessive:
      return "recessive";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(const std::string& s) {
  if (s == "additive") return ModelKind::additive;
  if (s == "dominant") return ModelKind::dominant;
  if (s == "recessive") return ModelKind::recessive;
  return std::nullopt;
}

std::optional<int> code_genotype(const Genotype& g, const GeneticModel& model,
                                 Allele marker_a1, Allele marker_a2) {
  if (g.is_missing()) return std::nullopt;
  auto in_set = [&](Allele x) { return x == marker_a1 || x == marker_a2; };
  if (!in_set(g.a) || !in_set(g.b))
    throw DataError(std::string("genotype allele '") + g.a + "'/'" + g.b +
                    "' outside marker allele set");
  if (!is_missing_allele(model.risk_allele) && !in_set(model.risk_allele))
    throw DataError(std::string("risk allele '") + model.risk_allele +
                    "' outside marker allele set");
  return model.code(g);
}

}  // namespace famscan
