#include "famscan/pedio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace famscan {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line,
                       const std::string& what) {
  throw DataError(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

char parse_allele(const std::string& tok, const std::string& path, std::size_t line) {
  if (tok.size() != 1) fail(path, line, "allele token '" + tok + "' is not one character");
  return tok[0];
}

}  // namespace

std::vector<PedRecord> read_ped(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pedigree file " + path);
  std::vector<PedRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tok = split_ws(line);
    if (tok.empty() || tok[0].starts_with('#')) continue;
    if (tok.size() < 6) fail(path, lineno, "expected at least 6 columns");
    if ((tok.size() - 6) % 2 != 0)
      fail(path, lineno, "odd number of allele columns");
    PedRecord r;
    r.fid = tok[0];
    r.iid = tok[1];
    r.pat = tok[2];
    r.mat = tok[3];
    if (tok[4] == "0" || tok[4] == "1" || tok[4] == "2") {
      r.sex = tok[4][0] - '0';
    } else {
      fail(path, lineno, "sex column must be 0, 1 or 2");
    }
    r.pheno = tok[5];
    r.alleles.reserve((tok.size() - 6) / 2);
    for (std::size_t i = 6; i + 1 < tok.size(); i += 2)
      r.alleles.emplace_back(parse_allele(tok[i], path, lineno),
                             parse_allele(tok[i + 1], path, lineno));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<MapRecord> read_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open map file " + path);
  std::vector<MapRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tok = split_ws(line);
    if (tok.empty() || tok[0].starts_with('#')) continue;
    if (tok.size() != 3) fail(path, lineno, "expected CHROM MARKER_ID POSITION");
    MapRecord m;
    m.chrom = tok[0];
    m.id = tok[1];
    try {
      m.position = std::stoll(tok[2]);
    } catch (const std::exception&) {
      fail(path, lineno, "unparseable position '" + tok[2] + "'");
    }
    if (m.position < 0) fail(path, lineno, "negative position");
    out.push_back(std::move(m));
  }
  return out;
}

Cohort load_cohort(const std::string& ped_path, const std::string& map_path) {
  return build_cohort(read_ped(ped_path), read_map(map_path));
}

namespace {

std::string format_pheno(const Trait& t, TraitKind kind) {
  if (t.missing) return kind == TraitKind::binary ? "0" : "-9";
  if (kind == TraitKind::binary) return t.value == 1.0 ? "2" : "1";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", t.value);
  return buf;
}

}  // namespace

void write_ped(const Cohort& cohort, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  // Family ids: reconstruct each person's fid from family membership;
  // singletons use their own id as fid.
  std::vector<std::string> fid(cohort.n_people());
  for (const auto& fam : cohort.families) {
    if (fam.father >= 0) fid[fam.father] = fam.fid;
    if (fam.mother >= 0) fid[fam.mother] = fam.fid;
    for (int o : fam.offspring) fid[o] = fam.fid;
  }
  for (std::size_t i = 0; i < cohort.n_people(); ++i)
    if (fid[i].empty()) fid[i] = cohort.people[i].id;
  for (std::size_t i = 0; i < cohort.n_people(); ++i) {
    const Person& p = cohort.people[i];
    out << fid[i] << ' ' << p.id << ' ' << p.father_id << ' ' << p.mother_id << ' '
        << p.sex << ' ' << format_pheno(p.trait, cohort.trait_kind);
    for (std::size_t m = 0; m < cohort.n_markers(); ++m) {
      const Genotype g = cohort.genotype_at(m, i);
      if (g.is_missing())
        out << " 0 0";
      else
        out << ' ' << g.a << ' ' << g.b;
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed for " + path);
}

void write_map(const Cohort& cohort, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (const auto& m : cohort.markers)
    out << m.chrom << ' ' << m.id << ' ' << m.position << '\n';
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace famscan
