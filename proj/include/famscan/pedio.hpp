#pragma once

#include <string>
#include <vector>

#include "famscan/cohort.hpp"

namespace famscan {

// Whitespace-delimited pedigree / marker-map text formats; the exact layout
// is documented in docs/formats.md. All readers throw DataError naming the
// file and line on malformed input.
std::vector<PedRecord> read_ped(const std::string& path);
std::vector<MapRecord> read_map(const std::string& path);

Cohort load_cohort(const std::string& ped_path, const std::string& map_path);

void write_ped(const Cohort& cohort, const std::string& path);
void write_map(const Cohort& cohort, const std::string& path);

}  // namespace famscan
