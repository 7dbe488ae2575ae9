#pragma once

#include <string>
#include <vector>

#include "hilbert/config.hpp"
#include "hilbert/experiments.hpp"

namespace hilbert {

// Generator matrix file: one matrix per block, one row per line with
// whitespace-separated entries, blocks separated by blank lines.  A comment
// line `# name` directly above a block names it; unnamed blocks get g1, g2,
// and so on.
struct GeneratorFile {
  std::vector<Mat> matrices;
  std::vector<std::string> labels;
};
GeneratorFile load_generators(const std::string& path);

ConvexDomain build_domain(const DomainSpec& spec);
// Reads a structured-text file holding a [domain] section.
ConvexDomain load_domain_file(const std::string& path);

GroupPresentation build_group(const GroupSpec& spec,
                              const ConvexDomain& domain);

std::string format_double(double v);  // 17 significant digits

void write_table_csv(const std::string& path, const Table& table);

// Atom list as CSV with a `# key = value` metadata header block.
void write_measure_csv(const std::string& path, const AtomicMeasure& mu);

// FNV-1a over the canonical config text.
std::uint64_t config_hash(const std::string& canonical_text);

// Creates the run directory (parents included) and writes config.cfg,
// manifest.txt, and one CSV per table.  A nonempty existing directory is
// refused unless force is set.  Returns the manifest path.
std::string write_run_outputs(const std::string& dir,
                              const ExperimentResult& result,
                              const std::string& config_text, bool force);

}  // namespace hilbert
