#include "hilbert/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hilbert {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

Mat rows_to_matrix(const std::vector<std::vector<double>>& rows,
                   const std::string& path, int first_line) {
  const std::size_t n = rows.size();
  for (const auto& row : rows) {
    if (row.size() != n)
      throw ArgumentError(path + ": matrix block near line " +
                          std::to_string(first_line) + " is not square (" +
                          std::to_string(n) + " rows, a row has " +
                          std::to_string(row.size()) + " entries)");
  }
  Mat m(static_cast<int>(n), static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return m;
}

}  // namespace

GeneratorFile load_generators(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open generator file '" + path + "'");
  GeneratorFile out;
  std::vector<std::vector<double>> rows;
  std::string pending_label;
  std::string line;
  int lineno = 0;
  int block_start = 0;
  auto flush = [&]() {
    if (rows.empty()) return;
    out.matrices.push_back(rows_to_matrix(rows, path, block_start));
    out.labels.push_back(pending_label.empty()
                             ? "g" + std::to_string(out.matrices.size())
                             : pending_label);
    rows.clear();
    pending_label.clear();
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) {
      flush();
      continue;
    }
    if (t.front() == '#') {
      const std::string label = trim(t.substr(1));
      if (!label.empty() && rows.empty()) pending_label = label;
      continue;
    }
    if (rows.empty()) block_start = lineno;
    std::vector<double> row;
    std::istringstream rs(t);
    std::string tok;
    while (rs >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        throw ArgumentError(path + " line " + std::to_string(lineno) +
                            ": not a number: '" + tok + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  flush();
  if (out.matrices.empty())
    throw ArgumentError("generator file '" + path + "' holds no matrices");
  return out;
}

ConvexDomain build_domain(const DomainSpec& spec) {
  if (spec.kind == "pnorm")
    return ConvexDomain::pnorm_ball(spec.p, spec.radius, spec.dim);
  if (spec.kind == "orbit-hull") {
    if (spec.points.empty())
      throw ArgumentError("orbit-hull domain needs a 'points' cloud");
    const int dim = spec.dim;
    const int count = static_cast<int>(spec.points.size()) / dim;
    Mat cloud(count, dim);
    for (int i = 0; i < count; ++i)
      for (int j = 0; j < dim; ++j) cloud(i, j) = spec.points[i * dim + j];
    return ConvexDomain::orbit_hull(cloud);
  }
  // ellipsoid
  if (spec.matrix.empty()) return ConvexDomain::unit_ball(spec.dim);
  Mat q(spec.dim, spec.dim);
  for (int i = 0; i < spec.dim; ++i)
    for (int j = 0; j < spec.dim; ++j)
      q(i, j) = spec.matrix[static_cast<std::size_t>(i) * spec.dim + j];
  return ConvexDomain::ellipsoid(q);
}

ConvexDomain load_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open domain file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return build_domain(parse_config(buf.str()).domain);
}

GroupPresentation build_group(const GroupSpec& spec,
                              const ConvexDomain& domain) {
  if (spec.generators.empty())
    throw ArgumentError("config names no generator file");
  GeneratorFile gf = load_generators(spec.generators);
  GroupPresentation::Flags flags;
  flags.assume_free = spec.free;
  flags.expects_parabolics = spec.parabolics;
  return GroupPresentation(std::move(gf.matrices), std::move(gf.labels),
                           domain, flags);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_table_csv(const std::string& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write '" + path + "'");
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
}

void write_measure_csv(const std::string& path, const AtomicMeasure& mu) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write '" + path + "'");
  auto vec_text = [](const Vec& v) {
    std::string s;
    for (int i = 0; i < v.size(); ++i) {
      if (i) s += ' ';
      s += format_double(v[i]);
    }
    return s;
  };
  out << "# s = " << format_double(mu.s) << '\n';
  out << "# radius = " << format_double(mu.radius) << '\n';
  out << "# basepoint = " << vec_text(mu.basepoint) << '\n';
  out << "# orbit_basepoint = " << vec_text(mu.orbit_basepoint) << '\n';
  out << "# normalization = " << format_double(mu.normalization) << '\n';
  out << "# normalization_mode = " << mu.normalization_mode << '\n';
  out << "# atoms = " << mu.atoms.size() << '\n';
  const int dim = static_cast<int>(mu.basepoint.size());
  for (int i = 0; i < dim; ++i) out << 'x' << i << ',';
  out << "weight,displacement\n";
  for (const Atom& a : mu.atoms) {
    // Shipped domains all use chart 0, so the affine coordinates are the
    // trailing homogeneous entries over the first.
    const Vec coords = a.point.coords();
    const double scale = coords[0];
    for (int i = 0; i < dim; ++i)
      out << format_double(coords[i + 1] / scale) << ',';
    out << format_double(a.weight) << ',' << format_double(a.displacement)
        << '\n';
  }
}

std::uint64_t config_hash(const std::string& canonical_text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string write_run_outputs(const std::string& dir,
                              const ExperimentResult& result,
                              const std::string& config_text, bool force) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  if (fs::exists(root)) {
    if (!fs::is_directory(root))
      throw ArgumentError("output path '" + dir + "' exists and is not a "
                          "directory");
    if (!fs::is_empty(root) && !force)
      throw ArgumentError("output directory '" + dir +
                          "' is not empty; pass --force to overwrite");
  } else {
    fs::create_directories(root);
  }

  {
    std::ofstream cfg(root / "config.cfg");
    cfg << config_text;
  }
  for (const Table& t : result.tables)
    write_table_csv((root / (t.name + ".csv")).string(), t);

  const fs::path manifest_path = root / "manifest.txt";
  std::ofstream m(manifest_path);
  if (!m) throw ArgumentError("cannot write manifest in '" + dir + "'");
  char hash_hex[24];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(config_hash(config_text)));
  m << "experiment = " << result.id << '\n';
  m << "config_hash = " << hash_hex << '\n';
  m << "wall_seconds = " << format_double(result.wall_seconds) << '\n';
  m << "all_pass = " << (result.all_pass() ? "true" : "false") << '\n';
  m << '\n';
  for (const auto& [key, value] : result.config)
    m << "param " << key << " = " << value << '\n';
  m << '\n';
  for (const NamedFit& f : result.fits)
    m << "fit " << f.name << " = " << format_double(f.value) << " stderr "
      << format_double(f.stderr_value) << " window ["
      << format_double(f.window_lo) << ", " << format_double(f.window_hi)
      << "]\n";
  m << '\n';
  for (const Table& t : result.tables)
    m << "table " << t.name << " = " << t.name << ".csv\n";
  m << '\n';
  for (const Verdict& v : result.verdicts)
    m << "verdict " << v.criterion << " = " << (v.pass ? "PASS" : "FAIL")
      << "  # " << v.details << '\n';
  return manifest_path.string();
}

}  // namespace hilbert
