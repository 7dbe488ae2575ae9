#include "hilbert/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hilbert/busemann.hpp"
#include "hilbert/classify.hpp"
#include "hilbert/io.hpp"
#include "hilbert/metric.hpp"
#include "hilbert/numerics.hpp"
#include "hilbert/oracles.hpp"

namespace hilbert {

namespace {

std::vector<double> parse_coords(std::string text) {
  for (char& c : text)
    if (c == ',') c = ' ';
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw ArgumentError("not a coordinate: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

Vec resolve_point(const std::vector<double>& coords, const ConvexDomain& dom,
                  const char* name) {
  if (coords.empty()) return dom.center();
  if (static_cast<int>(coords.size()) != dom.chart().affine_dim())
    throw ArgumentError(std::string(name) + " needs " +
                        std::to_string(dom.chart().affine_dim()) +
                        " coordinates");
  Vec p(static_cast<int>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i)
    p[static_cast<int>(i)] = coords[i];
  return p;
}

// The env knob reserves a thread count for the enumeration/measure loops;
// the current implementation is single-threaded, so it is validated and
// otherwise ignored.
void read_thread_env() {
  const char* v = std::getenv("HILBERT_THREADS");
  if (!v) return;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || n < 1)
    std::fprintf(stderr,
                 "warning: HILBERT_THREADS='%s' is not a positive integer; "
                 "ignored\n",
                 v);
}

CensusPath path_from_string(const std::string& s) {
  if (s == "axis") return CensusPath::Axis;
  if (s == "words") return CensusPath::FreeWords;
  return CensusPath::Auto;
}

int cmd_dist(const std::string& domain_path, const std::string& xs,
             const std::string& ys) {
  const ConvexDomain dom = load_domain_file(domain_path);
  const Vec x = resolve_point(parse_coords(xs), dom, "--x");
  const Vec y = resolve_point(parse_coords(ys), dom, "--y");
  std::printf("%.10g\n", hilbert_distance_affine(dom, x, y));
  return 0;
}

int cmd_group_info(const std::string& gen_path,
                   const std::string& domain_path, bool free_flag,
                   bool parabolics_flag) {
  const ConvexDomain dom = load_domain_file(domain_path);
  GroupSpec gspec;
  gspec.generators = gen_path;
  gspec.free = free_flag;
  gspec.parabolics = parabolics_flag;
  const GroupPresentation group = build_group(gspec, dom);
  const Vec o = dom.center();
  std::printf("domain: %s\n", dom.describe().c_str());
  std::printf("generators: %d supplied, %d with inverse closure\n",
              group.rank(), group.generator_count());
  for (int i = 0; i < group.generator_count(); ++i) {
    const SpectralData sd =
        classify(ProjectiveTransform(group.generator(i)), dom);
    const char* kind = sd.type == IsometryClass::Hyperbolic ? "hyperbolic"
                       : sd.type == IsometryClass::Parabolic ? "parabolic"
                                                             : "elliptic";
    const double disp = hilbert_distance_affine(
        dom, o,
        dom.chart().to_affine_raw(group.generator(i) * dom.chart().lift(o)));
    if (sd.type == IsometryClass::Hyperbolic)
      std::printf("  %-12s %-10s length %.6f  displacement %.6f\n",
                  group.label(i).c_str(), kind, sd.translation_length, disp);
    else
      std::printf("  %-12s %-10s displacement %.6f\n",
                  group.label(i).c_str(), kind, disp);
  }
  std::printf("max generator displacement at center: %.6f\n",
              group.max_generator_displacement(o));
  return 0;
}

int cmd_ps_measure(const std::string& gen_path, const std::string& domain_path,
                   bool free_flag, bool parabolics_flag, double s,
                   double delta, double radius, const std::string& xs,
                   const std::string& os, const std::string& out_path,
                   bool force) {
  const ConvexDomain dom = load_domain_file(domain_path);
  GroupSpec gspec;
  gspec.generators = gen_path;
  gspec.free = free_flag;
  gspec.parabolics = parabolics_flag;
  const GroupPresentation group = build_group(gspec, dom);
  const Vec o = resolve_point(parse_coords(os), dom, "--o");
  const Vec x = xs.empty() ? o : resolve_point(parse_coords(xs), dom, "--x");
  if (delta < 0.0) {
    const CriticalExponentEstimate est =
        estimate_critical_exponent(group, o, radius);
    delta = est.delta_hat;
    std::printf("estimated growth exponent: %.6f (stderr %.2g)\n", delta,
                est.stderr_value);
  }
  const AtomicMeasure mu = patterson_sullivan(group, o, x, s, radius, delta);
  if (std::filesystem::exists(out_path) && !force)
    throw ArgumentError("output file '" + out_path +
                        "' exists; pass --force to overwrite");
  write_measure_csv(out_path, mu);
  std::printf("wrote %zu atoms, total mass %.17g -> %s\n", mu.atoms.size(),
              mu.total_mass(), out_path.c_str());
  return 0;
}

void print_result(const ExperimentResult& r) {
  for (const NamedFit& f : r.fits)
    std::printf("fit  %-22s %.8g  (stderr %.3g)\n", f.name.c_str(), f.value,
                f.stderr_value);
  for (const Verdict& v : r.verdicts)
    std::printf("%s  %s  %s\n", v.pass ? "PASS" : "FAIL",
                v.criterion.c_str(), v.details.c_str());
  std::printf("wall: %.2fs\n", r.wall_seconds);
}

int cmd_experiment(const std::string& name, const std::string& config_path,
                   std::string out_dir, bool force, long long seed_override) {
  RunConfig cfg = load_config(config_path);
  if (!name.empty()) cfg.experiment.name = name;
  if (seed_override >= 0)
    cfg.run.seed = static_cast<std::uint64_t>(seed_override);
  if (!out_dir.empty()) cfg.run.out = out_dir;

  const ConvexDomain dom = build_domain(cfg.domain);
  const GroupPresentation group = build_group(cfg.group, dom);
  const Vec x = resolve_point(cfg.run.x, dom, "run.x");
  const Vec y = cfg.run.y.empty() ? x : resolve_point(cfg.run.y, dom, "run.y");
  const ExperimentSpec& e = cfg.experiment;

  ExperimentResult result;
  if (e.name == "orbit-counting") {
    OrbitCountingParams p;
    p.t_max = e.t_max;
    p.expected_delta = e.expected_delta;
    p.delta_tol = e.delta_tol;
    p.spread_tol = e.spread_tol;
    p.margin = cfg.run.margin;
    p.cap = cfg.run.cap;
    result = run_orbit_counting(group, x, y, p);
  } else if (e.name == "orbit-equidistribution") {
    EquidistributionParams p;
    p.t_max = e.t_max;
    p.t_window = e.t_window;
    if (!e.cap_a_axis.empty()) {
      p.cap_a.axis = resolve_point(e.cap_a_axis, dom, "cap_a_axis");
      p.cap_a.angle = e.cap_a_angle;
    }
    if (!e.cap_b_axis.empty()) {
      p.cap_b.axis = resolve_point(e.cap_b_axis, dom, "cap_b_axis");
      p.cap_b.angle = e.cap_b_angle;
    }
    p.s_offset = e.s_offset;
    p.measure_radius = e.measure_radius;
    p.delta_radius = e.delta_radius;
    p.cauchy_shrink = e.cauchy_shrink;
    p.seed = cfg.run.seed;
    p.mc_pairs = e.mc_pairs;
    p.margin = cfg.run.margin;
    p.cap = cfg.run.cap;
    result = run_orbit_equidistribution(group, x, y, p);
  } else if (e.name == "geodesic-counting") {
    GeodesicCountingParams p;
    p.l_max = e.l_max;
    p.ratio_lo = e.ratio_lo;
    p.ratio_hi = e.ratio_hi;
    p.compare_paths = e.compare_paths;
    p.path = path_from_string(e.path);
    p.delta_radius = e.delta_radius;
    p.orbit_samples = e.orbit_samples;
    p.seed = cfg.run.seed;
    p.margin = cfg.run.margin;
    p.cap = cfg.run.cap;
    result = run_geodesic_counting(group, p);
  } else if (e.name == "mixing") {
    MixingParams p;
    p.t_grid = e.t_grid;
    p.samples = e.samples;
    if (!e.phi_center.empty())
      p.phi.center = resolve_point(e.phi_center, dom, "phi_center");
    p.phi.radius = e.phi_radius;
    if (!e.psi_center.empty())
      p.psi.center = resolve_point(e.psi_center, dom, "psi_center");
    p.psi.radius = e.psi_radius;
    p.s_offset = e.s_offset;
    p.measure_radius = e.measure_radius;
    p.delta_radius = e.delta_radius;
    p.seed = cfg.run.seed;
    p.bootstrap_rounds = e.bootstrap_rounds;
    p.margin = cfg.run.margin;
    result = run_mixing_correlation(group, x, p);
  } else if (e.name == "length-spectrum") {
    SpectrumDensityParams p;
    p.l_max = e.l_max;
    p.epsilon = e.epsilon;
    p.path = path_from_string(e.path);
    p.margin = cfg.run.margin;
    p.cap = cfg.run.cap;
    result = run_length_spectrum_density(group, p);
  } else if (e.name == "critical-gap") {
    CriticalGapParams p;
    p.parabolic_marker = cfg.group.parabolic_marker;
    p.R = cfg.run.R;
    p.gap_min = e.gap_min;
    p.significance = e.significance;
    p.cusp_r = e.cusp_r;
    p.margin = cfg.run.margin;
    p.cap = cfg.run.cap;
    result = run_critical_gap(group, x, p);
  } else {
    throw ArgumentError("unknown experiment '" + e.name + "'");
  }

  const std::string manifest =
      write_run_outputs(cfg.run.out, result, serialize_config(cfg), force);
  print_result(result);
  std::printf("manifest: %s\n", manifest.c_str());
  return result.all_pass() ? 0 : 1;
}

int cmd_oracle(const std::string& which, const std::string& gen_path,
               const std::string& domain_path, bool free_flag, double t,
               int max_len, double l_max) {
  bool all_pass = true;
  const bool run_klein = which == "klein" || which == "all";
  const bool run_brute = which == "brute" || which == "all";
  const bool run_census = which == "census" || which == "all";

  if (run_klein) {
    const ConvexDomain ball = ConvexDomain::unit_ball(2);
    const std::vector<Vec> dirs = sphere_mesh(2, 16);
    std::vector<Vec> pts;
    for (const Vec& d : dirs)
      for (double r : {0.15, 0.45, 0.75, 0.92}) pts.push_back(r * d);
    double dist_err = 0.0, buse_err = 0.0, trunc_err = 0.0, gromov_err = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec& x = pts[i];
      const Vec& y = pts[(i * 7 + 5) % pts.size()];
      dist_err = std::max(dist_err,
                          std::abs(hilbert_distance_affine(ball, x, y) -
                                   klein_distance(x, y)));
      const Vec xi_aff = dirs[i % dirs.size()];
      const HomogeneousPoint xi = ball.chart().to_projective(xi_aff);
      const double closed = klein_busemann(xi_aff, x, y);
      buse_err = std::max(buse_err, std::abs(busemann(ball, xi, x, y) -
                                             closed));
      // Horizon 10: truncation decays like exp(-2T) so the error sits near
      // 1e-8, while the probe point keeps a healthy margin from the
      // interiority guard.
      trunc_err = std::max(trunc_err,
                           std::abs(busemann_direct(ball, xi, x, y, 10.0) -
                                    closed));
      const Vec eta_aff = dirs[(i + 5) % dirs.size()];
      if ((xi_aff - eta_aff).lpNorm<Eigen::Infinity>() > 1e-9) {
        const Vec origin = Vec::Zero(2);
        gromov_err = std::max(
            gromov_err,
            std::abs(gromov_product(ball, origin, xi,
                                    ball.chart().to_projective(eta_aff)) -
                     klein_gromov(xi_aff, eta_aff)));
      }
    }
    const bool ok = dist_err < 1e-10 && buse_err < 1e-9 &&
                    trunc_err < 1e-7 && gromov_err < 1e-9;
    all_pass = all_pass && ok;
    std::printf(
        "%s klein: distance err %.2e, busemann err %.2e, finite-horizon err "
        "%.2e, gromov err %.2e\n",
        ok ? "PASS" : "FAIL", dist_err, buse_err, trunc_err, gromov_err);
  }

  if (run_brute || run_census) {
    if (gen_path.empty() || domain_path.empty())
      throw ArgumentError(
          "oracle brute/census need --generators and --domain");
    const ConvexDomain dom = load_domain_file(domain_path);
    GroupSpec gspec;
    gspec.generators = gen_path;
    gspec.free = free_flag;
    const GroupPresentation group = build_group(gspec, dom);
    const Vec o = dom.center();

    if (run_brute) {
      const BruteOrbit brute = brute_force_ball(group, o, t, max_len);
      const std::vector<GroupElement> ball =
          enumerate_metric_ball(group, o, t, {});
      bool ok = brute.elements.size() == ball.size();
      std::size_t matched = 0;
      if (ok) {
        for (const GroupElement& g : ball) {
          const Mat canon = reference_form(g.transform.matrix());
          for (const Mat& b : brute.elements) {
            if ((canon - b).lpNorm<Eigen::Infinity>() <= 1e-8 ||
                (canon + b).lpNorm<Eigen::Infinity>() <= 1e-8) {
              ++matched;
              break;
            }
          }
        }
        ok = matched == ball.size();
      }
      all_pass = all_pass && ok;
      std::printf("%s brute: pruned ball %zu elements, unpruned oracle %zu, "
                  "matched %zu (t = %g, words <= %d)\n",
                  ok ? "PASS" : "FAIL", ball.size(), brute.elements.size(),
                  matched, t, max_len);
    }

    if (run_census) {
      const std::vector<CyclicClass> oracle =
          cyclic_word_census(group, l_max, max_len);
      GeodesicEnumOptions gopt;
      const std::vector<ClosedGeodesic> census =
          enumerate_primitive_geodesics(group, l_max, gopt);
      bool ok = oracle.size() == census.size();
      double worst = 0.0;
      if (ok) {
        for (std::size_t i = 0; i < census.size(); ++i)
          worst = std::max(worst,
                           std::abs(census[i].length - oracle[i].length));
        // The two sides may pick different cyclic rotations of a class, and
        // rotated products round differently; at length 8 the honest
        // agreement floor is around 1e-8.
        ok = worst <= 1e-7;
      }
      all_pass = all_pass && ok;
      std::printf("%s census: library %zu classes, cyclic-word oracle %zu, "
                  "largest length gap %.2e (l <= %g)\n",
                  ok ? "PASS" : "FAIL", census.size(), oracle.size(), worst,
                  l_max);
    }
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  read_thread_env();
  CLI::App app{"Strictly convex Hilbert geometry workbench: metric, "
               "boundary, discrete groups, measures, experiments"};
  app.require_subcommand(0, 1);

  // dist
  auto* dist = app.add_subcommand(
      "dist", "Hilbert distance between two interior points");
  std::string d_domain, d_x, d_y;
  dist->add_option("--domain", d_domain, "domain file")->required();
  dist->add_option("--x", d_x, "first point, comma or space separated")
      ->required();
  dist->add_option("--y", d_y, "second point")->required();

  // group info
  auto* grp = app.add_subcommand("group", "group presentation utilities");
  grp->require_subcommand(1);
  auto* info = grp->add_subcommand("info", "summarize a generator file");
  std::string g_gens, g_domain;
  bool g_free = false, g_para = false;
  info->add_option("--generators", g_gens, "generator file")->required();
  info->add_option("--domain", g_domain, "domain file")->required();
  info->add_flag("--free", g_free, "treat the presentation as free");
  info->add_flag("--parabolics", g_para, "expect parabolic generators");

  // ps-measure
  auto* ps = app.add_subcommand(
      "ps-measure", "emit an atomic orbit measure as CSV");
  std::string p_gens, p_domain, p_x, p_o, p_out;
  bool p_free = false, p_para = false, p_force = false;
  double p_s = 0.0, p_delta = -1.0, p_radius = 10.0;
  ps->add_option("--generators", p_gens)->required();
  ps->add_option("--domain", p_domain)->required();
  ps->add_option("--s", p_s, "weight exponent")->required();
  ps->add_option("--delta", p_delta,
                 "growth exponent estimate (default: fit one)");
  ps->add_option("--radius", p_radius, "orbit radius");
  ps->add_option("--x", p_x, "measure basepoint (default: orbit basepoint)");
  ps->add_option("--o", p_o, "orbit basepoint (default: domain center)");
  ps->add_option("--out", p_out, "output CSV path")->required();
  ps->add_flag("--free", p_free);
  ps->add_flag("--parabolics", p_para);
  ps->add_flag("--force", p_force, "overwrite an existing output file");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a verification suite");
  std::string e_name, e_config, e_out;
  bool e_force = false;
  long long e_seed = -1;
  exp->add_option("name", e_name,
                  "experiment name (default: the config's name)");
  exp->add_option("--config", e_config, "run configuration")->required();
  exp->add_option("--out", e_out, "output directory (default: config out)");
  exp->add_option("--seed", e_seed, "override the config seed");
  exp->add_flag("--force", e_force, "reuse a nonempty output directory");

  // oracle
  auto* orc = app.add_subcommand(
      "oracle", "run the independent reference implementations");
  std::string o_which = "all", o_gens, o_domain;
  bool o_free = false;
  double o_t = 3.0, o_lmax = 8.0;
  int o_maxlen = 8;
  orc->add_option("--which", o_which, "klein | brute | census | all")
      ->check(CLI::IsMember({"klein", "brute", "census", "all"}));
  orc->add_option("--generators", o_gens);
  orc->add_option("--domain", o_domain);
  orc->add_flag("--free", o_free);
  orc->add_option("--t", o_t, "brute-force ball radius");
  orc->add_option("--max-len", o_maxlen, "brute-force word length bound");
  orc->add_option("--l-max", o_lmax, "census length bound");

  if (argc <= 1) {
    std::fputs(app.help().c_str(), stderr);
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::puts(app.help(e.get_name()).c_str());
    return 0;
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (dist->parsed()) return cmd_dist(d_domain, d_x, d_y);
    if (info->parsed()) return cmd_group_info(g_gens, g_domain, g_free,
                                              g_para);
    if (ps->parsed())
      return cmd_ps_measure(p_gens, p_domain, p_free, p_para, p_s, p_delta,
                            p_radius, p_x, p_o, p_out, p_force);
    if (exp->parsed())
      return cmd_experiment(e_name, e_config, e_out, e_force, e_seed);
    if (orc->parsed())
      return cmd_oracle(o_which, o_gens, o_domain, o_free, o_t, o_maxlen,
                        o_lmax);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  std::fputs(app.help().c_str(), stderr);
  return 2;
}

}  // namespace hilbert
