// Command-line front end: zero lists, level curves, modulus profiles, strip
// bounds, theorem verification and per-n reports.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zsa/errors.hpp"
#include "zsa/io.hpp"
#include "zsa/levelset.hpp"
#include "zsa/strips.hpp"
#include "zsa/zerofinder.hpp"

namespace {

using namespace zsa;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitIncomplete = 2;
constexpr int kExitUsage = 64;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_doubles(const std::string& text, std::size_t expected = 0) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
  }
  if (expected != 0 && out.size() != expected) {
    throw UsageError("expected " + std::to_string(expected) + " comma-separated numbers in '" + text + "'");
  }
  return out;
}

// "5", "3,4,7" or "3..8".
std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      const int lo = std::stoi(text.substr(0, dots));
      const int hi = std::stoi(text.substr(dots + 2));
      if (lo > hi) throw UsageError("empty range '" + text + "'");
      for (int n = lo; n <= hi; ++n) out.push_back(n);
      return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  } catch (const std::logic_error&) {
    throw UsageError("bad n list '" + text + "'");
  }
  return out;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Rectangle parse_rect(const std::string& text) {
  const auto v = parse_doubles(text, 4);
  return make_rectangle(v[0], v[1], v[2], v[3]);
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file_atomic(path, content);
  }
}

struct Globals {
  std::string config_path;
  std::string cache_dir;
  std::string output_dir;
  unsigned threads = 0;
};

RunConfig resolve_config(const Globals& g) {
  RunConfig c;
  if (!g.config_path.empty()) c = load_config(g.config_path);
  apply_environment(c);
  if (!g.cache_dir.empty()) c.cache_dir = g.cache_dir;
  if (!g.output_dir.empty()) c.output_dir = g.output_dir;
  if (g.threads > 0) c.threads = g.threads;
  validate_config(c);
  return c;
}

struct ZerosArgs {
  int n = 0;
  std::string family = "G";
  std::string rect;
  double tol = 0.0;
  std::string format = "csv";
  std::string out;
  bool no_cache = false;
};

int cmd_zeros(const ZerosArgs& a, const RunConfig& config) {
  const Family family = parse_family(a.family);
  const Rectangle rect = parse_rect(a.rect);
  const double tol = a.tol > 0.0 ? a.tol : config.tol;
  const GeneralizedDirichletPoly poly = make_family(family, a.n);
  const std::string fname(family_name(family));

  std::vector<ComplexZero> zeros;
  bool cached = false;
  const ZeroCacheKey key{fname, a.n, rect, tol};
  std::optional<ZeroCache> cache;
  if (!config.cache_dir.empty() && !a.no_cache) {
    cache.emplace(config.cache_dir);
    std::string warning;
    if (auto hit = cache->load(key, &warning)) {
      zeros = hit->zeros;
      cached = true;
    }
    if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
  }
  if (!cached) {
    ZeroSearchOptions options;
    options.tol = tol;
    options.threads = config.threads;
    try {
      zeros = find_zeros(poly, rect, options);
    } catch (const IncompleteEnumeration& e) {
      std::cerr << "incomplete enumeration: " << e.what() << "\n";
      for (const UnresolvedBox& b : e.boxes()) {
        std::cerr << "  unresolved [" << format_double(b.x_min) << ", " << format_double(b.x_max) << "] x ["
                  << format_double(b.y_min) << ", " << format_double(b.y_max) << "] winding " << b.winding << "\n";
      }
      return kExitIncomplete;
    } catch (const BoundaryError& e) {
      std::cerr << "the rectangle boundary passes too close to a zero (" << e.what()
                << "); perturb the rectangle\n";
      return kExitIncomplete;
    }
    if (cache) cache->store({key, zeros, utc_timestamp()});
  }

  if (a.format == "csv") {
    emit(a.out, zeros_to_csv(fname, a.n, zeros));
  } else {
    emit(a.out, zeros_to_json(fname, a.n, zeros).dump(1) + "\n");
  }
  return kExitOk;
}

struct LevelsArgs {
  int n = 0;
  double x0 = 0.0;
  std::string window;
  double grid = 0.0;
  std::string json_out;
  std::string svg_out;
};

int cmd_levels(const LevelsArgs& a, const RunConfig& config) {
  TraceOptions options;
  options.grid = a.grid > 0.0 ? a.grid : config.trace_grid;
  const LevelCurveAnalysis r = a.window.empty() ? trace_level_curve(a.n, a.x0, options)
                                                : trace_level_curve(a.n, a.x0, parse_rect(a.window), options);
  if (!a.json_out.empty()) write_file_atomic(a.json_out, level_curve_to_json(r).dump(1) + "\n");
  if (!a.svg_out.empty()) write_file_atomic(a.svg_out, level_curve_to_svg(r));

  std::map<std::string, int> counts;
  for (const LevelComponent& c : r.components) ++counts[component_class_name(c.kind)];
  std::printf("n=%d x0=%s level=%s window=[%s, %s] x [%s, %s]\n", a.n, format_double(a.x0).c_str(),
              format_double(r.level).c_str(), format_double(r.window.x_min).c_str(),
              format_double(r.window.x_max).c_str(), format_double(r.window.y_min).c_str(),
              format_double(r.window.y_max).c_str());
  std::printf("components: %zu\n", r.components.size());
  for (const auto& [name, count] : counts) std::printf("  %s: %d\n", name.c_str(), count);
  std::vector<double> asymptotes;
  for (const LevelComponent& c : r.components) asymptotes.insert(asymptotes.end(), c.asymptotes.begin(), c.asymptotes.end());
  std::sort(asymptotes.begin(), asymptotes.end());
  asymptotes.erase(std::unique(asymptotes.begin(), asymptotes.end()), asymptotes.end());
  if (!asymptotes.empty()) {
    std::printf("asymptotes:");
    for (double y : asymptotes) std::printf(" %.6f", y);
    std::printf("\n");
  }
  for (const LevelComponent& c : r.components) {
    if (c.closed) std::printf("  loop: winding %d, zeros inside %d\n", c.winding, c.zeros_inside);
  }
  std::printf("real axis hits:");
  for (double x : r.real_axis_hits) std::printf(" %s", format_double(x).c_str());
  std::printf("\nb_plus=%s", format_double(r.b_plus).c_str());
  if (r.b_minus) std::printf(" b_minus=%s", format_double(*r.b_minus).c_str());
  std::printf("\n");
  if (!r.flagged_cells.empty()) {
    std::cerr << "warning: " << r.flagged_cells.size() << " saddle cells could not be resolved\n";
    for (Complex p : r.flagged_cells) std::cerr << "  cell at " << format_double(p.real()) << ", " << format_double(p.imag()) << "\n";
  }
  return kExitOk;
}

struct ProfileArgs {
  int n = 0;
  std::string xs;
  std::string range;
  std::string out;
};

int cmd_profile(const ProfileArgs& a, const RunConfig&) {
  std::vector<double> xs;
  if (!a.xs.empty()) xs = parse_doubles(a.xs);
  if (!a.range.empty()) {
    const auto r = parse_doubles(a.range, 3);
    if (!(r[2] > 0.0) || r[1] < r[0]) throw UsageError("--range expects lo,hi,step with step > 0");
    const int count = static_cast<int>(std::floor((r[1] - r[0]) / r[2] + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) xs.push_back(r[0] + i * r[2]);
  }
  if (xs.empty()) throw UsageError("profile needs --x or --range");
  std::string csv = "n,x,m_hat,M,level,member,y_witness,window_min\n";
  for (double x : xs) {
    const ModulusProfile p = modulus_profile(a.n, x);
    const double level = level_for(a.n, x);
    csv += std::to_string(a.n) + ',' + format_double(x) + ',' + format_double(p.m_hat) + ',' + format_double(p.M) +
           ',' + format_double(level) + ',' + (rn_membership(a.n, x) ? "true" : "false") + ',' +
           format_double(p.y_witness) + ',' + format_double(p.window_min) + '\n';
  }
  emit(a.out, csv);
  return kExitOk;
}

struct BoundsArgs {
  int n = 0;
  std::string family = "G";
  double height = 0.0;
};

int cmd_bounds(const BoundsArgs& a, const RunConfig& config) {
  const Family family = parse_family(a.family);
  const double height = a.height > 0.0 ? a.height : config.height;
  const EmpiricalBounds b = empirical_bounds(a.n, family, height);
  Json out = {{"n", a.n},
              {"family", family_name(family)},
              {"height", height},
              {"count", b.count},
              {"a_hat", b.empty ? Json(nullptr) : Json(b.a_hat)},
              {"b_hat", b.empty ? Json(nullptr) : Json(b.b_hat)},
              {"envelope", {b.envelope.lo, b.envelope.hi}}};
  if (a.n >= 3) {
    out["analytic_upper"] = analytic_upper_bound(a.n);
    out["projection_interval"] = projection_to_json(projection_interval(a.n, config.membership_step));
    out["delta_n"] = delta_n(a.n, std::min(height, 200.0), config.membership_step).delta;
  }
  std::cout << out.dump(1) << "\n";
  return kExitOk;
}

struct VerifyArgs {
  std::string theorems;
  std::string n = "3..8";
  double height = 0.0;
  int k_max = 300;
  int m_max = 10000;
  std::string csv_out;
};

int cmd_verify(const VerifyArgs& a, const RunConfig& config) {
  const auto ids = split(a.theorems);
  if (ids.empty()) throw UsageError("--theorems is empty");
  const auto& known = supported_theorems();
  for (const auto& id : ids) {
    if (std::find(known.begin(), known.end(), id) == known.end()) throw UsageError("unknown theorem id '" + id + "'");
  }
  const std::vector<int> ns = parse_n_list(a.n);
  VerifyBudget budget;
  budget.height = a.height > 0.0 ? a.height : config.verify_height;
  budget.grid_step = config.membership_step;
  budget.k_max = a.k_max;
  budget.m_max = a.m_max;

  bool failed = false;
  bool inconclusive = false;
  std::string csv = "theorem,n,verdict,detail\n";
  std::printf("%-14s %4s  %-12s %s\n", "theorem", "n", "verdict", "detail");
  for (const auto& id : ids) {
    for (const auto& [n, v] : verify_theorem(id, ns, budget)) {
      const char* name = verdict_name(v.status);
      std::printf("%-14s %4d  %-12s %s\n", id.c_str(), n, name, v.detail.c_str());
      csv += csv_field(id) + ',' + std::to_string(n) + ',' + name + ',' + csv_field(v.detail) + '\n';
      failed = failed || v.status == VerdictStatus::Fail;
      inconclusive = inconclusive || v.status == VerdictStatus::Inconclusive;
    }
  }
  if (inconclusive) std::printf("note: some existence claims were not witnessed within the budget\n");
  if (!a.csv_out.empty()) write_file_atomic(a.csv_out, csv);
  return failed ? kExitFail : kExitOk;
}

struct ReportArgs {
  std::string n = "3..12";
  std::string out_dir;
  double height = 0.0;
};

// Loads G_n zeros from the disk cache into the shared catalog, or computes
// and stores them.
void prime_catalog(int n, double height, const RunConfig& config) {
  if (config.cache_dir.empty()) return;
  const Interval env = ZeroCatalog::envelope(Family::G, n);
  const ZeroCacheKey key{"G", n, {env.lo, env.hi, 0.0, height}, 1e-10};
  const ZeroCache cache(config.cache_dir);
  std::string warning;
  if (auto hit = cache.load(key, &warning)) {
    ZeroCatalog::shared().seed(Family::G, n, height, hit->zeros);
    return;
  }
  if (!warning.empty()) std::cerr << "warning: " << warning << "; rebuilding\n";
  const auto zeros = ZeroCatalog::shared().zeros(Family::G, n, height);
  cache.store({key, merge_zeros(zeros, {}, key.tol), utc_timestamp()});
}

int cmd_report(const ReportArgs& a, const RunConfig& config) {
  const std::vector<int> ns = parse_n_list(a.n);
  for (int n : ns) {
    if (n < 2 || n > config.desk_n_max) {
      throw UsageError("n = " + std::to_string(n) + " is outside the desk range 2.." + std::to_string(config.desk_n_max));
    }
  }
  const std::filesystem::path dir = a.out_dir.empty() ? std::filesystem::path(config.output_dir) : std::filesystem::path(a.out_dir);
  ReportOptions options;
  options.height = a.height > 0.0 ? a.height : config.height;
  options.grid_step = config.membership_step;
  options.ritt_heights = {100.0, 1000.0};
  const double catalog_height = std::max(options.height, 1000.0);

  std::string csv =
      "n,a_hat,b_hat,height,analytic_upper,projection_lo,projection_hi,holes,delta_n,"
      "zeta_b_hat,upper_asymptote_report_only,zeta_a_hat_over_n,minus_log2_report_only,"
      "ritt_sum_100_report_only,ritt_sum_1000_report_only\n";
  std::printf("%4s %12s %12s %12s %12s %12s %12s\n", "n", "a_hat", "b_hat", "R_lo", "R_hi", "delta_n", "b^(n)");
  for (int n : ns) {
    prime_catalog(n, catalog_height, config);
    const StripReport r = strip_report(n, options);
    write_file_atomic(dir / ("report_n" + std::to_string(n) + ".json"), strip_report_to_json(r).dump(1) + "\n");
    const double lo = r.projection ? r.projection->lo : 0.0;
    const double hi = r.projection ? r.projection->hi : 0.0;
    const std::string upper = r.analytic_upper ? format_double(*r.analytic_upper) : "";
    const std::string delta = r.delta ? format_double(r.delta->delta) : "";
    csv += std::to_string(n) + ',' + format_double(r.bounds.a_hat) + ',' + format_double(r.bounds.b_hat) + ',' +
           format_double(r.bounds.height) + ',' + upper + ',' + format_double(lo) + ',' + format_double(hi) + ',' +
           std::to_string(r.projection ? r.projection->holes.size() : 0) + ',' + delta + ',' +
           format_double(r.zeta_b_hat) + ',' + format_double(r.upper_asymptote) + ',' +
           format_double(r.zeta_a_hat_over_n) + ',' + format_double(-std::log(2.0)) + ',' +
           format_double(r.ritt_sums.at(0).second) + ',' + format_double(r.ritt_sums.at(1).second) + '\n';
    std::printf("%4d %12.6f %12.6f %12.6f %12.6f %12s %12.6f\n", n, r.bounds.a_hat, r.bounds.b_hat, lo, hi,
                r.delta ? format_double(r.delta->delta).substr(0, 12).c_str() : "-", r.zeta_b_hat);
  }
  write_file_atomic(dir / "aggregate.csv", csv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeros and critical strips of partial sums of the Riemann zeta function"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--config", globals.config_path, "key=value configuration file");
  app.add_option("--cache-dir", globals.cache_dir, "zero cache directory (overrides config and ZSA_CACHE_DIR)");
  app.add_option("--output-dir", globals.output_dir, "default directory for report files");
  app.add_option("--threads", globals.threads, "worker threads");

  ZerosArgs zeros;
  auto* z = app.add_subcommand("zeros", "certified zeros in a rectangle");
  z->add_option("--n", zeros.n, "number of terms")->required();
  z->add_option("--family", zeros.family, "zeta, G or Gstar");
  z->add_option("--rect", zeros.rect, "x_min,x_max,y_min,y_max")->required()->allow_extra_args(false);
  z->add_option("--tol", zeros.tol, "zero tolerance");
  z->add_option("--format", zeros.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  z->add_option("--out", zeros.out, "output file (stdout if omitted)");
  z->add_flag("--no-cache", zeros.no_cache, "bypass the zero cache");

  LevelsArgs levels;
  auto* l = app.add_subcommand("levels", "trace and classify the level curve |G_n^*| = p^x0");
  l->add_option("--n", levels.n, "number of terms")->required();
  l->add_option("--x0", levels.x0, "level parameter")->required();
  l->add_option("--window", levels.window, "x_min,x_max,y_min,y_max");
  l->add_option("--grid", levels.grid, "grid spacing");
  l->add_option("--json", levels.json_out, "component list output");
  l->add_option("--svg", levels.svg_out, "SVG output");

  ProfileArgs profile;
  auto* p = app.add_subcommand("profile", "modulus range of G_n^* on vertical lines");
  p->add_option("--n", profile.n, "number of terms")->required();
  p->add_option("--x", profile.xs, "comma-separated abscissas");
  p->add_option("--range", profile.range, "lo,hi,step");
  p->add_option("--out", profile.out, "CSV output (stdout if omitted)");

  BoundsArgs bounds;
  auto* b = app.add_subcommand("bounds", "empirical and analytic strip bounds");
  b->add_option("--n", bounds.n, "number of terms")->required();
  b->add_option("--family", bounds.family, "zeta, G or Gstar");
  b->add_option("--height", bounds.height, "zero-search height");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "theorem verification table");
  v->add_option("--theorems", verify.theorems, "comma-separated theorem ids")->required();
  v->add_option("--n", verify.n, "n values: 5, 3,4,7 or 3..8");
  v->add_option("--height", verify.height, "height budget for existence witnesses");
  v->add_option("--k-max", verify.k_max, "largest k for the factorial inequalities");
  v->add_option("--m-max", verify.m_max, "largest m for the drift constant");
  v->add_option("--csv", verify.csv_out, "machine-readable verdicts");

  ReportArgs report;
  auto* r = app.add_subcommand("report", "per-n strip reports and the aggregate table");
  r->add_option("--n", report.n, "n range, default 3..12");
  r->add_option("--out-dir", report.out_dir, "output directory");
  r->add_option("--height", report.height, "zero-search height");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const RunConfig config = resolve_config(globals);
    if (*z) return cmd_zeros(zeros, config);
    if (*l) return cmd_levels(levels, config);
    if (*p) return cmd_profile(profile, config);
    if (*b) return cmd_bounds(bounds, config);
    if (*v) return cmd_verify(verify, config);
    if (*r) return cmd_report(report, config);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
