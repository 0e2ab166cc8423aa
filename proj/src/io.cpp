#include "zsa/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include "zsa/errors.hpp"

namespace zsa {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Json poly_to_json(const GeneralizedDirichletPoly& poly) {
  Json terms = Json::array();
  for (const Term& t : poly.terms()) terms.push_back(Json::array({t.coeff, t.base.num, t.base.den}));
  return {{"label", poly.label()}, {"terms", terms}};
}

GeneralizedDirichletPoly poly_from_json(const Json& j) {
  std::vector<std::pair<double, Rational>> terms;
  for (const Json& t : j.at("terms")) {
    if (!t.is_array() || t.size() != 3) throw DomainError("poly_from_json: term must be [coeff, num, den]");
    terms.emplace_back(t[0].get<double>(), make_rational(t[1].get<std::int64_t>(), t[2].get<std::int64_t>()));
  }
  return GeneralizedDirichletPoly(std::move(terms), j.value("label", std::string{}));
}

std::string zeros_to_csv(std::string_view family, int n, std::span<const ComplexZero> zeros) {
  std::string out = "family,n,re,im,residual,certified\n";
  for (const ComplexZero& z : zeros) {
    out += csv_field(family) + ',' + std::to_string(n) + ',' + format_double(z.position.real()) + ',' +
           format_double(z.position.imag()) + ',' + format_double(z.residual) + ',' +
           (z.certified ? "true" : "false") + '\n';
  }
  return out;
}

Json zero_to_json(const ComplexZero& z) {
  return {{"re", z.position.real()},
          {"im", z.position.imag()},
          {"residual", z.residual},
          {"certified", z.certified},
          {"multiplicity", z.multiplicity}};
}

ComplexZero zero_from_json(const Json& j) {
  ComplexZero z;
  z.position = {j.at("re").get<double>(), j.at("im").get<double>()};
  z.residual = j.at("residual").get<double>();
  z.certified = j.at("certified").get<bool>();
  z.multiplicity = j.value("multiplicity", 1);
  return z;
}

Json zeros_to_json(std::string_view family, int n, std::span<const ComplexZero> zeros) {
  Json list = Json::array();
  for (const ComplexZero& z : zeros) list.push_back(zero_to_json(z));
  return {{"family", family}, {"n", n}, {"zeros", list}};
}

Json level_curve_to_json(const LevelCurveAnalysis& a) {
  Json comps = Json::array();
  for (const LevelComponent& c : a.components) {
    Json vertices = Json::array();
    for (Complex v : c.vertices) vertices.push_back(Json::array({v.real(), v.imag()}));
    Json item = {{"class", component_class_name(c.kind)}, {"closed", c.closed}, {"vertices", vertices}};
    if (!c.asymptotes.empty()) item["asymptotes"] = c.asymptotes;
    if (c.closed) {
      item["winding"] = c.winding;
      item["zeros_inside"] = c.zeros_inside;
    }
    comps.push_back(std::move(item));
  }
  Json flagged = Json::array();
  for (Complex p : a.flagged_cells) flagged.push_back(Json::array({p.real(), p.imag()}));
  Json out = {{"n", a.n},
              {"x0", a.x0},
              {"level", a.level},
              {"grid", a.grid},
              {"window", {a.window.x_min, a.window.x_max, a.window.y_min, a.window.y_max}},
              {"b_plus", a.b_plus},
              {"b_minus", a.b_minus ? Json(*a.b_minus) : Json(nullptr)},
              {"real_axis_hits", a.real_axis_hits},
              {"flagged_cells", flagged},
              {"components", comps}};
  return out;
}

std::string level_curve_to_svg(const LevelCurveAnalysis& a) {
  const Rectangle& w = a.window;
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(w.x_min) << ' ' << num(-w.y_max) << ' '
    << num(w.width()) << ' ' << num(w.height()) << "\" width=\"" << num(std::min(1200.0, 120.0 * w.width()))
    << "\" preserveAspectRatio=\"none\" data-n=\"" << a.n << "\" data-x0=\"" << format_double(a.x0)
    << "\" data-level=\"" << format_double(a.level) << "\" data-grid=\"" << format_double(a.grid) << "\">\n";
  s << "<g transform=\"scale(1,-1)\" fill=\"none\" vector-effect=\"non-scaling-stroke\">\n";
  s << "<line x1=\"" << num(w.x_min) << "\" y1=\"0\" x2=\"" << num(w.x_max)
    << "\" y2=\"0\" stroke=\"#888\" stroke-width=\"0.01\"/>\n";
  for (const LevelComponent& c : a.components) {
    const char* style = "stroke=\"#999\" stroke-dasharray=\"0.02 0.04\"";
    switch (c.kind) {
      case ComponentClass::ClosedLoop:
        style = "stroke=\"#1f4e9c\"";
        break;
      case ComponentClass::OpenWithAsymptote:
        style = "stroke=\"#b5461c\" stroke-dasharray=\"0.1 0.05\"";
        break;
      case ComponentClass::SingleOpenCurve:
        style = "stroke=\"#2a7d2a\"";
        break;
      case ComponentClass::Unclassified:
        break;
    }
    s << "<path class=\"" << component_class_name(c.kind) << "\" " << style << " stroke-width=\"0.02\" d=\"";
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
      s << (i == 0 ? "M" : " L") << num(c.vertices[i].real()) << ',' << num(c.vertices[i].imag());
    }
    if (c.closed) s << " Z";
    s << "\"/>\n";
  }
  s << "</g>\n</svg>\n";
  return s.str();
}

Json projection_to_json(const ProjectionInterval& p) {
  Json holes = Json::array();
  for (const Interval& h : p.holes) holes.push_back(Json::array({h.lo, h.hi}));
  return {{"lo", p.lo},
          {"hi", p.hi},
          {"step", p.step},
          {"scan", {p.scan.lo, p.scan.hi}},
          {"grid_points", p.grid_points},
          {"holes", holes}};
}

Json strip_report_to_json(const StripReport& r) {
  Json ritt = Json::array();
  for (const auto& [T, s] : r.ritt_sums) ritt.push_back({{"height", T}, {"sum_re", s}});
  Json out = {
      {"n", r.n},
      {"family", family_name(r.family)},
      {"degenerate", r.degenerate},
      {"empirical_bounds",
       {{"a_hat", r.bounds.a_hat},
        {"b_hat", r.bounds.b_hat},
        {"height", r.bounds.height},
        {"count", r.bounds.count},
        {"envelope", {r.bounds.envelope.lo, r.bounds.envelope.hi}}}},
      {"analytic_upper", r.analytic_upper ? Json(*r.analytic_upper) : Json(nullptr)},
      {"projection_interval", r.projection ? projection_to_json(*r.projection) : Json(nullptr)},
      {"verdicts", r.verdicts},
      {"report_only",
       {{"zeta_b_hat", r.zeta_b_hat},
        {"upper_asymptote", r.upper_asymptote},
        {"zeta_a_hat_over_n", r.zeta_a_hat_over_n},
        {"minus_log2", -std::log(2.0)},
        {"ritt_sums", ritt}}},
  };
  if (r.degenerate) out["projection_set"] = Json::array({0.0, 0.0});
  if (r.delta) {
    out["delta_n"] = {{"delta", r.delta->delta},
                      {"a_n", r.delta->a_n},
                      {"b_at_a", r.delta->b_at_a},
                      {"b_hat", r.delta->b_hat},
                      {"height", r.delta->height}};
  } else {
    out["delta_n"] = nullptr;
  }
  return out;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_number(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || *end != '\0' || !std::isfinite(v)) {
    throw PreconditionError("config: '" + key + "' expects a number, got '" + value + "'");
  }
  return v;
}

}  // namespace

RunConfig parse_config(std::string_view text, RunConfig c) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw PreconditionError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key == "tol") {
      c.tol = parse_number(key, value);
    } else if (key == "height") {
      c.height = parse_number(key, value);
    } else if (key == "verify_height") {
      c.verify_height = parse_number(key, value);
    } else if (key == "trace_grid") {
      c.trace_grid = parse_number(key, value);
    } else if (key == "membership_step") {
      c.membership_step = parse_number(key, value);
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(parse_number(key, value));
    } else if (key == "desk_n_max") {
      c.desk_n_max = static_cast<int>(parse_number(key, value));
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else if (key == "cache_dir") {
      c.cache_dir = value;
    } else {
      throw PreconditionError("config: unknown key '" + key + "'");
    }
  }
  validate_config(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

void apply_environment(RunConfig& config) {
  if (const char* dir = std::getenv("ZSA_CACHE_DIR"); dir != nullptr && *dir != '\0') config.cache_dir = dir;
}

void validate_config(const RunConfig& c) {
  if (!(c.tol > 0.0)) throw PreconditionError("config: tol must be positive");
  if (!(c.height > 0.0) || !(c.verify_height > 0.0)) throw PreconditionError("config: heights must be positive");
  if (!(c.trace_grid > 0.0) || !(c.membership_step > 0.0)) {
    throw PreconditionError("config: grid spacings must be positive");
  }
  if (c.threads < 1) throw PreconditionError("config: threads must be at least 1");
  if (c.desk_n_max < 2) throw PreconditionError("config: desk_n_max must be at least 2");
}

std::string ZeroCacheKey::canonical() const {
  return family + '|' + std::to_string(n) + '|' + format_double(rect.x_min) + '|' + format_double(rect.x_max) + '|' +
         format_double(rect.y_min) + '|' + format_double(rect.y_max) + '|' + format_double(tol) + '|' + version;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string serialize_cache_entry(const ZeroCacheEntry& e) {
  Json zeros = Json::array();
  for (const ComplexZero& z : e.zeros) zeros.push_back(zero_to_json(z));
  const Json j = {{"key",
                   {{"family", e.key.family},
                    {"n", e.key.n},
                    {"rect", {e.key.rect.x_min, e.key.rect.x_max, e.key.rect.y_min, e.key.rect.y_max}},
                    {"tol", e.key.tol},
                    {"version", e.key.version}}},
                  {"created", e.created},
                  {"zeros", zeros}};
  return j.dump(1) + '\n';
}

ZeroCacheEntry parse_cache_entry(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    ZeroCacheEntry e;
    const Json& k = j.at("key");
    e.key.family = k.at("family").get<std::string>();
    e.key.n = k.at("n").get<int>();
    const Json& r = k.at("rect");
    e.key.rect = {r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>(), r.at(3).get<double>()};
    e.key.tol = k.at("tol").get<double>();
    e.key.version = k.at("version").get<std::string>();
    e.created = j.at("created").get<std::string>();
    for (const Json& z : j.at("zeros")) e.zeros.push_back(zero_from_json(z));
    return e;
  } catch (const Json::exception& ex) {
    throw std::runtime_error(std::string("malformed cache entry: ") + ex.what());
  }
}

std::vector<ComplexZero> merge_zeros(std::span<const ComplexZero> a, std::span<const ComplexZero> b, double tol) {
  std::vector<ComplexZero> out(a.begin(), a.end());
  for (const ComplexZero& z : b) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const ComplexZero& w) {
      return std::abs(w.position - z.position) <= 10.0 * tol;
    });
    if (!dup) out.push_back(z);
  }
  std::sort(out.begin(), out.end(), [](const ComplexZero& x, const ComplexZero& y) {
    if (x.position.imag() != y.position.imag()) return x.position.imag() < y.position.imag();
    return x.position.real() < y.position.real();
  });
  return out;
}

std::filesystem::path ZeroCache::path_for(const ZeroCacheKey& key) const {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv1a(key.canonical())));
  return dir_ / name;
}

std::optional<ZeroCacheEntry> ZeroCache::load(const ZeroCacheKey& key, std::string* warning) const {
  const auto path = path_for(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    ZeroCacheEntry e = parse_cache_entry(ss.str());
    if (e.key == key) return e;
    return std::nullopt;
  } catch (const std::exception& ex) {
    if (warning != nullptr) *warning = "ignoring corrupt cache file " + path.string() + ": " + ex.what();
    return std::nullopt;
  }
}

void ZeroCache::store(const ZeroCacheEntry& entry) const {
  write_file_atomic(path_for(entry.key), serialize_cache_entry(entry));
}

}  // namespace zsa
