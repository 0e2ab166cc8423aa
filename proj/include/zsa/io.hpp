#pragma once

// Serialization of polynomials, zero lists, level curves and strip reports;
// atomic file output; run configuration; the on-disk zero cache.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "zsa/gdpoly.hpp"
#include "zsa/levelset.hpp"
#include "zsa/strips.hpp"
#include "zsa/zerofinder.hpp"

namespace zsa {

using Json = nlohmann::json;

/// 17 significant digits ("%.17g").
std::string format_double(double v);

/// RFC 4180 field: quoted when it contains a comma, quote or line break.
std::string csv_field(std::string_view text);

/// Writes to a temporary file in the same directory, then renames it over
/// `path`. Parent directories are created.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// {"label": ..., "terms": [[coeff, num, den], ...]}
Json poly_to_json(const GeneralizedDirichletPoly& poly);
GeneralizedDirichletPoly poly_from_json(const Json& j);

/// Header "family,n,re,im,residual,certified" plus one row per zero.
std::string zeros_to_csv(std::string_view family, int n, std::span<const ComplexZero> zeros);
Json zeros_to_json(std::string_view family, int n, std::span<const ComplexZero> zeros);
Json zero_to_json(const ComplexZero& z);
ComplexZero zero_from_json(const Json& j);

Json level_curve_to_json(const LevelCurveAnalysis& analysis);
/// y-up SVG with the real axis drawn and one path per component; the class
/// is encoded in the stroke style.
std::string level_curve_to_svg(const LevelCurveAnalysis& analysis);

Json projection_to_json(const ProjectionInterval& p);
Json strip_report_to_json(const StripReport& report);

struct RunConfig {
  double tol = 1e-10;
  double height = 1000.0;         // report / bounds zero-search height
  double verify_height = 1.0e4;   // existence-witness budget
  double trace_grid = 0.005;
  double membership_step = 1e-2;
  unsigned threads = 1;
  int desk_n_max = 12;
  std::string output_dir = ".";
  std::string cache_dir;  // empty disables the zero cache
};

/// key=value lines; '#' starts a comment. Unknown keys and invalid values
/// throw PreconditionError.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});
/// ZSA_CACHE_DIR overrides cache_dir.
void apply_environment(RunConfig& config);
void validate_config(const RunConfig& config);

inline constexpr std::string_view kCodeVersion = "zsa-1.0";

struct ZeroCacheKey {
  std::string family;
  int n = 0;
  Rectangle rect;
  double tol = 0.0;
  std::string version{kCodeVersion};

  std::string canonical() const;
  friend bool operator==(const ZeroCacheKey&, const ZeroCacheKey&) = default;
};

struct ZeroCacheEntry {
  ZeroCacheKey key;
  std::vector<ComplexZero> zeros;
  std::string created;  // ISO 8601 UTC
};

std::string serialize_cache_entry(const ZeroCacheEntry& entry);
/// Throws std::runtime_error on malformed input.
ZeroCacheEntry parse_cache_entry(std::string_view text);

std::uint64_t fnv1a(std::string_view text);

/// Union of two zero lists; zeros closer than 10 tol count once. Sorted by
/// (Im, Re).
std::vector<ComplexZero> merge_zeros(std::span<const ComplexZero> a, std::span<const ComplexZero> b, double tol);

std::string utc_timestamp();

/// One JSON file per key, named by the FNV-1a hash of the canonical key.
class ZeroCache {
 public:
  explicit ZeroCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::filesystem::path path_for(const ZeroCacheKey& key) const;
  /// Exact key matches only. A corrupt file is reported through `warning`
  /// and treated as a miss.
  std::optional<ZeroCacheEntry> load(const ZeroCacheKey& key, std::string* warning = nullptr) const;
  void store(const ZeroCacheEntry& entry) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace zsa
