#include "fpt/io/stm_cache.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include <fmt/format.h>

#include "fpt/error.hpp"

namespace fpt::io {
namespace {

constexpr std::array<char, 8> kMagic = {'F', 'P', 'T', 'S', 'T', 'M', '0', '1'};
constexpr std::size_t kDoublesPerRecord = 1 + 12 + 144 + 144;

// 64-bit FNV-1a.
class Fnv1a {
 public:
  void add(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add(double v) { add(&v, sizeof v); }
  void add(std::uint64_t v) { add(&v, sizeof v); }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t stm_cache_key(const ReferenceOrbit& orbit, std::size_t n_checkpoints,
                            const IntegratorConfig& cfg, CostateConvention convention) {
  Fnv1a h;
  h.add(orbit.params.mu_star);
  for (int i = 0; i < 6; ++i) h.add(orbit.initial_state(i));
  h.add(orbit.period);
  h.add(static_cast<std::uint64_t>(n_checkpoints));
  h.add(cfg.abs_tol);
  h.add(cfg.rel_tol);
  h.add(cfg.max_step);
  h.add(static_cast<std::uint64_t>(convention == CostateConvention::kAdjoint ? 0 : 1));
  return h.value();
}

std::filesystem::path stm_cache_file(const std::filesystem::path& dir, std::uint64_t key) {
  return dir / fmt::format("stm_{:016x}.bin", key);
}

void save_stm_history(const std::filesystem::path& file, std::uint64_t key,
                      const StmHistory& history) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(fmt::format("cannot write STM cache '{}'", tmp.string()));
    out.write(kMagic.data(), kMagic.size());
    const std::uint64_t n = history.size();
    out.write(reinterpret_cast<const char*>(&key), sizeof key);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    std::array<double, kDoublesPerRecord> buf{};
    for (const auto& rec : history.records()) {
      buf[0] = rec.t;
      const Vec12 y = rec.y.stacked();
      std::memcpy(buf.data() + 1, y.data(), 12 * sizeof(double));
      std::memcpy(buf.data() + 13, rec.stm.data(), 144 * sizeof(double));
      std::memcpy(buf.data() + 157, rec.gram.data(), 144 * sizeof(double));
      out.write(reinterpret_cast<const char*>(buf.data()), sizeof buf);
    }
  }
  std::filesystem::rename(tmp, file);
}

std::optional<StmHistory> load_stm_history(const std::filesystem::path& file, std::uint64_t key,
                                           const ReferenceOrbit& orbit,
                                           CostateConvention convention,
                                           const IntegratorConfig& cfg) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  std::array<char, 8> magic{};
  std::uint64_t stored_key = 0, n = 0;
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(&stored_key), sizeof stored_key);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || magic != kMagic || stored_key != key || n < 2) return std::nullopt;

  std::vector<StmRecord> records(n);
  std::array<double, kDoublesPerRecord> buf{};
  for (auto& rec : records) {
    in.read(reinterpret_cast<char*>(buf.data()), sizeof buf);
    if (!in) return std::nullopt;
    rec.t = buf[0];
    rec.y = AugmentedState(Vec12(Eigen::Map<const Vec12>(buf.data() + 1)));
    rec.stm = Eigen::Map<const Mat12>(buf.data() + 13);
    rec.gram = Eigen::Map<const Mat12>(buf.data() + 157);
  }
  return StmHistory(orbit, convention, cfg, std::move(records));
}

}  // namespace fpt::io
