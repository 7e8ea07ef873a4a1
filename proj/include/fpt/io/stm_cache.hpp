#pragma once

/// \file stm_cache.hpp
/// \brief Binary artifact cache for STM histories keyed by orbit, checkpoint
/// count, tolerances and costate convention.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "fpt/propagation.hpp"

namespace fpt::io {

std::uint64_t stm_cache_key(const ReferenceOrbit& orbit, std::size_t n_checkpoints,
                            const IntegratorConfig& cfg, CostateConvention convention);

std::filesystem::path stm_cache_file(const std::filesystem::path& dir, std::uint64_t key);

void save_stm_history(const std::filesystem::path& file, std::uint64_t key,
                      const StmHistory& history);

/// Returns nothing when the file is missing, truncated or has another key.
std::optional<StmHistory> load_stm_history(const std::filesystem::path& file, std::uint64_t key,
                                           const ReferenceOrbit& orbit,
                                           CostateConvention convention,
                                           const IntegratorConfig& cfg);

}  // namespace fpt::io
