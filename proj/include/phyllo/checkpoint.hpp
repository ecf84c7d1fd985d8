#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "phyllo/dynamics.hpp"

namespace phyllo {

/// Restartable state.  The binary layout is little-endian throughout:
///
///   "PHYLCKPT"                       8 bytes
///   u32 version, u32 geometry
///   f64 r_min, r_max; u64 n_r, n_theta
///   f64 mu, beta, dt, solver_tol; i64 max_iter
///   f64 t; u64 step; u64 payload_bytes
///   u32 crc32 of all header bytes above
///   f64 × n_theta                    ghost ring
///   f64 × n_r·n_theta                field, ring-major
///   u32 crc32 of ghost ring and field
struct Checkpoint {
    static constexpr std::uint32_t version = 1;

    ModelParams params;
    double t = 0.0;
    std::uint64_t step = 0;
    ScalarField field;
};

std::string encode_checkpoint(const Checkpoint& c);
/// Throws CorruptCheckpoint on truncation, bad magic/version or checksum.
Checkpoint decode_checkpoint(const std::string& bytes);

/// Atomic write; IoError on failure.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
/// IoError when unreadable, CorruptCheckpoint when malformed.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace phyllo
