// Binary state snapshots. Fixed little-endian layout independent of the host:
// 8-byte magic, format version, a dimension header binding the state to its
// basis geometry, then the raw m / b / e coefficient blocks. Saving and
// loading round-trips bit exactly.
#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "spinwell/dynamics.hpp"

namespace spinwell {

// Header contents, readable without a basis in hand.
struct SnapshotInfo {
    std::array<int, 3> modes{};
    std::array<int, 3> bands{};
    std::array<int, 3> quad_nodes{};
    std::array<double, 3> box{};
    std::array<double, 3> torus{};
    double time = 0;
    std::size_t m_count = 0; // doubles in the magnetization block
    std::size_t y_count = 0; // doubles in each torus block
};

void save_snapshot(const std::string& path, const SpectralBases& sb,
                   const GalerkinState& s);

// Checks magic, version, geometry against sb, and exact payload length;
// errors say which of those failed. Throws ConfigError.
GalerkinState load_snapshot(const std::string& path, const SpectralBases& sb);

SnapshotInfo read_snapshot_info(const std::string& path);

} // namespace spinwell
