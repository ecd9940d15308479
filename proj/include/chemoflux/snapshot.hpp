#pragma once

#include <filesystem>
#include <string>

#include "chemoflux/grid.hpp"

namespace chemoflux {

/// Metadata written next to every raw field dump.
struct SnapshotMeta {
  std::string field;
  double time = 0.0;
  DomainSpec spec;
};

/// Writes `<stem>.bin` (little-endian float64, row-major) and `<stem>.json`.
void write_snapshot(const std::filesystem::path& stem, const ScalarField& f,
                    const std::string& field_name, double time);

/// Reads a snapshot given either the .bin, the .json or the bare stem.
ScalarField read_snapshot(const std::filesystem::path& path, SnapshotMeta* meta = nullptr);

}  // namespace chemoflux
