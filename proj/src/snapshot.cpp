#include "chemoflux/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace chemoflux {
namespace {

using nlohmann::json;

std::filesystem::path stem_of(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  if (ext == ".bin" || ext == ".json") {
    auto s = p;
    return s.replace_extension();
  }
  return p;
}

void put_le(std::ostream& os, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char buf[8];
  for (int b = 0; b < 8; ++b) buf[b] = static_cast<unsigned char>(bits >> (8 * b));
  os.write(reinterpret_cast<const char*>(buf), 8);
}

double get_le(const unsigned char* buf) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[b]) << (8 * b);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_snapshot(const std::filesystem::path& stem, const ScalarField& f,
                    const std::string& field_name, double time) {
  const auto base = stem_of(stem);
  if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());

  auto bin_path = base;
  bin_path += ".bin";
  std::ofstream bin(bin_path, std::ios::binary);
  if (!bin) throw Error("cannot open " + bin_path.string() + " for writing");
  for (Eigen::Index i = 0; i < f.size(); ++i) put_le(bin, f[i]);

  const auto& spec = f.spec();
  json meta;
  meta["field"] = field_name;
  meta["time"] = time;
  meta["dim"] = spec.dim;
  meta["mode"] = to_string(spec.mode);
  meta["resolution"] = std::vector<int>(spec.resolution.begin(), spec.resolution.begin() + spec.dim);
  meta["lengths"] = std::vector<double>(spec.lengths.begin(), spec.lengths.begin() + spec.dim);
  meta["dtype"] = "float64-le";
  meta["order"] = "row-major";

  auto json_path = base;
  json_path += ".json";
  std::ofstream js(json_path);
  if (!js) throw Error("cannot open " + json_path.string() + " for writing");
  js << meta.dump(2) << '\n';
}

ScalarField read_snapshot(const std::filesystem::path& path, SnapshotMeta* meta_out) {
  const auto base = stem_of(path);
  auto json_path = base;
  json_path += ".json";
  auto bin_path = base;
  bin_path += ".bin";

  std::ifstream js(json_path);
  if (!js) throw Error("cannot open snapshot metadata " + json_path.string());
  json meta;
  try {
    js >> meta;
  } catch (const json::exception& e) {
    throw Error("malformed snapshot metadata " + json_path.string() + ": " + e.what());
  }

  DomainSpec spec;
  spec.dim = meta.at("dim").get<int>();
  if (spec.dim < 1 || spec.dim > 3) throw Error("snapshot dim out of range");
  spec.mode = meta.value("mode", std::string("periodic")) == "neumann" ? BoundaryMode::neumann
                                                                      : BoundaryMode::periodic;
  const auto res = meta.at("resolution").get<std::vector<int>>();
  const auto len = meta.at("lengths").get<std::vector<double>>();
  if (static_cast<int>(res.size()) != spec.dim || static_cast<int>(len.size()) != spec.dim)
    throw Error("snapshot resolution/lengths do not match dim");
  for (int a = 0; a < spec.dim; ++a) {
    spec.resolution[a] = res[a];
    spec.lengths[a] = len[a];
  }

  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw Error("cannot open snapshot data " + bin_path.string());
  ScalarField f(spec);
  unsigned char buf[8];
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (!bin.read(reinterpret_cast<char*>(buf), 8))
      throw Error("snapshot data truncated: " + bin_path.string());
    f[i] = get_le(buf);
  }

  if (meta_out) {
    meta_out->field = meta.value("field", std::string());
    meta_out->time = meta.value("time", 0.0);
    meta_out->spec = spec;
  }
  return f;
}

}  // namespace chemoflux
