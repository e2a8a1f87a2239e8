#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "phisim/grid.hpp"

// Trajectory files. A text header of "key value" lines closed by a line
// "end_header", then little-endian float64 data: every static field once,
// then one frame per record holding the time followed by every field. Field
// arrays use the grid's flat order (x fastest).
namespace phisim {

inline constexpr std::string_view kSnapshotMagic = "phisim-snapshot 1";
inline constexpr std::string_view kVersion = "0.1.0";

struct SnapshotHeader {
  std::string kind;
  Grid grid = Grid::line(4, 1.0);
  std::vector<std::string> fields;
  std::vector<std::string> static_fields;
  std::map<std::string, double> params;
  std::string scenario_hash;
  double dt = 0.0;
  std::string version{kVersion};
  std::size_t frames = 0;

  double param(const std::string& name) const;
};

class SnapshotWriter {
 public:
  /// Writes the header and the static block. statics follow header.static_fields.
  SnapshotWriter(const std::filesystem::path& path, SnapshotHeader header,
                 const std::vector<Eigen::ArrayXd>& statics);
  ~SnapshotWriter();
  SnapshotWriter(const SnapshotWriter&) = delete;
  SnapshotWriter& operator=(const SnapshotWriter&) = delete;

  /// data follows header.fields.
  void write_frame(double t, const std::vector<const Eigen::ArrayXd*>& data);
  /// Patches the frame count into the header. Called by the destructor too.
  void close();

  std::size_t frames() const { return header_.frames; }

 private:
  void write_array(const Eigen::ArrayXd& a);

  std::filesystem::path path_;
  SnapshotHeader header_;
  std::ofstream out_;
  std::streamoff frames_offset_ = 0;
  bool closed_ = false;
};

struct Snapshot {
  SnapshotHeader header;
  std::map<std::string, Eigen::ArrayXd> statics;
  std::vector<double> times;
  std::vector<std::vector<Eigen::ArrayXd>> frames;  // [frame][field]

  std::size_t field_index(std::string_view name) const;
  const Eigen::ArrayXd& field(std::size_t frame, std::string_view name) const;
  const Eigen::ArrayXd& static_field(std::string_view name) const;
};

Snapshot read_snapshot(const std::filesystem::path& path);

/// One CSV row per (frame, grid point): frame, t, x[, y, z], then the fields.
void dump_csv(const Snapshot& s, std::ostream& out);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

/// %.17g.
std::string format_double(double v);

}  // namespace phisim
