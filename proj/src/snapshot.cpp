#include "phisim/snapshot.hpp"

#include <bit>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace phisim {
namespace {

constexpr int kFrameDigits = 20;

void put_le(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int b = 0; b < 8; ++b) {
    bytes[b] = static_cast<char>(bits & 0xffu);
    bits >>= 8;
  }
  out.write(bytes, 8);
}

void get_le_array(std::istream& in, Eigen::ArrayXd& a, const std::filesystem::path& path) {
  std::vector<unsigned char> bytes(static_cast<std::size_t>(a.size()) * 8);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw InvalidArgument("snapshot " + path.string() + " is truncated");
  }
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | bytes[static_cast<std::size_t>(i) * 8 + b];
    a[i] = std::bit_cast<double>(bits);
  }
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw InvalidArgument("snapshot header: bad number '" + s + "' in " + what);
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double SnapshotHeader::param(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) throw InvalidArgument("snapshot has no parameter '" + name + "'");
  return it->second;
}

SnapshotWriter::SnapshotWriter(const std::filesystem::path& path, SnapshotHeader header,
                               const std::vector<Eigen::ArrayXd>& statics)
    : path_(path), header_(std::move(header)) {
  if (statics.size() != header_.static_fields.size()) {
    throw InvalidArgument("snapshot static block does not match its field list");
  }
  out_.open(path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw InvalidArgument("cannot open " + path_.string() + " for writing");
  const Grid& g = header_.grid;
  std::ostringstream h;
  h << kSnapshotMagic << '\n';
  h << "kind " << header_.kind << '\n';
  h << "dims " << g.dims() << '\n';
  h << "points " << g.points(0) << ' ' << g.points(1) << ' ' << g.points(2) << '\n';
  h << "length " << format_double(g.length(0)) << ' ' << format_double(g.length(1)) << ' '
    << format_double(g.length(2)) << '\n';
  h << "backend " << to_string(g.backend()) << '\n';
  h << "fields " << join(header_.fields) << '\n';
  h << "static_fields " << join(header_.static_fields) << '\n';
  h << "params";
  for (const auto& [k, v] : header_.params) h << ' ' << k << '=' << format_double(v);
  h << '\n';
  h << "scenario_hash " << header_.scenario_hash << '\n';
  h << "dt " << format_double(header_.dt) << '\n';
  h << "version " << header_.version << '\n';
  h << "frames ";
  const std::string text = h.str();
  out_ << text;
  frames_offset_ = static_cast<std::streamoff>(text.size());
  out_ << std::setw(kFrameDigits) << std::setfill('0') << 0 << '\n' << "end_header\n";
  header_.frames = 0;
  for (const auto& a : statics) {
    if (static_cast<std::size_t>(a.size()) != g.size()) {
      throw GridMismatch("static field size does not match the snapshot grid");
    }
    write_array(a);
  }
}

SnapshotWriter::~SnapshotWriter() {
  try {
    close();
  } catch (...) {
  }
}

void SnapshotWriter::write_array(const Eigen::ArrayXd& a) {
  for (Eigen::Index i = 0; i < a.size(); ++i) put_le(out_, a[i]);
}

void SnapshotWriter::write_frame(double t, const std::vector<const Eigen::ArrayXd*>& data) {
  if (closed_) throw InvalidArgument("snapshot writer already closed");
  if (data.size() != header_.fields.size()) {
    throw InvalidArgument("snapshot frame does not match its field list");
  }
  put_le(out_, t);
  for (const auto* a : data) {
    if (static_cast<std::size_t>(a->size()) != header_.grid.size()) {
      throw GridMismatch("frame field size does not match the snapshot grid");
    }
    write_array(*a);
  }
  ++header_.frames;
}

void SnapshotWriter::close() {
  if (closed_) return;
  closed_ = true;
  out_.seekp(frames_offset_);
  out_ << std::setw(kFrameDigits) << std::setfill('0') << header_.frames;
  out_.close();
  if (!out_) throw InvalidArgument("failed writing " + path_.string());
}

std::size_t Snapshot::field_index(std::string_view name) const {
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    if (header.fields[i] == name) return i;
  }
  throw InvalidArgument("snapshot has no field '" + std::string(name) + "'");
}

const Eigen::ArrayXd& Snapshot::field(std::size_t frame, std::string_view name) const {
  return frames.at(frame)[field_index(name)];
}

const Eigen::ArrayXd& Snapshot::static_field(std::string_view name) const {
  auto it = statics.find(std::string(name));
  if (it == statics.end()) {
    throw InvalidArgument("snapshot has no static field '" + std::string(name) + "'");
  }
  return it->second;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open snapshot " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != kSnapshotMagic) throw InvalidArgument(path.string() + " is not a phisim snapshot");

  Snapshot s;
  std::map<std::string, std::vector<std::string>> entries;
  bool ended = false;
  while (std::getline(in, line)) {
    if (line == "end_header") {
      ended = true;
      break;
    }
    auto words = split(line);
    if (words.empty()) continue;
    const std::string key = words.front();
    words.erase(words.begin());
    entries[key] = std::move(words);
  }
  if (!ended) throw InvalidArgument("snapshot " + path.string() + " has no end_header line");

  auto need = [&](const std::string& key, std::size_t count) -> const std::vector<std::string>& {
    auto it = entries.find(key);
    if (it == entries.end() || (count && it->second.size() != count)) {
      throw InvalidArgument("snapshot header: missing or malformed '" + key + "'");
    }
    return it->second;
  };
  const int dims = static_cast<int>(parse_double(need("dims", 1)[0], "dims"));
  const auto& pts = need("points", 3);
  const auto& len = need("length", 3);
  std::array<int, 3> points{};
  std::array<double, 3> lengths{};
  for (int a = 0; a < 3; ++a) {
    points[a] = static_cast<int>(parse_double(pts[a], "points"));
    lengths[a] = parse_double(len[a], "length");
  }
  s.header.grid = Grid(dims, points, lengths, parse_backend(need("backend", 1)[0]));
  s.header.kind = need("kind", 1)[0];
  s.header.fields = need("fields", 0);
  s.header.static_fields = entries.count("static_fields") ? entries["static_fields"]
                                                          : std::vector<std::string>{};
  for (const auto& kv : entries["params"]) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidArgument("snapshot header: bad param '" + kv + "'");
    s.header.params[kv.substr(0, eq)] = parse_double(kv.substr(eq + 1), "params");
  }
  s.header.scenario_hash = entries.count("scenario_hash") && !entries["scenario_hash"].empty()
                               ? entries["scenario_hash"][0]
                               : "";
  s.header.dt = parse_double(need("dt", 1)[0], "dt");
  s.header.version = need("version", 1)[0];
  s.header.frames = static_cast<std::size_t>(std::stoull(need("frames", 1)[0]));

  const auto n = static_cast<Eigen::Index>(s.header.grid.size());
  for (const auto& name : s.header.static_fields) {
    Eigen::ArrayXd a(n);
    get_le_array(in, a, path);
    s.statics.emplace(name, std::move(a));
  }
  s.times.reserve(s.header.frames);
  s.frames.reserve(s.header.frames);
  for (std::size_t f = 0; f < s.header.frames; ++f) {
    Eigen::ArrayXd t(1);
    get_le_array(in, t, path);
    s.times.push_back(t[0]);
    std::vector<Eigen::ArrayXd> frame;
    frame.reserve(s.header.fields.size());
    for (std::size_t k = 0; k < s.header.fields.size(); ++k) {
      Eigen::ArrayXd a(n);
      get_le_array(in, a, path);
      frame.push_back(std::move(a));
    }
    s.frames.push_back(std::move(frame));
  }
  return s;
}

void dump_csv(const Snapshot& s, std::ostream& out) {
  static const char* kAxis[3] = {"x", "y", "z"};
  const Grid& g = s.header.grid;
  out << "frame,t";
  for (int a = 0; a < g.dims(); ++a) out << ',' << kAxis[a];
  for (const auto& f : s.header.fields) out << ',' << f;
  out << '\n';
  for (std::size_t f = 0; f < s.frames.size(); ++f) {
    for (std::size_t p = 0; p < g.size(); ++p) {
      const auto idx = g.unflatten(p);
      out << f << ',' << format_double(s.times[f]);
      for (int a = 0; a < g.dims(); ++a) out << ',' << format_double(g.coordinate(a, idx[a]));
      for (const auto& field : s.frames[f]) {
        out << ',' << format_double(field[static_cast<Eigen::Index>(p)]);
      }
      out << '\n';
    }
  }
}

}  // namespace phisim
