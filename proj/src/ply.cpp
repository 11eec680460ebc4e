// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#include "pccolor/ply.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pccolor/error.hpp"

namespace pccolor {

namespace {

enum class ScalarType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

std::optional<ScalarType> parse_scalar_type(std::string_view name) {
  if (name == "char" || name == "int8") return ScalarType::Int8;
  if (name == "uchar" || name == "uint8") return ScalarType::UInt8;
  if (name == "short" || name == "int16") return ScalarType::Int16;
  if (name == "ushort" || name == "uint16") return ScalarType::UInt16;
  if (name == "int" || name == "int32") return ScalarType::Int32;
  if (name == "uint" || name == "uint32") return ScalarType::UInt32;
  if (name == "float" || name == "float32") return ScalarType::Float32;
  if (name == "double" || name == "float64") return ScalarType::Float64;
  return std::nullopt;
}

std::size_t scalar_size(ScalarType t) {
  switch (t) {
    case ScalarType::Int8:
    case ScalarType::UInt8:
      return 1;
    case ScalarType::Int16:
    case ScalarType::UInt16:
      return 2;
    case ScalarType::Int32:
    case ScalarType::UInt32:
    case ScalarType::Float32:
      return 4;
    case ScalarType::Float64:
      return 8;
  }
  return 0;
}

struct Property {
  std::string name;
  ScalarType type = ScalarType::Float32;
  bool is_list = false;
  ScalarType count_type = ScalarType::UInt8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

struct Header {
  PlyFormat format = PlyFormat::Ascii;
  std::vector<Element> elements;
};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

Header parse_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_ws(line) != std::vector<std::string_view>{"ply"}) {
    throw Error(ErrorCode::MalformedHeader, "missing 'ply' magic");
  }
  Header header;
  bool have_format = false;
  while (true) {
    if (!std::getline(in, line)) throw Error(ErrorCode::MalformedHeader, "missing end_header");
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() != 3) throw Error(ErrorCode::MalformedHeader, "bad format line");
      if (tok[2] != "1.0") throw Error(ErrorCode::UnsupportedFormat, "PLY version " + std::string(tok[2]));
      if (tok[1] == "ascii") {
        header.format = PlyFormat::Ascii;
      } else if (tok[1] == "binary_little_endian") {
        header.format = PlyFormat::BinaryLittleEndian;
      } else if (tok[1] == "binary_big_endian") {
        throw Error(ErrorCode::UnsupportedFormat, "binary_big_endian is not supported");
      } else {
        throw Error(ErrorCode::MalformedHeader, "unknown format " + std::string(tok[1]));
      }
      have_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw Error(ErrorCode::MalformedHeader, "bad element line");
      Element e;
      e.name = std::string(tok[1]);
      const auto [ptr, ec] = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), e.count);
      if (ec != std::errc{} || ptr != tok[2].data() + tok[2].size()) {
        throw Error(ErrorCode::MalformedHeader, "bad element count");
      }
      header.elements.push_back(std::move(e));
    } else if (tok[0] == "property") {
      if (header.elements.empty()) throw Error(ErrorCode::MalformedHeader, "property before element");
      Property p;
      if (tok.size() == 5 && tok[1] == "list") {
        const auto ct = parse_scalar_type(tok[2]);
        const auto vt = parse_scalar_type(tok[3]);
        if (!ct || !vt) throw Error(ErrorCode::MalformedHeader, "bad list property type");
        p.is_list = true;
        p.count_type = *ct;
        p.type = *vt;
        p.name = std::string(tok[4]);
      } else if (tok.size() == 3) {
        const auto t = parse_scalar_type(tok[1]);
        if (!t) throw Error(ErrorCode::MalformedHeader, "bad property type " + std::string(tok[1]));
        p.type = *t;
        p.name = std::string(tok[2]);
      } else {
        throw Error(ErrorCode::MalformedHeader, "bad property line");
      }
      header.elements.back().properties.push_back(std::move(p));
    } else {
      throw Error(ErrorCode::MalformedHeader, "unexpected header keyword " + std::string(tok[0]));
    }
  }
  if (!have_format) throw Error(ErrorCode::MalformedHeader, "missing format line");
  return header;
}

// Slots 0..2 are x y z, 3..5 are red green blue.
struct VertexLayout {
  std::array<int, 6> slot{-1, -1, -1, -1, -1, -1};
};

VertexLayout locate_vertex_properties(const Element& vertex) {
  static constexpr std::array<std::string_view, 6> kNames{"x", "y", "z", "red", "green", "blue"};
  VertexLayout layout;
  for (std::size_t i = 0; i < vertex.properties.size(); ++i) {
    const Property& p = vertex.properties[i];
    for (std::size_t s = 0; s < kNames.size(); ++s) {
      if (p.name != kNames[s]) continue;
      const bool position = s < 3;
      const bool type_ok = !p.is_list && (position ? (p.type == ScalarType::Float32 || p.type == ScalarType::Float64)
                                                   : p.type == ScalarType::UInt8);
      if (!type_ok) {
        throw Error(ErrorCode::MissingProperty,
                    "property '" + p.name + (position ? "' must be float or double" : "' must be uchar"));
      }
      layout.slot[s] = static_cast<int>(i);
    }
  }
  for (std::size_t s = 0; s < kNames.size(); ++s) {
    if (layout.slot[s] < 0) throw Error(ErrorCode::MissingProperty, "vertex has no '" + std::string(kNames[s]) + "'");
  }
  return layout;
}

template <typename T>
T load_le(const unsigned char* p) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T v;
  std::memcpy(&v, bytes.data(), sizeof(T));
  return v;
}

template <typename T>
void store_le(std::string& out, T v) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.append(bytes.data(), bytes.size());
}

double load_scalar(ScalarType t, const unsigned char* p) {
  switch (t) {
    case ScalarType::Int8: return static_cast<double>(static_cast<std::int8_t>(p[0]));
    case ScalarType::UInt8: return static_cast<double>(p[0]);
    case ScalarType::Int16: return static_cast<double>(load_le<std::int16_t>(p));
    case ScalarType::UInt16: return static_cast<double>(load_le<std::uint16_t>(p));
    case ScalarType::Int32: return static_cast<double>(load_le<std::int32_t>(p));
    case ScalarType::UInt32: return static_cast<double>(load_le<std::uint32_t>(p));
    case ScalarType::Float32: return static_cast<double>(load_le<float>(p));
    case ScalarType::Float64: return load_le<double>(p);
  }
  return 0.0;
}

class BinaryCursor {
 public:
  explicit BinaryCursor(std::vector<unsigned char> data) : data_(std::move(data)) {}

  const unsigned char* take(std::size_t n) {
    if (data_.size() - pos_ < n) throw Error(ErrorCode::TruncatedBody, "binary body ends early");
    const unsigned char* p = data_.data() + pos_;
    pos_ += n;
    return p;
  }

 private:
  std::vector<unsigned char> data_;
  std::size_t pos_ = 0;
};

class AsciiCursor {
 public:
  explicit AsciiCursor(std::string text) : text_(std::move(text)) {}

  std::string_view next() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
    if (pos_ >= text_.size()) throw Error(ErrorCode::TruncatedBody, "ascii body ends early");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    return std::string_view(text_).substr(start, pos_ - start);
  }

  double next_double() {
    const auto tok = next();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw Error(ErrorCode::MalformedHeader, "bad numeric token '" + std::string(tok) + "'");
    }
    return v;
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

  std::string text_;
  std::size_t pos_ = 0;
};

std::uint8_t to_channel(double v) {
  if (!(v >= 0.0 && v <= 255.0) || v != std::floor(v)) {
    throw Error(ErrorCode::InvalidCloud, "color value out of range");
  }
  return static_cast<std::uint8_t>(v);
}

void finish_point(ColorPointCloud& cloud, const std::array<double, 6>& v) {
  const Vec3 p{v[0], v[1], v[2]};
  if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2])) {
    throw Error(ErrorCode::InvalidCloud, "non-finite coordinate");
  }
  cloud.add(p, Rgb{to_channel(v[3]), to_channel(v[4]), to_channel(v[5])});
}

ColorPointCloud read_body_ascii(const Header& header, std::istream& in) {
  AsciiCursor cur(std::string(std::istreambuf_iterator<char>(in), {}));
  ColorPointCloud cloud;
  for (const Element& e : header.elements) {
    const bool is_vertex = e.name == "vertex";
    VertexLayout layout;
    if (is_vertex) {
      layout = locate_vertex_properties(e);
      cloud.reserve(e.count);
    }
    for (std::size_t n = 0; n < e.count; ++n) {
      std::array<double, 6> v{};
      for (std::size_t i = 0; i < e.properties.size(); ++i) {
        const Property& p = e.properties[i];
        if (p.is_list) {
          const auto count = static_cast<std::size_t>(cur.next_double());
          for (std::size_t k = 0; k < count; ++k) cur.next();
          continue;
        }
        if (!is_vertex) {
          cur.next();
          continue;
        }
        const double value = cur.next_double();
        for (std::size_t s = 0; s < 6; ++s) {
          if (layout.slot[s] == static_cast<int>(i)) v[s] = value;
        }
      }
      if (is_vertex) finish_point(cloud, v);
    }
    if (is_vertex) return cloud;
  }
  throw Error(ErrorCode::MissingProperty, "no vertex element");
}

ColorPointCloud read_body_binary(const Header& header, std::istream& in) {
  BinaryCursor cur(std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {}));
  ColorPointCloud cloud;
  for (const Element& e : header.elements) {
    const bool is_vertex = e.name == "vertex";
    VertexLayout layout;
    if (is_vertex) {
      layout = locate_vertex_properties(e);
      cloud.reserve(e.count);
    }
    for (std::size_t n = 0; n < e.count; ++n) {
      std::array<double, 6> v{};
      for (std::size_t i = 0; i < e.properties.size(); ++i) {
        const Property& p = e.properties[i];
        if (p.is_list) {
          const auto count = static_cast<std::size_t>(load_scalar(p.count_type, cur.take(scalar_size(p.count_type))));
          cur.take(count * scalar_size(p.type));
          continue;
        }
        const unsigned char* bytes = cur.take(scalar_size(p.type));
        if (!is_vertex) continue;
        for (std::size_t s = 0; s < 6; ++s) {
          if (layout.slot[s] == static_cast<int>(i)) v[s] = load_scalar(p.type, bytes);
        }
      }
      if (is_vertex) finish_point(cloud, v);
    }
    if (is_vertex) return cloud;
  }
  throw Error(ErrorCode::MissingProperty, "no vertex element");
}

void append_double(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

ColorPointCloud read_ply(std::istream& in) {
  const Header header = parse_header(in);
  return header.format == PlyFormat::Ascii ? read_body_ascii(header, in) : read_body_binary(header, in);
}

ColorPointCloud read_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return read_ply(in);
}

void write_ply(const ColorPointCloud& cloud, std::ostream& out, PlyFormat format) {
  validate(cloud);
  std::string buf;
  buf += "ply\n";
  buf += format == PlyFormat::Ascii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n";
  buf += "element vertex " + std::to_string(cloud.size()) + "\n";
  buf +=
      "property double x\nproperty double y\nproperty double z\n"
      "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      "end_header\n";
  if (format == PlyFormat::Ascii) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const Vec3& p = cloud.positions[i];
      const Rgb& c = cloud.colors[i];
      append_double(buf, p[0]);
      buf += ' ';
      append_double(buf, p[1]);
      buf += ' ';
      append_double(buf, p[2]);
      buf += ' ' + std::to_string(c.r) + ' ' + std::to_string(c.g) + ' ' + std::to_string(c.b) + '\n';
    }
  } else {
    buf.reserve(buf.size() + cloud.size() * 27);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      for (double v : cloud.positions[i]) store_le(buf, v);
      const Rgb& c = cloud.colors[i];
      buf.push_back(static_cast<char>(c.r));
      buf.push_back(static_cast<char>(c.g));
      buf.push_back(static_cast<char>(c.b));
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "write failed");
}

void write_ply(const ColorPointCloud& cloud, const std::filesystem::path& path, PlyFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  write_ply(cloud, out, format);
  out.close();
  if (!out) throw Error(ErrorCode::IoFailure, "cannot finish writing " + path.string());
}

// --- rigid transforms ------------------------------------------------------

RigidTransform RigidTransform::translation(double tx, double ty, double tz) {
  RigidTransform t;
  t.m[3] = tx;
  t.m[7] = ty;
  t.m[11] = tz;
  return t;
}

RigidTransform RigidTransform::rotation_z(double radians) {
  RigidTransform t;
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  t.m[0] = c;
  t.m[1] = -s;
  t.m[4] = s;
  t.m[5] = c;
  return t;
}

Vec3 RigidTransform::apply(const Vec3& p) const noexcept {
  Vec3 out;
  for (int r = 0; r < 3; ++r) {
    out[static_cast<std::size_t>(r)] =
        (*this)(r, 0) * p[0] + (*this)(r, 1) * p[1] + (*this)(r, 2) * p[2] + (*this)(r, 3);
  }
  return out;
}

void validate(const RigidTransform& t) {
  constexpr double kTol = 1e-6;
  for (double v : t.m) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidTransform, "non-finite entry");
  }
  if (t(3, 0) != 0.0 || t(3, 1) != 0.0 || t(3, 2) != 0.0 || t(3, 3) != 1.0) {
    throw Error(ErrorCode::InvalidTransform, "bottom row must be (0, 0, 0, 1)");
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += t(k, i) * t(k, j);
      if (std::abs(dot - (i == j ? 1.0 : 0.0)) > kTol) {
        throw Error(ErrorCode::InvalidTransform, "rotation block is not orthonormal");
      }
    }
  }
  const double det = t(0, 0) * (t(1, 1) * t(2, 2) - t(1, 2) * t(2, 1)) -
                     t(0, 1) * (t(1, 0) * t(2, 2) - t(1, 2) * t(2, 0)) +
                     t(0, 2) * (t(1, 0) * t(2, 1) - t(1, 1) * t(2, 0));
  if (std::abs(det - 1.0) > kTol) throw Error(ErrorCode::InvalidTransform, "determinant is not +1 (reflection)");
}

ColorPointCloud apply_transform(const ColorPointCloud& cloud, const RigidTransform& t) {
  validate(t);
  ColorPointCloud out = cloud;
  for (Vec3& p : out.positions) p = t.apply(p);
  return out;
}

}  // namespace pccolor
